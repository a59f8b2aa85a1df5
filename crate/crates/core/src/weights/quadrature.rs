use std::f64::consts::PI;

use super::{eval_weight, ContinuousWeight, EvalPoint};
use crate::error::{QError, Result};
use crate::qcore::dd::Accumulator;
use crate::qcore::{Precision, QContext, SeriesValue};

pub const MIN_QUADRATURE_NODES: usize = 64;
pub const MAX_QUADRATURE_NODES: usize = 1 << 16;

/// `(1/2π) ∫_0^π f(cos θ) w(θ) dθ` by the composite trapezoid rule in `θ`.
///
/// The integrand extends to a smooth even `2π`-periodic function that vanishes
/// at `0` and `π`, so only interior nodes contribute and node doubling reuses
/// every previous evaluation. Refinement stops once successive values differ
/// by less than `quad_tol` relative to the integral of `|f| w`.
pub fn integrate_weighted<F>(f: F, w: &ContinuousWeight, ctx: &QContext) -> Result<SeriesValue>
where
    F: Fn(EvalPoint) -> f64,
{
    let g = |theta: f64| -> (f64, f64) {
        let pt = EvalPoint::from_theta(theta).expect("node inside [0, π]");
        let wv = eval_weight(w, pt, ctx);
        let v = f(pt) * wv;
        (v, v.abs())
    };

    let mut m = MIN_QUADRATURE_NODES;
    let mut sum = Accumulator::new(Precision::Standard);
    let mut abs_sum = Accumulator::new(Precision::Standard);
    for i in 1..m {
        let (v, a) = g(PI * i as f64 / m as f64);
        sum.add(v);
        abs_sum.add(a);
    }
    let mut estimate = sum.value() * PI / m as f64;
    loop {
        let m2 = 2 * m;
        for i in (1..m2).step_by(2) {
            let (v, a) = g(PI * i as f64 / m2 as f64);
            sum.add(v);
            abs_sum.add(a);
        }
        let refined = sum.value() * PI / m2 as f64;
        let scale = (abs_sum.value() * PI / m2 as f64).max(refined.abs());
        let delta = (refined - estimate).abs();
        if delta <= ctx.quad_tol * scale {
            return Ok(SeriesValue {
                value: refined / (2.0 * PI),
                trunc_bound: delta / (2.0 * PI),
                terms_used: m2 - 1,
            });
        }
        if m2 >= MAX_QUADRATURE_NODES {
            return Err(QError::QuadratureFailure {
                best: refined / (2.0 * PI),
                delta: delta / (2.0 * PI),
                nodes: m2,
            });
        }
        estimate = refined;
        m = m2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::qpoch_inf;
    use crate::weights::total_mass;

    #[test]
    fn al_salam_chihara_total_mass() {
        let c = QContext::new(0.5).unwrap();
        let w = ContinuousWeight::new(&[0.3, 0.2]).unwrap();
        let got = integrate_weighted(|_| 1.0, &w, &c).unwrap();
        let expect = 1.0 / (qpoch_inf(0.5, &c).unwrap() * qpoch_inf(0.06, &c).unwrap());
        assert!((got.value - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn askey_wilson_total_mass() {
        let c = QContext::new(0.5).unwrap();
        let w = ContinuousWeight::new(&[0.3, 0.2, 0.1, 0.4]).unwrap();
        let got = integrate_weighted(|_| 1.0, &w, &c).unwrap();
        let expect = total_mass(&w, &c).unwrap();
        assert!((got.value - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn odd_integrand_against_even_weight_vanishes() {
        let c = QContext::new(0.5).unwrap();
        let w = ContinuousWeight::new(&[]).unwrap();
        let got = integrate_weighted(|pt| pt.x(), &w, &c).unwrap();
        assert!(got.value.abs() < 1e-15);
    }

    #[test]
    fn hermite_mass_is_inverse_q_infinity() {
        // (1/2π)∫ (e^{±2iθ};q)_∞ dθ = 1/(q;q)_∞
        let c = QContext::new(0.3).unwrap();
        let w = ContinuousWeight::new(&[]).unwrap();
        let got = integrate_weighted(|_| 1.0, &w, &c).unwrap();
        let expect = 1.0 / qpoch_inf(0.3, &c).unwrap();
        assert!((got.value - expect).abs() < 1e-13 * expect);
    }
}
