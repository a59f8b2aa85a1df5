use crate::error::{QError, Result};
use crate::qcore::dd::Accumulator;
use crate::qcore::{qpoch_inf, QContext, SeriesValue};

/// Discrete measure on the q-lattice `{q^n}` with masses
/// `normalization · a^n (b;q)_n / (q;q)_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteMeasure {
    pub a: f64,
    pub b_extra: Option<f64>,
    pub normalization: f64,
}

impl DiscreteMeasure {
    /// Measure with the usual `1/(q;q)_∞` normalization.
    pub fn new(a: f64, b_extra: Option<f64>, ctx: &QContext) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(QError::InvalidParameter(format!(
                "discrete measure needs 0 < a < 1, got {a}"
            )));
        }
        if let Some(b) = b_extra {
            if !(b < 1.0) {
                return Err(QError::InvalidParameter(format!(
                    "discrete measure needs b < 1, got {b}"
                )));
            }
        }
        Ok(DiscreteMeasure {
            a,
            b_extra,
            normalization: 1.0 / qpoch_inf(ctx.q(), ctx)?,
        })
    }

    pub fn with_normalization(mut self, normalization: f64) -> Self {
        self.normalization = normalization;
        self
    }
}

/// `normalization · Σ_n f(q^n) g(q^n) a^n (b;q)_n / (q;q)_n`.
///
/// The masses decay geometrically with ratio at most
/// `a (1 + |b| q^{n+1}) / (1 - q^{n+2})`; summation stops once that tail, scaled
/// by `max(|fg(q^n)|, |fg(0)|)`, falls below `eps_trunc` times the running sum
/// of absolute terms.
pub fn discrete_inner<F, G>(f: F, g: G, m: &DiscreteMeasure, ctx: &QContext) -> Result<SeriesValue>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let q = ctx.q();
    let b = m.b_extra.unwrap_or(0.0);
    let fg0 = (f(0.0) * g(0.0)).abs();
    let mut acc = Accumulator::new(ctx.precision);
    let mut abs_acc = Accumulator::new(ctx.precision);
    let mut mass = 1.0;
    let mut qn = 1.0;
    for n in 0..ctx.max_terms {
        let fg = f(qn) * g(qn);
        let term = fg * mass;
        acc.add(term);
        abs_acc.add(term.abs());

        mass *= m.a * (1.0 - b * qn) / (1.0 - qn * q);
        qn *= q;
        let rho = m.a * (1.0 + b.abs() * qn) / (1.0 - qn * q);
        if rho < 1.0 {
            let tail = mass.abs() * fg.abs().max(fg0) / (1.0 - rho);
            let scale = abs_acc.value().max(acc.value().abs());
            if tail <= ctx.eps_trunc * scale || scale == 0.0 && tail == 0.0 {
                return Ok(SeriesValue {
                    value: m.normalization * acc.value(),
                    trunc_bound: m.normalization.abs() * tail,
                    terms_used: n + 1,
                });
            }
        }
    }
    Err(QError::TruncationFailure {
        partial: m.normalization * acc.value(),
        terms: ctx.max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{qpoch, PochOrder};

    fn ctx() -> QContext {
        QContext::new(0.5).unwrap()
    }

    #[test]
    fn unit_functions_give_q_binomial_closed_form() {
        let c = ctx();
        let m = DiscreteMeasure::new(0.25, None, &c).unwrap();
        let got = discrete_inner(|_| 1.0, |_| 1.0, &m, &c).unwrap();
        let expect = 1.0 / (qpoch_inf(0.5, &c).unwrap() * qpoch_inf(0.25, &c).unwrap());
        assert!((got.value - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn zero_function_gives_zero() {
        let c = ctx();
        let m = DiscreteMeasure::new(0.25, None, &c).unwrap();
        let got = discrete_inner(|_| 1.0, |_| 0.0, &m, &c).unwrap();
        assert_eq!(got.value, 0.0);
    }

    #[test]
    fn monomial_moments_match_closed_form() {
        let c = ctx();
        let ab = 0.06;
        let m = DiscreteMeasure::new(ab, None, &c).unwrap();
        let base = qpoch_inf(0.5, &c).unwrap() * qpoch_inf(ab, &c).unwrap();
        for n in 0..8 {
            let got = discrete_inner(|x| x.powi(n), |_| 1.0, &m, &c).unwrap();
            let expect = qpoch(ab, PochOrder::Finite(n as i64), &c).unwrap().value / base;
            assert!((got.value - expect).abs() < 1e-10 * expect);
        }
    }

    #[test]
    fn rejects_bad_measures() {
        let c = ctx();
        assert!(DiscreteMeasure::new(0.0, None, &c).is_err());
        assert!(DiscreteMeasure::new(1.0, None, &c).is_err());
        assert!(DiscreteMeasure::new(0.3, Some(1.0), &c).is_err());
    }
}
