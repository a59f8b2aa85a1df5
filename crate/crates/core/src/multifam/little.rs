use super::{cross_exponent, for_each_tuple, suffix_sums, MultiIndex, ParamVector};
use crate::error::{QError, Result};
use crate::families::PolyRep;
use crate::qcore::dd::compensated_sum;
use crate::qcore::{phi_series, qpoch_finite, QContext};

const POLE_TOL: f64 = 1e-12;

pub(crate) fn checked_div(num: f64, den: f64, what: &str) -> Result<f64> {
    if den.abs() < POLE_TOL {
        return Err(QError::Domain(format!("{what} vanishes")));
    }
    Ok(num / den)
}

/// Collects tuple terms by total degree and sums each group with compensation.
pub(crate) struct DegreeBins(Vec<Vec<f64>>);

impl DegreeBins {
    pub(crate) fn new(size: usize) -> Self {
        DegreeBins(vec![Vec::new(); size + 1])
    }

    pub(crate) fn push(&mut self, degree: usize, term: f64) {
        self.0[degree].push(term);
    }

    pub(crate) fn finish(self) -> Vec<f64> {
        self.0.into_iter().map(compensated_sum).collect()
    }
}

/// Monomial coefficients of the multiple little q-Laguerre sum
/// `Σ_k ∏_j (q^{-n_j};q)_{k_j} / ((q;q)_{k_j} (a_j q;q)_{k_j})
///   · ∏_{j<r} (a_j q^{n_j+1};q)_{K_{j+1}} / (a_j q^{k_j+1};q)_{K_{j+1}}
///   · (qx)^{|k|} q^{-Σ_j n_j K_{j+1}}`,
/// with `K_{j+1} = k_{j+1} + … + k_r`. No parameter checks.
pub(crate) fn mqlag_coeffs(n: &[usize], a: &[f64], q: f64) -> Result<Vec<f64>> {
    let r = n.len();
    let mut bins = DegreeBins::new(n.iter().sum());
    for_each_tuple(n, |k| {
        let tails = suffix_sums(k);
        let mut t = 1.0;
        for j in 0..r {
            let num = qpoch_finite(q.powi(-(n[j] as i32)), k[j], q);
            let den = qpoch_finite(q, k[j], q) * qpoch_finite(a[j] * q, k[j], q);
            t *= checked_div(num, den, "(a_j q;q)_k")?;
        }
        for j in 0..r.saturating_sub(1) {
            let kk = tails[j + 1];
            let num = qpoch_finite(a[j] * q.powi(n[j] as i32 + 1), kk, q);
            let den = qpoch_finite(a[j] * q.powi(k[j] as i32 + 1), kk, q);
            t *= checked_div(num, den, "(a_j q^{k_j+1};q)_K")?;
        }
        t *= q.powi(tails[0] as i32 - cross_exponent(n, &tails) as i32);
        bins.push(tails[0], t);
        Ok(())
    })?;
    Ok(bins.finish())
}

/// Monomial coefficients of the multiple little q-Jacobi sum
/// `Σ_k ∏_j (q^{-n_j};q)_{k_j} (a_j b q^{N_j+1};q)_{S_j} / ((q;q)_{k_j} (a_j q;q)_{S_j})
///   · ∏_{j<r} (a_j q^{n_j+1};q)_{K_{j+1}} / (a_j b q^{N_j+1};q)_{K_{j+1}}
///   · (qx)^{|k|} q^{-Σ_j n_j K_{j+1}}`,
/// with `N_j = n_1 + … + n_j` and `S_j = k_j + … + k_r`. No parameter checks.
pub(crate) fn mqjac_coeffs(n: &[usize], a: &[f64], b: f64, q: f64) -> Result<Vec<f64>> {
    let r = n.len();
    let mut bins = DegreeBins::new(n.iter().sum());
    for_each_tuple(n, |k| {
        let tails = suffix_sums(k);
        let mut t = 1.0;
        let mut nj_cum = 0;
        for j in 0..r {
            nj_cum += n[j];
            let top = a[j] * b * q.powi(nj_cum as i32 + 1);
            let num = qpoch_finite(q.powi(-(n[j] as i32)), k[j], q) * qpoch_finite(top, tails[j], q);
            let den = qpoch_finite(q, k[j], q) * qpoch_finite(a[j] * q, tails[j], q);
            t *= checked_div(num, den, "(a_j q;q)_S")?;
            if j + 1 < r {
                let kk = tails[j + 1];
                let num = qpoch_finite(a[j] * q.powi(n[j] as i32 + 1), kk, q);
                t *= checked_div(num, qpoch_finite(top, kk, q), "(a_j b q^{N_j+1};q)_K")?;
            }
        }
        t *= q.powi(tails[0] as i32 - cross_exponent(n, &tails) as i32);
        bins.push(tails[0], t);
        Ok(())
    })?;
    Ok(bins.finish())
}

fn check_lattice(av: &ParamVector, q: f64) -> Result<()> {
    if let Some(a) = av.a().iter().find(|a| !(**a * q < 1.0)) {
        return Err(QError::InvalidParameter(format!("need 0 < a_j q < 1, got a_j = {a}")));
    }
    Ok(())
}

/// Multiple little q-Laguerre polynomial in the monomial basis, normalized to
/// `1` at `x = 0`.
pub fn m_little_qlaguerre(nvec: &MultiIndex, av: &ParamVector, ctx: &QContext) -> Result<PolyRep> {
    av.check_len(nvec)?;
    check_lattice(av, ctx.q())?;
    PolyRep::monomial(mqlag_coeffs(nvec.entries(), av.a(), ctx.q())?)
}

/// Multiple little q-Jacobi polynomial (first kind) in the monomial basis,
/// normalized to `1` at `x = 0`.
pub fn m_little_qjacobi(nvec: &MultiIndex, av: &ParamVector, b: f64, ctx: &QContext) -> Result<PolyRep> {
    av.check_len(nvec)?;
    check_lattice(av, ctx.q())?;
    if !(b * ctx.q() < 1.0) {
        return Err(QError::InvalidParameter(format!("need bq < 1, got b = {b}")));
    }
    PolyRep::monomial(mqjac_coeffs(nvec.entries(), av.a(), b, ctx.q())?)
}

/// Two evaluations of the same quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiForm {
    pub lhs: f64,
    pub rhs: f64,
}

/// `(x;q)_∞`, truncated where `|x| q^j < eps_trunc`.
fn qpoch_inf_at(x: f64, ctx: &QContext) -> f64 {
    let mut prod = 1.0;
    let mut t = x;
    while t.abs() >= ctx.eps_trunc {
        prod *= 1.0 - t;
        t *= ctx.q();
    }
    prod
}

/// Compares the finite sum with the hypergeometric form of the same polynomial.
///
/// For `b ≠ 0`:
/// `(qx;q)_∞ / (bqx;q)_∞ · q_n(x; a, b) = r+1φr(q^{-|n|}/b, a_j q^{n_j+1}; a_j q; q, bqx)`.
/// For `b = 0` the little q-Laguerre form is used instead:
/// `(qx;q)_∞ · q_n(x; a) = rφr(a_j q^{n_j+1}; a_j q; q, q^{1-|n|} x)`.
pub fn phi_form_check(nvec: &MultiIndex, av: &ParamVector, b: f64, x: f64, ctx: &QContext) -> Result<PhiForm> {
    let q = ctx.q();
    let n = nvec.entries();
    let upper_a: Vec<f64> = av.a().iter().zip(n).map(|(a, &nj)| a * q.powi(nj as i32 + 1)).collect();
    let lower: Vec<f64> = av.scaled(q);
    let size = nvec.size() as i32;
    if b == 0.0 {
        let p = m_little_qlaguerre(nvec, av, ctx)?;
        let lhs = qpoch_inf_at(q * x, ctx) * p.eval(x, ctx);
        let rhs = phi_series(&upper_a, &lower, q.powi(1 - size) * x, ctx)?.value;
        return Ok(PhiForm { lhs, rhs });
    }
    let p = m_little_qjacobi(nvec, av, b, ctx)?;
    let lhs = qpoch_inf_at(q * x, ctx) / qpoch_inf_at(b * q * x, ctx) * p.eval(x, ctx);
    let mut upper = vec![q.powi(-size) / b];
    upper.extend(upper_a);
    let rhs = phi_series(&upper, &lower, b * q * x, ctx)?.value;
    Ok(PhiForm { lhs, rhs })
}
