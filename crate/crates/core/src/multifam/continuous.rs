use super::little::{checked_div, mqjac_coeffs, mqlag_coeffs, DegreeBins};
use super::{cross_exponent, for_each_tuple, suffix_sums, MultiIndex, ParamVector};
use crate::error::{QError, Result};
use crate::families::PolyRep;
use crate::qcore::dd::compensated_sum;
use crate::qcore::{qpoch_finite, QContext};
use crate::transforms::{apply_exact, TransformSpec};
use crate::weights::{eval_Ak, EvalPoint};

fn check_params(av: &ParamVector, shared: &[(&str, f64)]) -> Result<()> {
    if let Some(a) = av.a().iter().find(|a| !(**a < 1.0)) {
        return Err(QError::InvalidParameter(format!("need 0 < a_j < 1, got a_j = {a}")));
    }
    for &(name, v) in shared {
        if !(v.abs() < 1.0) {
            return Err(QError::InvalidParameter(format!("need |{name}| < 1, got {name} = {v}")));
        }
    }
    Ok(())
}

/// Coefficients, grouped by `s = |k|`, of
/// `Σ_k ∏_j (q^{-n_j};q)_{k_j} / ((q;q)_{k_j} (a_j b;q)_{k_j})
///   · ∏_{j<r} (a_j b q^{n_j};q)_{K_{j+1}} / (a_j b q^{k_j};q)_{K_{j+1}}
///   · q^{|k| - Σ_j n_j K_{j+1}}`.
fn asc_coeffs(n: &[usize], a: &[f64], b: f64, q: f64) -> Result<Vec<f64>> {
    let r = n.len();
    let mut bins = DegreeBins::new(n.iter().sum());
    for_each_tuple(n, |k| {
        let tails = suffix_sums(k);
        let mut t = 1.0;
        for j in 0..r {
            let ab = a[j] * b;
            let num = qpoch_finite(q.powi(-(n[j] as i32)), k[j], q);
            t *= checked_div(num, qpoch_finite(q, k[j], q) * qpoch_finite(ab, k[j], q), "(a_j b;q)_k")?;
            if j + 1 < r {
                let kk = tails[j + 1];
                let num = qpoch_finite(ab * q.powi(n[j] as i32), kk, q);
                t *= checked_div(num, qpoch_finite(ab * q.powi(k[j] as i32), kk, q), "(a_j b q^{k_j};q)_K")?;
            }
        }
        t *= q.powi(tails[0] as i32 - cross_exponent(n, &tails) as i32);
        bins.push(tails[0], t);
        Ok(())
    })?;
    Ok(bins.finish())
}

/// Coefficients, grouped by `s = |k|`, of
/// `Σ_k ∏_j (q^{-n_j};q)_{k_j} (a_j bcd q^{N_j-1};q)_{S_j} / ((q;q)_{k_j} (a_j b;q)_{S_j})
///   · ∏_{j<r} (a_j b q^{n_j};q)_{K_{j+1}} / (a_j bcd q^{N_j-1};q)_{K_{j+1}}
///   · q^{|k| - Σ_j n_j K_{j+1}}`.
fn aw_coeffs(n: &[usize], a: &[f64], b: f64, c: f64, d: f64, q: f64) -> Result<Vec<f64>> {
    let r = n.len();
    let mut bins = DegreeBins::new(n.iter().sum());
    for_each_tuple(n, |k| {
        let tails = suffix_sums(k);
        let mut t = 1.0;
        let mut cum = 0;
        for j in 0..r {
            cum += n[j];
            let ab = a[j] * b;
            let top = ab * c * d * q.powi(cum as i32 - 1);
            let num = qpoch_finite(q.powi(-(n[j] as i32)), k[j], q) * qpoch_finite(top, tails[j], q);
            let den = qpoch_finite(q, k[j], q) * qpoch_finite(ab, tails[j], q);
            t *= checked_div(num, den, "(a_j b;q)_S")?;
            if j + 1 < r {
                let kk = tails[j + 1];
                let num = qpoch_finite(ab * q.powi(n[j] as i32), kk, q);
                t *= checked_div(num, qpoch_finite(top, kk, q), "(a_j bcd q^{N_j-1};q)_K")?;
            }
        }
        t *= q.powi(tails[0] as i32 - cross_exponent(n, &tails) as i32);
        bins.push(tails[0], t);
        Ok(())
    })?;
    Ok(bins.finish())
}

/// `Σ_s coeffs_s (b e^{iθ}, b e^{-iθ};q)_s / ∏_c (bc;q)_s`, term by term.
fn eval_lifted(coeffs: &[f64], b: f64, norms: &[f64], pt: EvalPoint, ctx: &QContext) -> f64 {
    let q = ctx.q();
    compensated_sum(coeffs.iter().enumerate().map(|(s, &cs)| {
        let den: f64 = norms.iter().map(|&c| qpoch_finite(b * c, s, q)).product();
        cs * eval_Ak(b, s, pt, ctx) / den
    }))
}

/// Multiple Al-Salam–Chihara polynomial for the weights `w(θ; a_j, b)`, from
/// its explicit multiple sum.
pub fn m_asc(nvec: &MultiIndex, av: &ParamVector, b: f64, pt: EvalPoint, ctx: &QContext) -> Result<f64> {
    let coeffs = m_asc_poly(nvec, av, b, ctx)?;
    Ok(eval_lifted(coeffs.coeffs(), b, &[], pt, ctx))
}

/// Multiple continuous dual q-Hahn polynomial for the weights `w(θ; a_j, b, c)`.
pub fn m_cdqh(nvec: &MultiIndex, av: &ParamVector, b: f64, c: f64, pt: EvalPoint, ctx: &QContext) -> Result<f64> {
    let coeffs = m_cdqh_poly(nvec, av, b, c, ctx)?;
    Ok(eval_lifted(coeffs.coeffs(), b, &[c], pt, ctx))
}

/// Multiple Askey–Wilson polynomial for the weights `w(θ; a_j, b, c, d)`.
#[allow(clippy::too_many_arguments)]
pub fn m_aw(
    nvec: &MultiIndex,
    av: &ParamVector,
    b: f64,
    c: f64,
    d: f64,
    pt: EvalPoint,
    ctx: &QContext,
) -> Result<f64> {
    let coeffs = m_aw_poly(nvec, av, b, c, d, ctx)?;
    Ok(eval_lifted(coeffs.coeffs(), b, &[c, d], pt, ctx))
}

/// The multiple sum of [`m_asc`] as a polynomial over the anchor-`b` basis.
pub fn m_asc_poly(nvec: &MultiIndex, av: &ParamVector, b: f64, ctx: &QContext) -> Result<PolyRep> {
    av.check_len(nvec)?;
    check_params(av, &[("b", b)])?;
    let coeffs = asc_coeffs(nvec.entries(), av.a(), b, ctx.q())?;
    PolyRep::pochhammer(b, vec![], coeffs, ctx)
}

pub fn m_cdqh_poly(nvec: &MultiIndex, av: &ParamVector, b: f64, c: f64, ctx: &QContext) -> Result<PolyRep> {
    av.check_len(nvec)?;
    check_params(av, &[("b", b), ("c", c)])?;
    let coeffs = asc_coeffs(nvec.entries(), av.a(), b, ctx.q())?;
    PolyRep::pochhammer(b, vec![c], coeffs, ctx)
}

pub fn m_aw_poly(nvec: &MultiIndex, av: &ParamVector, b: f64, c: f64, d: f64, ctx: &QContext) -> Result<PolyRep> {
    av.check_len(nvec)?;
    check_params(av, &[("b", b), ("c", c), ("d", d)])?;
    let coeffs = aw_coeffs(nvec.entries(), av.a(), b, c, d, ctx.q())?;
    PolyRep::pochhammer(b, vec![c, d], coeffs, ctx)
}

/// `T_b` applied to the multiple little q-Laguerre polynomial with parameters `b a_j / q`.
pub fn m_asc_transform(nvec: &MultiIndex, av: &ParamVector, b: f64, ctx: &QContext) -> Result<PolyRep> {
    av.check_len(nvec)?;
    check_params(av, &[("b", b)])?;
    let q = ctx.q();
    let little = PolyRep::monomial(mqlag_coeffs(nvec.entries(), &av.scaled(b / q), q)?)?;
    apply_exact(&TransformSpec::t_a(b, ctx)?, &little)
}

/// `T_{b,c}` applied to the multiple little q-Laguerre polynomial with parameters `b a_j / q`.
pub fn m_cdqh_transform(nvec: &MultiIndex, av: &ParamVector, b: f64, c: f64, ctx: &QContext) -> Result<PolyRep> {
    av.check_len(nvec)?;
    check_params(av, &[("b", b), ("c", c)])?;
    let q = ctx.q();
    let little = PolyRep::monomial(mqlag_coeffs(nvec.entries(), &av.scaled(b / q), q)?)?;
    apply_exact(&TransformSpec::t_ac(b, c, ctx)?, &little)
}

/// `T_{b,c,d}` applied to the multiple little q-Jacobi polynomial with
/// parameters `b a_j / q` and `cd / q`.
pub fn m_aw_transform(
    nvec: &MultiIndex,
    av: &ParamVector,
    b: f64,
    c: f64,
    d: f64,
    ctx: &QContext,
) -> Result<PolyRep> {
    av.check_len(nvec)?;
    check_params(av, &[("b", b), ("c", c), ("d", d)])?;
    let q = ctx.q();
    let little = PolyRep::monomial(mqjac_coeffs(nvec.entries(), &av.scaled(b / q), c * d / q, q)?)?;
    apply_exact(&TransformSpec::t_acd(b, c, d, ctx)?, &little)
}
