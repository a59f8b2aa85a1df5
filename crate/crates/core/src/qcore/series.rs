use super::context::{Precision, QContext, SeriesValue};
use super::dd::{Accumulator, DoubleDouble, Real};
use crate::error::{QError, Result};

/// Relative tolerance used to recognise an upper parameter as `q^{-n}`.
pub const TERMINATION_TOL: f64 = 1e-12;

const POLE_TOL: f64 = 1e-12;

/// Smallest `n >= 0` such that some upper parameter equals `q^{-n}` to within
/// [`TERMINATION_TOL`] relatively.
pub fn terminating_degree(upper: &[f64], q: f64) -> Option<usize> {
    let lnq = q.ln();
    upper
        .iter()
        .filter(|&&u| u > 0.0)
        .filter_map(|&u| {
            let n = (-u.ln() / lnq).round();
            if n < 0.0 {
                return None;
            }
            let exact = q.powi(-(n as i32));
            ((u - exact).abs() <= TERMINATION_TOL * u.abs()).then_some(n as usize)
        })
        .min()
}

/// Ratio `t_{k+1}/t_k` of the generalized series
/// `Σ (upper;q)_k / ((lower;q)_k (q;q)_k) [(-1)^k q^{k(k-1)/2}]^{1+s-r} z^k`.
fn term_ratio<R: Real>(
    upper: &[f64],
    lower: &[f64],
    z: f64,
    q: f64,
    qk: R,
    k: usize,
    extra_power: i32,
) -> Result<R> {
    let one = R::of(1.0);
    let mut num = R::of(z);
    for &u in upper {
        num = num * (one - R::of(u) * qk);
    }
    let mut den = one - qk * R::of(q);
    for &l in lower {
        let f = one - R::of(l) * qk;
        if f.val().abs() < POLE_TOL {
            return Err(QError::Domain(format!(
                "lower parameter {l} makes (lower;q)_{} vanish",
                k + 1
            )));
        }
        den = den * f;
    }
    let mut ratio = num / den;
    for _ in 0..extra_power.unsigned_abs() {
        ratio = if extra_power > 0 { -(ratio * qk) } else { -(ratio / qk) };
    }
    Ok(ratio)
}

fn sum_terminating<R: Real>(
    upper: &[f64],
    lower: &[f64],
    z: f64,
    n: usize,
    ctx: &QContext,
    extra_power: i32,
) -> Result<SeriesValue> {
    let q = ctx.q();
    let mut acc = Accumulator::new(ctx.precision);
    let mut term = R::of(1.0);
    let mut qk = R::of(1.0);
    acc.add_dd(to_dd(term));
    for k in 0..n {
        term = term * term_ratio(upper, lower, z, q, qk, k, extra_power)?;
        qk = qk * R::of(q);
        acc.add_dd(to_dd(term));
    }
    Ok(SeriesValue::exact(acc.value(), n + 1))
}

fn sum_nonterminating<R: Real>(
    upper: &[f64],
    lower: &[f64],
    z: f64,
    ctx: &QContext,
    extra_power: i32,
) -> Result<SeriesValue> {
    let q = ctx.q();
    let mut acc = Accumulator::new(ctx.precision);
    let mut term = R::of(1.0);
    let mut qk = R::of(1.0);
    acc.add(1.0);
    let mut small_run = 0;
    for k in 0..ctx.max_terms {
        let ratio = term_ratio(upper, lower, z, q, qk, k, extra_power)?;
        term = term * ratio;
        qk = qk * R::of(q);
        acc.add_dd(to_dd(term));
        let last_ratio = ratio.val().abs();
        let partial = acc.value();
        if term.val().abs() < ctx.eps_trunc * partial.abs() {
            small_run += 1;
            if small_run == 3 {
                let t = term.val().abs();
                let trunc_bound = if last_ratio < 1.0 {
                    t * last_ratio / (1.0 - last_ratio)
                } else {
                    t
                };
                return Ok(SeriesValue {
                    value: partial,
                    trunc_bound,
                    terms_used: k + 2,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(QError::TruncationFailure {
        partial: acc.value(),
        terms: ctx.max_terms,
    })
}

#[inline]
fn to_dd<R: Real>(x: R) -> DoubleDouble {
    // Standard-mode terms carry no low word; extended-mode terms are already
    // double-double and are re-split exactly by the accumulator.
    let hi = x.val();
    let lo = (x - R::of(hi)).val();
    DoubleDouble { hi, lo }
}

/// Basic hypergeometric series `rφs(upper; lower; q, z)`.
///
/// Uses the standard normalization
/// `Σ (upper;q)_k / ((lower;q)_k (q;q)_k) [(-1)^k q^{k(k-1)/2}]^{1+s-r} z^k`,
/// so the balanced case `r = s + 1` carries no extra factor. An upper
/// parameter equal to `q^{-n}` terminates the series at `k = n`.
pub fn phi_series(upper: &[f64], lower: &[f64], z: f64, ctx: &QContext) -> Result<SeriesValue> {
    if z == 0.0 {
        return Ok(SeriesValue::exact(1.0, 1));
    }
    let extra_power = 1 + lower.len() as i32 - upper.len() as i32;
    if let Some(n) = terminating_degree(upper, ctx.q()) {
        return match ctx.precision {
            Precision::Standard => sum_terminating::<f64>(upper, lower, z, n, ctx, extra_power),
            Precision::Extended => {
                sum_terminating::<DoubleDouble>(upper, lower, z, n, ctx, extra_power)
            }
        };
    }
    if extra_power < 0 {
        return Err(QError::Divergence(format!(
            "{}φ{} series with no terminating parameter has zero radius of convergence",
            upper.len(),
            lower.len()
        )));
    }
    if extra_power == 0 && z.abs() >= 1.0 {
        return Err(QError::Divergence(format!(
            "nonterminating balanced series needs |z| < 1, got z = {z}"
        )));
    }
    match ctx.precision {
        Precision::Standard => sum_nonterminating::<f64>(upper, lower, z, ctx, extra_power),
        Precision::Extended => sum_nonterminating::<DoubleDouble>(upper, lower, z, ctx, extra_power),
    }
}

/// Coefficients `c_k` of a terminating series, so that
/// `phi_series(upper, lower, z) = Σ_k c_k z^k`.
pub fn phi_coefficients(upper: &[f64], lower: &[f64], ctx: &QContext) -> Result<Vec<f64>> {
    let n = terminating_degree(upper, ctx.q()).ok_or_else(|| {
        QError::Domain("series has no upper parameter of the form q^{-n}".into())
    })?;
    let extra_power = 1 + lower.len() as i32 - upper.len() as i32;
    let q = ctx.q();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = 1.0;
    let mut qk = 1.0;
    coeffs.push(c);
    for k in 0..n {
        c *= term_ratio::<f64>(upper, lower, 1.0, q, qk, k, extra_power)?;
        qk *= q;
        coeffs.push(c);
    }
    Ok(coeffs)
}
