use super::classical::{check_open_unit, pochhammer_sum_dd};
use crate::error::{QError, Result};
use crate::qcore::{qpoch_finite, QContext};
use crate::weights::EvalPoint;

/// Taylor coefficients `g_0, …, g_n` of
/// `∏_{u ∈ numer} (u t; q)_∞ / (t e^{iθ}, t e^{-iθ}; q)_∞`.
///
/// Each denominator pair `1 / (1 - 2x q^j t + q^{2j} t²)` is applied as a
/// recursive filter, which is the product with its geometric expansion
/// truncated at degree `n`; each numerator factor `1 - u q^j t` is a single
/// multiply-subtract pass. Factors with `q^j < eps_trunc` are dropped.
///
/// No order cap is applied here; see [`qhermite_from_genfun`] and friends.
pub fn kernel_coefficients(numer: &[f64], x: f64, n: usize, ctx: &QContext) -> Vec<f64> {
    let q = ctx.q();
    let mut g = vec![0.0; n + 1];
    g[0] = 1.0;
    let mut qj = 1.0;
    while qj >= ctx.eps_trunc {
        let lin = 2.0 * x * qj;
        let quad = qj * qj;
        for m in 1..=n {
            let back2 = if m >= 2 { g[m - 2] } else { 0.0 };
            g[m] += lin * g[m - 1] - quad * back2;
        }
        for &u in numer {
            let uq = u * qj;
            for m in (1..=n).rev() {
                g[m] -= uq * g[m - 1];
            }
        }
        qj *= q;
    }
    g
}

fn check_cap(n: usize, ctx: &QContext) -> Result<()> {
    if n > ctx.order_cap {
        return Err(QError::CapExceeded {
            requested: n,
            cap: ctx.order_cap,
        });
    }
    Ok(())
}

fn extract(numer: &[f64], n: usize, pt: EvalPoint, ctx: &QContext) -> Result<f64> {
    check_cap(n, ctx)?;
    let g = kernel_coefficients(numer, pt.x(), n, ctx);
    Ok(qpoch_finite(ctx.q(), n, ctx.q()) * g[n])
}

/// Continuous q-Hermite `H_n(x|q)` from
/// `Σ H_n t^n / (q;q)_n = 1 / (t e^{iθ}, t e^{-iθ}; q)_∞`.
pub fn qhermite_from_genfun(n: usize, pt: EvalPoint, ctx: &QContext) -> Result<f64> {
    extract(&[], n, pt, ctx)
}

/// Continuous big q-Hermite `H_n(x;a|q)` from
/// `Σ H_n t^n / (q;q)_n = (at;q)_∞ / (t e^{iθ}, t e^{-iθ}; q)_∞`.
pub fn big_qhermite_from_genfun(n: usize, a: f64, pt: EvalPoint, ctx: &QContext) -> Result<f64> {
    extract(&[a], n, pt, ctx)
}

/// `Q_n(x;c,d|q)` from `Σ Q_n t^n / (q;q)_n = (ct, dt;q)_∞ / (t e^{iθ}, t e^{-iθ}; q)_∞`.
pub fn qn_from_genfun(n: usize, c: f64, d: f64, pt: EvalPoint, ctx: &QContext) -> Result<f64> {
    extract(&[c, d], n, pt, ctx)
}

/// `Q_n(x;a,b|q) = (ab;q)_n a^{-n} p_n(x;a,b|q)` through the Al-Salam–Chihara sum,
/// evaluated in double-double because the `a^{-n}` scaling exposes its cancellation.
pub fn qn_asc(n: usize, a: f64, b: f64, pt: EvalPoint, ctx: &QContext) -> Result<f64> {
    if a == 0.0 {
        return Err(QError::UseGeneratingFunction);
    }
    check_open_unit("a", a)?;
    check_open_unit("b", b)?;
    let p = pochhammer_sum_dd(n, &[], &[a * b], a, &[], pt.x(), ctx)?;
    Ok(qpoch_finite(a * b, n, ctx.q()) / a.powi(n as i32) * p)
}
