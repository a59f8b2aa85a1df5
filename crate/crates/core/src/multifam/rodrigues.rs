use super::{MultiIndex, ParamVector};
use crate::error::{QError, Result};
use crate::qcore::{qpoch_finite, QContext};

/// Distance from a zero of the prefactor below which evaluation is refused.
const PREFACTOR_TOL: f64 = 1e-8;

/// Evaluates the multiple little q-Laguerre (`b = None`) or little q-Jacobi
/// polynomial at `x > 0` by applying the raising operators directly:
///
/// `C_n · ∏_j (x^{-α_j} D_p^{n_j} x^{n_j+α_j}) F(x) / P(x)`,
///
/// where `D_p f(x) = (f(px) - f(x)) / (x (p - 1))` with `p = 1/q`,
/// `F = (qx;q)_∞` or `(qx;q)_∞ / (b q^{|n|+1} x;q)_∞`, `P = (qx;q)_∞` or
/// `(qx;q)_∞ / (bqx;q)_∞`, and
/// `C_n = (1-q)^{|n|} ∏_j q^{n_j(n_j-1)/2} a_j^{n_j} / (a_j q;q)_{n_j}`.
///
/// `D_p` is exact on the lattice `x p^m`, so only `F` at `m = 0..=|n|` is
/// needed. Every infinite product uses the same number of factors, fixed by
/// the largest point `x p^{|n|}`, so the differences see a consistent `F`.
pub fn rodrigues_oracle(
    nvec: &MultiIndex,
    av: &ParamVector,
    b: Option<f64>,
    x: f64,
    ctx: &QContext,
) -> Result<f64> {
    av.check_len(nvec)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(QError::InvalidParameter(format!("the operator form needs x > 0, got {x}")));
    }
    let q = ctx.q();
    let p = 1.0 / q;
    let size = nvec.size();
    let b = b.unwrap_or(0.0);

    let x_max = x * p.powi(size as i32);
    let mut factors = 1;
    while x_max * q.powi(factors) >= ctx.eps_trunc * 1e-2 {
        factors += 1;
    }
    let lattice_poch = |y: f64, shift: i32| -> f64 {
        (shift..shift + factors).map(|j| 1.0 - y * q.powi(j)).product()
    };

    // Target F on x p^m; its denominator must stay away from zero.
    let mut g = Vec::with_capacity(size + 1);
    for m in 0..=size {
        let y = x * p.powi(m as i32);
        let den = lattice_poch(b * y, size as i32 + 1);
        if den.abs() < PREFACTOR_TOL {
            return Err(QError::EvaluationPoint { x });
        }
        g.push(lattice_poch(y, 1) / den);
    }

    for (j, &nj) in nvec.entries().iter().enumerate().rev() {
        let alpha = av.alpha()[j];
        for (m, v) in g.iter_mut().enumerate() {
            *v *= (x * p.powi(m as i32)).powf(nj as f64 + alpha);
        }
        for _ in 0..nj {
            g = (0..g.len() - 1)
                .map(|m| (g[m + 1] - g[m]) / (x * p.powi(m as i32) * (p - 1.0)))
                .collect();
        }
        for (m, v) in g.iter_mut().enumerate() {
            *v *= (x * p.powi(m as i32)).powf(-alpha);
        }
    }

    let mut c_n = (1.0 - q).powi(size as i32);
    for (&nj, &aj) in nvec.entries().iter().zip(av.a()) {
        c_n *= q.powi((nj * nj.saturating_sub(1) / 2) as i32) * aj.powi(nj as i32) / qpoch_finite(aj * q, nj, q);
    }

    let pre = lattice_poch(x, 1);
    if (0..factors).any(|j| (1.0 - x * q.powi(j + 1)).abs() < PREFACTOR_TOL) {
        return Err(QError::EvaluationPoint { x });
    }
    let pre = pre / lattice_poch(b * x, 1);
    Ok(c_n * g[0] / pre)
}
