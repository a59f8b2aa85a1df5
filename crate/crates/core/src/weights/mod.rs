//! Weight functions on `[-1, 1]`, the Pochhammer bases `A_k`, quadrature in
//! `θ`, discrete q-lattice inner products and the two-weight ratio.

mod discrete;
mod quadrature;

pub use discrete::{discrete_inner, DiscreteMeasure};
pub use quadrature::{integrate_weighted, MAX_QUADRATURE_NODES, MIN_QUADRATURE_NODES};

use std::f64::consts::PI;

use crate::error::{QError, Result};
use crate::qcore::{qpoch_inf, QContext};

/// A point `x = cos θ` with both coordinates stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    x: f64,
    theta: f64,
}

impl EvalPoint {
    pub fn from_theta(theta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(QError::Domain(format!("theta = {theta} outside [0, π]")));
        }
        Ok(EvalPoint {
            x: theta.cos(),
            theta,
        })
    }

    pub fn from_x(x: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(QError::Domain(format!("x = {x} outside [-1, 1]")));
        }
        Ok(EvalPoint { x, theta: x.acos() })
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// `∏_{j<k} (1 + a² q^{2j} - 2 a q^j x)`, i.e. `(a e^{iθ}, a e^{-iθ}; q)_k`
/// written as a real polynomial in `x`. Valid for any real `x`.
#[inline]
pub fn pochhammer_pair(a: f64, k: usize, x: f64, q: f64) -> f64 {
    let mut prod = 1.0;
    let mut aqj = a;
    for _ in 0..k {
        prod *= 1.0 + aqj * aqj - 2.0 * aqj * x;
        aqj *= q;
    }
    prod
}

/// `(a e^{iθ}, a e^{-iθ}; q)_∞` as a real product, truncated once
/// `|a| q^j < eps_trunc` with the remaining tail folded in to first order.
pub fn pochhammer_pair_inf(a: f64, x: f64, ctx: &QContext) -> f64 {
    let q = ctx.q();
    let mut prod = 1.0;
    let mut aqj = a;
    while aqj.abs() >= ctx.eps_trunc {
        prod *= 1.0 + aqj * aqj - 2.0 * aqj * x;
        aqj *= q;
    }
    prod * (-2.0 * aqj * x / (1.0 - q)).exp()
}

/// The basis polynomial `A_k(x) = (a e^{iθ}, a e^{-iθ}; q)_k`.
#[allow(non_snake_case)]
pub fn eval_Ak(a: f64, k: usize, pt: EvalPoint, ctx: &QContext) -> f64 {
    pochhammer_pair(a, k, pt.x(), ctx.q())
}

/// Which classical weight a parameter list describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    QHermite,
    BigQHermite,
    AlSalamChihara,
    ContinuousDualQHahn,
    AskeyWilson,
}

/// `w(θ; params | q) = (e^{2iθ}, e^{-2iθ}; q)_∞ / ∏_p (p e^{iθ}, p e^{-iθ}; q)_∞`
/// with zero to four parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousWeight {
    params: Vec<f64>,
}

impl ContinuousWeight {
    pub fn new(params: &[f64]) -> Result<Self> {
        if params.len() > 4 {
            return Err(QError::InvalidParameter(format!(
                "a continuous weight takes at most 4 parameters, got {}",
                params.len()
            )));
        }
        if let Some(p) = params.iter().find(|p| !(p.abs() < 1.0)) {
            return Err(QError::InvalidParameter(format!(
                "weight parameters must satisfy |p| < 1, got {p}"
            )));
        }
        let mut params = params.to_vec();
        params.sort_by(f64::total_cmp);
        Ok(ContinuousWeight { params })
    }

    /// Parameters in ascending order. The weight is symmetric in them, and a
    /// fixed order makes evaluation bitwise independent of how they were given.
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn kind(&self) -> WeightKind {
        match self.params.len() {
            0 => WeightKind::QHermite,
            1 => WeightKind::BigQHermite,
            2 => WeightKind::AlSalamChihara,
            3 => WeightKind::ContinuousDualQHahn,
            _ => WeightKind::AskeyWilson,
        }
    }
}

/// Evaluates the weight at `θ`; zero at `θ ∈ {0, π}`.
///
/// Factors are multiplied until `q^j < eps_trunc`; the remaining tail is
/// folded in to first order as `exp(2 (Σ_p p x - cos 2θ) Σ_{i≥j} q^i)`.
pub fn eval_weight(w: &ContinuousWeight, pt: EvalPoint, ctx: &QContext) -> f64 {
    if pt.theta() <= 0.0 || pt.theta() >= PI {
        return 0.0;
    }
    let s = pt.theta().sin();
    let q = ctx.q();
    let x = pt.x();
    let cos2 = 2.0 * x * x - 1.0;
    // j = 0 numerator factor |1 - e^{2iθ}|² = 4 sin²θ, taken exactly.
    let mut num = 4.0 * s * s;
    let mut den: f64 = w.params.iter().map(|&p| 1.0 + p * p - 2.0 * p * x).product();
    let mut qj = q;
    while qj >= ctx.eps_trunc {
        num *= 1.0 + qj * qj - 2.0 * qj * cos2;
        for &p in &w.params {
            let r = p * qj;
            den *= 1.0 + r * r - 2.0 * r * x;
        }
        qj *= q;
    }
    let tail = qj / (1.0 - q);
    let psum: f64 = w.params.iter().sum();
    num / den * (2.0 * tail * (psum * x - cos2)).exp()
}

/// Closed form of `(1/2π) ∫_0^π w(θ) dθ`:
/// `(abcd;q)_∞ / ((q;q)_∞ ∏_{i<j} (p_i p_j;q)_∞)`, with absent parameters zero.
pub fn total_mass(w: &ContinuousWeight, ctx: &QContext) -> Result<f64> {
    let p = &w.params;
    let mut den = qpoch_inf(ctx.q(), ctx)?;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            den *= qpoch_inf(p[i] * p[j], ctx)?;
        }
    }
    let num = if p.len() == 4 {
        qpoch_inf(p.iter().product(), ctx)?
    } else {
        1.0
    };
    Ok(num / den)
}

/// One pole/zero pair of the ratio `w(θ; a2, …) / w(θ; a1, …)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleZero {
    pub pole: f64,
    pub zero: f64,
}

pub const DEFAULT_RATIO_CUTOFF: f64 = 1e3;

/// `w(θ; a2, …) / w(θ; a1, …) = ∏_k (1 + a1² q^{2k} - 2 a1 q^k x) / (1 + a2² q^{2k} - 2 a2 q^k x)`,
/// which is independent of the shared parameters.
pub fn weight_ratio(a1: f64, a2: f64, x: f64, ctx: &QContext) -> f64 {
    let q = ctx.q();
    let mut ratio = 1.0;
    let mut qk = 1.0;
    while qk * a1.abs().max(a2.abs()) >= ctx.eps_trunc {
        let (r1, r2) = (a1 * qk, a2 * qk);
        ratio *= (1.0 + r1 * r1 - 2.0 * r1 * x) / (1.0 + r2 * r2 - 2.0 * r2 * x);
        qk *= q;
    }
    ratio
}

/// Poles `x_k = (1 + a2² q^{2k}) / (2 a2 q^k)` and zeros
/// `y_k = (1 + a1² q^{2k}) / (2 a1 q^k)` of the weight ratio, listed while both
/// stay below [`DEFAULT_RATIO_CUTOFF`].
pub fn weight_ratio_analysis(a1: f64, a2: f64, ctx: &QContext) -> Result<Vec<PoleZero>> {
    weight_ratio_analysis_with_cutoff(a1, a2, DEFAULT_RATIO_CUTOFF, ctx)
}

pub fn weight_ratio_analysis_with_cutoff(
    a1: f64,
    a2: f64,
    cutoff: f64,
    ctx: &QContext,
) -> Result<Vec<PoleZero>> {
    for a in [a1, a2] {
        if !(a > 0.0 && a < 1.0) {
            return Err(QError::InvalidParameter(format!(
                "weight ratio analysis needs 0 < a < 1, got {a}"
            )));
        }
    }
    let q = ctx.q();
    let point = |a: f64, qk: f64| (1.0 + a * a * qk * qk) / (2.0 * a * qk);
    let mut out = Vec::new();
    let mut qk = 1.0;
    for _ in 0..ctx.max_terms {
        let pz = PoleZero {
            pole: point(a2, qk),
            zero: point(a1, qk),
        };
        if !(pz.pole < cutoff && pz.zero < cutoff) {
            break;
        }
        out.push(pz);
        qk *= q;
    }
    Ok(out)
}
