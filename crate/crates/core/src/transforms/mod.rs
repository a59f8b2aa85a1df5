//! The lifting transforms `T_a`, `T_{a,c}` and `T_{a,c,d}`.
//!
//! On monomials `T x^k = (a e^{iθ}, a e^{-iθ}; q)_k / ∏_c (a c;q)_k`, so the
//! exact form only relabels the basis. The kernel-series form evaluates
//! `T f` for any `f` bounded on the q-lattice from its values `f(q^n)`.

use crate::error::{QError, Result};
use crate::families::{kernel_coefficients, Basis, PolyRep};
use crate::qcore::dd::Accumulator;
use crate::qcore::{qpoch_inf, QContext, SeriesValue};
use crate::weights::{
    discrete_inner, integrate_weighted, pochhammer_pair_inf, ContinuousWeight, DiscreteMeasure, EvalPoint,
};

const POLE_TOL: f64 = 1e-12;

/// Initial kernel length; grown by doubling as the series needs more terms.
const INITIAL_KERNEL_LEN: usize = 32;

/// Consecutive small tail estimates required before the series stops.
const SMALL_RUN: usize = 3;

/// `T_a` (no normalizers), `T_{a,c}` (one) or `T_{a,c,d}` (two).
#[derive(Debug, Clone, PartialEq)]
pub struct TransformSpec {
    anchor: f64,
    normalizers: Vec<f64>,
}

impl TransformSpec {
    pub fn new(anchor: f64, normalizers: &[f64], ctx: &QContext) -> Result<Self> {
        if normalizers.len() > 2 {
            return Err(QError::InvalidParameter(format!(
                "a transform takes at most two normalizers, got {}",
                normalizers.len()
            )));
        }
        for &v in std::iter::once(&anchor).chain(normalizers) {
            if !(v.abs() < 1.0) {
                return Err(QError::InvalidParameter(format!(
                    "transform parameters must satisfy |p| < 1, got {v}"
                )));
            }
        }
        for &c in normalizers {
            let mut qm = 1.0;
            while (anchor * c * qm).abs() >= ctx.eps_trunc {
                if (1.0 - anchor * c * qm).abs() < POLE_TOL {
                    return Err(QError::Domain(format!("({anchor}·{c};q)_∞ vanishes")));
                }
                qm *= ctx.q();
            }
        }
        Ok(TransformSpec {
            anchor,
            normalizers: normalizers.to_vec(),
        })
    }

    pub fn t_a(anchor: f64, ctx: &QContext) -> Result<Self> {
        Self::new(anchor, &[], ctx)
    }

    pub fn t_ac(anchor: f64, c: f64, ctx: &QContext) -> Result<Self> {
        Self::new(anchor, &[c], ctx)
    }

    pub fn t_acd(anchor: f64, c: f64, d: f64, ctx: &QContext) -> Result<Self> {
        Self::new(anchor, &[c, d], ctx)
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn normalizers(&self) -> &[f64] {
        &self.normalizers
    }

    /// `(a e^{iθ}, a e^{-iθ}; q)_∞ / ∏_c (a c;q)_∞`.
    pub fn prefactor(&self, pt: EvalPoint, ctx: &QContext) -> Result<f64> {
        let mut v = pochhammer_pair_inf(self.anchor, pt.x(), ctx);
        for &c in &self.normalizers {
            v /= qpoch_inf(self.anchor * c, ctx)?;
        }
        Ok(v)
    }
}

/// Maps `x^k` to basis element `k`: the coefficients are kept and only the
/// basis changes.
pub fn apply_exact(t: &TransformSpec, f: &PolyRep) -> Result<PolyRep> {
    if !f.is_monomial() {
        return Err(QError::InvalidParameter(
            "transforms act on polynomials given in the monomial basis".into(),
        ));
    }
    Ok(f.retag(Basis::Pochhammer {
        anchor: t.anchor,
        normalized_by: t.normalizers.clone(),
    }))
}

/// `prefactor · Σ_n f(q^n) a^n K_n(x) / (q;q)_n`, with `K_n` the continuous
/// q-Hermite, big q-Hermite or rescaled Al-Salam–Chihara polynomial for zero,
/// one or two normalizers.
///
/// The kernel sequence `K_n / (q;q)_n` is extracted once per call and extended
/// by doubling. The tail after term `n` is estimated as
/// `F · G · |a|^{n+1} / (1 - |a|)`, where `F` bounds `|f|` over the recent
/// lattice points and at `0`, and `G` bounds the kernel terms seen so far.
pub fn apply_series<F>(t: &TransformSpec, f: F, pt: EvalPoint, ctx: &QContext) -> Result<SeriesValue>
where
    F: Fn(f64) -> f64,
{
    let a = t.anchor;
    let pre = t.prefactor(pt, ctx)?;
    let q = ctx.q();
    let f0 = f(0.0).abs();
    let mut kernel = kernel_coefficients(&t.normalizers, pt.x(), INITIAL_KERNEL_LEN, ctx);
    let mut acc = Accumulator::new(ctx.precision);
    let mut abs_acc = Accumulator::new(ctx.precision);
    let mut qn = 1.0;
    let mut an = 1.0;
    let mut g_max = 0.0f64;
    let mut recent_f = [0.0f64; 8];
    let mut small = 0;
    for n in 0..ctx.max_terms {
        if n >= kernel.len() {
            let len = (2 * kernel.len()).min(ctx.max_terms);
            kernel = kernel_coefficients(&t.normalizers, pt.x(), len, ctx);
        }
        let fv = f(qn);
        let term = fv * an * kernel[n];
        acc.add(term);
        abs_acc.add(term.abs());
        recent_f[n % recent_f.len()] = fv.abs();
        g_max = g_max.max(kernel[n].abs());

        let f_bound = recent_f.iter().fold(f0, |m, &v| m.max(v));
        let tail = if a.abs() < 1.0 {
            f_bound * g_max * an.abs() * a.abs() / (1.0 - a.abs())
        } else {
            f64::INFINITY
        };
        let scale = abs_acc.value().max(acc.value().abs());
        if tail <= ctx.eps_trunc * scale || tail == 0.0 {
            small += 1;
            if small >= SMALL_RUN || a == 0.0 || tail == 0.0 {
                return Ok(SeriesValue {
                    value: pre * acc.value(),
                    trunc_bound: pre.abs() * tail,
                    terms_used: n + 1,
                });
            }
        } else {
            small = 0;
        }
        qn *= q;
        an *= a;
    }
    Err(QError::TruncationFailure {
        partial: pre * acc.value(),
        terms: ctx.max_terms,
    })
}

/// Both sides of a Plancherel identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plancherel {
    pub lhs: f64,
    pub rhs: f64,
}

impl Plancherel {
    /// `|lhs - rhs| / (1 + |rhs|)`.
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs() / (1.0 + self.rhs.abs())
    }
}

/// `lhs = N · (1/2π) ∫ (T_a f)(T_b g) w(θ; a, b, normalizers) dθ` and
/// `rhs = ⟨f, g⟩` on the q-lattice with mass ratio `ab` (and `(cd;q)_n` for two
/// normalizers). `N` is `1`, `(ac, bc;q)_∞` or `(ac, ad, bc, bd, cd;q)_∞`.
pub fn plancherel_check(
    ta: &TransformSpec,
    tb: &TransformSpec,
    f: &PolyRep,
    g: &PolyRep,
    ctx: &QContext,
) -> Result<Plancherel> {
    if ta.normalizers != tb.normalizers {
        return Err(QError::InvalidParameter(
            "both transforms must share their normalizers".into(),
        ));
    }
    let (a, b) = (ta.anchor, tb.anchor);
    let norms = &ta.normalizers;
    let tf = apply_exact(ta, f)?;
    let tg = apply_exact(tb, g)?;

    let mut params = vec![a, b];
    params.extend_from_slice(norms);
    let w = ContinuousWeight::new(&params)?;
    let integral = integrate_weighted(|pt| tf.eval_at(pt, ctx) * tg.eval_at(pt, ctx), &w, ctx)?;
    let mut pre = 1.0;
    for &c in norms {
        pre *= qpoch_inf(a * c, ctx)? * qpoch_inf(b * c, ctx)?;
    }
    if norms.len() == 2 {
        pre *= qpoch_inf(norms[0] * norms[1], ctx)?;
    }
    let lhs = pre * integral.value;

    let extra = (norms.len() == 2).then(|| norms[0] * norms[1]);
    let m = DiscreteMeasure::new(a * b, extra, ctx)?;
    let rhs = discrete_inner(|x| f.eval(x, ctx), |x| g.eval(x, ctx), &m, ctx)?.value;
    Ok(Plancherel { lhs, rhs })
}
