use super::{m_asc_poly, m_aw_poly, m_cdqh_poly, m_little_qjacobi, m_little_qlaguerre, MultiIndex, ParamVector};
use crate::error::Result;
use crate::families::PolyRep;
use crate::qcore::QContext;
use crate::weights::{discrete_inner, integrate_weighted, ContinuousWeight, DiscreteMeasure};

/// A multiple family together with its shared parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiFamily {
    LittleQLaguerre,
    LittleQJacobi { b: f64 },
    Asc { b: f64 },
    Cdqh { b: f64, c: f64 },
    Aw { b: f64, c: f64, d: f64 },
}

impl MultiFamily {
    pub fn name(&self) -> &'static str {
        match self {
            MultiFamily::LittleQLaguerre => "m_little_qlaguerre",
            MultiFamily::LittleQJacobi { .. } => "m_little_qjacobi",
            MultiFamily::Asc { .. } => "m_asc",
            MultiFamily::Cdqh { .. } => "m_cdqh",
            MultiFamily::Aw { .. } => "m_aw",
        }
    }

    /// The polynomial from its explicit multiple sum.
    pub fn polynomial(&self, nvec: &MultiIndex, av: &ParamVector, ctx: &QContext) -> Result<PolyRep> {
        match *self {
            MultiFamily::LittleQLaguerre => m_little_qlaguerre(nvec, av, ctx),
            MultiFamily::LittleQJacobi { b } => m_little_qjacobi(nvec, av, b, ctx),
            MultiFamily::Asc { b } => m_asc_poly(nvec, av, b, ctx),
            MultiFamily::Cdqh { b, c } => m_cdqh_poly(nvec, av, b, c, ctx),
            MultiFamily::Aw { b, c, d } => m_aw_poly(nvec, av, b, c, d, ctx),
        }
    }

    /// `⟨f, g⟩_j`, the inner product of the `j`-th measure.
    fn inner<F, G>(&self, aj: f64, f: F, g: G, ctx: &QContext) -> Result<f64>
    where
        F: Fn(f64) -> f64,
        G: Fn(f64) -> f64,
    {
        let q = ctx.q();
        let continuous = |params: &[f64]| -> Result<f64> {
            let w = ContinuousWeight::new(params)?;
            Ok(integrate_weighted(|pt| f(pt.x()) * g(pt.x()), &w, ctx)?.value)
        };
        match *self {
            MultiFamily::LittleQLaguerre => {
                let m = DiscreteMeasure::new(aj * q, None, ctx)?;
                Ok(discrete_inner(&f, &g, &m, ctx)?.value)
            }
            MultiFamily::LittleQJacobi { b } => {
                let m = DiscreteMeasure::new(aj * q, Some(b * q), ctx)?;
                Ok(discrete_inner(&f, &g, &m, ctx)?.value)
            }
            MultiFamily::Asc { b } => continuous(&[aj, b]),
            MultiFamily::Cdqh { b, c } => continuous(&[aj, b, c]),
            MultiFamily::Aw { b, c, d } => continuous(&[aj, b, c, d]),
        }
    }
}

/// One orthogonality condition `⟨P, x^ℓ⟩_j`, normalized by
/// `sqrt(⟨P, P⟩_j ⟨x^ℓ, x^ℓ⟩_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionResidual {
    pub j: usize,
    pub ell: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityReport {
    /// Every condition `ℓ < n_j`.
    pub residuals: Vec<ConditionResidual>,
    /// The first condition beyond the defining ones, `ℓ = n_j`, for each `j`.
    pub sharpness: Vec<ConditionResidual>,
}

impl OrthogonalityReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.value))
    }

    pub fn min_sharpness(&self) -> f64 {
        self.sharpness.iter().fold(f64::INFINITY, |m, r| m.min(r.value))
    }
}

/// Checks the `|n|` conditions `⟨P_n, x^ℓ⟩_j = 0` for `ℓ < n_j`, and probes
/// `ℓ = n_j`, where the inner product must not vanish.
///
/// The lattice families use the sums `Σ_k P(q^k) q^{kℓ} (a_j q)^k / (q;q)_k`
/// and `Σ_k P(q^k) q^{kℓ} q^k (bq;q)_k a_j^k / (q;q)_k`; the continuous families
/// integrate against `w(θ; a_j, b, …)` with `x = cos θ`.
pub fn verify_multiple_orthogonality(
    family: MultiFamily,
    nvec: &MultiIndex,
    av: &ParamVector,
    ctx: &QContext,
) -> Result<OrthogonalityReport> {
    let p = family.polynomial(nvec, av, ctx)?;
    let pf = |x: f64| p.eval(x, ctx);
    let mut residuals = Vec::new();
    let mut sharpness = Vec::new();
    for (j, (&nj, &aj)) in nvec.entries().iter().zip(av.a()).enumerate() {
        let norm_p = family.inner(aj, pf, pf, ctx)?;
        for ell in 0..=nj {
            let mono = |x: f64| x.powi(ell as i32);
            let ip = family.inner(aj, pf, mono, ctx)?;
            let norm_m = family.inner(aj, mono, mono, ctx)?;
            let value = ip.abs() / (norm_p * norm_m).sqrt();
            let entry = ConditionResidual { j, ell, value };
            if ell < nj {
                residuals.push(entry);
            } else {
                sharpness.push(entry);
            }
        }
    }
    Ok(OrthogonalityReport { residuals, sharpness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> QContext {
        QContext::new(0.5).unwrap()
    }

    fn idx(n: &[usize]) -> MultiIndex {
        MultiIndex::new(n.to_vec()).unwrap()
    }

    const FAMILIES: [MultiFamily; 5] = [
        MultiFamily::LittleQLaguerre,
        MultiFamily::LittleQJacobi { b: 0.2 },
        MultiFamily::Asc { b: 0.2 },
        MultiFamily::Cdqh { b: 0.2, c: 0.1 },
        MultiFamily::Aw { b: 0.2, c: 0.1, d: 0.15 },
    ];

    #[test]
    fn single_condition() {
        let c = ctx();
        let av = ParamVector::new(&[0.4, 0.3], &c).unwrap();
        for f in FAMILIES {
            let rep = verify_multiple_orthogonality(f, &idx(&[1, 0]), &av, &c).unwrap();
            assert_eq!(rep.residuals.len(), 1);
            assert!(rep.max_residual() < 1e-8, "{}: {rep:?}", f.name());
        }
    }

    #[test]
    fn all_families_are_multiply_orthogonal_and_sharp() {
        let c = ctx();
        let av = ParamVector::new(&[0.4, 0.3], &c).unwrap();
        for f in FAMILIES {
            for n in [[1, 1], [2, 1], [2, 2]] {
                let rep = verify_multiple_orthogonality(f, &idx(&n), &av, &c).unwrap();
                assert_eq!(rep.residuals.len(), n[0] + n[1]);
                assert!(rep.max_residual() < 1e-8, "{} {n:?}: {rep:?}", f.name());
                assert!(rep.min_sharpness() > 1e-4, "{} {n:?}: {rep:?}", f.name());
            }
        }
    }
}
