use super::classical::{asc_poly, aw_poly, cdqh_poly, little_qjacobi, little_qlaguerre};
use super::genfun::kernel_coefficients;
use super::polyrep::PolyRep;
use crate::error::{QError, Result};
use crate::qcore::{qpoch_finite, QContext};
use crate::weights::{discrete_inner, integrate_weighted, ContinuousWeight, DiscreteMeasure};

/// A classical family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    LittleQLaguerre { a: f64 },
    LittleQJacobi { a: f64, b: f64 },
    Asc { a: f64, b: f64 },
    Cdqh { a: f64, b: f64, c: f64 },
    Aw { a: f64, b: f64, c: f64, d: f64 },
    QHermite,
    BigQHermite { a: f64 },
    /// `Q_n(x; c, d|q)`, from its generating function.
    Qn { c: f64, d: f64 },
}

/// Names accepted by [`Family::from_name`].
pub const FAMILY_NAMES: [&str; 8] = [
    "little_qlaguerre",
    "little_qjacobi",
    "asc",
    "cdqh",
    "aw",
    "qhermite",
    "big_qhermite",
    "qn",
];

impl Family {
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let arity = match name {
            "little_qlaguerre" | "big_qhermite" => 1,
            "little_qjacobi" | "asc" | "qn" => 2,
            "cdqh" => 3,
            "aw" => 4,
            "qhermite" => 0,
            _ => return Err(QError::InvalidParameter(format!("unknown family '{name}'"))),
        };
        if params.len() != arity {
            return Err(QError::InvalidParameter(format!(
                "family {name} takes {arity} parameters, got {}",
                params.len()
            )));
        }
        let p = |i: usize| params[i];
        Ok(match name {
            "little_qlaguerre" => Family::LittleQLaguerre { a: p(0) },
            "little_qjacobi" => Family::LittleQJacobi { a: p(0), b: p(1) },
            "asc" => Family::Asc { a: p(0), b: p(1) },
            "cdqh" => Family::Cdqh { a: p(0), b: p(1), c: p(2) },
            "aw" => Family::Aw { a: p(0), b: p(1), c: p(2), d: p(3) },
            "qhermite" => Family::QHermite,
            "big_qhermite" => Family::BigQHermite { a: p(0) },
            _ => Family::Qn { c: p(0), d: p(1) },
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::LittleQLaguerre { .. } => "little_qlaguerre",
            Family::LittleQJacobi { .. } => "little_qjacobi",
            Family::Asc { .. } => "asc",
            Family::Cdqh { .. } => "cdqh",
            Family::Aw { .. } => "aw",
            Family::QHermite => "qhermite",
            Family::BigQHermite { .. } => "big_qhermite",
            Family::Qn { .. } => "qn",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Family::LittleQLaguerre { a } | Family::BigQHermite { a } => vec![a],
            Family::LittleQJacobi { a, b } | Family::Asc { a, b } => vec![a, b],
            Family::Qn { c, d } => vec![c, d],
            Family::Cdqh { a, b, c } => vec![a, b, c],
            Family::Aw { a, b, c, d } => vec![a, b, c, d],
            Family::QHermite => vec![],
        }
    }

    /// Whether the family lives on the q-lattice rather than `[-1, 1]`.
    pub fn is_discrete(&self) -> bool {
        matches!(self, Family::LittleQLaguerre { .. } | Family::LittleQJacobi { .. })
    }

    /// The explicit polynomial of degree `n`, for the families that have one.
    pub fn polynomial(&self, n: usize, ctx: &QContext) -> Option<Result<PolyRep>> {
        Some(match *self {
            Family::LittleQLaguerre { a } => little_qlaguerre(n, a, ctx),
            Family::LittleQJacobi { a, b } => little_qjacobi(n, a, b, ctx),
            Family::Asc { a, b } => asc_poly(n, a, b, ctx),
            Family::Cdqh { a, b, c } => cdqh_poly(n, a, b, c, ctx),
            Family::Aw { a, b, c, d } => aw_poly(n, a, b, c, d, ctx),
            _ => return None,
        })
    }

    /// `⟨f, g⟩` for the family's orthogonality measure: the lattice sums for
    /// the little q-families and `(1/2π) ∫_0^π f g w dθ` otherwise.
    pub fn inner<F, G>(&self, f: F, g: G, ctx: &QContext) -> Result<f64>
    where
        F: Fn(f64) -> f64,
        G: Fn(f64) -> f64,
    {
        let q = ctx.q();
        match *self {
            Family::LittleQLaguerre { a } => {
                Ok(discrete_inner(f, g, &DiscreteMeasure::new(a * q, None, ctx)?, ctx)?.value)
            }
            Family::LittleQJacobi { a, b } => {
                Ok(discrete_inner(f, g, &DiscreteMeasure::new(a * q, Some(b * q), ctx)?, ctx)?.value)
            }
            _ => {
                let w = ContinuousWeight::new(&self.params())?;
                Ok(integrate_weighted(|pt| f(pt.x()) * g(pt.x()), &w, ctx)?.value)
            }
        }
    }
}

/// `p_0, …, p_N` of one family, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct FamilyBasis {
    family: Family,
    polys: Option<Vec<PolyRep>>,
    n_max: usize,
}

impl FamilyBasis {
    pub fn new(family: Family, n_max: usize, ctx: &QContext) -> Result<Self> {
        let polys = match family.polynomial(0, ctx) {
            Some(_) => Some(
                (0..=n_max)
                    .map(|n| family.polynomial(n, ctx).expect("explicit family"))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => {
                if n_max > ctx.order_cap {
                    return Err(QError::CapExceeded {
                        requested: n_max,
                        cap: ctx.order_cap,
                    });
                }
                None
            }
        };
        Ok(FamilyBasis { family, polys, n_max })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `[p_0(x), …, p_N(x)]`.
    pub fn values(&self, x: f64, ctx: &QContext) -> Vec<f64> {
        if let Some(polys) = &self.polys {
            return polys.iter().map(|p| p.eval(x, ctx)).collect();
        }
        let numer = match self.family {
            Family::BigQHermite { a } => vec![a],
            Family::Qn { c, d } => vec![c, d],
            _ => vec![],
        };
        let q = ctx.q();
        kernel_coefficients(&numer, x, self.n_max, ctx)
            .into_iter()
            .enumerate()
            .map(|(n, g)| qpoch_finite(q, n, q) * g)
            .collect()
    }
}

/// The matrix `G_{nm} = ⟨p_n, p_m⟩` for `n, m ≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: Vec<Vec<f64>>,
}

impl GramMatrix {
    /// `max_{n≠m} |G_{nm}| / sqrt(G_{nn} G_{mm})`.
    pub fn max_offdiag_residual(&self) -> f64 {
        let g = &self.entries;
        let mut worst = 0.0f64;
        for (n, row) in g.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                if n != m {
                    worst = worst.max(v.abs() / (g[n][n] * g[m][m]).sqrt());
                }
            }
        }
        worst
    }
}

pub fn gram_matrix(family: Family, n_max: usize, ctx: &QContext) -> Result<GramMatrix> {
    let basis = FamilyBasis::new(family, n_max, ctx)?;
    let mut entries = vec![vec![0.0; n_max + 1]; n_max + 1];
    for n in 0..=n_max {
        for m in n..=n_max {
            let v = family.inner(
                |x| basis.values(x, ctx)[n],
                |x| basis.values(x, ctx)[m],
                ctx,
            )?;
            entries[n][m] = v;
            entries[m][n] = v;
        }
    }
    Ok(GramMatrix { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::qpoch_inf;

    #[test]
    fn names_round_trip() {
        for name in FAMILY_NAMES {
            let arity = match name {
                "qhermite" => 0,
                "little_qlaguerre" | "big_qhermite" => 1,
                "cdqh" => 3,
                "aw" => 4,
                _ => 2,
            };
            let params = vec![0.2; arity];
            let f = Family::from_name(name, &params).unwrap();
            assert_eq!(f.name(), name);
            assert_eq!(f.params(), params);
        }
        assert!(Family::from_name("asc", &[0.1]).is_err());
        assert!(Family::from_name("laguerre", &[0.1]).is_err());
    }

    #[test]
    fn hermite_gram_is_diagonal_with_known_norms() {
        let c = QContext::new(0.5).unwrap();
        let g = gram_matrix(Family::QHermite, 5, &c).unwrap();
        assert!(g.max_offdiag_residual() < 1e-8);
        for n in 0..=5 {
            let expect = 1.0 / qpoch_inf(0.5f64.powi(n as i32 + 1), &c).unwrap();
            assert!((g.entries[n][n] - expect).abs() < 1e-8 * expect);
        }
    }
}
