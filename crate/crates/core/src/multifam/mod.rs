//! Multiple orthogonal polynomials: multiple little q-Laguerre and little
//! q-Jacobi on the q-lattice, and the multiple Al-Salam–Chihara, continuous
//! dual q-Hahn and Askey–Wilson families lifted from them.

mod continuous;
mod little;
mod orthogonality;
mod rodrigues;

pub use continuous::{
    m_asc, m_asc_poly, m_asc_transform, m_aw, m_aw_poly, m_aw_transform, m_cdqh, m_cdqh_poly, m_cdqh_transform,
};
pub use little::{m_little_qjacobi, m_little_qlaguerre, phi_form_check, PhiForm};
pub use orthogonality::{verify_multiple_orthogonality, MultiFamily, OrthogonalityReport};
pub use rodrigues::rodrigues_oracle;

use crate::error::{QError, Result};
use crate::qcore::QContext;

/// Minimum distance of `α_i - α_j` from the integers.
pub const DEFAULT_AT_TOL: f64 = 1e-6;

/// Largest number of weights accepted by default.
pub const DEFAULT_MAX_R: usize = 4;

/// A multi-index `(n_1, …, n_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    n: Vec<usize>,
}

impl MultiIndex {
    pub fn new(n: Vec<usize>) -> Result<Self> {
        if n.is_empty() {
            return Err(QError::InvalidParameter("a multi-index needs r >= 1 entries".into()));
        }
        Ok(MultiIndex { n })
    }

    /// The unit index `e_j` of length `r`.
    pub fn unit(r: usize, j: usize) -> Result<Self> {
        if j >= r {
            return Err(QError::InvalidParameter(format!("unit index {j} out of range for r = {r}")));
        }
        let mut n = vec![0; r];
        n[j] = 1;
        Self::new(n)
    }

    pub fn entries(&self) -> &[usize] {
        &self.n
    }

    pub fn r(&self) -> usize {
        self.n.len()
    }

    /// `|n| = Σ n_j`.
    pub fn size(&self) -> usize {
        self.n.iter().sum()
    }
}

/// The varying parameters `a_j = q^{α_j}`, all positive, with the `α_j`
/// pairwise non-congruent modulo the integers.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector {
    a: Vec<f64>,
    alpha: Vec<f64>,
}

impl ParamVector {
    pub fn new(a: &[f64], ctx: &QContext) -> Result<Self> {
        Self::with_limits(a, DEFAULT_AT_TOL, DEFAULT_MAX_R, ctx)
    }

    pub fn with_limits(a: &[f64], at_tol: f64, max_r: usize, ctx: &QContext) -> Result<Self> {
        if a.is_empty() {
            return Err(QError::InvalidParameter("need at least one parameter".into()));
        }
        if a.len() > max_r {
            return Err(QError::CapExceeded {
                requested: a.len(),
                cap: max_r,
            });
        }
        if let Some(v) = a.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(QError::InvalidParameter(format!(
                "a_j = {v}: parameters must be positive so that a_j = q^alpha_j has a real alpha_j"
            )));
        }
        let ln_q = ctx.q().ln();
        let alpha: Vec<f64> = a.iter().map(|v| v.ln() / ln_q).collect();
        for i in 0..alpha.len() {
            for j in (i + 1)..alpha.len() {
                let d = alpha[i] - alpha[j];
                if (d - d.round()).abs() <= at_tol {
                    return Err(QError::AtCondition { i, j, tol: at_tol });
                }
            }
        }
        Ok(ParamVector { a: a.to_vec(), alpha })
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn r(&self) -> usize {
        self.a.len()
    }

    pub(crate) fn check_len(&self, nvec: &MultiIndex) -> Result<()> {
        if self.r() != nvec.r() {
            return Err(QError::InvalidParameter(format!(
                "multi-index has {} entries but {} parameters were given",
                nvec.r(),
                self.r()
            )));
        }
        Ok(())
    }

    pub(crate) fn scaled(&self, s: f64) -> Vec<f64> {
        self.a.iter().map(|v| v * s).collect()
    }
}

/// Calls `f` on every `k` with `0 ≤ k_j ≤ n_j`, in lexicographic order.
pub(crate) fn for_each_tuple(n: &[usize], mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    let mut k = vec![0; n.len()];
    loop {
        f(&k)?;
        let mut i = n.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if k[i] < n[i] {
                k[i] += 1;
                break;
            }
            k[i] = 0;
        }
    }
}

/// `tails[j] = k_j + … + k_{r-1}`, with `tails[r] = 0`.
pub(crate) fn suffix_sums(k: &[usize]) -> Vec<usize> {
    let mut s = vec![0; k.len() + 1];
    for j in (0..k.len()).rev() {
        s[j] = s[j + 1] + k[j];
    }
    s
}

/// `Σ_j n_j (k_{j+1} + … + k_r)`.
pub(crate) fn cross_exponent(n: &[usize], tails: &[usize]) -> usize {
    n.iter().enumerate().map(|(j, &nj)| nj * tails[j + 1]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_are_enumerated_in_order() {
        let mut seen = Vec::new();
        for_each_tuple(&[1, 2], |k| {
            seen.push(k.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(
            seen,
            vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![1, 2]]
        );
        assert_eq!(suffix_sums(&[2, 0, 1]), vec![3, 1, 1, 0]);
        assert_eq!(cross_exponent(&[1, 2, 3], &suffix_sums(&[2, 0, 1])), 1 + 2);
    }

    #[test]
    fn at_condition_is_enforced() {
        let c = QContext::new(0.5).unwrap();
        // 0.4 and 0.2 differ by exactly one power of q.
        assert!(matches!(
            ParamVector::new(&[0.4, 0.2], &c),
            Err(QError::AtCondition { i: 0, j: 1, .. })
        ));
        assert!(ParamVector::new(&[0.4, 0.3], &c).is_ok());
        assert!(ParamVector::new(&[0.4, -0.3], &c).is_err());
        assert!(matches!(
            ParamVector::new(&[0.11, 0.13, 0.17, 0.19, 0.23], &c),
            Err(QError::CapExceeded { requested: 5, cap: 4 })
        ));
    }

    #[test]
    fn multi_index_basics() {
        let n = MultiIndex::new(vec![2, 0, 3]).unwrap();
        assert_eq!(n.size(), 5);
        assert_eq!(n.r(), 3);
        assert_eq!(MultiIndex::unit(3, 1).unwrap().entries(), &[0, 1, 0]);
        assert!(MultiIndex::new(vec![]).is_err());
    }
}
