//! Modified moments `m_{k,j} = (1/2π) ∫ A_j(x; a) B_k(x; b) w(θ) dθ` and the
//! bordered-determinant construction of the orthogonal polynomials from them.
//!
//! Moment determinants are badly conditioned, so this path exists to
//! cross-check the hypergeometric sums at small degree, not to replace them.

use nalgebra::{DMatrix, DVector};

use crate::error::{QError, Result};
use crate::families::PolyRep;
use crate::qcore::dd::DoubleDouble;
use crate::qcore::{qpoch_inf, QContext};
use crate::weights::{integrate_weighted, pochhammer_pair, ContinuousWeight};

/// Largest degree the determinant construction accepts.
pub const MAX_DETERMINANT_DEGREE: usize = 12;

/// Pivots below this fraction of the largest moment count as singular.
pub const CONDITIONING_TOL: f64 = 1e-12;

/// Iterative-refinement passes after the initial solve.
const REFINEMENT_STEPS: usize = 8;

/// The weight a moment table belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentFamily {
    /// `w(θ; a, b)`.
    Asc,
    /// `w(θ; a, b, c)`.
    Cdqh,
    /// `w(θ; a, b, c, d)`.
    Aw,
}

impl MomentFamily {
    pub fn arity(&self) -> usize {
        match self {
            MomentFamily::Asc => 2,
            MomentFamily::Cdqh => 3,
            MomentFamily::Aw => 4,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MomentFamily::Asc => "asc",
            MomentFamily::Cdqh => "cdqh",
            MomentFamily::Aw => "aw",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSource {
    ClosedForm,
    Quadrature,
}

/// `m[k][j]` for `k ≤ K`, `j ≤ J`; rows follow `B_k(b)`, columns `A_j(a)`.
///
/// Closed-form tables also keep the low words of their double-double values,
/// which the determinant solve uses to refine its answer.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    entries: Vec<Vec<f64>>,
    low: Vec<Vec<f64>>,
    family: MomentFamily,
    params: Vec<f64>,
    source: MomentSource,
}

impl MomentTable {
    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.entries[k][j]
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn family(&self) -> MomentFamily {
        self.family
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn source(&self) -> MomentSource {
        self.source
    }

    /// Largest `|m_{k,j} - other_{k,j}| / |other_{k,j}|`.
    pub fn max_relative_deviation(&self, other: &MomentTable) -> f64 {
        let mut dev = 0.0f64;
        for (r, s) in self.entries.iter().zip(&other.entries) {
            for (u, v) in r.iter().zip(s) {
                dev = dev.max((u - v).abs() / v.abs());
            }
        }
        dev
    }

    fn entry_dd(&self, k: usize, j: usize) -> DoubleDouble {
        DoubleDouble {
            hi: self.entries[k][j],
            lo: self.low[k][j],
        }
    }

    fn max_abs(&self, n: usize) -> f64 {
        self.entries[..n]
            .iter()
            .flat_map(|r| r[..n].iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    fn block(&self, rows: usize, cols: usize) -> DMatrix<f64> {
        DMatrix::from_fn(rows, cols, |k, j| self.entries[k][j])
    }
}

fn check_params(family: MomentFamily, params: &[f64]) -> Result<()> {
    if params.len() != family.arity() {
        return Err(QError::InvalidParameter(format!(
            "{} moments take {} parameters, got {}",
            family.name(),
            family.arity(),
            params.len()
        )));
    }
    if let Some(p) = params.iter().find(|p| !(p.abs() < 1.0)) {
        return Err(QError::InvalidParameter(format!("moment parameters need |p| < 1, got {p}")));
    }
    Ok(())
}

/// Closed-form modified moments:
///
/// - ASC: `(ab;q)_{k+j} / ((q;q)_∞ (ab;q)_∞)`;
/// - CDqH: `(ab;q)_{k+j} (ac;q)_j (bc;q)_k / ((q;q)_∞ (ab, ac, bc;q)_∞)`;
/// - AW: `c_0 (ab;q)_{k+j} (ac, ad;q)_j (bc, bd;q)_k / (abcd;q)_{k+j}` with
///   `c_0 = (abcd;q)_∞ / ((q;q)_∞ (ab, ac, ad, bc, bd, cd;q)_∞)`.
pub fn modified_moments(
    family: MomentFamily,
    params: &[f64],
    k_max: usize,
    j_max: usize,
    ctx: &QContext,
) -> Result<MomentTable> {
    check_params(family, params)?;
    let q = ctx.q();
    let (a, b) = (params[0], params[1]);
    let c = params.get(2).copied().unwrap_or(0.0);
    let d = params.get(3).copied().unwrap_or(0.0);
    let abcd = a * b * c * d;
    let mut c0 = qpoch_inf(abcd, ctx)? / (qpoch_inf(q, ctx)? * qpoch_inf(a * b, ctx)?);
    for p in [a * c, a * d, b * c, b * d, c * d] {
        c0 /= qpoch_inf(p, ctx)?;
    }
    let poch = |p: f64, k: usize| -> DoubleDouble {
        let (p, q) = (DoubleDouble::from_f64(p), DoubleDouble::from_f64(q));
        let mut v = DoubleDouble::ONE;
        let mut qi = DoubleDouble::ONE;
        for _ in 0..k {
            v = v * DoubleDouble::one_minus(p * qi);
            qi = qi * q;
        }
        v
    };
    let c0 = DoubleDouble::from_f64(c0);
    let mut entries = vec![vec![0.0; j_max + 1]; k_max + 1];
    let mut low = entries.clone();
    for k in 0..=k_max {
        for j in 0..=j_max {
            let m = c0 * poch(a * b, k + j) * poch(a * c, j) * poch(a * d, j) * poch(b * c, k) * poch(b * d, k)
                / poch(abcd, k + j);
            entries[k][j] = m.hi;
            low[k][j] = m.lo;
        }
    }
    Ok(MomentTable {
        entries,
        low,
        family,
        params: params.to_vec(),
        source: MomentSource::ClosedForm,
    })
}

/// The same table from quadrature of `A_j(x; a) B_k(x; b) w(θ)`.
pub fn quadrature_moments(
    family: MomentFamily,
    params: &[f64],
    k_max: usize,
    j_max: usize,
    ctx: &QContext,
) -> Result<MomentTable> {
    check_params(family, params)?;
    let q = ctx.q();
    let (a, b) = (params[0], params[1]);
    let w = ContinuousWeight::new(params)?;
    let mut entries = vec![vec![0.0; j_max + 1]; k_max + 1];
    for (k, row) in entries.iter_mut().enumerate() {
        for (j, m) in row.iter_mut().enumerate() {
            let f = |pt: crate::weights::EvalPoint| pochhammer_pair(a, j, pt.x(), q) * pochhammer_pair(b, k, pt.x(), q);
            *m = integrate_weighted(f, &w, ctx)?.value;
        }
    }
    Ok(MomentTable {
        low: vec![vec![0.0; j_max + 1]; k_max + 1],
        entries,
        family,
        params: params.to_vec(),
        source: MomentSource::Quadrature,
    })
}

/// `D_n`, the determinant of the leading `(n+1) × (n+1)` block.
///
/// `D_n` falls off roughly like `q^{n²}` relative to its entries, below what
/// an f64 factorization resolves already at `n = 6`, so the LU with partial
/// pivoting runs in double-double on the full table values.
pub fn hankel_det(table: &MomentTable, n: usize) -> Result<f64> {
    check_size(table, n + 1, n + 1)?;
    let size = n + 1;
    let mut m: Vec<Vec<DoubleDouble>> = (0..size)
        .map(|k| (0..size).map(|j| table.entry_dd(k, j)).collect())
        .collect();
    let mut det = DoubleDouble::ONE;
    for col in 0..size {
        let pivot = (col..size)
            .max_by(|&r, &s| m[r][col].hi.abs().total_cmp(&m[s][col].hi.abs()))
            .expect("non-empty column");
        if m[pivot][col].hi == 0.0 {
            return Ok(0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det = det * p;
        for r in (col + 1)..size {
            let f = m[r][col] / p;
            for c in col..size {
                let v = f * m[col][c];
                m[r][c] = m[r][c] - v;
            }
        }
    }
    Ok(det.to_f64())
}

fn check_size(table: &MomentTable, rows: usize, cols: usize) -> Result<()> {
    if table.rows() < rows || table.cols() < cols {
        return Err(QError::InvalidParameter(format!(
            "moment table is {}×{}, need at least {rows}×{cols}",
            table.rows(),
            table.cols()
        )));
    }
    Ok(())
}

/// The monic degree-`n` polynomial `Σ_j y_j A_j(x; a)` with
/// `Σ_j m_{k,j} y_j = 0` for `k < n`.
///
/// Expanding the bordered determinant along its last row gives the `y_j` as
/// signed minors; by Cramer's rule they are the solution of the `n × n` system
/// `Σ_{j<n} m_{k,j} y_j = -m_{k,n} y_n`, which is solved with one LU
/// factorization. `y_n = 1 / ((-2a)^n q^{n(n-1)/2})` makes the result monic.
pub fn build_poly_from_moments(table: &MomentTable, n: usize, ctx: &QContext) -> Result<PolyRep> {
    if n > MAX_DETERMINANT_DEGREE {
        return Err(QError::CapExceeded {
            requested: n,
            cap: MAX_DETERMINANT_DEGREE,
        });
    }
    let q = ctx.q();
    let a = table.params[0];
    if a == 0.0 && n > 0 {
        return Err(QError::Domain("the A_j basis has no degree-n term when a = 0".into()));
    }
    let lead = 1.0 / ((-2.0 * a).powi(n as i32) * q.powi((n * n.saturating_sub(1) / 2) as i32));
    if n == 0 {
        return PolyRep::pochhammer(a, vec![], vec![lead], ctx);
    }
    check_size(table, n, n + 1)?;
    let lu = table.block(n, n).lu();
    let scale = table.max_abs(n);
    let min_pivot = lu.u().diagonal().iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if !(min_pivot >= CONDITIONING_TOL * scale) {
        return Err(QError::Conditioning(format!(
            "smallest pivot {min_pivot:e} of D_{} against moment scale {scale:e}",
            n - 1
        )));
    }
    let lead_dd = DoubleDouble::from_f64(lead);
    let rhs: Vec<DoubleDouble> = (0..n).map(|k| -(table.entry_dd(k, n) * lead_dd)).collect();
    let singular = || QError::Conditioning(format!("D_{} is singular", n - 1));
    let mut y = lu
        .solve(&DVector::from_fn(n, |k, _| rhs[k].to_f64()))
        .ok_or_else(singular)?;
    // The system is close to rank one when the anchor is small, so the f64
    // solve alone loses most of its digits; residuals in double-double
    // recover them.
    for _ in 0..REFINEMENT_STEPS {
        let resid = DVector::from_fn(n, |k, _| {
            let mut r = rhs[k];
            for j in 0..n {
                r = r - table.entry_dd(k, j) * DoubleDouble::from_f64(y[j]);
            }
            r.to_f64()
        });
        let dy = lu.solve(&resid).ok_or_else(singular)?;
        y += &dy;
        if dy.amax() <= f64::EPSILON * y.amax() {
            break;
        }
    }
    let mut coeffs: Vec<f64> = y.iter().copied().collect();
    coeffs.push(lead);
    PolyRep::pochhammer(a, vec![], coeffs, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{asc_poly, aw_poly, cdqh_poly};
    use crate::qcore::qpoch_finite;
    use crate::weights::EvalPoint;
    use std::f64::consts::PI;

    fn ctx() -> QContext {
        QContext::new(0.5).unwrap()
    }

    const AW: [f64; 4] = [0.3, 0.2, 0.1, 0.15];

    #[test]
    fn first_moment_is_total_mass() {
        let c = ctx();
        let t = modified_moments(MomentFamily::Asc, &[0.3, 0.2], 0, 0, &c).unwrap();
        let expect = 1.0 / (qpoch_inf(0.5, &c).unwrap() * qpoch_inf(0.06, &c).unwrap());
        assert!((t.get(0, 0) - expect).abs() < 1e-15 * expect);
        assert_eq!(hankel_det(&t, 0).unwrap(), t.get(0, 0));
    }

    #[test]
    fn asc_table_is_hankel() {
        let c = ctx();
        let t = modified_moments(MomentFamily::Asc, &[0.3, 0.2], 6, 6, &c).unwrap();
        for k in 0..=6 {
            for j in 0..=6 {
                let s = k + j;
                let (k2, j2) = if s <= 6 { (0, s) } else { (s - 6, 6) };
                let v = t.get(k2, j2);
                assert!((t.get(k, j) - v).abs() <= 5.0 * f64::EPSILON * v.abs());
            }
        }
    }

    #[test]
    fn askey_wilson_with_d_zero_is_dual_hahn() {
        let c = ctx();
        let aw = modified_moments(MomentFamily::Aw, &[0.3, 0.2, 0.1, 0.0], 4, 4, &c).unwrap();
        let cd = modified_moments(MomentFamily::Cdqh, &[0.3, 0.2, 0.1], 4, 4, &c).unwrap();
        assert_eq!(aw.entries(), cd.entries());
    }

    #[test]
    fn askey_wilson_factors_into_little_jacobi_moments() {
        let c = ctx();
        let q = 0.5;
        let [a, b, cc, d] = AW;
        let t = modified_moments(MomentFamily::Aw, &AW, 5, 5, &c).unwrap();
        let c0 = t.get(0, 0);
        for k in 0..=5 {
            for j in 0..=5 {
                let stripped = t.get(k, j)
                    / (qpoch_finite(b * cc, k, q) * qpoch_finite(b * d, k, q))
                    / (qpoch_finite(a * cc, j, q) * qpoch_finite(a * d, j, q));
                let cn = c0 * qpoch_finite(a * b, k + j, q) / qpoch_finite(a * b * cc * d, k + j, q);
                assert!((stripped - cn).abs() < 1e-10 * cn);
            }
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let c = ctx();
        let cases: [(MomentFamily, &[f64]); 3] = [
            (MomentFamily::Asc, &[0.3, 0.2]),
            (MomentFamily::Cdqh, &[0.3, 0.2, 0.1]),
            (MomentFamily::Aw, &AW),
        ];
        for (fam, p) in cases {
            let exact = modified_moments(fam, p, 4, 4, &c).unwrap();
            let quad = quadrature_moments(fam, p, 4, 4, &c).unwrap();
            assert!(quad.max_relative_deviation(&exact) < 1e-8, "{}", fam.name());
        }
    }

    #[test]
    fn hankel_determinants_are_positive_and_scale_with_rows() {
        let c = ctx();
        let t = modified_moments(MomentFamily::Asc, &[0.3, 0.2], 6, 6, &c).unwrap();
        for n in 0..=6 {
            assert!(hankel_det(&t, n).unwrap() > 0.0, "D_{n}");
        }
        // a power-of-two factor scales every entry exactly
        let mut scaled = t.clone();
        for v in scaled.entries[2].iter_mut().chain(scaled.low[2].iter_mut()) {
            *v *= 4.0;
        }
        let (d, ds) = (hankel_det(&t, 4).unwrap(), hankel_det(&scaled, 4).unwrap());
        assert!((ds - 4.0 * d).abs() < 1e-12 * ds.abs());
    }

    fn chebyshev() -> Vec<f64> {
        (0..20).map(|i| (PI * (i as f64 + 0.5) / 20.0).cos()).collect()
    }

    #[test]
    fn determinant_polynomials_match_hypergeometric_sums() {
        let c = ctx();
        let asc = modified_moments(MomentFamily::Asc, &[0.3, 0.2], 5, 6, &c).unwrap();
        let cd = modified_moments(MomentFamily::Cdqh, &[0.3, 0.2, 0.1], 5, 6, &c).unwrap();
        let aw = modified_moments(MomentFamily::Aw, &AW, 5, 6, &c).unwrap();
        for n in 0..=5 {
            let pairs = [
                (build_poly_from_moments(&asc, n, &c).unwrap(), asc_poly(n, 0.3, 0.2, &c).unwrap()),
                (build_poly_from_moments(&cd, n, &c).unwrap(), cdqh_poly(n, 0.3, 0.2, 0.1, &c).unwrap()),
                (build_poly_from_moments(&aw, n, &c).unwrap(), aw_poly(n, 0.3, 0.2, 0.1, 0.15, &c).unwrap()),
            ];
            for (det, sum) in pairs {
                let sum = sum.monic(&c).unwrap();
                for x in chebyshev() {
                    assert!((det.eval(x, &c) - sum.eval(x, &c)).abs() < 1e-7, "n={n}");
                }
            }
        }
    }

    #[test]
    fn determinant_polynomials_annihilate_lower_b_basis() {
        let c = ctx();
        let t = modified_moments(MomentFamily::Aw, &AW, 4, 5, &c).unwrap();
        let w = ContinuousWeight::new(&AW).unwrap();
        for n in 1..=4 {
            let p = build_poly_from_moments(&t, n, &c).unwrap();
            let pp = integrate_weighted(|pt: EvalPoint| p.eval_at(pt, &c).powi(2), &w, &c).unwrap().value;
            for k in 0..n {
                let bk = |pt: EvalPoint| pochhammer_pair(0.2, k, pt.x(), 0.5);
                let ip = integrate_weighted(|pt| p.eval_at(pt, &c) * bk(pt), &w, &c).unwrap().value;
                let bb = integrate_weighted(|pt| bk(pt).powi(2), &w, &c).unwrap().value;
                assert!(ip.abs() < 1e-7 * (pp * bb).sqrt(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn refuses_bad_requests() {
        let c = ctx();
        let t = modified_moments(MomentFamily::Asc, &[0.3, 0.2], 3, 3, &c).unwrap();
        assert!(matches!(build_poly_from_moments(&t, 13, &c), Err(QError::CapExceeded { .. })));
        assert!(build_poly_from_moments(&t, 5, &c).is_err());
        assert!(modified_moments(MomentFamily::Aw, &[0.3, 0.2], 3, 3, &c).is_err());
        let mut singular = t.clone();
        singular.entries[1] = singular.entries[0].clone();
        assert!(matches!(build_poly_from_moments(&singular, 3, &c), Err(QError::Conditioning(_))));
    }
}
