use super::polyrep::PolyRep;
use crate::error::{QError, Result};
use crate::qcore::dd::DoubleDouble;
use crate::qcore::QContext;

const POLE_TOL: f64 = 1e-12;

pub(crate) fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if v.abs() < 1.0 {
        Ok(())
    } else {
        Err(QError::InvalidParameter(format!("{name} = {v} must satisfy |{name}| < 1")))
    }
}

fn check_lattice_a(a: f64, q: f64) -> Result<()> {
    let aq = a * q;
    if aq > 0.0 && aq < 1.0 {
        Ok(())
    } else {
        Err(QError::InvalidParameter(format!("need 0 < aq < 1, got a = {a}")))
    }
}

/// Coefficients `(q^{-n};q)_k q^k ∏(num;q)_k / ((q;q)_k ∏(den;q)_k)` for `k ≤ n`.
fn terminating_coeffs(n: usize, num: &[f64], den: &[f64], ctx: &QContext) -> Result<Vec<f64>> {
    let q = ctx.q();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = 1.0;
    coeffs.push(c);
    let mut qk = 1.0;
    for k in 0..n {
        let mut ratio = (1.0 - q.powi(k as i32 - n as i32)) * q / (1.0 - qk * q);
        for &u in num {
            ratio *= 1.0 - u * qk;
        }
        for &l in den {
            let f = 1.0 - l * qk;
            if f.abs() < POLE_TOL {
                return Err(QError::Domain(format!("({l};q)_{} vanishes", k + 1)));
            }
            ratio /= f;
        }
        c *= ratio;
        coeffs.push(c);
        qk *= q;
    }
    Ok(coeffs)
}

/// `Σ_k (q^{-n};q)_k q^k ∏(num;q)_k / ((q;q)_k ∏(den;q)_k) · e_k(x)` with
/// `e_k = (a e^{iθ}, a e^{-iθ}; q)_k / ∏_c (a c;q)_k`, carried out entirely in
/// double-double. The sum cancels heavily when `a` is small, so this is the
/// accurate counterpart of building the coefficients and calling `eval`.
pub(crate) fn pochhammer_sum_dd(
    n: usize,
    num: &[f64],
    den: &[f64],
    anchor: f64,
    normalized_by: &[f64],
    x: f64,
    ctx: &QContext,
) -> Result<f64> {
    let dd = DoubleDouble::from_f64;
    let one = DoubleDouble::ONE;
    let q = dd(ctx.q());
    let a = dd(anchor);
    let two_x = dd(2.0 * x);
    let mut q_minus_n = one;
    for _ in 0..n {
        q_minus_n = q_minus_n / q;
    }
    let den_all: Vec<f64> = den
        .iter()
        .copied()
        .chain(normalized_by.iter().map(|c| c * anchor))
        .collect();
    let mut term = one;
    let mut sum = one;
    let mut qk = one;
    for k in 0..n {
        let aqk = a * qk;
        let mut ratio = (one - q_minus_n * qk) * q / (one - qk * q);
        ratio = ratio * (one + aqk * aqk - two_x * aqk);
        for &u in num {
            ratio = ratio * (one - dd(u) * qk);
        }
        for &l in &den_all {
            let f = one - dd(l) * qk;
            if f.hi.abs() < POLE_TOL {
                return Err(QError::Domain(format!("({l};q)_{} vanishes", k + 1)));
            }
            ratio = ratio / f;
        }
        term = term * ratio;
        sum = sum + term;
        qk = qk * q;
    }
    Ok(sum.to_f64())
}

/// Little q-Laguerre `q_n(x;a|q) = 2φ1(q^{-n}, 0; aq; q, qx)`, normalized by `q_n(0) = 1`.
pub fn little_qlaguerre(n: usize, a: f64, ctx: &QContext) -> Result<PolyRep> {
    check_lattice_a(a, ctx.q())?;
    PolyRep::monomial(terminating_coeffs(n, &[], &[a * ctx.q()], ctx)?)
}

/// Little q-Jacobi `q_n(x;a,b|q) = 2φ1(q^{-n}, ab q^{n+1}; aq; q, qx)`.
pub fn little_qjacobi(n: usize, a: f64, b: f64, ctx: &QContext) -> Result<PolyRep> {
    let q = ctx.q();
    check_lattice_a(a, q)?;
    if !(b * q < 1.0) {
        return Err(QError::InvalidParameter(format!("need bq < 1, got b = {b}")));
    }
    let top = a * b * q.powi(n as i32 + 1);
    PolyRep::monomial(terminating_coeffs(n, &[top], &[a * q], ctx)?)
}

/// Al-Salam–Chihara `p_n(x;a,b|q) = 3φ2(q^{-n}, a e^{iθ}, a e^{-iθ}; ab, 0; q, q)`.
pub fn asc_poly(n: usize, a: f64, b: f64, ctx: &QContext) -> Result<PolyRep> {
    check_open_unit("a", a)?;
    check_open_unit("b", b)?;
    let coeffs = terminating_coeffs(n, &[], &[a * b], ctx)?;
    PolyRep::pochhammer(a, vec![], coeffs, ctx)
}

/// Continuous dual q-Hahn `p_n(x;a,b,c|q) = 3φ2(q^{-n}, a e^{iθ}, a e^{-iθ}; ab, ac; q, q)`.
pub fn cdqh_poly(n: usize, a: f64, b: f64, c: f64, ctx: &QContext) -> Result<PolyRep> {
    check_open_unit("a", a)?;
    check_open_unit("b", b)?;
    check_open_unit("c", c)?;
    let coeffs = terminating_coeffs(n, &[], &[a * b], ctx)?;
    PolyRep::pochhammer(a, vec![c], coeffs, ctx)
}

/// Askey–Wilson `p_n(x;a,b,c,d|q) = 4φ3(q^{-n}, abcd q^{n-1}, a e^{iθ}, a e^{-iθ}; ab, ac, ad; q, q)`.
pub fn aw_poly(n: usize, a: f64, b: f64, c: f64, d: f64, ctx: &QContext) -> Result<PolyRep> {
    check_open_unit("a", a)?;
    check_open_unit("b", b)?;
    check_open_unit("c", c)?;
    check_open_unit("d", d)?;
    let top = a * b * c * d * ctx.q().powi(n as i32 - 1);
    let coeffs = terminating_coeffs(n, &[top], &[a * b], ctx)?;
    PolyRep::pochhammer(a, vec![c, d], coeffs, ctx)
}
