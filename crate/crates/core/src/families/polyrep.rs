use crate::error::{QError, Result};
use crate::qcore::QContext;
use crate::weights::EvalPoint;

/// Relative size below which a factor `1 - a c q^k` counts as a pole.
const POLE_TOL: f64 = 1e-12;

/// The basis a [`PolyRep`] is expanded in.
#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    /// `x^k`.
    Monomial,
    /// `(a e^{iθ}, a e^{-iθ}; q)_k / ∏_c (a c; q)_k` with `a = anchor`.
    Pochhammer { anchor: f64, normalized_by: Vec<f64> },
}

/// A polynomial given by its coefficients over a [`Basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct PolyRep {
    basis: Basis,
    coeffs: Vec<f64>,
}

impl PolyRep {
    pub fn monomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(QError::InvalidParameter("empty coefficient list".into()));
        }
        Ok(PolyRep {
            basis: Basis::Monomial,
            coeffs,
        })
    }

    pub fn pochhammer(anchor: f64, normalized_by: Vec<f64>, coeffs: Vec<f64>, ctx: &QContext) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(QError::InvalidParameter("empty coefficient list".into()));
        }
        if normalized_by.len() > 2 {
            return Err(QError::InvalidParameter(format!(
                "at most two basis normalizers, got {}",
                normalized_by.len()
            )));
        }
        let q = ctx.q();
        for &c in &normalized_by {
            let mut qk = 1.0;
            for k in 0..coeffs.len().saturating_sub(1) {
                if (1.0 - anchor * c * qk).abs() < POLE_TOL {
                    return Err(QError::Domain(format!(
                        "({anchor}·{c}; q)_{} vanishes",
                        k + 1
                    )));
                }
                qk *= q;
            }
        }
        Ok(PolyRep {
            basis: Basis::Pochhammer {
                anchor,
                normalized_by,
            },
            coeffs,
        })
    }

    pub fn constant(c: f64) -> Self {
        PolyRep {
            basis: Basis::Monomial,
            coeffs: vec![c],
        }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monomial(&self) -> bool {
        matches!(self.basis, Basis::Monomial)
    }

    /// Same coefficients over another basis.
    pub(crate) fn retag(&self, basis: Basis) -> Self {
        PolyRep {
            basis,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Evaluates at any real `x`; the Pochhammer basis is built up factor by factor.
    pub fn eval(&self, x: f64, ctx: &QContext) -> f64 {
        match &self.basis {
            Basis::Monomial => self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c),
            Basis::Pochhammer {
                anchor,
                normalized_by,
            } => {
                let q = ctx.q();
                let a = *anchor;
                let mut elem = 1.0;
                let mut aqk = a;
                let mut qk = 1.0;
                let mut sum = self.coeffs[0];
                for &c in &self.coeffs[1..] {
                    elem *= 1.0 + aqk * aqk - 2.0 * aqk * x;
                    for &n in normalized_by {
                        elem /= 1.0 - a * n * qk;
                    }
                    sum += c * elem;
                    aqk *= q;
                    qk *= q;
                }
                sum
            }
        }
    }

    /// `Σ |c_k e_k(x)|`, the scale against which rounding in [`PolyRep::eval`]
    /// is measured.
    pub fn eval_abs(&self, x: f64, ctx: &QContext) -> f64 {
        match &self.basis {
            Basis::Monomial => self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x.abs() + c.abs()),
            Basis::Pochhammer {
                anchor,
                normalized_by,
            } => {
                let q = ctx.q();
                let a = *anchor;
                let mut elem = 1.0f64;
                let mut aqk = a;
                let mut qk = 1.0;
                let mut sum = self.coeffs[0].abs();
                for &c in &self.coeffs[1..] {
                    elem *= 1.0 + aqk * aqk - 2.0 * aqk * x;
                    for &n in normalized_by {
                        elem /= 1.0 - a * n * qk;
                    }
                    sum += (c * elem).abs();
                    aqk *= q;
                    qk *= q;
                }
                sum
            }
        }
    }

    pub fn eval_at(&self, pt: EvalPoint, ctx: &QContext) -> f64 {
        self.eval(pt.x(), ctx)
    }

    /// Coefficient of `x^degree`.
    pub fn leading_coefficient(&self, ctx: &QContext) -> f64 {
        let n = self.degree();
        let cn = self.coeffs[n];
        match &self.basis {
            Basis::Monomial => cn,
            Basis::Pochhammer {
                anchor,
                normalized_by,
            } => {
                let q = ctx.q();
                let mut lead = cn;
                let mut qk = 1.0;
                for _ in 0..n {
                    lead *= -2.0 * anchor * qk;
                    for &c in normalized_by {
                        lead /= 1.0 - anchor * c * qk;
                    }
                    qk *= q;
                }
                lead
            }
        }
    }

    /// Expands into the monomial basis.
    pub fn to_monomial(&self, ctx: &QContext) -> PolyRep {
        match &self.basis {
            Basis::Monomial => self.clone(),
            Basis::Pochhammer {
                anchor,
                normalized_by,
            } => {
                let q = ctx.q();
                let a = *anchor;
                let n = self.degree();
                let mut out = vec![0.0; n + 1];
                let mut elem = vec![0.0; n + 1];
                elem[0] = 1.0;
                let mut aqk = a;
                let mut qk = 1.0;
                out[0] = self.coeffs[0];
                for k in 0..n {
                    // elem <- elem · (1 + a²q^{2k} - 2 a q^k x) / ∏ (1 - a c q^k)
                    let c0 = 1.0 + aqk * aqk;
                    let c1 = -2.0 * aqk;
                    let scale: f64 = normalized_by.iter().map(|&c| 1.0 / (1.0 - a * c * qk)).product();
                    for i in (0..=k + 1).rev() {
                        let lower = if i > 0 { elem[i - 1] } else { 0.0 };
                        elem[i] = (c0 * elem[i] + c1 * lower) * scale;
                    }
                    let ck = self.coeffs[k + 1];
                    for i in 0..=k + 1 {
                        out[i] += ck * elem[i];
                    }
                    aqk *= q;
                    qk *= q;
                }
                PolyRep {
                    basis: Basis::Monomial,
                    coeffs: out,
                }
            }
        }
    }

    /// Multiplies every coefficient by `s`.
    pub fn scaled(&self, s: f64) -> PolyRep {
        PolyRep {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Divides by the leading monomial coefficient.
    pub fn monic(&self, ctx: &QContext) -> Result<PolyRep> {
        let lead = self.leading_coefficient(ctx);
        if lead == 0.0 || !lead.is_finite() {
            return Err(QError::Domain(format!("leading coefficient is {lead}")));
        }
        Ok(self.scaled(1.0 / lead))
    }

    /// `α·self + β·other`; both must share a basis.
    pub fn linear_combination(&self, alpha: f64, other: &PolyRep, beta: f64) -> Result<PolyRep> {
        if self.basis != other.basis {
            return Err(QError::InvalidParameter("polynomials use different bases".into()));
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        let coeffs = (0..len)
            .map(|i| alpha * get(&self.coeffs, i) + beta * get(&other.coeffs, i))
            .collect();
        Ok(PolyRep {
            basis: self.basis.clone(),
            coeffs,
        })
    }
}
