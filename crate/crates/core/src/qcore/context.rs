use crate::error::{QError, Result};

/// Arithmetic mode used by the series and product loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// IEEE double with compensated summation.
    #[default]
    Standard,
    /// Double-double (~106-bit significand) accumulation.
    Extended,
}

impl std::str::FromStr for Precision {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" => Ok(Precision::Standard),
            "extended" => Ok(Precision::Extended),
            other => Err(QError::InvalidParameter(format!(
                "unknown precision mode '{other}' (expected standard|extended)"
            ))),
        }
    }
}

/// Global numeric context: the base `q` together with truncation and
/// tolerance policy shared by every operation.
#[derive(Debug, Clone, PartialEq)]
pub struct QContext {
    q: f64,
    p: f64,
    pub eps_trunc: f64,
    pub max_terms: usize,
    pub quad_tol: f64,
    pub ortho_tol: f64,
    /// Largest generating-function order the public extraction routines accept.
    pub order_cap: usize,
    pub precision: Precision,
}

pub const DEFAULT_EPS_TRUNC: f64 = 1e-14;
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;
pub const DEFAULT_ORTHO_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_TERMS: usize = 4096;
pub const DEFAULT_ORDER_CAP: usize = 64;

impl QContext {
    pub fn new(q: f64) -> Result<Self> {
        Self::with_tolerances(q, DEFAULT_EPS_TRUNC, DEFAULT_QUAD_TOL, DEFAULT_ORTHO_TOL)
    }

    pub fn with_tolerances(q: f64, eps_trunc: f64, quad_tol: f64, ortho_tol: f64) -> Result<Self> {
        let ctx = QContext {
            q,
            p: 1.0 / q,
            eps_trunc,
            max_terms: DEFAULT_MAX_TERMS,
            quad_tol,
            ortho_tol,
            order_cap: DEFAULT_ORDER_CAP,
            precision: Precision::Standard,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn extended(mut self) -> Self {
        self.precision = Precision::Extended;
        self
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Result<Self> {
        self.max_terms = max_terms;
        self.validate()?;
        Ok(self)
    }

    /// Checks every field invariant. Public fields can be edited directly,
    /// so callers that do so should re-validate.
    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(QError::InvalidParameter(format!(
                "q must lie strictly inside (0, 1), got {}",
                self.q
            )));
        }
        for (name, v) in [
            ("eps_trunc", self.eps_trunc),
            ("quad_tol", self.quad_tol),
            ("ortho_tol", self.ortho_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(QError::InvalidParameter(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        if self.max_terms < 8 {
            return Err(QError::InvalidParameter(format!(
                "max_terms must be at least 8, got {}",
                self.max_terms
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `p = 1/q`.
    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }
}

impl Default for QContext {
    fn default() -> Self {
        QContext::new(0.5).expect("default context is valid")
    }
}

/// Value of a truncated series or product with an estimate of what was cut off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub trunc_bound: f64,
    pub terms_used: usize,
}

impl SeriesValue {
    pub fn exact(value: f64, terms_used: usize) -> Self {
        SeriesValue {
            value,
            trunc_bound: 0.0,
            terms_used,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_base() {
        assert!(QContext::new(0.0).is_err());
        assert!(QContext::new(1.0).is_err());
        assert!(QContext::new(-0.3).is_err());
        assert!(QContext::new(f64::NAN).is_err());
    }

    #[test]
    fn p_is_reciprocal() {
        for q in [0.1, 0.3, 0.5, 0.77, 0.99] {
            let ctx = QContext::new(q).unwrap();
            assert!((ctx.p() * ctx.q() - 1.0).abs() < 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn tolerances_must_be_fractions() {
        assert!(QContext::with_tolerances(0.5, 0.0, 1e-12, 1e-8).is_err());
        assert!(QContext::with_tolerances(0.5, 1e-14, 1.0, 1e-8).is_err());
        assert!(QContext::with_tolerances(0.5, 1e-14, 1e-12, 2.0).is_err());
        assert!(QContext::default().with_max_terms(7).is_err());
        assert!(QContext::default().with_max_terms(8).is_ok());
    }

    #[test]
    fn precision_parses() {
        assert_eq!("extended".parse::<Precision>().unwrap(), Precision::Extended);
        assert_eq!(" Standard ".parse::<Precision>().unwrap(), Precision::Standard);
        assert!("quad".parse::<Precision>().is_err());
    }
}
