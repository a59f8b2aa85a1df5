#![allow(dead_code)]

use std::f64::consts::PI;

use qaskey::weights::EvalPoint;
use qaskey::QContext;

pub fn ctx() -> QContext {
    QContext::new(0.5).unwrap()
}

/// `cos(π (i + 1/2) / m)` as evaluation points.
pub fn chebyshev(m: usize) -> Vec<EvalPoint> {
    (0..m)
        .map(|i| EvalPoint::from_theta(PI * (i as f64 + 0.5) / m as f64).unwrap())
        .collect()
}

pub fn chebyshev_x(m: usize) -> Vec<f64> {
    chebyshev(m).into_iter().map(|p| p.x()).collect()
}

pub fn rel_err(got: f64, expect: f64) -> f64 {
    (got - expect).abs() / expect.abs()
}
