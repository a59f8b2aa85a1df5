//! q-series arithmetic: q-Pochhammer symbols and basic hypergeometric series.

mod context;
pub mod dd;
mod pochhammer;
mod series;

pub use context::{
    Precision, QContext, SeriesValue, DEFAULT_EPS_TRUNC, DEFAULT_MAX_TERMS, DEFAULT_ORDER_CAP,
    DEFAULT_ORTHO_TOL, DEFAULT_QUAD_TOL,
};
pub use pochhammer::{multi_qpoch, qpoch, qpoch_finite, qpoch_inf, PochOrder};
pub use series::{phi_coefficients, phi_series, terminating_degree, TERMINATION_TOL};
