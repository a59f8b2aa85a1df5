//! Basic hypergeometric orthogonal polynomials on `[-1, 1]` and the q-lattice,
//! the lifting transforms that connect them, and their multiple orthogonal
//! extensions.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: q-Pochhammer symbols and `rφs` series with controlled truncation.
//! - [`weights`]: weight functions, quadrature and discrete q-lattice inner products.
//! - [`families`]: the classical families (little q-Laguerre/Jacobi, Al-Salam–Chihara,
//!   continuous dual q-Hahn, Askey–Wilson, continuous (big) q-Hermite).
//! - [`transforms`]: the lifting transforms `T_a`, `T_{a,c}`, `T_{a,c,d}`.
//! - [`multifam`]: multiple little q-Laguerre/Jacobi and the three continuous
//!   multiple families built from them.
//! - [`determinants`]: modified moments and bordered-determinant construction.
//! - [`cli`]: the `qaskey` command-line front end.

pub mod cli;
pub mod determinants;
pub mod error;
pub mod families;
pub mod multifam;
pub mod qcore;
pub mod transforms;
pub mod weights;

pub use error::{QError, Result};
pub use qcore::{PochOrder, Precision, QContext, SeriesValue};
