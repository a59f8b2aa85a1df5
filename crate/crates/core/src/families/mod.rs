//! The classical single-index families and their polynomial representation.

mod classical;
mod genfun;
mod gram;
mod polyrep;

pub use classical::{asc_poly, aw_poly, cdqh_poly, little_qjacobi, little_qlaguerre};
pub use genfun::{
    big_qhermite_from_genfun, kernel_coefficients, qhermite_from_genfun, qn_asc, qn_from_genfun,
};
pub use gram::{gram_matrix, Family, FamilyBasis, GramMatrix, FAMILY_NAMES};
pub use polyrep::{Basis, PolyRep};
