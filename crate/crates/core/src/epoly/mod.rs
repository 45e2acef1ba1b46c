//! Assembly of E-polynomials and point-count polynomials from the type sums,
//! plus the structural checks they must satisfy.

mod assemble;
mod checks;

pub use assemble::{
    fermionic_shift, isotypic_epoly, isotypic_epoly_via_phi_stp, point_count_poly, sector_epoly,
    sector_epoly_from_counts, stringy_epoly, EPolyMeta, EPolyResult, IsotypicResult,
    SRangeConvention, Variant,
};
pub use checks::{structural_checks, CheckEntry, StructuralReport};

use crate::arith::ArithError;
use crate::combinat::CombinatError;
use crate::exactalg::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EpolyError {
    #[error("assembled sum is not an integer polynomial ({0})")]
    NonPolynomial(ExactError),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("isotypic routes disagree: {first} vs {second}")]
    RouteDisagreement { first: String, second: String },
    #[error("character sum over the torus is not rational")]
    IrrationalSum,
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
