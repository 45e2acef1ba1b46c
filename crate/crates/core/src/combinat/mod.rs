//! Partitions, multipartition types and the combinatorial constants that
//! enter the point-count formulas.

mod constants;
mod grading;
mod partition;
mod types;

pub use constants::{
    c_check, c_const, nu, theta_closed_form_validated, theta_count, theta_enumerate,
    THETA_VALIDATED_MAX,
};
pub use grading::{grading_class_count, grading_classes, GradingClass};
pub use partition::{chi_dim, enumerate_partitions, Partition};
pub use types::{enumerate_types, PartitionType};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum CombinatError {
    #[error("type of size {size} cannot be scaled by {a} to size {n}")]
    SizeMismatch { n: u32, a: u32, size: u32 },
    #[error("{a} does not divide {n}")]
    NotDivisor { n: u32, a: u32 },
    #[error("parameters must be positive")]
    ZeroParameter,
    #[error("closed form for the family count failed validation and n is too large to enumerate")]
    ClosedFormRejected,
}
