//! Ground truth from finite groups: fields, enumerated matrix groups, exact
//! character tables, Clifford data, Ω-pairings, brute-force solution counts,
//! Green characters of GL_n, block settings and Lang cosets.

pub mod block;
pub mod chartab;
pub mod clifford;
pub mod field;
pub mod fixture;
pub mod green;
pub mod group;
pub mod lang;
pub mod matrix;
pub mod samples;

pub use block::{build_block_setting, check_classification, reduced_formula_count, BaseGroup, BlockSetting};
pub use chartab::{character_table, CharacterTable};
pub use clifford::{
    brute_count, check_magic_formula, clifford_data, formula_count, omega_def, omega_properties, CharacterClifford,
    CliffordReport, CliffordSetting, OmegaReport, OmegaTables,
};
pub use field::{make_field, FiniteField};
pub use fixture::{CountLine, CountOutcome, Fixture};
pub use green::{c_check_oracle, find_nice_tuple, green_value, is_nice, multipartitions_of_type, type_degree, Multipartition};
pub use group::{conjugacy_classes, generate_group, generate_labeled, ConjugacyClasses, GroupTable, Label};
pub use lang::{lang_coset, twisted_sector_count, twisted_sector_counts, LangCoset, TwistedCount};
pub use matrix::Matrix;
pub use samples::{named_settings, NamedSetting};

use crate::combinat::CombinatError;
use crate::exactalg::ExactError;

/// Largest group for which a character table is computed.
pub const TABLE_MAX: usize = 2500;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {p}^{k} is too large")]
    TooLarge { p: u32, k: u32 },
    #[error("{what} exceeds the cap {limit}")]
    CapExceeded { what: &'static str, limit: u64 },
    #[error("singular matrix")]
    Singular,
    #[error("element set is not closed under multiplication")]
    NotClosed,
    #[error("generator labels do not define a homomorphism")]
    InconsistentLabels,
    #[error("character is not fixed by the quotient")]
    NotInvariant,
    #[error("coordinates of (a, b) do not generate the quotient")]
    NotGenerating,
    #[error("eigenvalues are not pairwise distinct")]
    NotRegular,
    #[error("eigenvalue tuple is not nice")]
    NotNice,
    #[error("no element of the required order")]
    NoSuchGamma,
    #[error("count is not divisible by the torus order")]
    NonExactQuotient,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
}

/// Enumeration limits. Both can be raised by callers that accept the cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_group_order: usize,
    pub max_pair_iterations: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self { max_group_order: 20_000, max_pair_iterations: 30_000_000 }
    }
}
