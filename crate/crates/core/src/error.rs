use crate::poly::VariableId;
use crate::roots::Root;
use thiserror::Error;

/// Errors surfaced by the toolkit. Each variant carries a stable
/// machine-readable code for the command-line layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("bad composition: {0}")]
    BadComposition(String),

    #[error("root {0} does not lie in the nilradical root set M")]
    RootNotInM(Root),

    #[error("root {0} does not lie in the broad base T")]
    RootNotInT(Root),

    #[error("admissible pairs {first:?} and {second:?} both produce phi = {phi}")]
    DuplicatePhi {
        phi: Root,
        first: (Root, Root),
        second: (Root, Root),
    },

    #[error("phi root {0} unexpectedly lies in the base S")]
    PhiInBase(Root),

    #[error("conjugation produced a nonzero entry at ({row},{col}) outside the nilradical")]
    LeavesNilradical { row: usize, col: usize },

    #[error("evaluation point does not assign variable {0}")]
    MissingAssignment(VariableId),

    #[error("degenerate orbit: leading product {product} vanishes while solving for c_{xi}")]
    DegenerateOrbit { xi: Root, product: String },

    #[error("polynomial is not U-invariant: broken by generator g_{generator}(t)")]
    NotInvariant { generator: Root },

    #[error("leading coefficient for {xi} is not a monomial in the generators: {actual}")]
    NonMonomialDenominator { xi: Root, actual: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl CoreError {
    /// Stable snake_case code for JSON error reports.
    pub fn code(&self) -> &'static str {
        match self {
            CoreError::BadComposition(_) => "bad_composition",
            CoreError::RootNotInM(_) => "root_not_in_m",
            CoreError::RootNotInT(_) => "root_not_in_t",
            CoreError::DuplicatePhi { .. } => "duplicate_phi",
            CoreError::PhiInBase(_) => "phi_in_base",
            CoreError::LeavesNilradical { .. } => "leaves_nilradical",
            CoreError::MissingAssignment(_) => "missing_assignment",
            CoreError::DegenerateOrbit { .. } => "degenerate_orbit",
            CoreError::NotInvariant { .. } => "not_invariant",
            CoreError::NonMonomialDenominator { .. } => "non_monomial_denominator",
            CoreError::InvalidInput(_) => "invalid_input",
        }
    }
}
