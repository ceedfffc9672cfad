//! Exact symbolic toolkit for the adjoint action of unipotent groups on the
//! nilradical of a parabolic subalgebra of gl(n).
//!
//! Given a block composition (r_1, ..., r_s), the crate computes the root
//! combinatorics of the nilradical (base, admissible pairs, broad base),
//! builds the attached invariant polynomials (minors M, pair sums L, broad
//! generators N), verifies invariance and algebraic independence with exact
//! rational arithmetic, and canonicalizes points of the nilradical by a
//! triangular solve on the slice spanned by the broad base.

pub mod error;
pub mod rng;
pub mod roots;
pub mod poly;
pub mod action;
pub mod generators;
pub mod canonical;
pub mod verify;

pub use error::CoreError;
pub use roots::{Composition, Root};
