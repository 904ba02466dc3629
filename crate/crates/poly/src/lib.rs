//! Algebraic substrate for the Nullstellensatz prover: prime fields,
//! sparse monomials, polynomials over GF(p) and ordered polynomial systems.
//!
//! Variables are indexed from zero internally and printed 1-based
//! (`x1` is variable 0), matching the 1-based vertex numbering of graphs.

mod error;
mod field;
mod monomial;
mod polynomial;
mod system;
mod text;

pub use error::PolyError;
pub use field::FieldSpec;
pub use monomial::{binomial, monomials_of_degree, monomials_up_to, DegreeFilter, Monomial};
pub use polynomial::Polynomial;
pub use system::{PolySystem, SourceTag};

pub type Result<T> = std::result::Result<T, PolyError>;
