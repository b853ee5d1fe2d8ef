//! Decides whether a finitely presented algebra over ℚ or 𝔽_p has
//! infinitely many equivalence classes of semisimple representations of a
//! fixed dimension n.
//!
//! The pipeline evaluates the defining relations at generic n×n matrices,
//! collects the characteristic-polynomial coefficients of all words of
//! length at most n, and tests each one for algebraicity over the ground
//! field modulo the ideal of relation entries. One transcendental
//! coefficient means infinitely many classes.

pub mod field;
pub mod monomial;
pub mod poly;
pub mod groebner;
pub mod certificate;

pub use field::{Field, FieldElem, FieldError, FieldSpec, PrimeField, Rationals};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;
pub mod expr;
pub mod free_algebra;
pub mod matrices;
pub mod detector;
pub mod report;
pub mod cli;

pub use detector::{detect, Answer, CandidateCoefficient, CoefficientSet, DetectOptions, Verdict};
pub use free_algebra::{parse_presentation, NcPoly, Presentation, Word};
pub use report::RunReport;
