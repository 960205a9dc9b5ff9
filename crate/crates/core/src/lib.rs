//! Closed-form solutions of nth-order linear fuzzy initial value problems by the
//! fuzzy Laplace transform under strongly generalized Hukuhara differentiability.
//!
//! - [`fuzzy`]: parametric fuzzy numbers and their arithmetic.
//! - [`laplace`]: polynomials, rational functions, roots, partial fractions, and
//!   the closed-form transform pair.
//! - [`solver`]: the Laplace-domain endpoint system for every differentiability case.
//! - [`oracle`]: RK4 integration of the equivalent crisp endpoint ODE system.
//! - [`problem`]: the JSON problem-file schema.

pub mod fuzzy;
pub mod laplace;
pub mod oracle;
pub mod problem;
pub mod solver;

pub use fuzzy::{FuzzyNumber, HDifference, RGrid, TriangularSpec};
pub use laplace::{ClosedFormSignal, Polynomial, RationalFunction};
pub use solver::{CaseVector, Diff, FivProblem, FuzzySolution};
