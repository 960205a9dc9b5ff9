//! Rational functions in the Laplace variable and the closed-form transform pair.
//!
//! Inversion goes through partial fractions over the complex roots of the
//! denominator; images of exponential-polynomial signals come from the usual
//! transform table. [`numeric_flt`] computes the transform by quadrature and is
//! used only as an independent check.

mod poly;
mod quadrature;
mod rational;
mod roots;
mod signal;
mod transform;

use thiserror::Error;

pub use poly::Polynomial;
pub use quadrature::{
    classify_absolute, integrate, numeric_flt, truncation_point, AbsoluteClass, TAIL_TOL,
};
pub use rational::RationalFunction;
pub use roots::{find_roots, Root, RootSet, CLUSTER_RADIUS};
pub use signal::{ClosedFormSignal, Phase, SignalTerm};
pub use transform::{
    forward_laplace, inverse_laplace, inverse_laplace_with_roots, partial_fractions,
    partial_fractions_with_roots, signal_from_terms, PartialFractionTerm, PartialFractions,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LaplaceError {
    #[error("root finding failed: {reason} (residual polynomial {residual})")]
    NumericFailure { reason: String, residual: Polynomial },
    #[error("rational function is not strictly proper (numerator degree {numerator_degree}, denominator degree {denominator_degree})")]
    Improper { numerator_degree: usize, denominator_degree: usize },
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("transform diverges at p={p}: integrand tail {tail:e} at horizon {horizon}")]
    Divergence { p: f64, horizon: f64, tail: f64 },
    #[error("p={p} does not exceed the declared exponential order {order}")]
    OrderViolation { p: f64, order: f64 },
}
