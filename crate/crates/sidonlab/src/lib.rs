//! Random Sidon sets with dense three-fold sumsets.
//!
//! The library has four layers:
//!
//! * [`set`] — exact arithmetic on finite integer sets: representation
//!   functions, Sidon / B_h\[g\] predicates, bitset sumsets, counting
//!   functions, and the greedy (Mian-Chowla) Sidon sequence.
//! * [`model`] — the probabilistic construction: sample S with
//!   P(n ∈ S) = c·n^(-2/3), extract the violation set T whose removal
//!   restores the Sidon property, evaluate the coincidence statistic Z(N)
//!   and its exact expectation, and run reproducible Monte Carlo campaigns.
//! * [`analysis`] — closed forms: Gamma, the Beta-type integral
//!   ∫₀¹(1−x^(1/α))^β dx, the convolution growth constant, the three-fold
//!   sumset density 1 − exp(−c³Γ(1/3)³/6), and the maximization of the
//!   density lower bound F(c) (max ≈ 0.0649 at c ≈ 0.3438).
//! * [`quad`] — the singular integral I = ∭_D (xyz(x+y−z))^(-2/3) dV
//!   evaluated by two independent routes (I ≈ 10.786, inside the expected
//!   bracket (10.7, 10.8)), plus the truncated variants I(M).
//!
//! [`acceptance`] chains everything into the pass/fail criteria that the
//! `reproduce` subcommand of the CLI reports on.

pub mod acceptance;
pub mod analysis;
pub mod model;
pub mod quad;
pub mod report;
pub mod set;
pub mod special;

pub use set::IntegerSet;

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A constructor or operation received an argument outside its stated range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    /// A point lies outside the integrand's domain D.
    #[error("point outside domain: {constraint}")]
    OutsideDomain { constraint: String },
    /// An operation would exceed its resource budget.
    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),
    /// A mathematical invariant failed on computed output.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    /// Adaptive quadrature ran out of evaluations before reaching tolerance.
    #[error("quadrature did not converge within {evaluations} evaluations (partial value {partial}, error estimate {error_estimate})")]
    NonConvergence {
        partial: f64,
        error_estimate: f64,
        evaluations: u64,
    },
    /// Malformed serialized input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
