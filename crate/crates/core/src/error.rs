//! Crate-wide error type.
//!
//! Every numerical operation reports its failure mode explicitly: no NaN or
//! Inf escapes an operation without one of these variants.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A gamma argument is too close to a non-positive integer.
    #[error("gamma argument {0} within {1:e} of a pole")]
    PoleProximity(Complex64, f64),

    /// A contour passes within the pole tolerance of an integrand pole.
    #[error("contour pinched: pole at distance {0:e} from the integration line")]
    ContourPinch(f64),

    /// The truncated tail of a contour or lattice integral exceeds the
    /// requested tolerance.
    #[error("truncation tail estimate {estimate:e} exceeds budget {budget:e}")]
    TailTooLarge { estimate: f64, budget: f64 },

    /// A linear constraint among parameters fails.
    #[error("parameter constraint violated by {0:e}")]
    ConstraintViolated(f64),

    /// An integrand returned NaN or Inf.
    #[error("non-finite integrand value at {0}")]
    NonFinite(Complex64),

    /// Spectral coordinates too close to a degenerate configuration.
    #[error("degenerate spectral parameter: |mu_i - mu_j| or a shift is within {0:e} of a singular value")]
    DegenerateSpectrum(f64),

    /// A power series argument lies outside its reliable radius.
    #[error("series argument {0:e} exceeds radius {1:e}")]
    SeriesDiverged(f64, f64),

    /// A spectral-measure trig factor vanishes (non-removably).
    #[error("singular spectral measure: trig factor of modulus {0:e}")]
    SingularMeasure(f64),

    /// A kernel trig denominator vanishes.
    #[error("singular kernel denominator of modulus {0:e}")]
    SingularSpectrum(f64),

    /// A kernel was evaluated off its defining subspace.
    #[error("kernel argument off its subspace: expected coordinate 1, got {0}")]
    SubspaceViolated(f64),

    /// Divisibility precondition D1 | D2 fails.
    #[error("divisibility violated: {0} does not divide {1}")]
    DivisibilityViolated(i64, i64),

    /// An exponential sum was requested for a Weyl element with no attached sum.
    #[error("no exponential sum attached to Weyl element {0}")]
    UnsupportedWeylElement(&'static str),

    /// An audited bound failed; carries the counterexample description.
    #[error("bound violated: {0}")]
    BoundViolated(String),

    /// Ordering or sign-region precondition violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Malformed CLI usage.
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
