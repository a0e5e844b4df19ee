use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input (shape, length, ambient dimension).
    Input(String),
    /// A square integer matrix whose determinant is not `±1`.
    NotUnimodular,
    /// A closed-form criterion was called on a Bott matrix with a negative entry.
    RequiresNonnegMatrix,
    /// A bigness test that is only meaningful for nef divisors got a non-nef one.
    NotNef,
    /// Lattice closure grew past the configured cap.
    ClosureCapExceeded { cap: usize },
    /// The lattice decider and the adapted-basis construction disagreed.
    DeciderDisagreement(String),
    /// The subspace does not define an equivariant subbundle.
    NotASubbundle,
    /// The operation is not defined for this rank or shape.
    Unsupported(String),
    /// A hypothesis of the determinant-based positivity test is false or unverified.
    HypothesisNotMet(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::NotUnimodular => f.write_str("matrix is not unimodular"),
            Error::RequiresNonnegMatrix => {
                f.write_str("closed-form criterion requires a Bott matrix with non-negative entries")
            }
            Error::NotNef => f.write_str("divisor is not nef"),
            Error::ClosureCapExceeded { cap } => {
                write!(f, "lattice closure exceeded {cap} subspaces")
            }
            Error::DeciderDisagreement(msg) => write!(f, "deciders disagree: {msg}"),
            Error::NotASubbundle => f.write_str("subspace does not define a subbundle"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::HypothesisNotMet(msg) => write!(f, "hypothesis not met: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
