use crate::Cx;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Argument lies on (or numerically at) a pole.
    #[error("pole at {at}")]
    Pole { at: Cx },

    /// Argument outside the region where the routine is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested accuracy was not reached; `best` is the best estimate.
    #[error("accuracy not reached: best {best}, error estimate {err:e}")]
    Accuracy { best: Cx, err: f64 },

    /// A series or tail certificate does not converge.
    #[error("divergent: {0}")]
    Divergence(String),

    /// Matrix is not an element of the expected group.
    #[error("not in group: {0}")]
    NotInGroup(String),

    /// Representation with the requested K-type does not exist.
    #[error("no such representation: {0}")]
    NoSuchRepresentation(String),

    /// Normalization would divide by zero.
    #[error("degenerate normalization: {0}")]
    Degenerate(String),

    /// A checked invariant failed by more than its tolerance.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Returns `Err(Domain)` when a computed value is not finite.
pub(crate) fn finite(z: Cx, what: &str) -> Result<Cx> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain(format!("{what}: non-finite result")))
    }
}
