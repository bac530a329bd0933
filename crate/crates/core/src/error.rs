use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidConfig(&'static str),
    /// Newton iteration for quadrature nodes did not converge.
    NonConvergence { iterations: usize },
    SingularMatrix,
    /// Two interpolation nodes coincide.
    DegenerateNodes,
    OutOfDomain { x: f64 },
    /// A point sits on a breakpoint but no trace side was requested.
    AmbiguousTrace { x: f64 },
    /// A state coefficient became NaN or infinite during time stepping.
    NonFinite { step: usize, time: f64 },
    /// Error value too small for an order estimate.
    DegenerateError { value: f64 },
    /// Inputs built on different meshes or orders.
    Mismatch(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::NonConvergence { iterations } => {
                write!(f, "newton iteration did not converge in {iterations} steps")
            }
            Error::SingularMatrix => f.write_str("singular matrix"),
            Error::DegenerateNodes => f.write_str("interpolation nodes coincide"),
            Error::OutOfDomain { x } => write!(f, "point {x} is outside the mesh"),
            Error::AmbiguousTrace { x } => {
                write!(f, "point {x} is a breakpoint; a trace side is required")
            }
            Error::NonFinite { step, time } => {
                write!(f, "non-finite state at step {step} (t = {time})")
            }
            Error::DegenerateError { value } => {
                write!(f, "error {value:e} is below roundoff; order undefined")
            }
            Error::Mismatch(what) => write!(f, "inconsistent inputs: {what}"),
        }
    }
}

impl core::error::Error for Error {}
