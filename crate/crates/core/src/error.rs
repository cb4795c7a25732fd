use core::fmt;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible range.
    InvalidParameter { what: &'static str, detail: alloc::string::String },
    /// A scheme produced a non-finite operator entry.
    NonFiniteEntry { m: usize, k: usize, n: usize },
    /// The query exceeds what the exhaustive oracle is allowed to enumerate.
    ScaleLimit { what: &'static str, value: usize, limit: usize },
    /// A scheme was asked for an index beyond the data it carries.
    IndexBeyondScheme { index: usize, limit: usize },
    /// The operation needs a tridiagonal (R = q = 1) scheme.
    NotTridiagonal,
    /// An eigenvalue iteration did not converge.
    EigenNonConvergence { dim: usize, stage: &'static str, index: usize },
    /// A determinant left the floating-point range; `log_abs` is ln|det|.
    Overflow { log_abs: f64 },
    /// A formal series has a vanishing coefficient where inversion needs one.
    ZeroLeadingCoefficient,
    /// Branch continuation met a root collision it could not step around.
    ContinuationFailed { re: f64, im: f64 },
    /// Contour moments did not stabilise when the radius was enlarged.
    ContourNoAgreement { order: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { what, detail } => write!(f, "invalid {what}: {detail}"),
            Error::NonFiniteEntry { m, k, n } => {
                write!(f, "non-finite operator entry at (m={m}, k={k}) for N={n}")
            }
            Error::ScaleLimit { what, value, limit } => {
                write!(f, "{what} = {value} exceeds oracle limit {limit}")
            }
            Error::IndexBeyondScheme { index, limit } => {
                write!(f, "index {index} beyond scheme data (limit {limit})")
            }
            Error::NotTridiagonal => write!(f, "scheme is not tridiagonal"),
            Error::EigenNonConvergence { dim, stage, index } => {
                write!(f, "eigensolver ({stage}) did not converge on a {dim}x{dim} block at index {index}")
            }
            Error::Overflow { log_abs } => write!(f, "determinant overflow, ln|det| = {log_abs}"),
            Error::ZeroLeadingCoefficient => write!(f, "formal series has zero leading coefficient"),
            Error::ContinuationFailed { re, im } => {
                write!(f, "branch continuation failed near z = {re}{im:+}i")
            }
            Error::ContourNoAgreement { order } => {
                write!(f, "contour moments of order {order} did not stabilise")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(what: &'static str, detail: impl fmt::Display) -> Error {
    use alloc::string::ToString;
    Error::InvalidParameter { what, detail: detail.to_string() }
}
