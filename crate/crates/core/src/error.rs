//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `alpha` is not a fixed-point-free involution.
    NotInvolution,
    /// Euler characteristic is not 2 (or the map is disconnected).
    NonPlanar { euler: i64 },
    /// A face orbit has length different from 4.
    FaceDegreeNot4 { face_len: usize },
    /// The vertex graph contains an odd cycle.
    NotBipartite,
    /// A permutation index is out of range or half-edge count is odd.
    MalformedPermutation,
    /// The supplied path is not a geodesic of the claimed length.
    NotAGeodesic,
    /// Boundary arcs share internal vertices; listed by distance index.
    HasPinchPoints { pinches: Vec<usize> },
    /// The two paths cross and do not bound a pair of domains.
    PathsCross,
    /// Tuple enumeration does not support this mode/k combination.
    ModeUnsupported,
    /// Exhaustive enumeration beyond the configured size cap.
    BudgetExceeded { requested: usize, cap: usize },
    /// A table lookup past the computed maximum index.
    IndexBeyondTable { index: usize, max: usize },
    /// Adaptive quadrature could not reach the requested tolerance.
    ToleranceNotReached { achieved: f64, requested: f64 },
    /// Invalid experiment or CLI configuration.
    ConfigInvalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotInvolution => write!(f, "alpha is not a fixed-point-free involution"),
            Error::NonPlanar { euler } => {
                write!(f, "map is not a connected sphere map (V - E + F = {euler})")
            }
            Error::FaceDegreeNot4 { face_len } => {
                write!(f, "face of degree {face_len}; quadrangulations need degree 4")
            }
            Error::NotBipartite => write!(f, "vertex graph is not bipartite"),
            Error::MalformedPermutation => write!(f, "malformed permutation pair"),
            Error::NotAGeodesic => write!(f, "path is not a geodesic"),
            Error::HasPinchPoints { pinches } => {
                write!(f, "boundary has pinch points at distances {pinches:?}")
            }
            Error::PathsCross => write!(f, "geodesic paths cross"),
            Error::BudgetExceeded { requested, cap } => {
                write!(f, "enumeration size {requested} exceeds cap {cap}")
            }
            Error::ModeUnsupported => write!(f, "unsupported tuple mode"),
            Error::IndexBeyondTable { index, max } => {
                write!(f, "index {index} beyond table maximum {max}")
            }
            Error::ToleranceNotReached { achieved, requested } => {
                write!(f, "quadrature error {achieved:.3e} above tolerance {requested:.3e}")
            }
            Error::ConfigInvalid(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
