use thiserror::Error;

/// Errors produced by the evaluation engine.
///
/// Poles are errors, never values: the functions evaluated here have no
/// finite value at their poles, so asking for one is a caller mistake and
/// is reported as such instead of returning an infinity.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The requested point is exactly a simple pole.
    #[error("z = {location} is a simple pole; no finite value exists there")]
    Pole { location: i64 },

    /// The requested point lies inside the pole exclusion radius, where the
    /// condition number of every evaluation route blows up.
    #[error("z is within the exclusion radius {radius:.1e} of the pole at {location} (distance {distance:.3e})")]
    NearPole {
        location: i64,
        distance: f64,
        radius: f64,
    },

    /// An iterative scheme hit its iteration cap before reaching tolerance.
    #[error("{context}: failed to converge within {limit} steps")]
    Convergence { context: &'static str, limit: usize },

    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result, or a required intermediate, exceeds the f64 range.
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Pole location carried by `Pole`/`NearPole` errors, if any.
    pub fn pole_location(&self) -> Option<i64> {
        match self {
            Error::Pole { location } | Error::NearPole { location, .. } => Some(*location),
            _ => None,
        }
    }
}
