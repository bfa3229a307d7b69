use thiserror::Error;

use crate::space::Geometry;

/// Errors raised by the kernel, the subdivision and the bound computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("points belong to different spaces ({0:?} vs {1:?})")]
    SpaceMismatch(Geometry, Geometry),
    #[error("operation requires {expected:?} geometry, got {found:?}")]
    GeometryMismatch { expected: Geometry, found: Geometry },
    #[error("point is off the model surface (deviation {deviation:e})")]
    OffSurface { deviation: f64 },
    #[error("no unique minimal geodesic between (near-)antipodal points")]
    NoUniqueGeodesic,
    #[error("angle undefined: a side point coincides with the vertex")]
    DegenerateAngle,
    #[error("point is a pole of the great circle: orthogonal projection undefined")]
    PoleProjection,
    #[error("side lengths ({0}, {1}, {2}) do not form a triangle in this geometry")]
    NotATriangle(f64, f64, f64),
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("degenerate triangle")]
    DegenerateTriangle,
    #[error("collinear vertices")]
    Collinear,
    #[error("vertices do not lie in a common open hemisphere")]
    NotInOpenHemisphere,
    #[error("antipodal vertices")]
    AntipodalVertices,
    #[error("no decay constant C < 2 found up to probe depth {0}")]
    ProbeInconclusive(usize),
    #[error("bound constants give a non-positive delta ({0})")]
    InconsistentConstants(f64),
    #[error("depth {requested} exceeds the memory guard ({limit}); raise the limit explicitly")]
    DepthLimit { requested: usize, limit: usize },
    #[error("configuration error: {0}")]
    ConfigError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
