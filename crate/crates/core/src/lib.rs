pub mod bounds;
pub mod error;
pub mod examples;
pub mod kernel;
pub mod ledger;
pub mod mesh;
pub mod space;
pub mod subdivision;
pub mod trig;

pub use bounds::{compute_bounds, BoundConstants, DecayConstants, Sandwich};
pub use error::{Error, Result};
pub use ledger::{inequality_ledger, jester_hat_check, LedgerEntry, RelationKind};
pub use kernel::{angle_at, distance, interpolate, midpoint, project_to_line, GeodesicLine, Point, ProjectionResult};
pub use mesh::{subdivide_level, subdivide_to, TriangulationJson, TriangulationLevel};
pub use space::{Geometry, Space};
pub use subdivision::{
    medial_subdivide, nested_sequence, validate_triangle, ChildIndex, LabeledTriangle, NestedPath, StepMetrics,
};
