//! Sampling, verification reports and SVG rendering for the `medial` binary.

pub mod render;
pub mod suite;

pub use render::{render, BackFace, Projection, RenderSpec};
pub use suite::{run_suite, run_suite_detailed, PathPolicy, SampleSpec, VerificationReport};
