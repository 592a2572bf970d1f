//! Verification oracles: exact simplicity, projections to knot diagrams,
//! determinants and Fox colourings.

pub mod diagram;
pub mod linalg;
pub mod projection;
pub mod simple;

pub use diagram::{Crossing, KnotDiagram, Passage, Shading, Source};
pub use projection::{generic_directions, project, project_collapsing, project_generic};
pub use simple::{first_self_intersection, is_simple};
