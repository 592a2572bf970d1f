//! Exact constructions of tame and wild knots inside the Menger sponge.
//!
//! All geometry is carried out over arbitrary-precision rationals, and every
//! construction comes with an exact verifier: prefractal containment,
//! simplicity, summand counts and diagrammatic knot invariants.

pub mod embed;
pub mod error;
pub mod geom;
pub mod grid;
pub mod invariants;
pub mod io;
pub mod necklace;
pub mod polyline;
pub mod squareflake;
pub mod ternary;
pub mod wildknot;

pub use error::{Error, Result};
pub use geom::{Point2, Point3, Rational};
pub use grid::GridDiagram;
pub use invariants::KnotDiagram;
pub use polyline::ClosedPolyline3;
