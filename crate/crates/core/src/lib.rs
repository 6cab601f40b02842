//! Exact combinatorics and geometry of the Farey triangulation: shear
//! coordinates, developments, decorations, lambda lengths and simultaneous
//! flips.

pub mod decoration;
pub mod error;
pub mod example;
pub mod exec;
pub mod farey;
pub mod geometry;
pub mod real;
pub mod shear;
pub mod triangulation;

pub use decoration::{Decoration, LambdaAssignment};
pub use error::{Error, Result};
pub use farey::{ExtRat, FanChart, GeodesicEdge, Window};
pub use exec::Exec;
pub use real::{Arith, Point, Real, Scalar};
pub use shear::{Shear, ShearFunction, VertexMap};
pub use triangulation::{FlipSet, Quad, WindowTriangulation};
