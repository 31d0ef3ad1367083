pub mod arith;
pub mod enumeration;
pub mod error;
pub mod geometry;
pub mod graphs;
pub mod io;
pub mod triangulation;
pub mod tropical;

pub use error::{Error, Result};
pub use arith::Rational;
pub use geometry::{Geometry, PointConfiguration, Subdivision, WeightVector};
pub use graphs::{CanonicalForm, ClassTable};
pub use triangulation::{Cell, SymmetryGroup, Triangulation};
pub use tropical::{CurveGraph, CurveReport, ValuedPolynomial};
