//! Shared fixtures for the benchmarks.

use tropcay::geometry::{cayley_config, simplex_lattice_points};
use tropcay::triangulation::placing_triangulation;
use tropcay::tropical::ValuedPolynomial;
use tropcay::{Geometry, Triangulation};

pub fn cubic() -> Geometry {
    Geometry::new(simplex_lattice_points(2, 3).expect("simplex")).expect("geometry")
}

pub fn quadric_cayley() -> Geometry {
    let q = simplex_lattice_points(3, 2).expect("simplex");
    Geometry::new(cayley_config(&q, &q).expect("cayley")).expect("geometry")
}

pub fn placing(geom: &Geometry) -> Triangulation {
    placing_triangulation(geom, None).expect("placing triangulation")
}

/// A pair of quadrics whose curve has a cycle of length three.
pub fn quadric_pair() -> (ValuedPolynomial, ValuedPolynomial) {
    (
        ValuedPolynomial::from_int_valuations(2, &[5, 0, 0, 0, 11, 8, 5, 9, 3, 1]).expect("valuations"),
        ValuedPolynomial::from_int_valuations(2, &[4, 2, 1, 0, 14, 0, 9, 13, 9, 6]).expect("valuations"),
    )
}
