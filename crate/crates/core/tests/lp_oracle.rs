use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use tropcay::arith::homogeneous_strict_feasible;
use tropcay::geometry::{regular_subdivision, Geometry, PointConfiguration, Subdivision};
use tropcay::triangulation::{is_regular_with, regularity_rows, Formulation, Triangulation};

/// Decides whether `A w > 0` has a solution by Fourier–Motzkin elimination.
fn fourier_motzkin(rows: &[Vec<i64>], n: usize) -> bool {
    let mut rows: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    for k in 0..n {
        if rows.iter().any(|r| r.iter().all(Zero::is_zero)) {
            return false;
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r[k].is_positive() {
                pos.push(r);
            } else if r[k].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                let (a, b) = (p[k].clone(), -q[k].clone());
                rest.push(p.iter().zip(q).map(|(x, y)| x * &b + y * &a).collect());
            }
        }
        rows = rest;
    }
    rows.is_empty()
}

fn nested_triangles() -> (Geometry, Triangulation) {
    let pts = vec![vec![0, 0], vec![4, 0], vec![0, 4], vec![1, 1], vec![2, 1], vec![1, 2]];
    let geom = Geometry::new(PointConfiguration::with_default_labels(2, pts).unwrap()).unwrap();
    let (o, i) = ([0, 1, 2], [3, 4, 5]);
    let mut cells = vec![vec![3, 4, 5]];
    for k in 0..3 {
        let k1 = (k + 1) % 3;
        cells.push(vec![o[k], o[k1], i[k1]]);
        cells.push(vec![o[k], i[k1], i[k]]);
    }
    (geom, Triangulation::from_index_cells(&cells))
}

fn as_i64(rows: Vec<Vec<i128>>) -> Vec<Vec<i64>> {
    rows.into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect()
}

#[test]
fn nested_triangles_have_no_lifting() {
    let (geom, t) = nested_triangles();
    t.validate(&geom).unwrap();
    for f in [Formulation::Folds, Formulation::CellPoint] {
        let rows = as_i64(regularity_rows(&geom, &t, f));
        assert!(!fourier_motzkin(&rows, geom.len()), "{f:?}");
        assert!(homogeneous_strict_feasible(&rows, geom.len()).is_none());
        assert!(is_regular_with(&geom, &t, f).is_none());
    }
}

#[test]
fn twisting_the_inner_triangle_makes_it_regular() {
    // quadrilateral o0 o1 i1 i0 re-triangulated along its other diagonal
    let (geom, t) = nested_triangles();
    let mut cells = t.index_cells();
    let pos = cells.iter().position(|c| *c == vec![0, 1, 4]).unwrap();
    let pos2 = cells.iter().position(|c| *c == vec![0, 3, 4]).unwrap();
    cells[pos] = vec![0, 1, 3];
    cells[pos2] = vec![1, 3, 4];
    let t2 = Triangulation::from_index_cells(&cells);
    t2.validate(&geom).unwrap();
    let rows = as_i64(regularity_rows(&geom, &t2, Formulation::Folds));
    assert!(fourier_motzkin(&rows, geom.len()));
    let w = is_regular_with(&geom, &t2, Formulation::Folds).unwrap();
    assert_eq!(regular_subdivision(&geom, &w).unwrap(), Subdivision::from(&t2));
}

proptest! {
    #[test]
    fn solver_agrees_with_elimination(
        n in 1usize..4,
        raw in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..6),
    ) {
        let rows: Vec<Vec<i64>> = raw.into_iter().map(|r| r[..n].to_vec()).collect();
        let expected = fourier_motzkin(&rows, n);
        let got = homogeneous_strict_feasible(&rows, n);
        prop_assert_eq!(got.is_some(), expected);
        if let Some(w) = got {
            for r in &rows {
                let s: BigInt = r.iter().zip(&w).map(|(a, b)| BigInt::from(*a) * b).sum();
                prop_assert!(s.is_positive());
            }
        }
    }
}
