use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use tropcay::geometry::{cayley_config, simplex_lattice_points, Geometry};
use tropcay::triangulation::Triangulation;
use tropcay::tropical::{cayley_lift, mixed_subdivision, tropicalize_pair, CurveReport, ValuedPolynomial};

fn data(name: &str) -> ValuedPolynomial {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/polynomials").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn pair(stem: &str) -> (ValuedPolynomial, ValuedPolynomial) {
    (data(&format!("{stem}_f1.json")), data(&format!("{stem}_f2.json")))
}

fn report(stem: &str) -> CurveReport {
    let (f1, f2) = pair(stem);
    tropicalize_pair(&f1, &f2).unwrap()
}

#[test]
fn quadric_pairs_realize_every_cycle_length() {
    for k in 3..=16 {
        let r = report(&format!("cycle{k:02}"));
        assert_eq!(r.cells.len(), 32);
        assert_eq!((r.mixed, r.unmixed), (16, 16));
        assert_eq!((r.blue, r.red), (8, 8));
        assert_eq!(r.graph.vertex_count(), 16);
        assert_eq!(r.graph.edge_count(), 16);
        assert!(r.graph.is_connected());
        assert!(r.graph.max_degree() <= 3);
        assert_eq!(r.graph.ray_total(), 16);
        assert_eq!(r.genus, 1);
        assert_eq!(r.minkowski_volume, 64);
        assert_eq!(r.cycle_length, Some(k), "pair {k}");
    }
}

#[test]
fn two_adic_pair_has_cycle_length_eight() {
    assert_eq!(report("two_adic").cycle_length, Some(8));
}

#[test]
fn quadric_and_plane_give_a_tree() {
    let r = report("quadric_plane");
    assert_eq!(r.cells.len(), 15);
    assert_eq!((r.mixed, r.unmixed), (6, 9));
    assert_eq!(r.graph.vertex_count(), 6);
    assert_eq!(r.graph.edge_count(), 5);
    assert!(r.graph.is_connected());
    assert_eq!(r.genus, 0);
    assert!(r.cycle_length.is_none());
    assert_eq!(r.minkowski_volume, 27);
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn sub(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [i64; 3], b: [i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Two-dimensional faces with four vertices of the polytope spanned by `pts`,
/// found by testing every plane through three of them.
fn quadrilateral_faces(pts: &[[i64; 3]]) -> BTreeSet<Vec<[i64; 3]>> {
    let mut faces = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let n = cross(sub(pts[j], pts[i]), sub(pts[k], pts[i]));
                if n == [0, 0, 0] {
                    continue;
                }
                let side: Vec<i64> = pts.iter().map(|&p| dot(n, sub(p, pts[i])).signum()).collect();
                if side.iter().all(|&s| s >= 0) || side.iter().all(|&s| s <= 0) {
                    let mut face: Vec<[i64; 3]> =
                        pts.iter().zip(&side).filter(|(_, &s)| s == 0).map(|(&p, _)| p).collect();
                    face.sort_unstable();
                    if face.len() == 4 {
                        faces.insert(face);
                    }
                }
            }
        }
    }
    faces
}

/// Adjacency of mixed cells computed from the explicit Minkowski cells.
fn slice_adjacency(d: u32, e: u32, t: &Triangulation) -> BTreeSet<(usize, usize)> {
    let p1 = simplex_lattice_points(3, d).unwrap();
    let p2 = simplex_lattice_points(3, e).unwrap();
    let geom = Geometry::new(cayley_config(&p1, &p2).unwrap()).unwrap();
    let ms = mixed_subdivision(&geom, t).unwrap();
    let mut owner: HashMap<Vec<[i64; 3]>, Vec<usize>> = HashMap::new();
    for (v, c) in ms.cells.iter().filter(|c| c.mixed).enumerate() {
        let mut pts = Vec::new();
        for &a in &c.q1 {
            for &b in &c.q2 {
                let (x, y) = (&p1.points()[a], &p2.points()[b]);
                pts.push([x[0] + y[0], x[1] + y[1], x[2] + y[2]]);
            }
        }
        for f in quadrilateral_faces(&pts) {
            owner.entry(f).or_default().push(v);
        }
    }
    owner.values().filter(|o| o.len() == 2).map(|o| (o[0].min(o[1]), o[0].max(o[1]))).collect()
}

#[test]
fn shared_square_facets_match_minkowski_slices() {
    for stem in ["quadric_plane", "cycle03", "cycle11"] {
        let (f1, f2) = pair(stem);
        let r = tropicalize_pair(&f1, &f2).unwrap();
        let t = Triangulation::from_index_cells(&r.cells);
        let expect = slice_adjacency(f1.degree, f2.degree, &t);
        let got: BTreeSet<(usize, usize)> = r.graph.edges.iter().copied().collect();
        assert_eq!(got, expect, "{stem}");
    }
}

#[test]
fn lifted_cells_are_lower_faces() {
    let (f1, f2) = pair("cycle05");
    let (geom, w) = cayley_lift(&f1, &f2).unwrap();
    assert_eq!(geom.volume(), 32);
    assert_eq!(w.len(), 20);
    let r = tropicalize_pair(&f1, &f2).unwrap();
    let t = Triangulation::from_index_cells(&r.cells);
    t.validate(&geom).unwrap();
    assert!(t.is_unimodular(&geom));
}
