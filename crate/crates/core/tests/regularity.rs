use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropcay::geometry::{regular_subdivision, Geometry, PointConfiguration, Subdivision};
use tropcay::triangulation::{flips, is_regular_with, placing_triangulation, Formulation, Triangulation};

fn random_geometry(rng: &mut ChaCha8Rng) -> Option<Geometry> {
    let n = rng.gen_range(5..=8);
    let mut pts: Vec<Vec<i64>> = Vec::new();
    while pts.len() < n {
        let p = vec![rng.gen_range(0..6), rng.gen_range(0..6)];
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    Geometry::new(PointConfiguration::with_default_labels(2, pts).ok()?).ok()
}

/// Every triangulation reachable by flips, up to `limit` of them.
fn flip_component(geom: &Geometry, limit: usize) -> Vec<Triangulation> {
    let start = placing_triangulation(geom, None).unwrap();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(t) = queue.pop_front() {
        for (_, u) in flips(geom, &t) {
            if seen.len() < limit && seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
        out.push(t);
    }
    out
}

#[test]
fn formulations_agree_on_random_planar_configurations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut regular, mut irregular) = (0, 0);
    let nested = vec![vec![0, 0], vec![4, 0], vec![0, 4], vec![1, 1], vec![2, 1], vec![1, 2]];
    let fixed = Geometry::new(PointConfiguration::with_default_labels(2, nested).unwrap()).unwrap();
    let geometries = std::iter::once(Some(fixed)).chain((0..25).map(|_| random_geometry(&mut rng)));
    for geom in geometries {
        let Some(geom) = geom else { continue };
        if geom.dim() != 2 {
            continue;
        }
        for t in flip_component(&geom, 150) {
            let a = is_regular_with(&geom, &t, Formulation::Folds);
            let b = is_regular_with(&geom, &t, Formulation::CellPoint);
            assert_eq!(a.is_some(), b.is_some(), "{:?}", t.index_cells());
            match a {
                Some(w) => {
                    regular += 1;
                    assert_eq!(regular_subdivision(&geom, &w).unwrap(), Subdivision::from(&t));
                }
                None => irregular += 1,
            }
        }
    }
    assert!(regular > 100);
    assert!(irregular >= 2);
}
