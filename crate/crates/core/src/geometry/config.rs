use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Labeled integer points. Labels are unique; points are distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawConfiguration")]
pub struct PointConfiguration {
    ambient_dim: usize,
    points: Vec<Vec<i64>>,
    labels: Vec<String>,
}

#[derive(Deserialize)]
struct RawConfiguration {
    ambient_dim: usize,
    points: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl TryFrom<RawConfiguration> for PointConfiguration {
    type Error = Error;

    fn try_from(raw: RawConfiguration) -> Result<Self> {
        PointConfiguration::new(raw.ambient_dim, raw.points, raw.labels)
    }
}

/// Which factor of a Cayley configuration a point came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    First,
    Second,
}

impl PointConfiguration {
    pub fn new(ambient_dim: usize, points: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(Error::Configuration(format!(
                "{} labels for {} points",
                labels.len(),
                points.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| p.len() != ambient_dim) {
            return Err(Error::Dimension(format!("point {p:?} is not in dimension {ambient_dim}")));
        }
        let mut seen = HashSet::new();
        if let Some(p) = points.iter().find(|p| !seen.insert(*p)) {
            return Err(Error::Configuration(format!("duplicate point {p:?}")));
        }
        let mut seen = HashSet::new();
        if let Some(l) = labels.iter().find(|l| !seen.insert(*l)) {
            return Err(Error::Configuration(format!("duplicate label {l:?}")));
        }
        if labels.iter().any(|l| l.is_empty() || l.contains(',') || l.contains('.')) {
            return Err(Error::Configuration("labels must be non-empty and free of ',' and '.'".into()));
        }
        Ok(Self { ambient_dim, points, labels })
    }

    /// Configuration labeled `A, B, …` in the given order.
    pub fn with_default_labels(ambient_dim: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        let labels = (0..points.len()).map(|i| block_label(i, true)).collect();
        Self::new(ambient_dim, points, labels)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, point: &[i64]) -> Option<usize> {
        self.points.iter().position(|p| p == point)
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// For a configuration produced by [`cayley_config`], the factor of every
    /// point. Detected from the two leading coordinates, which must be
    /// `(1, 0)` or `(0, 1)` with both factors present.
    pub fn cayley_blocks(&self) -> Option<Vec<Block>> {
        if self.ambient_dim < 3 || self.points.is_empty() {
            return None;
        }
        let blocks: Option<Vec<Block>> = self
            .points
            .iter()
            .map(|p| match (p[0], p[1]) {
                (1, 0) => Some(Block::First),
                (0, 1) => Some(Block::Second),
                _ => None,
            })
            .collect();
        let blocks = blocks?;
        let has_both = blocks.contains(&Block::First) && blocks.contains(&Block::Second);
        has_both.then_some(blocks)
    }

    /// True when every label is a single character, so cells can be written
    /// as plain letter strings.
    pub fn single_char_labels(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }
}

/// Label for the `i`-th point of a block: `A…Z`, then `A1…Z1`, `A2…`.
/// Lowercase letters are used when `upper` is false.
pub fn block_label(i: usize, upper: bool) -> String {
    let base = if upper { b'A' } else { b'a' };
    let letter = (base + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

/// Graded-lexicographic key: total degree first, then coordinates ascending.
fn grlex_key(p: &[i64]) -> (i64, Vec<i64>) {
    (p.iter().sum(), p.to_vec())
}

/// All lattice points of `dilation · Δ_dim`, i.e. `x >= 0` with
/// `sum(x) <= dilation`, in graded-lexicographic order.
///
/// For `(dim, dilation) = (2, 3)` the order is
/// `(0,0) (0,1) (1,0) (0,2) (1,1) (2,0) (0,3) (1,2) (2,1) (3,0)`.
pub fn simplex_lattice_points(dim: usize, dilation: u32) -> Result<PointConfiguration> {
    if dim == 0 || dilation == 0 {
        return Err(Error::Configuration("dim and dilation must be positive".into()));
    }
    let mut points = Vec::new();
    let mut current = vec![0i64; dim];
    fn rec(i: usize, left: i64, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == current.len() {
            out.push(current.clone());
            return;
        }
        for v in 0..=left {
            current[i] = v;
            rec(i + 1, left - v, current, out);
        }
        current[i] = 0;
    }
    rec(0, dilation as i64, &mut current, &mut points);
    points.sort_by_key(|p| grlex_key(p));
    PointConfiguration::with_default_labels(dim, points)
}

/// Cayley configuration of two point sets: each `p` becomes `(1, 0, p)` and
/// each `q` becomes `(0, 1, q)`. Labels are uppercase for the first factor and
/// lowercase for the second, following input order.
pub fn cayley_config(p1: &PointConfiguration, p2: &PointConfiguration) -> Result<PointConfiguration> {
    if p1.ambient_dim != p2.ambient_dim {
        return Err(Error::Dimension(format!(
            "Cayley factors live in dimensions {} and {}",
            p1.ambient_dim, p2.ambient_dim
        )));
    }
    let mut points = Vec::with_capacity(p1.len() + p2.len());
    let mut labels = Vec::with_capacity(p1.len() + p2.len());
    for (i, p) in p1.points.iter().enumerate() {
        points.push([1, 0].iter().chain(p).copied().collect());
        labels.push(block_label(i, true));
    }
    for (i, q) in p2.points.iter().enumerate() {
        points.push([0, 1].iter().chain(q).copied().collect());
        labels.push(block_label(i, false));
    }
    PointConfiguration::new(p1.ambient_dim + 2, points, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn simplex_counts() {
        assert_eq!(simplex_lattice_points(3, 1).unwrap().len(), 4);
        assert_eq!(simplex_lattice_points(3, 2).unwrap().len(), 10);
        for d in 1..=4 {
            for n in 1..=4 {
                let c = simplex_lattice_points(d, n).unwrap();
                assert_eq!(c.len() as u64, binomial(n as u64 + d as u64, d as u64));
            }
        }
    }

    #[test]
    fn cubic_triangle_has_one_interior_point() {
        let c = simplex_lattice_points(2, 3).unwrap();
        assert_eq!(c.len(), 10);
        let interior: Vec<_> =
            c.points().iter().filter(|p| p[0] > 0 && p[1] > 0 && p[0] + p[1] < 3).collect();
        assert_eq!(interior, vec![&vec![1, 1]]);
        assert_eq!(c.points()[0], vec![0, 0]);
        assert_eq!(c.points()[1], vec![0, 1]);
        assert_eq!(c.points()[9], vec![3, 0]);
        assert_eq!(c.labels()[9], "J");
    }

    #[test]
    fn cayley_labels_and_blocks() {
        let q = simplex_lattice_points(3, 2).unwrap();
        let c = cayley_config(&q, &q).unwrap();
        assert_eq!(c.len(), 20);
        assert_eq!(c.ambient_dim(), 5);
        assert_eq!(c.labels()[0], "A");
        assert_eq!(c.labels()[9], "J");
        assert_eq!(c.labels()[10], "a");
        assert_eq!(c.labels()[19], "j");
        let blocks = c.cayley_blocks().unwrap();
        assert_eq!(blocks.iter().filter(|b| **b == Block::First).count(), 10);
        assert!(q.cayley_blocks().is_none());

        let l = simplex_lattice_points(3, 1).unwrap();
        assert_eq!(cayley_config(&q, &l).unwrap().len(), 14);
        let plane = simplex_lattice_points(2, 1).unwrap();
        assert!(cayley_config(&q, &plane).is_err());
    }

    #[test]
    fn long_blocks_get_numbered_labels() {
        assert_eq!(block_label(0, true), "A");
        assert_eq!(block_label(25, false), "z");
        assert_eq!(block_label(26, true), "A1");
        assert_eq!(block_label(53, false), "b2");
        let big = simplex_lattice_points(3, 4).unwrap(); // 35 points
        let c = cayley_config(&big, &big).unwrap();
        assert_eq!(c.labels()[34], "I1");
        assert!(!c.single_char_labels());
    }

    #[test]
    fn validation() {
        assert!(PointConfiguration::new(1, vec![vec![0], vec![0]], vec!["A".into(), "B".into()]).is_err());
        assert!(PointConfiguration::new(1, vec![vec![0], vec![1]], vec!["A".into(), "A".into()]).is_err());
        assert!(PointConfiguration::new(2, vec![vec![0]], vec!["A".into()]).is_err());
        let json = r#"{"ambient_dim":1,"points":[[0],[0]],"labels":["A","B"]}"#;
        assert!(serde_json::from_str::<PointConfiguration>(json).is_err());
    }
}
