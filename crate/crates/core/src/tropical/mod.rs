//! The Cayley trick: mixed subdivisions read off Cayley triangulations, the
//! dual tropical curves, and the full pipeline from valued polynomials.

mod curve;
mod polynomial;

pub use curve::{cycle_length, dual_curve_3d, dual_curve_planar, genus, Color, CurveGraph};
pub use polynomial::{
    cayley_lift, curve_report, monomials, tropicalize_pair, CurveReport, Term, ValuedPolynomial, Valuation,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Block, Geometry};
use crate::triangulation::Triangulation;

/// A maximal cell of a Cayley triangulation seen as the Minkowski cell
/// `Q1 + Q2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedCell {
    pub cayley_cell: Vec<usize>,
    /// `(#first-factor vertices, #second-factor vertices)`.
    pub kind: (usize, usize),
    /// Vertices of `Q1`, as indices into the first factor.
    pub q1: Vec<usize>,
    /// Vertices of `Q2`, as indices into the second factor.
    pub q2: Vec<usize>,
    pub mixed: bool,
}

impl MixedCell {
    pub fn color(&self) -> Option<Color> {
        match self.kind {
            (3, 2) => Some(Color::Blue),
            (2, 3) => Some(Color::Red),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedSubdivision {
    pub cells: Vec<MixedCell>,
}

impl MixedSubdivision {
    pub fn mixed_count(&self) -> usize {
        self.cells.iter().filter(|c| c.mixed).count()
    }

    pub fn unmixed_count(&self) -> usize {
        self.cells.len() - self.mixed_count()
    }

    pub fn color_count(&self, color: Color) -> usize {
        self.cells.iter().filter(|c| c.color() == Some(color)).count()
    }
}

/// Block membership and position within the block for every Cayley point.
pub(crate) fn block_positions(geom: &Geometry) -> Result<Vec<(Block, usize)>> {
    let blocks = geom.config().cayley_blocks().ok_or(Error::NotCayley)?;
    let (mut first, mut second) = (0, 0);
    Ok(blocks
        .into_iter()
        .map(|b| {
            let counter = if b == Block::First { &mut first } else { &mut second };
            *counter += 1;
            (b, *counter - 1)
        })
        .collect())
}

/// Splits every cell of a Cayley triangulation by factor.
pub fn mixed_subdivision(geom: &Geometry, t: &Triangulation) -> Result<MixedSubdivision> {
    let pos = block_positions(geom)?;
    let cells = t
        .cells()
        .iter()
        .map(|c| {
            let cayley_cell = c.indices();
            let mut q1 = Vec::new();
            let mut q2 = Vec::new();
            for &i in &cayley_cell {
                match pos[i] {
                    (Block::First, k) => q1.push(k),
                    (Block::Second, k) => q2.push(k),
                }
            }
            let kind = (q1.len(), q2.len());
            MixedCell { cayley_cell, kind, mixed: kind.0 >= 2 && kind.1 >= 2, q1, q2 }
        })
        .collect();
    Ok(MixedSubdivision { cells })
}
