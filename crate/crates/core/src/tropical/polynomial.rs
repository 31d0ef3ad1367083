use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::curve::{cycle_length, dual_curve_3d, genus, CurveGraph};
use super::{mixed_subdivision, MixedSubdivision};
use crate::arith::{parse_rational, serde_rational, Rational};
use crate::error::{Error, Result};
use crate::geometry::{cayley_config, regular_subdivision, simplex_lattice_points, Geometry, WeightVector};
use crate::triangulation::Triangulation;

/// A monomial `x^i y^j z^k` together with the valuation of its coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exp: [u32; 3],
    #[serde(with = "serde_rational")]
    pub val: Rational,
}

/// How coefficients written as plain integers are valued.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    /// Powers of `t` carry the valuation; integer factors are units.
    Puiseux,
    /// The `p`-adic valuation of integer coefficients.
    PAdic(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuedPolynomial {
    pub degree: u32,
    pub terms: Vec<Term>,
}

/// Exponents of `degree·Δ₃` in decreasing lexicographic order, i.e.
/// `x², xy, xz, x, y², yz, y, z², z, 1` for degree 2.
pub fn monomials(degree: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for i in (0..=degree).rev() {
        for j in (0..=degree - i).rev() {
            for k in (0..=degree - i - j).rev() {
                out.push([i, j, k]);
            }
        }
    }
    out
}

impl ValuedPolynomial {
    /// Valuations listed in the order of [`monomials`].
    pub fn from_valuations(degree: u32, vals: &[Rational]) -> Result<Self> {
        let exps = monomials(degree);
        if exps.len() != vals.len() {
            return Err(Error::Dimension(format!(
                "degree {degree} needs {} valuations, got {}",
                exps.len(),
                vals.len()
            )));
        }
        let terms = exps.into_iter().zip(vals).map(|(exp, v)| Term { exp, val: v.clone() }).collect();
        Ok(Self { degree, terms })
    }

    pub fn from_int_valuations(degree: u32, vals: &[i64]) -> Result<Self> {
        let vals: Vec<Rational> = vals.iter().map(|&v| Rational::from_integer(v.into())).collect();
        Self::from_valuations(degree, &vals)
    }

    /// Parses a sum such as `t^{5}x^2 + xy + t^3z + 2`. Like monomials are
    /// combined by keeping the smallest valuation. The degree is the largest
    /// total degree that occurs.
    pub fn parse(text: &str, valuation: Valuation) -> Result<Self> {
        let mut best: HashMap<[u32; 3], Rational> = HashMap::new();
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let mut pieces = Vec::new();
        let mut start = 0;
        let mut depth = 0;
        for (i, c) in cleaned.char_indices() {
            match c {
                '{' | '(' => depth += 1,
                '}' | ')' => depth -= 1,
                '+' | '-' if depth == 0 && i > start => {
                    pieces.push(&cleaned[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        pieces.push(&cleaned[start..]);
        for piece in pieces {
            let piece = piece.trim_start_matches(['+', '-']);
            if piece.is_empty() {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            let (exp, val) = parse_term(piece, valuation)?;
            best.entry(exp).and_modify(|v| *v = v.clone().min(val.clone())).or_insert(val);
        }
        let degree = best.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0);
        let mut terms: Vec<Term> = best.into_iter().map(|(exp, val)| Term { exp, val }).collect();
        terms.sort_by(|a, b| b.exp.cmp(&a.exp));
        Ok(Self { degree, terms })
    }

    pub fn valuation(&self, exp: [u32; 3]) -> Option<&Rational> {
        self.terms.iter().find(|t| t.exp == exp).map(|t| &t.val)
    }

    /// Valuations in the order of [`monomials`], failing on the first
    /// missing monomial.
    pub fn dense_valuations(&self) -> Result<Vec<Rational>> {
        if let Some(t) = self.terms.iter().find(|t| t.exp.iter().sum::<u32>() > self.degree) {
            return Err(Error::Domain(format!("term {:?} exceeds degree {}", t.exp, self.degree)));
        }
        monomials(self.degree)
            .into_iter()
            .map(|e| self.valuation(e).cloned().ok_or_else(|| Error::Support(e.to_vec())))
            .collect()
    }
}

fn parse_term(piece: &str, valuation: Valuation) -> Result<([u32; 3], Rational)> {
    let bad = || Error::Parse(format!("cannot read term {piece:?}"));
    let bytes: Vec<char> = piece.chars().collect();
    let mut pos = 0;
    let mut val = Rational::zero();

    let digits_end = bytes.iter().position(|c| !c.is_ascii_digit()).unwrap_or(bytes.len());
    if digits_end > 0 {
        let coeff: BigInt = bytes[..digits_end].iter().collect::<String>().parse().map_err(|_| bad())?;
        if coeff.is_zero() {
            return Err(Error::Parse(format!("zero coefficient in {piece:?}")));
        }
        if let Valuation::PAdic(p) = valuation {
            let p = BigInt::from(p);
            let mut c = coeff;
            let mut v = 0i64;
            while (&c % &p).is_zero() {
                c /= &p;
                v += 1;
            }
            val += Rational::from_integer(v.into());
        }
        pos = digits_end;
    }

    let read_power = |pos: &mut usize| -> Result<Rational> {
        if bytes.get(*pos) != Some(&'^') {
            return Ok(Rational::one());
        }
        *pos += 1;
        let close = match bytes.get(*pos) {
            Some('{') => '}',
            Some('(') => ')',
            _ => {
                let end = bytes[*pos..].iter().position(|c| !c.is_ascii_digit()).map_or(bytes.len(), |e| *pos + e);
                let s: String = bytes[*pos..end].iter().collect();
                *pos = end;
                return parse_rational(&s);
            }
        };
        let end = bytes[*pos..].iter().position(|&c| c == close).ok_or_else(bad)? + *pos;
        let s: String = bytes[*pos + 1..end].iter().collect();
        *pos = end + 1;
        parse_rational(&s)
    };

    let mut exp = [0u32; 3];
    while pos < bytes.len() {
        let c = bytes[pos];
        pos += 1;
        let power = read_power(&mut pos)?;
        match c {
            't' => val += power,
            'x' | 'y' | 'z' => {
                if !power.is_integer() || power.is_negative() {
                    return Err(bad());
                }
                let k: u32 = power.to_integer().try_into().map_err(|_| bad())?;
                exp[(c as u8 - b'x') as usize] += k;
            }
            _ => return Err(bad()),
        }
    }
    Ok((exp, val))
}

/// Everything read off the curve of a pair of valued polynomials.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveReport {
    pub degrees: (u32, u32),
    /// Cells as label strings.
    pub triangulation: String,
    pub cells: Vec<Vec<usize>>,
    pub mixed: usize,
    pub unmixed: usize,
    pub blue: usize,
    pub red: usize,
    /// Sum of the normalized volumes of the Minkowski cells.
    pub minkowski_volume: u64,
    pub graph: CurveGraph,
    pub genus: usize,
    pub cycle_length: Option<usize>,
    /// Number of vertices carrying each ray count.
    pub ray_histogram: BTreeMap<u32, usize>,
    pub dot: String,
}

/// Normalized volume of the Minkowski cell of a unimodular Cayley cell with
/// `a` first-factor vertices in 3-space.
fn minkowski_cell_volume(a: usize) -> u64 {
    match a {
        1 | 4 => 1,
        2 | 3 => 3,
        _ => 0,
    }
}

/// Builds the Cayley configuration of the two supports and lifts it by the
/// valuations.
pub fn cayley_lift(f1: &ValuedPolynomial, f2: &ValuedPolynomial) -> Result<(Geometry, WeightVector)> {
    let v1 = f1.dense_valuations()?;
    let v2 = f2.dense_valuations()?;
    let p1 = simplex_lattice_points(3, f1.degree)?;
    let p2 = simplex_lattice_points(3, f2.degree)?;
    let config = cayley_config(&p1, &p2)?;
    let lookup = |p: &[i64], degree: u32, vals: &[Rational]| -> Rational {
        let exp = [p[0] as u32, p[1] as u32, p[2] as u32];
        let idx = monomials(degree).iter().position(|e| *e == exp).expect("lattice point is a monomial");
        vals[idx].clone()
    };
    let mut heights: Vec<Rational> = p1.points().iter().map(|p| lookup(p, f1.degree, &v1)).collect();
    heights.extend(p2.points().iter().map(|p| lookup(p, f2.degree, &v2)));
    Ok((Geometry::new(config)?, WeightVector::new(heights)))
}

/// Runs the whole pipeline: lift, regular subdivision, unimodularity check,
/// mixed cells and dual curve.
pub fn tropicalize_pair(f1: &ValuedPolynomial, f2: &ValuedPolynomial) -> Result<CurveReport> {
    let (geom, w) = cayley_lift(f1, f2)?;
    let sub = regular_subdivision(&geom, &w)?;
    let t = sub.to_triangulation(&geom)?;
    for c in t.cells() {
        let volume = geom.det_cell(*c).unsigned_abs() as u64;
        if volume != 1 {
            return Err(Error::NotUnimodular { cell: c.indices(), volume });
        }
    }
    curve_report(&geom, &t, (f1.degree, f2.degree))
}

/// Report for an already known unimodular Cayley triangulation.
pub fn curve_report(geom: &Geometry, t: &Triangulation, degrees: (u32, u32)) -> Result<CurveReport> {
    let ms: MixedSubdivision = mixed_subdivision(geom, t)?;
    let graph = dual_curve_3d(geom, t, &ms)?;
    let g = genus(&graph);
    let cycle = if g == 1 && graph.is_connected() { Some(cycle_length(&graph)?) } else { None };
    let mut ray_histogram = BTreeMap::new();
    for &r in &graph.rays {
        *ray_histogram.entry(r).or_insert(0) += 1;
    }
    let minkowski_volume = ms.cells.iter().map(|c| minkowski_cell_volume(c.kind.0)).sum();
    let labels = geom.config().labels();
    let vertex_labels: Vec<String> =
        graph.cells.iter().map(|c| c.iter().map(|&i| labels[i].as_str()).collect::<String>()).collect();
    let dot = graph.to_dot("curve", Some(&vertex_labels));
    Ok(CurveReport {
        degrees,
        triangulation: t.to_letters(geom.config()),
        cells: t.index_cells(),
        mixed: ms.mixed_count(),
        unmixed: ms.unmixed_count(),
        blue: ms.color_count(super::Color::Blue),
        red: ms.color_count(super::Color::Red),
        minkowski_volume,
        graph,
        genus: g,
        cycle_length: cycle,
        ray_histogram,
        dot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order() {
        let m = monomials(2);
        assert_eq!(m.len(), 10);
        assert_eq!(m[0], [2, 0, 0]);
        assert_eq!(m[3], [1, 0, 0]);
        assert_eq!(m[5], [0, 1, 1]);
        assert_eq!(m[9], [0, 0, 0]);
        assert_eq!(monomials(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]]);
    }

    #[test]
    fn parses_puiseux_terms() {
        let f = ValuedPolynomial::parse("t^{5}x^2 + xy - t^{1/2}xz + t x + 3y^2 + t^3 yz + y + z^2 + z + t", Valuation::Puiseux)
            .unwrap();
        assert_eq!(f.degree, 2);
        let vals = f.dense_valuations().unwrap();
        let expect = [
            Rational::from_integer(5.into()),
            Rational::zero(),
            Rational::new(1.into(), 2.into()),
            Rational::one(),
            Rational::zero(),
            Rational::from_integer(3.into()),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::one(),
        ];
        assert_eq!(vals, expect);
    }

    #[test]
    fn parses_p_adic_terms() {
        let f = ValuedPolynomial::parse("1024x^2 + 64xy + 8xz + 2x + 8y^2 + 2yz + y + z^2 + z + 2", Valuation::PAdic(2))
            .unwrap();
        let vals: Vec<i64> = f.dense_valuations().unwrap().iter().map(|v| v.to_integer().try_into().unwrap()).collect();
        assert_eq!(vals, vec![10, 6, 3, 1, 3, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn missing_monomial_is_a_support_error() {
        let f = ValuedPolynomial::parse("x^2 + y + 1", Valuation::Puiseux).unwrap();
        assert!(matches!(f.dense_valuations(), Err(Error::Support(e)) if e == vec![1, 1, 0]));
        assert!(ValuedPolynomial::parse("x + q", Valuation::Puiseux).is_err());
        assert!(ValuedPolynomial::parse("x + + y", Valuation::Puiseux).is_err());
    }

    #[test]
    fn json_shape() {
        let f = ValuedPolynomial::from_int_valuations(1, &[2, 1, 0, 2]).unwrap();
        let j = serde_json::to_value(&f).unwrap();
        assert_eq!(j["terms"][0]["exp"], serde_json::json!([1, 0, 0]));
        assert_eq!(j["terms"][0]["val"], "2");
        let back: ValuedPolynomial = serde_json::from_value(j).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn flat_valuations_are_degenerate() {
        let f1 = ValuedPolynomial::from_int_valuations(2, &[0; 10]).unwrap();
        let f2 = ValuedPolynomial::from_int_valuations(2, &[0; 10]).unwrap();
        match tropicalize_pair(&f1, &f2) {
            Err(Error::NotTriangulation { size, .. }) => assert_eq!(size, 20),
            other => panic!("expected a degeneracy report, got {other:?}"),
        }
    }
}
