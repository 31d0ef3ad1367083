use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{multigraph_form, CanonicalForm, Multigraph};
use crate::error::{Error, Result};

pub const CENSUS_MAX_VERTICES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusConvention {
    Simple,
    Multigraph,
    MultigraphLoops,
}

impl FromStr for CensusConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(Self::Simple),
            "multigraph" => Ok(Self::Multigraph),
            "multigraph+loops" | "multigraph-loops" => Ok(Self::MultigraphLoops),
            _ => Err(Error::Parse(format!("unknown census convention {s:?}"))),
        }
    }
}

impl fmt::Display for CensusConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Simple => "simple",
            Self::Multigraph => "multigraph",
            Self::MultigraphLoops => "multigraph+loops",
        })
    }
}

/// Connected graphs with `v` vertices, `e` edges and all degrees at most
/// `max_degree`, counted up to isomorphism. Loops add two to the degree.
///
/// Graphs are grown one edge at a time; after each step the isomorphism
/// classes are deduplicated by canonical form, and partial graphs with too
/// many components to be joined by the remaining edges are dropped.
pub fn census(v: usize, e: usize, max_degree: usize, convention: CensusConvention) -> Result<u64> {
    if v > CENSUS_MAX_VERTICES {
        return Err(Error::Limit(format!("census supports at most {CENSUS_MAX_VERTICES} vertices, got {v}")));
    }
    if v == 0 {
        return Ok(0);
    }
    let mut level: Vec<Multigraph> = vec![Multigraph::new(v)];
    for step in 0..e {
        let remaining = e - step - 1;
        let mut seen: HashSet<CanonicalForm> = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for a in 0..v {
                for b in a..v {
                    let allowed = match convention {
                        CensusConvention::Simple => a != b && g.at(a, b) == 0,
                        CensusConvention::Multigraph => a != b,
                        CensusConvention::MultigraphLoops => true,
                    };
                    if !allowed {
                        continue;
                    }
                    let mut h = g.clone();
                    h.add_edge(a, b);
                    if h.degree(a) > max_degree || h.degree(b) > max_degree {
                        continue;
                    }
                    if h.components() > remaining + 1 {
                        continue;
                    }
                    let form = multigraph_form(&h);
                    if seen.insert(form) {
                        next.push(h);
                    }
                }
            }
        }
        level = next;
    }
    Ok(level.iter().filter(|g| g.components() == 1).count() as u64)
}
