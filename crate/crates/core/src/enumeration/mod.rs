//! Breadth-first flip-graph enumeration of regular triangulations up to
//! symmetry, with checkpoint and resume.
//!
//! The search relies on the connectivity of the flip graph of regular
//! triangulations (its graph is the edge graph of the secondary polytope).
//! Every discovered class is canonicalized under the symmetry group and
//! checked for regularity once; only regular classes are expanded. Filters
//! restrict what is emitted, never what is traversed.

mod checkpoint;

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checkpoint::{config_digest, Checkpoint, CHECKPOINT_FORMAT};

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::triangulation::{flips, is_regular, placing_triangulation, SymmetryGroup, Triangulation};

/// Which regular triangulations are emitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationFilters {
    pub require_regular: bool,
    pub require_unimodular: bool,
    pub require_full: bool,
}

impl Default for EnumerationFilters {
    fn default() -> Self {
        Self { require_regular: true, require_unimodular: false, require_full: false }
    }
}

impl EnumerationFilters {
    pub fn unimodular() -> Self {
        Self { require_unimodular: true, ..Self::default() }
    }

    pub fn accepts(&self, geom: &Geometry, t: &Triangulation) -> bool {
        (!self.require_unimodular || t.is_unimodular(geom)) && (!self.require_full || t.is_full(geom))
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Worker threads for expansion and regularity checks.
    pub jobs: usize,
    /// Frontier nodes expanded per round. Output order depends on this but
    /// not on `jobs`.
    pub batch: usize,
    pub checkpoint: Option<PathBuf>,
    /// Emissions between checkpoint writes.
    pub checkpoint_every: u64,
    /// Largest visited set for which flip-graph closure is re-verified when
    /// the search completes.
    pub closure_check_limit: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self { jobs: 1, batch: 64, checkpoint: None, checkpoint_every: 10_000, closure_check_limit: 20_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Symmetry classes seen, regular or not.
    pub visited: u64,
    /// Regular symmetry classes seen.
    pub regular: u64,
    /// Classes whose flips have been explored.
    pub expanded: u64,
    pub emitted: u64,
}

/// Streaming enumerator; yields one canonical representative per symmetry
/// class of regular triangulations passing the filters.
pub struct Enumerator<'a> {
    geom: &'a Geometry,
    group: &'a SymmetryGroup,
    filters: EnumerationFilters,
    opts: EnumerationOptions,
    visited: HashMap<Triangulation, bool>,
    frontier: VecDeque<Triangulation>,
    pending: VecDeque<Triangulation>,
    counters: Counters,
    pool: Option<rayon::ThreadPool>,
    stop: Arc<AtomicBool>,
    since_checkpoint: u64,
    finished: bool,
    halted: bool,
}

impl<'a> Enumerator<'a> {
    /// Starts from the placing triangulation in configuration order.
    pub fn new(
        geom: &'a Geometry,
        group: &'a SymmetryGroup,
        filters: EnumerationFilters,
        opts: EnumerationOptions,
    ) -> Result<Self> {
        if !filters.require_regular {
            return Err(Error::Domain("flip search is only complete for regular triangulations".into()));
        }
        let seed = group.canonical(&placing_triangulation(geom, None)?);
        let mut e = Self::empty(geom, group, filters, opts)?;
        e.visited.insert(seed.clone(), true);
        e.counters.visited = 1;
        e.counters.regular = 1;
        if filters.accepts(geom, &seed) {
            e.pending.push_back(seed.clone());
        }
        e.frontier.push_back(seed);
        Ok(e)
    }

    /// Continues a run from a checkpoint written for the same configuration,
    /// group and filters.
    pub fn resume(
        path: impl Into<PathBuf>,
        geom: &'a Geometry,
        group: &'a SymmetryGroup,
        filters: EnumerationFilters,
        mut opts: EnumerationOptions,
    ) -> Result<Self> {
        let path = path.into();
        let ck = Checkpoint::read(&path)?;
        let digest = config_digest(geom, group, &filters);
        if ck.digest != digest {
            return Err(Error::CheckpointMismatch(format!(
                "checkpoint {} was written for a different configuration, group or filters",
                path.display()
            )));
        }
        if opts.checkpoint.is_none() {
            opts.checkpoint = Some(path);
        }
        let mut e = Self::empty(geom, group, filters, opts)?;
        let limit = geom.all_points();
        let check = |t: Triangulation| -> Result<Triangulation> {
            if t.cells().iter().any(|c| c.0 & !limit != 0 || c.len() != geom.dim() + 1) {
                return Err(Error::CorruptCheckpoint("cell does not fit the configuration".into()));
            }
            Ok(t)
        };
        for t in ck.regular {
            e.visited.insert(check(t)?, true);
        }
        for t in ck.irregular {
            e.visited.insert(check(t)?, false);
        }
        e.frontier = ck.frontier.into_iter().map(check).collect::<Result<_>>()?;
        e.pending = ck.pending.into_iter().map(check).collect::<Result<_>>()?;
        e.counters = ck.counters;
        Ok(e)
    }

    fn empty(
        geom: &'a Geometry,
        group: &'a SymmetryGroup,
        filters: EnumerationFilters,
        opts: EnumerationOptions,
    ) -> Result<Self> {
        let pool = if opts.jobs > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(opts.jobs)
                    .build()
                    .map_err(|e| Error::Domain(format!("thread pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(Self {
            geom,
            group,
            filters,
            opts,
            visited: HashMap::new(),
            frontier: VecDeque::new(),
            pending: VecDeque::new(),
            counters: Counters::default(),
            pool,
            stop: Arc::new(AtomicBool::new(false)),
            since_checkpoint: 0,
            finished: false,
            halted: false,
        })
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn frontier_len(&self) -> usize {
        self.frontier.len()
    }

    /// Setting this flag makes the next call to `next` write a checkpoint
    /// (when configured) and end the stream.
    pub fn stop_handle(&self) -> Arc<AtomicBool> {
        self.stop.clone()
    }

    /// True when the stream ended because of the stop flag rather than
    /// exhaustion.
    pub fn halted(&self) -> bool {
        self.halted
    }

    /// True when the search space has been exhausted.
    pub fn is_complete(&self) -> bool {
        self.frontier.is_empty() && self.pending.is_empty()
    }

    pub fn snapshot(&self) -> Checkpoint {
        let mut regular = Vec::new();
        let mut irregular = Vec::new();
        for (t, &r) in &self.visited {
            if r {
                regular.push(t.clone());
            } else {
                irregular.push(t.clone());
            }
        }
        regular.sort_unstable();
        irregular.sort_unstable();
        Checkpoint {
            format: CHECKPOINT_FORMAT.to_owned(),
            digest: config_digest(self.geom, self.group, &self.filters),
            filters: self.filters,
            counters: self.counters,
            complete: self.is_complete(),
            regular,
            irregular,
            frontier: self.frontier.iter().cloned().collect(),
            pending: self.pending.iter().cloned().collect(),
        }
    }

    /// Writes a checkpoint now, if a path is configured.
    pub fn write_checkpoint(&mut self) -> Result<()> {
        if let Some(path) = &self.opts.checkpoint {
            self.snapshot().write(path)?;
            log::info!("checkpoint written to {}", path.display());
        }
        self.since_checkpoint = 0;
        Ok(())
    }

    fn neighbors(&self, t: &Triangulation) -> Vec<Triangulation> {
        let mut out: Vec<Triangulation> = flips(self.geom, t).into_iter().map(|(_, n)| self.group.canonical(&n)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn expand_batch(&mut self) {
        let take = self.opts.batch.max(1).min(self.frontier.len());
        let batch: Vec<Triangulation> = self.frontier.drain(..take).collect();
        let candidates: Vec<Vec<Triangulation>> = match &self.pool {
            Some(pool) => pool.install(|| batch.par_iter().map(|t| self.neighbors(t)).collect()),
            None => batch.iter().map(|t| self.neighbors(t)).collect(),
        };
        let mut fresh: Vec<Triangulation> = Vec::new();
        let mut in_batch: HashSet<&Triangulation> = HashSet::new();
        for t in candidates.iter().flatten() {
            if !self.visited.contains_key(t) && in_batch.insert(t) {
                fresh.push(t.clone());
            }
        }
        let geom = self.geom;
        let regular: Vec<bool> = match &self.pool {
            Some(pool) => pool.install(|| fresh.par_iter().map(|t| is_regular(geom, t).is_some()).collect()),
            None => fresh.iter().map(|t| is_regular(geom, t).is_some()).collect(),
        };
        for (t, r) in fresh.into_iter().zip(regular) {
            self.counters.visited += 1;
            if r {
                self.counters.regular += 1;
                if self.filters.accepts(geom, &t) {
                    self.pending.push_back(t.clone());
                }
                self.frontier.push_back(t.clone());
            }
            self.visited.insert(t, r);
        }
        self.counters.expanded += batch.len() as u64;
    }

    /// Re-derives every regular class's neighbors and checks they were all
    /// seen.
    fn verify_closure(&self) -> Result<()> {
        for (t, &r) in &self.visited {
            if !r {
                continue;
            }
            for n in self.neighbors(t) {
                if !self.visited.contains_key(&n) {
                    return Err(Error::Domain(format!("flip graph not closed: neighbor of {t:?} never visited")));
                }
            }
        }
        Ok(())
    }
}

impl Iterator for Enumerator<'_> {
    type Item = Result<Triangulation>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        if self.opts.checkpoint.is_some() && self.since_checkpoint >= self.opts.checkpoint_every {
            if let Err(e) = self.write_checkpoint() {
                return Some(Err(e));
            }
        }
        if self.stop.load(Ordering::Relaxed) {
            self.finished = true;
            self.halted = true;
            return self.write_checkpoint().err().map(Err);
        }
        loop {
            if let Some(t) = self.pending.pop_front() {
                self.counters.emitted += 1;
                self.since_checkpoint += 1;
                return Some(Ok(t));
            }
            if self.frontier.is_empty() {
                self.finished = true;
                if self.visited.len() <= self.opts.closure_check_limit {
                    if let Err(e) = self.verify_closure() {
                        return Some(Err(e));
                    }
                }
                return self.write_checkpoint().err().map(Err);
            }
            self.expand_batch();
        }
    }
}
