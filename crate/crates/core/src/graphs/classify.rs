use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{canonical_form, CanonicalForm};
use crate::tropical::{cycle_length, CurveGraph};

pub const CLASS_TABLE_FORMAT: &str = "tropcay-classes/1";

pub type FormHasher = fn(&CanonicalForm) -> u64;

/// First eight bytes of the SHA-256 digest of the uncolored canonical form.
pub fn canonical_hash(form: &CanonicalForm) -> u64 {
    let mut h = Sha256::new();
    h.update((form.vertices as u64).to_le_bytes());
    for &(u, v) in &form.edges {
        h.update((u as u32).to_le_bytes());
        h.update((v as u32).to_le_bytes());
    }
    let digest = h.finalize();
    u64::from_be_bytes(digest[..8].try_into().expect("eight bytes"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub id: usize,
    pub cycle_length: Option<usize>,
    pub members: u64,
    /// Letter encoding of the earliest input seen in this class.
    pub representative: String,
    /// Input ordinal of the representative.
    pub first_seen: u64,
    pub hash: String,
    pub form: CanonicalForm,
    pub graph: CurveGraph,
}

/// Streaming isomorphism classification. Hashes only pick a bucket;
/// membership is always decided by comparing full canonical forms.
#[derive(Clone, Debug)]
pub struct ClassTable {
    use_colors: bool,
    hasher: FormHasher,
    buckets: HashMap<u64, Vec<usize>>,
    entries: Vec<ClassEntry>,
    total: u64,
}

#[derive(Serialize)]
struct TableJson<'a> {
    format: &'a str,
    use_colors: bool,
    total: u64,
    classes: Vec<ClassEntry>,
}

impl ClassTable {
    pub fn new(use_colors: bool) -> Self {
        Self::with_hasher(use_colors, canonical_hash)
    }

    pub fn with_hasher(use_colors: bool, hasher: FormHasher) -> Self {
        Self { use_colors, hasher, buckets: HashMap::new(), entries: Vec::new(), total: 0 }
    }

    pub fn use_colors(&self) -> bool {
        self.use_colors
    }

    /// Number of graphs classified so far.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, graph: &CurveGraph, representative: &str, ordinal: u64) {
        let form = canonical_form(graph, self.use_colors);
        let entry = ClassEntry {
            id: 0,
            cycle_length: cycle_length(graph).ok(),
            members: 1,
            representative: representative.to_owned(),
            first_seen: ordinal,
            hash: String::new(),
            form,
            graph: graph.clone(),
        };
        self.absorb(entry);
    }

    fn absorb(&mut self, mut entry: ClassEntry) {
        self.total += entry.members;
        let uncolored = CanonicalForm { colors: Vec::new(), ..entry.form.clone() };
        let key = (self.hasher)(&uncolored);
        let bucket = self.buckets.entry(key).or_default();
        if let Some(&i) = bucket.iter().find(|&&i| self.entries[i].form == entry.form) {
            let e = &mut self.entries[i];
            e.members += entry.members;
            if entry.first_seen < e.first_seen {
                e.first_seen = entry.first_seen;
                e.representative = entry.representative;
                e.graph = entry.graph;
            }
            return;
        }
        entry.hash = format!("{key:016x}");
        bucket.push(self.entries.len());
        self.entries.push(entry);
    }

    /// Folds another table into this one. The result does not depend on how
    /// the input stream was split.
    pub fn merge(&mut self, other: ClassTable) {
        assert_eq!(self.use_colors, other.use_colors, "merging tables with different color settings");
        for e in other.entries {
            self.absorb(e);
        }
    }

    /// Entries ordered by cycle length (acyclic graphs last), then canonical
    /// form, with ids assigned from 0 in that order.
    pub fn entries(&self) -> Vec<ClassEntry> {
        let mut out = self.entries.clone();
        out.sort_by(|a, b| {
            let ka = a.cycle_length.unwrap_or(usize::MAX);
            let kb = b.cycle_length.unwrap_or(usize::MAX);
            ka.cmp(&kb).then_with(|| a.form.cmp(&b.form))
        });
        for (i, e) in out.iter_mut().enumerate() {
            e.id = i;
        }
        out
    }

    /// Number of classes per cycle length.
    pub fn cycle_histogram(&self) -> std::collections::BTreeMap<Option<usize>, usize> {
        let mut h = std::collections::BTreeMap::new();
        for e in &self.entries {
            *h.entry(e.cycle_length).or_insert(0) += 1;
        }
        h
    }

    pub fn to_json(&self) -> serde_json::Value {
        let t = TableJson { format: CLASS_TABLE_FORMAT, use_colors: self.use_colors, total: self.total, classes: self.entries() };
        serde_json::to_value(t).expect("class table serializes")
    }
}
