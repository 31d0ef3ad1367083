use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Counters, EnumerationFilters};
use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::triangulation::{SymmetryGroup, Triangulation};

pub const CHECKPOINT_FORMAT: &str = "tropcay-checkpoint/1";

/// Complete enumeration state. Triangulations are stored as lists of cell
/// bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub digest: String,
    pub filters: EnumerationFilters,
    pub counters: Counters,
    pub complete: bool,
    pub regular: Vec<Triangulation>,
    pub irregular: Vec<Triangulation>,
    pub frontier: Vec<Triangulation>,
    pub pending: Vec<Triangulation>,
}

impl Checkpoint {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let ck: Checkpoint =
            serde_json::from_str(&text).map_err(|e| Error::CorruptCheckpoint(format!("{}: {e}", path.display())))?;
        if ck.format != CHECKPOINT_FORMAT {
            return Err(Error::CorruptCheckpoint(format!("unsupported format {:?}", ck.format)));
        }
        Ok(ck)
    }

    /// Writes to a sibling temporary file and renames it into place.
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        fs::write(&tmp, serde_json::to_vec(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// SHA-256 over the points, labels, group elements and filters of a run.
pub fn config_digest(geom: &Geometry, group: &SymmetryGroup, filters: &EnumerationFilters) -> String {
    #[derive(Serialize)]
    struct Key<'a> {
        points: &'a [Vec<i64>],
        labels: &'a [String],
        group: Vec<&'a [u8]>,
        filters: &'a EnumerationFilters,
    }
    let mut group_elems: Vec<&[u8]> = group.elements().iter().map(|g| g.as_slice()).collect();
    group_elems.sort_unstable();
    let key = Key { points: geom.config().points(), labels: geom.config().labels(), group: group_elems, filters };
    let bytes = serde_json::to_vec(&key).expect("digest key serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}
