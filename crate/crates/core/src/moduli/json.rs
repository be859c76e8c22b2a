//! `complex.v1`: cells, faces with degrees, and boundary matrices as triplets;
//! plus an on-disk cache of built complexes.

use std::path::{Path, PathBuf};

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use super::complex::{build_complex, Cell, CellComplex, CellShape, FaceEntry};
use crate::diagram::{Signature, StringDiagramType};
use crate::error::{Error, Result};

pub const COMPLEX_SCHEMA: &str = "complex.v1";

/// Environment variable that overrides the cache directory.
pub const CACHE_ENV: &str = "SDBAR_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub key: String,
    #[serde(rename = "type")]
    pub dtype: StringDiagramType,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux: Vec<u32>,
    pub dim: usize,
    pub shape: CellShape,
    pub in_sd: bool,
    pub faces: Vec<FaceEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryJson {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexFlags {
    #[serde(default)]
    pub subdivided: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub schema: String,
    pub signature: Signature,
    #[serde(default)]
    pub flags: ComplexFlags,
    pub f_vector: Vec<usize>,
    pub regular: bool,
    pub cells: Vec<CellJson>,
    pub boundaries: Vec<BoundaryJson>,
}

impl ComplexJson {
    pub fn from_complex(cx: &CellComplex, flags: ComplexFlags) -> Result<Self> {
        let cells = cx
            .cells
            .iter()
            .map(|c| CellJson {
                key: c.key(),
                dtype: c.dtype.clone(),
                aux: c.aux.clone(),
                dim: c.dim,
                shape: c.shape.clone(),
                in_sd: c.in_sd,
                faces: c.faces.clone(),
            })
            .collect();
        let boundaries = (1..=cx.dim())
            .map(|m| {
                Ok(BoundaryJson {
                    degree: m,
                    rows: cx.by_dim[m - 1].len(),
                    cols: cx.by_dim[m].len(),
                    entries: cx.boundary_triplets(m)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ComplexJson {
            schema: COMPLEX_SCHEMA.into(),
            signature: cx.signature,
            flags,
            f_vector: cx.f_vector(),
            regular: cx.regular,
            cells,
            boundaries,
        })
    }

    /// Rebuilds the complex and checks the stored keys, counts and matrices
    /// against it.
    pub fn to_complex(&self) -> Result<CellComplex> {
        if self.schema != COMPLEX_SCHEMA {
            return Err(Error::Json(format!("expected schema {COMPLEX_SCHEMA}, got {}", self.schema)));
        }
        let n = self.cells.len();
        let mut cells = Vec::with_capacity(n);
        for (i, c) in self.cells.iter().enumerate() {
            if let Some(v) = c.dtype.validate().first() {
                return Err(Error::MalformedType(format!("cell {i}: {}: {}", v.kind, v.detail)));
            }
            if c.dim != c.shape.dim() {
                return Err(Error::Json(format!("cell {i}: dim {} but shape has dim {}", c.dim, c.shape.dim())));
            }
            if c.aux.is_empty() && c.shape != CellShape::of(&c.dtype) {
                return Err(Error::Json(format!("cell {i}: shape does not match its type")));
            }
            if let Some(f) = c.faces.iter().find(|f| f.target >= n) {
                return Err(Error::BadIndex(format!("cell {i}: face target {} of {n} cells", f.target)));
            }
            cells.push(Cell {
                dtype: c.dtype.clone(),
                aux: c.aux.clone(),
                dim: c.dim,
                shape: c.shape.clone(),
                in_sd: c.in_sd,
                faces: c.faces.clone(),
            });
        }
        let cx = CellComplex::from_cells(self.signature, cells);
        for (i, c) in self.cells.iter().enumerate() {
            // from_cells keeps stored order when the input is already sorted
            if cx.cells[i].key() != c.key {
                return Err(Error::Json(format!("cell {i}: stored key does not match its type or order")));
            }
        }
        if cx.f_vector() != self.f_vector {
            return Err(Error::Json(format!("f-vector {:?} but cells give {:?}", self.f_vector, cx.f_vector())));
        }
        if self.boundaries.len() != cx.dim() {
            return Err(Error::Json(format!("{} boundary maps for dimension {}", self.boundaries.len(), cx.dim())));
        }
        for (i, b) in self.boundaries.iter().enumerate() {
            let m = i + 1;
            if b.degree != m || b.rows != cx.by_dim[m - 1].len() || b.cols != cx.by_dim[m].len() {
                return Err(Error::Json(format!("boundary {m} has the wrong degree or size")));
            }
            if cx.boundary_triplets(m)? != b.entries {
                return Err(Error::Json(format!("boundary {m} does not match the face lists")));
            }
        }
        if cx.regular != self.regular {
            return Err(Error::Json("regular flag does not match the face lists".into()));
        }
        Ok(cx)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let d: ComplexJson = serde_json::from_str(s)?;
        d.to_complex()?;
        Ok(d)
    }
}

/// Directory for cached complexes: the explicit one, else `$SDBAR_CACHE_DIR`.
pub fn cache_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

pub fn cache_file(dir: &Path, sig: Signature, flags: &ComplexFlags) -> PathBuf {
    let tag = if flags.subdivided { "-sub" } else { "" };
    dir.join(format!("{COMPLEX_SCHEMA}-g{}-k{}-l{}{tag}.json", sig.g, sig.k, sig.l))
}

/// Where a complex came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Built,
    Cached,
}

/// Builds `SD̄(sig)`, reading and writing the cache when a directory is given.
/// A cache file that fails validation is rebuilt and overwritten.
pub fn load_or_build(sig: Signature, dir: Option<&Path>) -> Result<(CellComplex, Provenance)> {
    let flags = ComplexFlags::default();
    let Some(dir) = dir else { return Ok((build_complex(sig)?, Provenance::Built)) };
    let path = cache_file(dir, sig, &flags);
    if let Ok(s) = std::fs::read_to_string(&path) {
        match serde_json::from_str::<ComplexJson>(&s).map_err(Error::from).and_then(|j| {
            if j.signature != sig || j.flags != flags {
                return Err(Error::Json("cache entry is for another complex".into()));
            }
            j.to_complex()
        }) {
            Ok(cx) => {
                debug!("loaded {} from {}", sig, path.display());
                return Ok((cx, Provenance::Cached));
            }
            Err(e) => warn!("ignoring cache file {}: {e}", path.display()),
        }
    }
    let cx = build_complex(sig)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::Json(format!("{}: {e}", dir.display())))?;
    let body = serde_json::to_string(&ComplexJson::from_complex(&cx, flags)?)?;
    std::fs::write(&path, body).map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
    Ok((cx, Provenance::Built))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cx = build_complex(Signature::new(0, 2, 1)).unwrap();
        let j = ComplexJson::from_complex(&cx, ComplexFlags::default()).unwrap();
        let s = serde_json::to_string(&j).unwrap();
        let back = ComplexJson::parse(&s).unwrap();
        assert_eq!(back, j);
        let cy = back.to_complex().unwrap();
        assert_eq!(cy.f_vector(), vec![4, 12, 12, 4]);
        assert_eq!(cy.boundary_matrices().unwrap(), cx.boundary_matrices().unwrap());
    }

    #[test]
    fn tampering_is_caught() {
        let cx = build_complex(Signature::new(0, 2, 1)).unwrap();
        let j = ComplexJson::from_complex(&cx, ComplexFlags::default()).unwrap();
        let mut bad = j.clone();
        bad.boundaries[0].entries[0].2 *= -1;
        assert!(bad.to_complex().is_err());
        let mut bad = j.clone();
        bad.cells.last_mut().unwrap().faces[0].target = 999;
        assert!(bad.to_complex().is_err());
        let mut bad = j.clone();
        bad.f_vector[0] = 5;
        assert!(bad.to_complex().is_err());
        let mut bad = j;
        bad.schema = "complex.v0".into();
        assert!(bad.to_complex().is_err());
    }

    #[test]
    fn cache_hit_on_second_load() {
        let dir = std::env::temp_dir().join(format!("sdbar-cache-test-{}", std::process::id()));
        let sig = Signature::new(0, 1, 2);
        let (a, p1) = load_or_build(sig, Some(&dir)).unwrap();
        let (b, p2) = load_or_build(sig, Some(&dir)).unwrap();
        assert_eq!((p1, p2), (Provenance::Built, Provenance::Cached));
        assert_eq!(a.f_vector(), b.f_vector());
        std::fs::write(cache_file(&dir, sig, &ComplexFlags::default()), "{}").unwrap();
        assert_eq!(load_or_build(sig, Some(&dir)).unwrap().1, Provenance::Built);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
