use std::collections::{HashMap, VecDeque};

use log::debug;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::enumerate::enumerate_top_cells;
use super::faces::{faces, FaceDescriptor};
use crate::diagram::{Signature, StringDiagramType};
use crate::error::{Error, Result};
use crate::homology::{betti_from_ranks, homology_summary, rational_boundary_ranks, Coeffs, Column, HomologySummary, IntegerMatrix};

/// Factor dimensions of a cell: `n` simplex factors and `intervals` copies of `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellShape {
    pub n: Vec<usize>,
    pub intervals: usize,
}

impl CellShape {
    pub fn of(g: &StringDiagramType) -> Self {
        let (n, intervals) = g.shape();
        CellShape { n, intervals }
    }

    pub fn dim(&self) -> usize {
        self.n.iter().sum::<usize>() + self.intervals
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceEntry {
    pub descriptor: FaceDescriptor,
    pub target: usize,
    pub degree: i8,
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub dtype: StringDiagramType,
    /// Extra label for cells that are not plain types (subdivision flags).
    pub aux: Vec<u32>,
    pub dim: usize,
    pub shape: CellShape,
    pub in_sd: bool,
    pub faces: Vec<FaceEntry>,
}

impl Cell {
    pub fn key(&self) -> String {
        let mut k = String::from_utf8(self.dtype.canonical_key()).expect("json is utf-8");
        if !self.aux.is_empty() {
            k.push('|');
            k.push_str(&self.aux.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
        }
        k
    }
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    pub signature: Signature,
    pub cells: Vec<Cell>,
    pub by_dim: Vec<Vec<usize>>,
    pub pos_in_dim: Vec<usize>,
    /// All codimension-one faces of every cell are distinct cells of one lower dimension.
    pub regular: bool,
}

impl CellComplex {
    /// Sorts cells by `(dim, label)`, renumbers face targets, fills the
    /// dimension tables and the regularity flag.
    pub fn from_cells(signature: Signature, cells: Vec<Cell>) -> Self {
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (&cells[a], &cells[b]);
            (x.dim, &x.dtype, &x.aux).cmp(&(y.dim, &y.dtype, &y.aux))
        });
        let mut new_id = vec![0; cells.len()];
        for (i, &o) in order.iter().enumerate() {
            new_id[o] = i;
        }
        let mut slots: Vec<Option<Cell>> = cells.into_iter().map(Some).collect();
        let mut sorted = Vec::with_capacity(slots.len());
        for &o in &order {
            let mut c = slots[o].take().expect("each cell once");
            for f in &mut c.faces {
                f.target = new_id[f.target];
            }
            sorted.push(c);
        }
        let top = sorted.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top + 1];
        let mut pos_in_dim = vec![0; sorted.len()];
        for (i, c) in sorted.iter().enumerate() {
            pos_in_dim[i] = by_dim[c.dim].len();
            by_dim[c.dim].push(i);
        }
        let regular = sorted.iter().all(|c| {
            let mut t: Vec<usize> = c.faces.iter().map(|f| f.target).collect();
            let all_codim_one = c.faces.iter().all(|f| sorted[f.target].dim + 1 == c.dim && f.degree != 0);
            t.sort_unstable();
            t.dedup();
            all_codim_one && t.len() == c.faces.len()
        });
        CellComplex { signature, cells: sorted, by_dim, pos_in_dim, regular }
    }

    pub fn dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(m, &f)| if m % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn top_cells(&self) -> &[usize] {
        self.by_dim.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Boundary `∂_m` as triplets summed over faces; `m ≥ 1`.
    pub fn boundary_triplets(&self, m: usize) -> Result<Vec<(usize, usize, i64)>> {
        if m == 0 || m > self.dim() {
            return Err(Error::BadIndex(format!("boundary degree {m} outside 1..={}", self.dim())));
        }
        let mut acc: HashMap<(usize, usize), i64> = HashMap::new();
        for (col, &c) in self.by_dim[m].iter().enumerate() {
            for f in &self.cells[c].faces {
                if !(-1..=1).contains(&f.degree) {
                    return Err(Error::SignConsistency {
                        degree: m,
                        detail: format!("face degree {} out of range", f.degree),
                    });
                }
                if f.degree == 0 {
                    continue;
                }
                if self.cells[f.target].dim + 1 != m {
                    return Err(Error::SignConsistency {
                        degree: m,
                        detail: format!("nonzero degree onto a cell of dimension {}", self.cells[f.target].dim),
                    });
                }
                *acc.entry((self.pos_in_dim[f.target], col)).or_insert(0) += f.degree as i64;
            }
        }
        let mut t: Vec<(usize, usize, i64)> = acc.into_iter().filter(|e| e.1 != 0).map(|((r, c), v)| (r, c, v)).collect();
        t.sort_unstable();
        Ok(t)
    }

    pub fn cellular_boundary_matrix(&self, m: usize) -> Result<IntegerMatrix> {
        let t = self.boundary_triplets(m)?;
        Ok(IntegerMatrix::from_triplets(
            self.by_dim[m - 1].len(),
            self.by_dim[m].len(),
            t.into_iter().map(|(r, c, v)| (r, c, BigInt::from(v))),
        ))
    }

    pub fn boundary_matrices(&self) -> Result<Vec<IntegerMatrix>> {
        (1..=self.dim()).map(|m| self.cellular_boundary_matrix(m)).collect()
    }

    pub fn homology(&self, coeffs: Coeffs) -> Result<HomologySummary> {
        homology_summary(&self.f_vector(), &self.boundary_matrices()?, coeffs)
    }

    /// Betti numbers over ℚ by sparse column reduction; cheaper than
    /// [`homology`](Self::homology) on large complexes.
    pub fn rational_betti(&self) -> Result<Vec<usize>> {
        let f = self.f_vector();
        let top = f.len() - 1;
        let mut err = None;
        let rank = rational_boundary_ranks(top, |m| {
            let mut cols: Vec<Column> = vec![Vec::new(); f[m]];
            match self.boundary_triplets(m) {
                Ok(t) => {
                    for (r, c, v) in t {
                        cols[c].push((r as u32, v));
                    }
                }
                Err(e) => err = Some(e),
            }
            cols
        });
        match err {
            Some(e) => Err(e),
            None => Ok(betti_from_ranks(&f, &rank)),
        }
    }

    /// Verifies `∂_{m−1} ∂_m = 0` for all `m`.
    pub fn check_d_squared(&self) -> Result<()> {
        let mats = self.boundary_matrices()?;
        for m in 1..mats.len() {
            // mats[m-1] is ∂_m, mats[m] is ∂_{m+1}
            let prod = mats[m - 1].mul(&mats[m])?;
            if let Some((r, c, v)) = prod.entries.first() {
                return Err(Error::SignConsistency {
                    degree: m + 1,
                    detail: format!("entry ({r},{c}) = {v} of ∂_{}∂_{}", m, m + 1),
                });
            }
        }
        Ok(())
    }

    pub fn sd_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&c| self.cells[c].in_sd).collect()
    }

    /// Every cell is a (possibly iterated) face of some top cell.
    pub fn all_reach_from_top(&self) -> bool {
        let top = self.dim();
        let mut seen = vec![false; self.cells.len()];
        let mut stack: Vec<usize> = self.by_dim[top].clone();
        for &c in &stack {
            seen[c] = true;
        }
        while let Some(c) = stack.pop() {
            for f in &self.cells[c].faces {
                if !seen[f.target] {
                    seen[f.target] = true;
                    stack.push(f.target);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Interning table from canonical codes to cell ids.
#[derive(Default)]
pub(crate) struct Interner {
    index: HashMap<Box<[u16]>, usize>,
}

impl Interner {
    pub fn get(&self, g: &StringDiagramType) -> Option<usize> {
        self.index.get(&g.compact_code()).copied()
    }

    pub fn insert(&mut self, g: &StringDiagramType, id: usize) -> bool {
        self.index.insert(g.compact_code(), id).is_none()
    }
}

/// Closure of the top cells under faces, with ∂² = 0 asserted.
pub fn build_complex(sig: Signature) -> Result<CellComplex> {
    let tops = enumerate_top_cells(sig)?;
    debug!("{sig}: {} top cells", tops.len());
    let mut cells: Vec<Cell> = Vec::new();
    let mut interner = Interner::default();
    let mut queue = VecDeque::new();
    for g in tops {
        interner.insert(&g, cells.len());
        queue.push_back(cells.len());
        cells.push(new_cell(g));
    }
    while let Some(c) = queue.pop_front() {
        let fs = faces(&cells[c].dtype);
        let mut entries = Vec::with_capacity(fs.len());
        for f in fs {
            let target = match interner.get(&f.target) {
                Some(t) => t,
                None => {
                    let id = cells.len();
                    interner.insert(&f.target, id);
                    cells.push(new_cell(f.target));
                    queue.push_back(id);
                    id
                }
            };
            entries.push(FaceEntry { descriptor: f.descriptor, target, degree: f.degree });
        }
        cells[c].faces = entries;
    }
    let cx = CellComplex::from_cells(sig, cells);
    debug!("{sig}: f-vector {:?}", cx.f_vector());
    cx.check_d_squared()?;
    Ok(cx)
}

fn new_cell(g: StringDiagramType) -> Cell {
    let shape = CellShape::of(&g);
    Cell {
        dim: shape.dim(),
        in_sd: g.is_in_sd(),
        shape,
        dtype: g,
        aux: Vec::new(),
        faces: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t3_f_vector() {
        let cx = build_complex(Signature::new(0, 2, 1)).unwrap();
        assert_eq!(cx.f_vector(), vec![4, 12, 12, 4]);
        assert_eq!(cx.euler_characteristic(), 0);
        assert!(cx.all_reach_from_top());
        let d1 = cx.cellular_boundary_matrix(1).unwrap();
        assert_eq!((d1.rows, d1.cols), (4, 12));
        assert!(!cx.regular);
    }

    #[test]
    fn reduction_matches_smith_form() {
        for sig in [Signature::new(0, 2, 1), Signature::new(1, 1, 1), Signature::new(0, 1, 2)] {
            let cx = build_complex(sig).unwrap();
            assert_eq!(cx.rational_betti().unwrap(), cx.homology(Coeffs::Q).unwrap().betti(), "{sig}");
        }
    }
}
