//! Barycentric subdivision of every simplex and interval factor of every cell.
//!
//! An interval `[0,1]` is treated as `Δ¹` with vertex `0` at `p = 0`. A cell of
//! the subdivision lies in the open cell `G` and picks, for each factor, a chain
//! `S_0 ⊊ … ⊊ S_m` of vertex subsets ending at the full set; its vertices are
//! the barycenters of the `S_j`, oriented in chain order. Faces that drop the full
//! set land on the boundary of `c_G` and are moved to the cell containing them
//! through the same coordinate map that `locate_cell` uses.

use std::collections::HashMap;

use log::debug;

use super::complex::{Cell, CellComplex, CellShape, FaceEntry};
use super::faces::{degenerate, FaceDescriptor};
use crate::diagram::StringDiagramType;
use crate::error::{Error, Result};
use crate::homology::{betti_from_ranks, rational_boundary_ranks, Column};

/// All chains of nonempty subsets of an `m`-element set ending at the full set.
#[derive(Debug)]
struct ChainTable {
    chains: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl ChainTable {
    fn new(m: usize) -> Self {
        fn ending_at(mask: u32, memo: &mut HashMap<u32, Vec<Vec<u32>>>) -> Vec<Vec<u32>> {
            if let Some(v) = memo.get(&mask) {
                return v.clone();
            }
            let mut out = vec![vec![mask]];
            let mut sub = (mask - 1) & mask;
            while sub != 0 {
                for mut c in ending_at(sub, memo) {
                    c.push(mask);
                    out.push(c);
                }
                sub = (sub - 1) & mask;
            }
            out.sort();
            memo.insert(mask, out.clone());
            out
        }
        let chains = ending_at((1u32 << m) - 1, &mut HashMap::new());
        let index = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        ChainTable { chains, index }
    }
}

/// Where the face of `c_G` spanned by a proper vertex subset of one factor goes.
#[derive(Clone, Debug)]
struct BoundaryImage {
    target: usize,
    t_src: Vec<Vec<usize>>,
    p_src: Vec<usize>,
    collapsed: Vec<usize>,
}

/// A cell of the subdivision: the base cell containing it and one chain per factor
/// (circles first, then intervals).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubCell {
    pub base: usize,
    pub chains: Vec<Vec<u32>>,
}

impl SubCell {
    pub fn dim(&self) -> usize {
        self.chains.iter().map(|c| c.len() - 1).sum()
    }

    fn aux(&self) -> Vec<u32> {
        let mut a = Vec::new();
        for c in &self.chains {
            a.push(c.len() as u32);
            a.extend_from_slice(c);
        }
        a
    }
}

/// The subdivision of a built complex, with cell ids computed on demand.
pub struct Subdivision<'a> {
    base: &'a CellComplex,
    sizes: Vec<Vec<usize>>,
    offset: Vec<usize>,
    tables: Vec<ChainTable>,
    images: HashMap<(usize, usize, u32), BoundaryImage>,
}

impl<'a> Subdivision<'a> {
    pub fn new(base: &'a CellComplex) -> Result<Self> {
        let index: HashMap<&StringDiagramType, usize> = base
            .cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.aux.is_empty())
            .map(|(i, c)| (&c.dtype, i))
            .collect();
        if index.len() != base.cells.len() {
            return Err(Error::Subdivision("base complex is already subdivided".into()));
        }
        let sizes: Vec<Vec<usize>> = base
            .cells
            .iter()
            .map(|c| c.shape.n.iter().map(|n| n + 1).chain(std::iter::repeat_n(2, c.shape.intervals)).collect())
            .collect();
        let max_m = sizes.iter().flatten().copied().max().unwrap_or(1);
        if max_m > 12 {
            return Err(Error::Subdivision(format!("simplex factor with {max_m} vertices is too large")));
        }
        let tables: Vec<ChainTable> = (0..=max_m).map(|m| if m == 0 { ChainTable::new(1) } else { ChainTable::new(m) }).collect();
        let mut offset = Vec::with_capacity(base.cells.len() + 1);
        let mut total = 0usize;
        for s in &sizes {
            offset.push(total);
            total += s.iter().map(|&m| tables[m].chains.len()).product::<usize>();
        }
        offset.push(total);
        let mut images = HashMap::new();
        for (b, cell) in base.cells.iter().enumerate() {
            let k = cell.shape.n.len();
            for (f, &m) in sizes[b].iter().enumerate() {
                let full = (1u32 << m) - 1;
                let mut t = (full - 1) & full;
                while t != 0 {
                    let img = boundary_image(base, &index, b, k, f, m, t)?;
                    images.insert((b, f, t), img);
                    t = (t - 1) & full;
                }
            }
        }
        debug!("subdivision of {} cells has {total} cells", base.cells.len());
        Ok(Subdivision { base, sizes, offset, tables, images })
    }

    pub fn len(&self) -> usize {
        *self.offset.last().expect("offset has a sentinel")
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell(&self, id: usize) -> SubCell {
        let base = self.offset.partition_point(|&o| o <= id) - 1;
        let mut local = id - self.offset[base];
        let mut chains = Vec::with_capacity(self.sizes[base].len());
        for &m in self.sizes[base].iter().rev() {
            let t = &self.tables[m];
            chains.push(t.chains[local % t.chains.len()].clone());
            local /= t.chains.len();
        }
        chains.reverse();
        SubCell { base, chains }
    }

    pub fn id(&self, c: &SubCell) -> Result<usize> {
        let sizes = &self.sizes[c.base];
        if sizes.len() != c.chains.len() {
            return Err(Error::Subdivision(format!("{} chains for {} factors", c.chains.len(), sizes.len())));
        }
        let mut local = 0;
        for (chain, &m) in c.chains.iter().zip(sizes) {
            let t = &self.tables[m];
            let i = *t
                .index
                .get(chain)
                .ok_or_else(|| Error::Subdivision(format!("{chain:?} is not an interior chain on {m} vertices")))?;
            local = local * t.chains.len() + i;
        }
        Ok(self.offset[c.base] + local)
    }

    /// Nonzero boundary of a cell as `(descriptor, target id, degree)`.
    pub fn boundary(&self, id: usize) -> Result<Vec<(FaceDescriptor, usize, i8)>> {
        let c = self.cell(id);
        let k = self.base.cells[c.base].shape.n.len();
        let mut out = Vec::new();
        let mut offset = 0;
        for (f, chain) in c.chains.iter().enumerate() {
            let len = chain.len();
            let nfaces = if len > 1 { len } else { 0 };
            for j in 0..nfaces {
                let sign: i8 = if (j + offset) % 2 == 0 { 1 } else { -1 };
                let desc = if f < k {
                    FaceDescriptor::Simplex { circle: f, s: j }
                } else {
                    FaceDescriptor::Interval { output: f - k, end: j as u8 }
                };
                let mut d = c.clone();
                d.chains[f].remove(j);
                if j + 1 < len {
                    out.push((desc, self.id(&d)?, sign));
                } else if let Some((t, s)) = self.move_to_boundary(&d, f, k, chain[len - 2])? {
                    out.push((desc, t, sign * s));
                }
            }
            offset += len - 1;
        }
        Ok(out)
    }

    /// Carries a cell on the face `factor f ⊂ T` of `c_G` to the cell containing it.
    fn move_to_boundary(&self, d: &SubCell, f: usize, k: usize, t: u32) -> Result<Option<(usize, i8)>> {
        let img = &self.images[&(d.base, f, t)];
        // a collapsed interval kills the cell unless the cell sits at one value of it
        if img.collapsed.iter().any(|&q| d.chains[k + q].len() > 1) {
            return Ok(None);
        }
        let mut chains = Vec::with_capacity(img.t_src.len() + img.p_src.len());
        for (i, src) in img.t_src.iter().enumerate() {
            let mut mapped = Vec::with_capacity(d.chains[i].len());
            for &s in &d.chains[i] {
                let m: u32 = src.iter().enumerate().filter(|(_, &q)| s >> q & 1 == 1).map(|(j, _)| 1u32 << j).sum();
                if m.count_ones() != s.count_ones() {
                    return Err(Error::Subdivision(format!("vertex set {s:b} of circle {i} leaves the target cell")));
                }
                mapped.push(m);
            }
            chains.push(mapped);
        }
        // intervals of positive dimension may be reordered
        let mut moved: Vec<usize> = Vec::new();
        for &q in &img.p_src {
            chains.push(d.chains[k + q].clone());
            if d.chains[k + q].len() == 2 {
                moved.push(q);
            }
        }
        let mut sign = 1i8;
        for a in 0..moved.len() {
            for b in a + 1..moved.len() {
                if moved[a] > moved[b] {
                    sign = -sign;
                }
            }
        }
        let target = SubCell { base: img.target, chains };
        Ok(Some((self.id(&target)?, sign)))
    }

    /// Dimension and index among cells of that dimension, for every id.
    fn positions(&self) -> (Vec<u8>, Vec<u32>, Vec<usize>) {
        let mut dims = Vec::with_capacity(self.len());
        let mut pos = Vec::with_capacity(self.len());
        let mut f: Vec<usize> = Vec::new();
        for id in 0..self.len() {
            let d = self.cell(id).dim();
            if f.len() <= d {
                f.resize(d + 1, 0);
            }
            dims.push(d as u8);
            pos.push(f[d] as u32);
            f[d] += 1;
        }
        (dims, pos, f)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.positions().2
    }

    /// Verifies `∂∂ = 0` cell by cell.
    pub fn check_d_squared(&self) -> Result<()> {
        for id in 0..self.len() {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for (_, t, a) in self.boundary(id)? {
                for (_, u, b) in self.boundary(t)? {
                    *acc.entry(u).or_insert(0) += (a * b) as i64;
                }
            }
            if let Some((u, v)) = acc.into_iter().find(|e| e.1 != 0) {
                let c = self.cell(id);
                return Err(Error::SignConsistency {
                    degree: c.dim(),
                    detail: format!("∂∂ of subdivided cell {:?} has {v} on {:?}", c, self.cell(u)),
                });
            }
        }
        Ok(())
    }

    /// Betti numbers over ℚ, without materializing the cells.
    pub fn rational_betti(&self) -> Result<Vec<usize>> {
        let (dims, pos, f) = self.positions();
        let top = f.len() - 1;
        let mut err = None;
        let rank = rational_boundary_ranks(top, |m| {
            let mut cols: Vec<Column> = Vec::with_capacity(f[m]);
            for id in (0..self.len()).filter(|&i| dims[i] as usize == m) {
                let mut acc: HashMap<u32, i64> = HashMap::new();
                match self.boundary(id) {
                    Ok(b) => {
                        for (_, t, s) in b {
                            *acc.entry(pos[t]).or_insert(0) += s as i64;
                        }
                    }
                    Err(e) => err = Some(e),
                }
                let mut col: Column = acc.into_iter().filter(|e| e.1 != 0).collect();
                col.sort_unstable();
                cols.push(col);
            }
            cols
        });
        match err {
            Some(e) => Err(e),
            None => Ok(betti_from_ranks(&f, &rank)),
        }
    }

    /// The subdivision as an ordinary complex.
    pub fn to_complex(&self) -> Result<CellComplex> {
        let mut cells = Vec::with_capacity(self.len());
        for id in 0..self.len() {
            let c = self.cell(id);
            let b = &self.base.cells[c.base];
            let faces = self
                .boundary(id)?
                .into_iter()
                .map(|(descriptor, target, degree)| FaceEntry { descriptor, target, degree })
                .collect();
            cells.push(Cell {
                dtype: b.dtype.clone(),
                aux: c.aux(),
                dim: c.dim(),
                shape: CellShape { n: c.chains.iter().map(|ch| ch.len() - 1).collect(), intervals: 0 },
                in_sd: b.in_sd,
                faces,
            });
        }
        Ok(CellComplex::from_cells(self.base.signature, cells))
    }
}

fn boundary_image(
    base: &CellComplex,
    index: &HashMap<&StringDiagramType, usize>,
    b: usize,
    k: usize,
    f: usize,
    m: usize,
    t: u32,
) -> Result<BoundaryImage> {
    let cell = &base.cells[b];
    let mut t_zero: Vec<Vec<bool>> = cell.shape.n.iter().map(|n| vec![false; n + 1]).collect();
    let mut p_end: Vec<Option<u8>> = vec![None; cell.shape.intervals];
    if f < k {
        for (s, z) in t_zero[f].iter_mut().enumerate() {
            *z = t >> s & 1 == 0;
        }
    } else {
        p_end[f - k] = Some(if t == 1 { 0 } else { 1 });
    }
    let (h, map) = degenerate(&cell.dtype, &t_zero, &p_end);
    let target = *index
        .get(&h)
        .ok_or_else(|| Error::Subdivision(format!("face {t:b} of factor {f} of {} is not a cell", cell.key())))?;
    let locus_dim = cell.dim - (m - t.count_ones() as usize);
    if base.cells[target].dim + map.collapsed.len() != locus_dim {
        return Err(Error::Subdivision(format!(
            "face {t:b} of factor {f} of {} drops more than its collapsed intervals",
            cell.key()
        )));
    }
    Ok(BoundaryImage { target, t_src: map.t_src, p_src: map.p_src, collapsed: map.collapsed })
}

/// Subdivides every factor of every cell of `cx`.
pub fn subdivide(cx: &CellComplex) -> Result<CellComplex> {
    let sd = Subdivision::new(cx)?;
    let out = sd.to_complex()?;
    out.check_d_squared()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Signature;
    use crate::homology::Coeffs;
    use crate::moduli::build_complex;

    #[test]
    fn chain_counts_are_ordered_set_partitions() {
        let counts: Vec<usize> = (1..=5).map(|m| ChainTable::new(m).chains.len()).collect();
        assert_eq!(counts, vec![1, 3, 13, 75, 541]);
    }

    #[test]
    fn ids_round_trip() {
        let cx = build_complex(Signature::new(0, 2, 1)).unwrap();
        let sd = Subdivision::new(&cx).unwrap();
        for id in 0..sd.len() {
            assert_eq!(sd.id(&sd.cell(id)).unwrap(), id);
        }
    }

    #[test]
    fn torus_survives_subdivision() {
        let cx = build_complex(Signature::new(0, 2, 1)).unwrap();
        let s = subdivide(&cx).unwrap();
        assert_eq!(s.euler_characteristic(), 0);
        assert_eq!(s.homology(Coeffs::Z).unwrap().betti(), vec![1, 3, 3, 1]);
        assert!(s.homology(Coeffs::Z).unwrap().torsion_free());
        assert_eq!(Subdivision::new(&cx).unwrap().rational_betti().unwrap(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn one_cells_split_in_two() {
        let cx = build_complex(Signature::new(0, 2, 1)).unwrap();
        let sd = Subdivision::new(&cx).unwrap();
        for &e in &cx.by_dim[1] {
            let inside = (0..sd.len()).filter(|&i| {
                let c = sd.cell(i);
                c.base == e && c.dim() == 1
            });
            assert_eq!(inside.count(), 2);
        }
    }

    #[test]
    fn d_squared_on_small_subdivisions() {
        for sig in [Signature::new(0, 1, 2), Signature::new(1, 1, 1), Signature::new(0, 3, 1)] {
            let cx = build_complex(sig).unwrap();
            Subdivision::new(&cx).unwrap().check_d_squared().unwrap();
        }
    }
}
