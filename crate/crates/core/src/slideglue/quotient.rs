use std::collections::{BTreeMap, HashMap};

use log::debug;

use super::slides::{slide_neighbors, RejectedSlide, SlidePolicy};
use crate::diagram::StringDiagramType;
use crate::error::{Error, Result};
use crate::moduli::{Cell, CellComplex, FaceDescriptor, FaceEntry};

/// Slide-equivalence classes of the cells of one complex.
#[derive(Clone, Debug)]
pub struct SlideClassPartition {
    /// Class id of each cell; classes are numbered by their representative.
    pub class_of: Vec<usize>,
    /// Representative cell of each class: the member with the least canonical key.
    pub representative: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    /// Unions forced by identifying faces of identified cells.
    pub face_unions: usize,
    pub rejected: Vec<(usize, RejectedSlide)>,
}

impl SlideClassPartition {
    pub fn num_classes(&self) -> usize {
        self.representative.len()
    }

    pub fn same_class(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.parent[a.max(b)] = a.min(b);
        true
    }
}

/// Index of the plain type cells of `cx`.
pub fn type_index(cx: &CellComplex) -> HashMap<&StringDiagramType, usize> {
    cx.cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.aux.is_empty())
        .map(|(i, c)| (&c.dtype, i))
        .collect()
}

/// Union-find closure of slides over the cells of `cx`. Slide-related cells are
/// identified coordinate by coordinate, so their faces are identified too; the
/// closure adds those unions.
pub fn slide_classes(cx: &CellComplex, policy: SlidePolicy) -> Result<SlideClassPartition> {
    let index = type_index(cx);
    let n = cx.cells.len();
    let mut uf = UnionFind::new(n);
    let mut pending: Vec<(usize, usize, bool)> = Vec::new();
    let mut rejected = Vec::new();
    for (i, c) in cx.cells.iter().enumerate() {
        let sn = slide_neighbors(&c.dtype, policy);
        rejected.extend(sn.rejected.into_iter().map(|r| (i, r)));
        for h in sn.neighbors {
            let j = *index
                .get(&h)
                .ok_or_else(|| Error::EnumerationIncomplete(String::from_utf8_lossy(&h.canonical_key()).into_owned()))?;
            pending.push((i, j, false));
        }
    }
    let mut face_unions = 0;
    while let Some((a, b, via_face)) = pending.pop() {
        if !uf.union(a, b) {
            continue;
        }
        face_unions += usize::from(via_face);
        let fa = face_map(&cx.cells[a]);
        for f in &cx.cells[b].faces {
            if let Some(&t) = fa.get(&f.descriptor) {
                pending.push((t, f.target, true));
            }
        }
    }
    let mut root_members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        root_members.entry(uf.find(i)).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = root_members.into_values().collect();
    for g in &mut groups {
        g.sort_by_cached_key(|&x| cx.cells[x].key());
    }
    groups.sort_by_key(|g| g[0]);
    let mut class_of = vec![0; n];
    for (k, g) in groups.iter().enumerate() {
        for &c in g {
            class_of[c] = k;
        }
        let d = cx.cells[g[0]].shape.clone();
        if let Some(&bad) = g.iter().find(|&&c| cx.cells[c].shape != d) {
            return Err(Error::QuotientConsistency(format!(
                "class {k} mixes shapes {:?} and {:?}",
                d, cx.cells[bad].shape
            )));
        }
    }
    let representative = groups.iter().map(|g| g[0]).collect();
    debug!("{} cells in {} slide classes, {face_unions} face unions", n, groups.len());
    Ok(SlideClassPartition { class_of, representative, members: groups, face_unions, rejected })
}

fn face_map(c: &Cell) -> HashMap<FaceDescriptor, usize> {
    c.faces.iter().map(|f| (f.descriptor, f.target)).collect()
}

/// Boundary column of cell `c` with targets replaced by their classes.
fn class_boundary(cx: &CellComplex, cls: &SlideClassPartition, c: usize) -> BTreeMap<usize, i64> {
    let mut col = BTreeMap::new();
    for f in &cx.cells[c].faces {
        if f.degree != 0 {
            *col.entry(cls.class_of[f.target]).or_insert(0) += f.degree as i64;
        }
    }
    col.retain(|_, v| *v != 0);
    col
}

/// The complex `cx/∼`: one cell per class, boundary induced from the
/// representative. Every member must induce the same boundary and the result
/// must satisfy ∂² = 0.
pub fn quotient_complex(cx: &CellComplex, cls: &SlideClassPartition) -> Result<CellComplex> {
    let mut cells = Vec::with_capacity(cls.num_classes());
    for (k, members) in cls.members.iter().enumerate() {
        let rep = cls.representative[k];
        let expect = class_boundary(cx, cls, rep);
        for &m in &members[1..] {
            let got = class_boundary(cx, cls, m);
            if got != expect {
                return Err(Error::QuotientConsistency(format!(
                    "class {k}: member {} induces boundary {:?}, representative {} induces {:?}",
                    cx.cells[m].key(),
                    got,
                    cx.cells[rep].key(),
                    expect
                )));
            }
        }
        let r = &cx.cells[rep];
        cells.push(Cell {
            dtype: r.dtype.clone(),
            aux: r.aux.clone(),
            dim: r.dim,
            shape: r.shape.clone(),
            in_sd: members.iter().any(|&m| cx.cells[m].in_sd),
            faces: r
                .faces
                .iter()
                .map(|f| FaceEntry { descriptor: f.descriptor, target: cls.class_of[f.target], degree: f.degree })
                .collect(),
        });
    }
    let q = CellComplex::from_cells(cx.signature, cells);
    q.check_d_squared()?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Signature;
    use crate::homology::Coeffs;
    use crate::moduli::build_complex;

    #[test]
    fn no_slides_means_no_change() {
        let cx = build_complex(Signature::new(0, 2, 1)).unwrap();
        let cls = slide_classes(&cx, SlidePolicy::default()).unwrap();
        assert_eq!(cls.num_classes(), cx.cells.len());
        assert_eq!(cls.face_unions, 0);
        let q = quotient_complex(&cx, &cls).unwrap();
        assert_eq!(q.f_vector(), cx.f_vector());
    }

    #[test]
    fn quotient_of_three_inputs() {
        let cx = build_complex(Signature::new(0, 3, 1)).unwrap();
        let cls = slide_classes(&cx, SlidePolicy::default()).unwrap();
        assert!(cls.num_classes() < cx.cells.len());
        for (k, m) in cls.members.iter().enumerate() {
            assert_eq!(cls.representative[k], m[0]);
            assert!(m.iter().all(|&c| cls.class_of[c] == k));
        }
        let q = quotient_complex(&cx, &cls).unwrap();
        assert_eq!(q.f_vector(), vec![2, 62, 222, 314, 200, 48]);
        assert_eq!(q.homology(Coeffs::Q).unwrap().betti(), vec![1, 12, 32, 34, 15, 2]);
    }

    #[test]
    fn representative_choice_does_not_matter() {
        let cx = build_complex(Signature::new(0, 3, 1)).unwrap();
        let mut cls = slide_classes(&cx, SlidePolicy::default()).unwrap();
        let a = quotient_complex(&cx, &cls).unwrap().homology(Coeffs::Z).unwrap();
        for m in &mut cls.members {
            m.reverse();
        }
        cls.representative = cls.members.iter().map(|m| m[0]).collect();
        let b = quotient_complex(&cx, &cls).unwrap().homology(Coeffs::Z).unwrap();
        assert_eq!(a, b);
    }
}
