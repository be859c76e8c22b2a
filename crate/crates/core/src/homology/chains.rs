//! Normalized simplicial chains on products of simplices and the shuffle
//! (Eilenberg–Zilber) fundamental chain.
//!
//! A simplex of `Δ^{j₁} × … × Δ^{j_p}` is a sequence of grid points, weakly
//! increasing in every coordinate; it is degenerate iff two consecutive points
//! coincide.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

pub type GridPoint = Vec<u8>;
pub type Simplex = Vec<GridPoint>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalChain {
    pub shape: Vec<usize>,
    pub terms: BTreeMap<Simplex, i64>,
}

impl FormalChain {
    pub fn zero(shape: Vec<usize>) -> Self {
        FormalChain { shape, terms: BTreeMap::new() }
    }

    pub fn add(&mut self, s: Simplex, c: i64) {
        if c == 0 || is_degenerate(&s) {
            return;
        }
        match self.terms.entry(s) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add_chain(&mut self, other: &FormalChain, c: i64) {
        for (s, &v) in &other.terms {
            self.add(s.clone(), c * v);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Simplices are strictly increasing staircases inside the grid.
    pub fn is_valid(&self) -> bool {
        self.terms.keys().all(|s| {
            s.iter().all(|pt| pt.len() == self.shape.len() && pt.iter().zip(&self.shape).all(|(&x, &j)| (x as usize) <= j))
                && s.windows(2).all(|w| w[0] != w[1] && w[0].iter().zip(&w[1]).all(|(a, b)| a <= b))
        })
    }

    /// Pushforward along the coface `Δ^{j-1} → Δ^j` of factor `r` that skips vertex `s`.
    pub fn push_coface(&self, r: usize, s: usize) -> FormalChain {
        let mut shape = self.shape.clone();
        shape[r] += 1;
        let mut out = FormalChain::zero(shape);
        for (sx, &c) in &self.terms {
            let img = sx
                .iter()
                .map(|pt| {
                    let mut q = pt.clone();
                    if q[r] as usize >= s {
                        q[r] += 1;
                    }
                    q
                })
                .collect();
            out.add(img, c);
        }
        out
    }
}

pub fn is_degenerate(s: &Simplex) -> bool {
    s.windows(2).any(|w| w[0] == w[1])
}

/// Sum over all shuffles of the top simplices, signed by the parity of the shuffle.
pub fn ez_fundamental_chain(shape: &[usize]) -> FormalChain {
    let word: Vec<usize> = shape.iter().enumerate().flat_map(|(r, &j)| std::iter::repeat_n(r, j)).collect();
    let mut out = FormalChain::zero(shape.to_vec());
    if word.is_empty() {
        out.add(vec![vec![0; shape.len()]], 1);
        return out;
    }
    for w in word.iter().copied().permutations(word.len()).unique() {
        let inversions = (0..w.len()).flat_map(|a| (a + 1..w.len()).map(move |b| (a, b))).filter(|&(a, b)| w[a] > w[b]).count();
        let mut pt = vec![0u8; shape.len()];
        let mut simplex = vec![pt.clone()];
        for &r in &w {
            pt[r] += 1;
            simplex.push(pt.clone());
        }
        out.add(simplex, if inversions % 2 == 0 { 1 } else { -1 });
    }
    out
}

pub fn boundary_of_chain(ch: &FormalChain) -> FormalChain {
    let mut out = FormalChain::zero(ch.shape.clone());
    for (s, &c) in &ch.terms {
        if s.len() < 2 {
            continue;
        }
        for i in 0..s.len() {
            let mut f = s.clone();
            f.remove(i);
            out.add(f, if i % 2 == 0 { c } else { -c });
        }
    }
    out
}

/// Right-hand side of the boundary identity for `Δ^{j₁}×…×Δ^{j_p}×Δⁿ`, with
/// simplex faces taken for `s ≥ s_from` (the standard range is `s_from = 0`).
pub fn ez_boundary_rhs(j: &[usize], n: usize, s_from: usize) -> FormalChain {
    let mut shape = j.to_vec();
    shape.push(n);
    let m: usize = j.iter().sum();
    let mut out = FormalChain::zero(shape.clone());
    let mut before = 0;
    for (r, &jr) in j.iter().enumerate() {
        if jr >= 1 {
            let mut face_shape = shape.clone();
            face_shape[r] -= 1;
            let mu = ez_fundamental_chain(&face_shape);
            for s in s_from..=jr {
                let eps = s + before;
                out.add_chain(&mu.push_coface(r, s), if eps % 2 == 0 { 1 } else { -1 });
            }
        }
        before += jr;
    }
    if n >= 1 {
        let mut face_shape = shape.clone();
        face_shape[j.len()] -= 1;
        let mu = ez_fundamental_chain(&face_shape);
        for i in 0..=n {
            let sign = if (m + i).is_multiple_of(2) { 1 } else { -1 };
            out.add_chain(&mu.push_coface(j.len(), i), sign);
        }
    }
    out
}

pub fn ez_lemma_holds(j: &[usize], n: usize, s_from: usize) -> bool {
    let mut shape = j.to_vec();
    shape.push(n);
    boundary_of_chain(&ez_fundamental_chain(&shape)) == ez_boundary_rhs(j, n, s_from)
}

/// All `(j, n)` with `j` nonempty, entries `≥ 0` and `Σj + n ≤ max_total`.
pub fn lemma_shapes(max_total: usize, max_factors: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    for p in 1..=max_factors {
        for j in (0..p).map(|_| 0..=max_total).multi_cartesian_product() {
            let m: usize = j.iter().sum();
            if m > max_total {
                continue;
            }
            for n in 0..=max_total - m {
                out.push((j.clone(), n));
            }
        }
    }
    out
}
