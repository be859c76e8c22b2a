//! Top-dimensional cells: every chord endpoint on its own vertex, no vertex
//! at an input marked point, every output marked inside an edge.

use std::collections::HashSet;

use itertools::Itertools;

use crate::diagram::{InputCircle, OutputMarking, Signature, StringDiagramType};
use crate::error::Result;

/// Compositions of `total` into `parts` positive summands.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if total < parts {
        return vec![];
    }
    // choose parts-1 cut points among total-1 gaps
    (1..total)
        .combinations(parts - 1)
        .map(|cuts| {
            let mut out = Vec::with_capacity(parts);
            let mut prev = 0;
            for c in cuts.into_iter().chain(std::iter::once(total)) {
                out.push(c - prev);
                prev = c;
            }
            out
        })
        .collect()
}

/// All fixed-point-free involutions of `0..n` (`n` even).
pub fn perfect_matchings(n: usize) -> Vec<Vec<usize>> {
    fn rec(m: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(a) = m.iter().position(|&x| x == usize::MAX) else {
            out.push(m.clone());
            return;
        };
        for b in a + 1..m.len() {
            if m[b] == usize::MAX {
                m[a] = b;
                m[b] = a;
                rec(m, out);
                m[a] = usize::MAX;
                m[b] = usize::MAX;
            }
        }
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        rec(&mut vec![usize::MAX; n], &mut out);
    }
    out
}

fn circles_connected(parts: &[usize], matching: &[usize]) -> bool {
    let mut circle_of = Vec::with_capacity(matching.len());
    for (i, &n) in parts.iter().enumerate() {
        circle_of.extend(std::iter::repeat_n(i, n));
    }
    let mut parent: Vec<usize> = (0..parts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = parts.len();
    for (c, &d) in matching.iter().enumerate() {
        let a = find(&mut parent, circle_of[c]);
        let b = find(&mut parent, circle_of[d]);
        if a != b {
            parent[a] = b;
            comps -= 1;
        }
    }
    comps == 1
}

/// Canonical types of all top cells, sorted.
pub fn enumerate_top_cells(sig: Signature) -> Result<Vec<StringDiagramType>> {
    sig.check()?;
    let ends = 2 * sig.chords() as usize;
    let matchings = perfect_matchings(ends);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for parts in compositions(ends, sig.k) {
        let mut circles = Vec::with_capacity(sig.k);
        let mut start = 0;
        for &n in &parts {
            circles.push(InputCircle { marked_vertex: None, vertex_cycle: (start..start + n).collect() });
            start += n;
        }
        let vertices: Vec<Vec<usize>> = (0..ends).map(|v| vec![v]).collect();
        for m in &matchings {
            if !circles_connected(&parts, m) {
                continue;
            }
            let bare = StringDiagramType {
                circles: circles.clone(),
                vertices: vertices.clone(),
                chord_matching: m.clone(),
                outputs: Vec::new(),
            };
            let lay = bare.layout()?;
            let cycles = bare.output_cycles(&lay);
            if cycles.len() != sig.l {
                continue;
            }
            for perm in (0..sig.l).permutations(sig.l) {
                for choice in perm.iter().map(|&c| cycles[c].iter()).multi_cartesian_product() {
                    let mut g = bare.clone();
                    g.outputs = choice.into_iter().map(|&e| OutputMarking::InEdge(e)).collect();
                    let g = g.canonical();
                    if seen.insert(g.compact_code()) {
                        out.push(g);
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn small_counts() {
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(perfect_matchings(4).len(), 3);
        assert_eq!(perfect_matchings(6).len(), 15);
    }

    #[test]
    fn t3_has_four_top_cells() {
        let tops = enumerate_top_cells(Signature::new(0, 2, 1)).unwrap();
        assert_eq!(tops.len(), 4);
        for g in &tops {
            assert_eq!(g.dim(), 3);
            assert!(g.is_in_sd());
            assert_eq!(g.diagram_signature().unwrap(), Signature::new(0, 2, 1));
        }
    }

    #[test]
    fn unstable_signature_is_a_domain_error() {
        assert!(matches!(enumerate_top_cells(Signature::new(0, 1, 1)), Err(Error::Domain(_))));
    }
}
