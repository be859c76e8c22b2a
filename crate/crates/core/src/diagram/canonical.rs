//! Canonical labels. Vertices are renumbered in traversal order (circle by
//! circle, marked vertex first) and half-chords in order of appearance along
//! that traversal. Types have no nontrivial automorphisms fixing the input
//! markings, so two types are isomorphic iff their canonical forms are equal.

use serde::{Deserialize, Serialize};

use super::{DirectedEdge, InputCircle, Layout, OutputMarking, StringDiagramType};
use crate::error::{Error, Result};

/// Old-to-new index maps produced by [`StringDiagramType::canonicalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    pub vertex: Vec<usize>,
    pub half_chord: Vec<usize>,
}

impl Relabeling {
    pub fn edge(&self, e: DirectedEdge) -> DirectedEdge {
        match e {
            DirectedEdge::Chord(c) => DirectedEdge::Chord(self.half_chord[c]),
            DirectedEdge::Arc(v) => DirectedEdge::Arc(self.vertex[v]),
        }
    }

    pub fn marking(&self, m: OutputMarking) -> OutputMarking {
        match m {
            OutputMarking::AtCorner(e) => OutputMarking::AtCorner(self.edge(e)),
            OutputMarking::InEdge(e) => OutputMarking::InEdge(self.edge(e)),
        }
    }
}

/// A chord with its endpoints ordered: `first` is met before `second`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chord {
    pub first: usize,
    pub second: usize,
}

impl StringDiagramType {
    /// Half-chords in traversal order. Vertices need not all be reachable;
    /// unreachable ones (left behind by merges) are skipped.
    pub(crate) fn traversal(&self) -> (Vec<usize>, Vec<usize>) {
        let mut verts = Vec::with_capacity(self.vertices.len());
        let mut chords = Vec::with_capacity(self.chord_matching.len());
        for c in &self.circles {
            for v in c.order() {
                verts.push(v);
                chords.extend_from_slice(&self.vertices[v]);
            }
        }
        (verts, chords)
    }

    /// Canonical form and the relabeling that produced it. Vertices not on
    /// any circle are dropped; their maps hold `usize::MAX`.
    pub fn canonicalize(&self) -> (StringDiagramType, Relabeling) {
        let (verts, chords) = self.traversal();
        let mut vmap = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in verts.iter().enumerate() {
            vmap[v] = i;
        }
        let mut cmap = vec![usize::MAX; self.chord_matching.len()];
        for (i, &c) in chords.iter().enumerate() {
            cmap[c] = i;
        }
        let rel = Relabeling { vertex: vmap, half_chord: cmap };
        let mut next_v = 0;
        let circles = self
            .circles
            .iter()
            .map(|c| {
                let marked_vertex = c.marked_vertex.map(|_| {
                    next_v += 1;
                    next_v - 1
                });
                let start = next_v;
                next_v += c.vertex_cycle.len();
                InputCircle { marked_vertex, vertex_cycle: (start..next_v).collect() }
            })
            .collect();
        let vertices = verts
            .iter()
            .map(|&v| self.vertices[v].iter().map(|&c| rel.half_chord[c]).collect())
            .collect();
        let mut chord_matching = vec![0; chords.len()];
        for (i, &c) in chords.iter().enumerate() {
            chord_matching[i] = rel.half_chord[self.chord_matching[c]];
        }
        let outputs = self.outputs.iter().map(|&m| rel.marking(m)).collect();
        (
            StringDiagramType { circles, vertices, chord_matching, outputs },
            rel,
        )
    }

    pub fn canonical(&self) -> StringDiagramType {
        self.canonicalize().0
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// Chords in order of their first endpoint along the traversal.
    pub fn canonical_chord_order(&self) -> Vec<Chord> {
        let (_, chords) = self.traversal();
        let mut seen = vec![false; self.chord_matching.len()];
        let mut out = Vec::with_capacity(chords.len() / 2);
        for c in chords {
            if !seen[c] {
                let d = self.chord_matching[c];
                seen[c] = true;
                seen[d] = true;
                out.push(Chord { first: c, second: d });
            }
        }
        out
    }

    /// The first endpoint (`φ(0)`) of the chord through half-chord `c`.
    pub fn chord_start(&self, lay: &Layout, c: usize) -> usize {
        let d = self.chord_matching[c];
        let key = |h: usize| {
            let v = lay.chord_vertex[h];
            (lay.vertex_circle[v], lay.vertex_pos[v], lay.chord_slot[h])
        };
        if key(c) <= key(d) {
            c
        } else {
            d
        }
    }

    /// Deterministic byte encoding of the canonical form; equal keys iff
    /// isomorphic types.
    pub fn canonical_key(&self) -> Vec<u8> {
        serde_json::to_vec(&self.canonical()).expect("types serialize")
    }

    pub fn from_canonical_key(key: &[u8]) -> Result<StringDiagramType> {
        let g: StringDiagramType = serde_json::from_slice(key)?;
        g.ensure_valid()?;
        if !g.is_canonical() {
            return Err(Error::MalformedType("key is not in canonical form".into()));
        }
        Ok(g)
    }

    /// Compact hash key for canonical types; cheaper than [`canonical_key`]
    /// for large tables. Only meaningful for canonical input.
    ///
    /// [`canonical_key`]: Self::canonical_key
    pub fn compact_code(&self) -> Box<[u16]> {
        let mut out = Vec::with_capacity(4 + self.vertices.len() + self.chord_matching.len() + 2 * self.outputs.len());
        out.push(self.circles.len() as u16);
        for c in &self.circles {
            out.push(((c.len() as u16) << 1) | u16::from(c.marked_vertex.is_some()));
        }
        for v in &self.vertices {
            out.push(v.len() as u16);
        }
        out.extend(self.chord_matching.iter().map(|&c| c as u16));
        for m in &self.outputs {
            let (tag, e) = match *m {
                OutputMarking::AtCorner(e) => (0, e),
                OutputMarking::InEdge(e) => (2, e),
            };
            let (tag, ix) = match e {
                DirectedEdge::Chord(c) => (tag, c),
                DirectedEdge::Arc(v) => (tag | 1, v),
            };
            out.push(tag);
            out.push(ix as u16);
        }
        out.into_boxed_slice()
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::t3_generic;
    use super::*;
    use crate::diagram::InputCircle;

    fn shuffled_t3() -> StringDiagramType {
        // same as t3_generic with vertices and half-chords swapped
        StringDiagramType {
            circles: vec![
                InputCircle { marked_vertex: None, vertex_cycle: vec![1] },
                InputCircle { marked_vertex: None, vertex_cycle: vec![0] },
            ],
            vertices: vec![vec![0], vec![1]],
            chord_matching: vec![1, 0],
            outputs: vec![OutputMarking::InEdge(DirectedEdge::Chord(1))],
        }
    }

    #[test]
    fn relabeled_types_share_a_key() {
        let a = t3_generic();
        let b = shuffled_t3();
        assert_ne!(a, b);
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_eq!(a.canonical().compact_code(), b.canonical().compact_code());
    }

    #[test]
    fn key_round_trip() {
        let a = shuffled_t3();
        let back = StringDiagramType::from_canonical_key(&a.canonical_key()).unwrap();
        assert_eq!(back, a.canonical());
        assert!(StringDiagramType::from_canonical_key(&serde_json::to_vec(&a).unwrap()).is_err());
    }

    #[test]
    fn chord_order_starts_on_first_circle() {
        let b = shuffled_t3();
        let order = b.canonical_chord_order();
        assert_eq!(order, vec![Chord { first: 1, second: 0 }]);
        let lay = b.layout().unwrap();
        assert_eq!(b.chord_start(&lay, 0), 1);
        assert_eq!(b.chord_start(&lay, 1), 1);
    }

    #[test]
    fn different_markings_differ() {
        let a = t3_generic();
        let mut b = a.clone();
        b.outputs = vec![OutputMarking::InEdge(DirectedEdge::Chord(1))];
        assert_ne!(a.canonical_key(), b.canonical_key());
    }
}
