//! Combinatorial types of string diagrams.
//!
//! A type is stored circle by circle. Each input circle lists its vertices in
//! orientation order starting at the input marked point; the vertex sitting
//! on the marked point, if any, is kept apart in `marked_vertex`. Every vertex
//! owns a linear list of half-chords: the cyclic order at the vertex is
//! `[incoming arc, outgoing arc, c₁, …, cₘ]`, which makes each input circle a
//! boundary cycle by construction.
//!
//! Directed edges of output cycles are named by their initial half-edge:
//! `Chord(c)` runs along the chord of `c` away from `c`'s vertex, and
//! `Arc(v)` runs along the circle arc ending at `v`, against the circle
//! orientation. A corner of an output cycle is named by the directed edge that
//! leaves it.

mod canonical;
mod json;
mod metric;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fatgraph::Fatgraph;

pub use canonical::{Chord, Relabeling};
pub use json::{CoordsJson, DiagramJson, DIAGRAM_SCHEMA};
pub use metric::{
    EdgeKind, GeometricFingerprint, MetricEdge, MetricGraph, MetricStringDiagram, OutputCycleWord, PointOnGraph,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InputCircle {
    pub marked_vertex: Option<usize>,
    pub vertex_cycle: Vec<usize>,
}

impl InputCircle {
    /// Vertices in orientation order, the marked vertex first.
    pub fn order(&self) -> impl Iterator<Item = usize> + '_ {
        self.marked_vertex.iter().copied().chain(self.vertex_cycle.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.vertex_cycle.len() + usize::from(self.marked_vertex.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of simplex coordinates minus one: vertices off the marked point.
    pub fn free_vertices(&self) -> usize {
        self.vertex_cycle.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectedEdge {
    Chord(usize),
    Arc(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMarking {
    AtCorner(DirectedEdge),
    InEdge(DirectedEdge),
}

impl OutputMarking {
    pub fn edge(&self) -> DirectedEdge {
        match *self {
            OutputMarking::AtCorner(e) | OutputMarking::InEdge(e) => e,
        }
    }

    pub fn is_in_edge(&self) -> bool {
        matches!(self, OutputMarking::InEdge(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StringDiagramType {
    pub circles: Vec<InputCircle>,
    pub vertices: Vec<Vec<usize>>,
    pub chord_matching: Vec<usize>,
    pub outputs: Vec<OutputMarking>,
}

/// `(g, k, ℓ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub g: usize,
    pub k: usize,
    pub l: usize,
}

impl Signature {
    pub fn new(g: usize, k: usize, l: usize) -> Self {
        Signature { g, k, l }
    }

    /// Number of chords, `2g − 2 + k + ℓ`.
    pub fn chords(&self) -> i64 {
        2 * self.g as i64 - 2 + self.k as i64 + self.l as i64
    }

    pub fn top_dimension(&self) -> i64 {
        4 * self.g as i64 - 4 + 2 * self.k as i64 + 3 * self.l as i64
    }

    pub fn check(&self) -> Result<()> {
        if self.k == 0 || self.l == 0 {
            return Err(Error::Domain(format!("{self} needs k ≥ 1 and ℓ ≥ 1")));
        }
        if self.chords() < 1 {
            return Err(Error::Domain(format!("{self} has 2g-2+k+ℓ = {} < 1", self.chords())));
        }
        Ok(())
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.g, self.k, self.l)
    }
}

/// One failed invariant from [`StringDiagramType::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: &'static str,
    pub detail: String,
}

/// Index tables derived from a structurally sound type.
#[derive(Clone, Debug)]
pub struct Layout {
    pub vertex_circle: Vec<usize>,
    /// Position of the vertex in [`InputCircle::order`].
    pub vertex_pos: Vec<usize>,
    pub pred: Vec<usize>,
    pub succ: Vec<usize>,
    pub chord_vertex: Vec<usize>,
    pub chord_slot: Vec<usize>,
}

impl StringDiagramType {
    pub fn k(&self) -> usize {
        self.circles.len()
    }

    pub fn l(&self) -> usize {
        self.outputs.len()
    }

    pub fn num_half_chords(&self) -> usize {
        self.chord_matching.len()
    }

    pub fn num_chords(&self) -> usize {
        self.chord_matching.len() / 2
    }

    /// Factor dimensions `(n₁, …, n_k)` and the interval count `N_ℓ`.
    pub fn shape(&self) -> (Vec<usize>, usize) {
        let n = self.circles.iter().map(InputCircle::free_vertices).collect();
        let intervals = self.outputs.iter().filter(|m| m.is_in_edge()).count();
        (n, intervals)
    }

    pub fn dim(&self) -> usize {
        let (n, iv) = self.shape();
        n.iter().sum::<usize>() + iv
    }

    /// Outputs carrying an interval coordinate, in output order.
    pub fn interval_outputs(&self) -> Vec<usize> {
        (0..self.outputs.len()).filter(|&j| self.outputs[j].is_in_edge()).collect()
    }

    /// Structural index check; everything else in this module assumes it passed.
    pub fn layout(&self) -> Result<Layout> {
        let nv = self.vertices.len();
        let nh = self.chord_matching.len();
        let mut vertex_circle = vec![usize::MAX; nv];
        let mut vertex_pos = vec![0; nv];
        let mut pred = vec![0; nv];
        let mut succ = vec![0; nv];
        for (ci, c) in self.circles.iter().enumerate() {
            let order: Vec<usize> = c.order().collect();
            if order.is_empty() {
                return Err(Error::MalformedType(format!("input circle {ci} has no vertices")));
            }
            for (pos, &v) in order.iter().enumerate() {
                if v >= nv {
                    return Err(Error::MalformedType(format!("vertex {v} out of range")));
                }
                if vertex_circle[v] != usize::MAX {
                    return Err(Error::MalformedType(format!("vertex {v} appears twice")));
                }
                vertex_circle[v] = ci;
                vertex_pos[v] = pos;
                pred[v] = order[(pos + order.len() - 1) % order.len()];
                succ[v] = order[(pos + 1) % order.len()];
            }
        }
        if let Some(v) = vertex_circle.iter().position(|&c| c == usize::MAX) {
            return Err(Error::MalformedType(format!("vertex {v} lies on no input circle")));
        }
        let mut chord_vertex = vec![usize::MAX; nh];
        let mut chord_slot = vec![0; nh];
        for (v, list) in self.vertices.iter().enumerate() {
            for (slot, &c) in list.iter().enumerate() {
                if c >= nh {
                    return Err(Error::MalformedType(format!("half-chord {c} out of range")));
                }
                if chord_vertex[c] != usize::MAX {
                    return Err(Error::MalformedType(format!("half-chord {c} appears twice")));
                }
                chord_vertex[c] = v;
                chord_slot[c] = slot;
            }
        }
        if let Some(c) = chord_vertex.iter().position(|&v| v == usize::MAX) {
            return Err(Error::MalformedType(format!("half-chord {c} is attached to no vertex")));
        }
        Ok(Layout {
            vertex_circle,
            vertex_pos,
            pred,
            succ,
            chord_vertex,
            chord_slot,
        })
    }

    fn matching_ok(&self) -> bool {
        let n = self.chord_matching.len();
        self.chord_matching
            .iter()
            .enumerate()
            .all(|(c, &p)| p < n && p != c && self.chord_matching[p] == c)
    }

    /// Next directed edge of the output cycle through `e`.
    pub fn sigma(&self, lay: &Layout, e: DirectedEdge) -> DirectedEdge {
        match e {
            DirectedEdge::Chord(c) => {
                let far = self.chord_matching[c];
                let w = lay.chord_vertex[far];
                let slot = lay.chord_slot[far];
                match self.vertices[w].get(slot + 1) {
                    Some(&nc) => DirectedEdge::Chord(nc),
                    None => DirectedEdge::Arc(w),
                }
            }
            DirectedEdge::Arc(b) => DirectedEdge::Chord(self.vertices[lay.pred[b]][0]),
        }
    }

    /// Inverse of [`sigma`](Self::sigma).
    pub fn sigma_inv(&self, lay: &Layout, e: DirectedEdge) -> DirectedEdge {
        match e {
            DirectedEdge::Chord(c) => {
                let v = lay.chord_vertex[c];
                let slot = lay.chord_slot[c];
                if slot == 0 {
                    DirectedEdge::Arc(lay.succ[v])
                } else {
                    DirectedEdge::Chord(self.chord_matching[self.vertices[v][slot - 1]])
                }
            }
            DirectedEdge::Arc(b) => {
                let last = *self.vertices[b].last().expect("vertices carry half-chords");
                DirectedEdge::Chord(self.chord_matching[last])
            }
        }
    }

    /// All directed edges that lie on output cycles.
    pub fn output_edges(&self) -> impl Iterator<Item = DirectedEdge> + '_ {
        (0..self.chord_matching.len())
            .map(DirectedEdge::Chord)
            .chain((0..self.vertices.len()).map(DirectedEdge::Arc))
    }

    /// Non-input boundary cycles as orbits of `σ`, each starting at its least
    /// directed edge (chords before arcs), sorted by that edge.
    pub fn output_cycles(&self, lay: &Layout) -> Vec<Vec<DirectedEdge>> {
        let nh = self.chord_matching.len();
        let idx = |e: DirectedEdge| match e {
            DirectedEdge::Chord(c) => c,
            DirectedEdge::Arc(v) => nh + v,
        };
        let mut seen = vec![false; nh + self.vertices.len()];
        let mut out = Vec::new();
        for e in self.output_edges() {
            if seen[idx(e)] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = e;
            while !seen[idx(x)] {
                seen[idx(x)] = true;
                cyc.push(x);
                x = self.sigma(lay, x);
            }
            out.push(cyc);
        }
        out
    }

    /// For each output directed edge (indexed chords first, then arcs), the
    /// index of its cycle in [`output_cycles`](Self::output_cycles).
    pub fn cycle_index(&self, cycles: &[Vec<DirectedEdge>]) -> Vec<usize> {
        let nh = self.chord_matching.len();
        let mut ix = vec![usize::MAX; nh + self.vertices.len()];
        for (i, c) in cycles.iter().enumerate() {
            for &e in c {
                match e {
                    DirectedEdge::Chord(h) => ix[h] = i,
                    DirectedEdge::Arc(v) => ix[nh + v] = i,
                }
            }
        }
        ix
    }

    pub fn edge_index(&self, e: DirectedEdge) -> usize {
        match e {
            DirectedEdge::Chord(c) => c,
            DirectedEdge::Arc(v) => self.chord_matching.len() + v,
        }
    }

    fn edge_in_range(&self, e: DirectedEdge) -> bool {
        match e {
            DirectedEdge::Chord(c) => c < self.chord_matching.len(),
            DirectedEdge::Arc(v) => v < self.vertices.len(),
        }
    }

    /// Checks every invariant and lists all failures; an empty list means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        macro_rules! bad {
            ($kind:expr, $detail:expr $(,)?) => {
                out.push(Violation { kind: $kind, detail: $detail })
            };
        }
        let lay = match self.layout() {
            Ok(l) => l,
            Err(e) => {
                bad!("structure", e.to_string());
                return out;
            }
        };
        if !self.matching_ok() {
            bad!("matching", "chord_matching is not a fixed-point-free involution".into());
        }
        if self.circles.is_empty() {
            bad!("inputs", "no input circles".into());
        }
        if self.outputs.is_empty() {
            bad!("outputs", "no outputs".into());
        }
        for (v, list) in self.vertices.iter().enumerate() {
            if list.is_empty() {
                bad!("vertex", format!("vertex {v} carries no half-chord"));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let fg = self.underlying_fatgraph_unchecked();
        let connected = fg.is_connected();
        if !connected {
            bad!("connected", "underlying fatgraph is disconnected".into());
        }
        let cycles = self.output_cycles(&lay);
        if cycles.len() != self.outputs.len() {
            bad!(
                "outputs",
                format!("{} output boundary cycles but {} output markings", cycles.len(), self.outputs.len()),
            );
        }
        let ix = self.cycle_index(&cycles);
        let mut marks = vec![0usize; cycles.len()];
        for (j, m) in self.outputs.iter().enumerate() {
            if !self.edge_in_range(m.edge()) {
                bad!("marking", format!("output {j} marks a missing edge {:?}", m.edge()));
                continue;
            }
            marks[ix[self.edge_index(m.edge())]] += 1;
        }
        for (i, &m) in marks.iter().enumerate() {
            if m != 1 {
                bad!("marking", format!("output cycle {i} carries {m} markings"));
            }
        }
        if connected {
            let chi = 2 - (self.vertices.len() as i64 - (self.vertices.len() + self.num_chords()) as i64)
                - (self.k() + cycles.len()) as i64;
            if chi < 0 || chi % 2 != 0 {
                bad!("genus", format!("2 - χ - n = {chi} is not a nonnegative even number"));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ensure_valid(&self) -> Result<Layout> {
        let v = self.validate();
        if let Some(first) = v.first() {
            return Err(Error::MalformedType(format!("{}: {}", first.kind, first.detail)));
        }
        self.layout()
    }

    fn underlying_fatgraph_unchecked(&self) -> Fatgraph {
        let lay = self.layout().expect("checked layout");
        let nv = self.vertices.len();
        let n = 2 * nv + self.chord_matching.len();
        let mut pairing = vec![0; n];
        let mut next = vec![0; n];
        for v in 0..nv {
            let (inn, out) = (2 * v, 2 * v + 1);
            let w = lay.succ[v];
            pairing[out] = 2 * w;
            pairing[2 * w] = out;
            let mut ring = vec![inn, out];
            ring.extend(self.vertices[v].iter().map(|&c| 2 * nv + c));
            for i in 0..ring.len() {
                next[ring[i]] = ring[(i + 1) % ring.len()];
            }
        }
        for (c, &p) in self.chord_matching.iter().enumerate() {
            pairing[2 * nv + c] = 2 * nv + p;
        }
        Fatgraph { pairing, next }
    }

    /// Half-edges `2v`, `2v+1` are the incoming and outgoing arcs at vertex
    /// `v`; half-chord `c` is half-edge `2V + c`.
    pub fn underlying_fatgraph(&self) -> Result<Fatgraph> {
        self.ensure_valid()?;
        Ok(self.underlying_fatgraph_unchecked())
    }

    pub fn diagram_signature(&self) -> Result<Signature> {
        self.ensure_valid()?;
        let st = self.underlying_fatgraph_unchecked().surface_type()?;
        let sig = Signature::new(st.genus, self.k(), self.l());
        if sig.chords() != self.num_chords() as i64 || st.boundaries != self.k() + self.l() {
            return Err(Error::MalformedType(format!(
                "{} chords do not match signature {sig}",
                self.num_chords()
            )));
        }
        Ok(sig)
    }

    /// True iff the chords form a forest on the vertices.
    pub fn is_in_sd(&self) -> bool {
        let Ok(lay) = self.layout() else { return false };
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (c, &d) in self.chord_matching.iter().enumerate() {
            if c > d {
                continue;
            }
            let a = find(&mut parent, lay.chord_vertex[c]);
            let b = find(&mut parent, lay.chord_vertex[d]);
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Two circles, one vertex each, joined by a single chord; the output is
    /// marked inside `edge`.
    pub fn t3_type(marking: OutputMarking) -> StringDiagramType {
        StringDiagramType {
            circles: vec![
                InputCircle { marked_vertex: None, vertex_cycle: vec![0] },
                InputCircle { marked_vertex: None, vertex_cycle: vec![1] },
            ],
            vertices: vec![vec![0], vec![1]],
            chord_matching: vec![1, 0],
            outputs: vec![marking],
        }
    }

    pub fn t3_generic() -> StringDiagramType {
        t3_type(OutputMarking::InEdge(DirectedEdge::Chord(0)))
    }

    #[test]
    fn t3_type_is_valid() {
        let g = t3_generic();
        assert!(g.validate().is_empty(), "{:?}", g.validate());
        assert_eq!(g.diagram_signature().unwrap(), Signature::new(0, 2, 1));
        assert_eq!(g.dim(), 3);
        assert!(g.is_in_sd());
    }

    #[test]
    fn t3_fatgraph_shape() {
        let fg = t3_generic().underlying_fatgraph().unwrap();
        assert_eq!(fg.vertices().len(), 2);
        assert_eq!(fg.num_edges(), 3);
        let st = fg.surface_type().unwrap();
        assert_eq!(st.euler, -1);
        assert_eq!(st.boundaries, 3);
        // input circles are the orbits of the outgoing arcs
        let cycles = fg.boundary_cycles().unwrap();
        assert!(cycles.contains(&vec![1]));
        assert!(cycles.contains(&vec![3]));
    }

    #[test]
    fn broken_matching_is_reported() {
        let mut g = t3_generic();
        g.chord_matching = vec![0, 0];
        let v = g.validate();
        assert!(v.iter().any(|x| x.kind == "matching"), "{v:?}");
    }

    #[test]
    fn disconnected_is_reported() {
        // two loop chords on circle 1; circle 2 has a vertex of its own chord loop
        let g = StringDiagramType {
            circles: vec![
                InputCircle { marked_vertex: None, vertex_cycle: vec![0, 1] },
                InputCircle { marked_vertex: None, vertex_cycle: vec![2] },
            ],
            vertices: vec![vec![0], vec![1], vec![2, 3]],
            chord_matching: vec![1, 0, 3, 2],
            outputs: vec![OutputMarking::InEdge(DirectedEdge::Chord(0))],
        };
        let v = g.validate();
        assert!(v.iter().any(|x| x.kind == "connected"), "{v:?}");
    }

    #[test]
    fn empty_circle_is_malformed() {
        let g = StringDiagramType {
            circles: vec![InputCircle { marked_vertex: None, vertex_cycle: vec![] }],
            vertices: vec![],
            chord_matching: vec![],
            outputs: vec![OutputMarking::InEdge(DirectedEdge::Arc(0))],
        };
        assert!(!g.is_valid());
        assert!(g.diagram_signature().is_err());
    }

    #[test]
    fn double_chord_is_not_in_sd() {
        // two parallel chords between the same pair of vertices
        let g = StringDiagramType {
            circles: vec![
                InputCircle { marked_vertex: None, vertex_cycle: vec![0] },
                InputCircle { marked_vertex: None, vertex_cycle: vec![1] },
            ],
            vertices: vec![vec![0, 1], vec![2, 3]],
            chord_matching: vec![3, 2, 1, 0],
            outputs: vec![OutputMarking::InEdge(DirectedEdge::Chord(0))],
        };
        assert!(!g.is_in_sd());
    }

    #[test]
    fn sigma_inverse() {
        let g = t3_generic();
        let lay = g.layout().unwrap();
        for e in g.output_edges() {
            assert_eq!(g.sigma_inv(&lay, g.sigma(&lay, e)), e);
        }
        let cycles = g.output_cycles(&lay);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 4);
    }
}
