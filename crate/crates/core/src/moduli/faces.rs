//! Codimension-one degenerations of a cell and their composites.
//!
//! Simplex face `t^i_s = 0` contracts an arc of circle `i`: for `1 ≤ s < n`
//! the arc from `v_s` to `v_{s+1}`, for `s = 0` and `s = n` the arcs touching
//! the input marked point (merging into the marked vertex, or making the end
//! vertex the marked one when there is none). Contracting the arc from `a` to
//! its successor `b` leaves one vertex with cyclic order
//! `[in_a, out_b, L_b…, L_a…]`. Interval face `p = 0` (resp. `1`) moves an
//! InEdge marking to the corner at the start (resp. end) of its edge.

use serde::{Deserialize, Serialize};

use crate::diagram::{DirectedEdge, InputCircle, OutputMarking, StringDiagramType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceDescriptor {
    Simplex { circle: usize, s: usize },
    Interval { output: usize, end: u8 },
}

/// How the coordinates of a degenerate locus feed the target cell: target
/// `t^i_j` is source `t^i_{t_src[i][j]}` and target interval `q` is source
/// interval `p_src[q]`. Dropped coordinates are the vanishing or extremal ones,
/// plus the intervals listed in `collapsed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordMap {
    pub t_src: Vec<Vec<usize>>,
    pub p_src: Vec<usize>,
    pub collapsed: Vec<usize>,
}

impl CoordMap {
    /// Orientation sign of the coordinate identification: circles keep their
    /// order, so it is the product of the vertex-order parity inside each
    /// simplex block and the parity of the interval reordering.
    pub fn relabel_sign(&self) -> i8 {
        let mut sign = permutation_sign(&self.p_src);
        for src in &self.t_src {
            sign *= permutation_sign(src);
        }
        sign
    }
}

/// Parity of inversions of a list of distinct keys.
pub fn permutation_sign(keys: &[usize]) -> i8 {
    let mut inv = 0usize;
    for i in 0..keys.len() {
        for j in i + 1..keys.len() {
            if keys[i] > keys[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Contracts the arc of circle `i` indexed by `s`; returns the outputs whose
/// InEdge marking lay on that arc and therefore collapsed to a corner.
fn apply_simplex(g: &mut StringDiagramType, i: usize, s: usize) -> Vec<usize> {
    let c = g.circles[i].clone();
    let order: Vec<usize> = c.order().collect();
    let n = c.vertex_cycle.len();
    debug_assert!(n >= 1 && s <= n);
    let (a, b) = match c.marked_vertex {
        None if s == 0 => {
            g.circles[i] = InputCircle { marked_vertex: Some(order[0]), vertex_cycle: order[1..].to_vec() };
            return Vec::new();
        }
        None if s == n => {
            g.circles[i] = InputCircle { marked_vertex: Some(order[n - 1]), vertex_cycle: order[..n - 1].to_vec() };
            *g = g.canonical();
            return Vec::new();
        }
        None => (order[s - 1], order[s]),
        Some(_) => (order[s], order[(s + 1) % order.len()]),
    };
    let first_a = g.vertices[a][0];
    let mut merged = std::mem::take(&mut g.vertices[b]);
    merged.extend_from_slice(&g.vertices[a]);
    g.vertices[a] = merged;
    let circle = &mut g.circles[i];
    if circle.marked_vertex == Some(b) {
        circle.marked_vertex = Some(a);
        circle.vertex_cycle.retain(|&v| v != a);
    } else {
        circle.vertex_cycle.retain(|&v| v != b);
    }
    let mut collapsed = Vec::new();
    for (j, m) in g.outputs.iter_mut().enumerate() {
        match *m {
            OutputMarking::AtCorner(DirectedEdge::Arc(x)) if x == b => {
                *m = OutputMarking::AtCorner(DirectedEdge::Chord(first_a));
            }
            OutputMarking::InEdge(DirectedEdge::Arc(x)) if x == b => {
                *m = OutputMarking::AtCorner(DirectedEdge::Chord(first_a));
                collapsed.push(j);
            }
            _ => {}
        }
    }
    *g = g.canonical();
    collapsed
}

fn apply_interval(g: &mut StringDiagramType, j: usize, end: u8) {
    let OutputMarking::InEdge(e) = g.outputs[j] else {
        panic!("interval face on corner-marked output {j}");
    };
    let target = if end == 0 {
        e
    } else {
        let lay = g.layout().expect("valid type");
        g.sigma(&lay, e)
    };
    g.outputs[j] = OutputMarking::AtCorner(target);
}

/// Applies all degenerations at once: `t_zero[i][s]` marks vanishing simplex
/// coordinates (never a whole block), `p_end[q]` an extremal interval
/// coordinate. Returns the canonical target type and the coordinate map.
pub fn degenerate(g: &StringDiagramType, t_zero: &[Vec<bool>], p_end: &[Option<u8>]) -> (StringDiagramType, CoordMap) {
    let mut cur = g.clone();
    let mut t_src: Vec<Vec<usize>> = t_zero.iter().map(|z| (0..z.len()).collect()).collect();
    // source interval of each output, while it still has one
    let mut out_iv: Vec<Option<usize>> = Vec::with_capacity(g.l());
    let mut q = 0;
    for m in &g.outputs {
        if m.is_in_edge() {
            out_iv.push(Some(q));
            q += 1;
        } else {
            out_iv.push(None);
        }
    }
    let mut collapsed = Vec::new();
    for i in 0..t_src.len() {
        while let Some(s) = t_src[i].iter().position(|&j| t_zero[i][j]) {
            assert!(t_src[i].len() >= 2, "all coordinates of circle {i} vanish");
            for jo in apply_simplex(&mut cur, i, s) {
                collapsed.push(out_iv[jo].take().expect("collapsed output had an interval"));
            }
            t_src[i].remove(s);
        }
    }
    for j in 0..cur.outputs.len() {
        if let Some(q) = out_iv[j] {
            if let Some(end) = p_end[q] {
                apply_interval(&mut cur, j, end);
                out_iv[j] = None;
            }
        }
    }
    collapsed.sort_unstable();
    let p_src = out_iv.into_iter().flatten().collect();
    (cur, CoordMap { t_src, p_src, collapsed })
}

/// One codimension-one face of `g`.
#[derive(Clone, Debug)]
pub struct Face {
    pub descriptor: FaceDescriptor,
    pub target: StringDiagramType,
    pub map: CoordMap,
    pub degree: i8,
}

pub fn face(g: &StringDiagramType, d: FaceDescriptor) -> Face {
    let (n, iv) = g.shape();
    let mut t_zero: Vec<Vec<bool>> = n.iter().map(|&ni| vec![false; ni + 1]).collect();
    let mut p_end = vec![None; iv];
    let eps = match d {
        FaceDescriptor::Simplex { circle, s } => {
            t_zero[circle][s] = true;
            s + n[..circle].iter().sum::<usize>()
        }
        FaceDescriptor::Interval { output, end } => {
            let q = g.outputs[..output].iter().filter(|m| m.is_in_edge()).count();
            p_end[q] = Some(end);
            // Δ¹ with p = 0 as vertex 0: the p = 1 face omits vertex 0
            n.iter().sum::<usize>() + q + usize::from(end == 0)
        }
    };
    let (target, map) = degenerate(g, &t_zero, &p_end);
    let degree = if target.dim() + 1 == g.dim() {
        let sign = if eps % 2 == 0 { 1 } else { -1 };
        sign * map.relabel_sign()
    } else {
        0
    };
    Face { descriptor: d, target, map, degree }
}

pub fn face_descriptors(g: &StringDiagramType) -> Vec<FaceDescriptor> {
    let mut out = Vec::new();
    for (i, c) in g.circles.iter().enumerate() {
        let n = c.free_vertices();
        if n >= 1 {
            out.extend((0..=n).map(|s| FaceDescriptor::Simplex { circle: i, s }));
        }
    }
    for (j, m) in g.outputs.iter().enumerate() {
        if m.is_in_edge() {
            out.push(FaceDescriptor::Interval { output: j, end: 0 });
            out.push(FaceDescriptor::Interval { output: j, end: 1 });
        }
    }
    out
}

/// All codimension-one faces, simplex faces first.
pub fn faces(g: &StringDiagramType) -> Vec<Face> {
    face_descriptors(g).into_iter().map(|d| face(g, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Signature;
    use crate::moduli::enumerate::enumerate_top_cells;

    fn t3_tops() -> Vec<StringDiagramType> {
        enumerate_top_cells(Signature::new(0, 2, 1)).unwrap()
    }

    #[test]
    fn t3_circle_faces_meet() {
        for g in t3_tops() {
            let f = faces(&g);
            assert_eq!(f.len(), 6);
            assert_eq!(f[0].target, f[1].target);
            assert_eq!(f[0].degree, -f[1].degree);
            assert_eq!(f[0].target.circles[0].marked_vertex, Some(0));
        }
    }

    #[test]
    fn chord_marked_ends_differ() {
        let g = t3_tops()
            .into_iter()
            .find(|g| g.outputs[0] == OutputMarking::InEdge(DirectedEdge::Chord(0)))
            .unwrap();
        let a = face(&g, FaceDescriptor::Interval { output: 0, end: 0 });
        let b = face(&g, FaceDescriptor::Interval { output: 0, end: 1 });
        assert_ne!(a.target, b.target);
        assert_eq!(a.degree, -b.degree);
        assert_eq!(a.target.dim(), 2);
    }

    #[test]
    fn marking_on_contracted_arc_collapses() {
        // one circle with vertices v1, v2 and a chord between them, marked on the arc v1 -> v2
        let g = StringDiagramType {
            circles: vec![InputCircle { marked_vertex: None, vertex_cycle: vec![0, 1] }],
            vertices: vec![vec![0], vec![1]],
            chord_matching: vec![1, 0],
            outputs: vec![
                OutputMarking::InEdge(DirectedEdge::Arc(1)),
                OutputMarking::InEdge(DirectedEdge::Chord(1)),
            ],
        };
        assert!(g.is_valid(), "{:?}", g.validate());
        let f = face(&g, FaceDescriptor::Simplex { circle: 0, s: 1 });
        assert_eq!(f.degree, 0);
        assert_eq!(f.map.collapsed, vec![0]);
        assert_eq!(f.target.dim(), g.dim() - 2);
        assert!(f.target.is_valid());
    }

    #[test]
    fn merge_puts_later_vertex_first() {
        let g = StringDiagramType {
            circles: vec![InputCircle { marked_vertex: None, vertex_cycle: vec![0, 1] }],
            vertices: vec![vec![0], vec![1]],
            chord_matching: vec![1, 0],
            outputs: vec![
                OutputMarking::InEdge(DirectedEdge::Arc(1)),
                OutputMarking::InEdge(DirectedEdge::Chord(1)),
            ],
        };
        let f = face(&g, FaceDescriptor::Simplex { circle: 0, s: 1 });
        // merged vertex lists v2's half-chord first; after renaming that is 0
        assert_eq!(f.target.vertices, vec![vec![0, 1]]);
        assert_eq!(f.target.outputs[1], OutputMarking::InEdge(DirectedEdge::Chord(0)));
    }

    #[test]
    fn relabel_sign_of_identity_maps() {
        let m = CoordMap { t_src: vec![vec![0, 2], vec![0, 1]], p_src: vec![0, 2], collapsed: vec![1] };
        assert_eq!(m.relabel_sign(), 1);
        let m = CoordMap { t_src: vec![vec![1, 0]], p_src: vec![], collapsed: vec![] };
        assert_eq!(m.relabel_sign(), -1);
        assert_eq!(permutation_sign(&[1, 0]), -1);
    }
}
