//! Metric points of a cell and their realization as metric graphs.
//!
//! Coordinates: on circle `i` with free vertices `v₁ … vₙ`, `t₀` is the arc
//! from the input marked point to `v₁`, `t_j` the arc from `v_j` to
//! `v_{j+1}`, and `tₙ` the arc from `vₙ` back to the marked point. A vertex
//! on the marked point sits at position 0. Each InEdge output carries
//! `p ∈ [0,1]`, the relative position along its directed edge.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{DirectedEdge, Layout, OutputMarking, StringDiagramType};
use crate::error::{Error, Result};
use crate::rational::{self, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MetricStringDiagram {
    pub dtype: StringDiagramType,
    pub t: Vec<Vec<Rat>>,
    pub p: Vec<Rat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Arc,
    Chord,
}

impl DirectedEdge {
    pub fn kind(&self) -> EdgeKind {
        match self {
            DirectedEdge::Chord(_) => EdgeKind::Chord,
            DirectedEdge::Arc(_) => EdgeKind::Arc,
        }
    }
}

/// Output `j` read from its marked point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputCycleWord {
    pub edges: Vec<DirectedEdge>,
    /// True when the marked point lies inside `edges[0]` rather than at its start.
    pub marked_inside_first: bool,
}

/// A point given by distance along a directed edge from its start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointOnGraph {
    pub edge: DirectedEdge,
    pub offset: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricEdge {
    pub kind: EdgeKind,
    pub from: usize,
    pub to: usize,
    pub length: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGraph {
    /// `(circle, position)` with positions in `[0, 1)` measured from the input marked point.
    pub vertex_position: Vec<(usize, Rat)>,
    /// Arc `v` ends at vertex `v`.
    pub arcs: Vec<MetricEdge>,
    /// One per chord in canonical chord order, oriented from its first endpoint.
    pub chords: Vec<MetricEdge>,
    pub output_marks: Vec<PointOnGraph>,
}

/// Label-free description of a metric point: vertices at equal positions are
/// lumped, half-chords are numbered by geometric order. Two points describe
/// the same string diagram iff their fingerprints agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricFingerprint {
    /// Per circle, `(position, half-chords in cyclic order after the arcs)`.
    pub clusters: Vec<Vec<(Rat, Vec<usize>)>>,
    pub matching: Vec<usize>,
    pub outputs: Vec<FingerprintMark>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FingerprintMark {
    OnChord { from: usize, offset: Rat },
    OnArc { circle: usize, position: Rat },
    /// Corner at a cluster; `gap` is the index of the half-chord it precedes,
    /// or the list length for the gap before the incoming arc.
    Corner { circle: usize, position: Rat, gap: usize },
}

impl StringDiagramType {
    pub fn output_cycle_word(&self, j: usize) -> Result<OutputCycleWord> {
        if j >= self.outputs.len() {
            return Err(Error::BadIndex(format!("output {j} of {}", self.outputs.len())));
        }
        let lay = self.ensure_valid()?;
        let m = self.outputs[j];
        let start = m.edge();
        let mut edges = vec![start];
        let mut e = self.sigma(&lay, start);
        while e != start {
            edges.push(e);
            e = self.sigma(&lay, e);
        }
        Ok(OutputCycleWord { edges, marked_inside_first: m.is_in_edge() })
    }
}

fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

impl MetricStringDiagram {
    pub fn new(dtype: StringDiagramType, t: Vec<Vec<Rat>>, p: Vec<Rat>) -> Result<Self> {
        let x = MetricStringDiagram { dtype, t, p };
        x.check()?;
        Ok(x)
    }

    /// Arity, range and normalization of the coordinates.
    pub fn check(&self) -> Result<()> {
        self.dtype.ensure_valid()?;
        let (n, iv) = self.dtype.shape();
        if self.t.len() != n.len() {
            return Err(Error::Arity(format!("{} t-blocks for {} circles", self.t.len(), n.len())));
        }
        for (i, (ti, &ni)) in self.t.iter().zip(&n).enumerate() {
            if ti.len() != ni + 1 {
                return Err(Error::Arity(format!("circle {i} needs {} coordinates, got {}", ni + 1, ti.len())));
            }
            if ti.iter().any(Signed::is_negative) {
                return Err(Error::Domain(format!("circle {i} has a negative coordinate")));
            }
            if ti.iter().sum::<Rat>() != Rat::one() {
                return Err(Error::Domain(format!("circle {i} coordinates do not sum to 1")));
            }
        }
        if self.p.len() != iv {
            return Err(Error::Arity(format!("{} p-coordinates for {iv} InEdge outputs", self.p.len())));
        }
        if self.p.iter().any(|p| p.is_negative() || *p > Rat::one()) {
            return Err(Error::Domain("p-coordinate outside [0,1]".into()));
        }
        Ok(())
    }

    /// The barycenter of the cell of `dtype`.
    pub fn barycenter(dtype: StringDiagramType) -> Self {
        let (n, iv) = dtype.shape();
        let t = n.iter().map(|&ni| vec![rational::rat(1, ni as i64 + 1); ni + 1]).collect();
        let p = vec![rational::rat(1, 2); iv];
        MetricStringDiagram { dtype, t, p }
    }

    pub fn is_interior(&self) -> bool {
        self.t.iter().flatten().all(Signed::is_positive)
            && self.p.iter().all(|p| p.is_positive() && *p < Rat::one())
    }

    /// Positions of the vertices, not reduced mod 1; wrapped vertices sit at 1.
    pub(crate) fn raw_positions(&self) -> Vec<(usize, Rat)> {
        let mut pos = vec![(0, Rat::zero()); self.dtype.vertices.len()];
        for (i, c) in self.dtype.circles.iter().enumerate() {
            if let Some(m) = c.marked_vertex {
                pos[m] = (i, Rat::zero());
            }
            let mut acc = Rat::zero();
            for (j, &v) in c.vertex_cycle.iter().enumerate() {
                acc += &self.t[i][j];
                pos[v] = (i, acc.clone());
            }
        }
        pos
    }

    pub(crate) fn arc_length(&self, lay: &Layout, raw: &[(usize, Rat)], b: usize) -> Rat {
        let a = lay.pred[b];
        let d = &raw[b].1 - &raw[a].1;
        if lay.vertex_pos[a] < lay.vertex_pos[b] {
            d
        } else {
            d + Rat::one()
        }
    }

    pub fn edge_length(&self, e: DirectedEdge) -> Result<Rat> {
        let lay = self.dtype.ensure_valid()?;
        Ok(match e {
            DirectedEdge::Chord(_) => Rat::one(),
            DirectedEdge::Arc(b) => self.arc_length(&lay, &self.raw_positions(), b),
        })
    }

    /// Coordinate `p` of output `j`, if it is an InEdge output.
    pub fn p_of(&self, j: usize) -> Option<&Rat> {
        if !self.dtype.outputs[j].is_in_edge() {
            return None;
        }
        let idx = self.dtype.outputs[..j].iter().filter(|m| m.is_in_edge()).count();
        self.p.get(idx)
    }

    pub fn output_length(&self, j: usize) -> Result<Rat> {
        let w = self.dtype.output_cycle_word(j)?;
        w.edges.iter().map(|&e| self.edge_length(e)).sum()
    }

    pub fn realize(&self) -> Result<MetricGraph> {
        self.check()?;
        let g = &self.dtype;
        let lay = g.layout()?;
        let raw = self.raw_positions();
        let vertex_position = raw.iter().map(|(c, x)| (*c, frac(x))).collect();
        let arcs = (0..g.vertices.len())
            .map(|b| MetricEdge {
                kind: EdgeKind::Arc,
                from: lay.pred[b],
                to: b,
                length: self.arc_length(&lay, &raw, b),
            })
            .collect();
        let chords = g
            .canonical_chord_order()
            .iter()
            .map(|c| MetricEdge {
                kind: EdgeKind::Chord,
                from: lay.chord_vertex[c.first],
                to: lay.chord_vertex[c.second],
                length: Rat::one(),
            })
            .collect();
        let output_marks = (0..g.outputs.len())
            .map(|j| match g.outputs[j] {
                OutputMarking::AtCorner(e) => PointOnGraph { edge: e, offset: Rat::zero() },
                OutputMarking::InEdge(e) => {
                    let len = match e {
                        DirectedEdge::Chord(_) => Rat::one(),
                        DirectedEdge::Arc(b) => self.arc_length(&lay, &raw, b),
                    };
                    PointOnGraph { edge: e, offset: len * self.p_of(j).expect("InEdge has p") }
                }
            })
            .collect();
        Ok(MetricGraph { vertex_position, arcs, chords, output_marks })
    }

    /// See [`GeometricFingerprint`]. Lumped vertices list their half-chords
    /// later vertex first, the ones wrapped around to position 1 counting as
    /// earliest.
    pub fn fingerprint(&self) -> Result<GeometricFingerprint> {
        self.check()?;
        let g = &self.dtype;
        let lay = g.layout()?;
        let raw = self.raw_positions();
        // circle order key: wrapped vertices first, then by position along the circle
        let mut clusters: Vec<Vec<(Rat, Vec<usize>)>> = vec![Vec::new(); g.k()];
        let mut where_v = vec![(0usize, 0usize); g.vertices.len()];
        for (i, c) in g.circles.iter().enumerate() {
            let mut order: Vec<(Rat, bool, usize)> = Vec::new();
            for v in c.order() {
                let x = &raw[v].1;
                let wrapped = *x == Rat::one();
                order.push((frac(x), wrapped, v));
            }
            // stable: equal positions keep circle order, wrapped ones go first
            order.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
            let mut k = 0;
            while k < order.len() {
                let mut e = k;
                while e < order.len() && order[e].0 == order[k].0 {
                    e += 1;
                }
                let ci = clusters[i].len();
                let mut list = Vec::new();
                for &(_, _, v) in order[k..e].iter().rev() {
                    where_v[v] = (i, ci);
                    list.extend(g.vertices[v].iter().copied());
                }
                clusters[i].push((order[k].0.clone(), list));
                k = e;
            }
        }
        let mut id = vec![0usize; g.num_half_chords()];
        let mut gap_of = vec![0usize; g.num_half_chords()];
        let mut next = 0;
        for cl in &clusters {
            for (_, list) in cl {
                for (s, &h) in list.iter().enumerate() {
                    id[h] = next;
                    gap_of[h] = s;
                    next += 1;
                }
            }
        }
        let corner_before = |h: usize| {
            let (i, ci) = where_v[lay.chord_vertex[h]];
            FingerprintMark::Corner { circle: i, position: clusters[i][ci].0.clone(), gap: gap_of[h] }
        };
        let corner_at = |e: DirectedEdge| match e {
            DirectedEdge::Chord(h) => corner_before(h),
            DirectedEdge::Arc(b) => {
                let (i, ci) = where_v[b];
                let last = *g.vertices[b].last().expect("vertex carries chords");
                FingerprintMark::Corner { circle: i, position: clusters[i][ci].0.clone(), gap: gap_of[last] + 1 }
            }
        };
        let outputs = (0..g.outputs.len())
            .map(|j| match g.outputs[j] {
                OutputMarking::AtCorner(e) => corner_at(e),
                OutputMarking::InEdge(e) => {
                    let p = self.p_of(j).expect("InEdge has p").clone();
                    if p.is_zero() {
                        return corner_at(e);
                    }
                    if p.is_one() {
                        return corner_at(g.sigma(&lay, e));
                    }
                    match e {
                        DirectedEdge::Chord(h) => FingerprintMark::OnChord { from: id[h], offset: p },
                        DirectedEdge::Arc(b) => {
                            let len = self.arc_length(&lay, &raw, b);
                            if len.is_zero() {
                                return corner_at(e);
                            }
                            let position = frac(&(&raw[b].1 - len * p));
                            FingerprintMark::OnArc { circle: lay.vertex_circle[b], position }
                        }
                    }
                }
            })
            .collect();
        let mut matching = vec![0; g.num_half_chords()];
        for (h, &d) in g.chord_matching.iter().enumerate() {
            matching[id[h]] = id[d];
        }
        let clusters = clusters
            .into_iter()
            .map(|cl| cl.into_iter().map(|(x, l)| (x, l.into_iter().map(|h| id[h]).collect())).collect())
            .collect();
        Ok(GeometricFingerprint { clusters, matching, outputs })
    }
}
