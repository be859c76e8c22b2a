//! Gluing `x₁ #_𝔰 x₂`: input circles of `x₂` are identified with output cycles
//! of `x₁` by the orientation-reversing isometry matching the marked points.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::diagram::{
    DirectedEdge, InputCircle, Layout, MetricStringDiagram, OutputMarking, Signature, StringDiagramType,
};
use crate::error::{Error, Result};
use crate::moduli::locate_cell;
use crate::rational::Rat;

/// Pairs `(output of x₁, input of x₂)`, zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingSpec {
    pub pairs: Vec<(usize, usize)>,
}

impl GluingSpec {
    pub fn check(&self, outputs: usize, inputs: usize) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::GluingSpec("no pairs".into()));
        }
        let mut used_o = vec![false; outputs];
        let mut used_i = vec![false; inputs];
        for &(o, i) in &self.pairs {
            if o >= outputs || i >= inputs {
                return Err(Error::GluingSpec(format!("pair ({o},{i}) outside {outputs} outputs × {inputs} inputs")));
            }
            if std::mem::replace(&mut used_o[o], true) {
                return Err(Error::GluingSpec(format!("output {o} used twice")));
            }
            if std::mem::replace(&mut used_i[i], true) {
                return Err(Error::GluingSpec(format!("input {i} used twice")));
            }
        }
        Ok(())
    }
}

pub fn glue_signature(a: Signature, b: Signature, s: usize) -> Result<Signature> {
    if s < 1 || s > a.l.min(b.k) {
        return Err(Error::GluingSpec(format!("|s| = {s} outside 1..={}", a.l.min(b.k))));
    }
    Ok(Signature::new(a.g + b.g + s - 1, a.k + b.k - s, a.l + b.l - s))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueOptions {
    /// Slide endpoints landing inside a chord to its second endpoint instead of its first.
    pub slide_to_second_endpoint: bool,
}

#[derive(Clone, Debug)]
pub struct GluedDiagram {
    /// The glued point before locating; coordinates may lie on cell boundaries.
    pub glued: MetricStringDiagram,
    pub located: MetricStringDiagram,
    pub signature: Signature,
    /// Chord endpoints of `x₂` that landed inside chords of `x₁` and were slid.
    pub slid_endpoints: usize,
    /// Output marks of `x₂` carried to a corner by one of those slides.
    pub collapsed_marks: usize,
}

/// Where a point of an output cycle of `x₁` ends up in the glued graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Spot {
    /// Corner of `x₁` at `vertex`, before list position `slot`.
    Corner { vertex: usize, slot: usize },
    /// Interior of the arc ending at `arc`, at distance `offset` back from it.
    Arc { arc: usize, offset: Rat },
}

/// Order of items within a spot, forward along the output cycle.
type SpotKey = (u8, Rat, Reverse<usize>);

enum Landing {
    At(Spot, SpotKey),
    /// Strictly inside an arc of `x₁` that also receives no vertex there.
    OnArc { arc: usize, offset: Rat },
    OnChord { half_chord: usize, offset: Rat },
}

/// One glued output cycle as consecutive segments `(edge, start offset, length)`
/// read forward from its marked point.
struct Cycle {
    segments: Vec<(DirectedEdge, Rat, Rat)>,
    length: Rat,
}

impl Cycle {
    fn new(x: &MetricStringDiagram, lay: &Layout, raw: &[(usize, Rat)], j: usize) -> Result<Self> {
        let w = x.dtype.output_cycle_word(j)?;
        let len = |e: DirectedEdge| match e {
            DirectedEdge::Chord(_) => Rat::one(),
            DirectedEdge::Arc(b) => x.arc_length(lay, raw, b),
        };
        let e0 = w.edges[0];
        let l0 = len(e0);
        let p0 = x.p_of(j).cloned().unwrap_or_else(Rat::zero);
        let cut = &l0 * &p0;
        let mut segments = vec![(e0, cut.clone(), &l0 - &cut)];
        for &e in &w.edges[1..] {
            segments.push((e, Rat::zero(), len(e)));
        }
        if !cut.is_zero() {
            segments.push((e0, Rat::zero(), cut));
        }
        let length = segments.iter().map(|s| s.2.clone()).sum::<Rat>();
        Ok(Cycle { segments, length })
    }

    /// Edge and offset from its start of the point at forward distance `d ∈ [0, L)`.
    fn locate(&self, d: &Rat) -> (DirectedEdge, Rat) {
        let mut acc = Rat::zero();
        for (e, start, l) in &self.segments {
            if l.is_zero() {
                continue;
            }
            if *d < &acc + l {
                return (*e, start + (d - &acc));
            }
            acc += l;
        }
        unreachable!("distance {d} beyond cycle length {}", self.length)
    }
}

fn corner_before(g: &StringDiagramType, lay: &Layout, e: DirectedEdge) -> Spot {
    match e {
        DirectedEdge::Chord(h) => Spot::Corner { vertex: lay.chord_vertex[h], slot: lay.chord_slot[h] },
        DirectedEdge::Arc(b) => Spot::Corner { vertex: b, slot: g.vertices[b].len() },
    }
}

fn modulo(x: Rat, l: &Rat) -> Rat {
    let q = (&x / l).floor();
    x - q * l
}

struct Context<'a> {
    x1: &'a MetricStringDiagram,
    lay1: Layout,
    opts: GlueOptions,
}

impl Context<'_> {
    /// Classifies a point of output cycle `c`; `order` breaks ties between coincident points.
    fn land(&self, c: &Cycle, d: &Rat, order: usize) -> Landing {
        let g = &self.x1.dtype;
        let (e, off) = c.locate(d);
        if off.is_zero() {
            return Landing::At(corner_before(g, &self.lay1, e), (1, Rat::zero(), Reverse(order)));
        }
        match e {
            DirectedEdge::Arc(arc) => Landing::OnArc { arc, offset: off },
            DirectedEdge::Chord(h) => Landing::OnChord { half_chord: h, offset: off },
        }
    }

    /// Slide target of a point inside the chord side `Chord(h)`: the corner and
    /// whether the slide runs backward to the start of the side.
    fn slide_target(&self, h: usize) -> (Spot, bool) {
        let g = &self.x1.dtype;
        let start = g.chord_start(&self.lay1, h);
        let target = if self.opts.slide_to_second_endpoint { g.chord_matching[start] } else { start };
        if target == h {
            (corner_before(g, &self.lay1, DirectedEdge::Chord(h)), true)
        } else {
            (corner_before(g, &self.lay1, g.sigma(&self.lay1, DirectedEdge::Chord(h))), false)
        }
    }
}

/// A vertex of a glued input circle of `x₂` and where it lands.
struct VertexItem {
    spot: Spot,
    key: SpotKey,
    chords: Vec<usize>,
}

enum MarkPlace {
    Keep(OutputMarking, Option<Rat>),
    /// Corner right after the vertex item of `x₂` vertex `v`.
    After(usize),
    At(Spot, SpotKey),
    OnArc { arc: usize, offset: Rat },
    OnChord { half_chord: usize, offset: Rat },
}

/// Glues `x₂` onto `x₁` along `spec` and locates the resulting cell.
pub fn glue_metric(
    x1: &MetricStringDiagram,
    x2: &MetricStringDiagram,
    spec: &GluingSpec,
    opts: GlueOptions,
) -> Result<GluedDiagram> {
    x1.check()?;
    x2.check()?;
    let (g1, g2) = (&x1.dtype, &x2.dtype);
    spec.check(g1.l(), g2.k())?;
    let sig = glue_signature(g1.diagram_signature()?, g2.diagram_signature()?, spec.pairs.len())?;
    let lay1 = g1.layout()?;
    let lay2 = g2.layout()?;
    let raw1 = x1.raw_positions();
    let raw2 = x2.raw_positions();
    let cx = Context { x1, lay1: lay1.clone(), opts };
    let h1 = g1.num_half_chords();

    let mut glued_circle = vec![None; g2.k()];
    let mut cycles = Vec::new();
    for (r, &(o, i)) in spec.pairs.iter().enumerate() {
        let c = Cycle::new(x1, &lay1, &raw1, o)?;
        if c.length.is_zero() {
            return Err(Error::GluingDegenerate(format!("output {o} has length 0")));
        }
        glued_circle[i] = Some(r);
        cycles.push(c);
    }
    // forward distance along the glued cycle of each vertex of a glued circle
    let mut dist: Vec<Option<(usize, Rat)>> = vec![None; g2.vertices.len()];
    let mut items: Vec<VertexItem> = Vec::new();
    let mut item_of = vec![usize::MAX; g2.vertices.len()];
    let mut chord_side: BTreeMap<usize, Vec<(Rat, usize)>> = BTreeMap::new();
    for (i, circ) in g2.circles.iter().enumerate() {
        let Some(r) = glued_circle[i] else { continue };
        let c = &cycles[r];
        for (ord, v) in circ.order().enumerate() {
            let d = modulo(&c.length * (Rat::one() - &raw2[v].1), &c.length);
            dist[v] = Some((r, d.clone()));
            let chords = g2.vertices[v].iter().map(|&h| h1 + h).collect();
            let (spot, key) = match cx.land(c, &d, ord) {
                Landing::At(s, k) => (s, k),
                Landing::OnArc { arc, offset } => (Spot::Arc { arc, offset }, (1, Rat::zero(), Reverse(ord))),
                Landing::OnChord { half_chord, offset } => {
                    chord_side.entry(half_chord).or_default().push((offset.clone(), items.len()));
                    let (s, backward) = cx.slide_target(half_chord);
                    (s, (if backward { 2 } else { 0 }, offset, Reverse(ord)))
                }
            };
            item_of[v] = items.len();
            items.push(VertexItem { spot, key, chords });
        }
    }

    // output markings of x₂, before the glued graph is numbered
    let mut places = Vec::new();
    let mut collapsed_marks = 0;
    for j in 0..g2.l() {
        let (place, collapsed) = place_mark(&cx, x2, &lay2, &raw2, &cycles, &dist, &glued_circle, &chord_side, j)?;
        collapsed_marks += usize::from(collapsed);
        places.push(place);
    }

    // new vertices on arcs of x₁, one per distinct landing point
    let mut arc_points: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
    for it in &items {
        if let Spot::Arc { arc, offset } = &it.spot {
            arc_points.entry(*arc).or_default().push(offset.clone());
        }
    }
    let nv1 = g1.vertices.len();
    let mut new_vertex: BTreeMap<(usize, Rat), usize> = BTreeMap::new();
    for (arc, offs) in &mut arc_points {
        offs.sort();
        offs.dedup();
        for o in offs.iter() {
            let id = nv1 + new_vertex.len();
            new_vertex.insert((*arc, o.clone()), id);
        }
    }
    let spot_vertex = |s: &Spot| match s {
        Spot::Corner { vertex, .. } => *vertex,
        Spot::Arc { arc, offset } => new_vertex[&(*arc, offset.clone())],
    };

    // items at each spot in forward order
    let mut at_spot: BTreeMap<Spot, Vec<usize>> = BTreeMap::new();
    for (k, it) in items.iter().enumerate() {
        at_spot.entry(it.spot.clone()).or_default().push(k);
    }
    for list in at_spot.values_mut() {
        list.sort_by(|&a, &b| items[a].key.cmp(&items[b].key));
    }

    let nnew = new_vertex.len();
    let mut vmap2 = vec![usize::MAX; g2.vertices.len()];
    let mut next = nv1 + nnew;
    for (i, c) in g2.circles.iter().enumerate() {
        if glued_circle[i].is_none() {
            for v in c.order() {
                vmap2[v] = next;
                next += 1;
            }
        }
    }
    let total_v = next;
    let mut vertices: Vec<Vec<usize>> = vec![Vec::new(); total_v];
    for (w, list) in g1.vertices.iter().enumerate() {
        let mut out = Vec::new();
        for q in 0..=list.len() {
            if let Some(ks) = at_spot.get(&Spot::Corner { vertex: w, slot: q }) {
                for &k in ks {
                    out.extend_from_slice(&items[k].chords);
                }
            }
            if q < list.len() {
                out.push(list[q]);
            }
        }
        vertices[w] = out;
    }
    for ((arc, off), &id) in &new_vertex {
        let ks = &at_spot[&Spot::Arc { arc: *arc, offset: off.clone() }];
        for &k in ks {
            vertices[id].extend_from_slice(&items[k].chords);
        }
    }
    for (v, list) in g2.vertices.iter().enumerate() {
        if vmap2[v] != usize::MAX {
            vertices[vmap2[v]] = list.iter().map(|&h| h1 + h).collect();
        }
    }
    let mut chord_matching = g1.chord_matching.clone();
    chord_matching.extend(g2.chord_matching.iter().map(|&h| h1 + h));

    // circles and coordinates
    let mut circles = Vec::new();
    let mut t = Vec::new();
    for (ci, c) in g1.circles.iter().enumerate() {
        let mut news: Vec<(Rat, usize)> = new_vertex
            .iter()
            .filter(|((arc, _), _)| lay1.vertex_circle[*arc] == ci)
            .map(|((arc, off), &id)| {
                let mut x = &raw1[*arc].1 - off;
                if x < Rat::zero() {
                    x += Rat::one();
                }
                (x, id)
            })
            .collect();
        news.sort();
        let mut marked = c.marked_vertex;
        if news.first().is_some_and(|(x, _)| x.is_zero()) {
            debug_assert!(marked.is_none());
            marked = Some(news.remove(0).1);
        }
        let mut free: Vec<(Rat, usize)> = Vec::new();
        let mut it = news.into_iter().peekable();
        for &v in &c.vertex_cycle {
            while it.peek().is_some_and(|(x, _)| *x < raw1[v].1) {
                free.push(it.next().expect("peeked"));
            }
            free.push((raw1[v].1.clone(), v));
        }
        free.extend(it);
        let mut ti = Vec::with_capacity(free.len() + 1);
        let mut prev = Rat::zero();
        for (x, _) in &free {
            ti.push(x - &prev);
            prev = x.clone();
        }
        ti.push(Rat::one() - prev);
        circles.push(InputCircle { marked_vertex: marked, vertex_cycle: free.into_iter().map(|f| f.1).collect() });
        t.push(ti);
    }
    for (i, c) in g2.circles.iter().enumerate() {
        if glued_circle[i].is_none() {
            circles.push(InputCircle {
                marked_vertex: c.marked_vertex.map(|v| vmap2[v]),
                vertex_cycle: c.vertex_cycle.iter().map(|&v| vmap2[v]).collect(),
            });
            t.push(x2.t[i].clone());
        }
    }

    // terminal edge of a spot and the edge leaving the gap after position `k` of its item list
    let terminal = |s: &Spot| match s {
        Spot::Corner { vertex, slot } => match g1.vertices[*vertex].get(*slot) {
            Some(&h) => DirectedEdge::Chord(h),
            None => DirectedEdge::Arc(*vertex),
        },
        Spot::Arc { .. } => DirectedEdge::Arc(spot_vertex(s)),
    };
    let leaving = |s: &Spot, after: Option<usize>| {
        let list = at_spot.get(s).map(Vec::as_slice).unwrap_or(&[]);
        let from = after.map_or(0, |k| k + 1);
        list[from.min(list.len())..]
            .iter()
            .find_map(|&k| items[k].chords.first().map(|&h| DirectedEdge::Chord(h)))
            .unwrap_or_else(|| terminal(s))
    };
    let split_arc = |arc: usize, offset: &Rat| -> (DirectedEdge, Rat) {
        let full = x1.arc_length(&lay1, &raw1, arc);
        let mut start = Rat::zero();
        let mut name = arc;
        let mut end = full.clone();
        for ((a, o), &id) in &new_vertex {
            if *a != arc {
                continue;
            }
            if o < offset {
                start = o.clone();
                name = id;
            } else {
                end = o.clone();
                break;
            }
        }
        (DirectedEdge::Arc(name), (offset - &start) / (end - start))
    };

    let mut outputs = Vec::new();
    let mut p = Vec::new();
    let glued_outputs: Vec<usize> = spec.pairs.iter().map(|&(o, _)| o).collect();
    for j in 0..g1.l() {
        if glued_outputs.contains(&j) {
            continue;
        }
        outputs.push(g1.outputs[j]);
        if let Some(q) = x1.p_of(j) {
            p.push(q.clone());
        }
    }
    let rename2 = |e: DirectedEdge| match e {
        DirectedEdge::Chord(h) => DirectedEdge::Chord(h1 + h),
        DirectedEdge::Arc(v) => DirectedEdge::Arc(vmap2[v]),
    };
    for place in places {
        match place {
            MarkPlace::Keep(m, q) => {
                outputs.push(match m {
                    OutputMarking::AtCorner(e) => OutputMarking::AtCorner(rename2(e)),
                    OutputMarking::InEdge(e) => OutputMarking::InEdge(rename2(e)),
                });
                p.extend(q);
            }
            MarkPlace::After(v) => {
                let k = item_of[v];
                let s = &items[k].spot;
                let pos = at_spot[s].iter().position(|&x| x == k).expect("item is listed at its spot");
                outputs.push(OutputMarking::AtCorner(leaving(s, Some(pos))));
            }
            MarkPlace::At(s, key) => {
                let list = at_spot.get(&s).map(Vec::as_slice).unwrap_or(&[]);
                let before = list.iter().take_while(|&&k| items[k].key < key).count();
                let after = before.checked_sub(1);
                outputs.push(OutputMarking::AtCorner(leaving(&s, after)));
            }
            MarkPlace::OnArc { arc, offset } => {
                let (e, q) = split_arc(arc, &offset);
                outputs.push(OutputMarking::InEdge(e));
                p.push(q);
            }
            MarkPlace::OnChord { half_chord, offset } => {
                outputs.push(OutputMarking::InEdge(DirectedEdge::Chord(half_chord)));
                p.push(offset);
            }
        }
    }

    let dtype = StringDiagramType { circles, vertices, chord_matching, outputs };
    if let Some(v) = dtype.validate().first() {
        return Err(Error::GluingDegenerate(format!("glued type is invalid: {}: {}", v.kind, v.detail)));
    }
    let got = dtype.diagram_signature()?;
    if got != sig {
        return Err(Error::GluingDegenerate(format!("glued signature {got}, expected {sig}")));
    }
    let glued = MetricStringDiagram::new(dtype.canonical(), t, p)?;
    let located = locate_cell(&glued)?;
    let slid_endpoints = chord_side.values().map(Vec::len).sum();
    Ok(GluedDiagram { glued, located, signature: sig, slid_endpoints, collapsed_marks })
}

#[allow(clippy::too_many_arguments)]
fn place_mark(
    cx: &Context<'_>,
    x2: &MetricStringDiagram,
    lay2: &Layout,
    raw2: &[(usize, Rat)],
    cycles: &[Cycle],
    dist: &[Option<(usize, Rat)>],
    glued_circle: &[Option<usize>],
    chord_side: &BTreeMap<usize, Vec<(Rat, usize)>>,
    j: usize,
) -> Result<(MarkPlace, bool)> {
    let g2 = &x2.dtype;
    let on_glued = |v: usize| glued_circle[lay2.vertex_circle[v]].is_some();
    let arc_len = |v: usize| x2.arc_length(lay2, raw2, v);
    let mut m = g2.outputs[j];
    let mut p = x2.p_of(j).cloned();
    if let (OutputMarking::InEdge(e), Some(q)) = (m, &p) {
        let zero_arc = matches!(e, DirectedEdge::Arc(v) if on_glued(v) && arc_len(v).is_zero());
        if q.is_zero() || zero_arc {
            m = OutputMarking::AtCorner(e);
            p = None;
        } else if q.is_one() {
            m = OutputMarking::AtCorner(g2.sigma(lay2, e));
            p = None;
        }
    }
    if let OutputMarking::AtCorner(DirectedEdge::Arc(v)) = m {
        if on_glued(v) && arc_len(v).is_zero() {
            m = OutputMarking::AtCorner(g2.sigma(lay2, DirectedEdge::Arc(v)));
        }
    }
    let mut collapsed = false;
    let place = match m {
        OutputMarking::AtCorner(DirectedEdge::Arc(v)) if on_glued(v) => MarkPlace::After(v),
        OutputMarking::InEdge(DirectedEdge::Arc(v)) if on_glued(v) => {
            let (r, ref dv) = dist[v].clone().expect("glued vertex has a distance");
            let c = &cycles[r];
            let q = p.expect("InEdge has p");
            let d = modulo(dv + &c.length * q * arc_len(v), &c.length);
            match cx.land(c, &d, 0) {
                Landing::At(s, k) => MarkPlace::At(s, k),
                Landing::OnArc { arc, offset } => MarkPlace::OnArc { arc, offset },
                Landing::OnChord { half_chord, offset } => {
                    let (s, backward) = cx.slide_target(half_chord);
                    let pts = chord_side.get(&half_chord);
                    collapsed = pts.is_some_and(|pts| {
                        if backward {
                            pts.iter().any(|(o, _)| *o >= offset)
                        } else {
                            pts.iter().any(|(o, _)| *o <= offset)
                        }
                    });
                    if collapsed {
                        MarkPlace::At(s, (if backward { 2 } else { 0 }, offset, Reverse(0)))
                    } else {
                        MarkPlace::OnChord { half_chord, offset }
                    }
                }
            }
        }
        other => MarkPlace::Keep(other, p),
    };
    Ok((place, collapsed))
}
