//! Slide moves: one chord endpoint travels along an adjacent chord to that
//! chord's far end, staying on the same side of it.

use log::debug;
use serde::Serialize;

use crate::diagram::{Signature, StringDiagramType};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SlidePolicy {
    /// Allow a chord whose two ends are adjacent at one vertex to slide over itself.
    pub slide_self: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RejectedSlide {
    pub vertex: usize,
    pub moving: usize,
    pub along: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default)]
pub struct SlideNeighbors {
    pub neighbors: Vec<StringDiagramType>,
    pub rejected: Vec<RejectedSlide>,
}

/// Moves half-chord `e` along the half-chord `f` next to it at the same vertex.
/// Output markings keep their edge names.
pub fn slide(g: &StringDiagramType, e: usize, f: usize) -> StringDiagramType {
    let lay = g.layout().expect("valid type");
    let v = lay.chord_vertex[e];
    let (se, sf) = (lay.chord_slot[e], lay.chord_slot[f]);
    let mut h = g.clone();
    if g.chord_matching[e] == f {
        h.vertices[v].swap(se, sf);
        return h;
    }
    let far = g.chord_matching[f];
    let w = lay.chord_vertex[far];
    h.vertices[v].remove(se);
    let at = h.vertices[w].iter().position(|&c| c == far).expect("far end sits at w");
    if se < sf {
        h.vertices[w].insert(at + 1, e);
    } else {
        h.vertices[w].insert(at, e);
    }
    h
}

/// All slide neighbors of `g`, canonicalized and deduplicated. Moves that break
/// the one-marking-per-output rule or change the signature are rejected.
pub fn slide_neighbors(g: &StringDiagramType, policy: SlidePolicy) -> SlideNeighbors {
    let mut out = SlideNeighbors::default();
    let Ok(sig) = g.diagram_signature() else { return out };
    for (v, list) in g.vertices.iter().enumerate() {
        for w in list.windows(2) {
            for (e, f) in [(w[0], w[1]), (w[1], w[0])] {
                if g.chord_matching[e] == f && (!policy.slide_self || e > f) {
                    continue;
                }
                match check(&slide(g, e, f), sig) {
                    Ok(h) => out.neighbors.push(h),
                    Err(reason) => {
                        debug!("slide of {e} along {f} at vertex {v} rejected: {reason}");
                        out.rejected.push(RejectedSlide { vertex: v, moving: e, along: f, reason });
                    }
                }
            }
        }
    }
    out.neighbors.sort();
    out.neighbors.dedup();
    out
}

fn check(h: &StringDiagramType, sig: Signature) -> std::result::Result<StringDiagramType, String> {
    if let Some(v) = h.validate().first() {
        return Err(format!("{}: {}", v.kind, v.detail));
    }
    match h.diagram_signature() {
        Ok(s) if s == sig => Ok(h.canonical()),
        Ok(s) => Err(format!("signature changes to {s}")),
        Err(e) => Err(e.to_string()),
    }
}
