//! Random metric points and the sampled well-definedness check for gluing.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::glue::{glue_metric, GlueOptions, GluingSpec};
use super::quotient::{type_index, SlideClassPartition};
use crate::diagram::{MetricStringDiagram, StringDiagramType};
use crate::error::{Error, Result};
use crate::moduli::CellComplex;
use crate::rational::{rat, Rat};

/// A point with all coordinates strictly inside the cell of `g`.
pub fn random_interior_point<R: Rng>(g: &StringDiagramType, rng: &mut R) -> MetricStringDiagram {
    let (n, iv) = g.shape();
    let t = n
        .iter()
        .map(|&ni| {
            let w: Vec<i64> = (0..=ni).map(|_| rng.gen_range(1..=24)).collect();
            let s: i64 = w.iter().sum();
            w.into_iter().map(|a| rat(a, s)).collect()
        })
        .collect();
    let p = (0..iv)
        .map(|_| {
            let den = rng.gen_range(2..=24);
            rat(rng.gen_range(1..den), den)
        })
        .collect::<Vec<Rat>>();
    MetricStringDiagram { dtype: g.clone(), t, p }
}

/// `s` random pairs, injective in both coordinates.
pub fn random_spec<R: Rng>(outputs: usize, inputs: usize, s: usize, rng: &mut R) -> GluingSpec {
    let mut o: Vec<usize> = (0..outputs).collect();
    let mut i: Vec<usize> = (0..inputs).collect();
    o.shuffle(rng);
    i.shuffle(rng);
    GluingSpec { pairs: o.into_iter().zip(i).take(s).collect() }
}

/// Which factors are replaced by another member of their slide class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Vary {
    pub first: bool,
    pub second: bool,
}

impl Vary {
    pub const BOTH: Vary = Vary { first: true, second: true };
    pub const FIRST: Vary = Vary { first: true, second: false };
    pub const SECOND: Vary = Vary { first: false, second: true };
}

#[derive(Clone, Debug, Serialize)]
pub struct WellDefinedCase {
    pub first: (String, String),
    pub second: (String, String),
    pub pairs: Vec<(usize, usize)>,
    pub classes: (usize, usize),
    pub agrees: bool,
}

/// Picks two members of the same class, preferring classes with more than one member.
fn pick_pair<R: Rng>(cls: &SlideClassPartition, rng: &mut R) -> (usize, usize) {
    let multi: Vec<&Vec<usize>> = cls.members.iter().filter(|m| m.len() > 1).collect();
    let pool: Vec<&Vec<usize>> = if multi.is_empty() { cls.members.iter().collect() } else { multi };
    let m = pool.choose(rng).expect("complex has cells");
    let a = *m.choose(rng).expect("class is nonempty");
    let b = *m.choose(rng).expect("class is nonempty");
    (a, b)
}

/// Glues slide-equivalent pairs `x₁ ∼ x₁′`, `x₂ ∼ x₂′` at shared random coordinates
/// and reports whether both results fall in one slide class of `target`. A
/// factor not selected by `vary` is kept fixed.
#[allow(clippy::too_many_arguments)]
pub fn sample_glue_well_definedness<R: Rng>(
    (cx1, cls1): (&CellComplex, &SlideClassPartition),
    (cx2, cls2): (&CellComplex, &SlideClassPartition),
    (target, tcls): (&CellComplex, &SlideClassPartition),
    s: usize,
    samples: usize,
    vary: Vary,
    opts: GlueOptions,
    rng: &mut R,
) -> Result<Vec<WellDefinedCase>> {
    let index = type_index(target);
    let class_in_target = |x: &MetricStringDiagram| -> Result<usize> {
        let g = x.dtype.canonical();
        index
            .get(&g)
            .map(|&c| tcls.class_of[c])
            .ok_or_else(|| Error::EnumerationIncomplete(String::from_utf8_lossy(&g.canonical_key()).into_owned()))
    };
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (a, mut a2) = pick_pair(cls1, rng);
        let (b, mut b2) = pick_pair(cls2, rng);
        if !vary.first {
            a2 = a;
        }
        if !vary.second {
            b2 = b;
        }
        let spec = random_spec(cx1.signature.l, cx2.signature.k, s, rng);
        let x1 = random_interior_point(&cx1.cells[a].dtype, rng);
        let x2 = random_interior_point(&cx2.cells[b].dtype, rng);
        let x1b = MetricStringDiagram { dtype: cx1.cells[a2].dtype.clone(), ..x1.clone() };
        let x2b = MetricStringDiagram { dtype: cx2.cells[b2].dtype.clone(), ..x2.clone() };
        let r1 = glue_metric(&x1, &x2, &spec, opts)?;
        let r2 = glue_metric(&x1b, &x2b, &spec, opts)?;
        let (c1, c2) = (class_in_target(&r1.located)?, class_in_target(&r2.located)?);
        out.push(WellDefinedCase {
            first: (cx1.cells[a].key(), cx2.cells[b].key()),
            second: (cx1.cells[a2].key(), cx2.cells[b2].key()),
            pairs: spec.pairs,
            classes: (c1, c2),
            agrees: c1 == c2,
        });
    }
    Ok(out)
}
