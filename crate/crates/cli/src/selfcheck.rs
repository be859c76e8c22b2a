//! Invariant suite over a handful of small signatures.

use std::path::PathBuf;

use log::info;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sdbar::homology::{ez_lemma_holds, lemma_shapes, Coeffs};
use sdbar::moduli::{cache_dir, load_or_build, Subdivision};
use sdbar::slideglue::{
    quotient_complex, sample_glue_well_definedness, slide_classes, GlueOptions, SlideClassPartition, SlidePolicy, Vary,
};
use sdbar::{CellComplex, Error, Signature};
use serde::Serialize;

use crate::commands::write_json;

pub const SELFCHECK_SCHEMA: &str = "selfcheck.v1";

pub const DEFAULT_SIGNATURES: [Signature; 4] =
    [Signature { g: 0, k: 2, l: 1 }, Signature { g: 0, k: 1, l: 2 }, Signature { g: 1, k: 1, l: 1 }, Signature { g: 0, k: 3, l: 1 }];

pub struct Options {
    pub only: Option<Signature>,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub subdivide: bool,
    pub slide_self: bool,
    pub samples: usize,
    pub seed: u64,
    pub strict: bool,
    pub inject_sign_fault: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    KnownFailure,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<Signature>,
    pub status: Status,
    pub detail: String,
    /// Exit status this check maps to when it gates.
    #[serde(skip)]
    code: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub seed: u64,
    pub samples: usize,
    pub strict: bool,
    pub slide_self: bool,
    pub checks: Vec<Check>,
    pub passed: bool,
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn push(&mut self, name: &str, sig: Option<Signature>, ok: bool, detail: String, code: u8) {
        let status = if ok { Status::Pass } else { Status::Fail };
        info!("{name} {}: {status:?}", sig.map(|s| s.to_string()).unwrap_or_default());
        self.checks.push(Check { name: name.into(), signature: sig, status, detail, code });
    }

    fn result<T>(&mut self, name: &str, sig: Option<Signature>, r: Result<T, Error>, ok: impl FnOnce(&T) -> (bool, String)) {
        match r {
            Ok(v) => {
                let (pass, detail) = ok(&v);
                self.push(name, sig, pass, detail, 1);
            }
            Err(e) => {
                let code = error_code(&e);
                self.push(name, sig, false, e.to_string(), code);
            }
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) => 2,
        Error::SignConsistency { .. } => 3,
        Error::QuotientConsistency(_) => 4,
        Error::GluingSpec(_) => 5,
        _ => 1,
    }
}

/// Flips the sign of one face of the first cell with a nonzero face in degree ≥ 2.
fn inject_fault(cx: &mut CellComplex) {
    if let Some(c) = cx.cells.iter_mut().find(|c| c.dim >= 2 && c.faces.iter().any(|f| f.degree != 0)) {
        let f = c.faces.iter_mut().find(|f| f.degree != 0).expect("checked");
        f.degree = -f.degree;
    }
}

fn per_signature(suite: &mut Suite, opts: &Options, sig: Signature) -> Option<(CellComplex, SlideClassPartition)> {
    let dir = cache_dir(opts.cache_dir.as_deref());
    let mut cx = match load_or_build(sig, dir.as_deref()) {
        Ok((cx, _)) => cx,
        Err(e) => {
            let code = error_code(&e);
            suite.push("build", Some(sig), false, e.to_string(), code);
            return None;
        }
    };
    if opts.inject_sign_fault {
        inject_fault(&mut cx);
    }
    let s = Some(sig);
    suite.result("d_squared", s, cx.check_d_squared(), |_| (true, format!("f-vector {:?}", cx.f_vector())));
    let hz = cx.homology(Coeffs::Z);
    suite.result("euler", s, hz.clone(), |h| {
        let (a, b) = (cx.euler_characteristic(), h.euler_characteristic());
        (a == b, format!("cells {a}, Betti {b}"))
    });
    let hq = cx.homology(Coeffs::Q);
    let red = cx.rational_betti();
    suite.result("snf_vs_reduction", s, hz.and_then(|z| Ok((z, hq?, red?))), |(z, q, r)| {
        let ok = z.betti() == q.betti() && q.betti() == *r;
        (ok, format!("Z free ranks {:?}, Q {:?}, reduction {:?}", z.betti(), q.betti(), r))
    });
    if opts.subdivide {
        let sd = Subdivision::new(&cx).and_then(|sd| Ok((sd.len(), sd.rational_betti()?, cx.homology(Coeffs::Q)?.betti())));
        suite.result("subdivision", s, sd, |(n, b, base)| (b == base, format!("{n} cells, Betti {b:?} against {base:?}")));
    }
    let policy = SlidePolicy { slide_self: opts.slide_self };
    let q = slide_classes(&cx, policy).and_then(|cls| {
        let q = quotient_complex(&cx, &cls)?;
        let b = q.homology(Coeffs::Q)?.betti();
        Ok((cls, q.f_vector(), b))
    });
    let mut classes = None;
    match q {
        Ok((cls, f, b)) => {
            let ok = b.first() == Some(&1);
            let detail = format!("{} classes, f-vector {f:?}, Betti over Q {b:?}", cls.num_classes());
            suite.push("quotient_connected", s, ok, detail, 4);
            classes = Some(cls);
        }
        Err(e) => {
            let code = error_code(&e);
            suite.push("quotient_connected", s, false, e.to_string(), code);
        }
    }
    classes.map(|c| (cx, c))
}

fn ez_sweep(suite: &mut Suite) {
    let shapes = lemma_shapes(4, 3);
    let bad: Vec<String> =
        shapes.iter().filter(|(j, n)| !ez_lemma_holds(j, *n, 0)).map(|(j, n)| format!("{j:?}×{n}")).collect();
    let detail = if bad.is_empty() { format!("{} shapes", shapes.len()) } else { format!("fails for {}", bad.join(", ")) };
    suite.push("ez_boundary", None, bad.is_empty(), detail, 1);
}

fn glue_checks(suite: &mut Suite, opts: &Options, a: &(CellComplex, SlideClassPartition), b: &(CellComplex, SlideClassPartition), t: &(CellComplex, SlideClassPartition)) {
    let sig = Some(t.0.signature);
    let label = format!("{}#{}", a.0.signature, b.0.signature);
    for (vary, name, known) in [(Vary::SECOND, "glue_vary_second", false), (Vary::FIRST, "glue_vary_first", true)] {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let r = sample_glue_well_definedness(
            (&a.0, &a.1),
            (&b.0, &b.1),
            (&t.0, &t.1),
            1,
            opts.samples,
            vary,
            GlueOptions::default(),
            &mut rng,
        );
        let name = format!("{name} {label}");
        match r {
            Ok(cases) => {
                let bad = cases.iter().filter(|c| !c.agrees).count();
                let detail = format!("{bad}/{} samples land in different classes", cases.len());
                suite.push(&name, sig, bad == 0, detail, 1);
                if known && bad > 0 && !opts.strict {
                    suite.checks.last_mut().expect("just pushed").status = Status::KnownFailure;
                }
            }
            Err(e) => {
                let code = error_code(&e);
                suite.push(&name, sig, false, e.to_string(), code);
            }
        }
    }
}

pub fn run(opts: &Options) -> anyhow::Result<u8> {
    let mut suite = Suite { checks: Vec::new() };
    let sigs: Vec<Signature> = match opts.only {
        Some(s) => {
            s.check()?;
            vec![s]
        }
        None => DEFAULT_SIGNATURES.to_vec(),
    };
    let mut built = Vec::new();
    for &sig in &sigs {
        built.push((sig, per_signature(&mut suite, opts, sig)));
    }
    ez_sweep(&mut suite);
    if opts.only.is_none() && opts.samples > 0 && !opts.inject_sign_fault {
        let find = |s: Signature| built.iter().find(|(t, _)| *t == s).and_then(|(_, c)| c.as_ref());
        let target_sig = Signature::new(1, 2, 1);
        let target = per_signature(&mut suite, opts, target_sig);
        if let (Some(t), Some(a), Some(b)) = (target.as_ref(), find(Signature::new(1, 1, 1)), find(Signature::new(0, 2, 1))) {
            glue_checks(&mut suite, opts, a, b, t);
            glue_checks(&mut suite, opts, b, a, t);
        }
    }
    let passed = suite.checks.iter().all(|c| c.status != Status::Fail);
    let code = suite.checks.iter().find(|c| c.status == Status::Fail).map_or(0, |c| c.code);
    let report = Report {
        schema: SELFCHECK_SCHEMA.into(),
        seed: opts.seed,
        samples: opts.samples,
        strict: opts.strict,
        slide_self: opts.slide_self,
        checks: suite.checks,
        passed,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(out) = &opts.out {
        write_json(out, &report)?;
    }
    Ok(code)
}
