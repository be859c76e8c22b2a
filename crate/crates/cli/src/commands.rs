use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use log::info;
use sdbar::diagram::DiagramJson;
use sdbar::homology::{ClassStats, Coeffs, ComplexKind, HomologyJson, HomologySummary, SubdivisionCheck};
use sdbar::moduli::{cache_dir, load_or_build, subdivide, ComplexFlags, ComplexJson, Provenance, Subdivision};
use sdbar::slideglue::{parse_spec, quotient_complex, slide_classes, type_index, GlueOptions, GluingJson, SlidePolicy};
use sdbar::CellComplex;

use crate::config::RunConfig;

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn load(cfg: &RunConfig) -> anyhow::Result<CellComplex> {
    let dir = cache_dir(cfg.cache_dir.as_deref());
    let t = Instant::now();
    let (cx, prov) = load_or_build(cfg.signature, dir.as_deref())?;
    let how = match (prov, &dir) {
        (Provenance::Cached, _) => "cache hit",
        (Provenance::Built, Some(_)) => "cache miss",
        (Provenance::Built, None) => "no cache",
    };
    info!("SD̄{} ready in {:.2?}", cfg.signature, t.elapsed());
    println!("complex {}: {how}", cfg.signature);
    Ok(cx)
}

fn print_stats(cx: &CellComplex) {
    println!("f-vector {:?}", cx.f_vector());
    println!("dimension {}, top cells {}, regular {}", cx.dim(), cx.top_cells().len(), cx.regular);
    println!("euler characteristic {}", cx.euler_characteristic());
}

fn print_homology(h: &HomologySummary) {
    for d in &h.degrees {
        if d.torsion.is_empty() {
            println!("H_{} = {}^{}", d.degree, h.coeffs, d.betti);
        } else {
            let t: Vec<String> = d.torsion.iter().map(|t| format!("Z/{t}")).collect();
            println!("H_{} = {}^{} + {}", d.degree, h.coeffs, d.betti, t.join(" + "));
        }
    }
}

pub fn enumerate(cfg: &RunConfig) -> anyhow::Result<u8> {
    cfg.validate()?;
    let base = load(cfg)?;
    let cx = if cfg.subdivide {
        let t = Instant::now();
        let sd = subdivide(&base)?;
        info!("subdivided in {:.2?}", t.elapsed());
        println!("subdivided: {} cells", sd.num_cells());
        sd
    } else {
        base
    };
    print_stats(&cx);
    if let Some(out) = &cfg.out {
        write_json(out, &ComplexJson::from_complex(&cx, ComplexFlags { subdivided: cfg.subdivide })?)?;
    }
    Ok(0)
}

pub fn homology(cfg: &RunConfig) -> anyhow::Result<u8> {
    cfg.validate()?;
    let base = load(cfg)?;
    let (cx, stats) = if cfg.quotient {
        let cls = slide_classes(&base, cfg.policy())?;
        let q = quotient_complex(&base, &cls)?;
        let stats = ClassStats {
            cells: base.num_cells(),
            classes: cls.num_classes(),
            face_unions: cls.face_unions,
            rejected_slides: cls.rejected.len(),
            slide_self: cfg.slide_self,
        };
        println!(
            "slide classes: {} cells in {} classes ({} face unions, {} rejected slides)",
            stats.cells, stats.classes, stats.face_unions, stats.rejected_slides
        );
        (q, Some(stats))
    } else {
        (base, None)
    };
    let kind = if cfg.quotient { ComplexKind::Quotient } else { ComplexKind::Base };
    println!("f-vector {:?}", cx.f_vector());
    let h = cx.homology(cfg.coeffs)?;
    print_homology(&h);
    let mut doc = HomologyJson::new(cfg.signature, kind, cx.f_vector(), h.clone());
    doc.classes = stats;
    if cfg.subdivide {
        let rational = match cfg.coeffs {
            Coeffs::Z | Coeffs::Q => h.betti(),
            Coeffs::Fp { .. } => cx.homology(Coeffs::Q)?.betti(),
        };
        let t = Instant::now();
        let sd = Subdivision::new(&cx)?;
        let betti = sd.rational_betti()?;
        let agrees = betti == rational;
        info!("subdivision Betti numbers in {:.2?}", t.elapsed());
        println!(
            "subdivision: {} cells, Betti over Q {:?}, oracle {}",
            sd.len(),
            betti,
            if agrees { "agrees" } else { "DISAGREES" }
        );
        doc.subdivision = Some(SubdivisionCheck { cells: sd.len(), betti, agrees });
    }
    if let Some(out) = &cfg.out {
        write_json(out, &doc)?;
    }
    Ok(if doc.subdivision.as_ref().is_some_and(|s| !s.agrees) { 1 } else { 0 })
}

pub struct GlueArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    pub spec: PathBuf,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub slide_second: bool,
    pub classes: bool,
    pub slide_self: bool,
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn glue(a: &GlueArgs) -> anyhow::Result<u8> {
    let first = DiagramJson::parse(&read(&a.first)?).with_context(|| a.first.display().to_string())?;
    let second = DiagramJson::parse(&read(&a.second)?).with_context(|| a.second.display().to_string())?;
    let spec = parse_spec(&read(&a.spec)?)?;
    let opts = GlueOptions { slide_to_second_endpoint: a.slide_second };
    let mut doc = GluingJson::request(first, second, spec, opts);
    doc.validate()?;
    let r = doc.run()?;
    let canon = r.located.dtype.canonical();
    let key = String::from_utf8_lossy(&canon.canonical_key()).into_owned();
    println!("glued signature {}", r.signature);
    println!("located cell {key}");
    if r.slid_endpoints > 0 {
        println!("slid endpoints {}, collapsed marks {}", r.slid_endpoints, r.collapsed_marks);
    }
    if a.classes {
        let dir = cache_dir(a.cache_dir.as_deref());
        let (cx, _) = load_or_build(r.signature, dir.as_deref())?;
        let cls = slide_classes(&cx, SlidePolicy { slide_self: a.slide_self })?;
        let index = type_index(&cx);
        let cell = *index
            .get(&canon)
            .ok_or_else(|| sdbar::Error::EnumerationIncomplete(key.clone()))?;
        let rep = cx.cells[cls.representative[cls.class_of[cell]]].key();
        println!("class representative {rep}");
        if let Some(res) = doc.result.as_mut() {
            res.class_representative = Some(rep);
        }
    }
    if let Some(out) = &a.out {
        write_json(out, &doc)?;
    }
    Ok(0)
}
