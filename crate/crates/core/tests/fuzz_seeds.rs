//! The fuzz corpus seeds are accepted by their decoders.

use std::path::PathBuf;

use sdbar::diagram::DiagramJson;
use sdbar::homology::HomologyJson;
use sdbar::moduli::ComplexJson;
use sdbar::slideglue::{parse_spec, GluingJson};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let s = std::fs::read_to_string(&p).unwrap();
            (p, s)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn every_seed_decodes() {
    for (p, s) in seeds("diagram_json") {
        DiagramJson::parse(&s).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
    for (p, s) in seeds("complex_json") {
        ComplexJson::parse(&s).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
    for (p, s) in seeds("homology_json") {
        HomologyJson::parse(&s).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
    for (p, s) in seeds("gluing_json") {
        GluingJson::parse(&s).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
    for (p, s) in seeds("gluing_spec") {
        parse_spec(&s).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
}
