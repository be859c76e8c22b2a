use std::path::Path;
use std::process::{Command, Output};

use rand_chacha::rand_core::SeedableRng;
use sdbar::diagram::DiagramJson;
use sdbar::homology::HomologyJson;
use sdbar::moduli::ComplexJson;
use sdbar::slideglue::{random_interior_point, GluingJson};
use sdbar::{build_complex, Signature};

fn sdbar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdbar")).args(args).env_remove("SDBAR_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn enumerate_writes_a_valid_complex() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = sdbar(&["enumerate", "--g", "0", "--k", "2", "--l", "1", "--out", path(&out)]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("f-vector [4, 12, 12, 4]"));
    let j = ComplexJson::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(j.f_vector, vec![4, 12, 12, 4]);
}

#[test]
fn enumerate_subdivided() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = sdbar(&["enumerate", "--g", "0", "--k", "2", "--l", "1", "--subdivide", "--out", path(&out)]);
    assert!(o.status.success(), "{o:?}");
    let j = ComplexJson::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(j.flags.subdivided);
    assert_eq!(j.cells.len(), 256);
}

#[test]
fn cache_dir_hits_on_second_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["enumerate", "--g", "0", "--k", "2", "--l", "1", "--cache-dir", path(dir.path())];
    assert!(stdout(&sdbar(&args)).contains("cache miss"));
    assert!(stdout(&sdbar(&args)).contains("cache hit"));
}

#[test]
fn homology_json_over_each_ring() {
    let dir = tempfile::tempdir().unwrap();
    for (ring, extra) in [("z", None), ("q", None), ("fp", Some("3"))] {
        let out = dir.path().join(format!("h-{ring}.json"));
        let mut args = vec!["homology", "--g", "1", "--k", "1", "--l", "1", "--coeffs", ring, "--out", path(&out)];
        if let Some(p) = extra {
            args.extend(["--p", p]);
        }
        let o = sdbar(&args);
        assert!(o.status.success(), "{o:?}");
        let h = HomologyJson::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(h.betti(), vec![1, 2, 1, 0, 0, 0]);
    }
}

#[test]
fn homology_subdivision_oracle_agrees() {
    let o = sdbar(&["homology", "--g", "0", "--k", "1", "--l", "2", "--subdivide"]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("oracle agrees"));
}

#[test]
fn quotient_is_connected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.json");
    let o = sdbar(&["quotient", "--g", "1", "--k", "1", "--l", "1", "--out", path(&out)]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("slide classes"));
    let h = HomologyJson::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(h.betti()[0], 1);
    assert!(h.classes.is_some());
}

#[test]
fn usage_and_domain_errors_exit_2() {
    assert_eq!(sdbar(&["homology", "--g", "0", "--k", "1", "--l", "1"]).status.code(), Some(2));
    assert_eq!(sdbar(&["homology", "--g", "0", "--k", "0", "--l", "3"]).status.code(), Some(2));
    assert_eq!(sdbar(&["homology", "--g", "0", "--k", "2", "--l", "1", "--coeffs", "fp", "--p", "6"]).status.code(), Some(2));
    assert_eq!(sdbar(&["homology", "--g", "0", "--k", "2", "--l", "1", "--coeffs", "fp"]).status.code(), Some(2));
    assert_eq!(sdbar(&["homology", "--g", "0", "--k", "2", "--l", "1", "--quotient", "--subdivide"]).status.code(), Some(2));
    assert_eq!(sdbar(&["homology", "--g", "x"]).status.code(), Some(2));
}

#[test]
fn selfcheck_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = sdbar(&["selfcheck", "--g", "0", "--k", "2", "--l", "1", "--out", path(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let v: serde_json::Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn injected_sign_fault_exits_3() {
    let o = sdbar(&["selfcheck", "--g", "0", "--k", "2", "--l", "1", "--inject-sign-fault"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
}

fn write_point(dir: &Path, name: &str, sig: Signature, seed: u64) -> std::path::PathBuf {
    let cx = build_complex(sig).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let x = random_interior_point(&cx.cells[cx.top_cells()[0]].dtype, &mut rng);
    let p = dir.join(name);
    std::fs::write(&p, DiagramJson::from_metric(&x).to_string_pretty()).unwrap();
    p
}

#[test]
fn glue_two_diagrams() {
    let dir = tempfile::tempdir().unwrap();
    let x1 = write_point(dir.path(), "x1.json", Signature::new(0, 2, 1), 5);
    let x2 = write_point(dir.path(), "x2.json", Signature::new(0, 2, 1), 6);
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, r#"{"pairs": [[0, 1]]}"#).unwrap();
    let out = dir.path().join("g.json");
    let o = sdbar(&["glue", path(&x1), path(&x2), path(&spec), "--out", path(&out)]);
    assert!(o.status.success(), "{o:?}");
    let s = stdout(&o);
    assert!(s.contains("glued signature (0,3,1)"), "{s}");
    assert!(s.contains("class representative"));
    let g = GluingJson::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let r = g.result.unwrap();
    assert_eq!(r.signature, Signature::new(0, 3, 1));
    assert!(r.class_representative.is_some());

    let o = sdbar(&["glue", path(&x1), path(&x2), path(&spec), "--slide-second", "--no-classes"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("class representative"));
}

#[test]
fn bad_gluing_spec_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let x1 = write_point(dir.path(), "x1.json", Signature::new(0, 2, 1), 5);
    let x2 = write_point(dir.path(), "x2.json", Signature::new(0, 2, 1), 6);
    let spec = dir.path().join("spec.json");
    for body in [r#"{"pairs": [[3, 0]]}"#, r#"{"pairs": []}"#, r#"{"pairs": "no"}"#] {
        std::fs::write(&spec, body).unwrap();
        let o = sdbar(&["glue", path(&x1), path(&x2), path(&spec)]);
        assert_eq!(o.status.code(), Some(5), "{body}");
    }
}
