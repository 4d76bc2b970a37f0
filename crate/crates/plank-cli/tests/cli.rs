//! End-to-end tests of the plankcheck binary: exit codes, report text,
//! document round trips, tamper rejection, and byte-level determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

// Frozen digest of the rational hunter scene document; catches accidental
// drift in serialization or canonicalization.
const HUNTER_SHA256: &str = "e57de841d628d444d246948d58a21e721d513ea2361db0a8926f0fcf24418138";

fn workdir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plankcheck"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn hunter_pipeline_is_exact_and_orderless() {
    let dir = workdir("hunter");
    let gen = run(&dir, &["generate", "hunter", "--backend", "rational", "--out", "hunter.json"]);
    assert_eq!(code(&gen), 0, "{}", stderr(&gen));
    let bytes = fs::read(dir.join("hunter.json")).unwrap();
    assert_eq!(plank_cli::doc::sha256_hex(&bytes), HUNTER_SHA256);

    let again = run(&dir, &["generate", "hunter", "--backend", "rational", "--out", "h2.json"]);
    assert_eq!(code(&again), 0);
    assert_eq!(fs::read(dir.join("h2.json")).unwrap(), bytes);

    let check = run(&dir, &["check", "hunter.json", "--backend", "rational"]);
    assert_eq!(code(&check), 0, "{}", stderr(&check));
    assert!(stdout(&check).contains("covered"));
    assert!(!stdout(&check).contains("uncovered"));

    let float_check = run(&dir, &["check", "hunter.json", "--backend", "float"]);
    assert_eq!(code(&float_check), 0, "rational strings parse in the float backend");

    let sum = run(&dir, &["sum", "hunter.json", "--backend", "rational"]);
    assert_eq!(code(&sum), 0);
    let text = stdout(&sum);
    assert_eq!(text.matches("ratio = 1/3").count(), 3, "{text}");
    assert!(text.contains("bang sum = 1\n"), "{text}");

    let certify = run(&dir, &["certify", "hunter.json", "--backend", "rational"]);
    assert_eq!(code(&certify), 1);
    assert!(stdout(&certify).contains("no peeling order exists"), "{}", stdout(&certify));
}

#[test]
fn gapped_slabs_yield_an_uncovered_witness() {
    let dir = workdir("gap");
    fs::write(
        dir.join("gap.json"),
        r#"{
  "version": 1,
  "dim": 2,
  "body": { "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]] },
  "planks": [
    { "normal": [1, 0], "lo": 0.0, "hi": 0.4 },
    { "normal": [1, 0], "lo": 0.5, "hi": 1.0 }
  ]
}
"#,
    )
    .unwrap();
    let check = run(&dir, &["check", "gap.json"]);
    assert_eq!(code(&check), 1);
    let text = stdout(&check);
    assert!(text.contains("uncovered"), "{text}");
    assert!(text.contains("witness: (0.45"), "{text}");
    assert!(text.contains("cell +-"), "{text}");

    let certify = run(&dir, &["certify", "gap.json"]);
    assert_eq!(code(&certify), 1);
    assert!(stdout(&certify).contains("do not cover"), "{}", stdout(&certify));
}

#[test]
fn malformed_documents_exit_two() {
    let dir = workdir("malformed");
    fs::write(dir.join("junk.json"), "{\"version\": 1, \"dim\":").unwrap();
    for cmd in ["check", "sum", "certify", "render"] {
        let out = run(&dir, &[cmd, "junk.json"]);
        assert_eq!(code(&out), 2, "{cmd} on junk");
        assert!(stderr(&out).contains("malformed"), "{cmd}: {}", stderr(&out));
    }
    fs::write(
        dir.join("future.json"),
        r#"{"version": 9, "dim": 2, "body": {"halfspaces": []}, "planks": []}"#,
    )
    .unwrap();
    let out = run(&dir, &["check", "future.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("version"), "{}", stderr(&out));

    let missing = run(&dir, &["check", "nothing.json"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn slab_pair_certificates_survive_verification_but_not_tampering() {
    let dir = workdir("slabpair");
    let gen = run(
        &dir,
        &["generate", "slabs", "--k", "2", "--cuts", "0.5", "--backend", "rational", "--out", "s.json"],
    );
    assert_eq!(code(&gen), 0, "{}", stderr(&gen));

    let certify = run(&dir, &["certify", "s.json", "--backend", "rational", "--out", "s.cert.json"]);
    assert_eq!(code(&certify), 0, "{}", stderr(&certify));
    let text = stdout(&certify);
    assert!(text.contains("chain bound = 1\n"), "{text}");
    assert!(text.contains("verdict: verified"), "{text}");

    let verify = run(&dir, &["verify", "s.cert.json", "--scene", "s.json", "--backend", "rational"]);
    assert_eq!(code(&verify), 0, "{}", stdout(&verify));
    assert!(stdout(&verify).contains("certificate ok"), "{}", stdout(&verify));

    // Cross-backend: float tolerances absorb the exact rational values.
    let float_verify = run(&dir, &["verify", "s.cert.json", "--scene", "s.json", "--backend", "float"]);
    assert_eq!(code(&float_verify), 0, "{}", stdout(&float_verify));
    assert!(stdout(&float_verify).contains("note:"), "{}", stdout(&float_verify));

    // One numeric field flipped: every such change must be caught.
    let mut doc: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.join("s.cert.json")).unwrap()).unwrap();
    doc["steps"][0]["widths_before"][0]["width"] = serde_json::json!("5/8");
    fs::write(dir.join("bad.cert.json"), serde_json::to_vec_pretty(&doc).unwrap()).unwrap();
    let tampered = run(&dir, &["verify", "bad.cert.json", "--scene", "s.json", "--backend", "rational"]);
    assert_eq!(code(&tampered), 1);
    let text = stdout(&tampered);
    assert!(text.contains("check failed"), "{text}");
    assert!(text.contains("certificate rejected"), "{text}");

    // Any byte-level change to the scene file breaks the digest binding.
    let mut scene_bytes = fs::read(dir.join("s.json")).unwrap();
    scene_bytes.push(b'\n');
    fs::write(dir.join("s2.json"), &scene_bytes).unwrap();
    let moved = run(&dir, &["verify", "s.cert.json", "--scene", "s2.json", "--backend", "rational"]);
    assert_eq!(code(&moved), 1);
    assert!(stdout(&moved).contains("digest"), "{}", stdout(&moved));
}

#[test]
fn explicit_orders_are_validated() {
    let dir = workdir("orders");
    let gen = run(
        &dir,
        &["generate", "slabs", "--k", "3", "--cuts", "0.25,0.5", "--backend", "rational", "--out", "s3.json"],
    );
    assert_eq!(code(&gen), 0, "{}", stderr(&gen));

    let sum = run(&dir, &["sum", "s3.json", "--backend", "rational"]);
    assert!(stdout(&sum).contains("bang sum = 1\n"), "{}", stdout(&sum));

    let good = run(&dir, &["certify", "s3.json", "--backend", "rational", "--order", "0,1,2"]);
    assert_eq!(code(&good), 0, "{}", stdout(&good));

    // Peeling the middle slab first splits the residual.
    let split = run(&dir, &["certify", "s3.json", "--backend", "rational", "--order", "1,0,2"]);
    assert_eq!(code(&split), 1);
    assert!(
        stdout(&split).contains("residual at step 0 is not convex"),
        "{}",
        stdout(&split)
    );

    let dup = run(&dir, &["certify", "s3.json", "--backend", "rational", "--order", "0,0,1"]);
    assert_eq!(code(&dup), 1);
    assert!(stdout(&dup).contains("permutation"), "{}", stdout(&dup));
}

#[test]
fn search_budget_exhaustion_is_an_operational_error() {
    let dir = workdir("budget");
    let gen = run(&dir, &["generate", "random", "--dim", "2", "--planks", "5", "--seed", "3", "--out", "r.json"]);
    assert_eq!(code(&gen), 0, "{}", stderr(&gen));
    let out = run(&dir, &["certify", "r.json", "--search-budget", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("budget"), "{}", stderr(&out));
}

#[test]
fn random_scenes_flow_end_to_end_in_float() {
    let dir = workdir("randomflow");
    let gen = run(&dir, &["generate", "random", "--seed", "42", "--dim", "2", "--planks", "4", "--out", "r.json"]);
    assert_eq!(code(&gen), 0, "{}", stderr(&gen));
    let bytes = fs::read(dir.join("r.json")).unwrap();

    // Emitting a parsed document reproduces the bytes exactly.
    let parsed: plank_cli::doc::SceneDocument = serde_json::from_slice(&bytes).unwrap();
    let scene = plank_cli::doc::doc_to_scene::<f64>(&parsed).unwrap();
    assert_eq!(plank_cli::doc::to_json_bytes(&plank_cli::doc::scene_to_doc(&scene)), bytes);

    let gen2 = run(&dir, &["generate", "random", "--seed", "42", "--dim", "2", "--planks", "4", "--out", "r2.json"]);
    assert_eq!(code(&gen2), 0);
    assert_eq!(fs::read(dir.join("r2.json")).unwrap(), bytes);

    let check = run(&dir, &["check", "r.json"]);
    assert_eq!(code(&check), 0, "{}", stdout(&check));

    let certify = run(&dir, &["certify", "r.json", "--out", "r.cert.json"]);
    assert_eq!(code(&certify), 0, "{}", stdout(&certify));

    let verify = run(&dir, &["verify", "r.cert.json", "--scene", "r.json"]);
    assert_eq!(code(&verify), 0, "{}", stdout(&verify));
}

#[test]
fn sum_prints_inf_for_flat_directions() {
    let dir = workdir("flat");
    fs::write(
        dir.join("flat.json"),
        r#"{
  "version": 1,
  "dim": 2,
  "body": {
    "halfspaces": [
      { "normal": [1, 0], "offset": 1 },
      { "normal": [-1, 0], "offset": 0 },
      { "normal": [0, 1], "offset": 0 },
      { "normal": [0, -1], "offset": 0 }
    ]
  },
  "planks": [{ "normal": [0, 1], "lo": -1, "hi": 1 }]
}
"#,
    )
    .unwrap();
    let sum = run(&dir, &["sum", "flat.json", "--backend", "rational"]);
    assert_eq!(code(&sum), 0, "{}", stderr(&sum));
    let text = stdout(&sum);
    assert!(text.contains("ratio = inf"), "{text}");
    assert!(text.contains("bang sum = inf"), "{text}");
}

#[test]
fn renders_are_deterministic_and_dimension_checked() {
    let dir = workdir("render");
    let gen = run(
        &dir,
        &["generate", "slabs", "--k", "2", "--cuts", "0.5", "--backend", "rational", "--out", "s.json"],
    );
    assert_eq!(code(&gen), 0);
    let certify = run(&dir, &["certify", "s.json", "--backend", "rational", "--out", "s.cert.json"]);
    assert_eq!(code(&certify), 0);

    let plain = run(&dir, &["render", "s.json", "--backend", "rational", "--out", "a.svg"]);
    assert_eq!(code(&plain), 0, "{}", stderr(&plain));
    let a = fs::read(dir.join("a.svg")).unwrap();
    assert!(a.starts_with(b"<svg "));
    let again = run(&dir, &["render", "s.json", "--backend", "rational", "--out", "b.svg"]);
    assert_eq!(code(&again), 0);
    assert_eq!(fs::read(dir.join("b.svg")).unwrap(), a);

    let step = run(
        &dir,
        &["render", "s.json", "--backend", "rational", "--certificate", "s.cert.json", "--step", "0", "--out", "step.svg"],
    );
    assert_eq!(code(&step), 0, "{}", stderr(&step));
    let svg = fs::read_to_string(dir.join("step.svg")).unwrap();
    assert!(svg.contains(">H1<"), "{svg}");
    assert!(svg.contains(">H2<"), "{svg}");

    let out_of_range = run(
        &dir,
        &["render", "s.json", "--backend", "rational", "--certificate", "s.cert.json", "--step", "7"],
    );
    assert_eq!(code(&out_of_range), 2);
    assert!(stderr(&out_of_range).contains("step 7"), "{}", stderr(&out_of_range));

    let gen3d = run(&dir, &["generate", "random", "--dim", "3", "--planks", "2", "--seed", "1", "--out", "r3.json"]);
    assert_eq!(code(&gen3d), 0);
    let flat = run(&dir, &["render", "r3.json"]);
    assert_eq!(code(&flat), 2);
    assert!(stderr(&flat).contains("dimension 2"), "{}", stderr(&flat));
}

#[test]
fn generate_rejects_inconsistent_flags() {
    let dir = workdir("genflags");
    let wrong_count = run(&dir, &["generate", "slabs", "--k", "3", "--cuts", "0.5"]);
    assert_eq!(code(&wrong_count), 2);
    assert!(stderr(&wrong_count).contains("cuts"), "{}", stderr(&wrong_count));

    let descending = run(&dir, &["generate", "slabs", "--k", "3", "--cuts", "0.7,0.2"]);
    assert_eq!(code(&descending), 2);

    let low_dim = run(&dir, &["generate", "random", "--dim", "1", "--planks", "2"]);
    assert_eq!(code(&low_dim), 2);
}
