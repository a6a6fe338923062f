use std::path::PathBuf;
use std::process::Command;

use conductor_workbench::{run, schema::schema_json, Outcome};
use serde_json::Value;

fn repo_file(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("conductor-workbench").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn conductor(torus: &str, method: &str) -> Outcome {
    let file = repo_file("data/imperfect_residue.json");
    cli(&["conductor", &file, "--torus", torus, "--method", method])
}

#[test]
fn discriminant_of_the_compositum() {
    let v = json(&conductor("L", "discriminant"));
    assert_eq!(v["value"], "6/1");
    assert_eq!(v["method"], "discriminant");
    assert_eq!(v["witness"]["discriminant_valuation"], 12);
}

#[test]
fn lie_coker_witness_of_the_compositum() {
    let v = json(&conductor("L", "lie-coker"));
    assert_eq!(v["value"], "6/1");
    assert_eq!(v["witness"]["cokernel_length"], 12);
    let mut lengths: Vec<u64> = v["witness"]["composition_lengths"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    lengths.sort_unstable();
    assert_eq!(lengths, [2, 4, 6]);
}

#[test]
fn all_methods_agree_on_quadratic_extensions() {
    for (name, value) in [
        ("K_1", "1/1"),
        ("K_2", "2/1"),
        ("K_3", "3/1"),
        ("K_4", "4/1"),
        ("F", "2/1"),
    ] {
        let v = json(&conductor(name, "all"));
        assert_eq!(v["agree"], true, "{name}");
        assert_eq!(v["value"], value, "{name}");
        assert!(v["reports"].as_array().unwrap().len() >= 2, "{name}");
    }
}

#[test]
fn trivial_extension_has_conductor_zero() {
    let v = json(&conductor("K", "all"));
    assert_eq!(v["value"], "0/1");
    assert_eq!(v["agree"], true);
}

#[test]
fn resolution_tori() {
    for (name, value) in [("T", "4/1"), ("T_1", "1/1"), ("T_2", "2/1")] {
        let v = json(&conductor(name, "resolution"));
        assert_eq!(v["value"], value, "{name}");
        assert!(!v["assumptions"].as_array().unwrap().is_empty());
    }
}

#[test]
fn inapplicable_method_is_a_validation_error() {
    let out = conductor("T", "discriminant");
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("--method"), "{}", out.stderr);
    let out = conductor("L", "bogus");
    assert_eq!(out.code, 1);
}

#[test]
fn complexes_report_chi_and_gamma() {
    let file = repo_file("data/complexes.json");
    for (name, chi) in [("two-term", 2), ("three-term", 0), ("split-exact", 0), ("shifted", -3)] {
        let v = json(&cli(&["complex", &file, "--name", name]));
        assert_eq!(v["chi"], chi, "{name}");
        assert_eq!(v["gamma"], chi, "{name}");
        assert_eq!(v["agree"], true, "{name}");
    }
}

#[test]
fn complex_over_an_extension_ring() {
    let file = repo_file("data/imperfect_residue.json");
    let v = json(&cli(&["complex", &file, "--name", "lie-coker-L"]));
    assert_eq!(v["ring"], "L");
    assert_eq!(v["chi"], -1);
}

#[test]
fn artin_conductors_of_small_lattices() {
    let file = repo_file("data/complexes.json");
    let cases = [
        ("Z[G]", "wild", "2/1", "1/1"),
        ("Z[G]", "tame", "1/1", "1/2"),
        ("Z", "wild", "0/1", "0/1"),
        ("sign", "tame", "1/1", "1/2"),
    ];
    for (lattice, filtration, a, c) in cases {
        let v = json(&cli(&[
            "artin",
            &file,
            "--lattice",
            lattice,
            "--filtration",
            filtration,
        ]));
        assert_eq!(v["artin_conductor"], a, "{lattice} {filtration}");
        assert_eq!(v["torus_conductor"], c, "{lattice} {filtration}");
    }
}

#[test]
fn isogenous_lattices_share_artin_conductors() {
    let file = repo_file("data/imperfect_residue.json");
    for f in ["jump-at-0", "jump-at-1", "two-jumps"] {
        let a = json(&cli(&["artin", &file, "--lattice", "X_T", "--filtration", f]));
        let b = json(&cli(&["artin", &file, "--lattice", "X_T1_x_X_T2", "--filtration", f]));
        assert_eq!(a["artin_conductor"], b["artin_conductor"], "{f}");
    }
}

#[test]
fn every_example_passes() {
    for name in [
        "lemma-4.3",
        "lemma-4.4",
        "corollary-4.5",
        "artin-crosscheck",
        "gamma-chi",
    ] {
        let out = cli(&["examples", name]);
        assert_eq!(out.code, 0, "{name}: {}", out.stderr);
        assert_eq!(json(&out)["pass"], true);
    }
}

#[test]
fn unknown_example_exits_one() {
    assert_eq!(cli(&["examples", "no-such-example"]).code, 1);
}

#[test]
fn validation_errors_carry_a_path() {
    let dir = std::env::temp_dir().join(format!("workbench-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"base":{"characteristic":2,"kind":"prime"},"complexes":[{"name":"x","start":0,"ranks":[1,1],"differentials":[[["pi","1"]]]}]}"#,
    )
    .unwrap();
    let out = cli(&["complex", bad.to_str().unwrap(), "--name", "x"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("complexes[0].differentials[0]"), "{}", out.stderr);

    std::fs::write(&bad, r#"{"base":{"characteristic":4,"kind":"prime"}}"#).unwrap();
    let out = cli(&["complex", bad.to_str().unwrap(), "--name", "x"]);
    assert_eq!(out.code, 1);

    let out = cli(&["complex", dir.join("missing.json").to_str().unwrap(), "--name", "x"]);
    assert_eq!(out.code, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn low_precision_exits_two_with_a_hint() {
    let file = repo_file("data/imperfect_residue.json");
    let out = cli(&[
        "--precision",
        "2",
        "conductor",
        &file,
        "--torus",
        "L",
        "--method",
        "discriminant",
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--precision"), "{}", out.stderr);
    let out = cli(&["--precision", "3", "examples", "lemma-4.3"]);
    assert_eq!(out.code, 2);
}

#[test]
fn raising_precision_keeps_the_answer() {
    let file = repo_file("data/imperfect_residue.json");
    let out = cli(&[
        "--precision",
        "64",
        "conductor",
        &file,
        "--torus",
        "L",
        "--method",
        "all",
    ]);
    assert_eq!(json(&out)["value"], "6/1");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let file = repo_file("data/imperfect_residue.json");
    let runs: Vec<String> = (0..3).map(|_| conductor("T", "all").stdout).collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let a = cli(&["examples", "corollary-4.5"]).stdout;
    let b = cli(&["examples", "corollary-4.5"]).stdout;
    assert_eq!(a, b);
    let bin = env!("CARGO_BIN_EXE_conductor-workbench");
    let p1 = Command::new(bin)
        .args(["conductor", &file, "--torus", "L"])
        .output()
        .unwrap();
    let p2 = Command::new(bin)
        .args(["conductor", &file, "--torus", "L"])
        .output()
        .unwrap();
    assert_eq!(p1.stdout, p2.stdout);
    assert_eq!(String::from_utf8(p1.stdout).unwrap(), conductor("L", "all").stdout);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_conductor-workbench");
    let ok = Command::new(bin)
        .args(["examples", "lemma-4.4"])
        .output()
        .unwrap()
        .status;
    assert_eq!(ok.code(), Some(0));
    let bad = Command::new(bin).args(["examples", "nope"]).output().unwrap().status;
    assert_eq!(bad.code(), Some(1));
    let low = Command::new(bin)
        .args(["--precision", "2", "examples", "lemma-4.4"])
        .output()
        .unwrap()
        .status;
    assert_eq!(low.code(), Some(2));
}

#[test]
fn shipped_schema_is_current() {
    let shipped = std::fs::read_to_string(repo_file("schema/workbench-input.schema.json")).unwrap();
    assert_eq!(shipped, schema_json());
}

#[test]
fn shipped_inputs_validate() {
    for f in ["data/imperfect_residue.json", "data/complexes.json"] {
        let text = std::fs::read_to_string(repo_file(f)).unwrap();
        let input: conductor_workbench::schema::WorkbenchInput = serde_json::from_str(&text).unwrap();
        conductor_workbench::build::Workbench::new(input, None).unwrap();
    }
}
