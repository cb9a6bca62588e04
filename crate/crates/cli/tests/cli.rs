use std::process::Command;

use masseylab_cli::run_command;

fn run(args: &[&str]) -> masseylab_cli::Outcome {
    run_command(std::iter::once("masseylab").chain(args.iter().copied()))
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SPHERE: &str = r#"{"kind": "free", "degree_bound": 8,
    "generators": [{"name": "a", "degree": 2}, {"name": "x", "degree": 3}],
    "differential": {"x": "a^2"}}"#;

#[test]
fn betti_and_verdict_lines() {
    let out = run(&["model", "three-sasakian", "--k", "3", "--betti"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "1 0 3 0 0 3 0 1\n"));

    let out = run(&[
        "model",
        "sasaki-circle",
        "--k",
        "4",
        "--l",
        "10",
        "--verdict",
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout.lines().next(),
        Some("FORMAL (all triple Massey products trivial; Theorem 2.8)")
    );
    assert!(out
        .stdout
        .contains("formality itself is the cited theorem's conclusion"));

    let out = run(&["model", "three-sasakian", "--k", "4", "--verdict"]);
    assert!(out
        .stdout
        .starts_with("NON-FORMAL (nontrivial Massey product <a1, a1, a2>; Theorem 1.1)"));
    let out = run(&["model", "three-sasakian", "--k", "1", "--verdict"]);
    assert!(out
        .stdout
        .starts_with("FORMAL (b2 <= 1; all triple Massey products trivial; Theorem 1.1)"));
}

#[test]
fn massey_on_an_exported_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n2.json");
    let path = path.to_str().unwrap();
    assert_eq!(
        run(&[
            "export",
            "--model",
            "three-sasakian",
            "--k",
            "2",
            "--output",
            path
        ])
        .code,
        0
    );
    let out = run(&["massey", "--algebra", path, "--classes", "a1", "a1", "a2"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout,
        "NONTRIVIAL; representative -a2*z; indeterminacy dim 0\n"
    );

    let out = run(&[
        "massey",
        "--algebra",
        path,
        "--classes",
        "a1",
        "a1",
        "a2",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["status"], "nontrivial");
    assert_eq!(v["representative"], "-a2*z");
    assert!(v["class"].as_array().unwrap().iter().all(|c| c.is_string()));
    assert_eq!(v["indeterminacy"]["dim"], 0);
}

#[test]
fn exit_codes() {
    // undefined product
    let out = run(&[
        "massey",
        "--model",
        "three-sasakian",
        "--k",
        "1",
        "--classes",
        "a1",
        "a1*z",
        "a1",
    ]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("UNDEFINED"));
    // not closed
    let out = run(&[
        "massey",
        "--model",
        "three-sasakian",
        "--k",
        "1",
        "--classes",
        "a1",
        "z",
        "a1",
    ]);
    assert_eq!(out.code, 1);
    // expression syntax
    let out = run(&[
        "massey",
        "--model",
        "three-sasakian",
        "--k",
        "1",
        "--classes",
        "a1",
        "a1 +",
        "a1",
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("byte 4"));
    // usage
    assert_eq!(run(&["scan"]).code, 2);
    assert_eq!(run(&["model", "torus"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
    // invalid model parameters
    assert_eq!(
        run(&["model", "qk", "--k", "2", "--lambdas", "1,0"]).code,
        1
    );
    assert_eq!(run(&["model", "sasaki-circle", "--l", "0"]).code, 1);
    // missing and malformed files
    assert_eq!(
        run(&["cohomology", "--algebra", "/nonexistent.json"]).code,
        2
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.json", "{\"kind\": \"free\"");
    assert_eq!(run(&["cohomology", "--algebra", &bad]).code, 2);
}

#[test]
fn validate_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        &dir,
        "ext.json",
        r#"{"kind": "structure_constants", "degree_bound": 2,
            "basis": [["1"], ["u", "v"], ["uv"]], "unit": "1",
            "products": [
              {"left": "u", "right": "u", "result": []},
              {"left": "v", "right": "v", "result": []},
              {"left": "u", "right": "v", "result": [{"basis": "uv", "coeff": "1"}]},
              {"left": "v", "right": "u", "result": [{"basis": "uv", "coeff": "-1"}]}]}"#,
    );
    let out = run(&["validate", "--algebra", &good]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("valid"));

    let broken = std::fs::read_to_string(&good)
        .unwrap()
        .replace("\"-1\"", "\"1\"");
    let broken = write(&dir, "broken.json", &broken);
    let out = run(&["validate", "--algebra", &broken]);
    assert_eq!(out.code, 1);
    assert!(
        out.stdout.contains("u") && out.stdout.contains("v"),
        "{}",
        out.stdout
    );
    // other commands refuse the broken table outright
    assert_eq!(run(&["cohomology", "--algebra", &broken]).code, 1);
}

#[test]
fn cohomology_and_ideal_scan() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = write(&dir, "sphere.json", SPHERE);
    let out = run(&["cohomology", "--algebra", &sphere]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("betti: 1 0 1 0 0 0 0 0\n"));
    assert!(out.stdout.contains("H^2: a\n"));

    let out = run(&["ideal-scan", "--algebra", &sphere, "--ideal", "x"]);
    assert_eq!(out.code, 0);
    assert!(out
        .stdout
        .contains("every closed element of the ideal is exact in degrees 0..=7"));
    assert_eq!(
        run(&["ideal-scan", "--algebra", &sphere, "--ideal", "y"]).code,
        1
    );
    assert_eq!(
        run(&["ideal-scan", "--model", "qk", "--ideal", "a1"]).code,
        1
    );
}

#[test]
fn scan_output_lists_witnesses() {
    let out = run(&[
        "scan",
        "--model",
        "three-sasakian",
        "--k",
        "2",
        "--top",
        "7",
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("NONTRIVIAL <a1, a1, a2> = -a2*z"));
    let out = run(&[
        "scan",
        "--model",
        "sasaki-circle",
        "--k",
        "2",
        "--pair-sums",
    ]);
    assert!(out.stdout.contains("0 nontrivial"));
}

#[test]
fn binary_honours_thread_variable() {
    let bin = env!("CARGO_BIN_EXE_masseylab");
    let one = Command::new(bin)
        .args(["scan", "--model", "three-sasakian", "--k", "3", "--json"])
        .output()
        .unwrap();
    let four = Command::new(bin)
        .args(["scan", "--model", "three-sasakian", "--k", "3", "--json"])
        .env("MASSEYLAB_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let bad = Command::new(bin).args(["massey"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
