//! End-to-end tests of the `qpd` binary: exit codes, JSON schemas, file
//! round-trips, and output determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qpd_cli::formats::{ChannelFile, DecompositionFile};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_qpd")
}

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(binary())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn fixtures(dir: &Path) {
    write(
        dir,
        "ad_inv.json",
        r#"{"format":1,"dim":2,"kind":"named","family":"amplitude_damping","params":{"epsilon":0.5},"invert":true}"#,
    );
    write(
        dir,
        "dephasing.json",
        r#"{"format":1,"dim":2,"kind":"named","family":"dephasing_qubit","params":{"epsilon":0.25}}"#,
    );
    write(
        dir,
        "dephasing_inv.json",
        r#"{"format":1,"dim":2,"kind":"named","family":"dephasing_qubit","params":{"epsilon":0.25},"invert":true}"#,
    );
    write(
        dir,
        "ket0.json",
        r#"{"format":1,"kind":"ket","amplitudes":[[2,0],[0,0]]}"#,
    );
    write(
        dir,
        "parity.json",
        r#"{"format":1,"n_qubits":1,"values":[[0,1.0],[1,-1.0]]}"#,
    );
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn nu_json_schema_and_value() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let out = run(&["nu", "ad_inv.json", "--json"], dir.path());
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    let obj = parsed.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        vec![
            "duality_gap",
            "format",
            "nu",
            "p1",
            "p2",
            "trace_norm_lower",
            "trace_norm_upper",
            "two_pow_nu"
        ],
        "JSON schema of `nu` output is pinned"
    );
    let nu = obj["nu"].as_f64().unwrap();
    assert!((nu - 3.0f64.log2()).abs() < 1e-6);
    assert!((obj["two_pow_nu"].as_f64().unwrap() - 3.0).abs() < 1e-6);
}

#[test]
fn nu_of_forward_channel_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let out = run(&["nu", "dephasing.json", "--json"], dir.path());
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert!(parsed["nu"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn exit_codes_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());

    // 2: malformed JSON.
    write(dir.path(), "bad.json", "not json at all");
    let out = run(&["nu", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // 2: wrong format version.
    write(
        dir.path(),
        "v9.json",
        r#"{"format":9,"dim":2,"kind":"named","family":"dephasing_qubit","params":{"epsilon":0.1}}"#,
    );
    assert_eq!(run(&["nu", "v9.json"], dir.path()).status.code(), Some(2));

    // 2: unknown family / missing parameter.
    write(
        dir.path(),
        "fam.json",
        r#"{"format":1,"dim":2,"kind":"named","family":"nope","params":{}}"#,
    );
    assert_eq!(run(&["nu", "fam.json"], dir.path()).status.code(), Some(2));
    write(
        dir.path(),
        "missing.json",
        r#"{"format":1,"dim":2,"kind":"named","family":"amplitude_damping","params":{}}"#,
    );
    assert_eq!(
        run(&["nu", "missing.json"], dir.path()).status.code(),
        Some(2)
    );

    // 3: well-formed but out-of-range parameter.
    write(
        dir.path(),
        "range.json",
        r#"{"format":1,"dim":2,"kind":"named","family":"amplitude_damping","params":{"epsilon":1.5}}"#,
    );
    assert_eq!(
        run(&["nu", "range.json"], dir.path()).status.code(),
        Some(3)
    );

    // 3: non-HPTP map (subnormalized Kraus set is TN, not TP).
    write(
        dir.path(),
        "subchannel.json",
        r#"{"format":1,"dim":2,"kind":"kraus","operators":[[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]]}"#,
    );
    assert_eq!(
        run(&["nu", "subchannel.json"], dir.path()).status.code(),
        Some(3)
    );

    // 3: Choi payload that is not Hermitian.
    write(
        dir.path(),
        "nonherm.json",
        r#"{"format":1,"dim":2,"kind":"choi","matrix":[[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}"#,
    );
    assert_eq!(
        run(&["nu", "nonherm.json"], dir.path()).status.code(),
        Some(3)
    );

    // 5: amplitude damping at eps = 1 has no inverse.
    write(
        dir.path(),
        "singular.json",
        r#"{"format":1,"dim":2,"kind":"named","family":"amplitude_damping","params":{"epsilon":1.0},"invert":true}"#,
    );
    assert_eq!(
        run(&["nu", "singular.json"], dir.path()).status.code(),
        Some(5)
    );
    let out = run(
        &["mitigate", "singular.json", "ket0.json", "parity.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(5));

    // 3: observable values outside [-1, 1].
    write(
        dir.path(),
        "badobs.json",
        r#"{"format":1,"n_qubits":1,"values":[[0,1.5]]}"#,
    );
    let out = run(
        &["mitigate", "dephasing.json", "ket0.json", "badobs.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn decompose_writes_reloadable_files() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    for method in ["--optimal", "--canonical"] {
        let out = run(
            &[
                "decompose",
                "dephasing_inv.json",
                method,
                "--out",
                "dec.json",
                "--json",
            ],
            dir.path(),
        );
        assert!(out.status.success());
        let file: DecompositionFile =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("dec.json")).unwrap())
                .unwrap();
        let dec = file.to_decomposition().unwrap();

        // Recombination against the map the file was produced from.
        let spec: ChannelFile = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("dephasing_inv.json")).unwrap(),
        )
        .unwrap();
        let map = spec.to_map().unwrap();
        assert!(
            dec.recombination_residual(&map) < 1e-7,
            "{method} reload recombines"
        );
        if method == "--optimal" {
            assert!((dec.total_cost() - 2.0).abs() < 1e-6);
        } else {
            assert!(dec.total_cost() >= 2.0);
        }
    }
}

#[test]
fn canonical_decomposition_of_identity_costs_eleven() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "identity.json",
        r#"{"format":1,"dim":2,"kind":"kraus","operators":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#,
    );
    let out = run(
        &["decompose", "identity.json", "--canonical", "--json"],
        dir.path(),
    );
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert!((parsed["total_cost"].as_f64().unwrap() - 11.0).abs() < 1e-9);
    assert!((parsed["etas"][0].as_f64().unwrap() - 6.0).abs() < 1e-9);
}

#[test]
fn mitigate_json_schema_and_exactness() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let out = run(
        &[
            "mitigate",
            "dephasing.json",
            "ket0.json",
            "parity.json",
            "--seed",
            "7",
            "--json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    let obj = parsed.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        vec![
            "baseline_noisy",
            "estimate",
            "exact_mean",
            "format",
            "negative_probability_events",
            "plan",
            "seed"
        ],
        "JSON schema of `mitigate` output is pinned"
    );
    let mut plan_keys: Vec<&str> = obj["plan"]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    plan_keys.sort_unstable();
    assert_eq!(
        plan_keys,
        vec![
            "delta",
            "eps_fail",
            "nu",
            "planned_shots",
            "shots_used",
            "total_cost",
            "underplanned"
        ]
    );
    // The state is diagonal and dephasing-invariant: exact mean 1.
    assert!((obj["exact_mean"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(obj["plan"]["planned_shots"].as_u64().unwrap(), 11805);
    assert!(!obj["plan"]["underplanned"].as_bool().unwrap());
    assert!((obj["estimate"].as_f64().unwrap() - 1.0).abs() < 0.05);
}

#[test]
fn mitigate_shot_override_flags_underplanning() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let out = run(
        &[
            "mitigate",
            "dephasing.json",
            "ket0.json",
            "parity.json",
            "--seed",
            "7",
            "--shots",
            "10",
            "--record-shots",
            "--json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert!(parsed["plan"]["underplanned"].as_bool().unwrap());
    assert_eq!(parsed["plan"]["shots_used"].as_u64().unwrap(), 10);
    assert_eq!(parsed["per_shot"].as_array().unwrap().len(), 10);
}

#[test]
fn mitigate_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let args = [
        "mitigate",
        "dephasing.json",
        "ket0.json",
        "parity.json",
        "--seed",
        "1234",
        "--shots",
        "200",
        "--record-shots",
        "--json",
    ];
    let a = run(&args, dir.path());
    let b = run(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(
        a.stdout, b.stdout,
        "same inputs and seed must give identical bytes"
    );

    // Parallel execution produces the same bytes as sequential.
    let mut parallel_args = args.to_vec();
    parallel_args.push("--parallel");
    let c = run(&parallel_args, dir.path());
    assert_eq!(
        a.stdout, c.stdout,
        "parallel and sequential shots agree exactly"
    );
}

#[test]
fn verify_subcommand_runs_a_small_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--suite", "analytic", "--json"], dir.path());
    assert!(out.status.success());
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert!(lines.len() >= 2);
    for line in &lines[..lines.len() - 1] {
        let check: serde_json::Value = serde_json::from_str(line).unwrap();
        let mut keys: Vec<&str> = check
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            vec!["detail", "name", "passed", "residual", "suite", "threshold"],
            "JSON schema of verify output is pinned"
        );
        assert!(check["passed"].as_bool().unwrap(), "{line}");
        assert!(check["residual"].is_number());
        assert!(check["threshold"].is_number());
    }
    let summary: serde_json::Value = serde_json::from_str(lines[lines.len() - 1]).unwrap();
    assert_eq!(summary["failed"].as_u64().unwrap(), 0);

    assert_eq!(
        run(&["verify", "--suite", "bogus"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn channel_spec_serialization_is_idempotent() {
    let specs = [
        r#"{"format":1,"dim":2,"kind":"named","family":"amplitude_damping","params":{"epsilon":0.5},"invert":true}"#,
        r#"{"format":1,"dim":2,"kind":"kraus","operators":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#,
        r#"{"format":1,"dim":2,"kind":"mixed_unitary","terms":[{"coefficient":0.75,"unitary":[[[1,0],[0,0]],[[0,0],[1,0]]]},{"coefficient":0.25,"unitary":[[[1,0],[0,0]],[[0,0],[-1,0]]]}]}"#,
        r#"{"format":1,"dim":2,"kind":"choi","matrix":[[[1,0],[0,0],[0,0],[1,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[1,0],[0,0],[0,0],[1,0]]]}"#,
    ];
    for text in specs {
        let spec: ChannelFile = serde_json::from_str(text).unwrap();
        let once = serde_json::to_string(&spec).unwrap();
        let again: ChannelFile = serde_json::from_str(&once).unwrap();
        let twice = serde_json::to_string(&again).unwrap();
        assert_eq!(once, twice, "serialize . deserialize is idempotent");
        // The reparsed spec builds the same map.
        assert_eq!(
            spec.to_map().unwrap().choi(),
            again.to_map().unwrap().choi()
        );
    }
}

#[test]
fn state_files_accept_kets_and_density_matrices() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    // Density-matrix form of the same state.
    write(
        dir.path(),
        "rho.json",
        r#"{"format":1,"kind":"density_matrix","matrix":[[[1,0],[0,0]],[[0,0],[0,0]]]}"#,
    );
    let a = run(
        &[
            "mitigate",
            "dephasing.json",
            "ket0.json",
            "parity.json",
            "--seed",
            "3",
            "--json",
        ],
        dir.path(),
    );
    let b = run(
        &[
            "mitigate",
            "dephasing.json",
            "rho.json",
            "parity.json",
            "--seed",
            "3",
            "--json",
        ],
        dir.path(),
    );
    assert!(a.status.success() && b.status.success());
    assert_eq!(
        a.stdout, b.stdout,
        "normalized ket and density matrix agree"
    );
}
