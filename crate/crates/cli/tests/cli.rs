// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

fn cliqueprune(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cliqueprune"))
        .args(args)
        .env_remove("CLIQUEPRUNE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = cliqueprune(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn every_subcommand_has_help() {
    for sub in [
        "gen", "features", "train", "cv", "prune", "enumerate", "pipeline", "experiment", "robustness",
    ] {
        let out = ok(&[sub, "--help"]);
        assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"), "{sub}");
    }
}

#[test]
fn gen_then_enumerate() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.el");
    let out = ok(&["gen", "--n", "64", "--p", "0.5", "--k", "10", "--seed", "7", "-o", &g]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed: 7"));

    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.json")).unwrap()).unwrap();
    assert_eq!(sidecar["planted"].as_array().unwrap().len(), 10);
    assert_eq!(sidecar["seed"], 7);

    let report = stdout_json(&ok(&["enumerate", &g]));
    assert!(report["omega"].as_u64().unwrap() >= 10);
    assert_eq!(report["truncated"], false);
    assert_eq!(report["count"].as_u64().unwrap() as usize, report["cliques"].as_array().unwrap().len());

    // Same seed, same bytes.
    let again = path(dir.path(), "again.el");
    ok(&["gen", "--n", "64", "--p", "0.5", "--k", "10", "--seed", "7", "-o", &again]);
    assert_eq!(std::fs::read(&g).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn omitted_seed_is_printed() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&["gen", "--n", "10", "-o", &path(dir.path(), "g.el")]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    let seed = stderr.lines().find_map(|l| l.strip_prefix("seed: ")).expect("seed line");
    assert!(seed.parse::<u64>().is_ok());
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["frobnicate"],
        vec!["gen", "--n", "10", "--bogus", "-o", "x.el"],
        vec!["gen", "--n", "10", "--p", "1.5", "-o", "x.el"],
        vec!["prune", "g.el", "--model", "m.txt", "--q", "-0.1"],
        vec!["experiment", "--train", "64", "--test", "64,11"],
        vec!["train", "--planted", "64,10", "--epochs", "0", "-o", "m.txt"],
        vec!["enumerate"],
    ] {
        assert_eq!(cliqueprune(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn data_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = path(dir.path(), "missing.el");
    let out = cliqueprune(&["enumerate", &missing]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.el"));

    let bad = path(dir.path(), "bad.el");
    std::fs::write(&bad, "0 1\n1 two\n").unwrap();
    let out = cliqueprune(&["enumerate", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let model = path(dir.path(), "model.txt");
    std::fs::write(&model, "not a model\n").unwrap();
    std::fs::write(dir.path().join("g.el"), "0 1\n").unwrap();
    let out = cliqueprune(&["prune", &path(dir.path(), "g.el"), "--model", &model]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn train_prune_and_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let (g, model, rows) = (path(dir.path(), "g.el"), path(dir.path(), "m.txt"), path(dir.path(), "rows.csv"));
    ok(&["gen", "--n", "48", "--k", "9", "--seed", "3", "-o", &g]);
    let out = ok(&[
        "train", "--planted", "48,9", "--rows", "600", "--epochs", "40", "--seed", "5", "-o", &model, "--save-data",
        &rows,
    ]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("training accuracy"));

    let cv = stdout_json(&ok(&["cv", "--data", &rows, "--folds", "3", "--epochs", "40", "--seed", "1"]));
    assert_eq!(cv["fold_accuracies"].as_array().unwrap().len(), 3);

    let none = stdout_json(&ok(&["prune", &g, "--model", &model, "--q", "1.0"]));
    assert_eq!(none["pruning_ratio"], 0.0);

    let pruned_dir = dir.path().join("pruned");
    let summary = stdout_json(&ok(&["prune", &g, "--model", &model, "-o", pruned_dir.to_str().unwrap()]));
    let reduced = ok(&["enumerate", pruned_dir.join("reduced.el").to_str().unwrap()]);
    let reduced = stdout_json(&reduced);
    assert!(reduced["omega"].as_u64().unwrap() <= 48);
    assert!(summary["pruning_ratio"].as_f64().unwrap() > 0.0);

    let hints: Vec<u32> = serde_json::from_slice(&ok(&["prune", &g, "--model", &model, "--hints"]).stdout).unwrap();
    assert!(hints.windows(2).all(|w| w[0] < w[1]));

    let features = ok(&["features", &g, "--mode", "planted"]);
    let text = String::from_utf8_lossy(&features.stdout);
    assert!(text.starts_with("vertex,F1,F2,F3,F4,F5,F6,F7,F8,F9,F10"));
    assert_eq!(text.lines().count(), 49);

    let out_dir = dir.path().join("run");
    let record = stdout_json(&ok(&[
        "pipeline",
        &g,
        "--model",
        &model,
        "--solver",
        "both",
        "--seed",
        "2",
        "-o",
        out_dir.to_str().unwrap(),
    ]));
    assert!(record["clique_accuracy"].is_u64());
    for f in ["reduced.el", "degree_pruned.el", "report.json", "report.csv", "cliques_original.json"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
}

#[test]
fn experiment_table_and_env_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cliqueprune"))
        .args([
            "experiment", "--train", "32,8", "--test", "32,9", "32,10", "--samples", "3", "--rows", "300", "--epochs",
            "30", "--seed", "1",
        ])
        .env("CLIQUEPRUNE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = String::from_utf8_lossy(&out.stdout);
    for needle in ["Pruned", "Acc.", "Time(s)", "Speedup", "k'=9", "k'=10"] {
        assert!(table.contains(needle), "{needle} missing from\n{table}");
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed: 1"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["records"].as_array().unwrap().len(), 6);
    assert_eq!(report["master_seed"], 1);
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn robustness_json() {
    let out = ok(&[
        "robustness", "--small", "32,8", "--large", "32,8", "--rows", "300", "--test-rows", "300", "--epochs", "30",
        "--seed", "4", "--json",
    ]);
    let rows = stdout_json(&out);
    assert_eq!(rows[0]["trained_accuracy"], rows[0]["robust_accuracy"]);
}

#[test]
fn threads_flag_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["--threads", "2", "gen", "--n", "10", "--seed", "1", "-o", &path(dir.path(), "g.el")]);
    assert_eq!(cliqueprune(&["--threads", "0", "gen", "--n", "10", "-o", "x.el"]).status.code(), Some(1));
}
