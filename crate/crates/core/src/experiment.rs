// SPDX-License-Identifier: Apache-2.0

//! Experiment protocols and their reports: planted-clique robustness runs,
//! cross-size vertex accuracy, and the end-to-end pipeline for one graph.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::{compute_features, FeatureConfig};
use crate::graph::{write_edge_list, Graph, VertexSet};
use crate::mce::{enumerate_with, greedy_clique, CliqueReport, EnumerateOptions};
use crate::model::{train, Label, LabeledDataset, LinearModel, TrainOptions};
use crate::preprocess::{degree_prune_with, prune_by_probabilities, DegreeRule, PruneResult};
use crate::rng::{derive_seed, derive_seed_path, rng_from_seed};
use crate::synth::{build_planted_dataset, planted_instance};

/// 1 iff both reports agree on the clique number and the number of maximum
/// cliques.
pub fn clique_accuracy(original: &CliqueReport, reduced: &CliqueReport) -> Result<u8> {
    if original.truncated || reduced.truncated {
        return Err(Error::TruncatedReport);
    }
    Ok(u8::from(original.omega == reduced.omega && original.count == reduced.count))
}

/// [`clique_accuracy`] that also demands identical clique sets. `reduced`
/// must already be expressed in the original ids.
pub fn clique_accuracy_strict(original: &CliqueReport, reduced: &CliqueReport) -> Result<u8> {
    Ok(clique_accuracy(original, reduced)? & u8::from(original.cliques == reduced.cliques))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub n: usize,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub q: f64,
    pub pruning_ratio: f64,
    pub degree_pruning_ratio: Option<f64>,
    pub vertex_accuracy: Option<f64>,
    pub clique_accuracy: Option<u8>,
    pub omega_original: Option<usize>,
    pub omega_reduced: Option<usize>,
    pub count_original: Option<u64>,
    pub count_reduced: Option<u64>,
    pub timed_out: bool,
    pub feature_time: f64,
    pub prune_time: f64,
    pub solve_time_original: Option<f64>,
    pub solve_time_reduced: Option<f64>,
}

impl InstanceRecord {
    /// Original solve time over the whole reduced path, features included.
    pub fn speedup(&self) -> Option<f64> {
        speedup(
            self.solve_time_original?,
            self.feature_time,
            self.prune_time,
            self.solve_time_reduced?,
        )
    }
}

fn speedup(original: f64, features: f64, prune: f64, reduced: f64) -> Option<f64> {
    let cost = features + prune + reduced;
    (cost > 0.0).then(|| original / cost)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub instances: usize,
    pub mean_pruning_ratio: f64,
    pub mean_clique_accuracy: Option<f64>,
    pub mean_vertex_accuracy: Option<f64>,
    pub mean_feature_time: f64,
    pub mean_prune_time: f64,
    pub mean_solve_time_original: Option<f64>,
    pub mean_solve_time_reduced: Option<f64>,
    /// From the mean timings above.
    pub speedup: Option<f64>,
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / count as f64)
}

impl Aggregate {
    pub fn of(records: &[InstanceRecord]) -> Aggregate {
        let feature = mean(records.iter().map(|r| r.feature_time)).unwrap_or(0.0);
        let prune = mean(records.iter().map(|r| r.prune_time)).unwrap_or(0.0);
        let original = mean(records.iter().filter_map(|r| r.solve_time_original));
        let reduced = mean(records.iter().filter_map(|r| r.solve_time_reduced));
        Aggregate {
            instances: records.len(),
            mean_pruning_ratio: mean(records.iter().map(|r| r.pruning_ratio)).unwrap_or(0.0),
            mean_clique_accuracy: mean(records.iter().filter_map(|r| r.clique_accuracy.map(f64::from))),
            mean_vertex_accuracy: mean(records.iter().filter_map(|r| r.vertex_accuracy)),
            mean_feature_time: feature,
            mean_prune_time: prune,
            mean_solve_time_original: original,
            mean_solve_time_reduced: reduced,
            speedup: match (original, reduced) {
                (Some(o), Some(r)) => speedup(o, feature, prune, r),
                _ => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub n: usize,
    pub k: Option<usize>,
    pub aggregate: Aggregate,
    /// Histogram of the clique number after reduction: `(omega, instances)`.
    pub reduced_omega_histogram: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub master_seed: Option<u64>,
    pub train_pair: Option<(usize, usize)>,
    pub q: f64,
    pub groups: Vec<GroupSummary>,
    pub records: Vec<InstanceRecord>,
}

impl ExperimentReport {
    fn new(name: &str, master_seed: Option<u64>, train_pair: Option<(usize, usize)>, q: f64, records: Vec<InstanceRecord>) -> Self {
        let mut keys: Vec<(usize, Option<usize>)> = Vec::new();
        for r in &records {
            if !keys.contains(&(r.n, r.k)) {
                keys.push((r.n, r.k));
            }
        }
        let groups = keys
            .into_iter()
            .map(|(n, k)| {
                let members: Vec<InstanceRecord> =
                    records.iter().filter(|r| r.n == n && r.k == k).cloned().collect();
                let mut hist: Vec<(usize, usize)> = Vec::new();
                for omega in members.iter().filter_map(|r| r.omega_reduced) {
                    match hist.iter_mut().find(|(w, _)| *w == omega) {
                        Some((_, c)) => *c += 1,
                        None => hist.push((omega, 1)),
                    }
                }
                hist.sort();
                GroupSummary {
                    n,
                    k,
                    aggregate: Aggregate::of(&members),
                    reduced_omega_histogram: hist,
                }
            })
            .collect();
        ExperimentReport {
            name: name.to_string(),
            master_seed,
            train_pair,
            q,
            groups,
            records,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One flat row per instance.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "n",
            "k",
            "seed",
            "q",
            "pruning_ratio",
            "degree_pruning_ratio",
            "vertex_accuracy",
            "clique_accuracy",
            "omega_original",
            "omega_reduced",
            "count_original",
            "count_reduced",
            "timed_out",
            "feature_time",
            "prune_time",
            "solve_time_original",
            "solve_time_reduced",
            "speedup",
        ])?;
        fn opt<T: ToString>(x: Option<T>) -> String {
            x.map(|v| v.to_string()).unwrap_or_default()
        }
        for r in &self.records {
            w.write_record([
                r.n.to_string(),
                opt(r.k),
                opt(r.seed),
                r.q.to_string(),
                r.pruning_ratio.to_string(),
                opt(r.degree_pruning_ratio),
                opt(r.vertex_accuracy),
                opt(r.clique_accuracy),
                opt(r.omega_original),
                opt(r.omega_reduced),
                opt(r.count_original),
                opt(r.count_reduced),
                r.timed_out.to_string(),
                r.feature_time.to_string(),
                r.prune_time.to_string(),
                opt(r.solve_time_original),
                opt(r.solve_time_reduced),
                opt(r.speedup()),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Text table with one block of `Pruned Acc. Time(s) Speedup` per test group.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let (tn, tk) = match self.train_pair {
            Some((n, k)) => (n.to_string(), k.to_string()),
            None => ("-".into(), "-".into()),
        };
        let _ = write!(s, "{:>5} {:>4}", "n", "k");
        for g in &self.groups {
            let label = g.k.map(|k| format!("k'={k}")).unwrap_or_else(|| format!("n={}", g.n));
            let _ = write!(s, " | {label:^31}");
        }
        s.push('\n');
        let _ = write!(s, "{:>5} {:>4}", "", "");
        for _ in &self.groups {
            let _ = write!(s, " | {:>6} {:>6} {:>8} {:>7}", "Pruned", "Acc.", "Time(s)", "Speedup");
        }
        s.push('\n');
        let _ = write!(s, "{tn:>5} {tk:>4}");
        for g in &self.groups {
            let a = &g.aggregate;
            let acc = a.mean_clique_accuracy.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
            let time = a.mean_solve_time_reduced.map(|x| format!("{x:.2e}")).unwrap_or_else(|| "-".into());
            let sp = a.speedup.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
            let _ = write!(s, " | {:>6.3} {acc:>6} {time:>8} {sp:>7}", a.mean_pruning_ratio);
        }
        s.push('\n');
        s
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Seed of the training set for pair `(n, k)` under `master`.
pub fn training_seed(master: u64, n: usize, k: usize) -> u64 {
    derive_seed_path(master, &[0, n as u64, k as u64])
}

/// Trains on `rows` balanced rows from G(n, p) with a planted `k`-clique.
pub fn train_planted_model(
    n: usize,
    k: usize,
    p: f64,
    rows: usize,
    master: u64,
    options: &TrainOptions,
) -> Result<LinearModel> {
    let seed = training_seed(master, n, k);
    let data = build_planted_dataset(n, p, &[k], rows, seed)?;
    train(&data, &TrainOptions { seed: derive_seed(seed, 7), ..*options })
}

#[derive(Debug, Clone)]
pub struct PlantedExperiment {
    pub train_pair: (usize, usize),
    pub test_pairs: Vec<(usize, usize)>,
    pub samples: usize,
    pub q: f64,
    pub p: f64,
    pub train_rows: usize,
    pub train_options: TrainOptions,
    pub seed: u64,
}

impl PlantedExperiment {
    pub fn new(train_pair: (usize, usize), test_pairs: Vec<(usize, usize)>, samples: usize, q: f64, seed: u64) -> Self {
        PlantedExperiment {
            train_pair,
            test_pairs,
            samples,
            q,
            p: 0.5,
            train_rows: 20_000,
            train_options: TrainOptions::default(),
            seed,
        }
    }
}

/// Trains on the training pair, then prunes and solves fresh instances of
/// every test pair.
pub fn run_planted_experiment(spec: &PlantedExperiment) -> Result<ExperimentReport> {
    let (n, k) = spec.train_pair;
    let model = train_planted_model(n, k, spec.p, spec.train_rows, spec.seed, &spec.train_options)?;
    run_planted_experiment_with_model(spec, &model)
}

/// [`run_planted_experiment`] with an already trained model.
pub fn run_planted_experiment_with_model(spec: &PlantedExperiment, model: &LinearModel) -> Result<ExperimentReport> {
    if !(0.0..=1.0).contains(&spec.q) {
        return Err(Error::InvalidParameter(format!("q must lie in [0, 1], got {}", spec.q)));
    }
    let mut jobs = Vec::new();
    for &(n, k) in &spec.test_pairs {
        if k > n {
            return Err(Error::InvalidParameter(format!("test pair ({n}, {k}) is infeasible")));
        }
        for i in 0..spec.samples {
            jobs.push((n, k, derive_seed_path(spec.seed, &[1, n as u64, k as u64, i as u64])));
        }
    }
    let records = jobs
        .par_iter()
        .map(|&(n, k, seed)| planted_trial(model, n, k, spec.p, spec.q, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport::new(
        "planted",
        Some(spec.seed),
        Some(spec.train_pair),
        spec.q,
        records,
    ))
}

// No degree method here: the planted protocol prunes with the model alone.
fn planted_trial(model: &LinearModel, n: usize, k: usize, p: f64, q: f64, seed: u64) -> Result<InstanceRecord> {
    let inst = planted_instance(n, p, k, seed)?;
    let g = &inst.graph;

    let t = Instant::now();
    let features = compute_features(g, &model.config)?;
    let feature_time = secs(t.elapsed());

    let t = Instant::now();
    let probs = model.predict_matrix(&features)?;
    let pruned = prune_by_probabilities(g, &probs, q)?;
    let prune_time = secs(t.elapsed());

    let hits = (0..n)
        .filter(|&v| (probs[v] >= 0.5) != inst.planted.contains(v as u32))
        .count();

    let options = EnumerateOptions::default();
    let t = Instant::now();
    let original = enumerate_with(g, &options)?;
    let solve_time_original = secs(t.elapsed());
    let t = Instant::now();
    let reduced = enumerate_with(&pruned.reduced, &options)?;
    let solve_time_reduced = secs(t.elapsed());

    Ok(InstanceRecord {
        n,
        k: Some(k),
        seed: Some(seed),
        q,
        pruning_ratio: pruned.pruning_ratio,
        degree_pruning_ratio: None,
        vertex_accuracy: Some(hits as f64 / n as f64),
        clique_accuracy: Some(clique_accuracy(&original, &reduced)?),
        omega_original: Some(original.omega),
        omega_reduced: Some(reduced.omega),
        count_original: Some(original.count),
        count_reduced: Some(reduced.count),
        timed_out: false,
        feature_time,
        prune_time,
        solve_time_original: Some(solve_time_original),
        solve_time_reduced: Some(solve_time_reduced),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessRow {
    pub n: usize,
    pub k: usize,
    /// Accuracy of the model trained at `(n, k)`.
    pub trained_accuracy: f64,
    /// Accuracy of the model trained at the small pair.
    pub robust_accuracy: f64,
}

#[derive(Debug, Clone)]
pub struct RobustnessComparison {
    pub small_pair: (usize, usize),
    pub large_pairs: Vec<(usize, usize)>,
    pub p: f64,
    pub train_rows: usize,
    pub test_rows: usize,
    pub train_options: TrainOptions,
    pub seed: u64,
}

impl RobustnessComparison {
    pub fn new(small_pair: (usize, usize), large_pairs: Vec<(usize, usize)>, seed: u64) -> Self {
        RobustnessComparison {
            small_pair,
            large_pairs,
            p: 0.5,
            train_rows: 20_000,
            test_rows: 10_000,
            train_options: TrainOptions::default(),
            seed,
        }
    }
}

/// For each large pair `(n, k)`, scores the natively trained model and the
/// small-pair model on the same balanced rows drawn at `(n, k + 1)`.
pub fn run_robustness_comparison(spec: &RobustnessComparison) -> Result<Vec<RobustnessRow>> {
    let (sn, sk) = spec.small_pair;
    let small = train_planted_model(sn, sk, spec.p, spec.train_rows, spec.seed, &spec.train_options)?;
    run_robustness_with_model(spec, &small)
}

pub fn run_robustness_with_model(spec: &RobustnessComparison, small: &LinearModel) -> Result<Vec<RobustnessRow>> {
    spec.large_pairs
        .iter()
        .map(|&(n, k)| {
            let native = if (n, k) == spec.small_pair {
                small.clone()
            } else {
                train_planted_model(n, k, spec.p, spec.train_rows, spec.seed, &spec.train_options)?
            };
            let test = planted_test_rows(n, k + 1, spec.p, spec.test_rows, spec.seed)?;
            Ok(RobustnessRow {
                n,
                k,
                trained_accuracy: native.accuracy(&test)?,
                robust_accuracy: small.accuracy(&test)?,
            })
        })
        .collect()
}

/// Held-out balanced rows at `(n, k)`, disjoint in seed space from training.
pub fn planted_test_rows(n: usize, k: usize, p: f64, rows: usize, master: u64) -> Result<LabeledDataset> {
    build_planted_dataset(n, p, &[k], rows, derive_seed_path(master, &[2, n as u64, k as u64]))
}

pub fn format_robustness_table(rows: &[RobustnessRow]) -> String {
    let mut s = format!("{:>5} {:>4} {:>12} {:>10}\n", "n", "k", "Trained acc.", "Rob. acc.");
    for r in rows {
        let _ = writeln!(s, "{:>5} {:>4} {:>12.3} {:>10.3}", r.n, r.k, r.trained_accuracy, r.robust_accuracy);
    }
    s
}

/// Training rows from solved graphs: every vertex of some maximum clique is a
/// keep row and a uniform sample of as many others (or all of them, if
/// fewer) are prune rows. With `degree_first`, each graph is first reduced by the degree
/// method using a greedy clique, and features come from the reduced graph.
pub fn build_enumerated_dataset(
    graphs: &[Graph],
    config: FeatureConfig,
    degree_first: bool,
    seed: u64,
) -> Result<LabeledDataset> {
    let mut out = LabeledDataset::new(config);
    for (i, g) in graphs.iter().enumerate() {
        let graph_seed = derive_seed(seed, i as u64);
        let reduced;
        let g = if degree_first {
            let k = greedy_clique(g, 8, graph_seed).len();
            reduced = degree_prune_with(g, k, DegreeRule::Fixpoint).reduced;
            &reduced
        } else {
            g
        };
        let cliques = enumerate_with(g, &EnumerateOptions::default())?;
        if cliques.truncated {
            return Err(Error::TruncatedReport);
        }
        let keep = cliques.cliques.iter().fold(VertexSet::new(), |acc, c| acc.union(c));
        let others = keep.complement(g.n());
        if keep.is_empty() {
            continue;
        }
        let features = compute_features(g, &config)?;
        for &v in keep.iter() {
            out.push_vertex(&features, v, Label::Keep, graph_seed)?;
        }
        let mut rng = rng_from_seed(derive_seed(graph_seed, 1));
        let take = keep.len().min(others.len());
        for j in sample(&mut rng, others.len(), take).into_iter() {
            out.push_vertex(&features, others.as_slice()[j], Label::Prune, graph_seed)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    /// Solve the original and the fully reduced graph.
    #[default]
    Exact,
    /// Solve the original and the degree-pruned graph only.
    DegreeOnly,
    /// Solve the original, the degree-pruned and the fully reduced graph.
    Both,
}

impl std::str::FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Solver::Exact),
            "degree-only" => Ok(Solver::DegreeOnly),
            "both" => Ok(Solver::Both),
            other => Err(Error::InvalidParameter(format!("unknown solver '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub q: f64,
    pub solver: Solver,
    pub greedy_restarts: usize,
    pub degree_rule: DegreeRule,
    pub timeout: Option<Duration>,
    pub seed: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            q: 0.55,
            solver: Solver::Exact,
            greedy_restarts: 8,
            degree_rule: DegreeRule::Fixpoint,
            timeout: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub record: InstanceRecord,
    pub greedy_clique: VertexSet,
    /// Degree method on the input graph.
    pub degree: PruneResult,
    /// Both stages, relative to the input graph.
    pub combined: PruneResult,
    /// Model output for each vertex of the degree-pruned graph.
    pub prune_probabilities: Vec<f64>,
    pub original_report: Option<CliqueReport>,
    pub degree_report: Option<CliqueReport>,
    pub reduced_report: Option<CliqueReport>,
}

impl PipelineOutcome {
    pub fn report(&self) -> ExperimentReport {
        ExperimentReport::new("pipeline", None, None, self.record.q, vec![self.record.clone()])
    }

    /// Writes the reduced graphs, clique reports and the run report to `dir`.
    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let write = |name: &str, body: &str| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))
        };
        for (name, result) in [("degree_pruned.el", &self.degree), ("reduced.el", &self.combined)] {
            let path = dir.join(name);
            let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
            write_edge_list(&result.reduced, file).map_err(|e| Error::io(&path, e))?;
        }
        write("degree_prune.json", &self.degree.to_json(Some(&dir.join("degree_pruned.el")))?)?;
        write("prune.json", &self.combined.to_json(Some(&dir.join("reduced.el")))?)?;
        for (name, report) in [
            ("cliques_original.json", &self.original_report),
            ("cliques_degree.json", &self.degree_report),
            ("cliques_reduced.json", &self.reduced_report),
        ] {
            if let Some(r) = report {
                write(name, &r.to_json()?)?;
            }
        }
        let report = self.report();
        write("report.json", &report.to_json()?)?;
        let path = dir.join("report.csv");
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        report.write_csv(file)
    }
}

fn timed_solve(g: &Graph, timeout: Option<Duration>) -> Result<(Option<CliqueReport>, f64)> {
    let t = Instant::now();
    let options = EnumerateOptions {
        timeout,
        ..Default::default()
    };
    match enumerate_with(g, &options) {
        Ok(r) => Ok((Some(r), secs(t.elapsed()))),
        Err(Error::Timeout(_)) => Ok((None, secs(t.elapsed()))),
        Err(e) => Err(e),
    }
}

/// Degree method, then classifier pruning on the degree-pruned graph, then
/// maximum clique enumeration as selected by `options.solver`.
pub fn run_pipeline(g: &Graph, model: &LinearModel, options: &PipelineOptions) -> Result<PipelineOutcome> {
    let n = g.n();

    let t = Instant::now();
    let clique = greedy_clique(g, options.greedy_restarts, options.seed);
    let degree = degree_prune_with(g, clique.len(), options.degree_rule);
    let degree_time = secs(t.elapsed());

    let t = Instant::now();
    let features = compute_features(&degree.reduced, &model.config)?;
    let feature_time = secs(t.elapsed());

    let t = Instant::now();
    let probs = model.predict_matrix(&features)?;
    let stage = prune_by_probabilities(&degree.reduced, &probs, options.q)?;
    let removed_by_model = degree.mapping.map_set(&stage.removed);
    let combined = PruneResult::from_removed(g, degree.removed.union(&removed_by_model))?;
    let prune_time = degree_time + secs(t.elapsed());

    let (original_report, t_orig) = timed_solve(g, options.timeout)?;
    let (degree_report, t_degree) = match options.solver {
        Solver::DegreeOnly | Solver::Both => {
            let (r, t) = timed_solve(&degree.reduced, options.timeout)?;
            (r.map(|r| r.map_to_original(&degree.mapping)), Some(t))
        }
        Solver::Exact => (None, None),
    };
    let (reduced_report, t_reduced) = match options.solver {
        Solver::Exact | Solver::Both => {
            let (r, t) = timed_solve(&combined.reduced, options.timeout)?;
            (r.map(|r| r.map_to_original(&combined.mapping)), Some(t))
        }
        Solver::DegreeOnly => (None, None),
    };

    let (final_report, final_time) = match options.solver {
        Solver::DegreeOnly => (&degree_report, t_degree),
        _ => (&reduced_report, t_reduced),
    };
    let timed_out = original_report.is_none()
        || (t_degree.is_some() && degree_report.is_none())
        || (t_reduced.is_some() && reduced_report.is_none());
    let accuracy = match (&original_report, final_report) {
        (Some(o), Some(r)) => Some(clique_accuracy(o, r)?),
        _ => None,
    };

    let record = InstanceRecord {
        n,
        k: None,
        seed: Some(options.seed),
        q: options.q,
        pruning_ratio: combined.pruning_ratio,
        degree_pruning_ratio: Some(degree.pruning_ratio),
        vertex_accuracy: None,
        clique_accuracy: accuracy,
        omega_original: original_report.as_ref().map(|r| r.omega),
        omega_reduced: final_report.as_ref().map(|r| r.omega),
        count_original: original_report.as_ref().map(|r| r.count),
        count_reduced: final_report.as_ref().map(|r| r.count),
        timed_out,
        feature_time,
        prune_time,
        solve_time_original: original_report.as_ref().map(|_| t_orig),
        solve_time_reduced: final_report.as_ref().and(final_time),
    };
    Ok(PipelineOutcome {
        record,
        greedy_clique: clique,
        degree,
        combined,
        prune_probabilities: probs,
        original_report,
        degree_report,
        reduced_report,
    })
}
