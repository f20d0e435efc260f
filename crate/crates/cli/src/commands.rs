// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use cliqueprune::experiment::{
    build_enumerated_dataset, format_robustness_table, run_pipeline, run_planted_experiment,
    run_robustness_comparison, training_seed, PipelineOptions, PlantedExperiment, RobustnessComparison, Solver,
};
use cliqueprune::graph::{write_edge_list, write_id_map};
use cliqueprune::mce::{enumerate_with, EnumerateOptions, DEFAULT_CLIQUE_CAP};
use cliqueprune::preprocess::{compute_hints, DegreeRule};
use cliqueprune::synth::{gen_core_periphery, planted_instance};
use cliqueprune::{
    build_planted_dataset, compute_features, cross_validate, gen_gnp, load_graph, probabilistic_prune, train,
    FeatureConfig, LabeledDataset, LinearModel, LoadedGraph, TrainOptions,
};

use crate::args::*;

fn data<T>(r: cliqueprune::Result<T>) -> Result<T> {
    Ok(r?)
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn resolve_seed(arg: &SeedArg) -> u64 {
    let seed = arg.seed.unwrap_or_else(|| {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        cliqueprune::rng::derive_seed(nanos, std::process::id() as u64)
    });
    eprintln!("seed: {seed}");
    seed
}

fn load(input: &GraphInput) -> Result<LoadedGraph> {
    data(load_graph(&input.graph, input.format.into()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_text(path: &Path, body: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(body.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn options(hyper: &HyperArgs, seed: u64) -> TrainOptions {
    TrainOptions {
        epochs: hyper.epochs as usize,
        l2: hyper.l2,
        ..TrainOptions::with_seed(seed)
    }
}

fn timeout(secs: Option<f64>) -> Result<Option<Duration>> {
    secs.map(|s| Duration::try_from_secs_f64(s).map_err(|_| anyhow!("invalid timeout {s}")))
        .transpose()
}

pub fn gen(a: &GenArgs) -> Result<()> {
    let seed = resolve_seed(&a.seed);
    let graph = if let Some(core) = a.core {
        let periphery = a.periphery.unwrap_or(0);
        let (g, core_set) = data(gen_core_periphery(core, periphery, a.attach, seed))?;
        let sidecar = serde_json::json!({ "core": core_set, "periphery": periphery, "attach": a.attach, "seed": seed });
        write_text(&sidecar_path(&a.output), &serde_json::to_string_pretty(&sidecar)?)?;
        g
    } else {
        let n = a.n.expect("clap enforces --n");
        match a.k {
            Some(k) => {
                let inst = data(planted_instance(n, a.p, k, seed))?;
                write_text(&sidecar_path(&a.output), &data(inst.sidecar_json())?)?;
                inst.graph
            }
            // The graph stream of a planted instance with the same seed.
            None => data(gen_gnp(n, a.p, cliqueprune::rng::derive_seed(seed, 0)))?,
        }
    };
    let mut w = create(&a.output)?;
    write_edge_list(&graph, &mut w)?;
    w.flush()?;
    eprintln!("wrote {} (n={}, m={})", a.output.display(), graph.n(), graph.m());
    Ok(())
}

fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("json")
}

fn feature_config(mode: ModeArg, p: f64) -> FeatureConfig {
    match mode {
        ModeArg::RealWorld => FeatureConfig::real_world(),
        ModeArg::Planted => FeatureConfig::planted(p),
    }
}

pub fn features(a: &FeaturesArgs) -> Result<()> {
    let g = load(&a.input)?.graph;
    let matrix = data(compute_features(&g, &feature_config(a.mode, a.p)))?;
    match &a.output {
        Some(path) => data(matrix.write_csv(create(path)?)),
        None => data(matrix.write_csv(io::stdout().lock())),
    }
}

fn dataset(a: &DataArgs, seed: u64) -> Result<LabeledDataset> {
    let rows = if let Some(path) = &a.source.data {
        let open = || File::open(path).with_context(|| format!("opening {}", path.display()));
        let mut header = String::new();
        BufReader::new(open()?).read_line(&mut header)?;
        let d = header.trim_end().split(',').count().saturating_sub(3);
        let config = if d == 10 {
            FeatureConfig::planted(a.p)
        } else {
            FeatureConfig::real_world()
        };
        data(LabeledDataset::read_csv(BufReader::new(open()?), config))?
    } else if let Some((n, k)) = a.source.planted {
        data(build_planted_dataset(n, a.p, &[k], a.rows, training_seed(seed, n, k)))?
    } else {
        let paths = a.source.graphs.as_deref().unwrap_or_default();
        let graphs = paths
            .iter()
            .map(|p| data(load_graph(p, cliqueprune::GraphFormat::Auto)).map(|l| l.graph))
            .collect::<Result<Vec<_>>>()?;
        data(build_enumerated_dataset(&graphs, FeatureConfig::real_world(), a.degree_first, seed))?
    };
    let (keep, prune) = rows.class_counts();
    eprintln!("rows: {} (keep {keep}, prune {prune})", rows.len());
    if let Some(path) = &a.save_data {
        data(rows.write_csv(create(path)?))?;
    }
    Ok(rows)
}

pub fn train_cmd(a: &TrainArgs) -> Result<()> {
    let seed = resolve_seed(&a.data.seed);
    let rows = dataset(&a.data, seed)?;
    let model = data(train(&rows, &options(&a.hyper, seed)))?;
    emit(&format!("training accuracy: {:.4}\n", data(model.accuracy(&rows))?))?;
    data(model.save(&a.output))?;
    eprintln!("wrote {}", a.output.display());
    Ok(())
}

pub fn cv(a: &CvArgs) -> Result<()> {
    let seed = resolve_seed(&a.data.seed);
    let rows = dataset(&a.data, seed)?;
    let result = data(cross_validate(&rows, a.folds, &options(&a.hyper, seed)))?;
    emit(&format!("{}\n", serde_json::to_string_pretty(&result)?))?;
    Ok(())
}

pub fn prune(a: &PruneArgs) -> Result<()> {
    let loaded = load(&a.input)?;
    let model = data(LinearModel::load(&a.model))?;
    if a.hints {
        let hints = data(compute_hints(&loaded.graph, &model, a.q))?;
        emit(&format!("{}\n", serde_json::to_string(&hints)?))?;
        return Ok(());
    }
    let result = data(probabilistic_prune(&loaded.graph, &model, a.q))?;
    match &a.out_dir {
        Some(dir) => {
            let reduced = dir.join("reduced.el");
            let mut w = create(&reduced)?;
            write_edge_list(&result.reduced, &mut w)?;
            w.flush()?;
            let summary = data(result.to_json(Some(&reduced)))?;
            write_text(&dir.join("prune.json"), &summary)?;
            if let Some(ids) = &loaded.original_ids {
                let mut w = create(&dir.join("input_ids.txt"))?;
                write_id_map(ids, &mut w)?;
                w.flush()?;
            }
            emit(&format!("{summary}\n"))?;
        }
        None => emit(&format!("{}\n", data(result.to_json(None))?))?,
    }
    Ok(())
}

pub fn enumerate(a: &EnumerateArgs) -> Result<()> {
    let loaded = load(&a.input)?;
    let opts = EnumerateOptions {
        cap: a.cap.unwrap_or(DEFAULT_CLIQUE_CAP),
        timeout: timeout(a.timeout)?,
    };
    let report = data(enumerate_with(&loaded.graph, &opts))?;
    emit(&format!("{}\n", data(report.to_json())?))?;
    Ok(())
}

pub fn pipeline(a: &PipelineArgs) -> Result<()> {
    let seed = resolve_seed(&a.seed);
    let loaded = load(&a.input)?;
    let model = data(LinearModel::load(&a.model))?;
    let opts = PipelineOptions {
        q: a.q,
        solver: match a.solver {
            SolverArg::Exact => Solver::Exact,
            SolverArg::DegreeOnly => Solver::DegreeOnly,
            SolverArg::Both => Solver::Both,
        },
        greedy_restarts: a.greedy_restarts,
        degree_rule: if a.single_pass {
            DegreeRule::SinglePass
        } else {
            DegreeRule::Fixpoint
        },
        timeout: timeout(a.timeout)?,
        seed,
    };
    let outcome = data(run_pipeline(&loaded.graph, &model, &opts))?;
    data(outcome.write_outputs(&a.out_dir))?;
    if outcome.record.timed_out {
        eprintln!("warning: a solve timed out; clique accuracy is not available");
    }
    emit(&format!("{}\n", serde_json::to_string_pretty(&outcome.record)?))?;
    eprintln!("outputs in {}", a.out_dir.display());
    Ok(())
}

pub fn experiment(a: &ExperimentArgs) -> Result<()> {
    let seed = resolve_seed(&a.seed);
    let spec = PlantedExperiment {
        p: a.p,
        train_rows: a.rows,
        train_options: options(&a.hyper, seed),
        ..PlantedExperiment::new(a.train, a.test.clone(), a.samples, a.q, seed)
    };
    let report = data(run_planted_experiment(&spec))?;
    if let Some(dir) = &a.out_dir {
        write_text(&dir.join("report.json"), &data(report.to_json())?)?;
        data(report.write_csv(create(&dir.join("report.csv"))?))?;
    }
    match a.report {
        ReportFormat::Table => emit(&report.table())?,
        ReportFormat::Json => emit(&format!("{}\n", data(report.to_json())?))?,
        ReportFormat::Csv => data(report.write_csv(io::stdout().lock()))?,
    }
    Ok(())
}

pub fn robustness(a: &RobustnessArgs) -> Result<()> {
    let seed = resolve_seed(&a.seed);
    let spec = RobustnessComparison {
        p: a.p,
        train_rows: a.rows,
        test_rows: a.test_rows,
        train_options: options(&a.hyper, seed),
        ..RobustnessComparison::new(a.small, a.large.clone(), seed)
    };
    let rows = data(run_robustness_comparison(&spec))?;
    if a.json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&rows)?))?;
    } else {
        emit(&format_robustness_table(&rows))?;
    }
    Ok(())
}
