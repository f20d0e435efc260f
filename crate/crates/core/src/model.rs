// SPDX-License-Identifier: Apache-2.0

//! Logistic regression over standardized vertex features, trained by SGD
//! with an L2 penalty on the weights.
//!
//! Class 0 (`Keep`) marks vertices that lie in some maximum clique, class 1
//! (`Prune`) everything else. The model outputs `P(prune)`.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{ExpectedSource, FeatureConfig, FeatureMatrix, FeatureMode, PowerIteration, FEATURE_NAMES};
use crate::rng::{derive_seed, rng_from_seed};

pub const MODEL_FORMAT_VERSION: u32 = 1;
const MODEL_MAGIC: &str = "cliqueprune-linear-model";

/// Smallest probability mass the model assigns to either class.
const PROB_FLOOR: f64 = f64::EPSILON / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Keep = 0,
    Prune = 1,
}

impl Label {
    pub fn as_u8(self) -> u8 {
        self as u8
    }

    pub fn from_u8(x: u8) -> Option<Label> {
        match x {
            0 => Some(Label::Keep),
            1 => Some(Label::Prune),
            _ => None,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Label::Keep => -1.0,
            Label::Prune => 1.0,
        }
    }
}

/// Where a training row came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub graph_seed: u64,
    pub vertex: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    config: FeatureConfig,
    values: Vec<f64>,
    labels: Vec<Label>,
    provenance: Vec<Option<Provenance>>,
}

impl LabeledDataset {
    pub fn new(config: FeatureConfig) -> Self {
        LabeledDataset {
            config,
            values: Vec::new(),
            labels: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    pub fn dimension(&self) -> usize {
        self.config.dimension()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn push(&mut self, row: &[f64], label: Label, provenance: Option<Provenance>) -> Result<()> {
        if row.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: row.len(),
            });
        }
        self.values.extend_from_slice(row);
        self.labels.push(label);
        self.provenance.push(provenance);
        Ok(())
    }

    /// Appends row `v` of `features` with the given label.
    pub fn push_vertex(&mut self, features: &FeatureMatrix, v: u32, label: Label, graph_seed: u64) -> Result<()> {
        self.push(
            features.row(v as usize),
            label,
            Some(Provenance {
                graph_seed,
                vertex: v,
            }),
        )
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.dimension();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn provenance(&self, i: usize) -> Option<Provenance> {
        self.provenance[i]
    }

    /// `(keep, prune)` row counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let prune = self.labels.iter().filter(|&&l| l == Label::Prune).count();
        (self.len() - prune, prune)
    }

    pub fn subset(&self, indices: &[usize]) -> LabeledDataset {
        let mut out = LabeledDataset::new(self.config);
        for &i in indices {
            out.values.extend_from_slice(self.row(i));
            out.labels.push(self.labels[i]);
            out.provenance.push(self.provenance[i]);
        }
        out
    }

    pub fn extend(&mut self, other: &LabeledDataset) -> Result<()> {
        if other.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: other.dimension(),
            });
        }
        self.values.extend_from_slice(&other.values);
        self.labels.extend_from_slice(&other.labels);
        self.provenance.extend_from_slice(&other.provenance);
        Ok(())
    }

    fn check_trainable(&self) -> Result<()> {
        let (keep, prune) = self.class_counts();
        if keep == 0 || prune == 0 {
            return Err(Error::InvalidDataset(format!(
                "training needs both classes, got {keep} keep and {prune} prune rows"
            )));
        }
        if self.values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("training features".into()));
        }
        Ok(())
    }

    /// CSV with header `label,F1,...,Fd,graph_seed,vertex`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let d = self.dimension();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["label".to_string()];
        header.extend(FEATURE_NAMES[..d].iter().map(|s| s.to_string()));
        header.push("graph_seed".into());
        header.push("vertex".into());
        w.write_record(&header)?;
        for i in 0..self.len() {
            let mut rec = vec![self.labels[i].as_u8().to_string()];
            rec.extend(self.row(i).iter().map(|x| x.to_string()));
            match self.provenance[i] {
                Some(p) => {
                    rec.push(p.graph_seed.to_string());
                    rec.push(p.vertex.to_string());
                }
                None => {
                    rec.push(String::new());
                    rec.push(String::new());
                }
            }
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R, config: FeatureConfig) -> Result<LabeledDataset> {
        let d = config.dimension();
        let mut reader = csv::Reader::from_reader(input);
        let width = reader.headers()?.len();
        if width != d + 3 {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: width.saturating_sub(3),
            });
        }
        let mut out = LabeledDataset::new(config);
        let mut row = vec![0.0; d];
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let label = rec[0]
                .trim()
                .parse::<u8>()
                .ok()
                .and_then(Label::from_u8)
                .ok_or_else(|| Error::parse(line, format!("invalid label '{}'", &rec[0])))?;
            for j in 0..d {
                row[j] = rec[j + 1]
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line, format!("invalid feature '{}'", &rec[j + 1])))?;
            }
            let (seed, vertex) = (rec[d + 1].trim(), rec[d + 2].trim());
            let provenance = if seed.is_empty() && vertex.is_empty() {
                None
            } else {
                Some(Provenance {
                    graph_seed: seed.parse().map_err(|_| Error::parse(line, "invalid graph_seed"))?,
                    vertex: vertex.parse().map_err(|_| Error::parse(line, "invalid vertex"))?,
                })
            };
            out.push(&row, label, provenance)?;
        }
        Ok(out)
    }
}

/// Per-column z-scoring fitted on training data. Columns that are constant
/// in the training data map to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub means: Vec<f64>,
    /// 0 marks a constant column.
    pub stds: Vec<f64>,
}

impl Standardizer {
    pub fn fit(data: &LabeledDataset) -> Standardizer {
        let d = data.dimension();
        let rows = data.len() as f64;
        let mut means = vec![0.0; d];
        let mut stds = vec![0.0; d];
        for j in 0..d {
            let first = data.row(0)[j];
            if (0..data.len()).all(|i| data.row(i)[j] == first) {
                means[j] = first;
                continue;
            }
            let mean = (0..data.len()).map(|i| data.row(i)[j]).sum::<f64>() / rows;
            let var = (0..data.len())
                .map(|i| {
                    let c = data.row(i)[j] - mean;
                    c * c
                })
                .sum::<f64>()
                / rows;
            means[j] = mean;
            stds[j] = var.sqrt();
        }
        Standardizer { means, stds }
    }

    pub fn transform_into(&self, row: &[f64], out: &mut [f64]) {
        for j in 0..row.len() {
            out[j] = if self.stds[j] > 0.0 {
                (row[j] - self.means[j]) / self.stds[j]
            } else {
                0.0
            };
        }
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; row.len()];
        self.transform_into(row, &mut out);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainOptions {
    pub epochs: usize,
    pub l2: f64,
    /// Initial step size of `eta0 / (1 + eta0 * l2 * t)`.
    pub eta0: f64,
    pub seed: u64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            epochs: 400,
            l2: 1e-4,
            eta0: 0.01,
            seed: 0,
        }
    }
}

impl TrainOptions {
    pub fn with_seed(seed: u64) -> Self {
        TrainOptions {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub standardizer: Standardizer,
    pub config: FeatureConfig,
    pub options: TrainOptions,
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(x))` without overflow.
#[inline]
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// `mean(log(1 + exp(-y (w.x + b)))) + l2/2 |w|^2` over pre-standardized rows.
pub fn logistic_objective(x: &[f64], labels: &[Label], w: &[f64], b: f64, l2: f64) -> f64 {
    let d = w.len();
    let loss: f64 = x
        .chunks_exact(d)
        .zip(labels)
        .map(|(row, l)| softplus(-l.sign() * (dot(w, row) + b)))
        .sum();
    loss / labels.len() as f64 + 0.5 * l2 * dot(w, w)
}

/// Loss-term gradient of one sample with respect to the margin `w.x + b`.
#[inline]
fn margin_gradient(row: &[f64], label: Label, w: &[f64], b: f64) -> f64 {
    let y = label.sign();
    -y * sigmoid(-y * (dot(w, row) + b))
}

/// Gradient of [`logistic_objective`]: `(d/dw, d/db)`.
pub fn logistic_gradient(x: &[f64], labels: &[Label], w: &[f64], b: f64, l2: f64) -> (Vec<f64>, f64) {
    let d = w.len();
    let rows = labels.len() as f64;
    let mut gw = vec![0.0; d];
    let mut gb = 0.0;
    for (row, &l) in x.chunks_exact(d).zip(labels) {
        let g = margin_gradient(row, l, w, b);
        for j in 0..d {
            gw[j] += g * row[j];
        }
        gb += g;
    }
    for j in 0..d {
        gw[j] = gw[j] / rows + l2 * w[j];
    }
    (gw, gb / rows)
}

pub fn train(data: &LabeledDataset, options: &TrainOptions) -> Result<LinearModel> {
    data.check_trainable()?;
    if options.epochs == 0 || !(options.eta0 > 0.0) || !(options.l2 >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "invalid training options {options:?}"
        )));
    }
    let d = data.dimension();
    let standardizer = Standardizer::fit(data);
    let mut x = vec![0.0; data.len() * d];
    for (i, chunk) in x.chunks_exact_mut(d).enumerate() {
        standardizer.transform_into(data.row(i), chunk);
    }

    let mut rng = rng_from_seed(options.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut t = 0u64;
    for _ in 0..options.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let eta = options.eta0 / (1.0 + options.eta0 * options.l2 * t as f64);
            let row = &x[i * d..(i + 1) * d];
            let g = margin_gradient(row, data.labels[i], &w, b);
            for j in 0..d {
                w[j] -= eta * (g * row[j] + options.l2 * w[j]);
            }
            b -= eta * g;
            t += 1;
        }
    }
    if w.iter().any(|v| !v.is_finite()) || !b.is_finite() {
        return Err(Error::NonFinite("trained weights".into()));
    }
    Ok(LinearModel {
        weights: w,
        bias: b,
        standardizer,
        config: *data.config(),
        options: *options,
    })
}

impl LinearModel {
    pub fn zero(config: FeatureConfig) -> LinearModel {
        let d = config.dimension();
        LinearModel {
            weights: vec![0.0; d],
            bias: 0.0,
            standardizer: Standardizer {
                means: vec![0.0; d],
                stds: vec![1.0; d],
            },
            config,
            options: TrainOptions::default(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    pub fn ensure_compatible(&self, config: &FeatureConfig) -> Result<()> {
        if config.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: config.dimension(),
                actual: self.dimension(),
            });
        }
        Ok(())
    }

    /// Probability of the prune class, kept strictly inside (0, 1).
    pub fn predict_prune_probability(&self, row: &[f64]) -> Result<f64> {
        if row.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: row.len(),
            });
        }
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("prediction input".into()));
        }
        let mut z = self.bias;
        for j in 0..row.len() {
            let s = &self.standardizer;
            if s.stds[j] > 0.0 {
                z += self.weights[j] * (row[j] - s.means[j]) / s.stds[j];
            }
        }
        Ok(sigmoid(z).clamp(PROB_FLOOR, 1.0 - PROB_FLOOR))
    }

    pub fn predict_keep_probability(&self, row: &[f64]) -> Result<f64> {
        Ok(1.0 - self.predict_prune_probability(row)?)
    }

    pub fn predict_matrix(&self, features: &FeatureMatrix) -> Result<Vec<f64>> {
        self.ensure_compatible(features.config())?;
        features
            .iter_rows()
            .map(|row| self.predict_prune_probability(row))
            .collect()
    }

    pub fn predict_label(&self, row: &[f64]) -> Result<Label> {
        Ok(if self.predict_prune_probability(row)? >= 0.5 {
            Label::Prune
        } else {
            Label::Keep
        })
    }

    /// Fraction of rows whose rounded prune probability matches the label.
    pub fn accuracy(&self, data: &LabeledDataset) -> Result<f64> {
        self.ensure_compatible(data.config())?;
        if data.is_empty() {
            return Err(Error::InvalidDataset("accuracy of an empty dataset".into()));
        }
        let mut hits = 0usize;
        for i in 0..data.len() {
            if self.predict_label(data.row(i))? == data.label(i) {
                hits += 1;
            }
        }
        Ok(hits as f64 / data.len() as f64)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "{MODEL_MAGIC} {MODEL_FORMAT_VERSION}");
        let _ = writeln!(s, "d {}", self.dimension());
        let _ = writeln!(
            s,
            "mode {}",
            match self.config.mode {
                FeatureMode::RealWorld => "real-world",
                FeatureMode::Planted => "planted",
            }
        );
        match self.config.expected {
            ExpectedSource::Empirical => s.push_str("expected empirical\n"),
            ExpectedSource::Analytic { p } => {
                let _ = writeln!(s, "expected analytic {p}");
            }
        }
        let pi = self.config.power_iteration;
        let _ = writeln!(s, "power-iteration {} {}", pi.tolerance, pi.max_iters);
        let _ = writeln!(s, "epochs {}", self.options.epochs);
        let _ = writeln!(s, "l2 {}", self.options.l2);
        let _ = writeln!(s, "eta0 {}", self.options.eta0);
        let _ = writeln!(s, "seed {}", self.options.seed);
        let _ = writeln!(s, "bias {}", self.bias);
        let _ = writeln!(s, "weights {}", join(&self.weights));
        let _ = writeln!(s, "means {}", join(&self.standardizer.means));
        let _ = writeln!(s, "stds {}", join(&self.standardizer.stds));
        s.push_str("end\n");
        s
    }

    pub fn from_text(text: &str) -> Result<LinearModel> {
        ModelParser::new(text).parse()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<LinearModel> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }
}

struct ModelParser<'a> {
    lines: std::iter::Peekable<std::str::Lines<'a>>,
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::ModelFormat(msg.into())
}

fn parse_num<T: std::str::FromStr>(tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| corrupt(format!("invalid {what} '{tok}'")))
}

impl<'a> ModelParser<'a> {
    fn new(text: &'a str) -> Self {
        ModelParser {
            lines: text.lines().peekable(),
        }
    }

    fn field(&mut self, key: &str) -> Result<Vec<&'a str>> {
        let line = self
            .lines
            .next()
            .ok_or_else(|| corrupt(format!("truncated before '{key}'")))?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some(k) if k == key => Ok(toks.collect()),
            other => Err(corrupt(format!("expected '{key}', found '{}'", other.unwrap_or("")))),
        }
    }

    fn scalar<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        match self.field(key)?[..] {
            [tok] => parse_num(tok, key),
            _ => Err(corrupt(format!("'{key}' takes one value"))),
        }
    }

    fn vector(&mut self, key: &str, d: usize) -> Result<Vec<f64>> {
        let toks = self.field(key)?;
        if toks.len() != d {
            return Err(corrupt(format!("'{key}' has {} values, expected {d}", toks.len())));
        }
        toks.into_iter().map(|t| parse_num(t, key)).collect()
    }

    fn parse(mut self) -> Result<LinearModel> {
        let version: u32 = match self.field(MODEL_MAGIC)?[..] {
            [v] => parse_num(v, "version")?,
            _ => return Err(corrupt("malformed header")),
        };
        if version != MODEL_FORMAT_VERSION {
            return Err(corrupt(format!(
                "format version {version} is not supported (expected {MODEL_FORMAT_VERSION})"
            )));
        }
        let d: usize = self.scalar("d")?;
        let mode = match self.field("mode")?[..] {
            ["real-world"] => FeatureMode::RealWorld,
            ["planted"] => FeatureMode::Planted,
            _ => return Err(corrupt("unknown feature mode")),
        };
        let expected = match self.field("expected")?[..] {
            ["empirical"] => ExpectedSource::Empirical,
            ["analytic", p] => ExpectedSource::Analytic {
                p: parse_num(p, "p")?,
            },
            _ => return Err(corrupt("unknown expected-value source")),
        };
        let power_iteration = match self.field("power-iteration")?[..] {
            [tol, iters] => PowerIteration {
                tolerance: parse_num(tol, "tolerance")?,
                max_iters: parse_num(iters, "max_iters")?,
            },
            _ => return Err(corrupt("malformed power-iteration")),
        };
        let config = FeatureConfig {
            mode,
            expected,
            power_iteration,
        };
        if config.dimension() != d {
            return Err(Error::DimensionMismatch {
                expected: config.dimension(),
                actual: d,
            });
        }
        config.validate()?;
        let options = TrainOptions {
            epochs: self.scalar("epochs")?,
            l2: self.scalar("l2")?,
            eta0: self.scalar("eta0")?,
            seed: self.scalar("seed")?,
        };
        let bias = self.scalar("bias")?;
        let weights = self.vector("weights", d)?;
        let means = self.vector("means", d)?;
        let stds = self.vector("stds", d)?;
        self.field("end")?;
        if self.lines.any(|l| !l.trim().is_empty()) {
            return Err(corrupt("trailing content after 'end'"));
        }
        if stds.iter().any(|&s| !(s >= 0.0)) {
            return Err(corrupt("negative standard deviation"));
        }
        Ok(LinearModel {
            weights,
            bias,
            standardizer: Standardizer { means, stds },
            config,
            options,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidation {
    pub mean_accuracy: f64,
    pub fold_accuracies: Vec<f64>,
}

/// Stratified k-fold cross-validation.
pub fn cross_validate(data: &LabeledDataset, folds: usize, options: &TrainOptions) -> Result<CrossValidation> {
    if folds < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 folds, got {folds}")));
    }
    let (keep, prune) = data.class_counts();
    if keep < folds || prune < folds {
        return Err(Error::InvalidDataset(format!(
            "{folds}-fold cross-validation needs {folds} rows per class, got {keep} keep and {prune} prune"
        )));
    }
    let mut rng = rng_from_seed(derive_seed(options.seed, u64::MAX));
    let mut fold_of = vec![0usize; data.len()];
    for class in [Label::Keep, Label::Prune] {
        let mut idx: Vec<usize> = (0..data.len()).filter(|&i| data.label(i) == class).collect();
        idx.shuffle(&mut rng);
        for (pos, i) in idx.into_iter().enumerate() {
            fold_of[i] = pos % folds;
        }
    }
    let mut fold_accuracies = Vec::with_capacity(folds);
    for fold in 0..folds {
        let (test, train_idx): (Vec<usize>, Vec<usize>) =
            (0..data.len()).partition(|&i| fold_of[i] == fold);
        let fold_options = TrainOptions {
            seed: derive_seed(options.seed, fold as u64),
            ..*options
        };
        let model = train(&data.subset(&train_idx), &fold_options)?;
        fold_accuracies.push(model.accuracy(&data.subset(&test))?);
    }
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / folds as f64;
    Ok(CrossValidation {
        mean_accuracy,
        fold_accuracies,
    })
}
