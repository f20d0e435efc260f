// SPDX-License-Identifier: Apache-2.0

//! Per-vertex feature vectors.
//!
//! Columns, in order: vertex count, edge count, degree, order-3 local
//! clustering coefficient, eigencentrality, chi-squared deviation of the
//! degree, mean chi-squared degree deviation over neighbours, chi-squared
//! deviation of the clustering coefficient, and the neighbour mean of that.
//! Planted mode switches the last two to the order-4 coefficient and appends
//! the order-4 coefficient itself as a tenth column.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const FEATURE_NAMES: [&str; 10] = ["F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureMode {
    /// Nine features, order-3 clustering throughout.
    RealWorld,
    /// Ten features; the clustering statistics use order 4.
    Planted,
}

/// Where the expected values of the chi-squared features come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectedSource {
    /// Graph-level means of the observed quantities.
    Empirical,
    /// The G(n, p) null model, with `n` taken from the graph being featurised.
    Analytic { p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerIteration {
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            tolerance: 1e-10,
            max_iters: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub mode: FeatureMode,
    pub expected: ExpectedSource,
    pub power_iteration: PowerIteration,
}

impl FeatureConfig {
    pub fn real_world() -> Self {
        FeatureConfig {
            mode: FeatureMode::RealWorld,
            expected: ExpectedSource::Empirical,
            power_iteration: PowerIteration::default(),
        }
    }

    pub fn planted(p: f64) -> Self {
        FeatureConfig {
            mode: FeatureMode::Planted,
            expected: ExpectedSource::Analytic { p },
            power_iteration: PowerIteration::default(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self.mode {
            FeatureMode::RealWorld => 9,
            FeatureMode::Planted => 10,
        }
    }

    /// Clustering order used by the chi-squared clustering features.
    pub fn lcc_order(&self) -> usize {
        match self.mode {
            FeatureMode::RealWorld => 3,
            FeatureMode::Planted => 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let ExpectedSource::Analytic { p } = self.expected {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "analytic expectations need p in (0, 1), got {p}"
                )));
            }
        }
        let tol = self.power_iteration.tolerance;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidParameter(format!("power iteration tolerance {tol}")));
        }
        Ok(())
    }
}

/// Row-major feature matrix, one row per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    d: usize,
    values: Vec<f64>,
    config: FeatureConfig,
}

impl FeatureMatrix {
    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn rows(&self) -> usize {
        if self.d == 0 {
            0
        } else {
            self.values.len() / self.d
        }
    }

    pub fn row(&self, v: usize) -> &[f64] {
        &self.values[v * self.d..(v + 1) * self.d]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.d)
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.iter_rows().map(|r| r[j]).collect()
    }

    /// CSV with header `vertex,F1,...,Fd`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["vertex".to_string()];
        header.extend(FEATURE_NAMES[..self.d].iter().map(|s| s.to_string()));
        w.write_record(&header)?;
        for (v, row) in self.iter_rows().enumerate() {
            let mut rec = vec![v.to_string()];
            rec.extend(row.iter().map(|x| x.to_string()));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Pearson's chi-squared term `(O - E)^2 / E` for a single outcome.
pub fn chi_squared(observed: f64, expected: f64) -> Result<f64> {
    if !(expected > 0.0 && expected.is_finite()) {
        return Err(Error::DegenerateExpectation(format!(
            "expected value must be positive and finite, got {expected}"
        )));
    }
    if !observed.is_finite() {
        return Err(Error::NonFinite("chi-squared observation".into()));
    }
    let diff = observed - expected;
    Ok(diff * diff / expected)
}

/// `x choose j` for real `x`, i.e. the gamma-function binomial, which for a
/// non-negative integer `j` reduces to the falling factorial over `j!`.
pub fn generalized_binomial(x: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (x - i as f64) / (i + 1) as f64)
}

/// Expected order-`k` clustering coefficient of a vertex in G(n, p):
/// `C(n-1, k-1) * p^C(k,2) / C(np, k-1)`.
pub fn expected_order_k_lcc(n: usize, p: f64, k: usize) -> Result<f64> {
    if k < 3 || n < k {
        return Err(Error::InvalidParameter(format!(
            "expected LCC needs n >= k >= 3, got n={n}, k={k}"
        )));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1), got {p}")));
    }
    let np = n as f64 * p;
    if np < (k - 1) as f64 {
        return Err(Error::DegenerateExpectation(format!(
            "n*p = {np} is below k-1 = {}",
            k - 1
        )));
    }
    let pairs = (k * (k - 1) / 2) as i32;
    let numer = generalized_binomial((n - 1) as f64, k - 1) * p.powi(pairs);
    Ok(numer / generalized_binomial(np, k - 1))
}

/// Order-`k` local clustering coefficient of `v` for `k` in {3, 4}.
pub fn lcc(g: &Graph, v: u32, k: usize) -> Result<f64> {
    g.check(v)?;
    let count = match k {
        3 => neighborhood_edges(g, v, &mut vec![false; g.n()]),
        4 => neighborhood_triangles(g, v, &mut TriangleScratch::default()),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "clustering order must be 3 or 4, got {k}"
            )))
        }
    };
    Ok(normalize_lcc(count, g.neighbors(v).len(), k))
}

/// Clustering coefficient of every vertex.
pub fn lcc_all(g: &Graph, k: usize) -> Result<Vec<f64>> {
    let n = g.n();
    match k {
        3 => Ok((0..n as u32)
            .into_par_iter()
            .map_init(
                || vec![false; n],
                |mark, v| normalize_lcc(neighborhood_edges(g, v, mark), g.neighbors(v).len(), 3),
            )
            .collect()),
        4 => Ok((0..n as u32)
            .into_par_iter()
            .map_init(TriangleScratch::default, |scratch, v| {
                normalize_lcc(neighborhood_triangles(g, v, scratch), g.neighbors(v).len(), 4)
            })
            .collect()),
        _ => Err(Error::InvalidParameter(format!(
            "clustering order must be 3 or 4, got {k}"
        ))),
    }
}

fn normalize_lcc(count: u64, degree: usize, k: usize) -> f64 {
    // Fewer than k-1 neighbours: no (k-1)-subset exists, define the ratio as 0.
    if degree < k - 1 {
        return 0.0;
    }
    count as f64 / generalized_binomial(degree as f64, k - 1)
}

/// Edges inside N(v). `mark` must be all-false on entry and is restored.
fn neighborhood_edges(g: &Graph, v: u32, mark: &mut [bool]) -> u64 {
    let nv = g.neighbors(v);
    for &u in nv {
        mark[u as usize] = true;
    }
    let mut count = 0u64;
    for &u in nv {
        count += g
            .neighbors(u)
            .iter()
            .filter(|&&w| w > u && mark[w as usize])
            .count() as u64;
    }
    for &u in nv {
        mark[u as usize] = false;
    }
    count
}

/// Neighbourhoods up to this size count triangles with bitsets.
const BITSET_DEGREE_LIMIT: usize = 4096;

#[derive(Default)]
struct TriangleScratch {
    local: Vec<Vec<u32>>,
    bits: Vec<u64>,
    position: Vec<u32>,
}

/// Triangles inside N(v).
fn neighborhood_triangles(g: &Graph, v: u32, scratch: &mut TriangleScratch) -> u64 {
    let nv = g.neighbors(v);
    if nv.len() <= BITSET_DEGREE_LIMIT {
        triangles_bitset(g, nv, scratch)
    } else {
        triangles_merge(g, nv, &mut scratch.local)
    }
}

// Row i holds the positions j > i in `nv` with nv[i] ~ nv[j], so every
// triangle i < j < l is counted once, at row i and bit j.
fn triangles_bitset(g: &Graph, nv: &[u32], scratch: &mut TriangleScratch) -> u64 {
    let d = nv.len();
    let words = d.div_ceil(64);
    let TriangleScratch { bits, position, .. } = scratch;
    if position.len() < g.n() {
        position.resize(g.n(), u32::MAX);
    }
    for (j, &w) in nv.iter().enumerate() {
        position[w as usize] = j as u32;
    }
    bits.clear();
    bits.resize(d * words, 0);
    for (i, &u) in nv.iter().enumerate() {
        let row = &mut bits[i * words..(i + 1) * words];
        let nu = g.neighbors(u);
        for &w in &nu[nu.partition_point(|&w| w <= u)..] {
            let j = position[w as usize];
            if j != u32::MAX {
                row[j as usize / 64] |= 1 << (j % 64);
            }
        }
    }
    for &w in nv {
        position[w as usize] = u32::MAX;
    }
    let mut count = 0u64;
    for i in 0..d {
        let ri = &bits[i * words..(i + 1) * words];
        for (wi, &word) in ri.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let j = wi * 64 + rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let rj = &bits[j * words..(j + 1) * words];
                count += ri[wi..]
                    .iter()
                    .zip(&rj[wi..])
                    .map(|(x, y)| u64::from((x & y).count_ones()))
                    .sum::<u64>();
            }
        }
    }
    count
}

fn triangles_merge(g: &Graph, nv: &[u32], local: &mut Vec<Vec<u32>>) -> u64 {
    if local.len() < nv.len() {
        local.resize_with(nv.len(), Vec::new);
    }
    // local[i] = N(nv[i]) ∩ N(v)
    for (i, &u) in nv.iter().enumerate() {
        local[i].clear();
        intersect_into(g.neighbors(u), nv, &mut local[i]);
    }
    let mut count = 0u64;
    for (i, &u) in nv.iter().enumerate() {
        let a = &local[i];
        let start = a.partition_point(|&w| w <= u);
        for &w in &a[start..] {
            let j = nv.binary_search(&w).expect("w lies in N(v)");
            count += count_common_above(a, &local[j], w);
        }
    }
    count
}

pub(crate) fn intersect_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

fn count_common_above(a: &[u32], b: &[u32], floor: u32) -> u64 {
    let mut i = a.partition_point(|&x| x <= floor);
    let mut j = b.partition_point(|&x| x <= floor);
    let mut count = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigencentrality {
    /// Non-negative, scaled so the largest entry is 1.
    pub values: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Principal adjacency eigenvector by power iteration.
///
/// Iterates with `A + I`, which has the same eigenvectors as `A` but no
/// period-2 oscillation on bipartite components. Starts from the all-ones
/// vector and rescales to unit max-norm every step; stops once successive
/// iterates differ by less than `tol` in max-norm.
pub fn eigencentrality(g: &Graph, tol: f64, max_iters: usize) -> Eigencentrality {
    let n = g.n();
    if g.m() == 0 {
        return Eigencentrality {
            values: vec![0.0; n],
            iterations: 0,
            converged: true,
        };
    }
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    for iter in 1..=max_iters {
        for v in 0..n {
            let s: f64 = g.neighbors(v as u32).iter().map(|&u| x[u as usize]).sum();
            next[v] = x[v] + s;
        }
        let max = next.iter().cloned().fold(0.0, f64::max);
        let mut delta: f64 = 0.0;
        for v in 0..n {
            next[v] /= max;
            delta = delta.max((next[v] - x[v]).abs());
        }
        std::mem::swap(&mut x, &mut next);
        if delta < tol {
            return Eigencentrality {
                values: x,
                iterations: iter,
                converged: true,
            };
        }
    }
    Eigencentrality {
        values: x,
        iterations: max_iters,
        converged: false,
    }
}

pub fn compute_features(g: &Graph, config: &FeatureConfig) -> Result<FeatureMatrix> {
    config.validate()?;
    let n = g.n();
    let d = config.dimension();
    if n == 0 {
        return Ok(FeatureMatrix {
            d,
            values: Vec::new(),
            config: *config,
        });
    }
    let degrees: Vec<f64> = g.degrees().into_iter().map(|x| x as f64).collect();
    let c3 = lcc_all(g, 3)?;
    let c4 = match config.mode {
        FeatureMode::Planted => Some(lcc_all(g, 4)?),
        FeatureMode::RealWorld => None,
    };
    let stat_lcc = c4.as_ref().unwrap_or(&c3);
    let eig = eigencentrality(
        g,
        config.power_iteration.tolerance,
        config.power_iteration.max_iters,
    );

    let (expected_degree, expected_lcc) = match config.expected {
        ExpectedSource::Analytic { p } => (
            n as f64 * p,
            expected_order_k_lcc(n, p, config.lcc_order())?,
        ),
        ExpectedSource::Empirical => (2.0 * g.m() as f64 / n as f64, mean(stat_lcc)),
    };
    let degree_chi = chi_column(&degrees, expected_degree, config.expected)?;
    let lcc_chi = chi_column(stat_lcc, expected_lcc, config.expected)?;
    let degree_chi_nbr = neighbor_means(g, &degree_chi);
    let lcc_chi_nbr = neighbor_means(g, &lcc_chi);

    let mut values = Vec::with_capacity(n * d);
    for v in 0..n {
        values.extend_from_slice(&[
            n as f64,
            g.m() as f64,
            degrees[v],
            c3[v],
            eig.values[v],
            degree_chi[v],
            degree_chi_nbr[v],
            lcc_chi[v],
            lcc_chi_nbr[v],
        ]);
        if let Some(c4) = &c4 {
            values.push(c4[v]);
        }
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("feature matrix".into()));
    }
    Ok(FeatureMatrix {
        d,
        values,
        config: *config,
    })
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

fn chi_column(observed: &[f64], expected: f64, source: ExpectedSource) -> Result<Vec<f64>> {
    // A zero empirical mean means the quantity is zero everywhere.
    if matches!(source, ExpectedSource::Empirical) && expected == 0.0 {
        return Ok(vec![0.0; observed.len()]);
    }
    observed.iter().map(|&o| chi_squared(o, expected)).collect()
}

fn neighbor_means(g: &Graph, values: &[f64]) -> Vec<f64> {
    g.vertices()
        .map(|v| {
            let nbrs = g.neighbors(v);
            if nbrs.is_empty() {
                0.0
            } else {
                nbrs.iter().map(|&u| values[u as usize]).sum::<f64>() / nbrs.len() as f64
            }
        })
        .collect()
}
