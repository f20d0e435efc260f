// SPDX-License-Identifier: Apache-2.0

//! Random instances: G(n, p), planted cliques, and balanced training sets
//! labelled by the planted set.

use rand::seq::index::sample;
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::{compute_features, FeatureConfig};
use crate::graph::{Graph, VertexSet};
use crate::model::{Label, LabeledDataset};
use crate::rng::{derive_seed, rng_from_seed};

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("edge probability must lie in [0, 1], got {p}")))
    }
}

/// Erdős–Rényi G(n, p).
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[derive(Debug, Clone, Serialize)]
pub struct PlantedInstance {
    #[serde(skip)]
    pub graph: Graph,
    pub planted: VertexSet,
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub seed: u64,
}

impl PlantedInstance {
    /// Sidecar describing the instance, written next to its edge list.
    pub fn sidecar_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Makes a uniformly random `k`-subset of `g` complete. `p` is recorded
/// in the instance as given.
pub fn plant_clique(g: &Graph, k: usize, p: f64, seed: u64) -> Result<PlantedInstance> {
    let n = g.n();
    if k > n {
        return Err(Error::InvalidParameter(format!("cannot plant a {k}-clique in {n} vertices")));
    }
    let mut rng = rng_from_seed(seed);
    let planted = VertexSet::from_unsorted(sample(&mut rng, n, k).into_iter().map(|v| v as u32).collect());
    let ids = planted.as_slice();
    let mut edges: Vec<(u32, u32)> = g.edges().collect();
    for (i, &u) in ids.iter().enumerate() {
        edges.extend(ids[i + 1..].iter().map(|&v| (u, v)));
    }
    Ok(PlantedInstance {
        graph: Graph::from_edges(n, edges)?,
        planted,
        n,
        p,
        k,
        seed,
    })
}

/// G(n, p) with a planted `k`-clique; both steps draw from streams of `seed`.
pub fn planted_instance(n: usize, p: f64, k: usize, seed: u64) -> Result<PlantedInstance> {
    let g = gen_gnp(n, p, derive_seed(seed, 0))?;
    let mut inst = plant_clique(&g, k, p, derive_seed(seed, 1))?;
    inst.seed = seed;
    Ok(inst)
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// Greatest `w` with `C(n, w) * p^C(w, 2) >= ln(n)`, evaluated in log space.
pub fn clique_number_bound(n: usize, p: f64) -> Result<usize> {
    if n < 2 || !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "clique number bound needs n >= 2 and p in (0, 1), got n={n}, p={p}"
        )));
    }
    let target = (n as f64).ln().ln();
    let lnp = p.ln();
    Ok((0..=n)
        .filter(|&w| ln_binomial(n, w) + (w * w.saturating_sub(1) / 2) as f64 * lnp >= target)
        .max()
        .unwrap_or(0))
}

/// Default planted sizes `w+2 ..= w+6` for training at `(n, p)`.
pub fn default_k_values(n: usize, p: f64) -> Result<Vec<usize>> {
    let w = clique_number_bound(n, p)?;
    Ok((w + 2..=w + 6).collect())
}

/// Balanced training rows from planted instances.
///
/// Instance `i` plants `k_values[i % len]`, computes planted-mode features
/// with analytic expectations, and contributes `k` rows drawn from the
/// planted set (label keep) plus `k` rows drawn from the other vertices
/// (label prune). Instances are added until at least `min_rows` rows exist.
pub fn build_planted_dataset(
    n: usize,
    p: f64,
    k_values: &[usize],
    min_rows: usize,
    seed: u64,
) -> Result<LabeledDataset> {
    if k_values.is_empty() {
        return Err(Error::InvalidParameter("no planted clique sizes given".into()));
    }
    for &k in k_values {
        if k == 0 || 2 * k > n {
            return Err(Error::InvalidParameter(format!(
                "planted size {k} is infeasible for a balanced dataset on {n} vertices"
            )));
        }
    }
    let config = FeatureConfig::planted(p);
    config.validate()?;
    let mut plan = Vec::new();
    let mut rows = 0;
    while rows < min_rows {
        let k = k_values[plan.len() % k_values.len()];
        plan.push(k);
        rows += 2 * k;
    }
    let parts: Vec<LabeledDataset> = plan
        .par_iter()
        .enumerate()
        .map(|(i, &k)| planted_rows(n, p, k, derive_seed(seed, i as u64), config))
        .collect::<Result<_>>()?;
    let mut out = LabeledDataset::new(config);
    for part in &parts {
        out.extend(part)?;
    }
    Ok(out)
}

fn planted_rows(n: usize, p: f64, k: usize, seed: u64, config: FeatureConfig) -> Result<LabeledDataset> {
    let inst = planted_instance(n, p, k, seed)?;
    let features = compute_features(&inst.graph, &config)?;
    let mut rng = rng_from_seed(derive_seed(seed, 2));
    let others = inst.planted.complement(n);
    let mut rows = LabeledDataset::new(config);
    for i in sample(&mut rng, k, k).into_iter() {
        rows.push_vertex(&features, inst.planted.as_slice()[i], Label::Keep, seed)?;
    }
    for i in sample(&mut rng, others.len(), k).into_iter() {
        rows.push_vertex(&features, others.as_slice()[i], Label::Prune, seed)?;
    }
    Ok(rows)
}

/// A clique core in a sparse periphery: `K_core` plus `periphery` vertices,
/// each joined to `attach` distinct uniformly chosen earlier vertices.
/// Vertex ids are shuffled; the returned set names the core.
pub fn gen_core_periphery(core: usize, periphery: usize, attach: usize, seed: u64) -> Result<(Graph, VertexSet)> {
    if attach > core {
        return Err(Error::InvalidParameter(format!(
            "each periphery vertex needs {attach} earlier vertices but the core has {core}"
        )));
    }
    let n = core + periphery;
    let mut rng = rng_from_seed(seed);
    let mut label: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        label.swap(i, rng.gen_range(0..=i));
    }
    let mut edges = Vec::new();
    for u in 0..core {
        for v in u + 1..core {
            edges.push((label[u], label[v]));
        }
    }
    for v in core..n {
        for u in sample(&mut rng, v, attach).into_iter() {
            edges.push((label[u], label[v]));
        }
    }
    let core_set = VertexSet::from_unsorted(label[..core].to_vec());
    Ok((Graph::from_edges(n, edges)?, core_set))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes() {
        assert_eq!(gen_gnp(10, 0.0, 1).unwrap().m(), 0);
        assert_eq!(gen_gnp(10, 1.0, 1).unwrap(), Graph::complete(10));
        assert!(gen_gnp(10, 1.5, 1).is_err());
        assert_eq!(gen_gnp(30, 0.3, 9).unwrap(), gen_gnp(30, 0.3, 9).unwrap());
    }

    #[test]
    fn plant_examples() {
        let full = plant_clique(&Graph::empty(6), 6, 0.0, 3).unwrap();
        assert_eq!(full.graph, Graph::complete(6));
        let g = gen_gnp(20, 0.3, 4).unwrap();
        for k in [0, 1] {
            assert_eq!(plant_clique(&g, k, 0.3, 5).unwrap().graph, g);
        }
        assert!(plant_clique(&g, 21, 0.3, 5).is_err());
        let inst = planted_instance(64, 0.5, 10, 8).unwrap();
        assert_eq!(inst.planted.len(), 10);
        assert!(inst.graph.is_clique(inst.planted.as_slice()));
    }

    #[test]
    fn bound_examples() {
        // C(64,8) 2^-28 ≈ 16.5 >= ln 64 while C(64,9) 2^-36 ≈ 0.40 is not.
        assert_eq!(clique_number_bound(64, 0.5).unwrap(), 8);
        assert_eq!(clique_number_bound(128, 0.5).unwrap(), 10);
        assert_eq!(clique_number_bound(256, 0.5).unwrap(), 11);
        assert!(clique_number_bound(1, 0.5).is_err());
        assert!(clique_number_bound(64, 1.0).is_err());
        assert_eq!(default_k_values(64, 0.5).unwrap(), vec![10, 11, 12, 13, 14]);
    }

    #[test]
    fn bound_is_monotone_in_n() {
        let ws: Vec<usize> = (16..=1024).map(|n| clique_number_bound(n, 0.5).unwrap()).collect();
        assert!(ws.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn dataset_arithmetic() {
        let data = build_planted_dataset(64, 0.5, &[10], 40, 1).unwrap();
        assert_eq!(data.len(), 40);
        assert_eq!(data.class_counts(), (20, 20));
        let seeds: std::collections::BTreeSet<u64> =
            (0..data.len()).map(|i| data.provenance(i).unwrap().graph_seed).collect();
        assert_eq!(seeds.len(), 2);
        assert!(build_planted_dataset(64, 0.5, &[33], 10, 1).is_err());
        assert!(build_planted_dataset(64, 0.5, &[], 10, 1).is_err());
    }

    #[test]
    fn keep_rows_are_planted_vertices() {
        let data = build_planted_dataset(40, 0.5, &[6], 100, 3).unwrap();
        let (keep, prune) = data.class_counts();
        assert_eq!(keep, prune);
        for i in 0..data.len() {
            let prov = data.provenance(i).unwrap();
            let inst = planted_instance(40, 0.5, 6, prov.graph_seed).unwrap();
            assert_eq!(inst.planted.contains(prov.vertex), data.label(i) == Label::Keep);
        }
    }

    #[test]
    fn core_periphery_shape() {
        let (g, core) = gen_core_periphery(10, 50, 2, 7).unwrap();
        assert_eq!(g.n(), 60);
        assert_eq!(g.m(), 45 + 100);
        assert_eq!(core.len(), 10);
        assert!(g.is_clique(core.as_slice()));
        assert!(gen_core_periphery(2, 5, 3, 0).is_err());
    }
}
