// SPDX-License-Identifier: Apache-2.0

//! Search-space reduction: classifier-driven vertex deletion, hint sets,
//! and the degree method.

use std::collections::VecDeque;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::compute_features;
use crate::graph::{Graph, VertexMapping, VertexSet};
use crate::model::LinearModel;

#[derive(Debug, Clone, PartialEq)]
pub struct PruneResult {
    pub reduced: Graph,
    /// Reduced ids to input ids.
    pub mapping: VertexMapping,
    /// Removed vertices, as input ids.
    pub removed: VertexSet,
    /// `|removed| / n` of the input graph.
    pub pruning_ratio: f64,
}

impl PruneResult {
    pub fn from_removed(g: &Graph, removed: VertexSet) -> Result<PruneResult> {
        let keep = removed.complement(g.n());
        let (reduced, mapping) = g.induced_subgraph(&keep)?;
        let pruning_ratio = if g.n() == 0 {
            0.0
        } else {
            removed.len() as f64 / g.n() as f64
        };
        Ok(PruneResult {
            reduced,
            mapping,
            removed,
            pruning_ratio,
        })
    }

    pub fn to_json(&self, reduced_path: Option<&Path>) -> Result<String> {
        #[derive(Serialize)]
        struct Export<'a> {
            removed: &'a VertexSet,
            pruning_ratio: f64,
            reduced_vertices: usize,
            reduced_edges: usize,
            reduced_graph: Option<String>,
        }
        Ok(serde_json::to_string_pretty(&Export {
            removed: &self.removed,
            pruning_ratio: self.pruning_ratio,
            reduced_vertices: self.reduced.n(),
            reduced_edges: self.reduced.m(),
            reduced_graph: reduced_path.map(|p| p.display().to_string()),
        })?)
    }
}

fn check_threshold(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("confidence threshold q must lie in [0, 1], got {q}")))
    }
}

/// `P(prune)` for every vertex, from features computed on `g` as given.
pub fn prune_probabilities(g: &Graph, model: &LinearModel) -> Result<Vec<f64>> {
    model.ensure_compatible(&model.config)?;
    let features = compute_features(g, &model.config)?;
    model.predict_matrix(&features)
}

/// Removes every vertex whose prune probability is at least `q`.
pub fn prune_by_probabilities(g: &Graph, prune_probs: &[f64], q: f64) -> Result<PruneResult> {
    check_threshold(q)?;
    if prune_probs.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            actual: prune_probs.len(),
        });
    }
    let removed = VertexSet::from_unsorted(
        (0..g.n() as u32).filter(|&v| prune_probs[v as usize] >= q).collect(),
    );
    PruneResult::from_removed(g, removed)
}

pub fn probabilistic_prune(g: &Graph, model: &LinearModel, q: f64) -> Result<PruneResult> {
    check_threshold(q)?;
    let probs = prune_probabilities(g, model)?;
    prune_by_probabilities(g, &probs, q)
}

/// Vertices whose keep probability is at least `q`.
pub fn hints_from_probabilities(prune_probs: &[f64], q: f64) -> Result<VertexSet> {
    check_threshold(q)?;
    Ok(VertexSet::from_unsorted(
        (0..prune_probs.len() as u32)
            .filter(|&v| 1.0 - prune_probs[v as usize] >= q)
            .collect(),
    ))
}

pub fn compute_hints(g: &Graph, model: &LinearModel, q: f64) -> Result<VertexSet> {
    check_threshold(q)?;
    hints_from_probabilities(&prune_probabilities(g, model)?, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeRule {
    /// Peel to the (k-1)-core.
    #[default]
    Fixpoint,
    /// One sweep over the input degrees.
    SinglePass,
}

/// The degree method for a known clique of size `k`: delete vertices of
/// degree below `k - 1`.
pub fn degree_prune(g: &Graph, k: usize) -> PruneResult {
    degree_prune_with(g, k, DegreeRule::Fixpoint)
}

pub fn degree_prune_with(g: &Graph, k: usize, rule: DegreeRule) -> PruneResult {
    let n = g.n();
    let threshold = k.saturating_sub(1);
    let mut degree = g.degrees();
    let mut removed = vec![false; n];
    let mut queue: VecDeque<u32> = (0..n as u32).filter(|&v| degree[v as usize] < threshold).collect();
    for &v in &queue {
        removed[v as usize] = true;
    }
    if rule == DegreeRule::Fixpoint {
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                let u = u as usize;
                if !removed[u] {
                    degree[u] -= 1;
                    if degree[u] < threshold {
                        removed[u] = true;
                        queue.push_back(u as u32);
                    }
                }
            }
        }
    }
    let removed = VertexSet::from_unsorted((0..n as u32).filter(|&v| removed[v as usize]).collect());
    PruneResult::from_removed(g, removed).expect("removed ids are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureConfig;

    fn k4_pendant() -> Graph {
        Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn degree_prune_examples() {
        let r = degree_prune(&k4_pendant(), 4);
        assert_eq!(r.removed.as_slice(), &[4]);
        assert_eq!(r.reduced, Graph::complete(4));
        assert_eq!(r.pruning_ratio, 0.2);

        let all = degree_prune(&Graph::complete(4), 5);
        assert_eq!(all.removed.len(), 4);
        assert_eq!(all.reduced.n(), 0);

        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert!(degree_prune(&c5, 3).removed.is_empty());
        assert!(degree_prune(&c5, 1).removed.is_empty());
    }

    #[test]
    fn fixpoint_is_stronger_than_single_pass() {
        // Path 0-1-2-3 with k = 3: one sweep removes the ends, peeling removes all.
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(degree_prune_with(&path, 3, DegreeRule::SinglePass).removed.as_slice(), &[0, 3]);
        assert_eq!(degree_prune(&path, 3).removed.len(), 4);
    }

    #[test]
    fn zero_model_prunes_nothing_at_055() {
        let g = k4_pendant();
        let model = LinearModel::zero(FeatureConfig::real_world());
        let r = probabilistic_prune(&g, &model, 0.55).unwrap();
        assert!(r.removed.is_empty());
        assert_eq!(r.pruning_ratio, 0.0);
        assert_eq!(compute_hints(&g, &model, 0.5).unwrap(), VertexSet::all(5));
        assert!(compute_hints(&g, &model, 0.55).unwrap().is_empty());
        assert!(probabilistic_prune(&g, &model, 1.5).is_err());
    }

    #[test]
    fn saturated_model_and_q_one() {
        let g = k4_pendant();
        let mut model = LinearModel::zero(FeatureConfig::real_world());
        model.bias = 1e6;
        assert!(probabilistic_prune(&g, &model, 1.0).unwrap().removed.is_empty());
        assert_eq!(probabilistic_prune(&g, &model, 0.99).unwrap().removed.len(), 5);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut model = LinearModel::zero(FeatureConfig::real_world());
        model.weights.push(0.0);
        assert!(matches!(
            probabilistic_prune(&k4_pendant(), &model, 0.5),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn prune_json_lists_removed() {
        let r = degree_prune(&k4_pendant(), 4);
        let v: serde_json::Value =
            serde_json::from_str(&r.to_json(Some(Path::new("out.el"))).unwrap()).unwrap();
        assert_eq!(v["removed"], serde_json::json!([4]));
        assert_eq!(v["pruning_ratio"], 0.2);
        assert_eq!(v["reduced_graph"], "out.el");
    }
}
