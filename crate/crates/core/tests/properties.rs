// SPDX-License-Identifier: Apache-2.0

mod common;

use cliqueprune::experiment::{run_planted_experiment, PlantedExperiment};
use cliqueprune::features::{chi_squared, eigencentrality, lcc};
use cliqueprune::graph::{read_graph, write_edge_list};
use cliqueprune::mce::{brute_force_maximum_cliques, enumerate_maximum_cliques, greedy_clique};
use cliqueprune::model::{logistic_gradient, logistic_objective, Standardizer};
use cliqueprune::preprocess::{degree_prune, hints_from_probabilities, prune_by_probabilities};
use cliqueprune::synth::{gen_gnp, plant_clique};
use cliqueprune::{
    compute_features, train, FeatureConfig, Graph, GraphFormat, Label, LabeledDataset, LinearModel, TrainOptions,
    VertexSet,
};
use common::{adjacent, brute_force_lcc, small_graph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enumerator_matches_brute_force(g in small_graph(14)) {
        let fast = enumerate_maximum_cliques(&g, None);
        let slow = brute_force_maximum_cliques(&g).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn reported_cliques_are_cliques(g in small_graph(20)) {
        let r = enumerate_maximum_cliques(&g, None);
        prop_assert_eq!(r.count as usize, r.cliques.len());
        for c in &r.cliques {
            prop_assert_eq!(c.len(), r.omega);
            for (i, &u) in c.iter().enumerate() {
                for &v in &c.as_slice()[i + 1..] {
                    prop_assert!(adjacent(&g, u, v));
                }
            }
        }
    }

    #[test]
    fn degree_method_is_safe(g in small_graph(14), seed in any::<u64>()) {
        let k = greedy_clique(&g, 4, seed).len();
        let before = enumerate_maximum_cliques(&g, None);
        let pruned = degree_prune(&g, k);
        let after = enumerate_maximum_cliques(&pruned.reduced, None).map_to_original(&pruned.mapping);
        prop_assert_eq!(before, after);
    }

    #[test]
    fn lcc_matches_subset_enumeration(g in small_graph(12)) {
        for v in g.vertices() {
            for k in [3, 4] {
                prop_assert_eq!(lcc(&g, v, k).unwrap(), brute_force_lcc(&g, v, k));
            }
        }
    }

    #[test]
    fn sum_of_degrees_is_twice_m(g in small_graph(40)) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.m());
    }

    #[test]
    fn edge_list_round_trip(g in small_graph(30)) {
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = read_graph(std::str::from_utf8(&buf).unwrap(), GraphFormat::EdgeList).unwrap();
        prop_assert_eq!(back.graph, g);
    }

    #[test]
    fn induced_on_everything_is_identity(g in small_graph(30)) {
        let (h, map) = g.induced_subgraph(&VertexSet::all(g.n())).unwrap();
        prop_assert_eq!(&h, &g);
        prop_assert!((0..g.n() as u32).all(|v| map.to_original(v) == v));
    }

    #[test]
    fn chi_squared_zero_iff_equal(o in 0.0f64..100.0, e in 0.01f64..100.0) {
        let x = chi_squared(o, e).unwrap();
        prop_assert!(x >= 0.0);
        prop_assert_eq!(x == 0.0, o == e);
        prop_assert_eq!(chi_squared(e, e).unwrap(), 0.0);
    }

    #[test]
    fn greedy_never_exceeds_omega(n in 1usize..=64, i in 0usize..3, seed in any::<u64>()) {
        let g = gen_gnp(n, common::DENSITIES[i], seed).unwrap();
        let c = greedy_clique(&g, 4, seed);
        prop_assert!(g.is_clique(c.as_slice()));
        prop_assert!(c.len() <= enumerate_maximum_cliques(&g, None).omega);
        prop_assert_eq!(greedy_clique(&g, 4, seed), c);
    }

    #[test]
    fn features_finite_and_deterministic(g in small_graph(30)) {
        prop_assume!(g.n() >= 1);
        let a = compute_features(&g, &FeatureConfig::real_world()).unwrap();
        prop_assert!(a.iter_rows().flatten().all(|x| x.is_finite()));
        let b = compute_features(&g, &FeatureConfig::real_world()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn plant_clique_makes_a_clique(n in 2usize..60, k in 1usize..20, p in 0.0f64..=1.0, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let g = gen_gnp(n, p, seed).unwrap();
        let inst = plant_clique(&g, k, p, seed ^ 1).unwrap();
        prop_assert_eq!(inst.planted.len(), k);
        let pl = inst.planted.as_slice();
        for (i, &u) in pl.iter().enumerate() {
            for &v in &pl[i + 1..] {
                prop_assert!(adjacent(&inst.graph, u, v));
            }
        }
        prop_assert!(g.edges().all(|(u, v)| inst.graph.has_edge(u, v)));
    }

    #[test]
    fn gnp_is_deterministic(n in 0usize..80, p in 0.0f64..=1.0, seed in any::<u64>()) {
        prop_assert_eq!(gen_gnp(n, p, seed).unwrap(), gen_gnp(n, p, seed).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigencentrality_residual(n in 2usize..40, i in 0usize..3, seed in any::<u64>()) {
        let g = gen_gnp(n, common::DENSITIES[i], seed).unwrap();
        // Disconnected graphs have no unique principal vector.
        prop_assume!(is_connected(&g));
        let tol = 1e-10;
        let e = eigencentrality(&g, tol, 10_000);
        prop_assert!(e.converged);
        let x = &e.values;
        let ax: Vec<f64> = g.vertices().map(|v| g.neighbors(v).iter().map(|&u| x[u as usize]).sum()).collect();
        let lambda = dot(x, &ax) / dot(x, x);
        let residual = ax.iter().zip(x).map(|(a, b)| (a - lambda * b).abs()).fold(0.0, f64::max);
        prop_assert!(residual / lambda <= 10.0 * tol, "residual {residual}, lambda {lambda}");
        prop_assert!((x.iter().cloned().fold(0.0, f64::max) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_central_differences(
        rows in 1usize..12,
        d in 1usize..5,
        raw in prop::collection::vec(-2.0f64..2.0, 64),
        bits in prop::collection::vec(any::<bool>(), 12),
        l2 in 0.0f64..0.1,
    ) {
        let x: Vec<f64> = raw.iter().cycle().take(rows * d).cloned().collect();
        let labels: Vec<Label> = bits[..rows].iter().map(|&b| if b { Label::Prune } else { Label::Keep }).collect();
        let w: Vec<f64> = raw[raw.len() - d..].iter().map(|v| v * 0.7).collect();
        let b = raw[0] * 0.3;
        let (gw, gb) = logistic_gradient(&x, &labels, &w, b, l2);
        let h = 1e-5;
        let f = |w: &[f64], b: f64| logistic_objective(&x, &labels, w, b, l2);
        let mut numeric = Vec::with_capacity(d + 1);
        for j in 0..d {
            let (mut up, mut down) = (w.clone(), w.clone());
            up[j] += h;
            down[j] -= h;
            numeric.push((f(&up, b) - f(&down, b)) / (2.0 * h));
        }
        numeric.push((f(&w, b + h) - f(&w, b - h)) / (2.0 * h));
        let analytic: Vec<f64> = gw.iter().cloned().chain([gb]).collect();
        let diff = norm(&analytic.iter().zip(&numeric).map(|(a, n)| a - n).collect::<Vec<_>>());
        let scale = norm(&analytic).max(norm(&numeric)).max(1e-8);
        prop_assert!(diff / scale <= 1e-5, "relative error {}", diff / scale);
    }

    #[test]
    fn keep_and_prune_probabilities_sum_to_one(
        w in prop::collection::vec(-5.0f64..5.0, 9),
        bias in -20.0f64..20.0,
        row in prop::collection::vec(-1e3f64..1e3, 9),
    ) {
        let mut model = LinearModel::zero(FeatureConfig::real_world());
        model.weights = w;
        model.bias = bias;
        let prune = model.predict_prune_probability(&row).unwrap();
        let keep = model.predict_keep_probability(&row).unwrap();
        prop_assert!((0.0..=1.0).contains(&prune));
        prop_assert_eq!(keep + prune, 1.0);
    }

    #[test]
    fn standardized_columns_have_unit_moments(
        raw in prop::collection::vec(-1e4f64..1e4, 20..200),
    ) {
        let cfg = FeatureConfig::real_world();
        let mut data = LabeledDataset::new(cfg);
        let rows = raw.len() / 9;
        prop_assume!(rows >= 2);
        for i in 0..rows {
            let label = if i % 2 == 0 { Label::Keep } else { Label::Prune };
            data.push(&raw[i * 9..(i + 1) * 9], label, None).unwrap();
        }
        let s = Standardizer::fit(&data);
        for j in 0..9 {
            let col: Vec<f64> = (0..rows).map(|i| s.transform(data.row(i))[j]).collect();
            if s.stds[j] == 0.0 {
                prop_assert!(col.iter().all(|&x| x == 0.0));
                continue;
            }
            let mean = col.iter().sum::<f64>() / rows as f64;
            let var = col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / rows as f64;
            prop_assert!(mean.abs() < 1e-9);
            prop_assert!((var.sqrt() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn pruning_monotone_in_q(
        g in small_graph(30),
        w in prop::collection::vec(-3.0f64..3.0, 9),
        bias in -2.0f64..2.0,
    ) {
        prop_assume!(g.n() >= 1);
        let mut model = LinearModel::zero(FeatureConfig::real_world());
        model.weights = w;
        model.bias = bias;
        let probs = model.predict_matrix(&compute_features(&g, &model.config).unwrap()).unwrap();
        let mut last = f64::INFINITY;
        for step in 0..=20 {
            let q = step as f64 / 20.0;
            let r = prune_by_probabilities(&g, &probs, q).unwrap();
            prop_assert!(r.pruning_ratio <= last);
            last = r.pruning_ratio;
            if q <= 0.5 {
                let hints = hints_from_probabilities(&probs, q).unwrap();
                prop_assert_eq!(r.removed.union(&hints), VertexSet::all(g.n()));
            }
        }
        prop_assert_eq!(last, 0.0);
    }

    #[test]
    fn degree_then_model_ratios_add(
        g in small_graph(30),
        w in prop::collection::vec(-3.0f64..3.0, 9),
        k in 1usize..6,
    ) {
        prop_assume!(g.n() >= 1);
        let mut model = LinearModel::zero(FeatureConfig::real_world());
        model.weights = w;
        let first = degree_prune(&g, k);
        let probs = model.predict_matrix(&compute_features(&first.reduced, &model.config).unwrap()).unwrap();
        let second = prune_by_probabilities(&first.reduced, &probs, 0.55).unwrap();
        let removed = first.removed.len() + second.removed.len();
        let combined = first.removed.union(&first.mapping.map_set(&second.removed));
        prop_assert_eq!(combined.len(), removed);
        let ratio = removed as f64 / g.n() as f64;
        let second_vs_original = second.removed.len() as f64 / g.n() as f64;
        prop_assert!((ratio - (first.pruning_ratio + second_vs_original)).abs() < 1e-12);
    }
}

#[test]
fn retraining_is_bit_identical() {
    let data = cliqueprune::build_planted_dataset(40, 0.5, &[8], 400, 9).unwrap();
    let options = TrainOptions {
        epochs: 30,
        ..TrainOptions::with_seed(4)
    };
    let a = train(&data, &options).unwrap();
    let b = train(&data, &options).unwrap();
    assert_eq!(a.to_text(), b.to_text());
}

#[test]
fn experiments_replay_from_their_seed() {
    let spec = PlantedExperiment {
        train_rows: 300,
        train_options: TrainOptions {
            epochs: 20,
            ..Default::default()
        },
        ..PlantedExperiment::new((32, 8), vec![(32, 9), (40, 10)], 4, 0.55, 77)
    };
    let strip = |r: &cliqueprune::experiment::ExperimentReport| {
        r.records
            .iter()
            .map(|x| {
                (
                    x.n,
                    x.k,
                    x.seed,
                    x.pruning_ratio.to_bits(),
                    x.vertex_accuracy.map(f64::to_bits),
                    x.clique_accuracy,
                    x.omega_original,
                    x.omega_reduced,
                    x.count_original,
                    x.count_reduced,
                )
            })
            .collect::<Vec<_>>()
    };
    let a = run_planted_experiment(&spec).unwrap();
    let b = run_planted_experiment(&spec).unwrap();
    assert_eq!(strip(&a), strip(&b));

    // Aggregates are plain means of the per-instance records.
    for g in &a.groups {
        let members: Vec<_> = a.records.iter().filter(|r| (r.n, r.k) == (g.n, g.k)).collect();
        let mean = members.iter().map(|r| r.pruning_ratio).sum::<f64>() / members.len() as f64;
        assert!((g.aggregate.mean_pruning_ratio - mean).abs() < 1e-12);
        for r in members {
            let expected = r.solve_time_original.unwrap()
                / (r.feature_time + r.prune_time + r.solve_time_reduced.unwrap());
            assert_eq!(r.speedup(), Some(expected));
        }
    }
}

fn is_connected(g: &Graph) -> bool {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![0u32];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if !seen[u as usize] {
                seen[u as usize] = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
