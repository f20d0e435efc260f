// SPDX-License-Identifier: Apache-2.0

//! Learned search-space pruning for maximum clique enumeration.
//!
//! Vertices are classified from cheap structural and statistical features
//! by a logistic-regression model; vertices confidently predicted to lie
//! outside every maximum clique are deleted before an exact enumerator
//! runs on what remains.

pub mod error;
pub mod experiment;
pub mod features;
pub mod graph;
pub mod mce;
pub mod model;
pub mod preprocess;
pub mod rng;
pub mod synth;

pub use error::{Error, Result};
pub use features::{compute_features, ExpectedSource, FeatureConfig, FeatureMatrix, FeatureMode, PowerIteration};
pub use graph::{load_graph, Graph, GraphFormat, LoadedGraph, VertexMapping, VertexSet};
pub use mce::{brute_force_maximum_cliques, enumerate_maximum_cliques, greedy_clique, CliqueReport};
pub use model::{cross_validate, train, Label, LabeledDataset, LinearModel, TrainOptions};
pub use preprocess::{compute_hints, degree_prune, probabilistic_prune, PruneResult};
pub use synth::{build_planted_dataset, clique_number_bound, gen_gnp, plant_clique, PlantedInstance};
