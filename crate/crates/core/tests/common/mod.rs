// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

use cliqueprune::synth::gen_gnp;
use cliqueprune::Graph;
use proptest::prelude::*;

pub const DENSITIES: [f64; 3] = [0.2, 0.5, 0.8];

/// Small G(n, p) graphs with `n <= max_n` and `p` from [`DENSITIES`].
pub fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n, 0..DENSITIES.len(), any::<u64>()).prop_map(|(n, i, seed)| gen_gnp(n, DENSITIES[i], seed).unwrap())
}

/// The fixed 200-graph corpus: n cycles through 1..=14 and p through the
/// three densities.
pub fn corpus() -> Vec<Graph> {
    (0..200u64)
        .map(|i| gen_gnp(1 + (i as usize % 14), DENSITIES[i as usize % 3], 0xC0FFEE + i).unwrap())
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Order-`k` clustering by checking every (k-1)-subset of N(v).
pub fn brute_force_lcc(g: &Graph, v: u32, k: usize) -> f64 {
    let nv = g.neighbors(v);
    let r = k - 1;
    if nv.len() < r {
        return 0.0;
    }
    let mut cliques = 0usize;
    for mask in 0u32..(1 << nv.len()) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let subset: Vec<u32> = (0..nv.len()).filter(|&i| mask >> i & 1 == 1).map(|i| nv[i]).collect();
        if g.is_clique(&subset) {
            cliques += 1;
        }
    }
    cliques as f64 / binomial(nv.len(), r)
}

/// Adjacency check that does not go through the CSR search.
pub fn adjacent(g: &Graph, u: u32, v: u32) -> bool {
    g.neighbors(u).contains(&v)
}
