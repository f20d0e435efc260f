// SPDX-License-Identifier: Apache-2.0

//! Maximum clique enumeration.
//!
//! [`enumerate_maximum_cliques`] runs Bron–Kerbosch with Tomita pivoting
//! over a degeneracy ordering, keeps only cliques of the best size seen so
//! far and drops branches that cannot reach that size.

use std::time::{Duration, Instant};

use rand::distributions::{Distribution, WeightedIndex};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::intersect_into;
use crate::graph::{Graph, VertexMapping, VertexSet};
use crate::rng::rng_from_seed;

pub const DEFAULT_CLIQUE_CAP: usize = 1_000_000;
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueReport {
    pub omega: usize,
    /// Exact number of maximum cliques, even when `truncated`.
    pub count: u64,
    /// Set when more than `cap` maximum cliques exist; only the first `cap`
    /// found are stored.
    pub truncated: bool,
    pub cliques: Vec<VertexSet>,
}

impl CliqueReport {
    fn empty() -> Self {
        CliqueReport {
            omega: 0,
            count: 0,
            truncated: false,
            cliques: Vec::new(),
        }
    }

    /// Relabels the cliques through `mapping` (reduced ids to original ids).
    pub fn map_to_original(&self, mapping: &VertexMapping) -> CliqueReport {
        let mut cliques: Vec<VertexSet> = self.cliques.iter().map(|c| mapping.map_set(c)).collect();
        cliques.sort();
        CliqueReport {
            cliques,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    pub cap: usize,
    pub timeout: Option<Duration>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            cap: DEFAULT_CLIQUE_CAP,
            timeout: None,
        }
    }
}

pub fn enumerate_maximum_cliques(g: &Graph, cap: Option<usize>) -> CliqueReport {
    let options = EnumerateOptions {
        cap: cap.unwrap_or(DEFAULT_CLIQUE_CAP),
        timeout: None,
    };
    enumerate_with(g, &options).expect("no timeout configured")
}

/// Like [`enumerate_maximum_cliques`] but fails with [`Error::Timeout`]
/// once the configured wall-clock budget is spent.
pub fn enumerate_with(g: &Graph, options: &EnumerateOptions) -> Result<CliqueReport> {
    let n = g.n();
    if n == 0 {
        return Ok(CliqueReport::empty());
    }
    let started = Instant::now();
    let mut search = Search {
        g,
        cap: options.cap,
        deadline: options.timeout.map(|t| (started + t, t)),
        best: 0,
        count: 0,
        pool: Vec::new(),
        truncated: false,
        nodes: 0,
    };
    let order = degeneracy_order(g);
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v as usize] = i;
    }
    let mut r = Vec::new();
    for &v in &order {
        let pv = position[v as usize];
        let (later, earlier): (Vec<u32>, Vec<u32>) =
            g.neighbors(v).iter().partition(|&&u| position[u as usize] > pv);
        if 1 + later.len() < search.best {
            continue;
        }
        r.push(v);
        search.expand(&mut r, later, earlier)?;
        r.pop();
    }
    let mut cliques = search.pool;
    cliques.sort();
    Ok(CliqueReport {
        omega: search.best,
        count: search.count,
        truncated: search.truncated,
        cliques,
    })
}

struct Search<'a> {
    g: &'a Graph,
    cap: usize,
    deadline: Option<(Instant, Duration)>,
    best: usize,
    count: u64,
    pool: Vec<VertexSet>,
    truncated: bool,
    nodes: u64,
}

impl Search<'_> {
    fn expand(&mut self, r: &mut Vec<u32>, mut p: Vec<u32>, mut x: Vec<u32>) -> Result<()> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some((deadline, budget)) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(Error::Timeout(budget.as_secs_f64()));
                }
            }
        }
        if p.is_empty() {
            if x.is_empty() {
                self.report(r);
            }
            return Ok(());
        }
        if r.len() + p.len() < self.best {
            return Ok(());
        }
        let pivot = self.pivot(&p, &x);
        let candidates: Vec<u32> = {
            let np = self.g.neighbors(pivot);
            p.iter().copied().filter(|v| np.binary_search(v).is_err()).collect()
        };
        let mut next_p = Vec::new();
        let mut next_x = Vec::new();
        for v in candidates {
            if r.len() + p.len() < self.best {
                break;
            }
            let nv = self.g.neighbors(v);
            next_p.clear();
            next_x.clear();
            intersect_into(&p, nv, &mut next_p);
            intersect_into(&x, nv, &mut next_x);
            r.push(v);
            self.expand(r, std::mem::take(&mut next_p), std::mem::take(&mut next_x))?;
            r.pop();
            let at = p.binary_search(&v).expect("candidate is in P");
            p.remove(at);
            let at = x.binary_search(&v).unwrap_err();
            x.insert(at, v);
        }
        Ok(())
    }

    /// Vertex of P ∪ X with the most neighbours in P.
    fn pivot(&self, p: &[u32], x: &[u32]) -> u32 {
        let mut best = (0usize, p[0]);
        for &u in p.iter().chain(x) {
            let hits = count_common(self.g.neighbors(u), p);
            if hits > best.0 {
                best = (hits, u);
            }
        }
        best.1
    }

    fn report(&mut self, r: &[u32]) {
        let size = r.len();
        if size > self.best {
            self.best = size;
            self.count = 0;
            self.pool.clear();
            self.truncated = false;
        }
        if size == self.best {
            self.count += 1;
            if self.pool.len() < self.cap {
                self.pool.push(VertexSet::from_unsorted(r.to_vec()));
            } else {
                self.truncated = true;
            }
        }
    }
}

fn count_common(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Repeatedly removes a vertex of minimum remaining degree (bucket queue).
pub fn degeneracy_order(g: &Graph) -> Vec<u32> {
    let n = g.n();
    let mut degree = g.degrees();
    let max_deg = g.max_degree();
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); max_deg + 1];
    for v in (0..n as u32).rev() {
        buckets[degree[v as usize]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while order.len() < n {
        d = d.min(max_deg);
        while buckets[d].is_empty() {
            d += 1;
        }
        let v = buckets[d].pop().expect("non-empty bucket");
        // Stale entries: the vertex moved to a lower bucket or is gone.
        if removed[v as usize] || degree[v as usize] != d {
            continue;
        }
        removed[v as usize] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            let u = u as usize;
            if !removed[u] {
                degree[u] -= 1;
                buckets[degree[u]].push(u as u32);
            }
        }
        d = d.saturating_sub(1);
    }
    order
}

/// Exhaustive search over all `2^n` vertex subsets.
pub fn brute_force_maximum_cliques(g: &Graph) -> Result<CliqueReport> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::GraphTooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if n == 0 {
        return Ok(CliqueReport::empty());
    }
    let adj: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let total = 1usize << n;
    let mut is_clique = vec![false; total];
    is_clique[0] = true;
    let mut best = 0u32;
    let mut masks = Vec::new();
    for mask in 1..total {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let ok = is_clique[rest] && (rest as u32 & !adj[v]) == 0;
        is_clique[mask] = ok;
        if ok {
            let size = mask.count_ones();
            if size > best {
                best = size;
                masks.clear();
            }
            if size == best {
                masks.push(mask);
            }
        }
    }
    let mut cliques: Vec<VertexSet> = masks
        .into_iter()
        .map(|mask| (0..n as u32).filter(|&v| mask & (1 << v) != 0).collect())
        .collect();
    cliques.sort();
    Ok(CliqueReport {
        omega: best as usize,
        count: cliques.len() as u64,
        truncated: false,
        cliques,
    })
}

/// Greedy maximum-clique heuristic with restarts.
///
/// The first restart seeds with a highest-degree vertex, later ones pick a
/// seed with probability proportional to `degree + 1`. From the seed the
/// clique grows by the candidate with the most neighbours among the
/// remaining candidates, ties going to the lower id.
pub fn greedy_clique(g: &Graph, restarts: usize, seed: u64) -> VertexSet {
    let n = g.n();
    if n == 0 {
        return VertexSet::new();
    }
    let degrees = g.degrees();
    let first = (0..n).max_by_key(|&v| (degrees[v], std::cmp::Reverse(v))).unwrap() as u32;
    let weights = WeightedIndex::new(degrees.iter().map(|&d| d as f64 + 1.0)).expect("positive weights");
    let mut rng = rng_from_seed(seed);
    let mut best: Vec<u32> = Vec::new();
    for restart in 0..restarts.max(1) {
        let start = if restart == 0 {
            first
        } else {
            weights.sample(&mut rng) as u32
        };
        let clique = grow_clique(g, start);
        if clique.len() > best.len() {
            best = clique;
        }
    }
    VertexSet::from_unsorted(best)
}

fn grow_clique(g: &Graph, start: u32) -> Vec<u32> {
    let mut clique = vec![start];
    let mut candidates = g.neighbors(start).to_vec();
    let mut scratch = Vec::new();
    while !candidates.is_empty() {
        let mut pick = (0usize, candidates[0]);
        for &c in &candidates {
            let k = count_common(g.neighbors(c), &candidates);
            if k > pick.0 {
                pick = (k, c);
            }
        }
        clique.push(pick.1);
        scratch.clear();
        intersect_into(&candidates, g.neighbors(pick.1), &mut scratch);
        std::mem::swap(&mut candidates, &mut scratch);
    }
    clique
}
