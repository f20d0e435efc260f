// SPDX-License-Identifier: Apache-2.0

//! Immutable simple undirected graphs in compressed adjacency form.

mod io;

pub use io::{load_graph, read_graph, write_edge_list, write_id_map, GraphFormat, LoadedGraph};

use serde::Serialize;

use crate::error::{Error, Result};

/// Simple undirected graph with contiguous ids `0..n`.
///
/// Adjacency is stored as an offset array into one flat neighbour array.
/// Every neighbour list is sorted ascending, free of duplicates and never
/// contains its own vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m())
            .finish()
    }
}

impl Graph {
    /// Builds a graph on `n` vertices. Self-loops and repeated edges are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for id in [u, v] {
                if id as usize >= n {
                    return Err(Error::VertexOutOfRange { id: id as u64, n });
                }
            }
            if u != v {
                pairs.push((u, v));
                pairs.push((v, u));
            }
        }
        Ok(Self::from_directed_pairs(n, pairs))
    }

    /// `pairs` must already be symmetric and in range.
    fn from_directed_pairs(n: usize, mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let neighbors = pairs.into_iter().map(|(_, v)| v).collect();
        Graph { offsets, neighbors }
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let n32 = n as u32;
        let edges = (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("ids in range")
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, v: u32) -> Result<usize> {
        self.check(v)?;
        Ok(self.neighbors(v).len())
    }

    /// Sorted neighbours of `v`. Panics if `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.offsets.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        0..self.n() as u32
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let (a, b) = if self.neighbors(u).len() <= self.neighbors(v).len() {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn is_clique(&self, vertices: &[u32]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            (u as usize) < self.n() && vertices[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v))
        })
    }

    /// Subgraph induced by `keep`, relabelled densely in ascending id order.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<(Graph, VertexMapping)> {
        let n = self.n();
        if let Some(&last) = keep.as_slice().last() {
            self.check(last)?;
        }
        let mut new_id = vec![u32::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v as usize] = i as u32;
        }
        let mut offsets = Vec::with_capacity(keep.len() + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for &v in keep.iter() {
            // Old ids ascend and the relabelling is monotone, so lists stay sorted.
            neighbors.extend(
                self.neighbors(v)
                    .iter()
                    .map(|&u| new_id[u as usize])
                    .filter(|&u| u != u32::MAX),
            );
            offsets.push(neighbors.len());
        }
        Ok((
            Graph { offsets, neighbors },
            VertexMapping(keep.as_slice().to_vec()),
        ))
    }

    pub(crate) fn check(&self, v: u32) -> Result<()> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                id: v as u64,
                n: self.n(),
            })
        }
    }
}

/// Sorted set of distinct vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<u32>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_unsorted(mut ids: Vec<u32>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }

    pub fn all(n: usize) -> Self {
        VertexSet((0..n as u32).collect())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u32> {
        self.0.iter()
    }

    /// `{0..n} \ self`.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mut out = Vec::with_capacity(n.saturating_sub(self.len()));
        let mut it = self.0.iter().peekable();
        for v in 0..n as u32 {
            if it.peek() == Some(&&v) {
                it.next();
            } else {
                out.push(v);
            }
        }
        VertexSet(out)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut ids = self.0.clone();
        ids.extend_from_slice(&other.0);
        VertexSet::from_unsorted(ids)
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        VertexSet::from_unsorted(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a u32;
    type IntoIter = std::slice::Iter<'a, u32>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Maps ids of a reduced graph back to the ids of the graph it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMapping(Vec<u32>);

impl VertexMapping {
    pub fn identity(n: usize) -> Self {
        VertexMapping((0..n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_original(&self, v: u32) -> u32 {
        self.0[v as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn map_set(&self, set: &VertexSet) -> VertexSet {
        // Monotone, so the image is already sorted.
        VertexSet(set.iter().map(|&v| self.0[v as usize]).collect())
    }

    /// `self` maps C -> B and `outer` maps B -> A; the result maps C -> A.
    pub fn then(&self, outer: &VertexMapping) -> VertexMapping {
        VertexMapping(self.0.iter().map(|&v| outer.0[v as usize]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn degree_examples() {
        let tri = Graph::complete(3);
        for v in 0..3 {
            assert_eq!(tri.degree(v).unwrap(), 2);
        }
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.degree(0).unwrap(), 3);
        assert_eq!(star.degree(2).unwrap(), 1);
        let iso = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(iso.degree(2).unwrap(), 0);
        assert!(matches!(iso.degree(3), Err(Error::VertexOutOfRange { id: 3, n: 3 })));
    }

    #[test]
    fn construction_drops_loops_and_duplicates() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1), (2, 2)]).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.neighbors(0), &[1]);
        assert!(g.neighbors(2).is_empty());
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn induced_subgraph_examples() {
        let (k3, map) = Graph::complete(4)
            .induced_subgraph(&VertexSet::from_unsorted(vec![0, 1, 2]))
            .unwrap();
        assert_eq!(k3, Graph::complete(3));
        assert_eq!(map.as_slice(), &[0, 1, 2]);

        let (single, _) = Graph::complete(3)
            .induced_subgraph(&VertexSet::from_unsorted(vec![0]))
            .unwrap();
        assert_eq!((single.n(), single.m()), (1, 0));

        let (two, map) = path3()
            .induced_subgraph(&VertexSet::from_unsorted(vec![0, 2]))
            .unwrap();
        assert_eq!((two.n(), two.m()), (2, 0));
        assert_eq!(map.to_original(1), 2);

        let err = path3().induced_subgraph(&VertexSet::from_unsorted(vec![0, 5]));
        assert!(err.is_err());
    }

    #[test]
    fn induced_on_everything_is_identity() {
        let g = Graph::from_edges(5, [(0, 4), (1, 2), (2, 3), (3, 4)]).unwrap();
        let (h, map) = g.induced_subgraph(&VertexSet::all(5)).unwrap();
        assert_eq!(h, g);
        assert_eq!(map, VertexMapping::identity(5));
    }

    #[test]
    fn complement_and_union() {
        let s = VertexSet::from_unsorted(vec![3, 1, 1]);
        assert_eq!(s.as_slice(), &[1, 3]);
        assert_eq!(s.complement(5).as_slice(), &[0, 2, 4]);
        assert_eq!(s.union(&s.complement(5)), VertexSet::all(5));
    }

    #[test]
    fn clique_check() {
        let g = Graph::complete(4);
        assert!(g.is_clique(&[0, 1, 3]));
        assert!(!path3().is_clique(&[0, 1, 2]));
        assert!(!g.is_clique(&[0, 0]));
    }
}
