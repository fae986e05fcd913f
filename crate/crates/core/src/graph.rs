//! Weighted undirected graphs and the shortest-path machinery shared by the
//! metric layer, the separator orderings, and the attack evaluator.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::PointId;

/// Undirected graph with positive edge weights. Parallel edges are merged
/// keeping the lightest one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(PointId, PointId, f64)>,
    adj: Vec<Vec<(PointId, f64)>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<(PointId, PointId, f64)>,
}

impl TryFrom<RawGraph> for WeightedGraph {
    type Error = Error;
    fn try_from(raw: RawGraph) -> Result<Self> {
        WeightedGraph::new(raw.n, raw.edges)
    }
}

impl From<WeightedGraph> for RawGraph {
    fn from(g: WeightedGraph) -> Self {
        RawGraph {
            n: g.n,
            edges: g.edges,
        }
    }
}

impl WeightedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (PointId, PointId, f64)>) -> Result<Self> {
        let mut merged: BTreeMap<(PointId, PointId), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at {u}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeight { u, v, weight: w });
            }
            let key = (u.min(v), u.max(v));
            merged
                .entry(key)
                .and_modify(|old| *old = old.min(w))
                .or_insert(w);
        }
        let edges: Vec<_> = merged.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        Ok(WeightedGraph { n, edges, adj })
    }

    /// Unit-weight graph from an edge list.
    pub fn unweighted(
        n: usize,
        edges: impl IntoIterator<Item = (PointId, PointId)>,
    ) -> Result<Self> {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(PointId, PointId, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, v: PointId) -> &[(PointId, f64)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: PointId) -> usize {
        self.adj[v].len()
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components(None).len() == 1
    }

    /// Connected components of the subgraph induced by `alive` (all vertices
    /// when `None`). Components are sorted by their smallest vertex and each
    /// lists its vertices in ascending order.
    pub fn components(&self, alive: Option<&[bool]>) -> Vec<Vec<PointId>> {
        let is_alive = |v: PointId| alive.is_none_or(|a| a[v]);
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] || !is_alive(s) {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.adj[u] {
                    if !seen[v] && is_alive(v) {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Single-source shortest paths restricted to `alive` vertices.
    pub fn dijkstra(&self, source: PointId, alive: Option<&[bool]>) -> ShortestPaths {
        let mut dist = vec![f64::INFINITY; self.n];
        let mut pred = vec![None; self.n];
        let mut done = vec![false; self.n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(HeapEntry {
            dist: 0.0,
            node: source,
        });
        while let Some(HeapEntry { dist: d, node: u }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &(v, w) in &self.adj[u] {
                if alive.is_some_and(|a| !a[v]) || done[v] {
                    continue;
                }
                let nd = d + w;
                // Ties prefer the smaller predecessor so paths are deterministic.
                let better = nd < dist[v] || (nd == dist[v] && pred[v].is_some_and(|p| u < p));
                if better {
                    dist[v] = nd;
                    pred[v] = Some(u);
                    heap.push(HeapEntry { dist: nd, node: v });
                }
            }
        }
        ShortestPaths { source, dist, pred }
    }

    /// All-pairs shortest-path distances as a dense row-major matrix.
    pub fn all_pairs(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for s in 0..self.n {
            out.extend(self.dijkstra(s, None).dist);
        }
        out
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.edges.len() == self.n - 1 && self.is_connected()
    }
}

#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub source: PointId,
    pub dist: Vec<f64>,
    pub pred: Vec<Option<PointId>>,
}

impl ShortestPaths {
    /// Vertices of the recorded shortest path from the source to `target`,
    /// source first. `None` when unreachable.
    pub fn path_to(&self, target: PointId) -> Option<Vec<PointId>> {
        if !self.dist[target].is_finite() {
            return None;
        }
        let mut path = vec![target];
        let mut cur = target;
        while let Some(p) = self.pred[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }

    /// Farthest reachable vertex, ties broken by smallest id.
    pub fn farthest(&self) -> PointId {
        let mut best = self.source;
        for (v, &d) in self.dist.iter().enumerate() {
            if d.is_finite() && d > self.dist[best] {
                best = v;
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: PointId,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(WeightedGraph::new(2, [(0, 0, 1.0)]).is_err());
        assert!(matches!(
            WeightedGraph::new(2, [(0, 1, -1.0)]),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(WeightedGraph::new(2, [(0, 2, 1.0)]).is_err());
    }

    #[test]
    fn parallel_edges_keep_lightest() {
        let g = WeightedGraph::new(2, [(0, 1, 3.0), (1, 0, 2.0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 2.0)]);
    }

    #[test]
    fn dijkstra_on_weighted_square() {
        // 0-1 (1), 1-2 (1), 0-3 (5), 3-2 (1): best 0->3 goes around.
        let g =
            WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (0, 3, 5.0), (3, 2, 1.0)]).unwrap();
        let sp = g.dijkstra(0, None);
        assert_eq!(sp.dist, vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(sp.path_to(3).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(sp.farthest(), 3);
    }

    #[test]
    fn components_respect_alive_mask() {
        let g = WeightedGraph::unweighted(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let alive = [true, true, false, true, true];
        assert_eq!(g.components(Some(&alive)), vec![vec![0, 1], vec![3, 4]]);
        assert!(g.is_connected());
        assert!(g.is_tree());
    }
}
