use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::{approx_le, PointId};

use super::{separator_left_lso, CentroidOracle, LsoCollection, LsoKind, Ordering};

/// How each recursion step picks its shortest path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathPolicy {
    /// Farthest vertex from the smallest id, then the shortest path to the
    /// vertex farthest from that one.
    #[default]
    DoubleSweep,
}

/// One step of the decomposition: a shortest path of a residual component.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdNode {
    pub component: Vec<PointId>,
    pub path: Vec<PointId>,
    pub parent: Option<usize>,
    /// 1 for the components of the input graph.
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpDecomposition {
    pub nodes: Vec<SpdNode>,
    pub depth: usize,
}

/// Vertex sequence and prefix lengths of the path chosen inside `alive`.
fn choose_path(
    g: &WeightedGraph,
    component: &[PointId],
    alive: &[bool],
    _policy: PathPolicy,
) -> (Vec<PointId>, Vec<f64>) {
    let a = g.dijkstra(component[0], Some(alive)).farthest();
    let sweep = g.dijkstra(a, Some(alive));
    let path = sweep.path_to(sweep.farthest()).expect("reachable");
    let pos = path.iter().map(|&v| sweep.dist[v]).collect();
    (path, pos)
}

/// Recursively delete shortest paths until nothing is left.
pub fn spd_decompose(g: &WeightedGraph, policy: PathPolicy) -> Result<SpDecomposition> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut nodes = Vec::new();
    let mut pending: Vec<(Vec<PointId>, Option<usize>, usize)> = g
        .components(None)
        .into_iter()
        .map(|c| (c, None, 1))
        .collect();
    pending.reverse();
    while let Some((component, parent, depth)) = pending.pop() {
        let mut inside = vec![false; n];
        component.iter().for_each(|&v| inside[v] = true);
        let (path, _) = choose_path(g, &component, &inside, policy);
        for &v in &path {
            alive[v] = false;
            inside[v] = false;
        }
        let id = nodes.len();
        let mut parts = g.components(Some(&inside));
        parts.reverse();
        pending.extend(parts.into_iter().map(|c| (c, Some(id), depth + 1)));
        nodes.push(SpdNode {
            component,
            path,
            parent,
            depth,
        });
    }
    let depth = nodes.iter().map(|x| x.depth).max().unwrap_or(0);
    debug_assert!(alive.iter().all(|a| !a));
    Ok(SpDecomposition { nodes, depth })
}

/// Portals on a shortest path `P`: `landmarks[v]` lists `(index on P,
/// d(v, P[index]))` for each component vertex. Distances are taken inside
/// the component.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSet {
    pub path: Vec<PointId>,
    pub landmarks: Vec<Vec<(usize, f64)>>,
    /// Geometric step of the accepted rule, starting at `eps / 4`.
    pub step: f64,
    pub densifications: usize,
}

impl LandmarkSet {
    pub fn max_size(&self) -> usize {
        self.landmarks.iter().map(Vec::len).max().unwrap_or(0)
    }
}

const MAX_DENSIFICATIONS: usize = 3;

/// Landmarks of every vertex of `component` on the shortest path `path`,
/// with the portal property checked over all pairs whose shortest path
/// meets `path`.
///
/// Rule: with `p` the nearest path vertex and `D = d(v, p)`, take the path
/// vertices nearest to the positions `pos(p) + s` for `s` in
/// `{0} ∪ {±(1 + q)^j q D}` limited to `|s| <= 2D / eps`, with `q = eps / 4`.
/// A failed check halves `q`, at most three times.
pub fn landmarks(
    g: &WeightedGraph,
    component: &[PointId],
    path: &[PointId],
    eps: f64,
) -> Result<LandmarkSet> {
    let n = g.n();
    let mut inside = vec![false; n];
    component.iter().for_each(|&v| inside[v] = true);
    // Rows for component vertices only.
    let mut dist: Vec<Vec<f64>> = vec![Vec::new(); n];
    for &v in component {
        dist[v] = g.dijkstra(v, Some(&inside)).dist;
    }
    let pos: Vec<f64> = path.iter().map(|&x| dist[path[0]][x]).collect();
    let mut step = eps / 4.0;
    for densifications in 0..=MAX_DENSIFICATIONS {
        let set = landmark_rule(component, path, &pos, &dist, eps, step, n);
        if portal_violation(component, path, &pos, &dist, &set, eps).is_none() {
            return Ok(LandmarkSet {
                path: path.to_vec(),
                landmarks: set,
                step,
                densifications,
            });
        }
        step /= 2.0;
    }
    Err(Error::LandmarksFailed(MAX_DENSIFICATIONS))
}

fn landmark_rule(
    component: &[PointId],
    path: &[PointId],
    pos: &[f64],
    dist: &[Vec<f64>],
    eps: f64,
    q: f64,
    n: usize,
) -> Vec<Vec<(usize, f64)>> {
    let snap = |t: f64| -> usize {
        let i = pos.partition_point(|&p| p < t);
        if i == 0 {
            0
        } else if i == pos.len() {
            pos.len() - 1
        } else if t - pos[i - 1] <= pos[i] - t {
            i - 1
        } else {
            i
        }
    };
    let mut out = vec![Vec::new(); n];
    for &v in component {
        let row = &dist[v];
        let near = (0..path.len())
            .min_by(|&a, &b| row[path[a]].total_cmp(&row[path[b]]))
            .expect("path nonempty");
        let d = row[path[near]];
        let mut idx = vec![near];
        if d > 0.0 {
            let limit = 2.0 * d / eps;
            let mut s = q * d;
            while s <= limit {
                idx.push(snap(pos[near] + s));
                idx.push(snap(pos[near] - s));
                s *= 1.0 + q;
            }
        }
        idx.sort_unstable();
        idx.dedup();
        out[v] = idx.into_iter().map(|i| (i, row[path[i]])).collect();
    }
    out
}

/// First pair through the path whose best portal route exceeds
/// `(1 + eps) d(u, v)`.
fn portal_violation(
    component: &[PointId],
    path: &[PointId],
    pos: &[f64],
    dist: &[Vec<f64>],
    set: &[Vec<(usize, f64)>],
    eps: f64,
) -> Option<(PointId, PointId)> {
    let mut via = vec![0.0; path.len()];
    for (a, &u) in component.iter().enumerate() {
        // Cheapest route from u to each path index through u's landmarks.
        for (k, slot) in via.iter_mut().enumerate() {
            *slot = set[u]
                .iter()
                .map(|&(i, du)| du + (pos[i] - pos[k]).abs())
                .fold(f64::INFINITY, f64::min);
        }
        for &v in &component[a + 1..] {
            let d = dist[u][v];
            let meets = path.iter().any(|&p| approx_le(dist[u][p] + dist[p][v], d));
            if !meets {
                continue;
            }
            let best = set[v]
                .iter()
                .map(|&(i, dv)| via[i] + dv)
                .fold(f64::INFINITY, f64::min);
            if !approx_le(best, (1.0 + eps) * d) {
                return Some((u, v));
            }
        }
    }
    None
}

/// Left-sided LSO of a graph from its shortest-path decomposition, with the
/// per-level statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdLeftLso {
    pub lso: LsoCollection,
    pub depth: usize,
    pub max_landmarks: usize,
    pub densifications: usize,
}

/// At every decomposition node, hang one copy of each component vertex off
/// each of its landmarks on the path, order the resulting tree with
/// centroid separators, and keep only the leftmost copy of each vertex.
pub fn spd_left_lso(g: &WeightedGraph, eps: f64) -> Result<SpdLeftLso> {
    const OP: &str = "spd_left_lso";
    let n = g.n();
    if !(eps > 0.0 && eps < 0.5) {
        return Err(precondition(OP, format!("eps {eps} outside (0, 1/2)")));
    }
    if eps <= 1.0 / (n as f64 * n as f64) {
        return Err(precondition(OP, format!("eps {eps} must exceed 1/n^2")));
    }
    let spd = spd_decompose(g, PathPolicy::default())?;
    let mut orderings: Vec<Ordering> = Vec::new();
    let mut max_landmarks = 0;
    let mut densifications = 0;
    for node in &spd.nodes {
        let set = landmarks(g, &node.component, &node.path, eps)?;
        max_landmarks = max_landmarks.max(set.max_size());
        densifications = densifications.max(set.densifications);
        let pos: Vec<f64> = {
            let mut acc = vec![0.0];
            for w in node.path.windows(2) {
                let weight = g
                    .neighbors(w[0])
                    .iter()
                    .find(|&&(u, _)| u == w[1])
                    .expect("path edge")
                    .1;
                acc.push(acc.last().unwrap() + weight);
            }
            acc
        };
        let mut owner: Vec<PointId> = node.path.clone();
        let mut edges: Vec<(usize, usize, f64)> = (1..node.path.len())
            .map(|k| (k - 1, k, pos[k] - pos[k - 1]))
            .collect();
        let on_path: Vec<bool> = {
            let mut b = vec![false; n];
            node.path.iter().for_each(|&v| b[v] = true);
            b
        };
        for &v in &node.component {
            if on_path[v] {
                continue;
            }
            for &(i, d) in &set.landmarks[v] {
                edges.push((owner.len(), i, d));
                owner.push(v);
            }
        }
        let tree = WeightedGraph::new(owner.len(), edges)?;
        let tree_lso = separator_left_lso(&tree, &CentroidOracle)?;
        let mut seen = vec![usize::MAX; n];
        for (oi, order) in tree_lso.orderings.iter().enumerate() {
            let mut out = Vec::new();
            for &t in order {
                let v = owner[t];
                if seen[v] != oi {
                    seen[v] = oi;
                    out.push(v);
                }
            }
            orderings.push(out);
        }
    }
    let mut lso = LsoCollection {
        kind: LsoKind::Left,
        rho: 1.0 + eps,
        tau: 0,
        orderings,
    };
    lso.tau = lso.measured_tau();
    Ok(SpdLeftLso {
        lso,
        depth: spd.depth,
        max_landmarks,
        densifications,
    })
}
