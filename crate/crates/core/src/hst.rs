//! Hierarchically well-separated trees.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, PointId, REL_TOL};

/// Rooted tree whose leaves are the points `0..n`; the distance between two
/// points is the label of their lowest common ancestor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHst", into = "RawHst")]
pub struct Hst {
    parent: Vec<Option<usize>>,
    label: Vec<f64>,
    leaf_point: Vec<Option<PointId>>,
    leaf_of: Vec<usize>,
    depth: Vec<usize>,
    children: Vec<Vec<usize>>,
    root: usize,
}

#[derive(Serialize, Deserialize)]
struct RawHst {
    nodes: Vec<RawNode>,
}

#[derive(Serialize, Deserialize)]
struct RawNode {
    id: usize,
    parent: Option<usize>,
    label: f64,
    #[serde(rename = "leaf-point")]
    leaf_point: Option<PointId>,
}

impl TryFrom<RawHst> for Hst {
    type Error = Error;
    fn try_from(raw: RawHst) -> Result<Self> {
        let mut nodes = raw.nodes;
        nodes.sort_by_key(|node| node.id);
        if nodes.iter().enumerate().any(|(i, node)| node.id != i) {
            return Err(Error::Schema("hst node ids must be 0..len".into()));
        }
        Hst::new(
            nodes.iter().map(|x| x.parent).collect(),
            nodes.iter().map(|x| x.label).collect(),
            nodes.iter().map(|x| x.leaf_point).collect(),
        )
    }
}

impl From<Hst> for RawHst {
    fn from(h: Hst) -> Self {
        let nodes = (0..h.parent.len())
            .map(|id| RawNode {
                id,
                parent: h.parent[id],
                label: h.label[id],
                leaf_point: h.leaf_point[id],
            })
            .collect();
        RawHst { nodes }
    }
}

impl Hst {
    /// Checks that the parent array is a single rooted tree, that leaves
    /// carry label 0 and a point, and that the points are exactly `0..n`.
    pub fn new(
        parent: Vec<Option<usize>>,
        label: Vec<f64>,
        leaf_point: Vec<Option<PointId>>,
    ) -> Result<Self> {
        let len = parent.len();
        let bad = |msg: String| Err(Error::Schema(msg));
        if len == 0 || label.len() != len || leaf_point.len() != len {
            return bad("hst arrays must be nonempty and of equal length".into());
        }
        let roots: Vec<usize> = (0..len).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return bad(format!("hst needs exactly one root, found {}", roots.len()));
        }
        let root = roots[0];
        let mut children = vec![Vec::new(); len];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= len {
                    return bad(format!("node {v} has parent {p} out of range"));
                }
                children[p].push(v);
            }
        }
        let mut depth = vec![usize::MAX; len];
        depth[root] = 0;
        let mut stack = vec![root];
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &c in &children[v] {
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        if seen != len {
            return bad("hst parent array contains a cycle".into());
        }
        let n = leaf_point.iter().flatten().count();
        let mut leaf_of = vec![usize::MAX; n];
        for v in 0..len {
            let is_leaf = children[v].is_empty();
            match leaf_point[v] {
                Some(x) if is_leaf && x < n && leaf_of[x] == usize::MAX => leaf_of[x] = v,
                Some(x) => {
                    return bad(format!(
                        "node {v} carries point {x} but is not a fresh leaf"
                    ))
                }
                None if is_leaf => return bad(format!("leaf {v} carries no point")),
                None => {}
            }
            let ok = if is_leaf {
                label[v] == 0.0
            } else {
                label[v].is_finite() && label[v] >= 0.0
            };
            if !ok {
                return bad(format!("node {v} has invalid label {}", label[v]));
            }
        }
        Ok(Hst {
            parent,
            label,
            leaf_point,
            leaf_of,
            depth,
            children,
            root,
        })
    }

    /// Number of points (leaves).
    pub fn n(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn label(&self, v: usize) -> f64 {
        self.label[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn leaf(&self, x: PointId) -> usize {
        self.leaf_of[x]
    }

    pub fn leaf_point(&self, v: usize) -> Option<PointId> {
        self.leaf_point[v]
    }

    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("deeper node has a parent");
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("deeper node has a parent");
        }
        while a != b {
            a = self.parent[a].expect("not yet at root");
            b = self.parent[b].expect("not yet at root");
        }
        a
    }

    pub fn distance(&self, x: PointId, y: PointId) -> f64 {
        if x == y {
            0.0
        } else {
            self.label[self.lca(self.leaf_of[x], self.leaf_of[y])]
        }
    }

    /// Row-major matrix of all LCA distances.
    pub fn all_distances(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n * n];
        // Each internal node settles the pairs split between its children.
        let leaves = self.leaves_below();
        for v in 0..self.node_count() {
            let kids = &self.children[v];
            for (a, &ca) in kids.iter().enumerate() {
                for &cb in &kids[a + 1..] {
                    for &x in &leaves[ca] {
                        for &y in &leaves[cb] {
                            out[x * n + y] = self.label[v];
                            out[y * n + x] = self.label[v];
                        }
                    }
                }
            }
        }
        out
    }

    /// Points below each node, in ascending order.
    pub fn leaves_below(&self) -> Vec<Vec<PointId>> {
        let mut out = vec![Vec::new(); self.node_count()];
        for v in self.postorder() {
            if let Some(x) = self.leaf_point[v] {
                out[v].push(x);
            }
            for &c in &self.children[v] {
                let below = std::mem::take(&mut out[c]);
                out[v].extend_from_slice(&below);
                out[c] = below;
            }
            out[v].sort_unstable();
        }
        out
    }

    /// Nodes with every child before its parent.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.node_count());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend_from_slice(&self.children[v]);
        }
        order.reverse();
        order
    }

    pub fn max_degree(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Smallest ratio `label(parent) / label(child)` over internal children;
    /// infinite when no internal node has an internal child.
    pub fn separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for v in 0..self.node_count() {
            if let Some(p) = self.parent[v] {
                if !self.children[v].is_empty() && self.label[v] > 0.0 {
                    best = best.min(self.label[p] / self.label[v]);
                }
            }
        }
        best
    }

    /// Whether `label(parent) >= k * label(child)` along every internal edge.
    pub fn is_k_hst(&self, k: f64) -> bool {
        (0..self.node_count()).all(|v| match self.parent[v] {
            Some(p) if !self.children[v].is_empty() => {
                k * self.label[v] <= self.label[p] * (1.0 + REL_TOL)
            }
            _ => true,
        })
    }

    /// First pair `(x, y)` with `d_U(x, y) < d_X(x, y)`, if any.
    pub fn dominance_violation(&self, m: &MetricSpace) -> Option<(PointId, PointId)> {
        let n = self.n();
        let du = self.all_distances();
        m.pairs()
            .find(|&(x, y)| !crate::metric::approx_le(m.d(x, y), du[x * n + y]))
    }

    /// Smallest point below each node.
    pub fn min_leaf_below(&self) -> Vec<PointId> {
        let mut out = vec![usize::MAX; self.node_count()];
        for v in self.postorder() {
            let own = self.leaf_point[v].unwrap_or(usize::MAX);
            out[v] = self.children[v]
                .iter()
                .map(|&c| out[c])
                .fold(own, usize::min);
        }
        out
    }

    /// The HST realizing an ultrametric `m` exactly. Errors when some triple
    /// breaks `d(x, y) <= max(d(x, z), d(z, y))`.
    pub fn from_ultrametric(m: &MetricSpace) -> Result<Hst> {
        let n = m.n();
        for x in 0..n {
            for y in x + 1..n {
                for z in 0..n {
                    if !crate::metric::approx_le(m.d(x, y), m.d(x, z).max(m.d(z, y))) {
                        return Err(Error::InvalidInput(format!(
                            "not an ultrametric at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        let mut parent: Vec<Option<usize>> = (0..n).map(|_| None).collect();
        let mut label = vec![0.0; n];
        let mut points: Vec<Option<PointId>> = (0..n).map(Some).collect();
        let mut stack: Vec<(Vec<PointId>, Option<usize>)> = vec![((0..n).collect(), None)];
        while let Some((cluster, up)) = stack.pop() {
            if cluster.len() == 1 {
                parent[cluster[0]] = up;
                continue;
            }
            let node = parent.len();
            let diameter = m.diameter(&cluster);
            parent.push(up);
            label.push(diameter);
            points.push(None);
            let mut rest = cluster;
            while let Some(&x) = rest.first() {
                let (close, far): (Vec<_>, Vec<_>) = rest
                    .into_iter()
                    .partition(|&y| m.d(x, y) < diameter * (1.0 - REL_TOL));
                stack.push((close, Some(node)));
                rest = far;
            }
        }
        Hst::new(parent, label, points)
    }

    /// Copy with one node's label replaced. Intended for negative tests.
    pub fn with_label(&self, v: usize, label: f64) -> Hst {
        let mut h = self.clone();
        h.label[v] = label;
        h
    }
}
