//! Finite metric spaces backed by an explicit distance cache.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Dense point identifier in `[0, n)`.
pub type PointId = usize;

/// Relative tolerance for every `a <= b` comparison between distances.
pub const REL_TOL: f64 = 1e-9;

/// `a <= b` up to [`REL_TOL`].
#[inline]
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + REL_TOL * a.abs().max(b.abs())
}

/// Where the distances of a [`MetricSpace`] came from.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSource {
    Matrix,
    Euclidean { points: Vec<Vec<f64>> },
    Graph(WeightedGraph),
}

/// A finite metric `(X, d)` with `X = {0, .., n-1}`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    n: usize,
    source: MetricSource,
    dist: Vec<f64>,
}

impl MetricSpace {
    /// From an explicit distance matrix. The matrix must be symmetric with a
    /// zero diagonal and positive off-diagonal entries. The triangle
    /// inequality is not checked here; see [`MetricSpace::triangle_violation`].
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("distance matrix is not square".into()));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                let ok = d.is_finite() && if i == j { d == 0.0 } else { d > 0.0 };
                if !ok {
                    return Err(Error::InvalidDistance(i, j, d));
                }
                if j < i && d != rows[j][i] {
                    return Err(Error::AsymmetricMatrix(j, i));
                }
                dist.push(d);
            }
        }
        Ok(MetricSpace {
            n,
            source: MetricSource::Matrix,
            dist,
        })
    }

    /// L2 distances between the given (equal-dimension, distinct) points.
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        if let Some(first) = points.first() {
            let dim = first.len();
            if points
                .iter()
                .any(|p| p.len() != dim || p.iter().any(|c| !c.is_finite()))
            {
                return Err(Error::InvalidInput(
                    "points must be finite and share one dimension".into(),
                ));
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                if d <= 0.0 {
                    return Err(Error::InvalidDistance(i, j, d));
                }
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(MetricSpace {
            n,
            source: MetricSource::Euclidean { points },
            dist,
        })
    }

    /// Shortest-path metric of a connected graph, computed once.
    pub fn from_graph(graph: WeightedGraph) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        let dist = graph.all_pairs();
        Ok(MetricSpace {
            n: graph.n(),
            source: MetricSource::Graph(graph),
            dist,
        })
    }

    /// Uniform metric: every pair at distance `scale`.
    pub fn uniform(n: usize, scale: f64) -> Self {
        let mut dist = vec![scale; n * n];
        for i in 0..n {
            dist[i * n + i] = 0.0;
        }
        MetricSpace {
            n,
            source: MetricSource::Matrix,
            dist,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> &MetricSource {
        &self.source
    }

    pub fn graph(&self) -> Option<&WeightedGraph> {
        match &self.source {
            MetricSource::Graph(g) => Some(g),
            _ => None,
        }
    }

    #[inline]
    pub fn d(&self, x: PointId, y: PointId) -> f64 {
        self.dist[x * self.n + y]
    }

    #[inline]
    pub fn row(&self, x: PointId) -> &[f64] {
        &self.dist[x * self.n..(x + 1) * self.n]
    }

    /// Points of the closed ball `B(x, r)`, with the metric tolerance.
    pub fn ball(&self, x: PointId, r: f64) -> Vec<PointId> {
        self.row(x)
            .iter()
            .enumerate()
            .filter(|&(_, &d)| approx_le(d, r))
            .map(|(y, _)| y)
            .collect()
    }

    pub fn min_distance(&self) -> Option<f64> {
        self.pairs()
            .map(|(x, y)| self.d(x, y))
            .min_by(f64::total_cmp)
    }

    pub fn max_distance(&self) -> Option<f64> {
        self.pairs()
            .map(|(x, y)| self.d(x, y))
            .max_by(f64::total_cmp)
    }

    /// Largest distance inside `cluster` (0 for fewer than two points).
    pub fn diameter(&self, cluster: &[PointId]) -> f64 {
        let mut diam: f64 = 0.0;
        for (i, &x) in cluster.iter().enumerate() {
            for &y in &cluster[i + 1..] {
                diam = diam.max(self.d(x, y));
            }
        }
        diam
    }

    /// Ratio of the largest to the smallest pairwise distance.
    pub fn aspect_ratio(&self) -> Result<f64> {
        match (self.max_distance(), self.min_distance()) {
            (Some(max), Some(min)) => Ok(max / min),
            _ => Err(Error::InvalidInput(
                "aspect ratio needs at least two points".into(),
            )),
        }
    }

    /// The same space with every distance multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> MetricSpace {
        assert!(factor > 0.0 && factor.is_finite());
        MetricSpace {
            n: self.n,
            source: MetricSource::Matrix,
            dist: self.dist.iter().map(|d| d * factor).collect(),
        }
    }

    /// Copy whose minimum pairwise distance is 1, with the scale applied.
    pub fn normalized(&self) -> (MetricSpace, f64) {
        match self.min_distance() {
            Some(min) => (self.scaled(1.0 / min), 1.0 / min),
            None => (self.clone(), 1.0),
        }
    }

    /// First triple `(x, y, z)` with `d(x,z) > d(x,y) + d(y,z)`, if any.
    pub fn triangle_violation(&self) -> Option<(PointId, PointId, PointId)> {
        for x in 0..self.n {
            for y in 0..self.n {
                for z in 0..self.n {
                    if !approx_le(self.d(x, z), self.d(x, y) + self.d(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Unordered pairs `x < y`.
    pub fn pairs(&self) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        (0..self.n).flat_map(move |x| ((x + 1)..self.n).map(move |y| (x, y)))
    }

    pub fn to_instance(&self) -> InstanceFile {
        match &self.source {
            MetricSource::Matrix => InstanceFile {
                kind: InstanceKindTag::Matrix,
                n: self.n,
                data: serde_json::to_value(
                    (0..self.n)
                        .map(|x| self.row(x).to_vec())
                        .collect::<Vec<_>>(),
                )
                .expect("matrix serializes"),
            },
            MetricSource::Euclidean { points } => InstanceFile {
                kind: InstanceKindTag::Euclidean,
                n: self.n,
                data: serde_json::to_value(points).expect("points serialize"),
            },
            MetricSource::Graph(g) => g.to_instance(),
        }
    }

    pub fn from_instance(file: &InstanceFile) -> Result<Self> {
        let bad = |e: serde_json::Error| Error::Schema(format!("instance data: {e}"));
        let m = match file.kind {
            InstanceKindTag::Matrix => {
                MetricSpace::from_matrix(serde_json::from_value(file.data.clone()).map_err(bad)?)?
            }
            InstanceKindTag::Euclidean => {
                MetricSpace::from_points(serde_json::from_value(file.data.clone()).map_err(bad)?)?
            }
            InstanceKindTag::Graph => MetricSpace::from_graph(WeightedGraph::from_instance(file)?)?,
        };
        if m.n() != file.n {
            return Err(Error::Schema(format!(
                "n={} but data describes {} points",
                file.n,
                m.n()
            )));
        }
        Ok(m)
    }
}

impl WeightedGraph {
    pub fn to_instance(&self) -> InstanceFile {
        InstanceFile {
            kind: InstanceKindTag::Graph,
            n: self.n(),
            data: serde_json::to_value(self.edges()).expect("edges serialize"),
        }
    }

    pub fn from_instance(file: &InstanceFile) -> Result<Self> {
        if file.kind != InstanceKindTag::Graph {
            return Err(Error::Schema("expected a graph instance".into()));
        }
        let edges: Vec<(PointId, PointId, f64)> = serde_json::from_value(file.data.clone())
            .map_err(|e| Error::Schema(format!("graph edges: {e}")))?;
        WeightedGraph::new(file.n, edges)
    }
}

/// On-disk instance: `{"kind": "matrix|euclidean|graph", "n": .., "data": ..}`.
///
/// `data` is the full matrix (rows), the point coordinates, or the edge list
/// `[[u, v, w], ..]` respectively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub kind: InstanceKindTag,
    pub n: usize,
    pub data: serde_json::Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKindTag {
    Matrix,
    Euclidean,
    Graph,
}

/// An `r`-net: covering within `r`, pairwise separation above `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Net {
    pub radius: f64,
    pub points: Vec<PointId>,
}

/// Greedy net in id order: a point joins when no earlier net point covers it.
pub fn epsilon_net(m: &MetricSpace, r: f64) -> Net {
    assert!(r > 0.0, "net radius must be positive");
    let mut points: Vec<PointId> = Vec::new();
    for x in 0..m.n() {
        if !points.iter().any(|&p| approx_le(m.d(x, p), r)) {
            points.push(x);
        }
    }
    Net { radius: r, points }
}
