//! Seeded instance families.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::{MetricSpace, PointId};
use crate::rng;

/// Group-count multiplier of the thick cycle.
pub const THICK_CYCLE_C: f64 = 12.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceKind {
    /// Uniform points in the unit cube `[0,1)^dim`.
    RandomEuclidean { dim: usize },
    /// Random recursive tree with edge weights uniform in `[1, 2)`.
    RandomTree,
    /// `n / width` rows of `width` vertices, unit weights.
    Grid { width: usize },
    /// Vertex 0 joined to every other vertex by a unit edge.
    Star,
    /// All distances equal to 1.
    Uniform,
    /// Ring of equal groups with complete bipartite links between
    /// consecutive groups.
    ThickCycle { k: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Metric(MetricSpace),
    Graph(WeightedGraph),
}

impl Instance {
    pub fn into_metric(self) -> Result<MetricSpace> {
        match self {
            Instance::Metric(m) => Ok(m),
            Instance::Graph(g) => MetricSpace::from_graph(g),
        }
    }

    pub fn graph(&self) -> Option<&WeightedGraph> {
        match self {
            Instance::Graph(g) => Some(g),
            Instance::Metric(_) => None,
        }
    }
}

/// Deterministic for a fixed `(kind, n, seed)`.
pub fn generate_instance(kind: &InstanceKind, n: usize, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "instance needs at least one point".into(),
        ));
    }
    let mut rng = rng::stream(seed, "instance", 0);
    match *kind {
        InstanceKind::RandomEuclidean { dim } => {
            if dim == 0 {
                return Err(Error::InvalidInput("dimension must be positive".into()));
            }
            let points = (0..n)
                .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
                .collect();
            Ok(Instance::Metric(MetricSpace::from_points(points)?))
        }
        InstanceKind::RandomTree => {
            let edges = (1..n).map(|v| (rng.gen_range(0..v), v, rng.gen_range(1.0..2.0)));
            Ok(Instance::Graph(WeightedGraph::new(n, edges)?))
        }
        InstanceKind::Grid { width } => {
            if width == 0 || !n.is_multiple_of(width) {
                return Err(Error::InvalidInput(format!(
                    "grid width {width} does not divide n={n}"
                )));
            }
            let rows = n / width;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..width {
                    let v = r * width + c;
                    if c + 1 < width {
                        edges.push((v, v + 1));
                    }
                    if r + 1 < rows {
                        edges.push((v, v + width));
                    }
                }
            }
            Ok(Instance::Graph(WeightedGraph::unweighted(n, edges)?))
        }
        InstanceKind::Star => Ok(Instance::Graph(WeightedGraph::unweighted(
            n,
            (1..n).map(|v| (0, v)),
        )?)),
        InstanceKind::Uniform => Ok(Instance::Metric(MetricSpace::uniform(n, 1.0))),
        InstanceKind::ThickCycle { k } => {
            let layout = ThickCycle::new(n, k)?;
            Ok(Instance::Graph(layout.graph()))
        }
    }
}

/// Layout of the thick cycle: `groups` sets of `group_size` vertices, where
/// group `i` holds vertices `i*group_size .. (i+1)*group_size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThickCycle {
    pub n: usize,
    pub k: u32,
    pub groups: usize,
    pub group_size: usize,
}

impl ThickCycle {
    /// `groups = c * n^(1-1/k)` groups of `n^(1/k) / c` vertices with `c = 12`.
    /// The rounded layout must tile `n` exactly with an even number of at
    /// least six groups.
    pub fn new(n: usize, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("thick cycle needs k >= 1".into()));
        }
        let group_size = ((n as f64).powf(1.0 / f64::from(k)) / THICK_CYCLE_C).round() as usize;
        if group_size == 0 || !n.is_multiple_of(group_size) {
            return Err(Error::InvalidInput(format!(
                "thick cycle n={n}, k={k}: group size {group_size} does not tile n"
            )));
        }
        let groups = n / group_size;
        if groups < 6 || !groups.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "thick cycle n={n}, k={k}: needs an even number (>= 6) of groups, got {groups}"
            )));
        }
        Ok(ThickCycle {
            n,
            k,
            groups,
            group_size,
        })
    }

    pub fn group(&self, i: usize) -> std::ops::Range<PointId> {
        let i = i % self.groups;
        i * self.group_size..(i + 1) * self.group_size
    }

    pub fn group_of(&self, v: PointId) -> usize {
        v / self.group_size
    }

    pub fn graph(&self) -> WeightedGraph {
        let mut edges = Vec::new();
        for i in 0..self.groups {
            for u in self.group(i) {
                for v in self.group(i + 1) {
                    edges.push((u, v));
                }
            }
        }
        WeightedGraph::unweighted(self.n, edges).expect("thick cycle edges are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_shape() {
        let Instance::Graph(g) = generate_instance(&InstanceKind::Star, 5, 0).unwrap() else {
            panic!("star is a graph");
        };
        assert_eq!(g.degree(0), 4);
        let m = MetricSpace::from_graph(g).unwrap();
        assert_eq!(m.d(1, 2), 2.0);
    }

    #[test]
    fn thick_cycle_layout() {
        let t = ThickCycle::new(48, 1).unwrap();
        assert_eq!((t.groups, t.group_size), (12, 4));
        let g = t.graph();
        // Every vertex sees both neighbouring groups completely.
        for v in 0..48 {
            assert_eq!(g.degree(v), 8);
        }
        assert_eq!(g.edges().len(), 12 * 16);
        assert!(ThickCycle::new(50, 1).is_err());
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let kind = InstanceKind::RandomEuclidean { dim: 2 };
        let a = generate_instance(&kind, 100, 7).unwrap();
        let b = generate_instance(&kind, 100, 7).unwrap();
        let c = generate_instance(&kind, 100, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn grid_and_tree() {
        let g = generate_instance(&InstanceKind::Grid { width: 8 }, 64, 0).unwrap();
        assert_eq!(g.graph().unwrap().edges().len(), 2 * 8 * 7);
        let t = generate_instance(&InstanceKind::RandomTree, 50, 3).unwrap();
        assert!(t.graph().unwrap().is_tree());
        assert!(generate_instance(&InstanceKind::Grid { width: 7 }, 64, 0).is_err());
    }
}
