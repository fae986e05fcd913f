use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::PointId;

use super::{LsoCollection, LsoKind, Ordering};

/// Supplies small balanced separators of induced connected subgraphs.
pub trait SeparatorOracle {
    /// A vertex set `K ⊆ component` such that every connected component of
    /// `component \ K` has at most `|component| / 2` vertices.
    fn separator(&self, g: &WeightedGraph, component: &[PointId]) -> Vec<PointId>;
}

/// Single centroid vertex; valid for forests.
#[derive(Debug, Clone, Copy, Default)]
pub struct CentroidOracle;

impl SeparatorOracle for CentroidOracle {
    fn separator(&self, g: &WeightedGraph, component: &[PointId]) -> Vec<PointId> {
        let size = component.len();
        let mut inside = vec![false; g.n()];
        for &v in component {
            inside[v] = true;
        }
        // Iterative DFS from the smallest vertex; subtree sizes bottom-up.
        let root = component[0];
        let mut parent = vec![usize::MAX; g.n()];
        let mut order = Vec::with_capacity(size);
        let mut stack = vec![root];
        parent[root] = root;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(u, _) in g.neighbors(v) {
                if inside[u] && parent[u] == usize::MAX {
                    parent[u] = v;
                    stack.push(u);
                }
            }
        }
        let mut sub = vec![1usize; g.n()];
        for &v in order.iter().rev() {
            if v != root {
                sub[parent[v]] += sub[v];
            }
        }
        let centroid = order
            .iter()
            .copied()
            .filter(|&v| {
                let above = size - sub[v];
                let largest_child = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&(u, _)| inside[u] && u != parent[v] && parent[u] == v)
                    .map(|&(u, _)| sub[u])
                    .max()
                    .unwrap_or(0);
                2 * above.max(largest_child) <= size
            })
            .min()
            .unwrap_or(root);
        vec![centroid]
    }
}

/// Tree decomposition: `bags[i]` are vertex sets, `edges` join bags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<PointId>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Checks vertex coverage, edge coverage, tree shape and the running
    /// intersection property against `g`.
    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(format!("tree decomposition: {msg}")));
        let b = self.bags.len();
        if b == 0 {
            return bad("no bags".into());
        }
        let bag_graph = WeightedGraph::unweighted(b, self.edges.iter().copied())?;
        if !bag_graph.is_tree() {
            return bad("bags do not form a tree".into());
        }
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n() {
                    return bad(format!("bag {i} holds unknown vertex {v}"));
                }
                holders[v].push(i);
            }
        }
        for (v, hs) in holders.iter().enumerate() {
            if hs.is_empty() {
                return bad(format!("vertex {v} in no bag"));
            }
            let mut alive = vec![false; b];
            hs.iter().for_each(|&i| alive[i] = true);
            if bag_graph.components(Some(&alive)).len() != 1 {
                return bad(format!("bags holding {v} are not connected"));
            }
        }
        for &(u, v, _) in g.edges() {
            if !holders[u].iter().any(|i| self.bags[*i].contains(&v)) {
                return bad(format!("edge ({u}, {v}) in no bag"));
            }
        }
        Ok(())
    }

    /// Bag `{v, parent(v)}` for every vertex of a tree rooted at 0, with the
    /// root bag `{0}`; width 1.
    pub fn of_tree(g: &WeightedGraph) -> Result<Self> {
        if !g.is_tree() {
            return Err(Error::InvalidInput("graph is not a tree".into()));
        }
        let pred = g.dijkstra(0, None).pred;
        let bags = (0..g.n())
            .map(|v| pred[v].map_or(vec![v], |p| vec![v, p]))
            .collect();
        let edges = (1..g.n())
            .map(|v| (v, pred[v].expect("connected")))
            .collect();
        Ok(TreeDecomposition { bags, edges })
    }

    /// Sliding-window path decomposition of a `width`-wide row-major grid.
    pub fn of_grid(n: usize, width: usize) -> Self {
        let count = n.saturating_sub(width).max(1);
        let bags = (0..count)
            .map(|i| (i..=(i + width).min(n - 1)).collect())
            .collect();
        let edges = (1..count).map(|i| (i - 1, i)).collect();
        TreeDecomposition { bags, edges }
    }

    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }
}

/// Balanced separators taken from the bags of a tree decomposition.
#[derive(Debug, Clone)]
pub struct TreeDecompositionOracle {
    decomposition: TreeDecomposition,
}

impl TreeDecompositionOracle {
    pub fn new(g: &WeightedGraph, decomposition: TreeDecomposition) -> Result<Self> {
        decomposition.validate(g)?;
        Ok(TreeDecompositionOracle { decomposition })
    }
}

impl SeparatorOracle for TreeDecompositionOracle {
    /// Some bag, restricted to the component, always separates it in half;
    /// the first such bag is returned.
    fn separator(&self, g: &WeightedGraph, component: &[PointId]) -> Vec<PointId> {
        let mut inside = vec![false; g.n()];
        for &v in component {
            inside[v] = true;
        }
        let mut fallback = Vec::new();
        for bag in &self.decomposition.bags {
            let cut: Vec<PointId> = bag.iter().copied().filter(|&v| inside[v]).collect();
            if cut.is_empty() {
                continue;
            }
            let mut alive = inside.clone();
            cut.iter().for_each(|&v| alive[v] = false);
            if g.components(Some(&alive))
                .iter()
                .all(|c| 2 * c.len() <= component.len())
            {
                return cut;
            }
            if fallback.is_empty() {
                fallback = cut;
            }
        }
        fallback
    }
}

/// Left-sided orderings: for every separator vertex `r` of the current
/// component, the component sorted by distance from `r` inside it (ties by
/// id); then recurse on the components left after removing the separator.
pub fn separator_left_lso(
    g: &WeightedGraph,
    oracle: &dyn SeparatorOracle,
) -> Result<LsoCollection> {
    let n = g.n();
    let mut orderings: Vec<Ordering> = Vec::new();
    let mut pending: Vec<Vec<PointId>> = g.components(None);
    let mut alive = vec![false; n];
    while let Some(component) = pending.pop() {
        let sep = oracle.separator(g, &component);
        if sep.is_empty() || sep.iter().any(|v| component.binary_search(v).is_err()) {
            return Err(Error::SeparatorContract(format!(
                "separator {sep:?} is not a nonempty subset of a component of size {}",
                component.len()
            )));
        }
        for &v in &component {
            alive[v] = true;
        }
        for &r in &sep {
            let sp = g.dijkstra(r, Some(&alive));
            let mut order = component.clone();
            order.sort_by(|&a, &b| sp.dist[a].total_cmp(&sp.dist[b]).then(a.cmp(&b)));
            orderings.push(order);
        }
        for &v in &sep {
            alive[v] = false;
        }
        let parts = g.components(Some(&alive));
        for &v in &component {
            alive[v] = false;
        }
        if let Some(big) = parts.iter().find(|c| 2 * c.len() > component.len()) {
            return Err(Error::SeparatorContract(format!(
                "removing {sep:?} leaves a component of {} out of {} vertices",
                big.len(),
                component.len()
            )));
        }
        pending.extend(parts);
    }
    let mut lso = LsoCollection {
        kind: LsoKind::Left,
        rho: 1.0,
        tau: 0,
        orderings,
    };
    lso.tau = lso.measured_tau();
    Ok(lso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_instance, InstanceKind};
    use crate::lso::verify_lso;
    use crate::metric::MetricSpace;

    #[test]
    fn three_path_orders_from_middle() {
        let g = WeightedGraph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
        let lso = separator_left_lso(&g, &CentroidOracle).unwrap();
        assert_eq!(lso.orderings[0], vec![1, 0, 2]);
        assert!(verify_lso(&MetricSpace::from_graph(g).unwrap(), &lso).ok);
    }

    #[test]
    fn star_center_covers_everything() {
        let g = WeightedGraph::unweighted(5, (1..5).map(|v| (0, v))).unwrap();
        let lso = separator_left_lso(&g, &CentroidOracle).unwrap();
        assert_eq!(lso.orderings[0][0], 0);
        assert_eq!(lso.orderings[0].len(), 5);
        assert!(verify_lso(&MetricSpace::from_graph(g).unwrap(), &lso).ok);
    }

    #[test]
    fn random_tree_membership() {
        let g = generate_instance(&InstanceKind::RandomTree, 200, 5)
            .unwrap()
            .graph()
            .unwrap()
            .clone();
        let lso = separator_left_lso(&g, &CentroidOracle).unwrap();
        assert!(lso.tau <= 8, "tau {}", lso.tau);
        let report = verify_lso(&MetricSpace::from_graph(g).unwrap(), &lso);
        assert!(report.ok, "{report:?}");
    }

    struct Liar;
    impl SeparatorOracle for Liar {
        fn separator(&self, _: &WeightedGraph, component: &[PointId]) -> Vec<PointId> {
            vec![component[0]]
        }
    }

    #[test]
    fn contract_violation_reported() {
        let g = WeightedGraph::unweighted(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(matches!(
            separator_left_lso(&g, &Liar),
            Err(Error::SeparatorContract(_))
        ));
    }

    #[test]
    fn decompositions_validate_and_separate() {
        let tree = generate_instance(&InstanceKind::RandomTree, 60, 2)
            .unwrap()
            .graph()
            .unwrap()
            .clone();
        let td = TreeDecomposition::of_tree(&tree).unwrap();
        td.validate(&tree).unwrap();
        assert_eq!(td.width(), 1);

        let grid = generate_instance(&InstanceKind::Grid { width: 5 }, 30, 0)
            .unwrap()
            .graph()
            .unwrap()
            .clone();
        let td = TreeDecomposition::of_grid(30, 5);
        td.validate(&grid).unwrap();
        let oracle = TreeDecompositionOracle::new(&grid, td).unwrap();
        let lso = separator_left_lso(&grid, &oracle).unwrap();
        let report = verify_lso(&MetricSpace::from_graph(grid).unwrap(), &lso);
        assert!(report.ok, "{report:?}");

        let bogus = TreeDecomposition {
            bags: vec![vec![0, 1]],
            edges: vec![],
        };
        assert!(bogus.validate(&tree).is_err());
    }
}
