use std::collections::BTreeSet;

use crate::error::{precondition, Error, Result};
use crate::metric::{approx_le, epsilon_net, MetricSpace, PointId};

use super::{Partition, PartitionCover};

/// Graph with disjoint blue and red edge sets.
#[derive(Debug, Clone, PartialEq)]
pub struct RedBlueGraph {
    n: usize,
    blue: Vec<(usize, usize)>,
    red_adj: Vec<Vec<usize>>,
    blue_degree: usize,
    red_degree: usize,
}

impl RedBlueGraph {
    pub fn new(n: usize, blue: &[(usize, usize)], red: &[(usize, usize)]) -> Result<Self> {
        let norm = |&(u, v): &(usize, usize)| -> Result<(usize, usize)> {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInput(format!("bad red/blue edge ({u}, {v})")));
            }
            Ok((u.min(v), u.max(v)))
        };
        let blue: BTreeSet<_> = blue.iter().map(norm).collect::<Result<_>>()?;
        let red: BTreeSet<_> = red.iter().map(norm).collect::<Result<_>>()?;
        if let Some(&(u, v)) = blue.intersection(&red).next() {
            return Err(Error::InvalidInput(format!(
                "edge ({u}, {v}) is both red and blue"
            )));
        }
        let mut red_adj = vec![Vec::new(); n];
        for &(u, v) in &red {
            red_adj[u].push(v);
            red_adj[v].push(u);
        }
        let mut bdeg = vec![0usize; n];
        for &(u, v) in &blue {
            bdeg[u] += 1;
            bdeg[v] += 1;
        }
        Ok(RedBlueGraph {
            n,
            blue: blue.into_iter().collect(),
            blue_degree: bdeg.into_iter().max().unwrap_or(0).max(1),
            red_degree: red_adj.iter().map(Vec::len).max().unwrap_or(0).max(1),
            red_adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blue(&self) -> &[(usize, usize)] {
        &self.blue
    }

    pub fn red_neighbors(&self, v: usize) -> &[usize] {
        &self.red_adj[v]
    }

    /// Maximum blue and red degrees, each at least one.
    pub fn degree_bounds(&self) -> (usize, usize) {
        (self.blue_degree, self.red_degree)
    }

    /// `δ_b (2 δ_r + 2)`.
    pub fn matching_bound(&self) -> usize {
        self.blue_degree * (2 * self.red_degree + 2)
    }
}

/// Repeatedly extract a maximal matching from the uncovered blue edges,
/// skipping any edge whose endpoint has a red neighbour already matched.
pub fn red_blue_matchings(g: &RedBlueGraph) -> Vec<Vec<(usize, usize)>> {
    let mut remaining: Vec<(usize, usize)> = g.blue.clone();
    let mut out = Vec::new();
    let mut matched = vec![false; g.n];
    while !remaining.is_empty() {
        matched.iter_mut().for_each(|m| *m = false);
        let mut matching = Vec::new();
        let mut rest = Vec::new();
        for &(u, v) in &remaining {
            let free = !matched[u] && !matched[v];
            let red_ok = || {
                g.red_adj[u]
                    .iter()
                    .chain(&g.red_adj[v])
                    .all(|&w| !matched[w])
            };
            if free && red_ok() {
                matched[u] = true;
                matched[v] = true;
                matching.push((u, v));
            } else {
                rest.push((u, v));
            }
        }
        out.push(matching);
        remaining = rest;
    }
    out
}

/// Clusters `B(u, 2 eps delta) ∪ B(v, 2 eps delta)` for the matched net
/// pairs, then a singleton cluster per unmatched net point; every other
/// point joins the cluster of its nearest net point.
fn matched_partition(
    m: &MetricSpace,
    net: &[PointId],
    matching: &[(usize, usize)],
    delta: f64,
    eps: f64,
) -> Partition {
    let n = m.n();
    let ball_radius = 2.0 * eps * delta;
    let mut assignment = vec![usize::MAX; n];
    let mut next = 0;
    for &(a, b) in matching {
        for z in m
            .ball(net[a], ball_radius)
            .into_iter()
            .chain(m.ball(net[b], ball_radius))
        {
            if assignment[z] == usize::MAX {
                assignment[z] = next;
            }
        }
        next += 1;
    }
    for &u in net {
        if assignment[u] == usize::MAX {
            assignment[u] = next;
            next += 1;
        }
    }
    for z in 0..n {
        if assignment[z] == usize::MAX {
            let nearest = net
                .iter()
                .copied()
                .min_by(|&p, &q| m.d(z, p).total_cmp(&m.d(z, q)).then(p.cmp(&q)))
                .expect("net is nonempty");
            assignment[z] = assignment[nearest];
        }
    }
    Partition::from_assignment((1.0 + 8.0 * eps) * delta, &assignment)
}

/// Voronoi partition around an `(eps delta)`-net: the member of
/// [`pairwise_cover_doubling`] built from an empty matching.
pub fn net_partition(m: &MetricSpace, delta: f64, eps: f64) -> Partition {
    let net = epsilon_net(m, eps * delta).points;
    matched_partition(m, &net, &[], delta, eps)
}

/// Pairwise cover for doubling metrics with stretch `1 + 8 eps` and padding
/// `eps / 2`, at scale `(1 + 8 eps) delta`.
pub fn pairwise_cover_doubling(m: &MetricSpace, delta: f64, eps: f64) -> Result<PartitionCover> {
    const OP: &str = "pairwise_cover_doubling";
    if !(eps > 0.0 && eps < 1.0 / 16.0) {
        return Err(precondition(OP, format!("eps {eps} outside (0, 1/16)")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(precondition(OP, format!("delta {delta} must be positive")));
    }
    let net = epsilon_net(m, eps * delta).points;
    let mut blue = Vec::new();
    let mut red = Vec::new();
    let (lo, hi) = ((1.0 - 4.0 * eps) * delta / 2.0, (1.0 + 2.0 * eps) * delta);
    for (a, &u) in net.iter().enumerate() {
        for (b, &v) in net.iter().enumerate().skip(a + 1) {
            let d = m.d(u, v);
            if approx_le(d, 4.0 * eps * delta) {
                red.push((a, b));
            } else if approx_le(lo, d) && approx_le(d, hi) {
                blue.push((a, b));
            }
        }
    }
    let rb = RedBlueGraph::new(net.len(), &blue, &red)?;
    let mut matchings = red_blue_matchings(&rb);
    if matchings.is_empty() {
        matchings.push(Vec::new());
    }
    let partitions = matchings
        .iter()
        .map(|matching| matched_partition(m, &net, matching, delta, eps))
        .collect::<Vec<_>>();
    Ok(PartitionCover {
        tau: partitions.len(),
        partitions,
        rho: 1.0 + 8.0 * eps,
        eps: eps / 2.0,
        delta: (1.0 + 8.0 * eps) * delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::verify_pairwise_cover;

    fn covers_all(g: &RedBlueGraph, ms: &[Vec<(usize, usize)>]) -> bool {
        let got: BTreeSet<_> = ms.iter().flatten().copied().collect();
        g.blue().iter().all(|e| got.contains(e))
    }

    #[test]
    fn single_blue_edge() {
        let g = RedBlueGraph::new(2, &[(0, 1)], &[]).unwrap();
        assert_eq!(red_blue_matchings(&g), vec![vec![(0, 1)]]);
    }

    #[test]
    fn blue_triangle_needs_three() {
        let g = RedBlueGraph::new(3, &[(0, 1), (1, 2), (0, 2)], &[]).unwrap();
        let ms = red_blue_matchings(&g);
        assert_eq!(ms.len(), 3);
        assert!(covers_all(&g, &ms));
    }

    #[test]
    fn red_edge_separates_blue_pairs() {
        // a-b and c-d blue, b-c red.
        let g = RedBlueGraph::new(4, &[(0, 1), (2, 3)], &[(1, 2)]).unwrap();
        let ms = red_blue_matchings(&g);
        assert!(covers_all(&g, &ms));
        assert!(ms.iter().all(|m| m.len() == 1));
        assert!(ms.len() <= g.matching_bound());
    }

    #[test]
    fn overlapping_colours_rejected() {
        assert!(RedBlueGraph::new(2, &[(0, 1)], &[(1, 0)]).is_err());
    }

    #[test]
    fn eps_range() {
        let m = MetricSpace::uniform(3, 1.0);
        assert!(pairwise_cover_doubling(&m, 1.0, 0.0).is_err());
        assert!(pairwise_cover_doubling(&m, 1.0, 1.0 / 16.0).is_err());
    }

    #[test]
    fn single_point() {
        let m = MetricSpace::uniform(1, 1.0);
        let c = pairwise_cover_doubling(&m, 1.0, 0.05).unwrap();
        assert_eq!(c.partitions.len(), 1);
        assert_eq!(c.partitions[0].clusters(), &[vec![0]]);
    }

    #[test]
    fn two_points_in_band() {
        let m = MetricSpace::from_points(vec![vec![0.0], vec![0.75]]).unwrap();
        let c = pairwise_cover_doubling(&m, 1.0, 1.0 / 32.0).unwrap();
        let report = verify_pairwise_cover(&m, &c);
        assert!(report.ok, "{report:?}");
        assert_eq!(report.band_pairs, 1);
    }

    #[test]
    fn line_cover_verifies_and_balls_are_disjoint() {
        let m = MetricSpace::from_points(
            (0..40)
                .map(|i| vec![i as f64 * 0.37 % 5.0, (i / 8) as f64])
                .collect(),
        )
        .unwrap();
        let eps = 0.05;
        for delta in [1.0, 2.5, 4.0] {
            let c = pairwise_cover_doubling(&m, delta, eps).unwrap();
            let report = verify_pairwise_cover(&m, &c);
            assert!(report.ok, "delta={delta}: {report:?}");

            let net = epsilon_net(&m, eps * delta).points;
            let mut blue = Vec::new();
            let mut red = Vec::new();
            for a in 0..net.len() {
                for b in a + 1..net.len() {
                    let d = m.d(net[a], net[b]);
                    if approx_le(d, 4.0 * eps * delta) {
                        red.push((a, b));
                    } else if approx_le((1.0 - 4.0 * eps) * delta / 2.0, d)
                        && approx_le(d, (1.0 + 2.0 * eps) * delta)
                    {
                        blue.push((a, b));
                    }
                }
            }
            let g = RedBlueGraph::new(net.len(), &blue, &red).unwrap();
            for matching in red_blue_matchings(&g) {
                let single: Vec<Vec<PointId>> = matching
                    .iter()
                    .flat_map(|&(a, b)| {
                        [
                            m.ball(net[a], 2.0 * eps * delta),
                            m.ball(net[b], 2.0 * eps * delta),
                        ]
                    })
                    .collect();
                for i in 0..single.len() {
                    for j in i + 1..single.len() {
                        if i / 2 != j / 2 {
                            assert!(single[i].iter().all(|x| !single[j].contains(x)));
                        }
                    }
                }
            }
        }
    }
}
