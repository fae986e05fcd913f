//! Metric spanners assembled from orderings, and attack evaluation.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::lso::{classic_as_triangle, LsoCollection, LsoKind, Ordering};
use crate::metric::{MetricSpace, PointId};
use crate::path_spanner::{
    faulty_extension, reliable_left, reliable_two_hop, PathSpanner, DEFAULT_LEFT_C,
    DEFAULT_TWO_HOP_C,
};
use crate::rng::Rng;

/// A path spanner over one ordering, kept for computing faulty extensions.
/// Only the center metadata is retained; the edges live in the union.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpannerPart {
    pub ordering: Ordering,
    pub path: PathSpanner,
}

/// Where an edge first came from: part index and the two path positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub part: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSpanner {
    pub n: usize,
    pub source: LsoKind,
    /// Guaranteed survivor stretch `2 rho`.
    pub stretch: f64,
    pub nu: f64,
    pub nu_per_ordering: f64,
    pub c: f64,
    /// Edges `(x, y, d(x, y))` with `x < y`.
    pub edges: Vec<(PointId, PointId, f64)>,
    pub provenance: Vec<Provenance>,
    pub parts: Vec<SpannerPart>,
}

impl WeightedSpanner {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Drop the edges and every level sampled with probability one.
fn compact(mut p: PathSpanner) -> PathSpanner {
    p.edges = Vec::new();
    for (j, &q) in p.probabilities.iter().enumerate() {
        if q >= 1.0 {
            p.centers.remove(&j);
        }
    }
    p
}

fn assemble(
    m: &MetricSpace,
    lso: LsoCollection,
    nu: f64,
    c: f64,
    rng: &mut Rng,
    build: impl Fn(usize, f64, f64, &mut Rng) -> Result<PathSpanner>,
) -> Result<WeightedSpanner> {
    let n = m.n();
    let tau = lso.tau.max(1);
    let nu_per_ordering = nu / tau as f64;
    let mut slot = vec![usize::MAX; n * n];
    let mut edges = Vec::new();
    let mut provenance = Vec::new();
    let mut parts = Vec::with_capacity(lso.orderings.len());
    for ordering in lso.orderings {
        let path = build(ordering.len(), nu_per_ordering, c, rng)?;
        let part = parts.len();
        for &(a, b) in &path.edges {
            let (x, y) = (ordering[a].min(ordering[b]), ordering[a].max(ordering[b]));
            if slot[x * n + y] == usize::MAX {
                slot[x * n + y] = edges.len();
                edges.push((x, y, m.d(x, y)));
                provenance.push(Provenance { part, a, b });
            }
        }
        parts.push(SpannerPart {
            ordering,
            path: compact(path),
        });
    }
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&i| (edges[i].0, edges[i].1));
    Ok(WeightedSpanner {
        n,
        source: lso.kind,
        stretch: 2.0 * lso.rho,
        nu,
        nu_per_ordering,
        c,
        edges: order.iter().map(|&i| edges[i]).collect(),
        provenance: order.iter().map(|&i| provenance[i]).collect(),
        parts,
    })
}

fn check(op: &'static str, lso: &LsoCollection, want: LsoKind, nu: f64) -> Result<()> {
    if lso.kind != want {
        return Err(precondition(
            op,
            format!("expected a {want:?} LSO, got {:?}", lso.kind),
        ));
    }
    if !(nu > 0.0 && nu < 1.0) {
        return Err(precondition(op, format!("nu {nu} outside (0, 1)")));
    }
    Ok(())
}

/// One reliable 2-hop path spanner per ordering at `nu / tau`, lifted to
/// the points with metric weights. `c` defaults to [`DEFAULT_TWO_HOP_C`].
pub fn spanner_from_triangle_lso(
    m: &MetricSpace,
    lso: LsoCollection,
    nu: f64,
    c: Option<f64>,
    rng: &mut Rng,
) -> Result<WeightedSpanner> {
    check("spanner_from_triangle_lso", &lso, LsoKind::Triangle, nu)?;
    assemble(
        m,
        lso,
        nu,
        c.unwrap_or(DEFAULT_TWO_HOP_C),
        rng,
        reliable_two_hop,
    )
}

/// One reliable left spanner per partial ordering at `nu / tau`.
pub fn spanner_from_left_lso(
    m: &MetricSpace,
    lso: LsoCollection,
    nu: f64,
    c: Option<f64>,
    rng: &mut Rng,
) -> Result<WeightedSpanner> {
    check("spanner_from_left_lso", &lso, LsoKind::Left, nu)?;
    assemble(m, lso, nu, c.unwrap_or(DEFAULT_LEFT_C), rng, reliable_left)
}

/// Read as a triangle LSO at `2 rho + 1`.
pub fn spanner_from_classic_lso(
    m: &MetricSpace,
    lso: LsoCollection,
    nu: f64,
    c: Option<f64>,
    rng: &mut Rng,
) -> Result<WeightedSpanner> {
    check("spanner_from_classic_lso", &lso, LsoKind::Classic, nu)?;
    spanner_from_triangle_lso(m, classic_as_triangle(&lso), nu, c, rng)
}

/// Dispatch on the LSO kind.
pub fn spanner_from_lso(
    m: &MetricSpace,
    lso: LsoCollection,
    nu: f64,
    c: Option<f64>,
    rng: &mut Rng,
) -> Result<WeightedSpanner> {
    match lso.kind {
        LsoKind::Classic => spanner_from_classic_lso(m, lso, nu, c, rng),
        LsoKind::Triangle => spanner_from_triangle_lso(m, lso, nu, c, rng),
        LsoKind::Left => spanner_from_left_lso(m, lso, nu, c, rng),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackReport {
    pub attack: Vec<PointId>,
    pub bplus: Vec<PointId>,
    /// Largest `d_{H - B}(x, y) / d(x, y)` over survivor pairs; 1 when there
    /// are fewer than two survivors.
    pub max_stretch: f64,
    pub worst_pair: Option<(PointId, PointId)>,
    pub edges: usize,
    /// `|B⁺_σ \ B|` per part.
    pub part_extension: Vec<usize>,
}

impl AttackReport {
    pub fn ratio(&self) -> f64 {
        if self.attack.is_empty() {
            1.0 + self.bplus.len() as f64
        } else {
            self.bplus.len() as f64 / self.attack.len() as f64
        }
    }
}

/// `B⁺` as the union of the per-part faulty extensions.
pub fn faulty_extension_of(
    h: &WeightedSpanner,
    attacked: &[bool],
) -> Result<(Vec<bool>, Vec<usize>)> {
    let mut plus = attacked.to_vec();
    let mut extension = Vec::with_capacity(h.parts.len());
    let mut local = Vec::new();
    for part in &h.parts {
        local.clear();
        local.extend(part.ordering.iter().map(|&x| attacked[x]));
        let ext = faulty_extension(&part.path, &local)?;
        let mut extra = 0;
        for (i, &x) in part.ordering.iter().enumerate() {
            if ext[i] && !attacked[x] {
                extra += 1;
                plus[x] = true;
            }
        }
        extension.push(extra);
    }
    Ok((plus, extension))
}

/// Faulty extension plus the exact survivor stretch in `H - B`.
///
/// Pairs joined by an edge have stretch exactly 1. Shortest paths are run
/// only from survivors with a non-adjacent survivor partner, and stop once
/// all such partners are settled.
pub fn attack_evaluate(
    m: &MetricSpace,
    h: &WeightedSpanner,
    attack: &[PointId],
) -> Result<AttackReport> {
    let n = h.n;
    let attacked = crate::path_spanner::attack_mask(n, attack)?;
    let (plus, part_extension) = faulty_extension_of(h, &attacked)?;
    let mut adj: Vec<Vec<(PointId, f64)>> = vec![Vec::new(); n];
    for &(x, y, w) in &h.edges {
        if !attacked[x] && !attacked[y] {
            adj[x].push((y, w));
            adj[y].push((x, w));
        }
    }
    let survivors: Vec<PointId> = (0..n).filter(|&x| !plus[x]).collect();
    let mut max_stretch = 1.0f64;
    let mut worst_pair = None;
    let mut adjacent = vec![false; n];
    let mut target = vec![false; n];
    let mut dist = vec![f64::INFINITY; n];
    let mut touched = Vec::new();
    for (si, &x) in survivors.iter().enumerate() {
        for &(y, _) in &adj[x] {
            adjacent[y] = true;
        }
        let mut pending = 0;
        for &y in &survivors[si + 1..] {
            if !adjacent[y] {
                target[y] = true;
                pending += 1;
            }
        }
        for &(y, _) in &adj[x] {
            adjacent[y] = false;
        }
        if pending == 0 {
            continue;
        }
        let mut heap = BinaryHeap::new();
        dist[x] = 0.0;
        touched.push(x);
        heap.push(Reverse((Dist(0.0), x)));
        while let Some(Reverse((Dist(d), v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            if target[v] {
                target[v] = false;
                pending -= 1;
                let s = d / m.d(x, v);
                if s > max_stretch || worst_pair.is_none() && s >= max_stretch {
                    max_stretch = s;
                    worst_pair = Some((x, v));
                }
                if pending == 0 {
                    break;
                }
            }
            for &(u, w) in &adj[v] {
                let nd = d + w;
                if nd < dist[u] {
                    if dist[u].is_infinite() {
                        touched.push(u);
                    }
                    dist[u] = nd;
                    heap.push(Reverse((Dist(nd), u)));
                }
            }
        }
        if pending > 0 {
            // Disconnected survivors.
            max_stretch = f64::INFINITY;
            let y = survivors[si + 1..].iter().copied().find(|&y| target[y]);
            worst_pair = y.map(|y| (x, y));
            for &y in &survivors[si + 1..] {
                target[y] = false;
            }
        }
        for &v in &touched {
            dist[v] = f64::INFINITY;
        }
        touched.clear();
    }
    Ok(AttackReport {
        attack: crate::path_spanner::indices(&attacked),
        bplus: crate::path_spanner::indices(&plus),
        max_stretch,
        worst_pair,
        edges: h.edges.len(),
        part_extension,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dist(f64);
impl Eq for Dist {}
impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackGenerator {
    #[default]
    Uniform,
    /// A window of consecutive points of a random ordering.
    Contiguous,
    /// The points nearest a random center.
    Ball,
}

/// `size` distinct points chosen uniformly.
pub fn uniform_attack(n: usize, size: usize, rng: &mut Rng) -> Vec<PointId> {
    let mut b = rand::seq::index::sample(rng, n, size.min(n)).into_vec();
    b.sort_unstable();
    b
}

/// `size` consecutive entries of a random ordering holding at least `size`
/// points (else the longest).
pub fn contiguous_attack(
    orderings: &[Ordering],
    n: usize,
    size: usize,
    rng: &mut Rng,
) -> Vec<PointId> {
    let long: Vec<&Ordering> = orderings.iter().filter(|o| o.len() >= size).collect();
    let Some(o) = long
        .choose(rng)
        .copied()
        .or_else(|| orderings.iter().max_by_key(|o| o.len()))
    else {
        return uniform_attack(n, size, rng);
    };
    let size = size.min(o.len());
    let start = rng.gen_range(0..=o.len() - size);
    let mut b = o[start..start + size].to_vec();
    b.sort_unstable();
    b
}

/// The `size` points closest to a random center, ties broken by id.
pub fn ball_attack(m: &MetricSpace, size: usize, rng: &mut Rng) -> Vec<PointId> {
    let center = rng.gen_range(0..m.n());
    let mut by_distance: Vec<PointId> = (0..m.n()).collect();
    by_distance.sort_by(|&a, &b| m.d(center, a).total_cmp(&m.d(center, b)).then(a.cmp(&b)));
    let mut b = by_distance[..size.min(m.n())].to_vec();
    b.sort_unstable();
    b
}

pub fn generate_attack(
    generator: AttackGenerator,
    m: &MetricSpace,
    orderings: &[Ordering],
    size: usize,
    rng: &mut Rng,
) -> Vec<PointId> {
    match generator {
        AttackGenerator::Uniform => uniform_attack(m.n(), size, rng),
        AttackGenerator::Contiguous => contiguous_attack(orderings, m.n(), size, rng),
        AttackGenerator::Ball => ball_attack(m, size, rng),
    }
}

/// One line of the attack CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct AttackRow {
    pub instance: String,
    pub n: usize,
    pub nu: f64,
    pub attack_size: usize,
    pub bplus_size: usize,
    pub max_stretch: f64,
    pub edges: usize,
    pub seed: u64,
}

impl AttackRow {
    pub fn new(instance: &str, nu: f64, seed: u64, n: usize, report: &AttackReport) -> Self {
        AttackRow {
            instance: instance.to_string(),
            n,
            nu,
            attack_size: report.attack.len(),
            bplus_size: report.bplus.len(),
            max_stretch: report.max_stretch,
            edges: report.edges,
            seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_instance, InstanceKind};
    use crate::lso::{separator_left_lso, CentroidOracle};
    use crate::rng::seeded;

    #[test]
    fn contiguous_skips_short_orderings() {
        let orderings = vec![vec![3], vec![0, 1, 2, 3, 4, 5], vec![5, 4]];
        for seed in 0..10 {
            let b = contiguous_attack(&orderings, 6, 4, &mut seeded(seed));
            assert_eq!(b.len(), 4);
            assert_eq!(b[3] - b[0], 3);
        }
        assert_eq!(contiguous_attack(&orderings, 6, 9, &mut seeded(0)).len(), 6);
    }

    fn line(n: usize) -> MetricSpace {
        MetricSpace::from_points((0..n).map(|i| vec![i as f64]).collect()).unwrap()
    }

    fn sorted_triangle(n: usize) -> LsoCollection {
        LsoCollection {
            kind: LsoKind::Triangle,
            rho: 1.0,
            tau: 1,
            orderings: vec![(0..n).collect()],
        }
    }

    #[test]
    fn two_points_get_their_edge() {
        let m = line(2);
        let h =
            spanner_from_triangle_lso(&m, sorted_triangle(2), 0.2, None, &mut seeded(0)).unwrap();
        assert_eq!(h.edges, vec![(0, 1, 1.0)]);
    }

    #[test]
    fn weights_dominate() {
        let m = generate_instance(&InstanceKind::RandomEuclidean { dim: 2 }, 40, 1)
            .unwrap()
            .into_metric()
            .unwrap();
        let lso = LsoCollection {
            kind: LsoKind::Triangle,
            rho: 9.0,
            tau: 1,
            orderings: vec![(0..40).collect()],
        };
        let h = spanner_from_triangle_lso(&m, lso, 0.3, Some(0.5), &mut seeded(0)).unwrap();
        assert!(h.edges.iter().all(|&(x, y, w)| w == m.d(x, y) && x < y));
        assert_eq!(h.edges.len(), h.provenance.len());
        for (e, p) in h.edges.iter().zip(&h.provenance) {
            let o = &h.parts[p.part].ordering;
            assert_eq!((o[p.a].min(o[p.b]), o[p.a].max(o[p.b])), (e.0, e.1));
        }
    }

    #[test]
    fn empty_and_full_attacks() {
        let m = line(30);
        let h =
            spanner_from_triangle_lso(&m, sorted_triangle(30), 0.2, None, &mut seeded(3)).unwrap();
        let r = attack_evaluate(&m, &h, &[]).unwrap();
        assert!(r.bplus.is_empty());
        assert!(r.max_stretch <= h.stretch);
        let all: Vec<_> = (0..30).collect();
        let r = attack_evaluate(&m, &h, &all).unwrap();
        assert_eq!(r.bplus.len(), 30);
        assert_eq!(r.max_stretch, 1.0);
    }

    #[test]
    fn star_tree_spanner_has_stretch_two() {
        let g = generate_instance(&InstanceKind::Star, 30, 0)
            .unwrap()
            .graph()
            .unwrap()
            .clone();
        let lso = separator_left_lso(&g, &CentroidOracle).unwrap();
        let m = MetricSpace::from_graph(g).unwrap();
        let h = spanner_from_left_lso(&m, lso, 0.2, None, &mut seeded(1)).unwrap();
        let mut rng = seeded(2);
        for size in [0, 1, 5] {
            let b = uniform_attack(30, size, &mut rng);
            let r = attack_evaluate(&m, &h, &b).unwrap();
            assert!(r.max_stretch <= 2.0 + 1e-9, "{r:?}");
        }
    }

    #[test]
    fn wrong_kind_rejected() {
        let m = line(3);
        assert!(spanner_from_left_lso(&m, sorted_triangle(3), 0.2, None, &mut seeded(0)).is_err());
        assert!(
            spanner_from_triangle_lso(&m, sorted_triangle(3), 1.0, None, &mut seeded(0)).is_err()
        );
    }

    #[test]
    fn attack_generators_sizes() {
        let m = line(20);
        let mut rng = seeded(5);
        let o: Vec<Ordering> = vec![(0..20).rev().collect()];
        for g in [
            AttackGenerator::Uniform,
            AttackGenerator::Contiguous,
            AttackGenerator::Ball,
        ] {
            let b = generate_attack(g, &m, &o, 7, &mut rng);
            assert_eq!(b.len(), 7);
            assert!(b.windows(2).all(|w| w[0] < w[1]));
        }
        let ball = ball_attack(&m, 3, &mut seeded(0));
        assert_eq!(ball[2] - ball[0], 2);
    }
}
