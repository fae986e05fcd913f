//! Laminar hierarchies, HSTs built from them, and ultrametric covers.
//!
//! Each scale `Δ_i = c · R^i` with `R = 4ρ/ε` receives a pairwise partition
//! cover. Partition `j` of every scale is rounded into a laminar hierarchy,
//! which becomes one HST. A grid of base offsets `c` makes every pair land
//! in the band of some scale.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::hst::Hst;
use crate::metric::{approx_le, MetricSpace, PointId};
use crate::partition::{net_partition, pairwise_cover_doubling, pairwise_cover_general, Partition};

/// Attempts of the verify-and-rebuild loop in [`ultrametric_cover_general`].
pub const GENERAL_ULTRAMETRIC_MAX_ATTEMPTS: usize = 20;

/// Refining partitions `levels[0] ⊑ levels[1] ⊑ ..`, where `levels[0]` is
/// the singleton level and `levels[i + 1]` sits at scale `scales[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaminarHierarchy {
    pub levels: Vec<Partition>,
    pub scales: Vec<f64>,
    pub eps: f64,
}

impl LaminarHierarchy {
    /// First pair of consecutive levels where some lower cluster is split.
    pub fn refinement_violation(&self) -> Option<usize> {
        self.levels.windows(2).position(|w| {
            w[0].clusters().iter().any(|c| {
                c.iter()
                    .any(|&x| w[1].cluster_of(x) != w[1].cluster_of(c[0]))
            })
        })
    }
}

/// Round per-scale partitions into a laminar hierarchy. `partitions[i]`
/// must be `Δ_i`-bounded for `Δ_i = c · (4 rho / eps)^i`.
pub fn laminarize(
    m: &MetricSpace,
    partitions: &[Partition],
    rho: f64,
    eps: f64,
    c: f64,
) -> Result<LaminarHierarchy> {
    const OP: &str = "laminarize";
    if !(eps > 0.0 && eps < 0.5) {
        return Err(precondition(OP, format!("eps {eps} outside (0, 1/2)")));
    }
    if !(rho >= 1.0 && c > 0.0) {
        return Err(precondition(
            OP,
            format!("rho {rho} and c {c} must satisfy rho >= 1, c > 0"),
        ));
    }
    let n = m.n();
    let ratio = 4.0 * rho / eps;
    let mut levels = vec![Partition::singletons(n, 0.0)];
    let mut scales = Vec::with_capacity(partitions.len());
    let mut delta = c;
    for (i, p) in partitions.iter().enumerate() {
        if p.n() != n {
            return Err(precondition(
                OP,
                format!("level {i} partitions {} points, expected {n}", p.n()),
            ));
        }
        let diam = p.max_diameter(m);
        if !approx_le(diam, delta) {
            return Err(precondition(
                OP,
                format!("level {i} has diameter {diam} > {delta}"),
            ));
        }
        let prev = levels.last().expect("base level present");
        let mut taken = vec![false; prev.clusters().len()];
        let mut rounded = Vec::new();
        for cluster in p.clusters() {
            let mut merged = Vec::new();
            for &x in cluster {
                let pc = prev.cluster_of(x);
                if !taken[pc] {
                    taken[pc] = true;
                    merged.extend_from_slice(&prev.clusters()[pc]);
                }
            }
            merged.sort_unstable();
            rounded.push(merged);
        }
        levels.push(Partition::from_clusters((1.0 + eps) * delta, rounded));
        scales.push(delta);
        delta *= ratio;
    }
    Ok(LaminarHierarchy {
        levels,
        scales,
        eps,
    })
}

/// Leaves are points; a level-`i` node has label `(1 + eps) Δ_i`. The top
/// level must be a single cluster unless `n = 1`.
pub fn hierarchy_to_hst(h: &LaminarHierarchy) -> Result<Hst> {
    let n = h.levels[0].n();
    let top = h.levels.last().expect("base level present");
    if n == 1 {
        return Hst::new(vec![None], vec![0.0], vec![Some(0)]);
    }
    if top.clusters().len() != 1 {
        return Err(precondition(
            "hierarchy_to_hst",
            format!("top level has {} clusters", top.clusters().len()),
        ));
    }
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut label = vec![0.0; n];
    let mut leaf_point: Vec<Option<PointId>> = (0..n).map(Some).collect();
    // Node id of each cluster of the level below.
    let mut below: Vec<usize> = (0..n).collect();
    for (level, scale) in h.levels.windows(2).zip(&h.scales) {
        let (lower, upper) = (&level[0], &level[1]);
        let first = parent.len();
        for _ in upper.clusters() {
            parent.push(None);
            label.push((1.0 + h.eps) * scale);
            leaf_point.push(None);
        }
        for (ci, cluster) in lower.clusters().iter().enumerate() {
            parent[below[ci]] = Some(first + upper.cluster_of(cluster[0]));
        }
        below = (first..parent.len()).collect();
    }
    Hst::new(parent, label, leaf_point)
}

/// Spacing of the base offsets `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "grid", rename_all = "kebab-case")]
pub enum OffsetGrid {
    /// `c = (1 + eps)^l` for `l = 0 ..= floor(log_{1+eps}(4 rho / eps))`.
    Fine,
    /// Coarsest geometric grid whose stretch stays within `stretch`.
    Target { stretch: f64 },
}

/// Family of dominating HSTs with the declared parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UltrametricCover {
    pub ultrametrics: Vec<Hst>,
    pub tau: usize,
    pub rho: f64,
    pub separation: f64,
    pub max_degree: Option<usize>,
}

impl UltrametricCover {
    fn single_point(rho: f64, separation: f64) -> Result<Self> {
        let hst = Hst::new(vec![None], vec![0.0], vec![Some(0)])?;
        Ok(UltrametricCover {
            ultrametrics: vec![hst],
            tau: 1,
            rho,
            separation,
            max_degree: Some(0),
        })
    }
}

/// Base offsets in units of the minimum distance.
fn offsets(ratio: f64, rho: f64, eps: f64, grid: OffsetGrid) -> Result<Vec<f64>> {
    match grid {
        OffsetGrid::Fine => {
            let top = (ratio.ln() / eps.ln_1p()).floor() as i32;
            Ok((0..=top).map(|l| (1.0 + eps).powi(l)).collect())
        }
        OffsetGrid::Target { stretch } => {
            // A pair with ρ d in (c/γ, c] lies in the band of scale c as long
            // as γ ≤ 2, and its label is then (1 + eps) c ≤ (1 + eps) γ ρ d.
            let gamma = (stretch / ((1.0 + eps) * rho)).min(2.0);
            if gamma <= 1.0 {
                return Err(precondition(
                    "ultrametric cover",
                    format!("stretch {stretch} unattainable with rho {rho} and padding {eps}"),
                ));
            }
            let count = (ratio.ln() / gamma.ln()).ceil().max(1.0) as i32;
            let step = ratio.powf(1.0 / f64::from(count));
            Ok((0..count).map(|l| step.powi(l)).collect())
        }
    }
}

/// Shared driver: `cover_at(Δ)` returns the partitions of a pairwise cover
/// at scale `Δ` with stretch `rho` and padding `eps`; `filler(Δ)` is any
/// `Δ`-bounded partition, used at scales whose band holds no pair.
fn build_cover(
    m: &MetricSpace,
    rho: f64,
    eps: f64,
    grid: OffsetGrid,
    mut cover_at: impl FnMut(f64) -> Result<Vec<Partition>>,
    filler: impl Fn(f64) -> Partition,
) -> Result<Vec<Hst>> {
    let n = m.n();
    let dmin = m.min_distance().expect("n >= 2");
    let phi = m.max_distance().expect("n >= 2");
    let ratio = 4.0 * rho / eps;
    let mut dists: Vec<f64> = m.pairs().map(|(x, y)| m.d(x, y)).collect();
    dists.sort_by(f64::total_cmp);
    let band_nonempty = |delta: f64| {
        let (lo, hi) = (delta / (2.0 * rho), delta / rho);
        let start = dists.partition_point(|&d| !approx_le(lo, d));
        start < dists.len() && approx_le(dists[start], hi)
    };
    let mut out = Vec::new();
    for c in offsets(ratio, rho, eps, grid)? {
        let base = c * dmin;
        let mut levels: Vec<Vec<Partition>> = Vec::new();
        let mut useful = false;
        let mut delta = base;
        loop {
            if approx_le(phi, delta) {
                levels.push(vec![Partition::from_clusters(
                    delta,
                    vec![(0..n).collect()],
                )]);
                useful |= band_nonempty(delta);
                break;
            }
            if band_nonempty(delta) {
                levels.push(cover_at(delta)?);
                useful = true;
            } else {
                levels.push(vec![filler(delta)]);
            }
            delta *= ratio;
        }
        if !useful {
            continue;
        }
        let tau = levels
            .iter()
            .map(Vec::len)
            .max()
            .expect("at least one level");
        for j in 0..tau {
            let column: Vec<Partition> = levels
                .iter()
                .map(|ps| ps[j.min(ps.len() - 1)].clone())
                .collect();
            let hierarchy = laminarize(m, &column, rho, eps, base)?;
            out.push(hierarchy_to_hst(&hierarchy)?);
        }
    }
    Ok(out)
}

/// Cover of an arbitrary metric with stretch `2k + eps`, built from the
/// general pairwise covers with slack `eps / 8`. Each candidate is verified
/// and rebuilt on failure.
pub fn ultrametric_cover_general<R: Rng + ?Sized>(
    m: &MetricSpace,
    k: usize,
    eps: f64,
    grid: OffsetGrid,
    rng: &mut R,
) -> Result<UltrametricCover> {
    const OP: &str = "ultrametric_cover_general";
    if k < 1 {
        return Err(precondition(OP, "k must be at least 1"));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(precondition(OP, format!("eps {eps} outside (0, 1/2]")));
    }
    let kf = k as f64;
    let slack = eps / 8.0;
    let rho = 2.0 * kf + slack;
    let pad = slack / (2.0 * kf * rho);
    let target = 2.0 * kf + eps;
    if m.n() == 1 {
        return UltrametricCover::single_point(target, 4.0 * rho / pad);
    }
    for _ in 0..GENERAL_ULTRAMETRIC_MAX_ATTEMPTS {
        let hsts = build_cover(
            m,
            rho,
            pad,
            grid,
            |delta| Ok(pairwise_cover_general(m, delta, k, slack, rng)?.partitions),
            |delta| Partition::singletons(m.n(), delta),
        )?;
        let cover = UltrametricCover {
            tau: hsts.len(),
            ultrametrics: hsts,
            rho: target,
            separation: 4.0 * rho / pad,
            max_degree: None,
        };
        if verify_cover(m, &cover).ok() {
            return Ok(cover);
        }
    }
    Err(Error::RetriesExhausted {
        op: OP,
        attempts: GENERAL_ULTRAMETRIC_MAX_ATTEMPTS,
    })
}

/// Tuning for [`ultrametric_cover_doubling`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublingOptions {
    /// Padding of the inner pairwise covers as a fraction of `eps`.
    pub inner_fraction: f64,
    pub grid: Option<OffsetGrid>,
}

impl Default for DoublingOptions {
    fn default() -> Self {
        DoublingOptions {
            inner_fraction: 1.0 / 16.0,
            grid: None,
        }
    }
}

/// Cover with stretch `1 + eps` whose HSTs are `(1/eps)`-separated and have
/// bounded degree on doubling inputs.
pub fn ultrametric_cover_doubling(
    m: &MetricSpace,
    eps: f64,
    opts: DoublingOptions,
) -> Result<UltrametricCover> {
    const OP: &str = "ultrametric_cover_doubling";
    if !(eps > 0.0 && eps < 0.5) {
        return Err(precondition(OP, format!("eps {eps} outside (0, 1/2)")));
    }
    let inner = eps * opts.inner_fraction;
    if !(inner > 0.0 && inner < 1.0 / 16.0) {
        return Err(precondition(
            OP,
            format!("inner padding {inner} outside (0, 1/16)"),
        ));
    }
    let rho = 1.0 + 8.0 * inner;
    let pad = inner / 2.0;
    let target = 1.0 + eps;
    if m.n() == 1 {
        return UltrametricCover::single_point(target, 1.0 / eps);
    }
    let grid = opts.grid.unwrap_or(OffsetGrid::Target { stretch: target });
    let hsts = build_cover(
        m,
        rho,
        pad,
        grid,
        |delta| Ok(pairwise_cover_doubling(m, delta / rho, inner)?.partitions),
        |delta| net_partition(m, delta / rho, inner),
    )?;
    let max_degree = hsts.iter().map(Hst::max_degree).max();
    Ok(UltrametricCover {
        tau: hsts.len(),
        ultrametrics: hsts,
        rho: target,
        separation: 1.0 / eps,
        max_degree,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverReport {
    pub max_stretch: f64,
    pub worst_pair: Option<(PointId, PointId)>,
    pub dominance_ok: bool,
    /// `(ultrametric, x, y)` with `d_U(x, y) < d_X(x, y)`.
    pub dominance_violation: Option<(usize, PointId, PointId)>,
    pub max_degree: usize,
    pub separation_ok: bool,
    pub min_separation: f64,
    pub count_ok: bool,
    pub rho: f64,
}

impl CoverReport {
    pub fn ok(&self) -> bool {
        self.dominance_ok
            && self.separation_ok
            && self.count_ok
            && approx_le(self.max_stretch, self.rho)
    }
}

/// Exhaustive check over all pairs and ultrametrics.
pub fn verify_cover(m: &MetricSpace, cover: &UltrametricCover) -> CoverReport {
    let n = m.n();
    let mut best = vec![f64::INFINITY; n * n];
    let mut report = CoverReport {
        max_stretch: 1.0,
        worst_pair: None,
        dominance_ok: true,
        dominance_violation: None,
        max_degree: 0,
        separation_ok: true,
        min_separation: f64::INFINITY,
        count_ok: cover.ultrametrics.len() <= cover.tau,
        rho: cover.rho,
    };
    for (u, hst) in cover.ultrametrics.iter().enumerate() {
        report.max_degree = report.max_degree.max(hst.max_degree());
        report.min_separation = report.min_separation.min(hst.separation());
        if !hst.is_k_hst(cover.separation) {
            report.separation_ok = false;
        }
        let du = hst.all_distances();
        for (x, y) in m.pairs() {
            let d = du[x * n + y];
            if report.dominance_ok && !approx_le(m.d(x, y), d) {
                report.dominance_ok = false;
                report.dominance_violation = Some((u, x, y));
            }
            let b = &mut best[x * n + y];
            if d < *b {
                *b = d;
            }
        }
    }
    if let Some(claimed) = cover.max_degree {
        if report.max_degree > claimed {
            report.separation_ok = false;
        }
    }
    for (x, y) in m.pairs() {
        let s = best[x * n + y] / m.d(x, y);
        if report.worst_pair.is_none() || s > report.max_stretch {
            report.max_stretch = s;
            report.worst_pair = Some((x, y));
        }
    }
    report
}

/// Points `u_{i,j}` from the doubling characterization: in every HST take
/// the highest ancestor of `x` with label at most `rho * r` and one point
/// below each of its children.
pub fn half_radius_centers(cover: &UltrametricCover, x: PointId, r: f64) -> Vec<PointId> {
    let mut out = Vec::new();
    for hst in &cover.ultrametrics {
        let below = hst.min_leaf_below();
        let mut node = hst.leaf(x);
        while let Some(p) = hst.parent(node) {
            if !approx_le(hst.label(p), cover.rho * r) {
                break;
            }
            node = p;
        }
        if hst.children(node).is_empty() {
            out.push(below[node]);
        }
        out.extend(hst.children(node).iter().map(|&c| below[c]));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Whether `B(x, r)` is covered by the balls of radius `r / 2` around
/// [`half_radius_centers`].
pub fn half_radius_balls_cover(
    m: &MetricSpace,
    cover: &UltrametricCover,
    x: PointId,
    r: f64,
) -> bool {
    let centers = half_radius_centers(cover, x, r);
    m.ball(x, r)
        .into_iter()
        .all(|y| centers.iter().any(|&u| approx_le(m.d(u, y), r / 2.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn line(xs: &[f64]) -> MetricSpace {
        MetricSpace::from_points(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn base_level_is_singletons() {
        let m = line(&[0.0, 1.0, 5.0]);
        let h = laminarize(&m, &[], 1.0, 0.25, 1.0).unwrap();
        assert_eq!(h.levels.len(), 1);
        assert_eq!(h.levels[0].max_diameter(&m), 0.0);
    }

    #[test]
    fn straddling_cluster_merges_lower_clusters() {
        // R = 4 * 1 / 0.25 = 16; level 0 at scale 1, level 1 at scale 16.
        let m = line(&[0.0, 1.0, 2.0, 3.0]);
        let p0 = Partition::from_clusters(1.0, vec![vec![0, 1], vec![2, 3]]);
        let p1 = Partition::from_clusters(16.0, vec![vec![1, 2], vec![0], vec![3]]);
        let h = laminarize(&m, &[p0, p1], 1.0, 0.25, 1.0).unwrap();
        assert_eq!(h.levels[2].clusters(), &[vec![0, 1, 2, 3]]);
        assert_eq!(h.refinement_violation(), None);
        let hst = hierarchy_to_hst(&h).unwrap();
        assert_eq!(hst.distance(0, 1), 1.25);
        assert_eq!(hst.distance(0, 3), 20.0);
        assert!(hst.is_k_hst(16.0));
    }

    #[test]
    fn unbounded_input_rejected() {
        let m = line(&[0.0, 3.0]);
        let p0 = Partition::from_clusters(1.0, vec![vec![0, 1]]);
        assert!(matches!(
            laminarize(&m, &[p0], 1.0, 0.25, 1.0),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn single_point_hst() {
        let m = MetricSpace::uniform(1, 1.0);
        let h = laminarize(&m, &[], 1.0, 0.1, 1.0).unwrap();
        assert_eq!(hierarchy_to_hst(&h).unwrap().node_count(), 1);
        let c = ultrametric_cover_doubling(&m, 0.1, DoublingOptions::default()).unwrap();
        assert_eq!(c.ultrametrics.len(), 1);
    }

    #[test]
    fn two_point_general_cover() {
        let m = line(&[0.0, 2.0]);
        let c =
            ultrametric_cover_general(&m, 1, 0.4, OffsetGrid::Fine, &mut rng::seeded(0)).unwrap();
        let report = verify_cover(&m, &c);
        assert!(report.ok(), "{report:?}");
        // The closest label stays within (1 + eps)^3 rho d.
        let rho = 2.0 + 0.05;
        let best = c
            .ultrametrics
            .iter()
            .map(|h| h.distance(0, 1))
            .fold(f64::INFINITY, f64::min);
        assert!(best <= (1.0f64 + 0.05 / (2.0 * rho)).powi(3) * rho * 2.0 * (1.0 + 1e-9));
    }

    #[test]
    fn star_hst_stretch_is_aspect_ratio() {
        let m = line(&[0.0, 1.0, 3.0]);
        let star = Hst::new(
            vec![Some(3), Some(3), Some(3), None],
            vec![0.0, 0.0, 0.0, 3.0],
            vec![Some(0), Some(1), Some(2), None],
        )
        .unwrap();
        let cover = UltrametricCover {
            ultrametrics: vec![star.clone()],
            tau: 1,
            rho: 3.0,
            separation: 1.0,
            max_degree: None,
        };
        let report = verify_cover(&m, &cover);
        assert_eq!(report.max_stretch, 3.0);
        assert!(report.dominance_ok && report.ok());

        let tampered = UltrametricCover {
            ultrametrics: vec![star.with_label(3, 2.0)],
            ..cover
        };
        let report = verify_cover(&m, &tampered);
        assert_eq!(report.dominance_violation, Some((0, 0, 2)));
    }

    #[test]
    fn uniform_doubling_cover() {
        let m = MetricSpace::uniform(10, 1.0);
        let c = ultrametric_cover_doubling(&m, 0.1, DoublingOptions::default()).unwrap();
        let report = verify_cover(&m, &c);
        assert!(report.ok(), "{report:?}");
        assert!(report.max_stretch <= 1.1);
        assert!(c.ultrametrics.iter().all(|h| h.is_k_hst(10.0)));
    }

    #[test]
    fn eps_ranges() {
        let m = line(&[0.0, 1.0]);
        assert!(ultrametric_cover_doubling(&m, 0.5, DoublingOptions::default()).is_err());
        assert!(
            ultrametric_cover_general(&m, 0, 0.2, OffsetGrid::Fine, &mut rng::seeded(0)).is_err()
        );
        assert!(
            ultrametric_cover_general(&m, 1, 0.6, OffsetGrid::Fine, &mut rng::seeded(0)).is_err()
        );
    }
}
