//! Bounded-diameter partitions and pairwise partition covers.
//!
//! A pairwise partition cover at scale `delta` is a small family of
//! `delta`-bounded partitions such that every pair whose distance lies in the
//! band `[delta / (2 rho), delta / rho]` has the closed balls of radius
//! `eps * delta` around both endpoints inside a single cluster of some member.

mod doubling;

pub use doubling::{net_partition, pairwise_cover_doubling, red_blue_matchings, RedBlueGraph};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::metric::{approx_le, MetricSpace, PointId};

/// Number of fresh batches [`pairwise_cover_general`] draws before giving up.
pub const GENERAL_COVER_MAX_BATCHES: usize = 20;

/// A partition of `X` into clusters with a declared diameter bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPartition", into = "RawPartition")]
pub struct Partition {
    delta: f64,
    assignment: Vec<usize>,
    clusters: Vec<Vec<PointId>>,
}

#[derive(Serialize, Deserialize)]
struct RawPartition {
    delta: f64,
    assignment: Vec<usize>,
}

impl TryFrom<RawPartition> for Partition {
    type Error = Error;
    fn try_from(raw: RawPartition) -> Result<Self> {
        if !(raw.delta >= 0.0 && raw.delta.is_finite()) {
            return Err(Error::Schema(format!(
                "partition delta {} is invalid",
                raw.delta
            )));
        }
        Ok(Partition::from_assignment(raw.delta, &raw.assignment))
    }
}

impl From<Partition> for RawPartition {
    fn from(p: Partition) -> Self {
        RawPartition {
            delta: p.delta,
            assignment: p.assignment,
        }
    }
}

impl Partition {
    /// Clusters in the given order; empty ones are dropped and ids follow
    /// the remaining order. Every point of `0..n` must appear exactly once.
    pub fn from_clusters(delta: f64, clusters: Vec<Vec<PointId>>) -> Self {
        let clusters: Vec<Vec<PointId>> = clusters.into_iter().filter(|c| !c.is_empty()).collect();
        let n = clusters.iter().map(Vec::len).sum();
        let mut assignment = vec![usize::MAX; n];
        for (id, cluster) in clusters.iter().enumerate() {
            for &x in cluster {
                assert!(
                    x < n && assignment[x] == usize::MAX,
                    "clusters must partition 0..{n}"
                );
                assignment[x] = id;
            }
        }
        Partition {
            delta,
            assignment,
            clusters,
        }
    }

    /// Cluster ids are compacted preserving their relative order.
    pub fn from_assignment(delta: f64, assignment: &[usize]) -> Self {
        let mut ids: Vec<usize> = assignment.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut clusters = vec![Vec::new(); ids.len()];
        let compact: Vec<usize> = assignment
            .iter()
            .map(|c| ids.binary_search(c).expect("id present"))
            .collect();
        for (x, &c) in compact.iter().enumerate() {
            clusters[c].push(x);
        }
        Partition {
            delta,
            assignment: compact,
            clusters,
        }
    }

    pub fn singletons(n: usize, delta: f64) -> Self {
        Partition::from_clusters(delta, (0..n).map(|x| vec![x]).collect())
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn cluster_of(&self, x: PointId) -> usize {
        self.assignment[x]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn clusters(&self) -> &[Vec<PointId>] {
        &self.clusters
    }

    pub fn max_diameter(&self, m: &MetricSpace) -> f64 {
        self.clusters
            .iter()
            .map(|c| m.diameter(c))
            .fold(0.0, f64::max)
    }

    /// Whether every cluster has diameter at most `delta`.
    pub fn is_bounded(&self, m: &MetricSpace) -> bool {
        approx_le(self.max_diameter(m), self.delta)
    }

    /// `padded[x]` is true when the closed ball `B(x, radius)` lies inside
    /// the cluster of `x`.
    pub fn padded(&self, m: &MetricSpace, radius: f64) -> Vec<bool> {
        (0..self.n())
            .map(|x| {
                let cx = self.assignment[x];
                m.row(x)
                    .iter()
                    .enumerate()
                    .all(|(y, &d)| !approx_le(d, radius) || self.assignment[y] == cx)
            })
            .collect()
    }
}

/// A family of partitions at one scale with its declared parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionCover {
    pub partitions: Vec<Partition>,
    pub tau: usize,
    pub rho: f64,
    pub eps: f64,
    pub delta: f64,
}

impl PartitionCover {
    /// Distance band `[delta / (2 rho), delta / rho]` the cover must serve.
    pub fn band(&self) -> (f64, f64) {
        (self.delta / (2.0 * self.rho), self.delta / self.rho)
    }

    /// Repeat the last partition until there are exactly `count`.
    pub fn pad_to(&mut self, count: usize) {
        assert!(count >= self.partitions.len(), "cannot pad a cover down");
        if let Some(last) = self.partitions.last().cloned() {
            self.partitions.resize(count, last);
            self.tau = self.tau.max(count);
        }
    }
}

/// One random partition: pick `r` uniformly from `{1/k, .., k/k}` and a
/// uniform permutation `v_1 .. v_n`; cluster `i` is `B(v_i, r * delta / 2)`
/// minus all earlier balls.
pub fn ckr_partition<R: Rng + ?Sized>(
    m: &MetricSpace,
    delta: f64,
    k: usize,
    rng: &mut R,
) -> Partition {
    assert!(k >= 1 && delta > 0.0);
    let n = m.n();
    let radius = rng.gen_range(1..=k) as f64 / k as f64 * delta / 2.0;
    let mut order: Vec<PointId> = (0..n).collect();
    order.shuffle(rng);
    let mut assignment = vec![usize::MAX; n];
    let mut remaining = n;
    for (i, &center) in order.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        for (y, &d) in m.row(center).iter().enumerate() {
            if assignment[y] == usize::MAX && d <= radius {
                assignment[y] = i;
                remaining -= 1;
            }
        }
    }
    Partition::from_assignment(delta, &assignment)
}

/// Batch size `ceil(n^(1/k) * 2 ln n)`, at least one.
pub fn general_cover_batch_size(n: usize, k: usize) -> usize {
    let n = n as f64;
    ((n.powf(1.0 / k as f64) * 2.0 * n.ln()).ceil() as usize).max(1)
}

/// Pairwise cover for an arbitrary metric with stretch `2k + slack` and
/// padding `slack / (2k (2k + slack))`, built from i.i.d. [`ckr_partition`]s.
///
/// Each batch succeeds with probability at least one half; failed batches
/// are redrawn up to [`GENERAL_COVER_MAX_BATCHES`] times.
pub fn pairwise_cover_general<R: Rng + ?Sized>(
    m: &MetricSpace,
    delta: f64,
    k: usize,
    slack: f64,
    rng: &mut R,
) -> Result<PartitionCover> {
    const OP: &str = "pairwise_cover_general";
    if k < 1 {
        return Err(precondition(OP, "k must be at least 1"));
    }
    if !(0.0..=1.0).contains(&slack) {
        return Err(precondition(OP, format!("slack {slack} outside [0, 1]")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(precondition(OP, format!("delta {delta} must be positive")));
    }
    let kf = k as f64;
    let rho = 2.0 * kf + slack;
    let eps = slack / (2.0 * kf * rho);
    let s = general_cover_batch_size(m.n(), k);
    for _ in 0..GENERAL_COVER_MAX_BATCHES {
        let partitions = (0..s).map(|_| ckr_partition(m, delta, k, rng)).collect();
        let cover = PartitionCover {
            partitions,
            tau: s,
            rho,
            eps,
            delta,
        };
        if verify_pairwise_cover(m, &cover).ok {
            return Ok(cover);
        }
    }
    Err(Error::RetriesExhausted {
        op: OP,
        attempts: GENERAL_COVER_MAX_BATCHES,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoverViolation {
    TooManyPartitions {
        count: usize,
        tau: usize,
    },
    Diameter {
        partition: usize,
        cluster: usize,
        diameter: f64,
    },
    Unserved {
        x: PointId,
        y: PointId,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseCoverReport {
    pub ok: bool,
    pub max_diameter: f64,
    pub band_pairs: usize,
    pub violation: Option<CoverViolation>,
}

/// Exhaustive check of the diameter bound and of the padded-pair property
/// for every pair in the band. Reports the first counterexample.
pub fn verify_pairwise_cover(m: &MetricSpace, cover: &PartitionCover) -> PairwiseCoverReport {
    let mut report = PairwiseCoverReport {
        ok: true,
        max_diameter: 0.0,
        band_pairs: 0,
        violation: None,
    };
    if cover.partitions.len() > cover.tau {
        report.ok = false;
        report.violation = Some(CoverViolation::TooManyPartitions {
            count: cover.partitions.len(),
            tau: cover.tau,
        });
        return report;
    }
    for (pi, p) in cover.partitions.iter().enumerate() {
        for (ci, c) in p.clusters().iter().enumerate() {
            let diam = m.diameter(c);
            report.max_diameter = report.max_diameter.max(diam);
            if report.ok && !approx_le(diam, cover.delta) {
                report.ok = false;
                report.violation = Some(CoverViolation::Diameter {
                    partition: pi,
                    cluster: ci,
                    diameter: diam,
                });
            }
        }
    }
    if !report.ok {
        return report;
    }
    let (lo, hi) = cover.band();
    let band: Vec<(PointId, PointId)> = m
        .pairs()
        .filter(|&(x, y)| {
            let d = m.d(x, y);
            approx_le(lo, d) && approx_le(d, hi)
        })
        .collect();
    report.band_pairs = band.len();
    if band.is_empty() {
        return report;
    }
    // A pair is served by a partition iff both endpoints share a cluster and
    // both are padded there (a padded ball contains its own center).
    let radius = cover.eps * cover.delta;
    let mut served = vec![false; band.len()];
    for p in &cover.partitions {
        let padded = p.padded(m, radius);
        for (s, &(x, y)) in served.iter_mut().zip(&band) {
            if !*s && padded[x] && padded[y] && p.cluster_of(x) == p.cluster_of(y) {
                *s = true;
            }
        }
    }
    if let Some(i) = served.iter().position(|s| !s) {
        let (x, y) = band[i];
        report.ok = false;
        report.violation = Some(CoverViolation::Unserved { x, y });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn singleton_metric_gives_singleton_cluster() {
        let m = MetricSpace::uniform(1, 1.0);
        let p = ckr_partition(&m, 1.0, 2, &mut rng::seeded(0));
        assert_eq!(p.clusters(), &[vec![0]]);
    }

    #[test]
    fn uniform_metric_with_large_delta_is_one_cluster() {
        let m = MetricSpace::uniform(8, 1.0);
        let p = ckr_partition(&m, 4.0, 1, &mut rng::seeded(3));
        assert_eq!(p.clusters().len(), 1);
    }

    #[test]
    fn ckr_clusters_are_delta_bounded() {
        let m = MetricSpace::from_points(
            (0..30)
                .map(|i| vec![(i * i % 17) as f64, i as f64])
                .collect(),
        )
        .unwrap();
        let mut r = rng::seeded(11);
        for _ in 0..50 {
            let p = ckr_partition(&m, 6.0, 3, &mut r);
            assert!(p.is_bounded(&m));
            assert_eq!(p.clusters().iter().map(Vec::len).sum::<usize>(), 30);
        }
    }

    #[test]
    fn batch_size_formula() {
        // ceil(10 * 2 ln 100) = ceil(92.10) = 93
        assert_eq!(general_cover_batch_size(100, 2), 93);
        assert_eq!(general_cover_batch_size(1, 3), 1);
    }

    #[test]
    fn two_points_outside_band_verify_trivially() {
        let m = MetricSpace::from_points(vec![vec![0.0], vec![10.0]]).unwrap();
        let cover = pairwise_cover_general(&m, 1.0, 2, 0.5, &mut rng::seeded(1)).unwrap();
        let report = verify_pairwise_cover(&m, &cover);
        assert!(report.ok);
        assert_eq!(report.band_pairs, 0);
    }

    #[test]
    fn empty_band_singletons_pass_and_missing_pair_fails() {
        let m = MetricSpace::uniform(4, 1.0);
        let singles = PartitionCover {
            partitions: vec![Partition::singletons(4, 0.5)],
            tau: 1,
            rho: 1.0,
            eps: 0.0,
            delta: 0.5,
        };
        assert!(verify_pairwise_cover(&m, &singles).ok);

        // Band [1, 2] contains every pair; singletons serve none of them.
        let missing = PartitionCover {
            delta: 2.0,
            ..singles
        };
        let report = verify_pairwise_cover(&m, &missing);
        assert!(!report.ok);
        assert_eq!(
            report.violation,
            Some(CoverViolation::Unserved { x: 0, y: 1 })
        );
    }

    #[test]
    fn diameter_violation_is_reported() {
        let m = MetricSpace::uniform(3, 1.0);
        let cover = PartitionCover {
            partitions: vec![Partition::from_clusters(0.5, vec![vec![0, 1], vec![2]])],
            tau: 1,
            rho: 1.0,
            eps: 0.0,
            delta: 0.5,
        };
        assert!(matches!(
            verify_pairwise_cover(&m, &cover).violation,
            Some(CoverViolation::Diameter {
                partition: 0,
                cluster: 0,
                ..
            })
        ));
    }

    #[test]
    fn pad_repeats_last_partition() {
        let mut cover = PartitionCover {
            partitions: vec![Partition::singletons(2, 1.0)],
            tau: 1,
            rho: 1.0,
            eps: 0.0,
            delta: 1.0,
        };
        cover.pad_to(3);
        assert_eq!(cover.partitions.len(), 3);
        assert_eq!(cover.tau, 3);
    }

    #[test]
    fn partition_json_shape() {
        let p = Partition::from_clusters(2.0, vec![vec![1], vec![0, 2]]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"delta":2.0,"assignment":[1,0,1]}"#);
        let back: Partition = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}
