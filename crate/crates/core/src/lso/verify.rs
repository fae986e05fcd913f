use crate::metric::{approx_le, MetricSpace, PointId};

use super::{LsoCollection, LsoKind};

#[derive(Debug, Clone, PartialEq)]
pub struct LsoReport {
    pub ok: bool,
    /// First pair without a witness ordering (classic), or the pair with the
    /// worst best-ratio (triangle, left).
    pub worst_pair: Option<(PointId, PointId)>,
    /// Smallest stretch that would pass; only computed for triangle and
    /// left collections.
    pub max_ratio: Option<f64>,
    pub measured_tau: usize,
    /// An ordering that is not a permutation of all points (classic, triangle).
    pub malformed: Option<usize>,
}

/// Exhaustive check of the defining property of `lso.kind` at `lso.rho`.
pub fn verify_lso(m: &MetricSpace, lso: &LsoCollection) -> LsoReport {
    let n = m.n();
    let measured_tau = match lso.kind {
        LsoKind::Left => lso.membership(n).into_iter().max().unwrap_or(0),
        _ => lso.orderings.len(),
    };
    let mut report = LsoReport {
        ok: true,
        worst_pair: None,
        max_ratio: None,
        measured_tau,
        malformed: None,
    };
    if lso.kind != LsoKind::Left {
        report.malformed = lso.orderings.iter().position(|o| {
            let mut seen = vec![false; n];
            o.len() != n || o.iter().any(|&x| std::mem::replace(&mut seen[x], true))
        });
    }
    if report.malformed.is_some() || measured_tau > lso.tau {
        report.ok = false;
        return report;
    }
    match lso.kind {
        LsoKind::Classic => verify_classic(m, lso, &mut report),
        LsoKind::Triangle | LsoKind::Left => verify_by_ratio(m, lso, &mut report),
    }
    report
}

fn verify_classic(m: &MetricSpace, lso: &LsoCollection, report: &mut LsoReport) {
    let n = m.n();
    let mut open = vec![true; n * n];
    let mut remaining = n * n.saturating_sub(1) / 2;
    for o in &lso.orderings {
        if remaining == 0 {
            break;
        }
        for i in 0..n {
            let x = o[i];
            for j in i + 1..n {
                let y = o[j];
                if !open[x * n + y] {
                    continue;
                }
                let r = lso.rho * m.d(x, y);
                let mut a = i + 1;
                while a < j && approx_le(m.d(x, o[a]), r) {
                    a += 1;
                }
                let mut b = j;
                while b > a && approx_le(m.d(y, o[b - 1]), r) {
                    b -= 1;
                }
                if b == a {
                    open[x * n + y] = false;
                    open[y * n + x] = false;
                    remaining -= 1;
                }
            }
        }
    }
    if remaining > 0 {
        report.ok = false;
        report.worst_pair = m.pairs().find(|&(x, y)| open[x * n + y]);
    }
}

/// Per ordering, `span[i][j]` is the largest distance among the pairs the
/// property constrains for the points at positions `i < j`; the best ratio
/// of a pair is its smallest `span / d` over orderings containing it.
fn verify_by_ratio(m: &MetricSpace, lso: &LsoCollection, report: &mut LsoReport) {
    let n = m.n();
    let mut best = vec![f64::INFINITY; n * n];
    let mut span: Vec<f64> = Vec::new();
    for o in &lso.orderings {
        let len = o.len();
        span.clear();
        span.resize(len * len, 0.0);
        match lso.kind {
            LsoKind::Triangle => {
                // span = diameter of the interval [i, j].
                for i in (0..len).rev() {
                    for j in i + 1..len {
                        let mut v = m.d(o[i], o[j]);
                        if i + 1 < j {
                            v = v.max(span[(i + 1) * len + j]).max(span[i * len + j - 1]);
                        }
                        span[i * len + j] = v;
                    }
                }
            }
            _ => {
                // span = largest d(o[a], o[b]) over a <= i, b <= j.
                for i in 0..len {
                    for j in 0..len {
                        let mut v = m.d(o[i], o[j]);
                        if i > 0 {
                            v = v.max(span[(i - 1) * len + j]);
                        }
                        if j > 0 {
                            v = v.max(span[i * len + j - 1]);
                        }
                        span[i * len + j] = v;
                    }
                }
            }
        }
        for i in 0..len {
            for j in i + 1..len {
                let (x, y) = (o[i], o[j]);
                let ratio = span[i * len + j] / m.d(x, y);
                let slot = &mut best[x.min(y) * n + x.max(y)];
                if ratio < *slot {
                    *slot = ratio;
                }
            }
        }
    }
    let mut worst = 0.0f64;
    for (x, y) in m.pairs() {
        let r = best[x * n + y];
        if report.worst_pair.is_none() || r > worst {
            worst = r;
            report.worst_pair = Some((x, y));
        }
    }
    report.max_ratio = Some(if report.worst_pair.is_some() {
        worst
    } else {
        0.0
    });
    report.ok = approx_le(worst, lso.rho);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> MetricSpace {
        MetricSpace::from_points(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn lso(kind: LsoKind, rho: f64, orderings: Vec<Vec<PointId>>) -> LsoCollection {
        let mut l = LsoCollection {
            kind,
            rho,
            tau: usize::MAX,
            orderings,
        };
        l.tau = l.measured_tau();
        l
    }

    #[test]
    fn two_points_any_kind() {
        let m = line(&[0.0, 1.0]);
        for kind in [LsoKind::Classic, LsoKind::Triangle, LsoKind::Left] {
            assert!(
                verify_lso(&m, &lso(kind, 1.0, vec![vec![0, 1]])).ok,
                "{kind:?}"
            );
        }
    }

    #[test]
    fn sorted_line_is_exact() {
        let m = line(&[0.0, 1.0, 3.0, 7.0]);
        let sorted = vec![0, 1, 2, 3];
        assert!(verify_lso(&m, &lso(LsoKind::Classic, 0.6, vec![sorted.clone()])).ok);
        let c = verify_lso(&m, &lso(LsoKind::Classic, 0.4, vec![sorted.clone()]));
        assert_eq!(c.worst_pair, Some((0, 3)));
        let t = verify_lso(&m, &lso(LsoKind::Triangle, 1.0, vec![sorted.clone()]));
        assert_eq!(t.max_ratio, Some(1.0));
        // Prefixes reach back to point 0: the pair (2, 3) at distance 4 is
        // charged d(0, 3) = 7.
        let l = verify_lso(&m, &lso(LsoKind::Left, 1.0, vec![sorted]));
        assert!(!l.ok);
        assert_eq!(l.max_ratio, Some(1.75));
        assert_eq!(l.worst_pair, Some((2, 3)));
    }

    #[test]
    fn classic_below_achievable_fails_with_witness() {
        let m = line(&[0.0, 1.0, 2.0]);
        let bad = lso(LsoKind::Classic, 0.4, vec![vec![0, 2, 1]]);
        let report = verify_lso(&m, &bad);
        assert!(!report.ok);
        assert_eq!(report.worst_pair, Some((0, 1)));
        assert!(verify_lso(&m, &lso(LsoKind::Classic, 1.0, vec![vec![0, 2, 1]])).ok);
    }

    #[test]
    fn malformed_orderings_rejected() {
        let m = line(&[0.0, 1.0, 2.0]);
        assert_eq!(
            verify_lso(&m, &lso(LsoKind::Triangle, 9.0, vec![vec![0, 1]])).malformed,
            Some(0)
        );
    }
}
