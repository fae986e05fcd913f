//! Spanners for the unweighted path on positions `0..n`.
//!
//! Vertex `i` of the path is the `i`-th point of some ordering; the metric
//! spanners in [`crate::spanner`] lift these back to points.

use std::collections::BTreeMap;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::rng::Rng;

/// Resampling rounds before a size-capped sampler gives up.
pub const MAX_RESAMPLES: usize = 64;

pub const DEFAULT_TWO_HOP_C: f64 = 4.0;
pub const DEFAULT_LEFT_C: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Flavor {
    #[serde(rename = "static2hop")]
    Static2Hop,
    #[serde(rename = "reliable2hop")]
    Reliable2Hop,
    LeftReliable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpanner {
    pub n: usize,
    pub flavor: Flavor,
    /// Sorted pairs `(a, b)` with `a < b`.
    pub edges: Vec<(usize, usize)>,
    /// Center sets per level (a single level 0 for left spanners).
    #[serde(default)]
    pub centers: BTreeMap<usize, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probabilities: Vec<f64>,
}

fn normalize(mut edges: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    for e in &mut edges {
        if e.0 > e.1 {
            *e = (e.1, e.0);
        }
    }
    edges.retain(|e| e.0 != e.1);
    edges.sort_unstable();
    edges.dedup();
    edges
}

fn static_edges(n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut stack = vec![(0usize, n)];
    while let Some((lo, hi)) = stack.pop() {
        if hi <= lo + 1 {
            continue;
        }
        let mid = lo + (hi - lo - 1) / 2;
        edges.extend(
            (lo..hi)
                .filter(|&v| v != mid)
                .map(|v| (mid.min(v), mid.max(v))),
        );
        stack.push((lo, mid));
        stack.push((mid + 1, hi));
    }
    normalize(edges)
}

/// `ceil(log2 n)`, 0 for `n <= 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Monotone 2-hop 1-spanner: the middle of each range links to the whole
/// range, then both halves recurse.
pub fn static_two_hop(n: usize) -> PathSpanner {
    PathSpanner {
        n,
        flavor: Flavor::Static2Hop,
        edges: static_edges(n),
        centers: BTreeMap::new(),
        probabilities: Vec::new(),
    }
}

/// Per-level center probabilities `min(1, c (ln n + ln(log2 n) / nu) 2^-j)`
/// for `j` in `0..=ceil(log2 n)`; all ones when `nu <= 1/n`.
pub fn two_hop_probabilities(n: usize, nu: f64, c: f64) -> Vec<f64> {
    let levels = ceil_log2(n) + 1;
    if nu <= 1.0 / n as f64 {
        return vec![1.0; levels];
    }
    let nf = n as f64;
    let base = c * (nf.ln() + nf.log2().max(1.0).ln() / nu);
    (0..levels)
        .map(|j| (base / 2f64.powi(j as i32)).min(1.0))
        .collect()
}

/// Expected number of distinct edges of [`reliable_two_hop`]: a pair at gap
/// `g` is joined at level `j` when `g <= 2^(j+1)` and either end is a
/// level-`j` center.
pub fn two_hop_expected_edges(n: usize, probabilities: &[f64]) -> f64 {
    let stat = static_edges(n);
    let mut static_at_gap = vec![0usize; n];
    for &(a, b) in &stat {
        static_at_gap[b - a] += 1;
    }
    let mut total = stat.len() as f64;
    for (g, &fixed) in static_at_gap.iter().enumerate().skip(1) {
        let miss: f64 = probabilities
            .iter()
            .enumerate()
            .filter(|&(j, _)| g <= 1usize << (j + 1).min(usize::BITS as usize - 1))
            .map(|(_, &p)| (1.0 - p) * (1.0 - p))
            .product();
        total += (n - g - fixed) as f64 * (1.0 - miss);
    }
    total
}

fn check_nu(op: &'static str, nu: f64) -> Result<()> {
    if nu > 0.0 && nu < 1.0 {
        Ok(())
    } else {
        Err(precondition(op, format!("nu {nu} outside (0, 1)")))
    }
}

/// Oblivious reliable monotone 2-hop 1-spanner of the path.
///
/// Level-`j` centers are sampled independently with the probabilities of
/// [`two_hop_probabilities`]; each vertex links to the level-`j` centers
/// within distance `2^(j+1)`, and the static 2-hop spanner is added. Samples
/// with more than twice the expected edge count are redrawn.
pub fn reliable_two_hop(n: usize, nu: f64, c: f64, rng: &mut Rng) -> Result<PathSpanner> {
    const OP: &str = "reliable_two_hop";
    check_nu(OP, nu)?;
    if c <= 0.0 {
        return Err(precondition(OP, format!("constant c {c} must be positive")));
    }
    let probabilities = two_hop_probabilities(n, nu, c);
    let cap = 2.0 * two_hop_expected_edges(n, &probabilities);
    for _ in 0..MAX_RESAMPLES {
        let mut centers = BTreeMap::new();
        let mut edges = static_edges(n);
        for (j, &p) in probabilities.iter().enumerate() {
            let level: Vec<usize> = (0..n)
                .filter(|_| p >= 1.0 || rng.gen::<f64>() < p)
                .collect();
            let reach = 1usize << (j + 1);
            for &z in &level {
                let lo = z.saturating_sub(reach);
                let hi = (z + reach).min(n - 1);
                edges.extend((lo..=hi).filter(|&v| v != z).map(|v| (v.min(z), v.max(z))));
            }
            centers.insert(j, level);
        }
        let edges = normalize(edges);
        if edges.len() as f64 <= cap {
            return Ok(PathSpanner {
                n,
                flavor: Flavor::Reliable2Hop,
                edges,
                centers,
                probabilities,
            });
        }
    }
    Err(Error::RetriesExhausted {
        op: OP,
        attempts: MAX_RESAMPLES,
    })
}

/// Center probability of vertex `i`: `min(1, c / (nu (i + 1)))`.
pub fn left_probability(i: usize, nu: f64, c: f64) -> f64 {
    (c / (nu * (i + 1) as f64)).min(1.0)
}

/// Oblivious reliable 2-hop left spanner: vertex `i` is a center with
/// probability [`left_probability`] and every vertex links to all centers
/// before it.
pub fn reliable_left(n: usize, nu: f64, c: f64, rng: &mut Rng) -> Result<PathSpanner> {
    const OP: &str = "reliable_left";
    check_nu(OP, nu)?;
    if c < 1.0 {
        return Err(precondition(
            OP,
            format!("constant c {c} must be at least 1"),
        ));
    }
    let probabilities: Vec<f64> = (0..n).map(|i| left_probability(i, nu, c)).collect();
    let expected: f64 = probabilities
        .iter()
        .enumerate()
        .map(|(i, p)| p * (n - 1 - i) as f64)
        .sum();
    for _ in 0..MAX_RESAMPLES {
        let centers: Vec<usize> = (0..n)
            .filter(|&i| probabilities[i] >= 1.0 || rng.gen::<f64>() < probabilities[i])
            .collect();
        let edges: Vec<(usize, usize)> = centers
            .iter()
            .flat_map(|&z| (z + 1..n).map(move |v| (z, v)))
            .collect();
        if edges.len() as f64 <= 2.0 * expected {
            return Ok(PathSpanner {
                n,
                flavor: Flavor::LeftReliable,
                edges,
                centers: BTreeMap::from([(0, centers)]),
                probabilities: Vec::new(),
            });
        }
    }
    Err(Error::RetriesExhausted {
        op: OP,
        attempts: MAX_RESAMPLES,
    })
}

/// Membership mask of `attack` over `0..n`; out-of-range entries are errors.
pub fn attack_mask(n: usize, attack: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &b in attack {
        if b >= n {
            return Err(Error::InvalidInput(format!(
                "attacked index {b} outside 0..{n}"
            )));
        }
        mask[b] = true;
    }
    Ok(mask)
}

/// Levels absent from `centers` count as full, which is only allowed when
/// they were sampled with probability one.
fn missing_metadata(h: &PathSpanner, want: Flavor) -> Result<()> {
    if h.flavor != want {
        return Err(Error::InvalidInput(format!(
            "faulty extension for {want:?} applied to a {:?} spanner",
            h.flavor
        )));
    }
    let complete = match want {
        Flavor::Reliable2Hop if !h.probabilities.is_empty() => h
            .probabilities
            .iter()
            .enumerate()
            .all(|(j, &p)| p >= 1.0 || h.centers.contains_key(&j)),
        _ => h.n == 0 || !h.centers.is_empty(),
    };
    if !complete {
        return Err(Error::InvalidInput(
            "spanner carries no center metadata".into(),
        ));
    }
    Ok(())
}

/// `B` plus every vertex `v` with a level `j` whose one-sided window
/// `[v - 2^j, v]` (when `v >= 2^j`) or `[v, v + 2^j]` (when
/// `v + 2^j <= n - 1`) holds no surviving level-`j` center. An empty
/// attack extends to nothing; the static 2-hop edges serve every pair.
pub fn faulty_extension_two_hop(h: &PathSpanner, attacked: &[bool]) -> Result<Vec<bool>> {
    missing_metadata(h, Flavor::Reliable2Hop)?;
    let n = h.n;
    let mut plus = attacked.to_vec();
    if !attacked.contains(&true) {
        return Ok(plus);
    }
    let mut prefix = vec![0usize; n + 1];
    for (&j, level) in &h.centers {
        let mut alive = vec![0usize; n];
        for &z in level {
            alive[z] = usize::from(!attacked[z]);
        }
        for i in 0..n {
            prefix[i + 1] = prefix[i] + alive[i];
        }
        let w = 1usize << j;
        for v in 0..n {
            if plus[v] {
                continue;
            }
            let left = v >= w && prefix[v + 1] == prefix[v - w];
            let right = v + w < n && prefix[v + w + 1] == prefix[v];
            if left || right {
                plus[v] = true;
            }
        }
    }
    Ok(plus)
}

/// `B` plus every vertex `a` whose centers `N ∩ [0, a]` are all attacked.
pub fn faulty_extension_left(h: &PathSpanner, attacked: &[bool]) -> Result<Vec<bool>> {
    missing_metadata(h, Flavor::LeftReliable)?;
    let mut is_center = vec![false; h.n];
    for &z in h.centers.values().flatten() {
        is_center[z] = true;
    }
    let mut survivor = false;
    Ok((0..h.n)
        .map(|a| {
            survivor |= is_center[a] && !attacked[a];
            attacked[a] || !survivor
        })
        .collect())
}

/// Dispatch on the flavor.
pub fn faulty_extension(h: &PathSpanner, attacked: &[bool]) -> Result<Vec<bool>> {
    match h.flavor {
        Flavor::Reliable2Hop => faulty_extension_two_hop(h, attacked),
        Flavor::LeftReliable => faulty_extension_left(h, attacked),
        Flavor::Static2Hop => Err(Error::InvalidInput(
            "static spanner has no faulty extension".into(),
        )),
    }
}

/// Adjacency rows as bitsets with the diagonal set.
struct Bits {
    words: usize,
    rows: Vec<u64>,
}

impl Bits {
    fn new(h: &PathSpanner) -> Self {
        let words = h.n.div_ceil(64).max(1);
        let mut rows = vec![0u64; words * h.n];
        let mut set = |a: usize, b: usize| rows[a * words + b / 64] |= 1 << (b % 64);
        for &(a, b) in &h.edges {
            set(a, b);
            set(b, a);
        }
        for v in 0..h.n {
            set(v, v);
        }
        Bits { words, rows }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }
}

fn range_mask(word: usize, lo: usize, hi: usize) -> u64 {
    // Bits of positions lo..=hi inside word `word`.
    let start = word * 64;
    if hi < start || lo > start + 63 {
        return 0;
    }
    let a = lo.max(start) - start;
    let b = hi.min(start + 63) - start;
    if a > b {
        return 0;
    }
    let upper = if b == 63 {
        u64::MAX
    } else {
        (1u64 << (b + 1)) - 1
    };
    upper & !((1u64 << a) - 1)
}

/// First pair `u < v` outside `excluded` with no surviving middle vertex
/// `c` (not in `attacked`, adjacent to both or equal to one of them).
/// `left` demands `c <= u`; otherwise `u <= c <= v`.
fn two_hop_pair_violation(
    h: &PathSpanner,
    attacked: &[bool],
    excluded: &[bool],
    left: bool,
) -> Option<(usize, usize)> {
    let bits = Bits::new(h);
    let words = bits.words;
    let mut alive = vec![0u64; words];
    for v in (0..h.n).filter(|&v| !attacked[v]) {
        alive[v / 64] |= 1 << (v % 64);
    }
    let mut fu = vec![0u64; words];
    for u in (0..h.n).filter(|&u| !excluded[u]) {
        let (lo, hi) = if left { (0, u) } else { (u, h.n - 1) };
        for (w, f) in fu.iter_mut().enumerate() {
            *f = bits.row(u)[w] & alive[w] & range_mask(w, lo, hi);
        }
        for v in (u + 1..h.n).filter(|&v| !excluded[v]) {
            let (wlo, whi) = if left { (0, u / 64) } else { (u / 64, v / 64) };
            let row = bits.row(v);
            let hit = (wlo..=whi).any(|w| {
                let m = if left { u64::MAX } else { range_mask(w, 0, v) };
                fu[w] & row[w] & m != 0
            });
            if !hit {
                return Some((u, v));
            }
        }
    }
    None
}

/// Exhaustive monotone 2-hop check among the pairs outside `excluded`,
/// with middle vertices taken outside `attacked`.
pub fn monotone_two_hop_violation(
    h: &PathSpanner,
    attacked: &[bool],
    excluded: &[bool],
) -> Option<(usize, usize)> {
    two_hop_pair_violation(h, attacked, excluded, false)
}

/// Exhaustive left 2-hop check: every pair `a < b` outside `excluded` has
/// a center `c <= a` outside `attacked` joined to both.
pub fn left_two_hop_violation(
    h: &PathSpanner,
    attacked: &[bool],
    excluded: &[bool],
) -> Option<(usize, usize)> {
    two_hop_pair_violation(h, attacked, excluded, true)
}

/// `alpha`-shadow of `attacked`: indices `b` with an interval `[a, b]`
/// (`a < b`) or `[b, a]` (`a > b`) at least an `alpha` fraction attacked.
pub fn shadow(attacked: &[bool], alpha: f64) -> Result<Vec<bool>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(precondition(
            "shadow",
            format!("alpha {alpha} outside (0, 1]"),
        ));
    }
    let n = attacked.len();
    let mut out = vec![false; n];
    for a in 0..n {
        let mut count = usize::from(attacked[a]);
        for b in a + 1..n {
            count += usize::from(attacked[b]);
            if count as f64 >= alpha * (b - a + 1) as f64 - 1e-9 {
                out[a] = true;
                out[b] = true;
            }
        }
    }
    Ok(out)
}

/// Indices of a mask.
pub fn indices(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i)
        .collect()
}

/// Newline-separated indices; blank lines and `#` comments are skipped.
pub fn parse_attack(text: &str) -> Result<Vec<usize>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.parse()
                .map_err(|_| Error::InvalidInput(format!("bad attack entry {l:?}")))
        })
        .collect()
}

pub fn format_attack(attack: &[usize]) -> String {
    attack.iter().map(|b| format!("{b}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn none(n: usize) -> Vec<bool> {
        vec![false; n]
    }

    #[test]
    fn static_small_cases() {
        assert!(static_two_hop(1).edges.is_empty());
        assert_eq!(static_two_hop(3).edges, vec![(0, 1), (1, 2)]);
        for n in [2, 5, 17, 256] {
            let h = static_two_hop(n);
            assert!(h.edges.len() <= n * ceil_log2(n));
            assert_eq!(monotone_two_hop_violation(&h, &none(n), &none(n)), None);
        }
    }

    #[test]
    fn missing_middle_is_found() {
        let h = PathSpanner {
            n: 3,
            flavor: Flavor::Static2Hop,
            edges: vec![(0, 1)],
            centers: BTreeMap::new(),
            probabilities: vec![],
        };
        assert_eq!(
            monotone_two_hop_violation(&h, &none(3), &none(3)),
            Some((0, 2))
        );
    }

    #[test]
    fn empty_attack_extends_to_nothing() {
        let mut rng = seeded(1);
        let h = reliable_two_hop(100, 0.2, DEFAULT_TWO_HOP_C, &mut rng).unwrap();
        assert!(!faulty_extension_two_hop(&h, &none(100))
            .unwrap()
            .contains(&true));
        let l = reliable_left(100, 0.2, DEFAULT_LEFT_C, &mut rng).unwrap();
        assert!(!faulty_extension_left(&l, &none(100))
            .unwrap()
            .contains(&true));
        assert_eq!(l.centers[&0][0], 0);
    }

    #[test]
    fn sparse_levels_still_extend_empty_attack_to_nothing() {
        let h = reliable_two_hop(300, 0.5, 0.01, &mut seeded(2)).unwrap();
        assert!(!faulty_extension_two_hop(&h, &none(300))
            .unwrap()
            .contains(&true));
        assert_eq!(monotone_two_hop_violation(&h, &none(300), &none(300)), None);
    }

    #[test]
    fn tiny_nu_gives_complete_graph() {
        let h = reliable_two_hop(20, 0.01, 1.0, &mut seeded(0)).unwrap();
        assert_eq!(h.edges.len(), 190);
    }

    #[test]
    fn level_zero_wipeout_joins() {
        // Level 0 centers {3, 4}; attacking both strands 4's left window and 3's right one.
        let h = PathSpanner {
            n: 6,
            flavor: Flavor::Reliable2Hop,
            edges: static_edges(6),
            centers: BTreeMap::from([
                (0, vec![3, 4]),
                (1, (0..6).collect()),
                (2, (0..6).collect()),
                (3, (0..6).collect()),
            ]),
            probabilities: vec![],
        };
        let mut b = none(6);
        b[3] = true;
        let plus = faulty_extension_two_hop(&h, &b).unwrap();
        assert_eq!(indices(&plus), vec![0, 1, 2, 3]);
    }

    #[test]
    fn range_mask_spans_words() {
        assert_eq!(range_mask(1, 0, 10), 0);
        assert_eq!(range_mask(0, 70, 80), 0);
        assert_eq!(range_mask(1, 60, 65), 0b11);
        assert_eq!(range_mask(0, 60, 65), 0xF << 60);
    }

    #[test]
    fn left_prefix_attack() {
        let h = PathSpanner {
            n: 6,
            flavor: Flavor::LeftReliable,
            edges: vec![],
            centers: BTreeMap::from([(0, vec![0, 1, 4])]),
            probabilities: vec![],
        };
        let mut b = none(6);
        b[0] = true;
        b[1] = true;
        assert_eq!(
            indices(&faulty_extension_left(&h, &b).unwrap()),
            vec![0, 1, 2, 3]
        );
        b[0] = false;
        b[1] = false;
        b[3] = true;
        assert_eq!(indices(&faulty_extension_left(&h, &b).unwrap()), vec![3]);
    }

    #[test]
    fn shadow_example() {
        let mut b = none(6);
        b[2] = true;
        b[3] = true;
        assert_eq!(indices(&shadow(&b, 2.0 / 3.0).unwrap()), vec![1, 2, 3, 4]);
        assert!(indices(&shadow(&none(6), 0.5).unwrap()).is_empty());
        assert!(shadow(&b, 0.0).is_err());
    }

    #[test]
    fn json_shape() {
        let h = static_two_hop(3);
        let v = serde_json::to_value(&h).unwrap();
        assert_eq!(v["flavor"], "static2hop");
        assert_eq!(v["edges"], serde_json::json!([[0, 1], [1, 2]]));
        let l = reliable_left(4, 0.5, 1.0, &mut seeded(0)).unwrap();
        let v = serde_json::to_value(&l).unwrap();
        assert_eq!(v["flavor"], "leftReliable");
        assert!(v["centers"]["0"].is_array());
        let back: PathSpanner = serde_json::from_value(v).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn attack_files_round_trip() {
        let text = format_attack(&[4, 1, 9]);
        assert_eq!(
            parse_attack(&format!("# hdr\n{text}\n")).unwrap(),
            vec![4, 1, 9]
        );
        assert!(parse_attack("x").is_err());
        assert!(attack_mask(3, &[3]).is_err());
    }
}
