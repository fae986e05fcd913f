use proptest::collection::vec;
use proptest::prelude::*;

use relspan::lso::{
    classic_as_triangle, cover_to_classic_lso, cover_to_triangle_lso, separator_left_lso,
    verify_lso, walecki_orderings, CentroidOracle, LsoCollection,
};
use relspan::metric::{approx_le, MetricSpace};
use relspan::path_spanner::{
    attack_mask, faulty_extension_left, faulty_extension_two_hop, format_attack,
    left_two_hop_violation, monotone_two_hop_violation, parse_attack, reliable_left,
    reliable_two_hop, shadow, static_two_hop, PathSpanner,
};
use relspan::rng::seeded;
use relspan::spanner::{attack_evaluate, spanner_from_left_lso, WeightedSpanner};
use relspan::ultrametric::{ultrametric_cover_doubling, verify_cover, DoublingOptions};

fn points(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    vec(vec(0.0..100.0f64, 2), 3..max)
}

fn mask_and_n(max: usize) -> impl Strategy<Value = (usize, Vec<bool>)> {
    (2..max).prop_flat_map(|n| (Just(n), vec(prop::bool::weighted(0.2), n)))
}

fn tree(max: usize) -> impl Strategy<Value = relspan::graph::WeightedGraph> {
    (2..max)
        .prop_flat_map(|n| {
            (
                Just(n),
                vec((any::<prop::sample::Index>(), 1.0..10.0f64), n - 1),
            )
        })
        .prop_map(|(n, parents)| {
            let edges = parents
                .into_iter()
                .enumerate()
                .map(|(i, (p, w))| (p.index(i + 1), i + 1, w));
            relspan::graph::WeightedGraph::new(n, edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn walecki_covers_every_pair(n in 2usize..120) {
        let os = walecki_orderings(n);
        prop_assert_eq!(os.len(), n.div_ceil(2));
        let mut seen = vec![false; n * n];
        for o in &os {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
            for w in o.windows(2) {
                seen[w[0].min(w[1]) * n + w[0].max(w[1])] = true;
            }
        }
        prop_assert!((0..n).all(|x| (x + 1..n).all(|y| seen[x * n + y])));
    }

    #[test]
    fn static_two_hop_is_monotone(n in 2usize..400) {
        let h = static_two_hop(n);
        let none = vec![false; n];
        prop_assert_eq!(monotone_two_hop_violation(&h, &none, &none), None);
        prop_assert!(h.edges.iter().all(|&(a, b)| a < b && b < n));
    }

    #[test]
    fn reliable_two_hop_survivors_keep_paths(
        (n, attacked) in mask_and_n(160),
        nu in 0.02..0.5f64,
        c in 0.05..4.0f64,
        seed in any::<u64>(),
    ) {
        let h = reliable_two_hop(n, nu, c, &mut seeded(seed)).unwrap();
        let plus = faulty_extension_two_hop(&h, &attacked).unwrap();
        prop_assert!((0..n).all(|v| !attacked[v] || plus[v]));
        prop_assert_eq!(monotone_two_hop_violation(&h, &attacked, &plus), None);
    }

    #[test]
    fn left_survivors_keep_paths(
        (n, attacked) in mask_and_n(300),
        nu in 0.02..0.5f64,
        seed in any::<u64>(),
    ) {
        let h = reliable_left(n, nu, 2.0, &mut seeded(seed)).unwrap();
        let plus = faulty_extension_left(&h, &attacked).unwrap();
        prop_assert!((0..n).all(|v| !attacked[v] || plus[v]));
        prop_assert_eq!(left_two_hop_violation(&h, &attacked, &plus), None);
    }

    #[test]
    fn prefix_attack_extends_at_least_as_shuffled(n in 64usize..400, x in 1usize..32, seed in any::<u64>()) {
        // A prefix wipes out only the earliest centers, so the extension is a prefix too.
        let h = reliable_left(n, 0.2, 2.0, &mut seeded(seed)).unwrap();
        let attacked: Vec<bool> = (0..n).map(|i| i < x).collect();
        let plus = faulty_extension_left(&h, &attacked).unwrap();
        let last = (0..n).rev().find(|&i| plus[i]).unwrap();
        prop_assert!((0..=last).all(|i| plus[i]));
    }

    #[test]
    fn shadow_is_monotone(
        (n, b) in mask_and_n(200),
        extra in vec(any::<prop::sample::Index>(), 0..10),
        alpha in 0.5..1.0f64,
    ) {
        let s = shadow(&b, alpha).unwrap();
        let mut bigger = b.clone();
        extra.iter().for_each(|i| bigger[i.index(n)] = true);
        let s2 = shadow(&bigger, alpha).unwrap();
        prop_assert!((0..n).all(|i| !s[i] || s2[i]));
        let s3 = shadow(&b, alpha.max(0.75)).unwrap();
        prop_assert!(alpha > 0.75 || (0..n).all(|i| !s3[i] || s[i]));
    }

    #[test]
    fn attack_text_round_trips(attack in vec(0usize..1000, 0..40)) {
        let mut sorted = attack.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let parsed = parse_attack(&format_attack(&sorted)).unwrap();
        prop_assert_eq!(parsed, sorted.clone());
        prop_assert!(attack_mask(1000, &sorted).is_ok());
    }

    #[test]
    fn path_spanner_json_round_trips(n in 2usize..80, seed in any::<u64>()) {
        let h = reliable_two_hop(n, 0.2, 1.0, &mut seeded(seed)).unwrap();
        let back: PathSpanner = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        prop_assert_eq!(back, h);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn doubling_cover_dominates(pts in points(30), eps in 0.05..0.45f64) {
        let m = MetricSpace::from_points(pts).unwrap();
        prop_assume!(m.min_distance().unwrap() > 1e-3);
        let cover = ultrametric_cover_doubling(&m, eps, DoublingOptions::default()).unwrap();
        let r = verify_cover(&m, &cover);
        prop_assert!(r.ok(), "{:?}", r);
        prop_assert!(approx_le(r.max_stretch, 1.0 + eps));
        for h in &cover.ultrametrics {
            prop_assert_eq!(h.dominance_violation(&m), None);
        }
    }

    #[test]
    fn cover_lsos_pass_their_verifiers(pts in points(24)) {
        let m = MetricSpace::from_points(pts).unwrap();
        prop_assume!(m.min_distance().unwrap() > 1e-3);
        let cover = ultrametric_cover_doubling(&m, 0.25, DoublingOptions::default()).unwrap();
        let classic = cover_to_classic_lso(&cover);
        prop_assert!(verify_lso(&m, &classic).ok);
        prop_assert!(verify_lso(&m, &classic_as_triangle(&classic)).ok);
        let triangle = cover_to_triangle_lso(&cover);
        prop_assert!(verify_lso(&m, &triangle).ok);
        let back: LsoCollection = serde_json::from_str(&serde_json::to_string(&triangle).unwrap()).unwrap();
        prop_assert_eq!(back, triangle);
    }

    #[test]
    fn every_walecki_ordering_is_needed(n in 3usize..40, drop in any::<prop::sample::Index>()) {
        let mut os = walecki_orderings(n);
        os.remove(drop.index(os.len()));
        let mut seen = vec![false; n * n];
        for o in &os {
            for w in o.windows(2) {
                seen[w[0].min(w[1]) * n + w[0].max(w[1])] = true;
            }
        }
        prop_assert!((0..n).any(|x| (x + 1..n).any(|y| !seen[x * n + y])));
    }

    #[test]
    fn tree_left_lso_and_spanner(g in tree(80), seed in any::<u64>(), k in 0usize..10) {
        let n = g.n();
        let lso = separator_left_lso(&g, &CentroidOracle).unwrap();
        let m = MetricSpace::from_graph(g).unwrap();
        let r = verify_lso(&m, &lso);
        prop_assert!(r.ok, "{:?}", r);
        let h = spanner_from_left_lso(&m, lso, 0.2, None, &mut seeded(seed)).unwrap();
        let attack: Vec<usize> = (0..n).filter(|x| x % 10 == k).collect();
        let report = attack_evaluate(&m, &h, &attack).unwrap();
        prop_assert!(approx_le(report.max_stretch, 2.0), "{:?}", report.worst_pair);
        let back: WeightedSpanner = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        prop_assert_eq!(back, h);
    }
}
