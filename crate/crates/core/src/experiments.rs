//! Lower-bound constructions run as experiments.

use serde::Serialize;

use crate::error::Result;
use crate::generate::{generate_instance, InstanceKind, ThickCycle, THICK_CYCLE_C};
use crate::graph::WeightedGraph;
use crate::lso::{separator_left_lso, CentroidOracle};
use crate::metric::{MetricSpace, PointId};
use crate::rng;
use crate::spanner::{attack_evaluate, spanner_from_left_lso};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarReport {
    pub n: usize,
    /// Leaves outside `B⁺` after attacking the center.
    pub survivors: usize,
    /// Smallest `(d(x, z) + d(z, y)) / d(x, y)` over leaf triples: any
    /// spanner with stretch below this must join every survivor pair.
    pub min_detour: f64,
    pub forced_edges: usize,
    pub complete_edges: usize,
    pub spanner_edges: usize,
    pub spanner_stretch: f64,
    pub spanner_bplus: usize,
}

/// Star on `n` vertices, attack `{center}`: survivor pairs at stretch below
/// 2 need direct edges, while the left-LSO spanner gets stretch 2.
pub fn star_lower_bound_experiment(n: usize, nu: f64, seed: u64) -> Result<StarReport> {
    let g = generate_instance(&InstanceKind::Star, n, seed)?
        .graph()
        .expect("star is a graph")
        .clone();
    let lso = separator_left_lso(&g, &CentroidOracle)?;
    let m = MetricSpace::from_graph(g)?;
    let mut min_detour = f64::INFINITY;
    for x in 1..n {
        for y in x + 1..n {
            for z in (1..n).filter(|&z| z != x && z != y) {
                min_detour = min_detour.min((m.d(x, z) + m.d(z, y)) / m.d(x, y));
            }
        }
    }
    let h = spanner_from_left_lso(&m, lso, nu, None, &mut rng::stream(seed, "spanner", 0))?;
    let report = attack_evaluate(&m, &h, &[0])?;
    let survivors = n - report.bplus.len();
    Ok(StarReport {
        n,
        survivors,
        min_detour,
        forced_edges: survivors * survivors.saturating_sub(1) / 2,
        complete_edges: n * (n - 1) / 2,
        spanner_edges: h.edge_count(),
        spanner_stretch: report.max_stretch,
        spanner_bplus: report.bplus.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThickCycleReport {
    pub n: usize,
    pub k: u32,
    pub groups: usize,
    pub group_size: usize,
    /// The pair `(u, v)` spared by the attack.
    pub pair: (PointId, PointId),
    pub edge_removed: bool,
    pub attack: Vec<PointId>,
    /// `(3 / c) n^(1/k)`.
    pub attack_bound: f64,
    pub g_connected: bool,
    /// Component sizes of `H - B`, largest first.
    pub split: Vec<usize>,
    /// `|B|` plus every survivor outside the largest component of `H - B`.
    pub forced_bplus: usize,
    /// `|B|^k`.
    pub g_k: f64,
    /// The component of `v` is `{v}` plus the groups `2 .. s/2 - 1`.
    pub c1_matches: bool,
}

/// Attack `V_0 ∪ V_1 ∪ V_{s/2}` minus `u ∈ V_0`, `v ∈ V_1` on the thick
/// cycle, with `H` the cycle without the edge `{u, v}` (or the cycle itself).
pub fn thick_cycle_experiment(n: usize, k: u32, remove_edge: bool) -> Result<ThickCycleReport> {
    let t = ThickCycle::new(n, k)?;
    let s = t.groups;
    let (u, v) = (t.group(0).start, t.group(1).start);
    let mut attacked = vec![false; n];
    for i in [0, 1, s / 2] {
        t.group(i).for_each(|x| attacked[x] = true);
    }
    attacked[u] = false;
    attacked[v] = false;
    let g = t.graph();
    let h = if remove_edge {
        WeightedGraph::new(
            n,
            g.edges()
                .iter()
                .copied()
                .filter(|&(a, b, _)| (a, b) != (u, v) && (a, b) != (v, u)),
        )?
    } else {
        g.clone()
    };
    let alive: Vec<bool> = attacked.iter().map(|&b| !b).collect();
    let g_connected = g.components(Some(&alive)).len() == 1;
    let mut parts = h.components(Some(&alive));
    parts.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let attack: Vec<PointId> = (0..n).filter(|&x| attacked[x]).collect();
    let survivors = n - attack.len();
    let forced_bplus = attack.len() + survivors - parts.first().map_or(0, Vec::len);
    let mut expected_c1: Vec<PointId> = std::iter::once(v)
        .chain((2..s / 2).flat_map(|i| t.group(i)))
        .collect();
    expected_c1.sort_unstable();
    let c1_matches = parts.iter().any(|c| c.contains(&v) && *c == expected_c1);
    Ok(ThickCycleReport {
        n,
        k,
        groups: s,
        group_size: t.group_size,
        pair: (u, v),
        edge_removed: remove_edge,
        attack_bound: 3.0 / THICK_CYCLE_C * (n as f64).powf(1.0 / f64::from(k)),
        g_k: (attack.len() as f64).powi(k as i32),
        attack,
        g_connected,
        split: parts.iter().map(Vec::len).collect(),
        forced_bplus,
        c1_matches,
    })
}
