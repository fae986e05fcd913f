use relspan::generate::{generate_instance, InstanceKind};
use relspan::lso::{separator_left_lso, CentroidOracle};
use relspan::metric::MetricSpace;
use relspan::rng;
use relspan::spanner::{attack_evaluate, generate_attack, spanner_from_left_lso, AttackGenerator};

fn main() -> relspan::Result<()> {
    let n = 400;
    let g = generate_instance(&InstanceKind::RandomTree, n, 8)?
        .graph()
        .unwrap()
        .clone();
    let lso = separator_left_lso(&g, &CentroidOracle)?;
    let m = MetricSpace::from_graph(g)?;
    let h = spanner_from_left_lso(&m, lso, 0.1, None, &mut rng::stream(8, "spanner", 0))?;
    println!(
        "tree n={n}: {} edges over {} orderings, stretch bound {}",
        h.edge_count(),
        h.parts.len(),
        h.stretch
    );

    for (i, gen) in [
        AttackGenerator::Uniform,
        AttackGenerator::Contiguous,
        AttackGenerator::Ball,
    ]
    .into_iter()
    .enumerate()
    {
        let orderings: Vec<_> = h.parts.iter().map(|p| p.ordering.clone()).collect();
        let b = generate_attack(
            gen,
            &m,
            &orderings,
            40,
            &mut rng::stream(8, "attacks", i as u64),
        );
        let r = attack_evaluate(&m, &h, &b)?;
        println!(
            "{gen:?}: |B|={} |B+|={} max stretch {:.4}",
            b.len(),
            r.bplus.len(),
            r.max_stretch
        );
    }
    Ok(())
}
