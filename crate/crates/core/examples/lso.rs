use relspan::generate::{generate_instance, InstanceKind};
use relspan::lso::{
    classic_as_triangle, cover_to_classic_lso, cover_to_triangle_lso, separator_left_lso,
    spd_left_lso, verify_lso, walecki_orderings, CentroidOracle, LsoCollection,
};
use relspan::metric::MetricSpace;
use relspan::ultrametric::{ultrametric_cover_doubling, DoublingOptions};

fn show(name: &str, m: &MetricSpace, lso: &LsoCollection) {
    let r = verify_lso(m, lso);
    println!(
        "{name:<24} {:?} orderings={:<6} rho={:<6.3} membership={:<4} ok={}",
        lso.kind,
        lso.orderings.len(),
        lso.rho,
        r.measured_tau,
        r.ok
    );
}

fn main() -> relspan::Result<()> {
    println!("walecki n=9: {:?}", walecki_orderings(9));

    let m = generate_instance(&InstanceKind::RandomEuclidean { dim: 2 }, 40, 2)?.into_metric()?;
    let cover = ultrametric_cover_doubling(&m, 0.25, DoublingOptions::default())?;
    let classic = cover_to_classic_lso(&cover);
    show("doubling classic", &m, &classic);
    show("  as triangle", &m, &classic_as_triangle(&classic));
    show("doubling triangle", &m, &cover_to_triangle_lso(&cover));

    let tree = generate_instance(&InstanceKind::RandomTree, 500, 4)?
        .graph()
        .unwrap()
        .clone();
    let left = separator_left_lso(&tree, &CentroidOracle)?;
    show(
        "tree separator left",
        &MetricSpace::from_graph(tree)?,
        &left,
    );

    let grid = generate_instance(&InstanceKind::Grid { width: 6 }, 36, 0)?
        .graph()
        .unwrap()
        .clone();
    let spd = spd_left_lso(&grid, 0.25)?;
    println!(
        "grid spd: depth {} max landmarks {}",
        spd.depth, spd.max_landmarks
    );
    show("grid spd left", &MetricSpace::from_graph(grid)?, &spd.lso);
    Ok(())
}
