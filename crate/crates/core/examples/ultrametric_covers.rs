use std::time::Instant;

use relspan::generate::{generate_instance, InstanceKind};
use relspan::rng;
use relspan::ultrametric::{
    ultrametric_cover_doubling, ultrametric_cover_general, verify_cover, DoublingOptions,
    OffsetGrid,
};

fn main() -> relspan::Result<()> {
    let kind = InstanceKind::RandomEuclidean { dim: 2 };
    let m = generate_instance(&kind, 80, 1)?.into_metric()?;
    let t = Instant::now();
    let general = ultrametric_cover_general(
        &m,
        2,
        0.5,
        OffsetGrid::Target { stretch: 4.5 },
        &mut rng::seeded(1),
    )?;
    let report = verify_cover(&m, &general);
    println!(
        "general n=80 k=2 eps=0.5: {} HSTs, stretch {:.4} (<= {}), dominance {}, {:?}",
        general.ultrametrics.len(),
        report.max_stretch,
        general.rho,
        report.dominance_ok,
        t.elapsed()
    );

    let m = generate_instance(&kind, 100, 2)?.into_metric()?;
    let t = Instant::now();
    let doubling = ultrametric_cover_doubling(&m, 0.1, DoublingOptions::default())?;
    let report = verify_cover(&m, &doubling);
    println!(
        "doubling n=100 eps=0.1: {} HSTs, stretch {:.4} (<= {}), max degree {}, {:?}",
        doubling.ultrametrics.len(),
        report.max_stretch,
        doubling.rho,
        report.max_degree,
        t.elapsed()
    );
    Ok(())
}
