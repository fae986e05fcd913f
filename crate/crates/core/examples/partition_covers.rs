//! Pairwise partition covers at a few scales, checked exhaustively.

use relspan::generate::{generate_instance, InstanceKind};
use relspan::partition::{pairwise_cover_doubling, pairwise_cover_general, verify_pairwise_cover};
use relspan::rng;

fn main() -> relspan::Result<()> {
    let m = generate_instance(&InstanceKind::RandomEuclidean { dim: 2 }, 60, 5)?.into_metric()?;
    let diam = m.max_distance().unwrap();
    for frac in [0.125, 0.25, 0.5] {
        let delta = frac * diam;
        let general = pairwise_cover_general(&m, delta, 2, 0.25, &mut rng::seeded(3))?;
        let doubling = pairwise_cover_doubling(&m, delta, 1.0 / 32.0)?;
        println!(
            "delta={delta:.3}  general: {} partitions ok={}  doubling: {} partitions ok={}",
            general.partitions.len(),
            verify_pairwise_cover(&m, &general).ok,
            doubling.partitions.len(),
            verify_pairwise_cover(&m, &doubling).ok,
        );
    }
    Ok(())
}
