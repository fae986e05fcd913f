//! The three path spanners under a contiguous attack.

use relspan::path_spanner::{
    attack_mask, faulty_extension, indices, monotone_two_hop_violation, reliable_left,
    reliable_two_hop, shadow, static_two_hop, Flavor, DEFAULT_LEFT_C, DEFAULT_TWO_HOP_C,
};
use relspan::rng;

fn main() -> relspan::Result<()> {
    let n = 256;
    let h = static_two_hop(n);
    let none = vec![false; n];
    println!(
        "static: {} edges, 2-hop ok={}",
        h.edges.len(),
        monotone_two_hop_violation(&h, &none, &none).is_none()
    );

    let attack: Vec<usize> = (100..120).chain([7, 200]).collect();
    let attacked = attack_mask(n, &attack)?;
    let mut r = rng::seeded(11);
    for h in [
        reliable_two_hop(n, 0.2, DEFAULT_TWO_HOP_C, &mut r)?,
        reliable_left(n, 0.2, DEFAULT_LEFT_C, &mut r)?,
    ] {
        let plus = faulty_extension(&h, &attacked)?;
        let lost: Vec<usize> = indices(&plus)
            .into_iter()
            .filter(|&v| !attacked[v])
            .collect();
        let name = if h.flavor == Flavor::LeftReliable {
            "left"
        } else {
            "2-hop"
        };
        println!(
            "{name}: {} edges, |B|={} |B+ \\ B|={} {:?}",
            h.edges.len(),
            attack.len(),
            lost.len(),
            lost
        );
    }

    let s = indices(&shadow(&attacked, 0.75)?);
    println!(
        "0.75-shadow: {} vertices, {}..={}",
        s.len(),
        s[0],
        s[s.len() - 1]
    );
    Ok(())
}
