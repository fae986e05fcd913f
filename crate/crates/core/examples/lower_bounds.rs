use relspan::experiments::{star_lower_bound_experiment, thick_cycle_experiment};

fn main() -> relspan::Result<()> {
    let star = star_lower_bound_experiment(100, 0.2, 1)?;
    println!("{}", serde_json::to_string_pretty(&star)?);
    for remove_edge in [true, false] {
        let r = thick_cycle_experiment(48, 1, remove_edge)?;
        println!(
            "thick cycle, edge removed={remove_edge}: |B|={} split {:?} forced |B+| {}",
            r.attack.len(),
            r.split,
            r.forced_bplus
        );
    }
    Ok(())
}
