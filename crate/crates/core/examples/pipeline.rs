//! Config-driven run, same as `relspan attack`.

use relspan::pipeline::{run_pipeline, PipelineConfig};

const CONFIG: &str = r#"{
  "instance": {"kind": "grid", "width": 8, "n": 64},
  "pipeline": "treewidth-left",
  "params": {"nu": 0.2, "seed": 5},
  "attacks": {"count": 10, "sizes": [4, 8], "generator": "contiguous"}
}"#;

fn main() -> relspan::Result<()> {
    let cfg = PipelineConfig::from_json(CONFIG)?;
    let dir = std::env::temp_dir().join("relspan-example");
    let report = run_pipeline(&cfg, Some(&dir), None)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    println!("artifacts in {}", dir.display());
    Ok(())
}
