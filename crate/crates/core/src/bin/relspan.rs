use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use relspan::metric::{InstanceFile, MetricSpace};
use relspan::pipeline::{
    build, load_instance, report_summary, run_pipeline, summary_table, verify_artifact,
    write_built, write_summary, PipelineConfig,
};
use relspan::Error;

#[derive(Parser)]
#[command(
    name = "relspan",
    version,
    about = "Reliable spanners from locality-sensitive orderings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Pipeline config (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file or directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the configured instance.
    Gen(Common),
    /// Build and verify the LSO and spanner.
    Build(Common),
    /// Build, then run the attack plan.
    Attack(Common),
    /// Verify JSON artifacts against the configured (or given) instance.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Instance file instead of the config's instance.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(required = true)]
        artifacts: Vec<PathBuf>,
    },
    /// Aggregate attack CSVs.
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        csv: Vec<PathBuf>,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn config(common: &Common) -> Result<(PipelineConfig, Option<PathBuf>), Error> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("--config is required".into()))?;
    let mut cfg = PipelineConfig::load(path)?;
    if let Some(seed) = common.seed {
        cfg.params.seed = seed;
    }
    Ok((cfg, path.parent().map(Path::to_path_buf)))
}

fn out_dir(common: &Common, cfg: &PipelineConfig) -> Option<PathBuf> {
    common.out.clone().or_else(|| cfg.output.dir.clone())
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Gen(common) => {
            let (cfg, base) = config(&common)?;
            let (m, _) = load_instance(&cfg.instance, cfg.params.seed, base.as_deref())?;
            let text = serde_json::to_string(&m.to_instance())?;
            match &common.out {
                Some(path) => std::fs::write(path, text)?,
                None => println!("{text}"),
            }
            Ok(Outcome::Pass)
        }
        Command::Build(common) => {
            let (cfg, base) = config(&common)?;
            let built = build(&cfg, base.as_deref())?;
            if let Some(dir) = out_dir(&common, &cfg) {
                write_built(&dir, &built)?;
            }
            println!(
                "{}: {} orderings, tau {}, rho {}, {} edges, lso verifier {}",
                cfg.label(),
                built.lso.orderings.len(),
                built.lso.tau,
                built.lso.rho,
                built.spanner.edge_count(),
                if built.lso_report.ok { "pass" } else { "FAIL" }
            );
            Ok(verdict(built.lso_report.ok))
        }
        Command::Attack(common) => {
            let (cfg, base) = config(&common)?;
            let dir = out_dir(&common, &cfg);
            let report = run_pipeline(&cfg, dir.as_deref(), base.as_deref())?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(verdict(report.pass))
        }
        Command::Verify {
            common,
            instance,
            artifacts,
        } => {
            let m = match instance {
                Some(path) => {
                    let file: InstanceFile = serde_json::from_str(&std::fs::read_to_string(path)?)
                        .map_err(|e| Error::Schema(format!("instance: {e}")))?;
                    MetricSpace::from_instance(&file)?
                }
                None => {
                    let (cfg, base) = config(&common)?;
                    load_instance(&cfg.instance, cfg.params.seed, base.as_deref())?.0
                }
            };
            let mut ok = true;
            for path in &artifacts {
                let v = verify_artifact(path, &m)?;
                println!(
                    "{} {}: {} ({})",
                    if v.ok { "pass" } else { "FAIL" },
                    path.display(),
                    v.artifact,
                    v.detail
                );
                ok &= v.ok;
            }
            Ok(verdict(ok))
        }
        Command::Report { common, csv } => {
            let rows = report_summary(&csv)?;
            print!("{}", summary_table(&rows));
            if let Some(path) = &common.out {
                write_summary(path, &rows)?;
            }
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
