//! Config-driven runs: instance, LSO, spanner, attacks, verdicts.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{precondition, Error, Result};
use crate::generate::{generate_instance, Instance, InstanceKind};
use crate::graph::WeightedGraph;
use crate::hst::Hst;
use crate::lso::{
    cover_to_classic_lso, cover_to_triangle_lso, separator_left_lso, spd_left_lso, verify_lso,
    CentroidOracle, LsoCollection, LsoReport, TreeDecomposition, TreeDecompositionOracle,
};
use crate::metric::{approx_le, InstanceFile, MetricSpace};
use crate::partition::{verify_pairwise_cover, Partition, PartitionCover};
use crate::path_spanner::{
    left_two_hop_violation, monotone_two_hop_violation, Flavor, PathSpanner,
};
use crate::rng;
use crate::spanner::{
    attack_evaluate, generate_attack, spanner_from_lso, AttackGenerator, AttackRow, WeightedSpanner,
};
use crate::ultrametric::{
    ultrametric_cover_doubling, ultrametric_cover_general, verify_cover, DoublingOptions,
    OffsetGrid, UltrametricCover,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineKind {
    DoublingClassic,
    GeneralTriangle,
    UltrametricTriangle,
    TreeLeft,
    TreewidthLeft,
    SpdLeft,
}

impl PipelineKind {
    pub fn name(self) -> &'static str {
        match self {
            PipelineKind::DoublingClassic => "doubling-classic",
            PipelineKind::GeneralTriangle => "general-triangle",
            PipelineKind::UltrametricTriangle => "ultrametric-triangle",
            PipelineKind::TreeLeft => "tree-left",
            PipelineKind::TreewidthLeft => "treewidth-left",
            PipelineKind::SpdLeft => "spd-left",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSpec {
    /// An instance file written by `gen`.
    File { file: PathBuf },
    Generated {
        #[serde(flatten)]
        kind: InstanceKind,
        n: usize,
    },
}

impl InstanceSpec {
    pub fn label(&self) -> String {
        match self {
            InstanceSpec::File { file } => file.display().to_string(),
            InstanceSpec::Generated { kind, .. } => {
                let v = serde_json::to_value(kind).expect("kind serializes");
                v["kind"].as_str().unwrap_or("instance").to_string()
            }
        }
    }
}

fn default_k() -> usize {
    2
}
fn default_eps() -> f64 {
    0.25
}
fn default_nu() -> f64 {
    0.2
}
fn default_reliability_c() -> f64 {
    5.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Params {
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[serde(default)]
    pub seed: u64,
    /// Sampling constant of the path spanners; flavor default when absent.
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub inner_fraction: Option<f64>,
    #[serde(default)]
    pub grid: Option<OffsetGrid>,
    /// Tree decomposition JSON for `treewidth-left`.
    #[serde(default)]
    pub decomposition: Option<PathBuf>,
    /// Reliability verdict: mean `|B⁺| / |B| <= 1 + reliability_c * nu`.
    #[serde(default = "default_reliability_c")]
    pub reliability_c: f64,
}

impl Default for Params {
    fn default() -> Self {
        serde_json::from_value(Value::Object(Default::default())).expect("defaults")
    }
}

fn default_count() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct AttackPlan {
    #[serde(default = "default_count")]
    pub count: usize,
    /// Attack sizes; `n / 10` when empty.
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub generator: AttackGenerator,
}

impl Default for AttackPlan {
    fn default() -> Self {
        AttackPlan {
            count: default_count(),
            sizes: Vec::new(),
            generator: AttackGenerator::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputPaths {
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct PipelineConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub instance: InstanceSpec,
    pub pipeline: PipelineKind,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub attacks: AttackPlan,
    #[serde(default)]
    pub output: OutputPaths,
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("{}/{}", self.instance.label(), self.pipeline.name()))
    }
}

/// Instance of a config; relative files resolve against `base`.
pub fn load_instance(
    spec: &InstanceSpec,
    seed: u64,
    base: Option<&Path>,
) -> Result<(MetricSpace, Option<WeightedGraph>)> {
    match spec {
        InstanceSpec::Generated { kind, n } => match generate_instance(kind, *n, seed)? {
            Instance::Graph(g) => Ok((MetricSpace::from_graph(g.clone())?, Some(g))),
            Instance::Metric(m) => Ok((m, None)),
        },
        InstanceSpec::File { file } => {
            let path = base.map_or_else(|| file.clone(), |b| b.join(file));
            let data: InstanceFile = serde_json::from_str(&fs::read_to_string(&path)?)
                .map_err(|e| Error::Schema(format!("instance: {e}")))?;
            let m = MetricSpace::from_instance(&data)?;
            let g = m.graph().cloned();
            Ok((m, g))
        }
    }
}

/// Construction output of [`build`].
#[derive(Debug, Clone)]
pub struct Built {
    pub metric: MetricSpace,
    pub lso: LsoCollection,
    pub lso_report: LsoReport,
    pub spanner: WeightedSpanner,
    pub cover_size: Option<usize>,
}

fn need_graph(g: &Option<WeightedGraph>, pipeline: PipelineKind) -> Result<&WeightedGraph> {
    g.as_ref().ok_or_else(|| {
        Error::InvalidInput(format!(
            "pipeline {} needs a graph instance",
            pipeline.name()
        ))
    })
}

fn build_lso(
    cfg: &PipelineConfig,
    m: &MetricSpace,
    g: &Option<WeightedGraph>,
    base: Option<&Path>,
) -> Result<(LsoCollection, Option<usize>)> {
    let p = &cfg.params;
    let mut cover_rng = rng::stream(p.seed, "cover", 0);
    match cfg.pipeline {
        PipelineKind::DoublingClassic => {
            let mut opts = DoublingOptions {
                grid: p.grid,
                ..DoublingOptions::default()
            };
            if let Some(f) = p.inner_fraction {
                opts.inner_fraction = f;
            }
            let cover =
                ultrametric_cover_doubling(m, p.eps, opts).map_err(|e| e.in_stage("cover"))?;
            Ok((cover_to_classic_lso(&cover), Some(cover.tau)))
        }
        PipelineKind::GeneralTriangle => {
            let grid = p.grid.unwrap_or(OffsetGrid::Target {
                stretch: 2.0 * p.k as f64 + p.eps,
            });
            let cover = ultrametric_cover_general(m, p.k, p.eps, grid, &mut cover_rng)
                .map_err(|e| e.in_stage("cover"))?;
            Ok((cover_to_triangle_lso(&cover), Some(cover.tau)))
        }
        PipelineKind::UltrametricTriangle => {
            let h = Hst::from_ultrametric(m).map_err(|e| e.in_stage("cover"))?;
            let cover = UltrametricCover {
                max_degree: Some(h.max_degree()),
                separation: h.separation(),
                ultrametrics: vec![h],
                tau: 1,
                rho: 1.0,
            };
            Ok((cover_to_triangle_lso(&cover), Some(1)))
        }
        PipelineKind::TreeLeft => {
            let g = need_graph(g, cfg.pipeline)?;
            if !g.is_tree() {
                return Err(Error::InvalidInput("tree-left needs a tree".into()).in_stage("lso"));
            }
            Ok((
                separator_left_lso(g, &CentroidOracle).map_err(|e| e.in_stage("lso"))?,
                None,
            ))
        }
        PipelineKind::TreewidthLeft => {
            let g = need_graph(g, cfg.pipeline)?;
            let td = match (&p.decomposition, &cfg.instance) {
                (Some(path), _) => {
                    let path = base.map_or_else(|| path.clone(), |b| b.join(path));
                    serde_json::from_str(&fs::read_to_string(path)?)
                        .map_err(|e| Error::Schema(format!("tree decomposition: {e}")))?
                }
                (
                    None,
                    InstanceSpec::Generated {
                        kind: InstanceKind::Grid { width },
                        n,
                    },
                ) => TreeDecomposition::of_grid(*n, *width),
                (None, _) if g.is_tree() => TreeDecomposition::of_tree(g)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "treewidth-left needs a tree decomposition".into(),
                    ))
                }
            };
            let oracle = TreeDecompositionOracle::new(g, td).map_err(|e| e.in_stage("lso"))?;
            Ok((
                separator_left_lso(g, &oracle).map_err(|e| e.in_stage("lso"))?,
                None,
            ))
        }
        PipelineKind::SpdLeft => {
            let g = need_graph(g, cfg.pipeline)?;
            Ok((
                spd_left_lso(g, p.eps).map_err(|e| e.in_stage("lso"))?.lso,
                None,
            ))
        }
    }
}

/// Instance, LSO (verified), and spanner.
pub fn build(cfg: &PipelineConfig, base: Option<&Path>) -> Result<Built> {
    let p = &cfg.params;
    if !(p.nu > 0.0 && p.nu < 1.0) {
        return Err(precondition("build", format!("nu {} outside (0, 1)", p.nu)));
    }
    let (metric, g) =
        load_instance(&cfg.instance, p.seed, base).map_err(|e| e.in_stage("instance"))?;
    let (lso, cover_size) = build_lso(cfg, &metric, &g, base)?;
    let lso_report = verify_lso(&metric, &lso);
    let spanner = spanner_from_lso(
        &metric,
        lso.clone(),
        p.nu,
        p.c,
        &mut rng::stream(p.seed, "spanner", 0),
    )
    .map_err(|e| e.in_stage("spanner"))?;
    Ok(Built {
        metric,
        lso,
        lso_report,
        spanner,
        cover_size,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Verdicts {
    pub lso: bool,
    pub stretch: bool,
    pub reliability: bool,
    pub attacks: usize,
    pub max_stretch: f64,
    pub mean_ratio: f64,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunReport {
    pub name: String,
    pub pipeline: PipelineKind,
    pub n: usize,
    pub cover_size: Option<usize>,
    pub orderings: usize,
    pub tau: usize,
    pub rho: f64,
    pub stretch_bound: f64,
    pub edges: usize,
    pub wall_ms: u128,
    pub attack_csv: Option<PathBuf>,
    pub verdicts: Verdicts,
    pub pass: bool,
}

/// Runs the attack plan against `built`; rows in generation order.
pub fn run_attacks(cfg: &PipelineConfig, built: &Built) -> Result<(Vec<AttackRow>, Verdicts)> {
    let n = built.metric.n();
    let sizes = if cfg.attacks.sizes.is_empty() {
        vec![(n / 10).max(1)]
    } else {
        cfg.attacks.sizes.clone()
    };
    let mut rng = rng::stream(cfg.params.seed, "attacks", 0);
    let label = cfg.label();
    let mut rows = Vec::new();
    let mut stretch_ok = true;
    let mut max_stretch = 1.0f64;
    let (mut sum, mut max_ratio) = (0.0, 0.0f64);
    for &size in &sizes {
        for _ in 0..cfg.attacks.count {
            let b = generate_attack(
                cfg.attacks.generator,
                &built.metric,
                &built.lso.orderings,
                size,
                &mut rng,
            );
            let report = attack_evaluate(&built.metric, &built.spanner, &b)
                .map_err(|e| e.in_stage("attacks"))?;
            stretch_ok &= approx_le(report.max_stretch, built.spanner.stretch);
            max_stretch = max_stretch.max(report.max_stretch);
            sum += report.ratio();
            max_ratio = max_ratio.max(report.ratio());
            rows.push(AttackRow::new(
                &label,
                cfg.params.nu,
                cfg.params.seed,
                n,
                &report,
            ));
        }
    }
    let attacks = rows.len();
    let mean_ratio = if attacks == 0 {
        1.0
    } else {
        sum / attacks as f64
    };
    Ok((
        rows,
        Verdicts {
            lso: built.lso_report.ok,
            stretch: stretch_ok,
            reliability: mean_ratio <= 1.0 + cfg.params.reliability_c * cfg.params.nu,
            attacks,
            max_stretch,
            mean_ratio,
            max_ratio,
        },
    ))
}

pub fn write_rows(path: &Path, rows: &[AttackRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string(value)?)?;
    Ok(())
}

/// Writes `lso.json` and `spanner.json` into `dir`.
pub fn write_built(dir: &Path, built: &Built) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_json(&dir.join("lso.json"), &built.lso)?;
    write_json(&dir.join("spanner.json"), &built.spanner)
}

/// Full run; with `out`, artifacts go to `lso.json`, `spanner.json`,
/// `attacks.csv` and `report.json` there.
pub fn run_pipeline(
    cfg: &PipelineConfig,
    out: Option<&Path>,
    base: Option<&Path>,
) -> Result<RunReport> {
    let start = Instant::now();
    let built = build(cfg, base)?;
    let (rows, verdicts) = run_attacks(cfg, &built)?;
    let mut attack_csv = None;
    if let Some(dir) = out {
        write_built(dir, &built)?;
        let path = dir.join("attacks.csv");
        write_rows(&path, &rows)?;
        attack_csv = Some(path);
    }
    let report = RunReport {
        name: cfg.label(),
        pipeline: cfg.pipeline,
        n: built.metric.n(),
        cover_size: built.cover_size,
        orderings: built.lso.orderings.len(),
        tau: built.lso.tau,
        rho: built.lso.rho,
        stretch_bound: built.spanner.stretch,
        edges: built.spanner.edge_count(),
        wall_ms: start.elapsed().as_millis(),
        attack_csv,
        pass: verdicts.lso && verdicts.stretch && verdicts.reliability,
        verdicts,
    };
    if let Some(dir) = out {
        write_json(&dir.join("report.json"), &report)?;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub artifact: &'static str,
    pub ok: bool,
    pub detail: String,
}

fn schema<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Schema(format!("{what}: {e}")))
}

fn need_n(m: &MetricSpace, n: usize, what: &str) -> Result<()> {
    if m.n() == n {
        Ok(())
    } else {
        Err(Error::Schema(format!(
            "{what} has {n} points but the instance has {}",
            m.n()
        )))
    }
}

/// Recognizes the artifact by its keys and runs the matching verifier
/// against `m`.
pub fn verify_artifact(path: &Path, m: &MetricSpace) -> Result<Verdict> {
    let text = fs::read_to_string(path)?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::Schema(format!("not JSON: {e}")))?;
    let has = |k: &str| v.get(k).is_some();
    if has("orderings") && has("kind") {
        let lso: LsoCollection = schema(v, "lso")?;
        if let Some(bad) = lso.orderings.iter().flatten().find(|&&x| x >= m.n()) {
            return Err(Error::Schema(format!(
                "lso mentions point {bad} outside the instance"
            )));
        }
        let r = verify_lso(m, &lso);
        return Ok(Verdict {
            artifact: "lso",
            ok: r.ok,
            detail: format!(
                "kind {:?} rho {} measured tau {} worst pair {:?} ratio {:?} malformed {:?}",
                lso.kind, lso.rho, r.measured_tau, r.worst_pair, r.max_ratio, r.malformed
            ),
        });
    }
    if has("ultrametrics") {
        let cover: UltrametricCover = schema(v, "ultrametric cover")?;
        for h in &cover.ultrametrics {
            need_n(m, h.n(), "ultrametric")?;
        }
        let r = verify_cover(m, &cover);
        return Ok(Verdict {
            artifact: "ultrametric-cover",
            ok: r.ok(),
            detail: format!(
                "stretch {} (declared {}) worst pair {:?} dominance {:?}",
                r.max_stretch, r.rho, r.worst_pair, r.dominance_violation
            ),
        });
    }
    if has("nodes") {
        let h: Hst = schema(v, "hst")?;
        need_n(m, h.n(), "hst")?;
        let bad = h.dominance_violation(m);
        return Ok(Verdict {
            artifact: "hst",
            ok: bad.is_none(),
            detail: format!("dominance violation {bad:?}"),
        });
    }
    if has("partitions") {
        let cover: PartitionCover = schema(v, "pairwise cover")?;
        for p in &cover.partitions {
            need_n(m, p.n(), "partition")?;
        }
        let r = verify_pairwise_cover(m, &cover);
        return Ok(Verdict {
            artifact: "pairwise-cover",
            ok: r.ok,
            detail: format!("{:?}", r.violation),
        });
    }
    if has("delta") && has("assignment") {
        let p: Partition = schema(v, "partition")?;
        need_n(m, p.n(), "partition")?;
        return Ok(Verdict {
            artifact: "partition",
            ok: p.is_bounded(m),
            detail: format!("max diameter {} bound {}", p.max_diameter(m), p.delta()),
        });
    }
    if has("flavor") {
        let h: PathSpanner = schema(v, "path spanner")?;
        if h.edges.iter().any(|&(a, b)| a >= b || b >= h.n) {
            return Err(Error::Schema("path spanner edge out of range".into()));
        }
        let none = vec![false; h.n];
        let bad = match h.flavor {
            Flavor::LeftReliable => left_two_hop_violation(&h, &none, &none),
            _ => monotone_two_hop_violation(&h, &none, &none),
        };
        return Ok(Verdict {
            artifact: "path-spanner",
            ok: bad.is_none(),
            detail: format!("uncovered pair {bad:?}"),
        });
    }
    if has("parts") && has("edges") {
        let h: WeightedSpanner = schema(v, "spanner")?;
        need_n(m, h.n, "spanner")?;
        if let Some(&(x, y, w)) = h
            .edges
            .iter()
            .find(|&&(x, y, w)| x >= m.n() || y >= m.n() || w != m.d(x, y))
        {
            return Ok(Verdict {
                artifact: "spanner",
                ok: false,
                detail: format!("edge ({x}, {y}) weight {w} is not the distance"),
            });
        }
        let r = attack_evaluate(m, &h, &[])?;
        return Ok(Verdict {
            artifact: "spanner",
            ok: r.bplus.is_empty() && approx_le(r.max_stretch, h.stretch),
            detail: format!(
                "stretch {} (bound {}) worst pair {:?}",
                r.max_stretch, h.stretch, r.worst_pair
            ),
        });
    }
    Err(Error::Schema(format!(
        "unrecognized artifact {}",
        path.display()
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SummaryRow {
    pub instance: String,
    pub n: usize,
    pub nu: f64,
    pub rows: usize,
    pub mean_ratio: f64,
    pub max_ratio: f64,
    pub mean_stretch: f64,
    pub max_stretch: f64,
}

/// Mean and max of `|B⁺| / |B|` and of the stretch per `(instance, n, nu)`.
pub fn report_summary(paths: &[PathBuf]) -> Result<Vec<SummaryRow>> {
    let mut groups: BTreeMap<(String, usize, u64), Vec<AttackRow>> = BTreeMap::new();
    for path in paths {
        let mut r = csv::Reader::from_path(path)?;
        for row in r.deserialize() {
            let row: AttackRow = row?;
            groups
                .entry((row.instance.clone(), row.n, row.nu.to_bits()))
                .or_default()
                .push(row);
        }
    }
    if groups.is_empty() {
        return Err(Error::InvalidInput("no attack rows to summarize".into()));
    }
    Ok(groups
        .into_iter()
        .map(|((instance, n, nu), rows)| {
            let ratio = |r: &AttackRow| {
                if r.attack_size == 0 {
                    1.0
                } else {
                    r.bplus_size as f64 / r.attack_size as f64
                }
            };
            let k = rows.len() as f64;
            SummaryRow {
                instance,
                n,
                nu: f64::from_bits(nu),
                rows: rows.len(),
                mean_ratio: rows.iter().map(ratio).sum::<f64>() / k,
                max_ratio: rows.iter().map(ratio).fold(0.0, f64::max),
                mean_stretch: rows.iter().map(|r| r.max_stretch).sum::<f64>() / k,
                max_stretch: rows.iter().map(|r| r.max_stretch).fold(0.0, f64::max),
            }
        })
        .collect())
}

pub fn summary_table(rows: &[SummaryRow]) -> String {
    let mut out = format!(
        "{:<32} {:>6} {:>6} {:>6} {:>10} {:>10} {:>10} {:>10}\n",
        "instance", "n", "nu", "rows", "mean|B+|/|B|", "max", "mean-str", "max-str"
    );
    for r in rows {
        out += &format!(
            "{:<32} {:>6} {:>6} {:>6} {:>10.4} {:>10.4} {:>10.4} {:>10.4}\n",
            r.instance, r.n, r.nu, r.rows, r.mean_ratio, r.max_ratio, r.mean_stretch, r.max_stretch
        );
    }
    out
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star_config() -> PipelineConfig {
        PipelineConfig::from_json(
            r#"{"instance": {"kind": "star", "n": 50}, "pipeline": "tree-left",
                "params": {"nu": 0.2, "seed": 4}, "attacks": {"count": 10, "sizes": [5]}}"#,
        )
        .unwrap()
    }

    #[test]
    fn tree_left_on_star_passes() {
        let r = run_pipeline(&star_config(), None, None).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.verdicts.max_stretch <= 2.0);
    }

    #[test]
    fn csv_is_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        run_pipeline(&star_config(), Some(&a), None).unwrap();
        run_pipeline(&star_config(), Some(&b), None).unwrap();
        assert_eq!(
            fs::read(a.join("attacks.csv")).unwrap(),
            fs::read(b.join("attacks.csv")).unwrap()
        );
    }

    #[test]
    fn bad_eps_names_the_builder() {
        let cfg = PipelineConfig::from_json(
            r#"{"instance": {"kind": "random-euclidean", "dim": 2, "n": 20}, "pipeline": "doubling-classic",
                "params": {"eps": 0.9}}"#,
        )
        .unwrap();
        let err = build(&cfg, None).unwrap_err().to_string();
        assert!(err.contains("ultrametric_cover_doubling"), "{err}");
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = PipelineConfig::from_json(
            r#"{"instance": {"kind": "uniform", "n": 5}, "pipeline": "ultrametric-triangle"}"#,
        )
        .unwrap();
        assert_eq!(cfg.params.k, 2);
        assert_eq!(cfg.attacks.count, 10);
        assert!(PipelineConfig::from_json(r#"{"pipeline": "nope"}"#).is_err());
    }
}
