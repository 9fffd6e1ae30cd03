//! The `ias` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or I/O error (including malformed
//! polynomial literals), 2 a mathematical check or construction failed.

pub mod config;
pub mod error;
pub mod mesh;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use ias_core::immersion::{singular_locus_sample, ImmersionChart};
use ias_core::io::{chart_from_json, chart_to_json};
use ias_core::parse::{format_gpoly, format_qpoly};
use ias_core::report::{catalog_records, classify_report, verify_report, Report, VerifyOptions};
use ias_core::singularities::{catalog_entry, catalog_labels, catalog_verify, CatalogFormula, RealizationKind, SingularityLabel};

use crate::config::{ConfigDoc, RunConfig};
pub use crate::error::{CliError, EXIT_MATH, EXIT_OK, EXIT_USAGE};
use crate::output::{input_hash, read_file, write_atomic};

#[derive(Parser, Debug)]
#[command(name = "ias", version, about = "Build and verify improper affine sphere charts")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Grid points per axis, one value or one per axis.
    #[arg(long, global = true, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
    /// Zero threshold for floating-point checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for random sample points.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a chart from the configuration and write it as JSON.
    Build,
    /// Run the invariant battery on a chart file.
    Verify { chart: PathBuf },
    /// Classify a chart by the exterior differential systems it solves.
    ClassifyEds { chart: PathBuf },
    /// Print or verify catalog realizations of A-D-E singularities.
    Catalog {
        action: CatalogAction,
        /// Label such as A3+, D5-, E7, or "all".
        label: String,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Export a sampled grid: OBJ surface (n = 1) or CSV.
    Mesh { chart: PathBuf },
    /// Build from the configuration, then verify and classify.
    Report,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CatalogAction {
    Emit,
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Cc,
    Special,
}

impl From<KindArg> for RealizationKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Cc => RealizationKind::CenterChord,
            KindArg::Special => RealizationKind::Special,
        }
    }
}

/// What a command prints and how it exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_OK }
    }
}

/// Parse arguments, run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err(e) => {
            eprintln!("ias: {e}");
            e.exit_code()
        }
    }
}

fn run_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let doc = match &cli.config {
        Some(p) => ConfigDoc::parse(&read_file(p)?)?,
        None => ConfigDoc::default(),
    };
    RunConfig::new(doc, cli.n, cli.grid.clone(), cli.tol, cli.seed)
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = run_config(cli)?;
    match &cli.command {
        Command::Build => cmd_build(&cfg, cli.out.as_deref()),
        Command::Verify { chart } => cmd_verify(chart, &cfg, cli.out.as_deref()),
        Command::ClassifyEds { chart } => cmd_classify(chart, &cfg, cli.out.as_deref()),
        Command::Catalog { action, label, kind } => cmd_catalog(*action, label, cfg.n, kind.map(Into::into), cli.out.as_deref()),
        Command::Mesh { chart } => cmd_mesh(chart, &cfg, cli.out.as_deref()),
        Command::Report => cmd_report(cli, &cfg, cli.out.as_deref()),
    }
}

fn load_chart(path: &Path) -> Result<(ImmersionChart, String), CliError> {
    let text = read_file(path)?;
    let chart = chart_from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok((chart, input_hash(text.as_bytes())))
}

fn verify_options(cfg: &RunConfig) -> VerifyOptions {
    VerifyOptions {
        samples: cfg.samples,
        seed: cfg.seed,
        tol: cfg.tol,
    }
}

/// Grid for the build-time singular-locus scan, kept under the core cap.
fn scan_counts(cfg: &RunConfig, dim: usize) -> Vec<usize> {
    let per_axis = (100_000f64.powf(1.0 / dim as f64)).floor() as usize;
    let base = if cfg.grid.len() == dim { cfg.grid.clone() } else { vec![cfg.grid[0]; dim] };
    base.into_iter().map(|c| c.min(per_axis).max(2)).collect()
}

fn build_from(cfg: &RunConfig) -> Result<ImmersionChart, CliError> {
    let mut chart = cfg.build_chart()?;
    let locus = singular_locus_sample(&chart, &scan_counts(cfg, chart.dim()), cfg.tol)?;
    if let Some(first) = locus.points().next() {
        chart.warnings.push(format!(
            "singular locus: det Dx vanishes at or near {} of {} grid points, e.g. {}",
            locus.flagged.len(),
            locus.grid.len(),
            ias_core::domain::render_point(first)
        ));
    }
    Ok(chart)
}

pub fn cmd_build(cfg: &RunConfig, out: Option<&Path>) -> Result<Outcome, CliError> {
    let chart = build_from(cfg)?;
    let json = chart_to_json(&chart)?;
    let mut msg = String::new();
    for w in &chart.warnings {
        msg.push_str(&format!("note: {w}\n"));
    }
    match out {
        Some(p) => {
            write_atomic(p, json.as_bytes())?;
            msg.push_str(&format!(
                "built {} chart, n = {}, written to {}\n",
                chart.provenance.as_str(),
                chart.n,
                p.display()
            ));
            Ok(Outcome::ok(msg))
        }
        None => {
            eprint!("{msg}");
            Ok(Outcome::ok(json))
        }
    }
}

fn finish_report(report: &Report, out: Option<&Path>) -> Result<Outcome, CliError> {
    if let Some(p) = out {
        write_atomic(p, report.to_json().as_bytes())?;
    }
    let mut s = String::new();
    for (k, v) in &report.summary {
        s.push_str(&format!("{k}: {v}\n"));
    }
    for c in &report.checks {
        s.push_str(&format!("{:<13} {:<40} {}", c.status.as_str(), c.anchor, c.residual));
        if let Some(w) = &c.witness {
            s.push_str(&format!("  at {w}"));
        }
        s.push('\n');
    }
    s.push_str(&format!("verdict: {}\n", report.verdict.as_str()));
    Ok(Outcome {
        stdout: s,
        code: if report.passed() { EXIT_OK } else { EXIT_MATH },
    })
}

pub fn cmd_verify(path: &Path, cfg: &RunConfig, out: Option<&Path>) -> Result<Outcome, CliError> {
    let (chart, hash) = load_chart(path)?;
    let report = verify_report(&chart, &verify_options(cfg), &hash)?;
    finish_report(&report, out)
}

pub fn cmd_classify(path: &Path, cfg: &RunConfig, out: Option<&Path>) -> Result<Outcome, CliError> {
    let (chart, hash) = load_chart(path)?;
    let report = classify_report(&chart, &verify_options(cfg), &hash)?;
    finish_report(&report, out)
}

pub fn cmd_catalog(
    action: CatalogAction,
    label: &str,
    n: Option<usize>,
    kind: Option<RealizationKind>,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    if label == "all" {
        if action == CatalogAction::Emit {
            return Err(CliError::Usage("emit needs a single label".into()));
        }
        let max_n = n.unwrap_or(5);
        let labels: Vec<SingularityLabel> = catalog_labels(max_n)
            .into_iter()
            .filter(|l| kind.is_none_or(|k| l.kind == k))
            .collect();
        return catalog_check(&labels, &format!("all/n<={max_n}"), out);
    }
    let n = n.ok_or_else(|| CliError::Usage("catalog needs --n".into()))?;
    let kind = kind.unwrap_or(RealizationKind::CenterChord);
    let parsed = SingularityLabel::parse(label, n, kind)?;
    match action {
        CatalogAction::Emit => {
            let entry = catalog_entry(&parsed)?;
            let mut s = format!("# {parsed}\n");
            match &entry.formula {
                CatalogFormula::CenterChord { splus, sminus } => {
                    s.push_str(&format!("S+(v) = {}\n", format_qpoly(splus, "v")));
                    s.push_str(&format!("S-(u) = {}\n", format_qpoly(sminus, "u")));
                }
                CatalogFormula::Special { h } => s.push_str(&format!("H(z) = {}\n", format_gpoly(h, "z"))),
            }
            if !entry.reduce.is_empty() {
                let ys: Vec<String> = entry.reduce.iter().map(|j| format!("y{}", j + 1)).collect();
                s.push_str(&format!("# quadratic in {}, eliminated before the family is formed\n", ys.join(", ")));
            }
            Ok(Outcome::ok(s))
        }
        CatalogAction::Check => catalog_check(&[parsed], label, out),
    }
}

fn catalog_check(labels: &[SingularityLabel], what: &str, out: Option<&Path>) -> Result<Outcome, CliError> {
    let mut checks = Vec::new();
    let mut failing = Vec::new();
    for l in labels {
        let r = catalog_verify(l);
        if !r.passed() {
            failing.push(l.to_string());
        }
        checks.extend(catalog_records(&r));
    }
    let mut summary = BTreeMap::new();
    summary.insert("entries".into(), labels.len().to_string());
    summary.insert("passed".into(), (labels.len() - failing.len()).to_string());
    if !failing.is_empty() {
        summary.insert("failing".into(), failing.join("; "));
    }
    let report = Report::new("catalog check", &input_hash(what.as_bytes()), 0, summary, checks);
    finish_report(&report, out)
}

pub fn cmd_mesh(path: &Path, cfg: &RunConfig, out: Option<&Path>) -> Result<Outcome, CliError> {
    let out = out.ok_or_else(|| CliError::Usage("mesh needs --out FILE.obj or FILE.csv".into()))?;
    let (chart, _) = load_chart(path)?;
    let obj = out.extension().is_some_and(|e| e.eq_ignore_ascii_case("obj"));
    if obj && chart.n != 1 {
        return Err(CliError::Usage(format!(
            "OBJ surfaces need n = 1 (chart has n = {}); use a .csv output",
            chart.n
        )));
    }
    let g = mesh::sample_grid(&chart, &cfg.grid)?;
    let text = if obj { mesh::to_obj(&chart, &g)? } else { mesh::to_csv(&chart, &g) };
    write_atomic(out, text.as_bytes())?;
    let flagged = g.singular.iter().filter(|s| **s).count();
    Ok(Outcome::ok(format!(
        "{} vertices written to {} ({flagged} near the singular locus)\n",
        g.r.len(),
        out.display()
    )))
}

pub fn cmd_report(cli: &Cli, cfg: &RunConfig, out: Option<&Path>) -> Result<Outcome, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Usage("report needs --config".into()))?;
    let hash = input_hash(read_file(path)?.as_bytes());
    let chart = build_from(cfg)?;
    let opts = verify_options(cfg);
    let v = verify_report(&chart, &opts, &hash)?;
    let c = classify_report(&chart, &opts, &hash)?;
    let mut summary = v.summary.clone();
    summary.extend(c.summary.clone());
    let mut checks = v.checks;
    checks.extend(c.checks);
    let report = Report::new("report", &hash, cfg.seed, summary, checks);
    finish_report(&report, out)
}
