//! `helly` — command-line driver for colorful face bounds, collapsibility
//! search, extremal constructions, nerves, and rank certificates.
//!
//! Every subcommand reads/writes JSON (complexes, families, reports); the
//! `bounds table` subcommand emits CSV. Output goes to stdout unless
//! `--out PATH` is given. Exit codes: 0 = verified / produced, 2 = a
//! checked bound or verdict failed, 3 = a search or size budget was
//! exhausted before reaching a verdict.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use helly_core::bounds::{
    self, alpha_monte_carlo, alpha_threshold, BetaVector, BoundParams,
};
use helly_core::campaign::{run_campaign, CampaignConfig, CampaignMode, CampaignReport};
use helly_core::collapse::{find_collapse, find_special_collapse, CollapseOutcome};
use helly_core::complex::{ColorVector, ColoredComplex};
use helly_core::exterior::{intersection_certificate, ArithmeticMode};
use helly_core::extremal::{build_extremal, check_tightness, ExtremalSpec};
use helly_core::geometry::{nerve, GeometricFamily, GeometryError};
use helly_core::rational::{parse_rational, Rational};

const EXIT_VIOLATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "helly",
    version,
    about = "Colorful face-count bounds, d-collapsibility, nerves, and certificates"
)]
struct Cli {
    /// Seed for all randomized subcommands (certificates, sampling).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the primary output to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search for a d-collapse sequence of a complex.
    Collapse(CollapseArgs),
    /// Face-count bounds: threshold tables and per-complex verification.
    Bounds {
        #[command(subcommand)]
        cmd: BoundsCmd,
    },
    /// Build the extremal complex for given block fractions and report
    /// whether it meets the bound with equality.
    Extremal(ExtremalArgs),
    /// Compute the nerve of a family of convex bodies.
    Nerve(NerveArgs),
    /// Run the exterior-algebra rank certificate on a complex.
    Certify(CertifyArgs),
    /// Run a bulk verification campaign (exhaustive or randomized).
    Campaign(CampaignArgs),
}

#[derive(Args)]
struct CollapseArgs {
    /// Complex JSON: {"n_per_color":[...],"maximal_faces":[[...],...]}.
    #[arg(long)]
    complex: PathBuf,
    /// Collapse parameter: free faces have at most d vertices.
    #[arg(long)]
    d: usize,
    /// Restrict to special collapses (|L| = d or L = M).
    #[arg(long)]
    special: bool,
    /// Search-node budget before giving up.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Emit a CSV table of admissible counts, densities, and thresholds.
    Table(TableArgs),
    /// Check f_k <= p_k on a concrete complex.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TableArgs {
    /// Collapse parameter d (single value; --grid overrides).
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Colorful signature, comma-separated: --k 1,1.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    /// Per-color fractions in (0,1], comma-separated (single point;
    /// --grid overrides with a shared fraction per row).
    #[arg(long, value_delimiter = ',')]
    beta: Vec<f64>,
    /// Row grid, e.g. "d=1..3,beta=0.1..1.0:0.1". Ranges are inclusive.
    #[arg(long)]
    grid: Option<String>,
    /// Block sizes used to evaluate the exact count columns.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Monte Carlo sample count for the alpha_mc column.
    #[arg(long, default_value_t = 100_000)]
    mc_samples: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
}

#[derive(Args)]
struct ExtremalArgs {
    #[arg(long)]
    d: usize,
    /// Number of color blocks.
    #[arg(long)]
    c: usize,
    /// Bodies per block.
    #[arg(long)]
    m: usize,
    /// Per-block fractions as rationals ("2/5" or "0.4"), comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    beta_prime: Vec<String>,
    /// Signature for the tightness report (default: all ones).
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
}

#[derive(Args)]
struct NerveArgs {
    /// Family JSON: {"d":D,"blocks":[[{"kind":...},...],...]}.
    #[arg(long)]
    family: PathBuf,
    /// Abort if a live layer holds faces larger than this.
    #[arg(long, default_value_t = 32)]
    max_face_size: usize,
    /// Disable the shortcut that infers faces beyond d+1 bodies without
    /// solving feasibility programs.
    #[arg(long)]
    no_helly_shortcut: bool,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    /// Arithmetic: exact rationals or floating point.
    #[arg(long, default_value = "exact")]
    mode: String,
}

#[derive(Args)]
struct CampaignArgs {
    /// Campaign config JSON; inline flags below override nothing when
    /// this is given.
    #[arg(long)]
    config: Option<PathBuf>,
    /// enumerate | random.
    #[arg(long)]
    mode: Option<String>,
    /// d values to sweep, comma-separated.
    #[arg(long, value_delimiter = ',')]
    d_values: Vec<usize>,
    /// Enumerate mode: largest vertex count (<= 6).
    #[arg(long, default_value_t = 5)]
    max_vertices: usize,
    /// Enumerate mode: number of color blocks.
    #[arg(long, default_value_t = 2)]
    colors: usize,
    /// Random mode: block sizes, comma-separated.
    #[arg(long, value_delimiter = ',')]
    n_per_color: Vec<usize>,
    /// Random mode: certified instances to accumulate.
    #[arg(long, default_value_t = 100)]
    instances: usize,
    /// Random mode: search-node budget per instance.
    #[arg(long, default_value_t = 200_000)]
    budget: u64,
    /// Random mode: run a full certificate on every Nth instance (0 = off).
    #[arg(long, default_value_t = 0)]
    certificate_sample: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        // Ignore failure: the pool may already be initialized in tests.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Collapse(args) => cmd_collapse(cli, args),
        Cmd::Bounds { cmd } => match cmd {
            BoundsCmd::Table(args) => cmd_table(cli, args),
            BoundsCmd::Verify(args) => cmd_verify(cli, args),
        },
        Cmd::Extremal(args) => cmd_extremal(cli, args),
        Cmd::Nerve(args) => cmd_nerve(cli, args),
        Cmd::Certify(args) => cmd_certify(cli, args),
        Cmd::Campaign(args) => cmd_campaign(cli, args),
    }
}

fn load_complex(path: &Path) -> Result<ColoredComplex> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading complex from {}", path.display()))?;
    let cx: ColoredComplex =
        serde_json::from_str(&text).context("parsing complex JSON")?;
    Ok(cx)
}

/// Write `content` to `--out` if given, else to stdout.
fn emit(cli: &Cli, content: &str) -> Result<()> {
    let mut owned;
    let text = if content.ends_with('\n') {
        content
    } else {
        owned = String::with_capacity(content.len() + 1);
        owned.push_str(content);
        owned.push('\n');
        &owned
    };
    match &cli.out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing output to {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_report<T: serde::Serialize>(cli: &Cli, report: &T) -> Result<()> {
    emit(cli, &serde_json::to_string_pretty(report)?)
}

fn parse_signature(k: &[usize]) -> ColorVector {
    ColorVector(k.to_vec())
}

fn cmd_collapse(cli: &Cli, args: &CollapseArgs) -> Result<u8> {
    let cx = load_complex(&args.complex)?;
    let outcome = if args.special {
        find_special_collapse(&cx, args.d, args.budget)
    } else {
        find_collapse(&cx, args.d, args.budget)
    };
    match outcome {
        CollapseOutcome::Collapsible(seq) => {
            emit_report(cli, &seq)?;
            Ok(0)
        }
        CollapseOutcome::NotCollapsible => {
            emit(cli, r#"{"result":"not_collapsible"}"#)?;
            Ok(0)
        }
        CollapseOutcome::BudgetExhausted { nodes } => {
            emit(
                cli,
                &format!(r#"{{"result":"budget_exhausted","nodes":{nodes}}}"#),
            )?;
            Ok(EXIT_BUDGET)
        }
    }
}

/// One (d, beta) row of the threshold table.
struct GridRow {
    d: usize,
    beta: Vec<f64>,
}

fn parse_grid(spec: &str, k_len: usize) -> Result<Vec<GridRow>> {
    let mut d_values = Vec::new();
    let mut beta_values = Vec::new();
    for clause in spec.split(',') {
        let (key, range) = clause
            .split_once('=')
            .with_context(|| format!("grid clause `{clause}` needs key=range"))?;
        match key.trim() {
            "d" => {
                let (lo, hi) = range
                    .split_once("..")
                    .with_context(|| format!("d range `{range}` needs lo..hi"))?;
                let lo: usize = lo.trim().parse()?;
                let hi: usize = hi.trim().parse()?;
                d_values = (lo..=hi).collect();
            }
            "beta" => {
                let (span, step) = range
                    .split_once(':')
                    .with_context(|| format!("beta range `{range}` needs lo..hi:step"))?;
                let (lo, hi) = span
                    .split_once("..")
                    .with_context(|| format!("beta span `{span}` needs lo..hi"))?;
                let lo: f64 = lo.trim().parse()?;
                let hi: f64 = hi.trim().parse()?;
                let step: f64 = step.trim().parse()?;
                if step <= 0.0 {
                    bail!("beta step must be positive");
                }
                let mut b = lo;
                while b <= hi + 1e-9 {
                    beta_values.push(b.min(1.0));
                    b += step;
                }
            }
            other => bail!("unknown grid key `{other}` (expected d or beta)"),
        }
    }
    if d_values.is_empty() {
        bail!("grid must set d=lo..hi");
    }
    if beta_values.is_empty() {
        bail!("grid must set beta=lo..hi:step");
    }
    let mut rows = Vec::new();
    for &d in &d_values {
        for &b in &beta_values {
            rows.push(GridRow {
                d,
                beta: vec![b; k_len],
            });
        }
    }
    Ok(rows)
}

fn cmd_table(cli: &Cli, args: &TableArgs) -> Result<u8> {
    let k = parse_signature(&args.k);
    let rows = match &args.grid {
        Some(spec) => parse_grid(spec, k.len())?,
        None => {
            if args.beta.len() != k.len() {
                bail!(
                    "--beta needs {} comma-separated values (one per color)",
                    k.len()
                );
            }
            vec![GridRow {
                d: args.d,
                beta: args.beta.clone(),
            }]
        }
    };
    // Exact columns are evaluated on concrete blocks; default to blocks of
    // 1000 so the finite density sits close to its limit.
    let n: Vec<usize> = if args.n.is_empty() {
        vec![1000; k.len()]
    } else if args.n.len() == k.len() {
        args.n.clone()
    } else {
        bail!("--n needs {} comma-separated values", k.len());
    };
    let mut out = String::from("n,d,r,k,beta,p,density,alpha_closed,alpha_mc,stderr\n");
    let mut seed_offset = 0u64;
    for row in &rows {
        let beta = BetaVector::new(row.beta.clone())?;
        let r: Vec<usize> = n
            .iter()
            .zip(row.beta.iter())
            .map(|(&n_i, &b)| ((n_i as f64) * b).floor() as usize)
            .collect();
        let params = BoundParams::new(
            ColorVector(n.clone()),
            row.d,
            ColorVector(r.clone()),
        )?;
        let p = bounds::admissible_count(&params, &k);
        let density = bounds::admissible_density(&params, &k);
        let alpha = alpha_threshold(&k, row.d, &beta);
        let mc = alpha_monte_carlo(&k, row.d, &beta, args.mc_samples, cli.seed + seed_offset);
        seed_offset += 1;
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6}\n",
            join(&n),
            row.d,
            join(&r),
            join(&k.0),
            format_beta(&row.beta),
            p,
            density,
            alpha,
            mc.estimate,
            mc.std_error
        ));
    }
    emit(cli, &out)?;
    Ok(0)
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn format_beta(beta: &[f64]) -> String {
    beta.iter()
        .map(|b| format!("{b:.4}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<u8> {
    let cx = load_complex(&args.complex)?;
    let k = parse_signature(&args.k);
    if k.len() != cx.c() {
        bail!("--k needs {} entries (one per color block)", cx.c());
    }
    let verdict = bounds::verify_face_bound(&cx, args.d, &k);
    emit_report(cli, &verdict)?;
    Ok(if verdict.holds { 0 } else { EXIT_VIOLATION })
}

fn cmd_extremal(cli: &Cli, args: &ExtremalArgs) -> Result<u8> {
    let beta_prime: Vec<Rational> = args
        .beta_prime
        .iter()
        .map(|s| parse_rational(s).with_context(|| format!("parsing fraction `{s}`")))
        .collect::<Result<_>>()?;
    let spec = ExtremalSpec::new(args.c, args.d, args.m, beta_prime)?;
    let built = build_extremal(&spec)?;
    let k = if args.k.is_empty() {
        ColorVector(vec![1; args.c])
    } else {
        parse_signature(&args.k)
    };
    let tightness = check_tightness(&spec, &k)?;
    let payload = serde_json::json!({
        "complex": built.complex,
        "tightness": tightness,
    });
    emit(cli, &serde_json::to_string_pretty(&payload)?)?;
    Ok(if tightness.tight { 0 } else { EXIT_VIOLATION })
}

fn cmd_nerve(cli: &Cli, args: &NerveArgs) -> Result<u8> {
    let text = fs::read_to_string(&args.family)
        .with_context(|| format!("reading family from {}", args.family.display()))?;
    let family: GeometricFamily =
        serde_json::from_str(&text).context("parsing family JSON")?;
    match nerve(&family, args.max_face_size, !args.no_helly_shortcut) {
        Ok(cx) => {
            emit_report(cli, &cx)?;
            Ok(0)
        }
        Err(GeometryError::CapExceeded { size, cap }) => {
            emit(
                cli,
                &format!(r#"{{"result":"cap_exceeded","size":{size},"cap":{cap}}}"#),
            )?;
            Ok(EXIT_BUDGET)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_certify(cli: &Cli, args: &CertifyArgs) -> Result<u8> {
    let cx = load_complex(&args.complex)?;
    let k = parse_signature(&args.k);
    if k.len() != cx.c() {
        bail!("--k needs {} entries (one per color block)", cx.c());
    }
    let mode = match args.mode.as_str() {
        "exact" => ArithmeticMode::Exact,
        "float" => ArithmeticMode::Float,
        other => bail!("--mode must be exact or float, got `{other}`"),
    };
    let report = intersection_certificate(&cx, args.d, &k, mode, cli.seed)?;
    emit_report(cli, &report)?;
    // The kernel dimension bound is unconditional; a failure means the
    // arithmetic itself is broken.
    Ok(if report.kernel_bound_holds == Some(false) {
        EXIT_VIOLATION
    } else {
        0
    })
}

fn cmd_campaign(cli: &Cli, args: &CampaignArgs) -> Result<u8> {
    let cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config from {}", path.display()))?;
            serde_json::from_str(&text).context("parsing campaign config")?
        }
        None => {
            let mode = match args.mode.as_deref() {
                Some("enumerate") | None => CampaignMode::Enumerate,
                Some("random") => CampaignMode::Random,
                Some(other) => bail!("--mode must be enumerate or random, got `{other}`"),
            };
            let d_values = if args.d_values.is_empty() {
                vec![1]
            } else {
                args.d_values.clone()
            };
            let mut cfg = match mode {
                CampaignMode::Enumerate => {
                    CampaignConfig::enumerate(args.max_vertices, args.colors, d_values)
                }
                CampaignMode::Random => {
                    if args.n_per_color.is_empty() {
                        bail!("random mode needs --n-per-color");
                    }
                    CampaignConfig::random(
                        args.n_per_color.clone(),
                        d_values,
                        args.instances,
                        cli.seed,
                    )
                }
            };
            cfg.seed = cli.seed;
            cfg.collapse_budget = args.budget;
            cfg.certificate_sample = args.certificate_sample;
            cfg
        }
    };
    let report = run_campaign(&cfg)?;
    emit_report(cli, &report)?;
    // A JSON report on stdout/--out plus a one-line CSV summary next to a
    // file output for spreadsheet pipelines.
    if let Some(path) = &cli.out {
        let csv_path = path.with_extension("csv");
        fs::write(&csv_path, campaign_summary_csv(&report))
            .with_context(|| format!("writing summary to {}", csv_path.display()))?;
    }
    if !report.violations.is_empty() {
        return Ok(EXIT_VIOLATION);
    }
    if report.shortfall > 0 {
        return Ok(EXIT_BUDGET);
    }
    Ok(0)
}

fn campaign_summary_csv(report: &CampaignReport) -> String {
    format!(
        "examined,collapsible,bound_checks,helly_checks,tight,violations,discarded_not_collapsible,discarded_budget,shortfall,elapsed_ms\n{},{},{},{},{},{},{},{},{},{}\n",
        report.complexes_examined,
        report.collapsible_instances,
        report.bound_checks,
        report.helly_checks,
        report.tight_cases,
        report.violations.len(),
        report.discarded_not_collapsible,
        report.discarded_budget,
        report.shortfall,
        report.elapsed_ms
    )
}
