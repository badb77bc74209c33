//! `perspec`: command-line front end for the verification suites.
//!
//! Exit codes: 0 when no check failed (skips allowed), 1 when any check
//! failed, 2 on usage/configuration errors or malformed witness files.

mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use perspec_core::funclib::ScalarFn;
use perspec_core::report::{
    CheckOutcome, CheckStatus, RegionVerdict, ReportMeta, SuiteReport, ToleranceInfo, Witness,
};
use perspec_core::suite::{
    case_grid, checks_in_suite, find_check, lambda_region_scan, replay_witness, run_check,
    SuiteConfig, REGISTRY,
};

#[derive(Parser)]
#[command(name = "perspec", version, about = "Randomized verification of operator-perspective inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite or a single check and report pass/fail per check.
    Run(RunArgs),
    /// Scan the exponent region of one function and map where the
    /// norm-lift inequality survives.
    Scan(ScanArgs),
    /// Re-execute a stored witness file and print both sides.
    Replay(ReplayArgs),
    /// List every registered check with its group and case grid.
    List,
}

#[derive(Args)]
struct CommonArgs {
    /// Randomized trials per (function, exponent) case.
    #[arg(long)]
    trials: Option<u64>,
    /// Largest matrix dimension drawn.
    #[arg(long)]
    dim_max: Option<usize>,
    /// Largest condition number targeted by the generators.
    #[arg(long)]
    cond_max: Option<f64>,
    /// Master seed; equal seeds give byte-identical reports.
    #[arg(long)]
    seed: Option<u64>,
    /// Base violation tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Write a JSON report to this path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write static SVG plots into this directory.
    #[arg(long)]
    plot_dir: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Suite to run: core, means, perspectives, majorization,
    /// lie-trotter, singular, or all.
    #[arg(long, conflicts_with = "check")]
    suite: Option<String>,
    /// Run a single check by id (see `perspec list`).
    #[arg(long)]
    check: Option<String>,
    /// Replace every check's function grid with this descriptor,
    /// e.g. "pow(0.5)" or "tpow(2,warith(0.5))".
    #[arg(long = "fn", value_name = "DESCRIPTOR")]
    func: Option<String>,
    /// Restrict exponents: a single real or a range "a:b:step".
    #[arg(long, value_name = "P")]
    p: Option<String>,
    /// Additionally write a CSV report (checkId,status,maxRelViolation).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Function descriptor to scan, e.g. "pow(3)".
    #[arg(long = "fn", value_name = "DESCRIPTOR")]
    func: String,
    /// Exponent grid: a single real or a range "a:b:step".
    #[arg(long, value_name = "P")]
    p: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ReplayArgs {
    /// Path to a witness JSON file extracted from a report.
    witness: PathBuf,
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Replay(args) => cmd_replay(args),
        Command::List => cmd_list(),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Caps worker threads via PERSPEC_THREADS; defaults to the hardware
/// concurrency rayon picks on its own.
fn init_threads() {
    if let Ok(v) = std::env::var("PERSPEC_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

/// Parses "--p" values: either one real or an inclusive "a:b:step"
/// range.
fn parse_p_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let grid = match parts.as_slice() {
        [one] => vec![one
            .trim()
            .parse::<f64>()
            .with_context(|| format!("invalid exponent '{one}'"))?],
        [a, b, step] => {
            let (a, b, step) = (
                a.trim().parse::<f64>().context("invalid range start")?,
                b.trim().parse::<f64>().context("invalid range end")?,
                step.trim().parse::<f64>().context("invalid range step")?,
            );
            if step <= 0.0 || !step.is_finite() || b < a {
                bail!("range must satisfy start <= end and step > 0, got '{text}'");
            }
            let count = ((b - a) / step).round() as usize;
            let mut grid: Vec<f64> = (0..=count)
                .map(|k| a + k as f64 * step)
                .filter(|&p| p <= b + 1e-12 * step)
                .collect();
            if grid.is_empty() {
                grid.push(a);
            }
            grid
        }
        _ => bail!("exponent must be a real or a range 'a:b:step', got '{text}'"),
    };
    if grid.iter().any(|p| !p.is_finite()) {
        bail!("exponent grid contains a non-finite value: '{text}'");
    }
    Ok(grid)
}

fn build_config(
    common: &CommonArgs,
    func: Option<&str>,
    p: Option<&str>,
) -> Result<SuiteConfig> {
    let mut cfg = SuiteConfig::default();
    if let Some(t) = common.trials {
        cfg.trials = t;
    }
    if let Some(d) = common.dim_max {
        cfg.dim_max = d;
    }
    if let Some(c) = common.cond_max {
        cfg.cond_max = c;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.tol {
        cfg.tol = t;
    }
    if let Some(text) = func {
        cfg.fn_override =
            Some(ScalarFn::parse(text).with_context(|| format!("invalid --fn '{text}'"))?);
    }
    if let Some(text) = p {
        cfg.p_override = Some(parse_p_grid(text)?);
    }
    Ok(cfg)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn status_word(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Skipped => "skip",
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let cfg = build_config(&args.common, args.func.as_deref(), args.p.as_deref())?;
    let checks = match (&args.check, &args.suite) {
        (Some(id), _) => vec![find_check(id)?],
        (None, suite) => checks_in_suite(suite.as_deref().unwrap_or("all"))?,
    };

    let mut outcomes: Vec<CheckOutcome> = Vec::with_capacity(checks.len());
    for def in &checks {
        let outcome = run_check(def.id, &cfg)?;
        println!(
            "{:14} {:4} trials={:<6} worst={:+.3e} tol={:.1e}{}",
            outcome.check_id,
            status_word(outcome.status),
            outcome.trials,
            outcome.max_rel_violation,
            outcome.tolerance_used,
            outcome
                .skipped_reason
                .as_deref()
                .map(|r| format!("  [{r}]"))
                .unwrap_or_default()
        );
        outcomes.push(outcome);
    }

    let report = SuiteReport {
        meta: ReportMeta {
            seed: cfg.seed,
            tolerances: ToleranceInfo::default(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        outcomes,
    };

    let fails = report
        .outcomes
        .iter()
        .filter(|o| o.status == CheckStatus::Fail)
        .count();
    let passes = report
        .outcomes
        .iter()
        .filter(|o| o.status == CheckStatus::Pass)
        .count();
    let skips = report.outcomes.len() - fails - passes;
    println!(
        "summary: {} checks, {passes} passed, {fails} failed, {skips} skipped (seed {})",
        report.outcomes.len(),
        cfg.seed
    );

    if let Some(path) = &args.common.report {
        write_file(path, &serde_json::to_string_pretty(&report)?)?;
        println!("report: {}", path.display());
    }
    if let Some(path) = &args.csv {
        write_file(path, &report.to_csv())?;
        println!("csv: {}", path.display());
    }
    if let Some(dir) = &args.common.plot_dir {
        emit_run_plots(dir, &report, &cfg)?;
        println!("plots: {}", dir.display());
    }

    Ok(if report.has_failure() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

/// Sanitizes a check id or descriptor into a file-name stem.
fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

fn emit_run_plots(dir: &Path, report: &SuiteReport, cfg: &SuiteConfig) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    // Overview: one bar per check with its worst signed violation.
    let rows: Vec<(String, f64)> = report
        .outcomes
        .iter()
        .map(|o| (o.check_id.clone(), o.max_rel_violation))
        .collect();
    write_file(
        &dir.join("margins.svg"),
        &plot::margin_bars("worst signed relative violation per check", &rows),
    )?;

    for outcome in &report.outcomes {
        // Margin-vs-exponent curve when the check's grid spans several
        // exponents: re-run the check restricted to each exponent.
        let mut ps: Vec<f64> = case_grid(&outcome.check_id, cfg)?
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        ps.sort_by(f64::total_cmp);
        ps.dedup();
        if ps.len() >= 2 {
            let mut points = Vec::with_capacity(ps.len());
            for &p in &ps {
                let sub = SuiteConfig {
                    p_override: Some(vec![p]),
                    ..cfg.clone()
                };
                let o = run_check(&outcome.check_id, &sub)?;
                points.push((p, o.max_rel_violation));
            }
            write_file(
                &dir.join(format!("margin_{}.svg", file_stem(&outcome.check_id))),
                &plot::margin_curve(
                    &format!("{}: worst margin vs exponent", outcome.check_id),
                    &points,
                ),
            )?;
        }

        // Eigenvalue-product staircase for failing majorization checks:
        // prefix log-eigenvalue sums of the witness inputs.
        let group = find_check(&outcome.check_id)?.group;
        if group == "majorization" {
            if let Some(w) = &outcome.witness {
                if w.matrices.len() >= 2 {
                    let eigs = |m: &perspec_core::SymMatrix| -> Result<Vec<f64>> {
                        let mut v = m.eigh()?.eigenvalues.clone();
                        v.sort_by(|a, b| b.total_cmp(a));
                        Ok(v)
                    };
                    write_file(
                        &dir.join(format!("staircase_{}.svg", file_stem(&outcome.check_id))),
                        &plot::eigen_staircase(
                            &format!(
                                "{}: witness eigenvalue staircase (p={}, fn={})",
                                outcome.check_id, w.p, w.func
                            ),
                            &eigs(&w.matrices[0])?,
                            &eigs(&w.matrices[1])?,
                        ),
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_scan(args: ScanArgs) -> Result<ExitCode> {
    let cfg = build_config(&args.common, None, None)?;
    let f = ScalarFn::parse(&args.func)
        .with_context(|| format!("invalid --fn '{}'", args.func))?;
    let grid = parse_p_grid(&args.p)?;
    let map = lambda_region_scan(&f, &grid, &cfg)?;

    for entry in &map.entries {
        match &entry.verdict {
            RegionVerdict::Survived { trials } => println!(
                "p={:<8.4} survived  trials={trials:<5} worst={:+.3e}",
                entry.p, entry.worst_margin
            ),
            RegionVerdict::Violated { witness } => println!(
                "p={:<8.4} VIOLATED  violation={:+.3e} (witness trial {})",
                entry.p, witness.violation, witness.trial_index
            ),
        }
    }
    match map.survived_interval {
        Some((lo, hi)) => println!("survived interval: [{lo}, {hi}]"),
        None => println!("survived interval: none"),
    }

    if let Some(path) = &args.common.report {
        write_file(path, &serde_json::to_string_pretty(&map)?)?;
        println!("report: {}", path.display());
    }
    if let Some(dir) = &args.common.plot_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let points: Vec<(f64, f64)> =
            map.entries.iter().map(|e| (e.p, e.worst_margin)).collect();
        let path = dir.join(format!("scan_{}.svg", file_stem(&map.func)));
        write_file(
            &path,
            &plot::margin_curve(&format!("{}: worst margin vs exponent", map.func), &points),
        )?;
        println!("plot: {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_replay(args: ReplayArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.witness)
        .with_context(|| format!("reading {}", args.witness.display()))?;
    let witness: Witness =
        serde_json::from_str(&text).context("malformed witness file")?;
    let replayed = replay_witness(&witness)?;

    // The violation is the signed relative excess of the dominated side:
    // lhs <= rhs is broken by the factor 1 + violation.
    println!("check:     {}", witness.check_id);
    println!("function:  {}", witness.func);
    println!("exponent:  p = {}", witness.p);
    if !witness.scalars.is_empty() {
        let scalars: Vec<String> = witness
            .scalars
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        println!("scalars:   {}", scalars.join(", "));
    }
    for (i, m) in witness.matrices.iter().enumerate() {
        println!("matrix {i} ({0}x{0}):", m.dim());
        for r in 0..m.dim() {
            let row: Vec<String> = (0..m.dim()).map(|c| format!("{:+.8e}", m.get(r, c))).collect();
            println!("  [{}]", row.join(", "));
        }
    }
    println!("sides:     lhs = (1 {} {:.6e}) * rhs", if replayed >= 0.0 { "+" } else { "-" }, replayed.abs());
    println!("stored:    violation = {:+.9e}", witness.violation);
    println!("replayed:  violation = {replayed:+.9e}");

    let tol = 1e-9 * (1.0 + witness.violation.abs());
    if (replayed - witness.violation).abs() <= tol {
        println!("replay reproduces the stored violation");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("replay DOES NOT match the stored violation");
        Ok(ExitCode::from(1))
    }
}

fn cmd_list() -> Result<ExitCode> {
    let cfg = SuiteConfig::default();
    for def in REGISTRY {
        // Summarize the case grid as its functions and exponent span.
        let grid = case_grid(def.id, &cfg)?;
        let mut funcs: Vec<String> = grid.iter().map(|(f, _)| f.clone()).collect();
        funcs.sort();
        funcs.dedup();
        let mut ps: Vec<f64> = grid.iter().map(|&(_, p)| p).collect();
        ps.sort_by(f64::total_cmp);
        ps.dedup();
        let domain = if ps.is_empty() {
            "p: (none)".to_string()
        } else if ps.len() == 1 {
            format!("p: {}", ps[0])
        } else {
            format!("p: {} values in [{}, {}]", ps.len(), ps[0], ps[ps.len() - 1])
        };
        println!("{:14} [{:13}] {}", def.id, def.group, def.description);
        println!("{:14} {:15} {domain}; fn: {}", "", "", funcs.join(", "));
    }
    Ok(ExitCode::SUCCESS)
}
