use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dimwit::classical::{enumerate_max, ENUMERATION_LIMIT};
use dimwit::quantum::fourier_ensemble;
use dimwit::seesaw::{optimize, squared_overlaps, verify_table2_with, SeesawConfig, TABLE2_ROWS};
use dimwit::simulate::born_table;
use dimwit::witnesses::{bound_report, certify_dimension, classical_bound, evaluate, quantum_bound};
use dimwit::{PairMeasurementSet, WitnessKind};
use serde_json::json;

use crate::files::{read_json, to_json, write_json, EnsembleFile, TableFile};
use crate::format::{exact_classical_bound, exact_quantum_bound, fixed_or_int, num};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "dimwit", version, about = "Prepare-and-measure dimension witnesses")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum and classical bounds of a witness.
    Bounds(BoundsArgs),
    /// Write the Fourier ensemble for (N, d).
    States(StatesArgs),
    /// Evaluate a witness on a table or ensemble and certify the dimension.
    Evaluate(EvaluateArgs),
    /// See-saw maximization of the quadratic or linear witness.
    Seesaw(SeesawArgs),
    /// Reproduce the bound table for N = 7 or the linear tightness table.
    Reproduce(ReproduceArgs),
    /// Exhaustive classical maximization over deterministic strategies.
    Classical(ClassicalArgs),
}

fn parse_kind(s: &str) -> Result<WitnessKind, String> {
    s.parse().map_err(|e: dimwit::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_parser = parse_kind)]
    pub witness: WitnessKind,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
}

#[derive(Debug, Args)]
pub struct StatesArgs {
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, value_parser = parse_kind)]
    pub witness: WitnessKind,
    #[arg(long, conflicts_with = "ensemble", required_unless_present = "ensemble")]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    /// Use the optimal discriminating measurement for every pair.
    #[arg(long, requires = "ensemble")]
    pub helstrom: bool,
}

#[derive(Debug, Args)]
pub struct SeesawArgs {
    #[arg(long, value_parser = parse_kind)]
    pub witness: WitnessKind,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = SeesawConfig::DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = SeesawConfig::DEFAULT_SEED)]
    pub seed: u64,
    /// Stop a restart once a sweep improves the objective by less than this.
    #[arg(long, default_value_t = SeesawConfig::DEFAULT_IMPROVEMENT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = SeesawConfig::DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    /// Dump the best ensemble and its pair effects here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub table: u8,
    #[arg(long, default_value_t = 7)]
    pub nmax: usize,
    #[arg(long, default_value_t = SeesawConfig::DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = SeesawConfig::DEFAULT_SEED)]
    pub seed: u64,
    /// Largest gap to the bound still counted as attained.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[arg(long, value_parser = parse_kind)]
    pub witness: WitnessKind,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Bounds(a) => bounds(a, cli.json),
        Command::States(a) => states(a),
        Command::Evaluate(a) => evaluate_cmd(a, cli.json),
        Command::Seesaw(a) => seesaw(a, cli.json),
        Command::Reproduce(a) => reproduce(a, cli.json),
        Command::Classical(a) => classical(a, cli.json),
    }
}

fn pretty(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json value");
    s.push('\n');
    s
}

pub fn bounds(a: &BoundsArgs, as_json: bool) -> Result<String, CliError> {
    let r = bound_report(a.witness, a.n, a.d)?;
    let q_exact = exact_quantum_bound(a.witness, a.n, a.d);
    let c_exact = r.classical_bound.map(|c| exact_classical_bound(a.witness, a.n, a.d, c));
    if as_json {
        return Ok(pretty(json!({
            "witness": a.witness.name(),
            "N": a.n,
            "d": a.d,
            "quantum_bound": r.quantum_bound,
            "quantum_bound_exact": q_exact,
            "classical_bound": r.classical_bound,
            "classical_bound_exact_form": c_exact,
            "classical_bound_exact": r.classical_bound_exact,
        })));
    }
    let mut out = String::new();
    writeln!(out, "witness: {}  N={}  d={}", a.witness, a.n, a.d).unwrap();
    writeln!(out, "Q={:.6}  (exact {q_exact})", r.quantum_bound).unwrap();
    match (r.classical_bound, c_exact) {
        (Some(c), Some(exact)) => writeln!(out, "C={exact}  ({c:.6})").unwrap(),
        _ => writeln!(out, "C=requires enumeration (run `dimwit classical`)").unwrap(),
    }
    Ok(out)
}

pub fn states(a: &StatesArgs) -> Result<String, CliError> {
    let e = fourier_ensemble(a.n, a.d)?;
    let file = EnsembleFile::from_ensemble(&e);
    match &a.out {
        Some(path) => {
            write_json(path, &file)?;
            Ok(format!(
                "wrote {} states in dimension {} to {}\n",
                a.n,
                a.d,
                path.display()
            ))
        }
        None => Ok(to_json(&file) + "\n"),
    }
}

pub fn evaluate_cmd(a: &EvaluateArgs, as_json: bool) -> Result<String, CliError> {
    let (n, table) = match (&a.table, &a.ensemble) {
        (Some(path), None) => {
            let file: TableFile = read_json(path)?;
            let declared = file.kind()?;
            if declared != a.witness {
                return Err(CliError::usage(format!(
                    "table is declared for the {declared} witness, not {}",
                    a.witness
                )));
            }
            (file.n, file.to_table()?)
        }
        (None, Some(path)) => {
            if a.witness == WitnessKind::Guessing {
                return Err(CliError::usage("the guessing witness is evaluated from --table files"));
            }
            let file: EnsembleFile = read_json(path)?;
            let e = file.to_ensemble()?;
            let ms = if a.helstrom {
                PairMeasurementSet::helstrom(&e)?
            } else {
                file.to_measurements(e.len())?.ok_or_else(|| {
                    CliError::usage("ensemble file has no \"effects\"; pass --helstrom to derive them")
                })?
            };
            (e.len(), born_table(&e, &ms)?)
        }
        _ => return Err(CliError::usage("pass exactly one of --table or --ensemble")),
    };
    if n < 2 {
        return Err(CliError::usage("witnesses need at least two preparations"));
    }
    let value = evaluate(a.witness, &table)?;
    let cert = certify_dimension(a.witness, n, value)?;
    if as_json {
        return Ok(pretty(json!({
            "witness": a.witness.name(),
            "N": n,
            "value": value,
            "min_quantum_d": cert.min_quantum_d,
            "min_classical_d": cert.min_classical_d,
        })));
    }
    let mut out = String::new();
    writeln!(out, "witness: {}  N={n}", a.witness).unwrap();
    writeln!(out, "value: {value:.6}").unwrap();
    writeln!(out, "min quantum d: {}", cert.min_quantum_d).unwrap();
    match cert.min_classical_d {
        Some(d) => writeln!(out, "min classical d: {d}").unwrap(),
        None => writeln!(
            out,
            "min classical d: unavailable (enumeration limit {ENUMERATION_LIMIT})"
        )
        .unwrap(),
    }
    Ok(out)
}

pub fn seesaw(a: &SeesawArgs, as_json: bool) -> Result<String, CliError> {
    let cfg = SeesawConfig {
        witness: a.witness,
        n: a.n,
        d: a.d,
        restarts: a.restarts,
        max_iters: a.max_iters,
        improvement_tol: a.tol,
        seed: a.seed,
    };
    let r = optimize(&cfg)?;
    let bound = quantum_bound(a.witness, a.n, a.d)?;
    let gap = bound - r.best_value;
    if let Some(path) = &a.out {
        write_json(
            path,
            &EnsembleFile::from_ensemble(&r.ensemble).with_effects(&r.measurements),
        )?;
    }
    // report-only probe at N = d²
    let sic = if a.n == a.d * a.d {
        let overlaps = squared_overlaps(&r.ensemble)?;
        let target = 1.0 / (a.d + 1) as f64;
        let mean = overlaps.iter().sum::<f64>() / overlaps.len() as f64;
        let dev = overlaps.iter().map(|o| (o - target).abs()).fold(0.0, f64::max);
        Some((target, mean, dev))
    } else {
        None
    };

    if as_json {
        return Ok(pretty(json!({
            "witness": a.witness.name(),
            "N": a.n,
            "d": a.d,
            "seed": a.seed,
            "restarts": a.restarts,
            "best_value": r.best_value,
            "quantum_bound": bound,
            "gap": gap,
            "best_restart": r.best_restart,
            "iterations_used": r.iterations_used,
            "restart_values": r.restart_values,
            "restart_iterations": r.restart_iterations,
            "sic_probe": sic.map(|(t, m, d)| json!({"target": t, "mean_overlap_sq": m, "max_deviation": d})),
        })));
    }
    let mut out = String::new();
    writeln!(
        out,
        "witness: {}  N={}  d={}  seed={}  restarts={}",
        a.witness, a.n, a.d, a.seed, a.restarts
    )
    .unwrap();
    writeln!(out, "best: {:.6}", r.best_value).unwrap();
    writeln!(out, "Q_d: {bound:.6}").unwrap();
    writeln!(out, "gap: {gap:.3e}").unwrap();
    writeln!(out, "best restart: {} ({} sweeps)", r.best_restart, r.iterations_used).unwrap();
    let values: Vec<String> = r.restart_values.iter().map(|v| format!("{v:?}")).collect();
    writeln!(out, "restart values: [{}]", values.join(", ")).unwrap();
    if let Some((target, mean, dev)) = sic {
        writeln!(
            out,
            "SIC probe: mean |<psi_x|psi_x'>|^2 = {mean:.6} (SIC value {target:.6}, max deviation {dev:.2e})"
        )
        .unwrap();
    }
    if let Some(path) = &a.out {
        writeln!(out, "dumped ensemble and effects to {}", path.display()).unwrap();
    }
    Ok(out)
}

pub fn reproduce(a: &ReproduceArgs, as_json: bool) -> Result<String, CliError> {
    match a.table {
        1 => reproduce_table1(as_json),
        _ => reproduce_table2(a, as_json),
    }
}

const TABLE1_N: usize = 7;

fn reproduce_table1(as_json: bool) -> Result<String, CliError> {
    let dims: Vec<usize> = (2..=TABLE1_N).collect();
    let mut cs = Vec::new();
    let mut qs = Vec::new();
    for &d in &dims {
        cs.push(classical_bound(WitnessKind::Quadratic, TABLE1_N, d)?.expect("closed form"));
        qs.push(quantum_bound(WitnessKind::Quadratic, TABLE1_N, d)?);
    }
    if as_json {
        return Ok(pretty(json!({
            "witness": "quadratic",
            "N": TABLE1_N,
            "d": dims,
            "classical": cs,
            "quantum": qs,
        })));
    }
    let mut out = String::new();
    writeln!(
        out,
        "Quadratic witness W_7: tight classical (C_d) and quantum (Q_d) bounds"
    )
    .unwrap();
    let row = |label: &str, cells: Vec<String>| {
        let cells: Vec<String> = cells.into_iter().map(|c| format!("{c:>7}")).collect();
        format!("{label:<4}|{}\n", cells.join(""))
    };
    out.push_str(&row("d", dims.iter().map(|d| d.to_string()).collect()));
    out.push_str(&row("C_d", cs.iter().map(|c| num(*c)).collect()));
    out.push_str(&row("Q_d", qs.iter().map(|q| fixed_or_int(*q, 2)).collect()));
    Ok(out)
}

fn reproduce_table2(a: &ReproduceArgs, as_json: bool) -> Result<String, CliError> {
    let report = verify_table2_with(a.nmax, a.tol, a.restarts, a.seed)?;
    if as_json {
        let entries: Vec<_> = report
            .entries
            .iter()
            .map(|e| {
                json!({
                    "N": e.n, "d": e.d, "best_value": e.best_value, "bound": e.bound,
                    "ratio": e.ratio, "gap": e.gap, "attained": e.attained,
                })
            })
            .collect();
        return Ok(pretty(json!({
            "witness": "linear",
            "nmax": a.nmax,
            "tol": a.tol,
            "restarts": a.restarts,
            "seed": a.seed,
            "entries": entries,
        })));
    }
    let mut out = String::new();
    writeln!(
        out,
        "Linear witness V_N tightness (see-saw: restarts={}, seed={}, tol={:e})",
        a.restarts, a.seed, a.tol
    )
    .unwrap();
    writeln!(
        out,
        "{:>3} {:>3} {:>12} {:>12} {:>10}  status",
        "N", "d", "best", "Q_d", "gap"
    )
    .unwrap();
    for e in &report.entries {
        let status = if e.attained { "attained" } else { "not attained" };
        let note = if e.n >= 8 { " (report only)" } else { "" };
        writeln!(
            out,
            "{:>3} {:>3} {:>12.6} {:>12.6} {:>10.2e}  {status}{note}",
            e.n, e.d, e.best_value, e.bound, e.gap
        )
        .unwrap();
    }
    let listed: usize = TABLE2_ROWS
        .iter()
        .filter(|(n, _)| *n <= a.nmax)
        .map(|(_, ds)| ds.len())
        .sum();
    let attained = report.entries.iter().filter(|e| e.attained).count();
    writeln!(out, "{attained}/{listed} listed entries attained").unwrap();
    Ok(out)
}

pub fn classical(a: &ClassicalArgs, as_json: bool) -> Result<String, CliError> {
    let (value, strategy) = enumerate_max(a.witness, a.n, a.d)?;
    let closed = if a.n >= 2 && a.d >= 1 {
        classical_bound(a.witness, a.n, a.d)?
    } else {
        None
    };
    let verdict = match closed {
        Some(c) if c == value => "match",
        Some(_) => "MISMATCH",
        None => "no closed form",
    };
    let encoding: Vec<String> = strategy.encoding.iter().map(|s| s.to_string()).collect();
    let encoding = format!("({})", encoding.join(","));
    if as_json {
        return Ok(pretty(json!({
            "witness": a.witness.name(),
            "N": a.n,
            "d": a.d,
            "enumerated": value,
            "closed_form": closed,
            "verdict": verdict,
            "encoding": strategy.encoding,
        })));
    }
    let mut out = String::new();
    writeln!(out, "witness: {}  N={}  d={}", a.witness, a.n, a.d).unwrap();
    writeln!(out, "enumerated maximum: {}", num(value)).unwrap();
    match closed {
        Some(c) => writeln!(out, "closed form: {}", num(c)).unwrap(),
        None => writeln!(out, "closed form: none").unwrap(),
    }
    writeln!(out, "verdict: {verdict}").unwrap();
    writeln!(out, "optimal encoding: {encoding}").unwrap();
    Ok(out)
}
