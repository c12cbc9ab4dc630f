//! The four subcommands. Each returns the JSON documents it wrote so callers
//! and tests can inspect them without re-reading the files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use qevent_core::oracle::{oracle_report, report_distance};
use qevent_core::photon::time_bandwidth_report_with;
use qevent_core::scenarios::{clean_suite, oracle_corpus};
use qevent_core::{
    build_history_with, frequency_event_report, reference_commutator_residual, uncertainty_report, HistoryState,
    Tolerances,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{load, FiniteProblem, LoadedConfig, PhotonProblem, Problem, SweepParameter};
use crate::error::CliError;

pub const TOOL: &str = "qevent";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Relative slack allowed when checking that the sweep margin improves.
pub const SWEEP_SLACK: f64 = 0.10;
/// Oracle agreement required by `oracle-check` and `verify`.
pub const ORACLE_TOL: f64 = 1e-10;
/// Relative slack on the conditional bound in `verify`.
pub const VERIFY_SLACK: f64 = 0.02;
/// Clock size for the randomized suite in `verify`.
pub const VERIFY_CLOCK_DIM: usize = 512;

/// Output of one pipeline evaluation.
struct Evaluation {
    result: Value,
    diagnostics: Value,
    times: Vec<f64>,
    p: Vec<f64>,
    row: SweepRow,
}

#[derive(Debug, Clone, Copy)]
struct SweepRow {
    t_std: f64,
    e_std: f64,
    product: f64,
    margin: f64,
    constraint_residual: Option<f64>,
    commutator_residual: Option<f64>,
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

fn history(p: &FiniteProblem, tol: &Tolerances) -> Result<HistoryState, CliError> {
    build_history_with(&p.clock, &p.hs, &p.psi0, tol).map_err(|e| CliError::from_core("clock", e))
}

fn evaluate_finite(p: &FiniteProblem, tol: &Tolerances) -> Result<Evaluation, CliError> {
    let h = history(p, tol)?;
    let r = uncertainty_report(&h, &p.event, tol).map_err(|e| CliError::from_core("event.projector", e))?;
    let constraint = h.constraint_residual();
    let commutator = reference_commutator_residual(&p.clock).map_err(|e| CliError::from_core("clock", e))?;
    Ok(Evaluation {
        diagnostics: json!({
            "d": p.clock.d(),
            "dt": p.clock.dt(),
            "T_total": p.clock.total_time(),
            "energy_resolution": p.clock.energy_resolution(),
            "constraint_residual": constraint,
            "commutator_residual": commutator,
        }),
        times: p.clock.times().to_vec(),
        p: r.p_t_given_event.clone(),
        row: SweepRow {
            t_std: r.t_std,
            e_std: r.e_std,
            product: r.product_conditional,
            margin: r.margin_conditional,
            constraint_residual: Some(constraint),
            commutator_residual: Some(commutator),
        },
        result: to_value(&r),
    })
}

fn evaluate_photon(p: &PhotonProblem, tol: &Tolerances) -> Result<Evaluation, CliError> {
    let grid = p.phi.grid();
    let diagnostics = json!({
        "N": grid.len(),
        "d_omega": grid.d_omega(),
        "dt": grid.dt(),
        "time_window": grid.time_window(),
    });
    if let Some(ev) = &p.arrival {
        let r = time_bandwidth_report_with(&p.phi, ev, tol).map_err(|e| CliError::from_core("event.z0", e))?;
        Ok(Evaluation {
            diagnostics,
            times: r.times.clone(),
            p: r.p_t_given_event.clone(),
            row: SweepRow {
                t_std: r.t_std,
                e_std: r.e_std,
                product: r.product,
                margin: r.margin,
                constraint_residual: None,
                commutator_residual: None,
            },
            result: to_value(&r),
        })
    } else {
        let (omega0, t_total) = (p.omega0.unwrap_or_default(), p.t_total.unwrap_or_default());
        let r =
            frequency_event_report(&p.phi, omega0, t_total, tol).map_err(|e| CliError::from_core("event.omega0", e))?;
        Ok(Evaluation {
            diagnostics,
            times: r.times.clone(),
            p: r.p_t_given_event.clone(),
            row: SweepRow {
                t_std: r.t_std,
                e_std: r.e_std,
                product: r.product,
                margin: r.product - 0.5,
                constraint_residual: None,
                commutator_residual: None,
            },
            result: to_value(&r),
        })
    }
}

fn evaluate(problem: &Problem, tol: &Tolerances) -> Result<Evaluation, CliError> {
    match problem {
        Problem::Finite(p) => evaluate_finite(p, tol),
        Problem::Photon(p) => evaluate_photon(p, tol),
    }
}

fn unix_seconds() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Report envelope shared by every command. `generated_at` is the only
/// non-deterministic key.
fn envelope(cfg: &LoadedConfig, command: &str, body: Vec<(&str, Value)>) -> Value {
    let c = &cfg.config;
    let mut v = json!({
        "units": "hbar=1",
        "kind": c.kind,
        "name": c.name.clone().unwrap_or_else(|| cfg.stem.clone()),
        "command": command,
        "provenance": {
            "config_sha256": cfg.sha256,
            "tool": TOOL,
            "tool_version": VERSION,
            "tolerances": c.tolerances,
            "seed": c.seed,
        },
        "generated_at": unix_seconds(),
    });
    for (k, x) in body {
        v[k] = x;
    }
    v
}

fn write_json(path: &Path, v: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn prepare_out(out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))
}

fn distribution_csv(times: &[f64], p: &[f64]) -> String {
    let mut s = String::from("t,p\n");
    for (t, p) in times.iter().zip(p) {
        let _ = writeln!(s, "{t},{p}");
    }
    s
}

/// Files written by a command.
#[derive(Debug, Clone)]
pub struct Written {
    pub report: Value,
    pub paths: Vec<PathBuf>,
}

pub fn run(config_path: &Path, out: &Path) -> Result<Written, CliError> {
    let cfg = load(config_path)?;
    let problem = cfg.config.problem()?;
    let ev = evaluate(&problem, &cfg.config.tolerances)?;
    let report = envelope(&cfg, "run", vec![("result", ev.result), ("diagnostics", ev.diagnostics)]);

    prepare_out(out)?;
    let json_path = out.join(format!("{}.report.json", cfg.stem));
    let csv_path = out.join(format!("{}.distribution.csv", cfg.stem));
    write_json(&json_path, &report)?;
    write_text(&csv_path, &distribution_csv(&ev.times, &ev.p))?;
    Ok(Written { report, paths: vec![json_path, csv_path] })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Indices `i` where `margin[i]` falls below `margin[i-1]` by more than the slack.
fn margin_regressions(margins: &[f64]) -> Vec<usize> {
    margins.windows(2).enumerate().filter(|(_, w)| w[1] < w[0] - SWEEP_SLACK * w[0].abs()).map(|(i, _)| i + 1).collect()
}

pub fn sweep(config_path: &Path, out: &Path) -> Result<Written, CliError> {
    let cfg = load(config_path)?;
    let c = &cfg.config;
    let sw = c.sweep.as_ref().ok_or_else(|| CliError::Validation {
        field: "sweep".into(),
        message: "the sweep command needs a sweep block".into(),
    })?;
    if sw.values.is_empty() {
        return Err(CliError::Validation { field: "sweep.values".into(), message: "empty value list".into() });
    }
    // validate every point before any work starts
    let problems = sw.values.iter().map(|&v| c.problem_with(Some((sw.parameter, v)))).collect::<Result<Vec<_>, _>>()?;
    // points run in parallel; collect keeps the configured order
    let rows = problems.par_iter().map(|p| evaluate(p, &c.tolerances).map(|e| e.row)).collect::<Result<Vec<_>, _>>()?;

    let mut csv = String::from("parameter,t_std,E_std,product,margin,constraint_residual,commutator_residual\n");
    for (v, r) in sw.values.iter().zip(&rows) {
        let _ = writeln!(
            csv,
            "{v},{},{},{},{},{},{}",
            r.t_std,
            r.e_std,
            r.product,
            r.margin,
            fmt_opt(r.constraint_residual),
            fmt_opt(r.commutator_residual)
        );
    }
    let margins: Vec<f64> = rows.iter().map(|r| r.margin).collect();
    let regressions = margin_regressions(&margins);
    // successive |margin| ratios, for refinement-rate checks
    let error_ratios: Vec<Option<f64>> =
        margins.windows(2).map(|w| (w[1] != 0.0).then(|| w[0].abs() / w[1].abs())).collect();
    let parameter = match sw.parameter {
        SweepParameter::D => "d",
        SweepParameter::N => "N",
        SweepParameter::TTotal => "T_total",
    };
    let table: Vec<Value> = sw
        .values
        .iter()
        .zip(&rows)
        .map(|(v, r)| {
            json!({
                "parameter": v,
                "t_std": r.t_std,
                "E_std": r.e_std,
                "product": r.product,
                "margin": r.margin,
                "constraint_residual": r.constraint_residual,
                "commutator_residual": r.commutator_residual,
            })
        })
        .collect();
    let report = envelope(
        &cfg,
        "sweep",
        vec![(
            "sweep",
            json!({
                "parameter": parameter,
                "rows": table,
                "flags": {
                    "margin_slack": SWEEP_SLACK,
                    "margin_non_decreasing": regressions.is_empty(),
                    "margin_regressions": regressions,
                    "abs_margin_ratios": error_ratios,
                },
            }),
        )],
    );

    prepare_out(out)?;
    let json_path = out.join(format!("{}.sweep.json", cfg.stem));
    let csv_path = out.join(format!("{}.sweep.csv", cfg.stem));
    write_json(&json_path, &report)?;
    write_text(&csv_path, &csv)?;
    Ok(Written { report, paths: vec![json_path, csv_path] })
}

/// Dense Born-rule report for a small finite-dimensional scenario, with its
/// distance to the structured pipeline. Fails with a violation after writing
/// the report when the two disagree.
pub fn oracle_check(config_path: &Path, out: &Path) -> Result<Written, CliError> {
    let cfg = load(config_path)?;
    let tol = &cfg.config.tolerances;
    let p = match cfg.config.problem()? {
        Problem::Finite(p) => p,
        Problem::Photon(_) => {
            return Err(CliError::Validation {
                field: "kind".into(),
                message: "oracle-check supports finite_dim scenarios only".into(),
            })
        }
    };
    let h = history(&p, tol)?;
    let oracle = oracle_report(&h, &p.event, tol).map_err(|e| CliError::from_core("event.projector", e))?;
    let structured = uncertainty_report(&h, &p.event, tol).map_err(|e| CliError::from_core("event.projector", e))?;
    let distance = report_distance(&oracle, &structured);
    let agree = distance.is_some_and(|d| d <= ORACLE_TOL);
    let report = envelope(
        &cfg,
        "oracle-check",
        vec![
            ("result", to_value(&oracle)),
            ("comparison", json!({ "structured_distance": distance, "tolerance": ORACLE_TOL, "agree": agree })),
        ],
    );

    prepare_out(out)?;
    let json_path = out.join(format!("{}.oracle.json", cfg.stem));
    write_json(&json_path, &report)?;
    if !agree {
        return Err(CliError::Violation(format!(
            "structured and oracle reports differ (distance {distance:?}, tolerance {ORACLE_TOL:e})"
        )));
    }
    Ok(Written { report, paths: vec![json_path] })
}

/// Randomized property corpus: the conditional bound on boundary-clean
/// scenarios and oracle agreement on the small corpus. The summary's `ok`
/// key records whether every check passed.
pub fn verify(seed: u64, trials: usize) -> Result<Value, CliError> {
    let tol = Tolerances::default();
    let core = |e| CliError::from_core("verify", e);
    let suite = clean_suite(seed, trials, VERIFY_CLOCK_DIM, &tol).map_err(core)?;
    let floor = 0.5 * (1.0 - VERIFY_SLACK);
    let bound_failures: Vec<Value> = suite
        .accepted
        .iter()
        .filter(|(_, r)| r.product_conditional < floor)
        .map(|(s, r)| json!({ "scenario": s.name, "product_conditional": r.product_conditional }))
        .collect();
    let worst = suite.worst_conditional().map(|r| r.product_conditional);

    let corpus = oracle_corpus(seed).map_err(core)?;
    let distances = corpus
        .par_iter()
        .map(|sc| {
            let h = sc.history_with(&tol)?;
            let a = uncertainty_report(&h, &sc.event, &tol)?;
            let b = oracle_report(&h, &sc.event, &tol)?;
            Ok((sc.name.clone(), report_distance(&a, &b)))
        })
        .collect::<qevent_core::Result<Vec<_>>>()
        .map_err(core)?;
    let oracle_failures: Vec<Value> = distances
        .iter()
        .filter(|(_, d)| !d.is_some_and(|d| d <= ORACLE_TOL))
        .map(|(n, d)| json!({ "scenario": n, "distance": d }))
        .collect();
    let worst_distance = distances.iter().filter_map(|(_, d)| *d).fold(0.0, f64::max);

    let ok = bound_failures.is_empty() && oracle_failures.is_empty();
    let summary = json!({
        "units": "hbar=1",
        "command": "verify",
        "provenance": { "tool": TOOL, "tool_version": VERSION, "tolerances": tol, "seed": seed },
        "ok": ok,
        "conditional_bound": {
            "trials": trials,
            "clock_dimension": VERIFY_CLOCK_DIM,
            "floor": floor,
            "worst_product": worst,
            "rejected_resolution": suite.rejected_resolution,
            "rejected_boundary": suite.rejected_boundary,
            "failures": bound_failures,
        },
        "oracle": {
            "scenarios": distances.len(),
            "tolerance": ORACLE_TOL,
            "worst_distance": worst_distance,
            "failures": oracle_failures,
        },
    });
    Ok(summary)
}
