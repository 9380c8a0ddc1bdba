//! The four subcommands. Each returns the status the process should exit
//! with; hard failures come back as errors.

use serde::Serialize;

use crate::analytic::{
    solve_full_mode, solve_u0_mode, solve_u1_mode, FullModeSolution, FullRegion,
    TwoRegionModeSolution,
};
use crate::error::{Error, Result};
use crate::exec::{map_ordered, ExecPolicy};
use crate::geometry::{FourierMode, Side};
use crate::radial::RadialPiece;
use crate::reduced::{
    boundary_symbol, mid_diffusion_residuals, reconstruct_layer_ap, solve_general_reduced_mode,
    solve_reduced_mode, solve_reduced_mode_direct, ReducedModeSolution,
};
use crate::verification::{
    oracle_report, run_study, ConvergenceReport, OracleConfiguration, OracleReport, OracleStatus,
    ReportStatus, Study,
};

use super::config::ValidatedConfig;
use super::output::{fmt17, OutputDir, Table};

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// A slope or order left its band and `--strict` was given.
    ToleranceBreach,
}

pub const PER_MODE_COLUMNS: [&str; 6] = [
    "delta",
    "mode",
    "err_i_h1",
    "err_layer_h1_weighted",
    "err_e_h1",
    "composite",
];

const COEFFICIENT_COLUMNS: [&str; 11] = [
    "solver",
    "delta",
    "mode",
    "region",
    "r_lo",
    "r_hi",
    "a",
    "b",
    "growth_scale",
    "decay_scale",
    "particular",
];

const PROFILE_COLUMNS: [&str; 7] = [
    "solver",
    "delta",
    "mode",
    "region",
    "r",
    "value",
    "derivative",
];

fn particular_string(piece: &RadialPiece) -> String {
    piece
        .particular
        .iter()
        .map(|t| format!("{}*r^{}", fmt17(t.coefficient), t.power))
        .collect::<Vec<_>>()
        .join(";")
}

fn coefficient_row(
    solver: &str,
    delta: Option<f64>,
    mode: FourierMode,
    region: &str,
    lo: f64,
    hi: f64,
    piece: &RadialPiece,
) -> Vec<String> {
    vec![
        solver.to_string(),
        delta.map(fmt17).unwrap_or_default(),
        mode.to_string(),
        region.to_string(),
        fmt17(lo),
        fmt17(hi),
        fmt17(piece.a),
        fmt17(piece.b),
        fmt17(piece.growth_scale),
        fmt17(piece.decay_scale),
        particular_string(piece),
    ]
}

/// `count` equally spaced points on `[lo, hi]`, endpoints included.
fn samples(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(move |k| {
        if k + 1 == count {
            hi
        } else {
            lo + step * k as f64
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn push_profile<F: Fn(f64) -> (f64, f64)>(
    table: &mut Table,
    solver: &str,
    delta: Option<f64>,
    mode: FourierMode,
    region: &str,
    (lo, hi): (f64, f64),
    count: usize,
    f: F,
) {
    for r in samples(lo, hi, count) {
        let (v, d) = f(r);
        table.push(vec![
            solver.to_string(),
            delta.map(fmt17).unwrap_or_default(),
            mode.to_string(),
            region.to_string(),
            fmt17(r),
            fmt17(v),
            fmt17(d),
        ]);
    }
}

fn push_two_region(
    coeffs: &mut Table,
    profiles: &mut Table,
    solver: &str,
    delta: Option<f64>,
    sol: &TwoRegionModeSolution,
    samples: usize,
) {
    let (r, r_ext) = (sol.r, sol.r_ext);
    coeffs.push(coefficient_row(
        solver, delta, sol.mode, "inner", 0.0, r, &sol.inner,
    ));
    coeffs.push(coefficient_row(
        solver, delta, sol.mode, "outer", r, r_ext, &sol.outer,
    ));
    push_profile(
        profiles,
        solver,
        delta,
        sol.mode,
        "inner",
        (0.0, r),
        samples,
        |x| sol.inner.value_and_derivative(x),
    );
    push_profile(
        profiles,
        solver,
        delta,
        sol.mode,
        "outer",
        (r, r_ext),
        samples,
        |x| sol.outer.value_and_derivative(x),
    );
}

fn push_full(coeffs: &mut Table, profiles: &mut Table, full: &FullModeSolution, samples: usize) {
    for region in FullRegion::ALL {
        let (lo, hi) = full.interval(region);
        let piece = full.piece(region);
        coeffs.push(coefficient_row(
            "full",
            Some(full.delta),
            full.mode,
            region.label(),
            lo,
            hi,
            piece,
        ));
        push_profile(
            profiles,
            "full",
            Some(full.delta),
            full.mode,
            region.label(),
            (lo, hi),
            samples,
            |x| piece.value_and_derivative(x),
        );
    }
}

#[derive(Debug, Serialize)]
struct ReducedSummary {
    lambda: Option<f64>,
    trace: f64,
    omega: f64,
    max_residual: f64,
    route_gap: Option<f64>,
}

#[derive(Debug, Serialize)]
struct SolveEntry {
    delta: f64,
    mode: String,
    full_max_residual: f64,
    reduced: Option<ReducedSummary>,
}

#[derive(Debug, Serialize)]
struct SolveSummary {
    modes: Vec<String>,
    p1: f64,
    p2: f64,
    kappa: f64,
    mid_diffusion: bool,
    entries: Vec<SolveEntry>,
}

fn route_gap(a: &ReducedModeSolution, b: &ReducedModeSolution) -> f64 {
    let diff = a.solution.add_scaled(&b.solution, -1.0).max_coefficient();
    diff / a
        .solution
        .max_coefficient()
        .max(b.solution.max_coefficient())
        .max(1.0)
}

/// Approximate model at one thickness, or `None` when it is refused for
/// this split.
fn reduced_solution(
    cfg: &ValidatedConfig,
    mode: FourierMode,
    delta: f64,
) -> Result<Option<(ReducedModeSolution, Option<f64>)>> {
    let s = &cfg.scenario;
    if cfg.mid_diffusion {
        let dtn = solve_reduced_mode(mode, delta, &s.params, &s.geometry, &s.forcing)?;
        let direct = solve_reduced_mode_direct(mode, delta, &s.params, &s.geometry, &s.forcing)?;
        let gap = route_gap(&dtn, &direct);
        return Ok(Some((dtn, Some(gap))));
    }
    match solve_general_reduced_mode(
        mode,
        delta,
        &s.params,
        &s.geometry,
        s.split,
        &s.forcing,
        s.unsafe_model,
    ) {
        Ok(sol) => Ok(Some((sol, None))),
        Err(Error::UnsafeModel(msg)) => {
            log::warn!("approximate model skipped: {msg}");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub fn run_solve(cfg: &ValidatedConfig, out: &mut OutputDir) -> Result<Outcome> {
    let s = &cfg.scenario;
    let n = cfg.profile_samples;
    let mut coeffs = Table::new(&COEFFICIENT_COLUMNS);
    let mut profiles = Table::new(&PROFILE_COLUMNS);
    let mut entries = Vec::new();

    for &mode in &s.modes {
        let u0 = solve_u0_mode(mode, &s.params, &s.geometry, &s.forcing)?;
        let u1 = solve_u1_mode(mode, &s.params, &s.geometry, s.split, &u0)?;
        push_two_region(&mut coeffs, &mut profiles, "u0", None, &u0, n);
        push_two_region(&mut coeffs, &mut profiles, "u1", None, &u1, n);
    }
    for &delta in &cfg.ladder {
        for &mode in &s.modes {
            let full = solve_full_mode(mode, delta, &s.params, &s.geometry, s.split, &s.forcing)?;
            push_full(&mut coeffs, &mut profiles, &full, n);
            let reduced = reduced_solution(cfg, mode, delta)?.map(|(sol, gap)| {
                push_two_region(
                    &mut coeffs,
                    &mut profiles,
                    "reduced",
                    Some(delta),
                    &sol.solution,
                    n,
                );
                for side in Side::BOTH {
                    let layer = reconstruct_layer_ap(side, delta, &s.params, s.split, &sol);
                    let region = FullRegion::Layer(side).label();
                    push_profile(
                        &mut profiles,
                        "reduced",
                        Some(delta),
                        mode,
                        region,
                        full.interval(FullRegion::Layer(side)),
                        n,
                        |x| layer.value_and_derivative(x),
                    );
                }
                let max_residual = if cfg.mid_diffusion {
                    mid_diffusion_residuals(&sol, &s.params, &s.geometry)
                        .into_iter()
                        .fold(0.0, f64::max)
                } else {
                    sol.solution.max_residual()
                };
                ReducedSummary {
                    lambda: sol.symbol.map(|b| b.value),
                    trace: sol.trace,
                    omega: sol.omega,
                    max_residual,
                    route_gap: gap,
                }
            });
            entries.push(SolveEntry {
                delta,
                mode: mode.to_string(),
                full_max_residual: full.max_residual(),
                reduced,
            });
        }
    }
    out.table("coefficients.csv", &coeffs)?;
    out.table("profiles.csv", &profiles)?;
    out.json(
        "solve_summary.json",
        &SolveSummary {
            modes: s.modes.iter().map(ToString::to_string).collect(),
            p1: s.split.p1(),
            p2: s.split.p2(),
            kappa: s.params.kappa(),
            mid_diffusion: cfg.mid_diffusion,
            entries,
        },
    )?;
    Ok(Outcome::Ok)
}

/// Per-mode rows of a convergence report.
pub fn report_table(report: &ConvergenceReport) -> Table {
    let mut table = Table::new(&PER_MODE_COLUMNS);
    for rec in &report.records {
        for m in &rec.modes {
            table.push(vec![
                fmt17(rec.delta),
                m.mode.to_string(),
                fmt17(m.inner),
                fmt17(m.layer_weighted(rec.delta, rec.grouping)),
                fmt17(m.outer),
                fmt17(m.composite(rec.delta, rec.grouping)),
            ]);
        }
    }
    table
}

#[derive(Debug, Serialize)]
struct RecordSummary {
    delta: f64,
    err_i_h1: f64,
    err_layer_h1_weighted: f64,
    err_e_h1: f64,
    composite: f64,
    gap: Option<f64>,
}

#[derive(Debug, Serialize)]
struct StudySummary {
    study: Study,
    file: Option<String>,
    status: ReportStatus,
    expected_slope: f64,
    band: f64,
    slope: Option<f64>,
    fit_residual: Option<f64>,
    layer_slope: Option<f64>,
    layer_floor: Option<f64>,
    max_gap: Option<f64>,
    note: Option<String>,
    records: Vec<RecordSummary>,
}

impl StudySummary {
    fn new(report: &ConvergenceReport, file: Option<String>) -> Self {
        Self {
            study: report.study,
            file,
            status: report.status,
            expected_slope: report.expected_slope,
            band: report.band,
            slope: report.fit.map(|f| f.slope),
            fit_residual: report.fit.map(|f| f.residual),
            layer_slope: report.layer_fit.map(|f| f.slope),
            layer_floor: report.layer_floor,
            max_gap: report.max_gap(),
            note: report.note.clone(),
            records: report
                .records
                .iter()
                .map(|r| RecordSummary {
                    delta: r.delta,
                    err_i_h1: r.err_i_h1,
                    err_layer_h1_weighted: r.err_layer_h1_weighted,
                    err_e_h1: r.err_e_h1,
                    composite: r.composite,
                    gap: r.gap,
                })
                .collect(),
        }
    }
}

/// Studies written by `converge`, each to `<label>.csv`.
pub const CONVERGE_STUDIES: [Study; 3] = [
    Study::Theorem2Order0,
    Study::Theorem2Order1,
    Study::Theorem4,
];

pub fn run_converge(
    cfg: &ValidatedConfig,
    out: &mut OutputDir,
    strict: bool,
    policy: ExecPolicy,
) -> Result<Outcome> {
    let mut summaries = Vec::new();
    let mut breach = false;
    for study in CONVERGE_STUDIES {
        let report = run_study(
            study,
            &cfg.ladder,
            &cfg.scenario,
            policy,
            cfg.tolerances.slope_band,
        )?;
        let file = if report.status == ReportStatus::Skipped {
            log::warn!(
                "{}: {}",
                study.label(),
                report.note.as_deref().unwrap_or("skipped")
            );
            None
        } else {
            let name = format!("{}.csv", study.label());
            out.table(&name, &report_table(&report))?;
            Some(name)
        };
        match (report.status, report.fit) {
            (ReportStatus::OutOfBand, fit) => {
                breach = true;
                log::warn!(
                    "{}: slope {:?} outside {} ± {} (layer slope {:?}, floor {:?})",
                    study.label(),
                    fit.map(|f| f.slope),
                    report.expected_slope,
                    report.band,
                    report.layer_fit.map(|f| f.slope),
                    report.layer_floor
                );
            }
            (ReportStatus::Ok, Some(fit)) => {
                log::info!("{}: slope {:.4}", study.label(), fit.slope)
            }
            _ => {}
        }
        summaries.push(StudySummary::new(&report, file));
    }
    out.json("convergence_summary.json", &summaries)?;
    Ok(if breach && strict {
        Outcome::ToleranceBreach
    } else {
        Outcome::Ok
    })
}

pub fn oracle_configurations(cfg: &ValidatedConfig) -> [OracleConfiguration; 3] {
    [
        OracleConfiguration::Full {
            delta: cfg.oracle.delta,
        },
        OracleConfiguration::TwoRegion,
        OracleConfiguration::JumpProblem,
    ]
}

pub fn run_oracle_check(
    cfg: &ValidatedConfig,
    out: &mut OutputDir,
    strict: bool,
    policy: ExecPolicy,
) -> Result<Outcome> {
    let jobs: Vec<(OracleConfiguration, FourierMode)> = oracle_configurations(cfg)
        .into_iter()
        .flat_map(|c| cfg.scenario.modes.iter().map(move |&m| (c, m)))
        .collect();
    let o = &cfg.oracle;
    let reports = map_ordered(policy, &jobs, |&(c, m)| {
        oracle_report(m, c, &cfg.scenario, o.h0, o.levels, o.order_band)
    })
    .into_iter()
    .collect::<Result<Vec<OracleReport>>>()?;

    let mut table = Table::new(&["configuration", "mode", "level", "h", "max_error"]);
    let mut breach = false;
    for rep in &reports {
        for (k, level) in rep.levels.iter().enumerate() {
            table.push(vec![
                rep.configuration.label().to_string(),
                rep.mode.to_string(),
                k.to_string(),
                fmt17(level.h),
                fmt17(level.max_error),
            ]);
        }
        if rep.status == OracleStatus::OutOfBand {
            breach = true;
            log::warn!(
                "{} {}: observed order {:?} outside 2 ± {}",
                rep.configuration.label(),
                rep.mode,
                rep.observed_order,
                o.order_band
            );
        }
    }
    out.table("oracle.csv", &table)?;
    out.json("oracle_summary.json", &reports)?;
    Ok(if breach && strict {
        Outcome::ToleranceBreach
    } else {
        Outcome::Ok
    })
}

pub fn run_sweep(cfg: &ValidatedConfig, out: &mut OutputDir) -> Result<Outcome> {
    let s = &cfg.scenario;
    let mut table = Table::new(&["delta", "mode", "lambda", "scale", "resonant"]);
    let mut resonant = 0usize;
    for &delta in &cfg.ladder {
        for &mode in &s.modes {
            let b = boundary_symbol(mode, delta, &s.params, &s.geometry)
                .map_err(|e| Error::config("materials", e.to_string()))?;
            if b.resonant {
                resonant += 1;
                log::warn!(
                    "mode {mode} is resonant at delta = {delta} (lambda = {:e})",
                    b.value
                );
            }
            table.push(vec![
                fmt17(delta),
                mode.to_string(),
                fmt17(b.value),
                fmt17(b.scale),
                b.resonant.to_string(),
            ]);
        }
    }
    out.table("sweep.csv", &table)?;
    log::info!("{resonant} resonant (delta, mode) pairs");
    Ok(Outcome::Ok)
}
