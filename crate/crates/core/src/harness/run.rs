//! The five experiment commands. Each writes into `<output_dir>/<command>/`
//! and reports progress to the supplied writer.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::data::{perturbation_direction, seeded_data, seeded_sphere_data};
use super::experiments::{gauge_comparison, gronwall_study, spread};
use super::output::{fmt_f64, CsvReport};
use super::snapshot::{decode, encode, write_snapshot, SnapshotData};
use crate::error::{Result, SmapError};
use crate::geometry::{stereo_lift, stereo_project, SphereField};
use crate::solver::{midpoint_solve, picard_solve, ChartTrajectory};
use crate::spacetime::{annulus_mass, lemma_diagnostics, spacetime_transform};
use crate::spectral::{free_propagate, gradient, ComplexField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Evolve,
    Picard,
    Norms,
    Verify,
    Compare,
}

impl Command {
    pub const ALL: [Command; 5] = [Command::Evolve, Command::Picard, Command::Norms, Command::Verify, Command::Compare];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Picard => "picard",
            Command::Norms => "norms",
            Command::Verify => "verify",
            Command::Compare => "compare",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    dir: PathBuf,
    comments: Vec<String>,
}

impl Context<'_> {
    fn csv(&self, name: &str, header: &[&str]) -> Result<CsvReport> {
        CsvReport::create(&self.dir.join(name), &self.comments, header)
    }
}

/// Validate `cfg`, create the command's output directory and run it.
/// Returns the directory written to.
pub fn run(command: Command, cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<PathBuf> {
    cfg.validate()?;
    let dir = cfg.output_dir.join(command.name());
    std::fs::create_dir_all(&dir)?;
    let mut comments = Vec::new();
    if cfg.is_subcritical() {
        comments.push(format!(
            "subcritical run: sigma0 = {} does not exceed (d+1)/2 = {}",
            cfg.sigma0,
            (cfg.d as f64 + 1.0) / 2.0
        ));
        writeln!(out, "warning: {}", comments[0])?;
    }
    let ctx = Context { cfg, dir, comments };
    match command {
        Command::Evolve => evolve(&ctx, out)?,
        Command::Picard => picard(&ctx, out)?,
        Command::Norms => norms(&ctx, out)?,
        Command::Verify => verify(&ctx, out)?,
        Command::Compare => compare(&ctx, out)?,
    }
    Ok(ctx.dir)
}

fn snapshot_name(m: usize) -> String {
    format!("snapshot_{m:05}.smf")
}

/// `½ Σ_l ‖∇s_l‖²`, conserved by the flow.
fn dirichlet_energy(s: &SphereField) -> f64 {
    let dim = s.grid().dim();
    let mut total = 0.0;
    for l in 0..3 {
        let c = s.component(l).to_frequency();
        for axis in 1..=dim {
            total += gradient(&c, axis).expect("axis in range").l2_norm().powi(2);
        }
    }
    total / 2.0
}

fn evolve(ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let cfg = ctx.cfg;
    let grid = cfg.grid()?;
    let s0 = seeded_sphere_data(cfg.data_kind, grid, cfg.sigma0, cfg.amplitudes[0], cfg.seed);
    let traj = midpoint_solve(&s0, cfg.t_final, cfg.dt, cfg.inner_tol)?;

    let mut series = ctx.csv("evolve.csv", &["t", "unit_defect", "dirichlet_energy"])?;
    let e0 = dirichlet_energy(traj.first());
    let mut drift = 0.0f64;
    let mut defect = 0.0f64;
    let last = traj.len() - 1;
    for (m, s) in traj.snapshots().iter().enumerate() {
        let e = dirichlet_energy(s);
        drift = drift.max((e - e0).abs());
        defect = defect.max(s.unit_defect());
        series.row([fmt_f64(s.time()), fmt_f64(s.unit_defect()), fmt_f64(e)])?;
        if m % cfg.snapshot_stride == 0 || m == last {
            write_snapshot(&ctx.dir.join(snapshot_name(m)), &SnapshotData::Sphere(s.clone()))?;
        }
    }
    series.finish()?;

    let direction = perturbation_direction(grid, cfg.sigma0, cfg.seed);
    let study = gronwall_study(&s0, &direction, &cfg.perturbations, cfg.t_final, cfg.dt, cfg.inner_tol)?;
    let mut g = ctx.csv("gronwall.csv", &["delta", "t", "energy", "ratio"])?;
    for (delta, rep) in &study.reports {
        for ((t, e), r) in rep.times.iter().zip(&rep.energy).zip(&rep.ratio) {
            g.row([fmt_f64(*delta), fmt_f64(*t), fmt_f64(*e), fmt_f64(*r)])?;
        }
    }
    g.finish()?;

    let mut summary = ctx.csv("summary.csv", &["quantity", "delta", "value"])?;
    let mut put = |q: &str, delta: Option<f64>, v: f64| -> Result<()> {
        writeln!(out, "{q:<20} {:<12} {v:.6e}", delta.map(|d| format!("{d:e}")).unwrap_or_default())?;
        summary.row([q.to_string(), delta.map(fmt_f64).unwrap_or_default(), fmt_f64(v)])
    };
    put("max_unit_defect", None, defect)?;
    put("energy_drift", None, drift)?;
    put("tolerance_energy", None, study.tolerance_energy)?;
    for (delta, rep) in &study.reports {
        put("gronwall_constant", Some(*delta), rep.c_s)?;
        put("bound_excess", Some(*delta), rep.bound_excess())?;
    }
    let consts: Vec<f64> = study.reports.iter().map(|(_, r)| r.c_s).collect();
    if consts.len() > 1 {
        put("gronwall_spread", None, spread(&consts))?;
    }
    summary.finish()
}

fn picard(ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let cfg = ctx.cfg;
    let grid = cfg.grid()?;
    let opts = cfg.picard_options();
    let mut sweep = ctx.csv("sweep.csv", &["amplitude", "status", "iterations", "max_ratio"])?;
    let mut first_error = None;
    for (i, &a) in cfg.amplitudes.iter().enumerate() {
        let phi = seeded_data(cfg.data_kind, grid, cfg.sigma0, a, cfg.seed);
        match picard_solve(&phi, cfg.t_final, &opts) {
            Ok((traj, history)) => {
                let mut h = ctx.csv(&format!("history_{i:02}.csv"), &["n", "sup_norm", "sup_diff", "ratio"])?;
                for r in &history.records {
                    h.row([r.n.to_string(), fmt_f64(r.sup_norm), fmt_f64(r.sup_diff), fmt_f64(r.ratio)])?;
                }
                h.finish()?;
                write_snapshot(
                    &ctx.dir.join(format!("final_{i:02}.smf")),
                    &SnapshotData::Complex(traj.last().clone()),
                )?;
                writeln!(
                    out,
                    "amplitude {a:e}: converged in {} iterations, max ratio {:.4}",
                    history.len(),
                    history.max_ratio()
                )?;
                sweep.row([fmt_f64(a), "converged".into(), history.len().to_string(), fmt_f64(history.max_ratio())])?;
            }
            Err(e) => {
                writeln!(out, "amplitude {a:e}: {}: {e}", e.name())?;
                sweep.row([fmt_f64(a), e.name().to_string(), String::new(), String::new()])?;
                first_error.get_or_insert(e);
            }
        }
    }
    sweep.finish()?;
    first_error.map_or(Ok(()), Err)
}

fn norms(ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let cfg = ctx.cfg;
    let grid = cfg.grid()?;
    let opts = cfg.picard_options();
    let ensemble: Vec<ChartTrajectory> = (0..cfg.ensemble_size as u64)
        .into_par_iter()
        .map(|i| {
            let phi = seeded_data(cfg.data_kind, grid, cfg.sigma0, cfg.amplitudes[0], cfg.seed.wrapping_add(i));
            picard_solve(&phi, cfg.t_final, &opts).map(|(t, _)| t)
        })
        .collect::<Result<_>>()?;
    let report = lemma_diagnostics(&ensemble, &cfg.direction_set(), &cfg.lemma_options()?)?;

    let mut csv = ctx.csv("norms.csv", &["trajectory_id", "k", "quantity", "direction", "value"])?;
    for r in &report.rows.rows {
        csv.row([
            r.trajectory_id.to_string(),
            r.k.map(|k| k.to_string()).unwrap_or_default(),
            r.quantity.to_string(),
            r.direction.clone().unwrap_or_default(),
            fmt_f64(r.value),
        ])?;
    }
    csv.finish()?;

    let mut per_k = ctx.csv("per_k.csv", &["k", "Xk", "R2", "R3", "R4", "Jsection"])?;
    writeln!(out, "{:>3} {:>12} {:>10} {:>10} {:>10} {:>10}", "k", "Xk", "R2", "R3", "R4", "Jsection")?;
    for s in &report.per_k {
        writeln!(out, "{:>3} {:>12.4e} {:>10.4} {:>10.4} {:>10.4} {:>10.4}", s.k, s.xk, s.r2, s.r3, s.r4, s.jsection)?;
        per_k.row([s.k.to_string(), fmt_f64(s.xk), fmt_f64(s.r2), fmt_f64(s.r3), fmt_f64(s.r4), fmt_f64(s.jsection)])?;
    }
    per_k.finish()?;
    if let (Some(lo), Some(hi)) = (report.per_k.first(), report.per_k.last()) {
        writeln!(
            out,
            "log2 slopes over k = {}..{}: R2 {:.3}, R3 {:.3}, R4 {:.3}",
            lo.k,
            hi.k,
            report.slope(lo.k, hi.k, |s| s.r2),
            report.slope(lo.k, hi.k, |s| s.r3),
            report.slope(lo.k, hi.k, |s| s.r4)
        )?;
    }
    Ok(())
}

struct Check {
    name: &'static str,
    value: f64,
    threshold: f64,
    passed: bool,
    note: String,
}

impl Check {
    fn at_most(name: &'static str, value: f64, threshold: f64) -> Self {
        Self {
            name,
            value,
            threshold,
            passed: value <= threshold,
            note: String::new(),
        }
    }

    fn errored(name: &'static str, threshold: f64, e: &SmapError) -> Self {
        Self {
            name,
            value: f64::NAN,
            threshold,
            passed: false,
            note: format!("{}: {e}", e.name()),
        }
    }
}

fn max_abs_diff(a: &ComplexField, b: &ComplexField) -> f64 {
    let (a, b) = (a.to_physical(), b.to_physical());
    a.values().iter().zip(b.values()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

fn relative(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn verify(ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let cfg = ctx.cfg;
    let grid = cfg.grid()?;
    let opts = cfg.picard_options();
    let a = cfg.amplitudes[0];
    let phi = seeded_data(cfg.data_kind, grid, cfg.sigma0, a, cfg.seed);
    let probe = seeded_data(super::config::DataKind::RandomBandlimited, grid, cfg.sigma0, 1.0, cfg.seed);
    let mut checks = Vec::new();

    checks.push(Check::at_most("fft_unitarity", relative(probe.to_frequency().l2_norm(), probe.l2_norm()), 1e-12));
    checks.push(Check::at_most("fft_roundtrip", max_abs_diff(&probe.to_frequency().to_physical(), &probe), 1e-12));
    checks.push(Check::at_most(
        "free_evolution_unitarity",
        relative(free_propagate(&probe, cfg.t_final).l2_norm(), probe.l2_norm()),
        1e-12,
    ));
    let chart_roundtrip = stereo_project(&stereo_lift(&phi)).map(|u| max_abs_diff(&u, &phi));
    checks.push(match chart_roundtrip {
        Ok(v) => Check::at_most("chart_roundtrip", v, 1e-12),
        Err(e) => Check::errored("chart_roundtrip", 1e-12, &e),
    });
    let snap_ok = match decode(&encode(&SnapshotData::Complex(phi.clone())))? {
        SnapshotData::Complex(u) => u.values() == phi.values() && u.time().to_bits() == phi.time().to_bits(),
        SnapshotData::Sphere(_) => false,
    };
    checks.push(Check::at_most("snapshot_roundtrip_mismatch", if snap_ok { 0.0 } else { 1.0 }, 0.0));

    match picard_solve(&phi, cfg.t_final, &opts) {
        Ok((traj, history)) => {
            checks.push(Check::at_most("picard_max_ratio", history.max_ratio(), 0.5));
            checks.push(Check::at_most("picard_iterations", history.len() as f64, cfg.max_iter as f64));
            let completeness = spacetime_transform(&traj, &cfg.time_window()?).map(|spec| {
                let total = spec.l2_norm().powi(2);
                let shells: f64 = (0..=grid.k_max() as u32 + 1).map(|k| annulus_mass(&spec, k).powi(2)).sum();
                relative(shells, total)
            });
            checks.push(match completeness {
                Ok(v) => Check::at_most("shell_completeness", v, 1e-10),
                Err(e) => Check::errored("shell_completeness", 1e-10, &e),
            });
        }
        Err(e) => checks.push(Check::errored("picard_max_ratio", 0.5, &e)),
    }

    match gauge_comparison(&phi, cfg.t_final, &opts, cfg.inner_tol) {
        Ok(cmp) => {
            checks.push(Check::at_most("sphere_constraint", cmp.max_defect(), 1e-10));
            checks.push(Check::at_most("gauge_equivalence_h1", cmp.sup_distance(), 1e-5));
        }
        Err(e) => checks.push(Check::errored("gauge_equivalence_h1", 1e-5, &e)),
    }

    let s0 = stereo_lift(&phi);
    match gronwall_study(&s0, &phi, &[], cfg.t_final, cfg.dt, cfg.inner_tol) {
        Ok(study) => checks.push(Check::at_most("uniqueness_energy", study.tolerance_energy, 1e-18)),
        Err(e) => checks.push(Check::errored("uniqueness_energy", 1e-18, &e)),
    }

    let mut csv = ctx.csv("verify.csv", &["invariant", "value", "threshold", "status"])?;
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {:<28} value={:.6e} threshold={:.1e} {}", c.name, c.value, c.threshold, c.note)?;
        csv.row([c.name.to_string(), fmt_f64(c.value), fmt_f64(c.threshold), status.to_string()])?;
    }
    csv.finish()?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    writeln!(out, "{} of {} invariants passed", checks.len() - failed.len(), checks.len())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(SmapError::ValidationFailure(format!("failed: {}", failed.join(", "))))
    }
}

fn compare(ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let cfg = ctx.cfg;
    let grid = cfg.grid()?;
    let opts = cfg.picard_options();
    let mut table = ctx.csv("compare.csv", &["amplitude", "t", "h1_distance", "unit_defect"])?;
    let mut summary = ctx.csv(
        "compare_summary.csv",
        &["amplitude", "picard_iterations", "sup_h1_distance", "max_unit_defect"],
    )?;
    writeln!(out, "{:>12} {:>10} {:>16} {:>16}", "amplitude", "iterations", "sup H1 distance", "max defect")?;
    for &a in &cfg.amplitudes {
        let phi = seeded_data(cfg.data_kind, grid, cfg.sigma0, a, cfg.seed);
        let cmp = gauge_comparison(&phi, cfg.t_final, &opts, cfg.inner_tol)?;
        for ((t, d), s) in cmp.times.iter().zip(&cmp.distance).zip(&cmp.midpoint_defect) {
            table.row([fmt_f64(a), fmt_f64(*t), fmt_f64(*d), fmt_f64(*s)])?;
        }
        writeln!(
            out,
            "{a:>12.3e} {:>10} {:>16.6e} {:>16.6e}",
            cmp.picard_iterations,
            cmp.sup_distance(),
            cmp.max_defect()
        )?;
        summary.row([
            fmt_f64(a),
            cmp.picard_iterations.to_string(),
            fmt_f64(cmp.sup_distance()),
            fmt_f64(cmp.max_defect()),
        ])?;
    }
    table.finish()?;
    summary.finish()
}
