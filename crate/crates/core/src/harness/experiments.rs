//! Experiments shared by the command-line runs and the acceptance suite.

use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::{sobolev_distance, stereo_lift, stereo_project, SphereField};
use crate::solver::{
    gronwall_diagnostic, energy_series, midpoint_solve, picard_solve, ChartTrajectory, GronwallReport,
    PicardOptions, SphereTrajectory, Trajectory,
};
use crate::spectral::ComplexField;

pub fn lift_trajectory(traj: &ChartTrajectory) -> Result<SphereTrajectory> {
    Trajectory::new(traj.t0(), traj.dt(), traj.snapshots().iter().map(stereo_lift).collect())
}

/// Picard solution in the chart, lifted, against the midpoint integrator
/// started from the same sphere data.
#[derive(Debug, Clone)]
pub struct GaugeComparison {
    pub times: Vec<f64>,
    /// `H¹` distance at each sample.
    pub distance: Vec<f64>,
    pub midpoint_defect: Vec<f64>,
    pub picard_iterations: usize,
}

impl GaugeComparison {
    pub fn sup_distance(&self) -> f64 {
        self.distance.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_defect(&self) -> f64 {
        self.midpoint_defect.iter().cloned().fold(0.0, f64::max)
    }
}

pub fn gauge_comparison(phi: &ComplexField, t_final: f64, opts: &PicardOptions, inner_tol: f64) -> Result<GaugeComparison> {
    let (chart, history) = picard_solve(phi, t_final, opts)?;
    let lifted = lift_trajectory(&chart)?;
    let sphere = midpoint_solve(&stereo_lift(phi), t_final, opts.dt, inner_tol)?;
    lifted.same_sampling(&sphere)?;
    let distance = lifted
        .snapshots()
        .iter()
        .zip(sphere.snapshots())
        .map(|(a, b)| sobolev_distance(a, b, 1.0))
        .collect::<Result<_>>()?;
    Ok(GaugeComparison {
        times: sphere.times(),
        distance,
        midpoint_defect: sphere.snapshots().iter().map(SphereField::unit_defect).collect(),
        picard_iterations: history.len(),
    })
}

/// `sup_t ‖S(φ) − S(φ')‖_{H^σ} / ‖φ − φ'‖_{H^σ}` with `φ' = φ + δ·direction`,
/// for every `δ` (rows) and `σ` (columns).
pub fn lipschitz_ratios(
    phi: &ComplexField,
    direction: &ComplexField,
    deltas: &[f64],
    sigmas: &[f64],
    t_final: f64,
    opts: &PicardOptions,
) -> Result<Vec<Vec<f64>>> {
    let (base, _) = picard_solve(phi, t_final, opts)?;
    deltas
        .iter()
        .map(|&delta| {
            let step = direction.scale(Complex64::new(delta, 0.0));
            let other = phi.axpy(Complex64::new(1.0, 0.0), &step)?;
            let (moved, _) = picard_solve(&other, t_final, opts)?;
            sigmas
                .iter()
                .map(|&s| Ok(base.sup_hs_distance(&moved, s)? / step.hs_norm(s)))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct GronwallStudy {
    /// `max_t E(t)` between two runs from identical data whose inner
    /// tolerances differ by a factor ten.
    pub tolerance_energy: f64,
    /// One report per perturbation size.
    pub reports: Vec<(f64, GronwallReport)>,
}

/// Midpoint runs from `s0` and from `s0` perturbed in the chart by
/// `δ·direction`.
pub fn gronwall_study(
    s0: &SphereField,
    direction: &ComplexField,
    deltas: &[f64],
    t_final: f64,
    dt: f64,
    inner_tol: f64,
) -> Result<GronwallStudy> {
    let reference = midpoint_solve(s0, t_final, dt, inner_tol)?;
    let tighter = midpoint_solve(s0, t_final, dt, inner_tol / 10.0)?;
    let tolerance_energy = energy_series(&reference, &tighter)?.into_iter().fold(0.0, f64::max);
    let chart = stereo_project(s0)?;
    let reports = deltas
        .iter()
        .map(|&delta| {
            let p = stereo_lift(&chart.axpy(Complex64::new(delta, 0.0), direction)?);
            let perturbed = midpoint_solve(&p, t_final, dt, inner_tol)?;
            Ok((delta, gronwall_diagnostic(&reference, &perturbed)?))
        })
        .collect::<Result<_>>()?;
    Ok(GronwallStudy {
        tolerance_energy,
        reports,
    })
}

/// `max / min` of positive values; infinite if any is non-positive.
pub fn spread(values: &[f64]) -> f64 {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(0.0, f64::max);
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}
