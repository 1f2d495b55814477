//! Picard iteration of the Duhamel map for the chart equation
//! `(i∂ₜ + Δ)u = N(u)`.
//!
//! The Duhamel integral is evaluated on the trajectory's own time grid with
//! the composite trapezoid rule, each sample carried by the exact propagator
//! `e^{-i(t−s)|ξ|²}`. Written recursively,
//! `I_m = W(Δt)[I_{m−1} + Δt/2·G_{m−1}] + Δt/2·G_m`, which is the same sum
//! evaluated in `O(M)` multiplier applications.

use num_complex::Complex64;
use rayon::prelude::*;

use super::trajectory::{step_count, ChartTrajectory, Trajectory};
use crate::error::{Result, SmapError};
use crate::nonlinearity::{nonlinearity, DealiasPolicy};
use crate::spectral::{free_propagate, ComplexField, Representation};

/// Ratio above which an iteration counts as non-contracting.
pub const STALL_RATIO: f64 = 0.95;
/// Consecutive stalled iterations that abort the solve.
pub const STALL_LIMIT: usize = 3;

#[derive(Debug, Clone, Copy)]
pub struct PicardOptions {
    /// Regularity `σ₀` used for the convergence norms.
    pub sigma0: f64,
    /// Relative stopping tolerance on `sup_t ‖u_{n+1} − u_n‖_{H^{σ₀}}`.
    pub tol: f64,
    pub max_iter: usize,
    pub dt: f64,
    pub dealias: DealiasPolicy,
}

impl PicardOptions {
    pub fn for_dimension(d: usize, dt: f64) -> Self {
        Self {
            sigma0: (d as f64 + 1.0) / 2.0 + 0.1,
            tol: 1e-10,
            max_iter: 40,
            dt,
            dealias: DealiasPolicy::TWO_THIRDS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardRecord {
    pub n: usize,
    pub sup_norm: f64,
    pub sup_diff: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PicardHistory {
    pub records: Vec<PicardRecord>,
}

impl PicardHistory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn max_ratio(&self) -> f64 {
        self.records.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }
}

/// `t ↦ W(t)φ` sampled on `[0, T]`.
pub fn free_trajectory(phi: &ComplexField, t_final: f64, dt: f64) -> Result<ChartTrajectory> {
    let steps = step_count(t_final, dt)?;
    let phi0 = phi.to_frequency();
    let snaps: Vec<ComplexField> = (0..=steps)
        .into_par_iter()
        .map(|m| {
            let t = m as f64 * dt;
            let mut u = free_propagate(&phi0, t).to_physical();
            u.set_time(t);
            u
        })
        .collect();
    Trajectory::new(0.0, dt, snaps)
}

/// One application of the Duhamel map:
/// `t_m ↦ W(t_m)φ − i∫₀^{t_m} W(t_m − s) N(prev(s)) ds`.
pub fn duhamel_map(
    phi: &ComplexField,
    prev: &ChartTrajectory,
    dealias: DealiasPolicy,
) -> Result<ChartTrajectory> {
    if phi.grid() != prev.grid() {
        return Err(SmapError::GridMismatch(format!(
            "initial data on {:?}, trajectory on {:?}",
            phi.grid(),
            prev.grid()
        )));
    }
    if prev.t0() != 0.0 {
        return Err(SmapError::DegenerateInput("Duhamel map needs a trajectory starting at t = 0".into()));
    }
    let grid = *phi.grid();
    let dt = prev.dt();
    let forcing: Vec<ComplexField> = prev
        .snapshots()
        .par_iter()
        .map(|u| nonlinearity(u, dealias).to_frequency())
        .collect();

    let k2 = grid.wavenumber_sq_table();
    let step: Vec<Complex64> = k2.iter().map(|k| Complex64::from_polar(1.0, -dt * k)).collect();
    let half = 0.5 * dt;

    // running trapezoid sums I_m, in frequency space
    let mut integrals = Vec::with_capacity(prev.len());
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    integrals.push(acc.clone());
    for m in 1..prev.len() {
        let (g_prev, g_cur) = (forcing[m - 1].values(), forcing[m].values());
        for (i, a) in acc.iter_mut().enumerate() {
            *a = step[i] * (*a + half * g_prev[i]) + half * g_cur[i];
        }
        integrals.push(acc.clone());
    }

    let phi_hat = phi.to_frequency();
    let minus_i = Complex64::new(0.0, -1.0);
    let snaps: Vec<ComplexField> = integrals
        .into_par_iter()
        .enumerate()
        .map(|(m, integral)| {
            let t = prev.time(m);
            let mut u = free_propagate(&phi_hat, t);
            u.values_mut()
                .iter_mut()
                .zip(&integral)
                .for_each(|(v, s)| *v += minus_i * s);
            u.set_time(t);
            u.to_physical()
        })
        .collect();
    Trajectory::new(0.0, dt, snaps)
}

fn zero_trajectory(phi: &ComplexField, t_final: f64, dt: f64) -> Result<ChartTrajectory> {
    let steps = step_count(t_final, dt)?;
    let snaps = (0..=steps)
        .map(|m| ComplexField::zeros(*phi.grid(), m as f64 * dt, Representation::Physical))
        .collect();
    Trajectory::new(0.0, dt, snaps)
}

/// Iterate the Duhamel map from `u₀ = W(t)φ` until the relative change drops
/// below `opts.tol`.
pub fn picard_solve(
    phi: &ComplexField,
    t_final: f64,
    opts: &PicardOptions,
) -> Result<(ChartTrajectory, PicardHistory)> {
    if t_final > 1.0 {
        return Err(SmapError::DegenerateInput(format!(
            "solve window T = {t_final} exceeds 1, where the time cutoff is no longer inert"
        )));
    }
    let data_norm = phi.hs_norm(opts.sigma0);
    let mut history = PicardHistory::default();
    if data_norm == 0.0 {
        return Ok((zero_trajectory(phi, t_final, opts.dt)?, history));
    }

    let mut current = free_trajectory(phi, t_final, opts.dt)?;
    // u_{-1} ≡ 0, so the first "difference" is u_0 itself
    let mut prev_diff = current.sup_hs_norm(opts.sigma0);
    let mut stalled = 0;
    for n in 1..=opts.max_iter {
        let next = duhamel_map(phi, &current, opts.dealias)?;
        let sup_diff = next.sup_hs_distance(&current, opts.sigma0)?;
        let sup_norm = next.sup_hs_norm(opts.sigma0);
        let ratio = sup_diff / prev_diff;
        history.records.push(PicardRecord {
            n,
            sup_norm,
            sup_diff,
            ratio,
        });
        if !ratio.is_finite() || !sup_norm.is_finite() {
            return Err(SmapError::NoContraction { iteration: n, ratio });
        }
        stalled = if ratio > STALL_RATIO { stalled + 1 } else { 0 };
        if stalled >= STALL_LIMIT {
            return Err(SmapError::NoContraction { iteration: n, ratio });
        }
        current = next;
        if sup_diff < opts.tol * data_norm {
            return Ok((current, history));
        }
        prev_diff = sup_diff;
    }
    Err(SmapError::MaxIterExceeded {
        max_iter: opts.max_iter,
        last: prev_diff / data_norm,
    })
}
