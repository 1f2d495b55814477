//! Implicit midpoint integrator for `∂ₜs = s × Δs`, used as an oracle that
//! never passes through the chart.
//!
//! Each step solves `(s⁺ − s)/Δt = s̄ × Δs̄`, `s̄ = (s + s⁺)/2`, by a
//! fixed-point iteration in which the part linear about the north pole,
//! `Q × Δs̄`, is moved to the left and inverted exactly per Fourier mode:
//!
//! `(I − Δt/2·A) s⁺ = (I + Δt/2·A) s + Δt·(s̄ − Q) × Δs̄`,  `A v = Q × Δv`.
//!
//! The fixed point is the midpoint equation itself, so `|s| = 1` is kept up
//! to the inner tolerance. Only the remainder, which is small near `Q`, is
//! iterated, so the sweep count does not depend on the grid resolution.

use num_complex::Complex64;
use rayon::prelude::*;

use super::trajectory::{step_count, SphereTrajectory, Trajectory};
use crate::error::{Result, SmapError};
use crate::geometry::{cross, SphereField, NORTH_POLE};
use crate::grid::GridSpec;
use crate::spectral::fft::{fft_all, Direction};

pub const MAX_SWEEPS: usize = 100;

struct Workspace {
    grid: GridSpec,
    shape: Vec<usize>,
    k2: Vec<f64>,
}

impl Workspace {
    fn new(grid: GridSpec) -> Self {
        Self {
            grid,
            shape: grid.shape(),
            k2: grid.wavenumber_sq_table(),
        }
    }

    fn forward(&self, v: &[f64]) -> Vec<Complex64> {
        let mut c: Vec<Complex64> = v.iter().map(|x| Complex64::new(*x, 0.0)).collect();
        fft_all(&mut c, &self.shape, Direction::Forward);
        c
    }

    fn inverse_real(&self, mut c: Vec<Complex64>) -> Vec<f64> {
        fft_all(&mut c, &self.shape, Direction::Inverse);
        c.into_iter().map(|z| z.re).collect()
    }

    fn laplacian(&self, v: &[f64]) -> Vec<f64> {
        let mut c = self.forward(v);
        c.iter_mut().zip(&self.k2).for_each(|(z, k)| *z *= -k);
        self.inverse_real(c)
    }
}

fn component(values: &[[f64; 3]], l: usize) -> Vec<f64> {
    values.iter().map(|v| v[l]).collect()
}

/// Advance one step; returns the new values and the number of sweeps used.
fn step(
    ws: &Workspace,
    s: &[[f64; 3]],
    dt: f64,
    inner_tol: f64,
    step_index: usize,
) -> Result<(Vec<[f64; 3]>, usize)> {
    let h = 0.5 * dt;
    let n = s.len();

    // (I + hA)s in frequency space; A acts on components 1, 2 as
    // (v̂₁, v̂₂) ↦ (|ξ|² v̂₂, −|ξ|² v̂₁).
    let s1 = ws.forward(&component(s, 0));
    let s2 = ws.forward(&component(s, 1));
    let rhs1: Vec<Complex64> = (0..n).map(|i| s1[i] + h * ws.k2[i] * s2[i]).collect();
    let rhs2: Vec<Complex64> = (0..n).map(|i| s2[i] - h * ws.k2[i] * s1[i]).collect();

    let mut next = s.to_vec();
    for sweep in 1..=MAX_SWEEPS {
        let mid: Vec<[f64; 3]> = s
            .par_iter()
            .zip(next.par_iter())
            .map(|(a, b)| std::array::from_fn(|l| 0.5 * (a[l] + b[l])))
            .collect();
        let lap: Vec<Vec<f64>> = (0..3).map(|l| ws.laplacian(&component(&mid, l))).collect();
        let remainder: Vec<[f64; 3]> = mid
            .par_iter()
            .enumerate()
            .map(|(i, m)| {
                let off = [m[0] - NORTH_POLE[0], m[1] - NORTH_POLE[1], m[2] - NORTH_POLE[2]];
                cross(&off, &[lap[0][i], lap[1][i], lap[2][i]])
            })
            .collect();

        let r1 = ws.forward(&component(&remainder, 0));
        let r2 = ws.forward(&component(&remainder, 1));
        let mut x1 = vec![Complex64::new(0.0, 0.0); n];
        let mut x2 = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let a = h * ws.k2[i];
            let b1 = rhs1[i] + dt * r1[i];
            let b2 = rhs2[i] + dt * r2[i];
            let det = 1.0 + a * a;
            x1[i] = (b1 + a * b2) / det;
            x2[i] = (b2 - a * b1) / det;
        }
        let n1 = ws.inverse_real(x1);
        let n2 = ws.inverse_real(x2);

        let mut change = 0.0f64;
        let candidate: Vec<[f64; 3]> = (0..n)
            .map(|i| [n1[i], n2[i], s[i][2] + dt * remainder[i][2]])
            .collect();
        for (a, b) in candidate.iter().zip(&next) {
            for l in 0..3 {
                change = change.max((a[l] - b[l]).abs());
            }
        }
        next = candidate;
        if !change.is_finite() {
            break;
        }
        if change < inner_tol {
            return Ok((next, sweep));
        }
    }
    Err(SmapError::InnerDivergence {
        step: step_index,
        sweeps: MAX_SWEEPS,
    })
}

/// Integrate from `s0` over `[0, T]` with fixed step `dt`.
pub fn midpoint_solve(s0: &SphereField, t_final: f64, dt: f64, inner_tol: f64) -> Result<SphereTrajectory> {
    let steps = step_count(t_final, dt)?;
    if s0.unit_defect() > 1e-12 {
        return Err(SmapError::DegenerateInput(format!(
            "initial data is not unit-norm (defect {:e})",
            s0.unit_defect()
        )));
    }
    let grid = *s0.grid();
    let ws = Workspace::new(grid);
    let mut snaps = Vec::with_capacity(steps + 1);
    let mut first = s0.clone();
    first.set_time(0.0);
    snaps.push(first);
    let mut current = s0.values().to_vec();
    for m in 1..=steps {
        let (next, _) = step(&ws, &current, dt, inner_tol, m)?;
        snaps.push(SphereField::from_raw(grid, m as f64 * dt, next.clone())?);
        current = next;
    }
    debug_assert_eq!(ws.grid, grid);
    Trajectory::new(0.0, dt, snaps)
}
