//! Windowed space-time samples and their `(ξ, τ)` spectrum.
//!
//! The time transform is taken in the frame co-moving with the free flow:
//! before the time DFT each spatial mode is multiplied by `e^{+it|ξ|²}`, so
//! the stored frequency is the modulation `μ = τ + |ξ|²` (the distance from
//! the paraboloid `τ = −|ξ|²`) rather than `τ` itself. For the continuous
//! transform this is an exact change of variables; on the grid it keeps the
//! free-evolution spectrum near `μ = 0` however large `|ξ|²` is, so a few
//! dozen time samples suffice where resolving `τ` directly would need
//! thousands.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Result, SmapError};
use crate::grid::GridSpec;
use crate::solver::ChartTrajectory;
use crate::spectral::cutoff::{psi, SUPPORT};
use crate::spectral::fft::{fft_all, fft_axes, Direction};
use crate::spectral::Representation;

pub const MIN_TIME_SAMPLES: usize = 16;

/// Symmetric window `[−T_w, T_w)` sampled at `M_t` points
/// `t_m = −T_w + 2mT_w/M_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub half_width: f64,
    pub samples: usize,
}

impl Default for TimeWindow {
    fn default() -> Self {
        Self {
            half_width: 1.0,
            samples: 64,
        }
    }
}

impl TimeWindow {
    pub fn new(half_width: f64, samples: usize) -> Result<Self> {
        if samples < MIN_TIME_SAMPLES {
            return Err(SmapError::WindowTooShort { samples });
        }
        if !(half_width > 0.0) {
            return Err(SmapError::DegenerateInput(format!("window half-width must be positive, got {half_width}")));
        }
        Ok(Self { half_width, samples })
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.half_width / self.samples as f64
    }

    pub fn time(&self, m: usize) -> f64 {
        -self.half_width + m as f64 * self.dt()
    }

    /// Window `ψ(t/T_w · (8/5)⁻¹)`. Since `ψ ≡ 1` on `[−5/4, 5/4]` this is
    /// identically one on the sampled interval: the trajectory is truncated
    /// to `[−T_w, T_w)` and, in the co-moving frame, free evolution is
    /// exactly periodic there, so the truncation adds no leakage.
    pub fn weight(&self, t: f64) -> f64 {
        psi(t / (self.half_width * SUPPORT))
    }

    /// Frequency of DFT index `q`; spacing `π/T_w`.
    pub fn frequency(&self, q: usize) -> f64 {
        let m = self.samples as isize;
        let q = q as isize;
        let s = if q < m / 2 { q } else { q - m };
        s as f64 * PI / self.half_width
    }

    pub fn max_frequency(&self) -> f64 {
        (self.samples / 2) as f64 * PI / self.half_width
    }
}

/// Physical-space samples `f(x, t_m)`, stored time-major.
#[derive(Debug, Clone)]
pub struct SpaceTimeSamples {
    grid: GridSpec,
    t0: f64,
    dt: f64,
    values: Vec<Complex64>,
}

impl SpaceTimeSamples {
    pub fn new(grid: GridSpec, t0: f64, dt: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() || values.len() % grid.len() != 0 {
            return Err(SmapError::GridMismatch(format!(
                "{} samples is not a whole number of {}-point slices",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, t0, dt, values })
    }

    /// Unwindowed samples of a trajectory.
    pub fn from_trajectory(traj: &ChartTrajectory) -> Self {
        let mut values = Vec::with_capacity(traj.len() * traj.grid().len());
        for u in traj.snapshots() {
            values.extend_from_slice(u.to_physical().values());
        }
        Self {
            grid: *traj.grid(),
            t0: traj.t0(),
            dt: traj.dt(),
            values,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time_samples(&self) -> usize {
        self.values.len() / self.grid.len()
    }

    pub fn time(&self, m: usize) -> f64 {
        self.t0 + m as f64 * self.dt
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn slice(&self, m: usize) -> &[Complex64] {
        let len = self.grid.len();
        &self.values[m * len..(m + 1) * len]
    }

    /// Zero every sample whose time falls outside `[lo, hi]`.
    pub fn restrict_time(&self, lo: f64, hi: f64) -> Self {
        let mut out = self.clone();
        let len = self.grid.len();
        for m in 0..self.time_samples() {
            let t = self.time(m);
            if t < lo || t > hi {
                out.values[m * len..(m + 1) * len].fill(Complex64::new(0.0, 0.0));
            }
        }
        out
    }

    /// `L²_{x,t}` with Riemann weights.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (self.grid.cell_volume() * self.dt * s).sqrt()
    }

    /// `sup_t ‖f(·,t)‖_{L²_x}`.
    pub fn sup_time_l2(&self) -> f64 {
        (0..self.time_samples())
            .map(|m| {
                let s: f64 = self.slice(m).iter().map(|v| v.norm_sqr()).sum();
                (self.grid.cell_volume() * s).sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Spectrum over `(μ, ξ)` with `μ = τ + |ξ|²`, stored with `μ` outermost.
#[derive(Debug, Clone)]
pub struct SpaceTimeSpectrum {
    grid: GridSpec,
    window: TimeWindow,
    values: Vec<Complex64>,
}

impl SpaceTimeSpectrum {
    pub fn from_values(grid: GridSpec, window: TimeWindow, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() * window.samples {
            return Err(SmapError::GridMismatch(format!(
                "{} values for a {}×{} spectrum",
                values.len(),
                window.samples,
                grid.len()
            )));
        }
        Ok(Self { grid, window, values })
    }

    pub fn zeros(grid: GridSpec, window: TimeWindow) -> Self {
        Self {
            grid,
            window,
            values: vec![Complex64::new(0.0, 0.0); grid.len() * window.samples],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn window(&self) -> &TimeWindow {
        &self.window
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Flat position of frequency index `q` and spatial frequency `f`.
    pub fn index(&self, q: usize, f: usize) -> usize {
        q * self.grid.len() + f
    }

    /// `μ = τ + |ξ|²` of row `q`.
    pub fn modulation(&self, q: usize) -> f64 {
        self.window.frequency(q)
    }

    /// `τ` of the entry `(q, f)`.
    pub fn tau(&self, q: usize, f: usize) -> f64 {
        let mut xi = vec![0.0; self.grid.dim()];
        self.grid.wavevector(f, &mut xi);
        self.modulation(q) - xi.iter().map(|v| v * v).sum::<f64>()
    }

    /// Quadrature weight of one entry, `cell volume · Δt`.
    pub fn weight(&self) -> f64 {
        self.grid.cell_volume() * self.window.dt()
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (self.weight() * s).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    /// Pointwise multiplier `m(ξ, μ)`.
    pub fn multiply(&self, m: impl Fn(&[f64], f64) -> f64 + Sync) -> Self {
        let len = self.grid.len();
        let dim = self.grid.dim();
        let table = self.grid.wavevector_table();
        let window = self.window;
        let mut values = self.values.clone();
        values.par_chunks_mut(len).enumerate().for_each(|(q, row)| {
            let mu = window.frequency(q);
            for (v, xi) in row.iter_mut().zip(table.chunks_exact(dim)) {
                *v *= m(xi, mu);
            }
        });
        Self {
            grid: self.grid,
            window,
            values,
        }
    }

    /// Multiplier depending on `ξ` only, tabulated once.
    pub fn multiply_spatial(&self, weights: &[f64]) -> Self {
        let len = self.grid.len();
        let mut values = self.values.clone();
        values.par_chunks_mut(len).for_each(|row| {
            for (v, w) in row.iter_mut().zip(weights) {
                *v *= w;
            }
        });
        Self {
            grid: self.grid,
            window: self.window,
            values,
        }
    }

    /// Back to windowed physical samples on the window's time grid.
    pub fn to_samples(&self) -> SpaceTimeSamples {
        let len = self.grid.len();
        let mut values = self.values.clone();
        let mut shape = vec![self.window.samples];
        shape.extend(self.grid.shape());
        fft_axes(&mut values, &shape, &[0], Direction::Inverse);
        let k2 = self.grid.wavenumber_sq_table();
        let spatial = self.grid.shape();
        let window = self.window;
        values.par_chunks_mut(len).enumerate().for_each(|(m, row)| {
            let t = window.time(m);
            for (v, k) in row.iter_mut().zip(&k2) {
                *v *= Complex64::from_polar(1.0, -t * k);
            }
            fft_all(row, &spatial, Direction::Inverse);
        });
        SpaceTimeSamples {
            grid: self.grid,
            t0: -window.half_width,
            dt: window.dt(),
            values,
        }
    }
}

/// Frequency-space snapshot at time `t`: a stored sample when `t` lies in the
/// solve interval, free evolution from the nearer end point otherwise. The
/// result is returned already multiplied by `e^{+it|ξ|²}`.
fn comoving_slice(traj: &ChartTrajectory, t: f64, k2: &[f64]) -> Result<Vec<Complex64>> {
    let eps = 1e-12 * (1.0 + t.abs());
    let (reference, t_ref) = if t < traj.t0() - eps {
        (traj.first(), traj.t0())
    } else if t > traj.final_time() + eps {
        (traj.last(), traj.final_time())
    } else {
        let m = traj.index_of(t).ok_or_else(|| {
            SmapError::GridMismatch(format!(
                "window time {t} is not a sample of the trajectory (dt = {})",
                traj.dt()
            ))
        })?;
        (traj.snapshot(m), traj.time(m))
    };
    let hat = reference.to_representation(Representation::Frequency);
    Ok(hat
        .values()
        .iter()
        .zip(k2)
        .map(|(v, k)| v * Complex64::from_polar(1.0, t_ref * k))
        .collect())
}

/// The windowed trajectory `ψ_w(t)·u(x,t)` on the window's time grid.
pub fn window_samples(traj: &ChartTrajectory, window: &TimeWindow) -> Result<SpaceTimeSamples> {
    Ok(spacetime_transform(traj, window)?.to_samples())
}

/// Multiply by the window and take the unitary `(d+1)`-dimensional DFT.
pub fn spacetime_transform(traj: &ChartTrajectory, window: &TimeWindow) -> Result<SpaceTimeSpectrum> {
    let window = TimeWindow::new(window.half_width, window.samples)?;
    let grid = *traj.grid();
    let k2 = grid.wavenumber_sq_table();
    let rows: Vec<Vec<Complex64>> = (0..window.samples)
        .into_par_iter()
        .map(|m| {
            let t = window.time(m);
            let w = window.weight(t);
            if w == 0.0 {
                return Ok(vec![Complex64::new(0.0, 0.0); grid.len()]);
            }
            let mut row = comoving_slice(traj, t, &k2)?;
            row.iter_mut().for_each(|v| *v *= w);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut values: Vec<Complex64> = rows.into_iter().flatten().collect();
    let mut shape = vec![window.samples];
    shape.extend(grid.shape());
    fft_axes(&mut values, &shape, &[0], Direction::Forward);
    Ok(SpaceTimeSpectrum { grid, window, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{free_trajectory, Trajectory};
    use crate::spectral::ComplexField;

    fn grid() -> GridSpec {
        GridSpec::new(2, 16, 1.0).unwrap()
    }

    #[test]
    fn short_windows_are_rejected() {
        assert!(matches!(TimeWindow::new(1.0, 8), Err(SmapError::WindowTooShort { samples: 8 })));
    }

    #[test]
    fn zero_trajectory_has_zero_spectrum() {
        let g = grid();
        let z = ComplexField::zeros(g, 0.0, Representation::Physical);
        let traj = free_trajectory(&z, 0.5, 1.0 / 64.0).unwrap();
        let s = spacetime_transform(&traj, &TimeWindow::default()).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn plancherel_and_inverse() {
        let g = grid();
        let phi = ComplexField::from_fn(g, 0.0, |x| {
            Complex64::new((-(x[0] * x[0] + 2.0 * x[1] * x[1])).exp(), x[0].sin() * 0.1)
        });
        let traj = free_trajectory(&phi, 0.5, 1.0 / 64.0).unwrap();
        let window = TimeWindow::default();
        let spec = spacetime_transform(&traj, &window).unwrap();
        let samples = spec.to_samples();

        // independent windowed samples straight from the propagator
        let mut direct = Vec::new();
        for m in 0..window.samples {
            let t = window.time(m);
            let u = crate::spectral::free_propagate(&phi, t).to_physical();
            direct.extend(u.values().iter().map(|v| v * window.weight(t)));
        }
        let direct = SpaceTimeSamples::new(g, -1.0, window.dt(), direct).unwrap();
        let diff = direct
            .values()
            .iter()
            .zip(samples.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        assert!(diff < 1e-13, "{diff:e}");
        let rel = (spec.l2_norm() - direct.l2_norm()).abs() / direct.l2_norm();
        assert!(rel < 1e-12, "{rel:e}");
    }

    #[test]
    fn window_times_must_be_samples() {
        let g = grid();
        let phi = ComplexField::plane_wave(g, 0.0, &[1.0, 0.0], Complex64::new(1.0, 0.0));
        // window step 1/32 does not land on a 1/24 grid
        let traj = free_trajectory(&phi, 0.5, 1.0 / 24.0).unwrap();
        assert!(matches!(
            spacetime_transform(&traj, &TimeWindow::default()),
            Err(SmapError::GridMismatch(_))
        ));
    }

    /// Single mode: the `μ`-profile is the DFT of the sampled window, computed
    /// here by direct summation; ≥ 99% of the row mass lies within `|μ| ≤ 16/T_w`.
    #[test]
    fn single_mode_concentrates_near_the_paraboloid() {
        let g = grid();
        let xi0 = [3.0, -2.0];
        let phi = ComplexField::plane_wave(g, 0.0, &xi0, Complex64::new(1.0, 0.0));
        let traj = free_trajectory(&phi, 0.5, 1.0 / 64.0).unwrap();
        let window = TimeWindow::default();
        let spec = spacetime_transform(&traj, &window).unwrap();
        let f0 = (0..g.len())
            .find(|&f| {
                let mut xi = [0.0; 2];
                g.wavevector(f, &mut xi);
                xi == xi0
            })
            .unwrap();

        let mt = window.samples;
        let amp = (g.len() as f64).sqrt();
        let mut inside = 0.0;
        let mut total = 0.0;
        for q in 0..mt {
            let naive: Complex64 = (0..mt)
                .map(|m| {
                    let ang = -2.0 * PI * (q * m) as f64 / mt as f64;
                    Complex64::from_polar(window.weight(window.time(m)), ang)
                })
                .sum::<Complex64>()
                * (amp / (mt as f64).sqrt());
            let got = spec.values()[spec.index(q, f0)];
            // the plane wave's phase at the first grid point drops out of the modulus
            assert!((got.norm() - naive.norm()).abs() < 1e-12 * amp, "q = {q}");
            let tau = spec.tau(q, f0);
            total += got.norm_sqr();
            if (tau + xi0[0] * xi0[0] + xi0[1] * xi0[1]).abs() <= 16.0 / window.half_width {
                inside += got.norm_sqr();
            }
        }
        assert!(inside / total > 0.99, "{}", inside / total);
        // nothing off the ξ₀ column
        let off: f64 = (0..mt)
            .flat_map(|q| (0..g.len()).filter(move |&f| f != f0).map(move |f| (q, f)))
            .map(|(q, f)| spec.values()[spec.index(q, f)].norm())
            .fold(0.0, f64::max);
        assert!(off < 1e-12);
    }

    #[test]
    fn symmetric_trajectories_are_used_as_is() {
        let g = grid();
        let phi = ComplexField::from_fn(g, -1.0, |x| Complex64::new((-(x[0] * x[0] + x[1] * x[1])).exp(), 0.0));
        let dt = 1.0 / 32.0;
        let snaps: Vec<_> = (0..=64)
            .map(|m| crate::spectral::free_propagate(&phi, m as f64 * dt))
            .collect();
        let traj = Trajectory::new(-1.0, dt, snaps).unwrap();
        let mut phi0 = crate::spectral::free_propagate(&phi, 1.0);
        phi0.set_time(0.0);
        let half = free_trajectory(&phi0, 0.5, dt).unwrap();
        let w = TimeWindow::default();
        let a = spacetime_transform(&traj, &w).unwrap();
        let b = spacetime_transform(&half, &w).unwrap();
        let diff = a.values().iter().zip(b.values()).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
        assert!(diff < 1e-12, "{diff:e}");
    }
}
