//! Complex fields on a periodic grid and the Fourier multipliers acting on
//! them: `J^σ`, Littlewood–Paley projections, derivatives and the free
//! Schrödinger group `W(t)`.
//!
//! Transforms are unitary, so the discrete `L²` norm
//! `(cell volume · Σ|u|²)^{1/2}` is the same in both representations.

pub mod cutoff;
pub mod fft;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, SmapError};
use crate::grid::GridSpec;
pub use fft::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Frequency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    time: f64,
    repr: Representation,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn zeros(grid: GridSpec, time: f64, repr: Representation) -> Self {
        Self {
            grid,
            time,
            repr,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(
        grid: GridSpec,
        time: f64,
        repr: Representation,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(SmapError::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            time,
            repr,
            values,
        })
    }

    /// Sample `f(x)` at every grid point (physical representation).
    pub fn from_fn(grid: GridSpec, time: f64, f: impl Fn(&[f64]) -> Complex64 + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map_init(
                || vec![0.0; grid.dim()],
                |x, i| {
                    grid.point(i, x);
                    f(x)
                },
            )
            .collect();
        Self {
            grid,
            time,
            repr: Representation::Physical,
            values,
        }
    }

    /// `amplitude · e^{i x·ξ}` for a wavevector on the grid's lattice.
    pub fn plane_wave(grid: GridSpec, time: f64, xi: &[f64], amplitude: Complex64) -> Self {
        Self::from_fn(grid, time, |x| {
            let phase: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
            amplitude * Complex64::from_polar(1.0, phase)
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Unitary transform; `direction` must be opposite to the current tag.
    pub fn transform(&self, direction: Direction) -> Result<Self> {
        let expected = match direction {
            Direction::Forward => Representation::Physical,
            Direction::Inverse => Representation::Frequency,
        };
        if self.repr != expected {
            return Err(SmapError::RepresentationMismatch {
                expected,
                found: self.repr,
            });
        }
        let mut out = self.clone();
        fft::fft_all(&mut out.values, &self.grid.shape(), direction);
        out.repr = match direction {
            Direction::Forward => Representation::Frequency,
            Direction::Inverse => Representation::Physical,
        };
        Ok(out)
    }

    pub fn to_frequency(&self) -> Self {
        match self.repr {
            Representation::Frequency => self.clone(),
            Representation::Physical => self.transform(Direction::Forward).expect("tag checked"),
        }
    }

    pub fn to_physical(&self) -> Self {
        match self.repr {
            Representation::Physical => self.clone(),
            Representation::Frequency => self.transform(Direction::Inverse).expect("tag checked"),
        }
    }

    pub fn to_representation(&self, repr: Representation) -> Self {
        match repr {
            Representation::Physical => self.to_physical(),
            Representation::Frequency => self.to_frequency(),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.to_physical()
            .values
            .iter()
            .fold(0.0f64, |m, v| m.max(v.norm()))
    }

    /// `‖J^σ u‖_{L²}`.
    pub fn hs_norm(&self, sigma: f64) -> f64 {
        let f = self.to_frequency();
        let k2 = self.grid.wavenumber_sq_table();
        let s: f64 = f
            .values
            .iter()
            .zip(&k2)
            .map(|(v, k)| (1.0 + k).powf(sigma) * v.norm_sqr())
            .sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    pub fn conj(&self) -> Self {
        let mut out = self.to_physical();
        out.values.iter_mut().for_each(|v| *v = v.conj());
        out.to_representation(self.repr)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= a);
        out
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(SmapError::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// `self + a·other`, in the representation of `self`.
    pub fn axpy(&self, a: Complex64, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let other = other.to_representation(self.repr);
        let mut out = self.clone();
        out.values
            .iter_mut()
            .zip(&other.values)
            .for_each(|(v, w)| *v += a * w);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// Multiply the spectrum by `m(ξ)` and return in the input representation.
    pub fn apply_multiplier(&self, m: impl Fn(&[f64]) -> Complex64 + Sync) -> Self {
        let mut f = self.to_frequency();
        let grid = self.grid;
        f.values.par_iter_mut().enumerate().for_each_init(
            || vec![0.0; grid.dim()],
            |xi, (i, v)| {
                grid.wavevector(i, xi);
                *v *= m(xi);
            },
        );
        f.to_representation(self.repr)
    }

    /// Like [`apply_multiplier`](Self::apply_multiplier) but the closure also
    /// sees the per-axis indices, for multipliers that treat the Nyquist mode
    /// specially.
    fn apply_indexed_multiplier(&self, m: impl Fn(&[usize], &[f64]) -> Complex64 + Sync) -> Self {
        let mut f = self.to_frequency();
        let grid = self.grid;
        f.values.par_iter_mut().enumerate().for_each_init(
            || (vec![0usize; grid.dim()], vec![0.0; grid.dim()]),
            |(idx, xi), (i, v)| {
                grid.unflatten(i, idx);
                for (x, &j) in xi.iter_mut().zip(idx.iter()) {
                    *x = grid.wavenumber(j);
                }
                *v *= m(idx, xi);
            },
        );
        f.to_representation(self.repr)
    }
}

fn norm_sq(xi: &[f64]) -> f64 {
    xi.iter().map(|v| v * v).sum()
}

/// Littlewood–Paley projection `Q_k`: multiply the spectrum by `η_k(|ξ|)`.
pub fn lp_project(u: &ComplexField, k: u32) -> ComplexField {
    u.apply_multiplier(|xi| Complex64::new(cutoff::eta_shell(k, norm_sq(xi).sqrt()), 0.0))
}

/// `J^σ`, the multiplier `(1+|ξ|²)^{σ/2}`; negative σ allowed.
pub fn apply_jsigma(u: &ComplexField, sigma: f64) -> ComplexField {
    u.apply_multiplier(|xi| Complex64::new((1.0 + norm_sq(xi)).powf(0.5 * sigma), 0.0))
}

/// Free Schrödinger group `W(t)`: multiplier `e^{-it|ξ|²}`.
pub fn free_propagate(phi: &ComplexField, t: f64) -> ComplexField {
    let mut out = phi.apply_multiplier(|xi| Complex64::from_polar(1.0, -t * norm_sq(xi)));
    out.time = phi.time + t;
    out
}

/// `∂_{x_j}` with a 1-based axis index; the Nyquist mode is dropped.
pub fn gradient(u: &ComplexField, axis: usize) -> Result<ComplexField> {
    let dim = u.grid.dim();
    if axis == 0 || axis > dim {
        return Err(SmapError::AxisOutOfRange { axis, dim });
    }
    let a = axis - 1;
    let grid = u.grid;
    Ok(u.apply_indexed_multiplier(|idx, xi| {
        if grid.is_nyquist_index(idx[a]) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, xi[a])
        }
    }))
}

/// Spectral Laplacian, multiplier `-|ξ|²`.
pub fn laplacian(u: &ComplexField) -> ComplexField {
    u.apply_multiplier(|xi| Complex64::new(-norm_sq(xi), 0.0))
}
