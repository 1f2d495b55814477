//! Uniform periodic grids on the box `[-πP, πP)^d`.
//!
//! Samples are stored row-major with the last axis fastest. The wavenumber
//! attached to index `j` along an axis is `j/P` for `j < n/2` and `(j-n)/P`
//! otherwise, so the Nyquist index carries `-n/(2P)`.

use std::f64::consts::PI;

use crate::error::{Result, SmapError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    n: usize,
    period: f64,
}

impl GridSpec {
    pub fn new(dim: usize, n: usize, period: f64) -> Result<Self> {
        if dim == 0 {
            return Err(SmapError::InvalidGrid("dimension must be at least 1".into()));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(SmapError::InvalidGrid(format!(
                "points per axis must be a power of two >= 8, got {n}"
            )));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(SmapError::InvalidGrid(format!("period must be positive, got {period}")));
        }
        Ok(Self { dim, n, period })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Total number of grid points, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.n; self.dim]
    }

    pub fn dx(&self) -> f64 {
        2.0 * PI * self.period / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        (2.0 * PI * self.period).powi(self.dim as i32)
    }

    /// Largest representable wavenumber magnitude per axis, `n/(2P)`.
    pub fn nyquist(&self) -> f64 {
        self.n as f64 / (2.0 * self.period)
    }

    /// Signed wavenumber for index `j` along one axis.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.n as isize;
        let j = j as isize;
        let m = if j < n / 2 { j } else { j - n };
        m as f64 / self.period
    }

    pub fn is_nyquist_index(&self, j: usize) -> bool {
        j == self.n / 2
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        -PI * self.period + j as f64 * self.dx()
    }

    /// Multi-index of a flat (row-major) position.
    pub fn unflatten(&self, mut flat: usize, out: &mut [usize]) {
        for axis in (0..self.dim).rev() {
            out[axis] = flat % self.n;
            flat /= self.n;
        }
    }

    pub fn point(&self, mut flat: usize, out: &mut [f64]) {
        for axis in (0..self.dim).rev() {
            out[axis] = self.coordinate(flat % self.n);
            flat /= self.n;
        }
    }

    /// Wavevector of a flat frequency-domain position.
    pub fn wavevector(&self, mut flat: usize, out: &mut [f64]) {
        for axis in (0..self.dim).rev() {
            out[axis] = self.wavenumber(flat % self.n);
            flat /= self.n;
        }
    }

    /// Wavevectors of every frequency position, `len × dim`, row-major.
    pub fn wavevector_table(&self) -> Vec<f64> {
        let mut table = vec![0.0; self.len() * self.dim];
        for (f, xi) in table.chunks_exact_mut(self.dim).enumerate() {
            self.wavevector(f, xi);
        }
        table
    }

    /// `|ξ|²` for every frequency position.
    pub fn wavenumber_sq_table(&self) -> Vec<f64> {
        let mut xi = vec![0.0; self.dim];
        (0..self.len())
            .map(|f| {
                self.wavevector(f, &mut xi);
                xi.iter().map(|v| v * v).sum()
            })
            .collect()
    }

    /// Highest dyadic shell that can carry energy on this grid.
    pub fn k_max(&self) -> usize {
        let top = (self.dim as f64).sqrt() * self.nyquist();
        (top.log2().ceil().max(0.0) as usize) + 1
    }

    /// Same resolution doubled along every axis, same box.
    pub fn refined(&self) -> Self {
        Self {
            dim: self.dim,
            n: self.n * 2,
            period: self.period,
        }
    }
}
