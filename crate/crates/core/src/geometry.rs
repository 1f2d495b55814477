//! Sphere-valued fields, the stereographic chart at the north pole
//! `Q = (0,0,1)`, and the Sobolev distance between sphere fields.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, SmapError};
use crate::grid::GridSpec;
use crate::spectral::{ComplexField, Representation};

/// Points with `1 + s₃ <= CHART_GUARD` are rejected by [`stereo_project`].
pub const CHART_GUARD: f64 = 1e-6;

pub const NORTH_POLE: [f64; 3] = [0.0, 0.0, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct SphereField {
    grid: GridSpec,
    time: f64,
    values: Vec<[f64; 3]>,
    /// Largest `||v| - 1|` seen before renormalisation.
    normalization_defect: f64,
}

impl SphereField {
    /// Build from raw 3-vectors, renormalising each to unit length.
    pub fn from_vectors(grid: GridSpec, time: f64, mut values: Vec<[f64; 3]>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(SmapError::GridMismatch(format!(
                "{} vectors for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        let mut defect = 0.0f64;
        for v in values.iter_mut() {
            let r = norm3(v);
            if r == 0.0 || !r.is_finite() {
                return Err(SmapError::DegenerateInput(
                    "cannot normalise a zero or non-finite vector".into(),
                ));
            }
            defect = defect.max((r - 1.0).abs());
            v.iter_mut().for_each(|c| *c /= r);
        }
        Ok(Self {
            grid,
            time,
            values,
            normalization_defect: defect,
        })
    }

    /// Take vectors as they are, without renormalising; the caller vouches
    /// for the sphere constraint (integrator output).
    pub fn from_raw(grid: GridSpec, time: f64, values: Vec<[f64; 3]>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(SmapError::GridMismatch(format!(
                "{} vectors for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        let defect = values.iter().fold(0.0f64, |m, v| m.max((norm3(v) - 1.0).abs()));
        Ok(Self {
            grid,
            time,
            values,
            normalization_defect: defect,
        })
    }

    pub fn constant(grid: GridSpec, time: f64, v: [f64; 3]) -> Result<Self> {
        Self::from_vectors(grid, time, vec![v; grid.len()])
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

    pub fn values(&self) -> &[[f64; 3]] {
        &self.values
    }

    pub fn normalization_defect(&self) -> f64 {
        self.normalization_defect
    }

    /// `max_x ||s(x)| - 1|` of the stored values.
    pub fn unit_defect(&self) -> f64 {
        self.values
            .iter()
            .fold(0.0f64, |m, v| m.max((norm3(v) - 1.0).abs()))
    }

    /// Component `l` (0-based) as a complex field in physical representation.
    pub fn component(&self, l: usize) -> ComplexField {
        let values = self.values.iter().map(|v| Complex64::new(v[l], 0.0)).collect();
        ComplexField::from_values(self.grid, self.time, Representation::Physical, values)
            .expect("grid sizes agree")
    }
}

pub fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Stereographic projection from the south pole: `g = (s₁ + i s₂)/(1 + s₃)`.
pub fn stereo_project(s: &SphereField) -> Result<ComplexField> {
    let (worst_idx, worst) = s
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (i, 1.0 + v[2]))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    if worst <= CHART_GUARD {
        return Err(SmapError::ChartViolation {
            index: worst_idx,
            margin: worst,
        });
    }
    let values = s
        .values
        .par_iter()
        .map(|v| Complex64::new(v[0], v[1]) / (1.0 + v[2]))
        .collect();
    ComplexField::from_values(s.grid, s.time, Representation::Physical, values)
}

/// Inverse chart: `s = (2 Re g, 2 Im g, 1 - |g|²)/(1 + |g|²)`.
pub fn stereo_lift(g: &ComplexField) -> SphereField {
    let phys = g.to_physical();
    let values: Vec<[f64; 3]> = phys
        .values()
        .par_iter()
        .map(|z| {
            let m = z.norm_sqr();
            let d = 1.0 + m;
            [2.0 * z.re / d, 2.0 * z.im / d, (1.0 - m) / d]
        })
        .collect();
    SphereField::from_raw(*g.grid(), g.time(), values).expect("grid sizes agree")
}

/// `[Σ_l ‖f_l − f'_l‖²_{H^σ}]^{1/2}`.
pub fn sobolev_distance(f: &SphereField, g: &SphereField, sigma: f64) -> Result<f64> {
    if f.grid != g.grid {
        return Err(SmapError::GridMismatch(format!("{:?} vs {:?}", f.grid, g.grid)));
    }
    let mut total = 0.0;
    for l in 0..3 {
        let values = f
            .values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| Complex64::new(a[l] - b[l], 0.0))
            .collect();
        let diff = ComplexField::from_values(f.grid, f.time, Representation::Physical, values)?;
        total += diff.hs_norm(sigma).powi(2);
    }
    Ok(total.sqrt())
}

/// Rotate every vector of `s` by the rotation taking `q` to the north pole.
/// Lets data centred at a general base point go through the fixed chart.
pub fn rotate_to_north(s: &SphereField, q: [f64; 3]) -> Result<SphereField> {
    let r = norm3(&q);
    if r == 0.0 {
        return Err(SmapError::DegenerateInput("zero base point".into()));
    }
    let q = [q[0] / r, q[1] / r, q[2] / r];
    let axis = cross(&q, &NORTH_POLE);
    let sin = norm3(&axis);
    let cos = dot(&q, &NORTH_POLE);
    let rotate = |v: &[f64; 3]| -> [f64; 3] {
        if sin < 1e-15 {
            return if cos > 0.0 { *v } else { [v[0], -v[1], -v[2]] };
        }
        let k = [axis[0] / sin, axis[1] / sin, axis[2] / sin];
        let kxv = cross(&k, v);
        let kv = dot(&k, v);
        // Rodrigues
        std::array::from_fn(|i| v[i] * cos + kxv[i] * sin + k[i] * kv * (1.0 - cos))
    };
    SphereField::from_vectors(s.grid, s.time, s.values.iter().map(rotate).collect())
}
