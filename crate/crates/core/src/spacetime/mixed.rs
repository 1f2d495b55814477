//! Directional mixed norms `L^{p,q}_e`: `L^p` in the offset `r = x·e`,
//! `L^q` over the transverse fibre and time.
//!
//! Only lattice directions are supported — every component of `e` is `0` or
//! `±1/√m` — so that the level sets of `x·e` are exact unions of grid points:
//! the offset index is `c = Σ_a s_a i_a mod n` with spacing `dx/√m`.

use rayon::prelude::*;

use super::spectrum::SpaceTimeSamples;
use crate::error::{Result, SmapError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    One,
    Two,
    Infinity,
}

impl Exponent {
    fn fold(self, values: impl Iterator<Item = (f64, f64)>) -> f64 {
        // (weight, |f|) pairs
        match self {
            Exponent::One => values.map(|(w, v)| w * v).sum(),
            Exponent::Two => values.map(|(w, v)| w * v * v).sum::<f64>().sqrt(),
            Exponent::Infinity => values.filter(|(w, _)| *w > 0.0).map(|(_, v)| v).fold(0.0, f64::max),
        }
    }
}

/// Finite set of unit directions closed under `e ↦ −e`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    directions: Vec<Vec<f64>>,
}

impl DirectionSet {
    pub fn new(directions: Vec<Vec<f64>>) -> Result<Self> {
        let dim = directions.first().map(|e| e.len()).ok_or_else(|| {
            SmapError::DegenerateInput("direction set is empty".into())
        })?;
        for e in &directions {
            if e.len() != dim {
                return Err(SmapError::DegenerateInput("directions of mixed dimension".into()));
            }
            let n: f64 = e.iter().map(|v| v * v).sum::<f64>().sqrt();
            if (n - 1.0).abs() > 1e-15 {
                return Err(SmapError::DegenerateInput(format!("|e| = {n}, not a unit vector")));
            }
            let neg: Vec<f64> = e.iter().map(|v| -v).collect();
            if !directions.iter().any(|o| o.iter().zip(&neg).all(|(a, b)| (a - b).abs() < 1e-15)) {
                return Err(SmapError::DegenerateInput(format!("{e:?} has no opposite in the set")));
            }
        }
        Ok(Self { directions })
    }

    /// Coordinate axes and face diagonals, both signs.
    pub fn lattice(dim: usize) -> Self {
        let mut directions = Vec::new();
        for a in 0..dim {
            for s in [1.0, -1.0] {
                let mut e = vec![0.0; dim];
                e[a] = s;
                directions.push(e);
            }
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for a in 0..dim {
            for b in a + 1..dim {
                for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let mut e = vec![0.0; dim];
                    e[a] = sa * h;
                    e[b] = sb * h;
                    directions.push(e);
                }
            }
        }
        Self { directions }
    }

    /// Coordinate axes only.
    pub fn axes(dim: usize) -> Self {
        let mut directions = Vec::new();
        for a in 0..dim {
            for s in [1.0, -1.0] {
                let mut e = vec![0.0; dim];
                e[a] = s;
                directions.push(e);
            }
        }
        Self { directions }
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.directions.iter().map(|e| e.as_slice())
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.directions[i]
    }
}

/// Integer signs `s_a` of a lattice direction, or `UnsupportedDirection`.
pub fn lattice_signs(e: &[f64]) -> Result<Vec<i64>> {
    let m = e.iter().filter(|v| v.abs() > 1e-12).count();
    if m == 0 {
        return Err(SmapError::UnsupportedDirection);
    }
    let level = 1.0 / (m as f64).sqrt();
    e.iter()
        .map(|v| {
            if v.abs() <= 1e-12 {
                Ok(0)
            } else if (v.abs() - level).abs() <= 1e-12 {
                Ok(v.signum() as i64)
            } else {
                Err(SmapError::UnsupportedDirection)
            }
        })
        .collect()
}

/// `‖f‖_{L^{p,q}_e}` over all stored samples.
pub fn lpq_norm(f: &SpaceTimeSamples, e: &[f64], p: Exponent, q: Exponent) -> Result<f64> {
    let grid = *f.grid();
    if e.len() != grid.dim() {
        return Err(SmapError::GridMismatch(format!(
            "direction of dimension {} on a {}-d grid",
            e.len(),
            grid.dim()
        )));
    }
    let signs = lattice_signs(e)?;
    let m = signs.iter().filter(|s| **s != 0).count();
    let n = grid.n();
    let dr = grid.dx() / (m as f64).sqrt();
    let point_weight = grid.cell_volume() * f.dt() / dr;

    // spatial points grouped by fibre label
    let mut idx = vec![0usize; grid.dim()];
    let mut fibres: Vec<Vec<usize>> = vec![Vec::new(); n];
    for flat in 0..grid.len() {
        grid.unflatten(flat, &mut idx);
        let c: i64 = idx.iter().zip(&signs).map(|(i, s)| *i as i64 * s).sum();
        fibres[c.rem_euclid(n as i64) as usize].push(flat);
    }

    let per_fibre: Vec<f64> = fibres
        .par_iter()
        .map(|members| {
            let slices = (0..f.time_samples()).map(|t| f.slice(t));
            match q {
                Exponent::One => {
                    point_weight * slices.map(|s| members.iter().map(|&i| s[i].norm()).sum::<f64>()).sum::<f64>()
                }
                Exponent::Two => (point_weight
                    * slices.map(|s| members.iter().map(|&i| s[i].norm_sqr()).sum::<f64>()).sum::<f64>())
                .sqrt(),
                Exponent::Infinity => slices
                    .map(|s| members.iter().map(|&i| s[i].norm_sqr()).fold(0.0, f64::max))
                    .fold(0.0, f64::max)
                    .sqrt(),
            }
        })
        .collect();
    Ok(p.fold(per_fibre.into_iter().map(|v| (dr, v))))
}

/// Length of the offset range along `e`, `n·dx/√m`.
pub fn offset_extent(grid: &crate::grid::GridSpec, e: &[f64]) -> Result<f64> {
    let m = lattice_signs(e)?.iter().filter(|s| **s != 0).count();
    Ok(grid.n() as f64 * grid.dx() / (m as f64).sqrt())
}
