//! Energy of the difference of two sphere trajectories and its empirical
//! growth rate.

use super::trajectory::{derivative4, SphereTrajectory};
use crate::error::{Result, SmapError};
use crate::geometry::SphereField;
use crate::spectral::{gradient, ComplexField, Representation};

/// Below this, `E(t)` is treated as zero.
pub const ENERGY_FLOOR: f64 = 1e-28;

#[derive(Debug, Clone, PartialEq)]
pub struct GronwallReport {
    pub times: Vec<f64>,
    /// `E(t) = ‖q‖²_{L²} + Σ_l ‖∂_l q‖²_{L²}` with `q = s' − s`.
    pub energy: Vec<f64>,
    /// `Ė/E`, `NaN` where `E` is below the floor.
    pub ratio: Vec<f64>,
    /// Empirical Gronwall constant `sup_t Ė/E`.
    pub c_s: f64,
}

impl GronwallReport {
    /// `max_t E(t) e^{−C_s t} / E(0)`; at most one (up to differencing error)
    /// when the Gronwall bound holds.
    pub fn bound_excess(&self) -> f64 {
        let e0 = self.energy[0];
        self.times
            .iter()
            .zip(&self.energy)
            .map(|(t, e)| e * (-self.c_s * t).exp() / e0)
            .fold(0.0, f64::max)
    }
}

fn energy(a: &SphereField, b: &SphereField) -> f64 {
    let grid = *a.grid();
    let mut total = 0.0;
    for l in 0..3 {
        let values = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| num_complex::Complex64::new(y[l] - x[l], 0.0))
            .collect();
        let q = ComplexField::from_values(grid, a.time(), Representation::Physical, values)
            .expect("same grid")
            .to_frequency();
        total += q.l2_norm().powi(2);
        for axis in 1..=grid.dim() {
            total += gradient(&q, axis).expect("axis in range").l2_norm().powi(2);
        }
    }
    total
}

/// `E(t_m)` for every sample of two identically sampled trajectories.
pub fn energy_series(traj: &SphereTrajectory, other: &SphereTrajectory) -> Result<Vec<f64>> {
    traj.same_sampling(other)?;
    Ok(traj
        .snapshots()
        .iter()
        .zip(other.snapshots())
        .map(|(a, b)| energy(a, b))
        .collect())
}

/// Energy series, fourth-order differenced growth rate and its supremum.
/// Identical trajectories (energy below the floor everywhere) are reported as
/// [`SmapError::DegenerateInput`].
pub fn gronwall_diagnostic(traj: &SphereTrajectory, other: &SphereTrajectory) -> Result<GronwallReport> {
    let energy = energy_series(traj, other)?;
    if energy.iter().all(|e| *e < ENERGY_FLOOR) {
        return Err(SmapError::DegenerateInput("identical trajectories: E(t) vanishes".into()));
    }
    let de = derivative4(&energy, traj.dt())?;
    let ratio: Vec<f64> = energy
        .iter()
        .zip(&de)
        .map(|(e, d)| if *e < ENERGY_FLOOR { f64::NAN } else { d / e })
        .collect();
    let c_s = ratio
        .iter()
        .filter(|r| r.is_finite())
        .fold(f64::NEG_INFINITY, |m, r| m.max(*r));
    Ok(GronwallReport {
        times: traj.times(),
        energy,
        ratio,
        c_s,
    })
}
