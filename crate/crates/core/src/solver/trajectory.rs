use crate::error::{Result, SmapError};
use crate::geometry::SphereField;
use crate::grid::GridSpec;
use crate::spectral::ComplexField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryKind {
    ComplexChart,
    Sphere,
}

/// Snapshot types a [`Trajectory`] can hold.
pub trait Snapshot: Clone + Send + Sync {
    const KIND: TrajectoryKind;
    fn grid(&self) -> &GridSpec;
    fn time(&self) -> f64;
}

impl Snapshot for ComplexField {
    const KIND: TrajectoryKind = TrajectoryKind::ComplexChart;
    fn grid(&self) -> &GridSpec {
        ComplexField::grid(self)
    }
    fn time(&self) -> f64 {
        ComplexField::time(self)
    }
}

impl Snapshot for SphereField {
    const KIND: TrajectoryKind = TrajectoryKind::Sphere;
    fn grid(&self) -> &GridSpec {
        SphereField::grid(self)
    }
    fn time(&self) -> f64 {
        SphereField::time(self)
    }
}

/// Uniformly sampled fields `t_m = t_0 + m·Δt`, `m = 0..=M`, on one grid.
#[derive(Debug, Clone)]
pub struct Trajectory<F> {
    grid: GridSpec,
    t0: f64,
    dt: f64,
    snapshots: Vec<F>,
}

pub type ChartTrajectory = Trajectory<ComplexField>;
pub type SphereTrajectory = Trajectory<SphereField>;

impl<F: Snapshot> Trajectory<F> {
    pub fn new(t0: f64, dt: f64, snapshots: Vec<F>) -> Result<Self> {
        let first = snapshots
            .first()
            .ok_or_else(|| SmapError::DegenerateInput("trajectory needs at least one snapshot".into()))?;
        let grid = *first.grid();
        if !(dt > 0.0) {
            return Err(SmapError::DegenerateInput(format!("time step must be positive, got {dt}")));
        }
        for (m, s) in snapshots.iter().enumerate() {
            if *s.grid() != grid {
                return Err(SmapError::GridMismatch(format!("snapshot {m} is on a different grid")));
            }
            let expect = t0 + m as f64 * dt;
            if (s.time() - expect).abs() > 1e-14 * (1.0 + expect.abs()) * (m as f64 + 1.0) {
                return Err(SmapError::DegenerateInput(format!(
                    "snapshot {m} has time {} but the uniform grid expects {expect}",
                    s.time()
                )));
            }
        }
        Ok(Self {
            grid,
            t0,
            dt,
            snapshots,
        })
    }

    pub fn kind(&self) -> TrajectoryKind {
        F::KIND
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn time(&self, m: usize) -> f64 {
        self.t0 + m as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.time(m)).collect()
    }

    pub fn final_time(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn snapshots(&self) -> &[F] {
        &self.snapshots
    }

    pub fn snapshot(&self, m: usize) -> &F {
        &self.snapshots[m]
    }

    pub fn first(&self) -> &F {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &F {
        &self.snapshots[self.len() - 1]
    }

    pub fn into_snapshots(self) -> Vec<F> {
        self.snapshots
    }

    /// Index of the sample at time `t`, if `t` is on the grid.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let m = ((t - self.t0) / self.dt).round();
        if m < 0.0 || m as usize >= self.len() {
            return None;
        }
        let m = m as usize;
        ((self.time(m) - t).abs() <= 1e-12 * (1.0 + t.abs())).then_some(m)
    }

    pub fn same_sampling<G: Snapshot>(&self, other: &Trajectory<G>) -> Result<()> {
        if self.grid != other.grid {
            return Err(SmapError::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        if self.len() != other.len()
            || (self.dt - other.dt).abs() > 1e-14
            || (self.t0 - other.t0).abs() > 1e-14
        {
            return Err(SmapError::GridMismatch("trajectories sampled at different times".into()));
        }
        Ok(())
    }
}

impl ChartTrajectory {
    /// `sup_m ‖u(t_m)‖_{H^σ}`.
    pub fn sup_hs_norm(&self, sigma: f64) -> f64 {
        self.snapshots
            .iter()
            .map(|u| u.hs_norm(sigma))
            .fold(0.0, f64::max)
    }

    /// `sup_m ‖u(t_m) − v(t_m)‖_{H^σ}`.
    pub fn sup_hs_distance(&self, other: &Self, sigma: f64) -> Result<f64> {
        self.same_sampling(other)?;
        let mut worst = 0.0f64;
        for (a, b) in self.snapshots.iter().zip(&other.snapshots) {
            worst = worst.max(a.sub(b)?.hs_norm(sigma));
        }
        Ok(worst)
    }
}

/// Number of steps of size `dt` covering `[0, t_final]`; `dt` must divide
/// `t_final` to 1e-12.
pub fn step_count(t_final: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0 && t_final >= 0.0) {
        return Err(SmapError::DegenerateInput(format!("bad time grid T = {t_final}, dt = {dt}")));
    }
    let m = (t_final / dt).round();
    if (m * dt - t_final).abs() > 1e-12 * (1.0 + t_final) {
        return Err(SmapError::DegenerateInput(format!("dt = {dt} does not divide T = {t_final}")));
    }
    Ok(m as usize)
}

/// Fourth-order finite-difference derivative of a uniformly sampled series:
/// centred five-point stencil inside, one-sided five-point stencils at the
/// two samples next to each end.
pub fn derivative4(values: &[f64], dt: f64) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 5 {
        return Err(SmapError::DegenerateInput(format!(
            "fourth-order differencing needs at least 5 samples, got {n}"
        )));
    }
    let v = values;
    let forward = |i: usize| (-25.0 * v[i] + 48.0 * v[i + 1] - 36.0 * v[i + 2] + 16.0 * v[i + 3] - 3.0 * v[i + 4]) / (12.0 * dt);
    let shifted = |i: usize| (-3.0 * v[i - 1] - 10.0 * v[i] + 18.0 * v[i + 1] - 6.0 * v[i + 2] + v[i + 3]) / (12.0 * dt);
    let centred = |i: usize| (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * dt);
    let backward = |i: usize| (25.0 * v[i] - 48.0 * v[i - 1] + 36.0 * v[i - 2] - 16.0 * v[i - 3] + 3.0 * v[i - 4]) / (12.0 * dt);
    let back_shifted = |i: usize| (3.0 * v[i + 1] + 10.0 * v[i] - 18.0 * v[i - 1] + 6.0 * v[i - 2] - v[i - 3]) / (12.0 * dt);
    Ok((0..n)
        .map(|i| match i {
            0 => forward(0),
            1 => shifted(1),
            i if i == n - 1 => backward(i),
            i if i == n - 2 => back_shifted(i),
            i => centred(i),
        })
        .collect())
}
