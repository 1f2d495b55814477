//! Time integration: Picard iteration of the Duhamel map in the chart and an
//! implicit midpoint integrator directly on the sphere.

pub mod gronwall;
pub mod midpoint;
pub mod picard;
pub mod trajectory;

pub use gronwall::{energy_series, gronwall_diagnostic, GronwallReport};
pub use midpoint::midpoint_solve;
pub use picard::{duhamel_map, free_trajectory, picard_solve, PicardHistory, PicardOptions, PicardRecord};
pub use trajectory::{derivative4, step_count, ChartTrajectory, Snapshot, SphereTrajectory, Trajectory, TrajectoryKind};
