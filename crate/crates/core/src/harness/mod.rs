//! Configuration, seeded data, file formats and the experiment commands.

pub mod config;
pub mod data;
pub mod experiments;
pub mod output;
pub mod run;
pub mod snapshot;

pub use config::{DataKind, DirectionChoice, ExperimentConfig};
pub use data::{perturbation_direction, seeded_data, seeded_sphere_data};
pub use experiments::{gauge_comparison, gronwall_study, lift_trajectory, lipschitz_ratios, spread, GaugeComparison, GronwallStudy};
pub use output::{fmt_f64, CsvReport};
pub use run::{run, Command};
pub use snapshot::{decode, encode, read_snapshot, write_snapshot, SnapshotData};
