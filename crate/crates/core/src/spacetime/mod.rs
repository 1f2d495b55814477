//! Space-time Fourier analysis of windowed trajectories: dyadic `X_k` norms,
//! directional mixed norms and the linear-estimate ratio diagnostics.

pub mod lemmas;
pub mod mixed;
pub mod report;
pub mod spectrum;
pub mod xk;

pub use lemmas::{lemma_diagnostics, linear_slope, LemmaOptions, LemmaReport, MemberDiagnostics, ShellRatios};
pub use mixed::{lpq_norm, offset_extent, DirectionSet, Exponent};
pub use report::{NormReport, NormRow, Quantity};
pub use spectrum::{spacetime_transform, window_samples, SpaceTimeSamples, SpaceTimeSpectrum, TimeWindow};
pub use xk::{annulus_mass, fsigma_upper, mask_region, nsigma_upper, xk_norm};
