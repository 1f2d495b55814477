//! Seeded initial data, normalised in `H^{σ₀}`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::config::DataKind;
use crate::geometry::{stereo_lift, SphereField};
use crate::grid::GridSpec;
use crate::spectral::{ComplexField, Representation};

/// Number of random lattice modes in `mode_sum` data.
const MODE_COUNT: usize = 4;

/// Width `πP/8` of the Gaussian bump: an eighth of the half-box.
pub fn bump_width(grid: &GridSpec) -> f64 {
    std::f64::consts::PI * grid.period() / 8.0
}

fn gaussian_bump(grid: GridSpec) -> ComplexField {
    let w2 = bump_width(&grid).powi(2);
    ComplexField::from_fn(grid, 0.0, |x| {
        Complex64::new((-x.iter().map(|v| v * v).sum::<f64>() / (2.0 * w2)).exp(), 0.0)
    })
}

/// Gaussian envelope times a few random lattice plane waves of modest
/// frequency.
fn mode_sum(grid: GridSpec, rng: &mut ChaCha8Rng) -> ComplexField {
    let w2 = bump_width(&grid).powi(2);
    // keep the modes well inside the 2/3 band so the envelope tails stay resolved
    let max_index = ((grid.n() / 8) as i64).max(1);
    let modes: Vec<(Vec<f64>, Complex64)> = (0..MODE_COUNT)
        .map(|_| {
            let xi = (0..grid.dim())
                .map(|_| rng.gen_range(-max_index..=max_index) as f64 / grid.period())
                .collect();
            let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            (xi, c)
        })
        .collect();
    ComplexField::from_fn(grid, 0.0, |x| {
        let env = (-x.iter().map(|v| v * v).sum::<f64>() / (2.0 * w2)).exp();
        let wave: Complex64 = modes
            .iter()
            .map(|(xi, c)| c * Complex64::from_polar(1.0, xi.iter().zip(x).map(|(a, b)| a * b).sum()))
            .sum();
        env * wave
    })
}

/// Normal coefficients with Gaussian decay, supported strictly inside two
/// thirds of the Nyquist frequency.
fn random_bandlimited(grid: GridSpec, rng: &mut ChaCha8Rng) -> ComplexField {
    let band = grid.nyquist() * 2.0 / 3.0;
    let scale = band / 3.0;
    let mut xi = vec![0.0; grid.dim()];
    let values = (0..grid.len())
        .map(|i| {
            // draw for every mode so the stream does not depend on the mask
            let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            grid.wavevector(i, &mut xi);
            let r2: f64 = xi.iter().map(|v| v * v).sum();
            if r2.sqrt() < band {
                c * (-r2 / (2.0 * scale * scale)).exp()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    ComplexField::from_values(grid, 0.0, Representation::Frequency, values)
        .expect("length matches grid")
        .to_physical()
}

/// Chart data of the given kind with `‖φ‖_{H^{σ₀}} = amplitude`.
pub fn seeded_data(kind: DataKind, grid: GridSpec, sigma0: f64, amplitude: f64, seed: u64) -> ComplexField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = match kind {
        DataKind::GaussianBump => gaussian_bump(grid),
        DataKind::ModeSum => mode_sum(grid, &mut rng),
        DataKind::RandomBandlimited => random_bandlimited(grid, &mut rng),
    };
    let norm = raw.hs_norm(sigma0);
    if amplitude == 0.0 || norm == 0.0 {
        return ComplexField::zeros(grid, 0.0, Representation::Physical);
    }
    raw.scale(Complex64::new(amplitude / norm, 0.0))
}

/// Unit `H^{σ₀}` direction used to perturb data, independent of the data
/// kind so every experiment perturbs the same way.
pub fn perturbation_direction(grid: GridSpec, sigma0: f64, seed: u64) -> ComplexField {
    seeded_data(DataKind::RandomBandlimited, grid, sigma0, 1.0, seed.wrapping_add(1))
}

/// Sphere data: the stereographic lift of [`seeded_data`].
pub fn seeded_sphere_data(kind: DataKind, grid: GridSpec, sigma0: f64, amplitude: f64, seed: u64) -> SphereField {
    stereo_lift(&seeded_data(kind, grid, sigma0, amplitude, seed))
}
