//! Right-hand sides of both formulations: the chart-side derivative
//! nonlinearity `2ū(1+|u|²)^{-1} Σ_j (∂_j u)²` and the sphere-side
//! `s × Δs`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::geometry::{cross, SphereField};
use crate::spectral::{gradient, laplacian, ComplexField, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DealiasRule {
    #[default]
    TwoThirds,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DealiasPolicy {
    pub rule: DealiasRule,
}

impl DealiasPolicy {
    pub const TWO_THIRDS: Self = Self {
        rule: DealiasRule::TwoThirds,
    };
    pub const NONE: Self = Self {
        rule: DealiasRule::None,
    };

    /// Zero every mode with some `|ξ_i| >= (2/3)·n/(2P)`; returns the input
    /// representation.
    pub fn apply(&self, u: &ComplexField) -> ComplexField {
        match self.rule {
            DealiasRule::None => u.clone(),
            DealiasRule::TwoThirds => {
                let cut = 2.0 / 3.0 * u.grid().nyquist();
                u.apply_multiplier(|xi| {
                    if xi.iter().all(|v| v.abs() < cut) {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            }
        }
    }
}

fn pointwise(
    u: &ComplexField,
    v: &ComplexField,
    f: impl Fn(Complex64, Complex64) -> Complex64 + Sync,
) -> ComplexField {
    let (u, v) = (u.to_physical(), v.to_physical());
    let values = u
        .values()
        .par_iter()
        .zip(v.values().par_iter())
        .map(|(a, b)| f(*a, *b))
        .collect();
    ComplexField::from_values(*u.grid(), u.time(), Representation::Physical, values)
        .expect("same grid")
}

/// `N₀(u) = 2ū/(1+|u|²)`, physical representation.
pub fn n_zero(u: &ComplexField, policy: DealiasPolicy) -> ComplexField {
    let u = u.to_physical();
    let out = pointwise(&u, &u, |a, _| 2.0 * a.conj() / (1.0 + a.norm_sqr()));
    policy.apply(&out)
}

/// `Σ_j (∂_j u)²`, physical representation.
pub fn gradient_square_sum(u: &ComplexField, policy: DealiasPolicy) -> ComplexField {
    let grid = *u.grid();
    let mut acc = ComplexField::zeros(grid, u.time(), Representation::Physical);
    for axis in 1..=grid.dim() {
        let d = gradient(u, axis).expect("axis in range").to_physical();
        acc.values_mut()
            .par_iter_mut()
            .zip(d.values().par_iter())
            .for_each(|(a, g)| *a += g * g);
    }
    policy.apply(&acc)
}

/// Spatial part of the chart nonlinearity, `N₀(u)·Σ_j (∂_j u)²`, returned in
/// physical representation. The time cutoff is left to the caller.
pub fn nonlinearity(u: &ComplexField, policy: DealiasPolicy) -> ComplexField {
    let prefactor = n_zero(u, policy);
    let grads = gradient_square_sum(u, policy);
    policy.apply(&pointwise(&prefactor, &grads, |a, b| a * b))
}

/// `s × Δs` at every grid point, with the Laplacian taken spectrally.
pub fn cross_rhs(s: &SphereField) -> Vec<[f64; 3]> {
    let lap: Vec<ComplexField> = (0..3)
        .map(|l| laplacian(&s.component(l)).to_physical())
        .collect();
    s.values()
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            let d = [lap[0].values()[i].re, lap[1].values()[i].re, lap[2].values()[i].re];
            cross(v, &d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dot, stereo_lift};
    use crate::grid::GridSpec;

    fn grid() -> GridSpec {
        GridSpec::new(2, 32, 1.0).unwrap()
    }

    fn constant(g: GridSpec, c: Complex64) -> ComplexField {
        ComplexField::from_fn(g, 0.0, move |_| c)
    }

    fn smooth(g: GridSpec, amp: f64) -> ComplexField {
        ComplexField::from_fn(g, 0.0, move |x| {
            Complex64::new((x[0]).sin() + 0.3 * (x[1] * 2.0).cos(), 0.5 * (x[0] - x[1]).cos()) * amp
        })
    }

    fn max_abs_diff(a: &ComplexField, b: &ComplexField) -> f64 {
        let (a, b) = (a.to_physical(), b.to_physical());
        a.values()
            .iter()
            .zip(b.values())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
    }

    #[test]
    fn n_zero_examples() {
        let g = grid();
        let p = DealiasPolicy::TWO_THIRDS;
        assert!(n_zero(&constant(g, Complex64::new(0.0, 0.0)), p).sup_norm() < 1e-15);
        let one = n_zero(&constant(g, Complex64::new(1.0, 0.0)), p);
        assert!(max_abs_diff(&one, &constant(g, Complex64::new(1.0, 0.0))) < 1e-14);
        let two_i = n_zero(&constant(g, Complex64::new(0.0, 2.0)), p);
        assert!(max_abs_diff(&two_i, &constant(g, Complex64::new(0.0, -0.8))) < 1e-14);
    }

    #[test]
    fn constants_have_no_nonlinearity() {
        let g = grid();
        let c = constant(g, Complex64::new(0.3, -0.2));
        assert!(nonlinearity(&c, DealiasPolicy::TWO_THIRDS).sup_norm() < 1e-14);
    }

    /// Closed form for a single mode `εe^{ix·ξ₀}`:
    /// `-2|ξ₀|²|ε|²ε e^{ix·ξ₀}/(1+|ε|²)`, evaluated pointwise.
    #[test]
    fn single_mode_matches_closed_form() {
        let g = grid();
        let eps = Complex64::new(0.3, 0.1);
        let xi = [2.0, -1.0];
        let u = ComplexField::plane_wave(g, 0.0, &xi, eps);
        let got = nonlinearity(&u, DealiasPolicy::TWO_THIRDS);
        let k2 = 5.0;
        let mut pt = [0.0; 2];
        let mut err = 0.0f64;
        for i in 0..g.len() {
            g.point(i, &mut pt);
            let e = Complex64::from_polar(1.0, xi[0] * pt[0] + xi[1] * pt[1]);
            let expect = -2.0 * k2 * eps.norm_sqr() * eps * e / (1.0 + eps.norm_sqr());
            err = err.max((expect - got.values()[i]).norm());
        }
        assert!(err < 1e-13, "err = {err}");
    }

    /// Cubic truncation of `(1+|εu|²)^{-1} = 1 - |εu|² + ...` as the oracle.
    #[test]
    fn small_amplitude_scaling_is_cubic() {
        let g = grid();
        let u = smooth(g, 1.0);
        let cubic = pointwise(&u.conj(), &gradient_square_sum(&u, DealiasPolicy::NONE), |a, b| 2.0 * a * b);
        for &eps in &[1e-2, 1e-3] {
            let got = nonlinearity(&u.scale(Complex64::new(eps, 0.0)), DealiasPolicy::NONE)
                .scale(Complex64::new(eps.powi(-3), 0.0));
            let rel = max_abs_diff(&got, &cubic) / cubic.sup_norm();
            // next term of the series is O(ε²·|u|²)
            let bound = 4.0 * eps * eps * u.sup_norm().powi(2);
            assert!(rel < bound, "eps = {eps}: rel = {rel}, bound = {bound}");
        }
    }

    #[test]
    fn cubic_leading_order_is_flat_across_amplitudes() {
        let g = grid();
        let u = smooth(g, 1.0);
        let ratios: Vec<f64> = [1e-3, 3e-3, 1e-2]
            .iter()
            .map(|&e| nonlinearity(&u.scale(Complex64::new(e, 0.0)), DealiasPolicy::TWO_THIRDS).l2_norm() / e.powi(3))
            .collect();
        for r in &ratios {
            assert!((r / ratios[0] - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let g = grid();
        let u = smooth(g, 0.4);
        let p = DealiasPolicy::NONE;
        let got = nonlinearity(&u.conj(), p);
        // direct: 2u(1+|u|²)^{-1} Σ (∂_j ū)²
        let uc = u.conj();
        let direct = pointwise(&u, &gradient_square_sum(&uc, p), |a, b| 2.0 * a / (1.0 + a.norm_sqr()) * b);
        assert!(max_abs_diff(&got, &direct) < 1e-13);
    }

    #[test]
    fn dealiasing_clears_the_top_third() {
        let g = grid();
        let u = ComplexField::from_fn(g, 0.0, |x| Complex64::new((13.0 * x[0]).cos() + (2.0 * x[1]).sin(), 0.0));
        let d = DealiasPolicy::TWO_THIRDS.apply(&u).to_frequency();
        let cut = 2.0 / 3.0 * g.nyquist();
        let mut xi = [0.0; 2];
        for (i, v) in d.values().iter().enumerate() {
            g.wavevector(i, &mut xi);
            if xi.iter().any(|k| k.abs() >= cut) {
                assert!(v.norm() < 1e-14, "{v}");
            }
        }
        assert!(d.l2_norm() > 0.0);
    }

    #[test]
    fn cross_rhs_basics() {
        let g = grid();
        let north = SphereField::constant(g, 0.0, [0.0, 0.0, 1.0]).unwrap();
        assert!(cross_rhs(&north).iter().all(|v| v.iter().all(|c| c.abs() < 1e-15)));
        let s = stereo_lift(&smooth(g, 0.7));
        let r = cross_rhs(&s);
        let scale = r.iter().fold(0.0f64, |m, v| m.max(v.iter().fold(0.0f64, |a, c| a.max(c.abs()))));
        for (a, b) in s.values().iter().zip(&r) {
            assert!(dot(a, b).abs() < 1e-13 * scale.max(1.0));
        }
    }

    /// Chain rule oracle: for `s = L̃(u)` with `u` solving the chart equation,
    /// `∂ₜs = dL̃_u(∂ₜu)` with `∂ₜu = i(Δu − N(u))`. Differentiating the lift
    /// along that direction with a centred difference in the amplitude must
    /// reproduce `s × Δs`, and the mismatch shrinks with resolution.
    #[test]
    fn cross_rhs_matches_pushforward_of_chart_equation() {
        let mut errs = Vec::new();
        for &n in &[16usize, 32] {
            let g = GridSpec::new(2, n, 1.0).unwrap();
            let xi = [1.0, 1.0];
            let u = ComplexField::plane_wave(g, 0.0, &xi, Complex64::new(0.2, 0.0))
                .axpy(Complex64::new(1.0, 0.0), &smooth(g, 0.05))
                .unwrap();
            let s = stereo_lift(&u);
            let rhs = cross_rhs(&s);
            let lap_u = laplacian(&u).to_physical();
            let nl = nonlinearity(&u, DealiasPolicy::NONE);
            let ut = lap_u
                .axpy(Complex64::new(-1.0, 0.0), &nl)
                .unwrap()
                .scale(Complex64::new(0.0, 1.0));
            let h = 1e-6;
            let plus = stereo_lift(&u.axpy(Complex64::new(h, 0.0), &ut).unwrap());
            let minus = stereo_lift(&u.axpy(Complex64::new(-h, 0.0), &ut).unwrap());
            let mut err = 0.0f64;
            for i in 0..g.len() {
                for l in 0..3 {
                    let ds = (plus.values()[i][l] - minus.values()[i][l]) / (2.0 * h);
                    err = err.max((ds - rhs[i][l]).abs());
                }
            }
            errs.push(err);
        }
        // smooth data: both resolutions already resolve the fields, so the
        // residual sits at the finite-difference floor and does not grow
        assert!(errs[1] < 1e-6, "errs = {errs:?}");
        assert!(errs[1] <= errs[0] * 2.0);
    }
}
