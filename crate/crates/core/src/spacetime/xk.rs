//! Dyadic `X_k` norms of a space-time spectrum and the `F^σ`/`N^σ` upper
//! bounds built from them.
//!
//! `‖f‖_{X_k} = Σ_j 2^{j/2} ‖η_j(τ+|ξ|²)·f‖_{L²}`, with `f` restricted to the
//! frequency shell `2^{k−1} ≤ |ξ| ≤ 2^{k+1}` (`|ξ| ≤ 2` for `k = 0`). The
//! `j`-sum stops at the first `J` for which `η_0,…,η_J` already sum to one on
//! every grid modulation.

use rayon::prelude::*;

use super::spectrum::SpaceTimeSpectrum;
use crate::spectral::cutoff::{eta_shell, PLATEAU};

/// Closed frequency shell carrying `η_k`.
pub fn in_shell(k: u32, r: f64) -> bool {
    if k == 0 {
        r <= 2.0
    } else {
        let s = 2f64.powi(k as i32);
        r >= 0.5 * s && r <= 2.0 * s
    }
}

/// Disjoint dyadic annulus: `|ξ| < 1` for `k = 0`, `2^{k−1} ≤ |ξ| < 2^k` above.
pub fn in_annulus(k: u32, r: f64) -> bool {
    if k == 0 {
        r < 1.0
    } else {
        let s = 2f64.powi(k as i32);
        r >= 0.5 * s && r < s
    }
}

/// Number of modulation shells `J + 1` needed to cover `|μ| ≤ μ_max`.
pub fn modulation_shells(spec: &SpaceTimeSpectrum) -> u32 {
    let top = spec.window().max_frequency();
    if top <= PLATEAU {
        1
    } else {
        (top / PLATEAU).log2().ceil() as u32 + 1
    }
}

fn radius(xi: &[f64]) -> f64 {
    xi.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Hard indicator of `D_{k,j} = {ξ in shell k, |τ+|ξ|²| ≤ 2^{j+1}}`.
pub fn mask_region(spec: &SpaceTimeSpectrum, k: u32, j: u32) -> SpaceTimeSpectrum {
    let cap = 2f64.powi(j as i32 + 1);
    spec.multiply(|xi, mu| if in_shell(k, radius(xi)) && mu.abs() <= cap { 1.0 } else { 0.0 })
}

/// `Σ_ξ w(ξ)|F(μ_q, ξ)|²` for every row `q`.
fn row_sums(spec: &SpaceTimeSpectrum, w: impl Fn(f64) -> f64 + Sync) -> Vec<f64> {
    let grid = *spec.grid();
    let len = grid.len();
    let weights: Vec<f64> = grid
        .wavevector_table()
        .chunks_exact(grid.dim())
        .map(|xi| w(radius(xi)))
        .collect();
    spec.values()
        .par_chunks(len)
        .map(|row| row.iter().zip(&weights).map(|(v, w)| w * v.norm_sqr()).sum())
        .collect()
}

/// `Σ_j 2^{j/2}(weight·Σ_q η_j(μ_q)² S_q)^{1/2}`.
fn dyadic_sum(spec: &SpaceTimeSpectrum, rows: &[f64]) -> f64 {
    let shells = modulation_shells(spec);
    let weight = spec.weight();
    (0..shells)
        .map(|j| {
            let s: f64 = rows
                .iter()
                .enumerate()
                .map(|(q, r)| eta_shell(j, spec.modulation(q)).powi(2) * r)
                .sum();
            2f64.powf(0.5 * j as f64) * (weight * s).sqrt()
        })
        .sum()
}

/// `‖F‖_{X_k}` of the part of `F` in frequency shell `k`.
pub fn xk_norm(spec: &SpaceTimeSpectrum, k: u32) -> f64 {
    let rows = row_sums(spec, |r| if in_shell(k, r) { 1.0 } else { 0.0 });
    dyadic_sum(spec, &rows)
}

/// `‖m(μ)·F‖_{X_k}` for a multiplier in the modulation variable only.
pub fn xk_norm_modulated(spec: &SpaceTimeSpectrum, k: u32, m: impl Fn(f64) -> f64) -> f64 {
    let mut rows = row_sums(spec, |r| if in_shell(k, r) { 1.0 } else { 0.0 });
    for (q, r) in rows.iter_mut().enumerate() {
        *r *= m(spec.modulation(q)).powi(2);
    }
    dyadic_sum(spec, &rows)
}

/// `‖η_k(|ξ|)F‖_{X_k}` for `k = 0..=k_max`, optionally with the extra weight
/// `|μ + i|^{−1}`.
fn shell_norms(spec: &SpaceTimeSpectrum, inverse_modulation: bool) -> Vec<f64> {
    let k_max = spec.grid().k_max() as u32;
    (0..=k_max)
        .map(|k| {
            let mut rows = row_sums(spec, |r| eta_shell(k, r).powi(2));
            if inverse_modulation {
                for (q, r) in rows.iter_mut().enumerate() {
                    *r /= 1.0 + spec.modulation(q).powi(2);
                }
            }
            dyadic_sum(spec, &rows)
        })
        .collect()
}

fn weighted_l2(norms: &[f64], sigma: f64) -> f64 {
    norms
        .iter()
        .enumerate()
        .map(|(k, x)| 2f64.powf(2.0 * sigma * k as f64) * x * x)
        .sum::<f64>()
        .sqrt()
}

/// `[Σ_k 2^{2σk} ‖η_k F‖²_{X_k}]^{1/2}`, an upper bound for the `F^σ` norm.
pub fn fsigma_upper(spec: &SpaceTimeSpectrum, sigma: f64) -> f64 {
    weighted_l2(&shell_norms(spec, false), sigma)
}

/// As [`fsigma_upper`] for `(τ+|ξ|²+i)^{−1}F`, an upper bound for `N^σ`.
pub fn nsigma_upper(spec: &SpaceTimeSpectrum, sigma: f64) -> f64 {
    weighted_l2(&shell_norms(spec, true), sigma)
}

/// `L²` mass in the disjoint dyadic annulus `k`.
pub fn annulus_mass(spec: &SpaceTimeSpectrum, k: u32) -> f64 {
    let rows = row_sums(spec, |r| if in_annulus(k, r) { 1.0 } else { 0.0 });
    (spec.weight() * rows.iter().sum::<f64>()).sqrt()
}
