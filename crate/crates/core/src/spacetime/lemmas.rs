//! Ratio diagnostics for the dyadic linear estimates: local smoothing
//! (`R₂`), maximal function (`R₃`) and the energy bound (`R₄`), each
//! normalised by the `X_k` norm of the shell-`k` piece.

use rayon::prelude::*;

use super::mixed::{lpq_norm, DirectionSet, Exponent};
use super::report::{NormReport, NormRow, Quantity};
use super::spectrum::{spacetime_transform, SpaceTimeSpectrum, TimeWindow};
use super::xk::{fsigma_upper, modulation_shells, xk_norm, xk_norm_modulated};
use crate::error::{Result, SmapError};
use crate::solver::ChartTrajectory;
use crate::spectral::cutoff::{chi, eta_shell};

/// Frequency-separation parameter of the local smoothing cutoff.
pub const SMOOTHING_SEPARATION: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaOptions {
    pub window: TimeWindow,
    /// Shells whose `X_k` falls below this fraction of the member's largest
    /// `X_k` are not reported (the ratios would be roundoff over roundoff).
    pub relative_floor: f64,
    /// Regularity used for the per-member `F^σ` row.
    pub sigma: f64,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        Self {
            window: TimeWindow::default(),
            relative_floor: 1e-8,
            sigma: 1.6,
        }
    }
}

/// Ratios of one member in one shell (maxima over directions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellRatios {
    pub k: u32,
    pub xk: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    /// `max_j ‖f·η_j(μ)‖_{X_k} / ‖f‖_{X_k}`; at most one by construction.
    pub jsection: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemberDiagnostics {
    pub id: usize,
    /// Set for members with an identically zero spectrum.
    pub skipped: bool,
    pub shells: Vec<ShellRatios>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub members: Vec<MemberDiagnostics>,
    /// Per-shell maxima over members, in increasing `k`.
    pub per_k: Vec<ShellRatios>,
    pub rows: NormReport,
}

impl LemmaReport {
    /// Least-squares slope of `log₂(max R)` against `k` over `[k_lo, k_hi]`
    /// for the statistic picked by `pick`.
    pub fn slope(&self, k_lo: u32, k_hi: u32, pick: impl Fn(&ShellRatios) -> f64) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .per_k
            .iter()
            .filter(|s| s.k >= k_lo && s.k <= k_hi)
            .map(|s| (s.k as f64, pick(s).log2()))
            .collect();
        linear_slope(&pts)
    }
}

/// Ordinary least-squares slope; `NaN` with fewer than two points.
pub fn linear_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn direction_label(e: &[f64]) -> String {
    let parts: Vec<String> = e.iter().map(|v| format!("{v:.6}")).collect();
    format!("({})", parts.join(" "))
}

fn shell_ratios(
    fk: &SpaceTimeSpectrum,
    k: u32,
    xk: f64,
    directions: &DirectionSet,
    id: usize,
    rows: &mut Vec<NormRow>,
) -> Result<ShellRatios> {
    let grid = *fk.grid();
    let d = grid.dim() as f64;
    let kf = k as f64;
    let uk = fk.to_samples();

    let r4 = uk.sup_time_l2() / xk;

    let maximal = uk.restrict_time(-2.0, 2.0);
    let r3_scale = 2f64.powf(-(d - 1.0) * kf / 2.0) / (kf + 1.0).powi(2);
    let r2_scale = 2f64.powf(kf / 2.0);

    let mut r2 = 0.0f64;
    let mut r3 = 0.0f64;
    let table = grid.wavevector_table();
    // e and −e fibre the grid identically
    let mut seen: Vec<(Vec<f64>, f64, f64)> = Vec::new();
    for e in directions.iter() {
        let neg: Vec<f64> = e.iter().map(|v| -v).collect();
        if let Some((_, a, b)) = seen.iter().find(|(o, _, _)| *o == neg) {
            let (a, b) = (*a, *b);
            rows.push(NormRow::new(id, Some(k), Quantity::R2, Some(direction_label(e)), a));
            rows.push(NormRow::new(id, Some(k), Quantity::R3, Some(direction_label(e)), b));
            continue;
        }
        let cut: Vec<f64> = table
            .chunks_exact(grid.dim())
            .map(|xi| chi(k, SMOOTHING_SEPARATION, xi.iter().zip(e).map(|(a, b)| a * b).sum()))
            .collect();
        let smoothing = if cut.iter().all(|c| *c == 1.0) {
            lpq_norm(&uk, e, Exponent::Infinity, Exponent::Two)?
        } else {
            lpq_norm(&fk.multiply_spatial(&cut).to_samples(), e, Exponent::Infinity, Exponent::Two)?
        };
        let a = r2_scale * smoothing / xk;
        let b = r3_scale * lpq_norm(&maximal, e, Exponent::Two, Exponent::Infinity)? / xk;
        rows.push(NormRow::new(id, Some(k), Quantity::R2, Some(direction_label(e)), a));
        rows.push(NormRow::new(id, Some(k), Quantity::R3, Some(direction_label(e)), b));
        r2 = r2.max(a);
        r3 = r3.max(b);
        seen.push((e.to_vec(), a, b));
    }

    let jsection = (0..modulation_shells(fk))
        .map(|j| xk_norm_modulated(fk, k, |mu| eta_shell(j, mu)) / xk)
        .fold(0.0, f64::max);

    rows.push(NormRow::new(id, Some(k), Quantity::Xk, None, xk));
    rows.push(NormRow::new(id, Some(k), Quantity::R4, None, r4));
    rows.push(NormRow::new(id, Some(k), Quantity::JSection, None, jsection));
    Ok(ShellRatios {
        k,
        xk,
        r2,
        r3,
        r4,
        jsection,
    })
}

fn member_diagnostics(
    id: usize,
    traj: &ChartTrajectory,
    directions: &DirectionSet,
    opts: &LemmaOptions,
) -> Result<(MemberDiagnostics, Vec<NormRow>)> {
    let spec = spacetime_transform(traj, &opts.window)?;
    let mut rows = Vec::new();
    if spec.is_zero() {
        return Ok((
            MemberDiagnostics {
                id,
                skipped: true,
                shells: Vec::new(),
            },
            rows,
        ));
    }
    rows.push(NormRow::new(id, None, Quantity::Fsigma, None, fsigma_upper(&spec, opts.sigma)));

    let grid = *traj.grid();
    let radii: Vec<f64> = grid
        .wavevector_table()
        .chunks_exact(grid.dim())
        .map(|xi| xi.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    let k_max = grid.k_max() as u32;
    let weights: Vec<Vec<f64>> = (0..=k_max)
        .map(|k| radii.iter().map(|r| eta_shell(k, *r)).collect())
        .collect();
    // X_k of η_k·F depends only on row sums, so screen shells before
    // materialising any of them
    let norms: Vec<f64> = (0..=k_max)
        .map(|k| xk_norm(&spec.multiply_spatial(&weights[k as usize]), k))
        .collect();
    let top = norms.iter().cloned().fold(0.0, f64::max);
    let mut shells = Vec::new();
    for k in 0..=k_max {
        let x = norms[k as usize];
        if x == 0.0 || x < opts.relative_floor * top {
            continue;
        }
        let fk = spec.multiply_spatial(&weights[k as usize]);
        shells.push(shell_ratios(&fk, k, x, directions, id, &mut rows)?);
    }
    Ok((
        MemberDiagnostics {
            id,
            skipped: false,
            shells,
        },
        rows,
    ))
}

/// Evaluate the ratio statistics on every member and every populated shell.
pub fn lemma_diagnostics(
    ensemble: &[ChartTrajectory],
    directions: &DirectionSet,
    opts: &LemmaOptions,
) -> Result<LemmaReport> {
    if ensemble.is_empty() {
        return Err(SmapError::EmptyEnsemble);
    }
    let results: Vec<(MemberDiagnostics, Vec<NormRow>)> = ensemble
        .par_iter()
        .enumerate()
        .map(|(id, traj)| member_diagnostics(id, traj, directions, opts))
        .collect::<Result<_>>()?;

    let mut per_k: Vec<ShellRatios> = Vec::new();
    let mut rows = Vec::new();
    let mut members = Vec::new();
    for (m, r) in results {
        for s in &m.shells {
            match per_k.iter_mut().find(|p| p.k == s.k) {
                Some(p) => {
                    p.xk = p.xk.max(s.xk);
                    p.r2 = p.r2.max(s.r2);
                    p.r3 = p.r3.max(s.r3);
                    p.r4 = p.r4.max(s.r4);
                    p.jsection = p.jsection.max(s.jsection);
                }
                None => per_k.push(*s),
            }
        }
        rows.extend(r);
        members.push(m);
    }
    per_k.sort_by_key(|s| s.k);
    Ok(LemmaReport {
        members,
        per_k,
        rows: NormReport { rows },
    })
}
