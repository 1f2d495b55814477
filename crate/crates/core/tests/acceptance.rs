//! Acceptance suite: one test per criterion, each printing a single
//! `PASS`/`FAIL` line with the measured values before asserting.
//!
//! Common setting: d = 2, n = 64, period 2, T = 1/2, Δt = 1/256.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smap::geometry::{stereo_lift, stereo_project};
use smap::harness::{
    decode, encode, gauge_comparison, gronwall_study, lipschitz_ratios, perturbation_direction, seeded_data,
    seeded_sphere_data, spread, DataKind, SnapshotData,
};
use smap::nonlinearity::cross_rhs;
use smap::solver::{free_trajectory, midpoint_solve, picard_solve, ChartTrajectory, PicardOptions};
use smap::spacetime::{
    annulus_mass, fsigma_upper, lemma_diagnostics, lpq_norm, spacetime_transform, window_samples, xk_norm,
    DirectionSet, Exponent, LemmaOptions, TimeWindow,
};
use smap::spectral::cutoff::eta_shell;
use smap::spectral::{apply_jsigma, free_propagate, lp_project};
use smap::{ComplexField, GridSpec, Representation};

const T: f64 = 0.5;
const DT: f64 = 1.0 / 256.0;
const SIGMA0: f64 = 1.6;

fn grid() -> GridSpec {
    GridSpec::new(2, 64, 2.0).unwrap()
}

fn verdict(criterion: u32, title: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("{status} criterion {criterion} ({title}): {detail}");
    assert!(pass, "criterion {criterion} ({title}) failed: {detail}");
}

#[test]
fn criterion_1_picard_contraction() {
    let opts = PicardOptions::for_dimension(2, DT);
    let mut pass = true;
    let mut detail = Vec::new();
    for a in [1e-3, 1e-2] {
        let phi = seeded_data(DataKind::GaussianBump, grid(), SIGMA0, a, 0);
        match picard_solve(&phi, T, &opts) {
            Ok((_, h)) => {
                let ok = h.records.iter().all(|r| r.ratio <= 0.5) && h.len() <= 40;
                pass &= ok;
                detail.push(format!("amplitude {a:e}: {} iterations, max ratio {:.3e}", h.len(), h.max_ratio()));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("amplitude {a:e}: {}", e.name()));
            }
        }
    }
    verdict(1, "Picard contraction", pass, detail.join("; "));
}

#[test]
fn criterion_2_gauge_equivalence() {
    let a = 1e-3;
    let base = grid();
    let fine = base.refined();
    let coarse = gauge_comparison(
        &seeded_data(DataKind::GaussianBump, base, SIGMA0, a, 0),
        T,
        &PicardOptions::for_dimension(2, DT),
        1e-12,
    )
    .unwrap();
    let refined = gauge_comparison(
        &seeded_data(DataKind::GaussianBump, fine, SIGMA0, a, 0),
        T,
        &PicardOptions::for_dimension(2, DT / 2.0),
        1e-12,
    )
    .unwrap();
    let (d0, d1) = (coarse.sup_distance(), refined.sup_distance());
    let order = (d0 / d1).log2();
    verdict(
        2,
        "gauge equivalence",
        d0 <= 1e-5 && order >= 1.8,
        format!("sup H1 distance {d0:.3e} (n=64) -> {d1:.3e} (n=128), order {order:.3}"),
    );
}

#[test]
fn criterion_3_sphere_constraint() {
    let s0 = seeded_sphere_data(DataKind::GaussianBump, grid(), SIGMA0, 1.0, 0);
    let traj = midpoint_solve(&s0, T, DT, 1e-12).unwrap();
    let defect = traj.snapshots().iter().map(|s| s.unit_defect()).fold(0.0, f64::max);
    verdict(3, "sphere constraint", defect <= 1e-10, format!("max ||s|-1| = {defect:.3e}"));
}

#[test]
fn criterion_4_uniqueness_gronwall() {
    let g = grid();
    let s0 = seeded_sphere_data(DataKind::GaussianBump, g, SIGMA0, 1.0, 0);
    let dir = perturbation_direction(g, SIGMA0, 0);
    let study = gronwall_study(&s0, &dir, &[1e-4, 1e-5], T, DT, 1e-12).unwrap();
    let consts: Vec<f64> = study.reports.iter().map(|(_, r)| r.c_s).collect();
    let s = spread(&consts);
    verdict(
        4,
        "uniqueness / Gronwall",
        study.tolerance_energy <= 1e-18 && s <= 2.0,
        format!(
            "max E across inner tolerances {:.3e}; C_s = {:.6e} (1e-4), {:.6e} (1e-5), spread {s:.6}",
            study.tolerance_energy, consts[0], consts[1]
        ),
    );
}

#[test]
fn criterion_5_lipschitz_flow() {
    let g = grid();
    let a = 1e-2;
    let phi = seeded_data(DataKind::GaussianBump, g, SIGMA0, a, 0);
    let dir = perturbation_direction(g, SIGMA0, 0);
    let deltas = [1e-3 * a, 1e-4 * a, 1e-5 * a];
    let sigmas = [SIGMA0, SIGMA0 + 1.0];
    let ratios = lipschitz_ratios(&phi, &dir, &deltas, &sigmas, T, &PicardOptions::for_dimension(2, DT)).unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    for (j, sp) in [0, 1].iter().enumerate() {
        let col: Vec<f64> = ratios.iter().map(|r| r[j]).collect();
        let s = spread(&col);
        pass &= col.iter().all(|v| v.is_finite()) && s <= 2.0;
        detail.push(format!("sigma' = {sp}: ratios {:?}, spread {s:.3e}", col.iter().map(|v| format!("{v:.8}")).collect::<Vec<_>>()));
    }
    verdict(5, "Lipschitz flow", pass, detail.join("; "));
}

#[test]
fn criterion_6_linear_estimate() {
    let g = grid();
    let window = TimeWindow::default();
    let mut ratios = Vec::new();
    for seed in 0..10 {
        let phi = seeded_data(DataKind::RandomBandlimited, g, SIGMA0, 1.0, seed);
        let spec = spacetime_transform(&free_trajectory(&phi, T, DT).unwrap(), &window).unwrap();
        for sigma in [1.6, 2.6] {
            ratios.push(fsigma_upper(&spec, sigma) / phi.hs_norm(sigma));
        }
    }
    let s = spread(&ratios);
    let (lo, hi) = (
        ratios.iter().cloned().fold(f64::INFINITY, f64::min),
        ratios.iter().cloned().fold(0.0, f64::max),
    );
    verdict(
        6,
        "linear estimate",
        s <= 3.0,
        format!("F^sigma / H^sigma in [{lo:.4}, {hi:.4}] over 20 cases, spread {s:.4}"),
    );
}

/// Four members per shell k = 2..6: an axis plane wave, a moving Gaussian
/// packet, a wave focusing at t = 1/2 and a small-data Picard solution with
/// random shell data.
fn lemma_ensemble() -> Vec<ChartTrajectory> {
    let g = GridSpec::new(2, 128, 0.5).unwrap();
    let dt = 1.0 / 64.0;
    let opts = PicardOptions::for_dimension(2, dt);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let delta = ComplexField::from_fn(g, 0.0, |x| {
        if x.iter().all(|v| v.abs() < 1e-12) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut ens = Vec::new();
    for k in 2..=6u32 {
        let s = 2f64.powi(k as i32);
        let wave = ComplexField::plane_wave(g, 0.0, &[s, 0.0], Complex64::new(1.0, 0.0));
        let packet = ComplexField::from_fn(g, 0.0, |x| {
            Complex64::from_polar((-(x[0] * x[0] + x[1] * x[1]) / 0.5).exp(), s * (0.8 * x[0] + 0.6 * x[1]))
        });
        let mut focus = free_propagate(&lp_project(&delta, k), -0.5);
        focus.set_time(0.0);
        let mut xi = [0.0; 2];
        let coeffs = (0..g.len())
            .map(|i| {
                g.wavevector(i, &mut xi);
                let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
                if r >= 0.8 * s && r <= 1.25 * s {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let data = ComplexField::from_values(g, 0.0, Representation::Frequency, coeffs).unwrap();
        let data = data.scale(Complex64::new(1e-3 / data.hs_norm(opts.sigma0), 0.0));
        ens.push(free_trajectory(&wave, T, dt).unwrap());
        ens.push(free_trajectory(&packet, T, dt).unwrap());
        ens.push(free_trajectory(&focus, T, dt).unwrap());
        ens.push(picard_solve(&data, T, &opts).unwrap().0);
    }
    ens
}

#[test]
fn criterion_7_lemma_ratios() {
    let ens = lemma_ensemble();
    assert_eq!(ens.len(), 20);
    let rep = lemma_diagnostics(&ens, &DirectionSet::lattice(2), &LemmaOptions::default()).unwrap();
    let finite = rep
        .members
        .iter()
        .filter(|m| !m.skipped)
        .flat_map(|m| &m.shells)
        .all(|s| s.r2.is_finite() && s.r3.is_finite() && s.r4.is_finite());
    for s in rep.per_k.iter().filter(|s| (2..=6).contains(&s.k)) {
        println!("  k = {}: max R2 {:.4}, R3 {:.4e}, R4 {:.4}", s.k, s.r2, s.r3, s.r4);
    }
    let slopes = [
        ("R2", rep.slope(2, 6, |s| s.r2)),
        ("R3", rep.slope(2, 6, |s| s.r3)),
        ("R4", rep.slope(2, 6, |s| s.r4)),
    ];
    let in_band = slopes.iter().all(|(_, v)| (-0.5..=0.5).contains(v));
    verdict(
        7,
        "lemma ratio suite",
        finite && in_band,
        format!(
            "finite: {finite}; log2 slopes over k = 2..6: {}",
            slopes.iter().map(|(n, v)| format!("{n} {v:.3}")).collect::<Vec<_>>().join(", ")
        ),
    );
}

fn max_abs_diff(a: &ComplexField, b: &ComplexField) -> f64 {
    let (a, b) = (a.to_physical(), b.to_physical());
    a.values().iter().zip(b.values()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// Spot checks of the exact identities with their tolerances, plus the
/// single-mode shell-uniformity example for the lemma ratios (k = 3..7,
/// slope within ±0.1, and R₄ ≤ 2 on that family).
#[test]
fn criterion_8_identities_and_oracles() {
    let g = grid();
    let u = seeded_data(DataKind::RandomBandlimited, g, SIGMA0, 1.0, 3);
    let small = seeded_data(DataKind::ModeSum, g, SIGMA0, 0.1, 4);
    let mut checks: Vec<(&str, f64, f64)> = Vec::new();

    checks.push(("Plancherel", (u.to_frequency().l2_norm() / u.l2_norm() - 1.0).abs(), 1e-12));
    checks.push(("forward/inverse transform", max_abs_diff(&u.to_frequency().to_physical(), &u), 1e-13));
    checks.push((
        "shell partition of unity at 37.3",
        ((0..=10).map(|k| eta_shell(k, 37.3)).sum::<f64>() - 1.0).abs(),
        1e-12,
    ));
    let lp_sum = (0..=g.k_max() as u32 + 1)
        .map(|k| lp_project(&u, k))
        .reduce(|a, b| a.axpy(Complex64::new(1.0, 0.0), &b).unwrap())
        .unwrap();
    checks.push(("Littlewood-Paley reconstruction", max_abs_diff(&lp_sum, &u), 1e-12));
    checks.push(("J^sigma inverse", max_abs_diff(&apply_jsigma(&apply_jsigma(&u, 1.7), -1.7), &u), 1e-12));
    checks.push((
        "W(t) preserves H^sigma",
        (free_propagate(&u, 0.3).hs_norm(1.7) / u.hs_norm(1.7) - 1.0).abs(),
        1e-12,
    ));
    checks.push(("chart roundtrip", max_abs_diff(&stereo_project(&stereo_lift(&small)).unwrap(), &small), 1e-12));
    checks.push(("lift lands on the sphere", stereo_lift(&u).unit_defect(), 1e-14));
    let s = stereo_lift(&small);
    let triple = s
        .values()
        .iter()
        .zip(cross_rhs(&s))
        .fold(0.0f64, |m, (a, b)| m.max((a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).abs()));
    checks.push(("s . (s x Laplacian s)", triple, 1e-13));
    checks.push(("seeded data normalisation", (small.hs_norm(SIGMA0) - 0.1).abs() / 0.1, 1e-10));
    let bytes = encode(&SnapshotData::Complex(u.clone()));
    let same = matches!(decode(&bytes).unwrap(), SnapshotData::Complex(v) if v.values() == u.values());
    checks.push(("snapshot roundtrip mismatch", if same { 0.0 } else { 1.0 }, 0.0));

    let traj = free_trajectory(&u, T, DT).unwrap();
    let window = TimeWindow::default();
    let spec = spacetime_transform(&traj, &window).unwrap();
    let samples = window_samples(&traj, &window).unwrap();
    checks.push(("space-time Plancherel", (spec.l2_norm() / samples.l2_norm() - 1.0).abs(), 1e-12));
    let shells: f64 = (0..=g.k_max() as u32 + 1).map(|k| annulus_mass(&spec, k).powi(2)).sum();
    checks.push(("shell completeness", (shells / spec.l2_norm().powi(2) - 1.0).abs(), 1e-10));
    for e in DirectionSet::lattice(2).iter() {
        let l22 = lpq_norm(&samples, e, Exponent::Two, Exponent::Two).unwrap();
        checks.push(("L^{2,2}_e equals L^2", (l22 / samples.l2_norm() - 1.0).abs(), 1e-12));
    }
    let off_shell = ComplexField::plane_wave(g, 0.0, &[3.0, 0.0], Complex64::new(1.0, 0.0));
    // keep only the |ξ| = 3 row so the shell-5 mask annihilates it exactly
    let off = spacetime_transform(&free_trajectory(&off_shell, T, DT).unwrap(), &window)
        .unwrap()
        .multiply(|xi, _| if xi == [3.0, 0.0] { 1.0 } else { 0.0 });
    assert!(!off.is_zero());
    checks.push(("X_k vanishes off its shell", xk_norm(&off, 5), 0.0));

    let mut pass = true;
    for (name, value, tol) in &checks {
        let ok = value <= tol;
        pass &= ok;
        println!("  {} {name}: {value:.3e} (tolerance {tol:.0e})", if ok { "ok  " } else { "FAIL" });
    }

    // single-mode free evolutions across shells
    let gm = GridSpec::new(2, 256, 1.0).unwrap();
    let dt = 1.0 / 64.0;
    let ens: Vec<ChartTrajectory> = (3..=7)
        .map(|k| {
            let w = ComplexField::plane_wave(gm, 0.0, &[2f64.powi(k), 0.0], Complex64::new(1.0, 0.0));
            free_trajectory(&w, T, dt).unwrap()
        })
        .collect();
    let rep = lemma_diagnostics(&ens, &DirectionSet::lattice(2), &LemmaOptions::default()).unwrap();
    let slopes = [
        ("R2", rep.slope(3, 7, |s| s.r2)),
        ("R3", rep.slope(3, 7, |s| s.r3)),
        ("R4", rep.slope(3, 7, |s| s.r4)),
    ];
    let r4_max = rep.per_k.iter().map(|s| s.r4).fold(0.0, f64::max);
    let uniform = slopes.iter().all(|(_, v)| v.abs() <= 0.1);
    println!(
        "  {} single-mode shell uniformity, k = 3..7: {} (tolerance 0.1)",
        if uniform { "ok  " } else { "FAIL" },
        slopes.iter().map(|(n, v)| format!("{n} slope {v:.3}")).collect::<Vec<_>>().join(", ")
    );
    println!("  {} single-mode R4 <= 2: max {r4_max:.4}", if r4_max <= 2.0 { "ok  " } else { "FAIL" });
    pass &= uniform && r4_max <= 2.0;

    let failed = checks.iter().filter(|(_, v, t)| v > t).count() + usize::from(!uniform) + usize::from(r4_max > 2.0);
    verdict(
        8,
        "identities and oracles",
        pass,
        format!("{} of {} checks passed", checks.len() + 2 - failed, checks.len() + 2),
    );
}
