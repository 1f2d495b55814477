//! Smooth cutoff functions: the radial bump `η₀`, its dyadic shells `η_k`,
//! the one-sided cutoffs `χ_{k,l}` and the time cutoff `ψ`.
//!
//! All of them are built from the mollifier step
//! `T(x) = θ(x) / (θ(x) + θ(1-x))` with `θ(x) = exp(-1/x)` for `x > 0`.

/// Plateau radius: `η₀ = 1` for `|r| <= 5/4`.
pub const PLATEAU: f64 = 5.0 / 4.0;
/// Support radius: `η₀ = 0` for `|r| >= 8/5`.
pub const SUPPORT: f64 = 8.0 / 5.0;

fn theta(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth step from 0 (x <= 0) to 1 (x >= 1).
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = theta(x);
    let b = theta(1.0 - x);
    a / (a + b)
}

/// `η₀(r)`, radial in `r = |ξ|`.
pub fn eta0(r: f64) -> f64 {
    1.0 - smooth_step((r.abs() - PLATEAU) / (SUPPORT - PLATEAU))
}

/// Dyadic shell `η_k(r) = η₀(r/2^k) - η₀(r/2^{k-1})`, with `η_0 = η₀`.
pub fn eta_shell(k: u32, r: f64) -> f64 {
    if k == 0 {
        return eta0(r);
    }
    let s = 2f64.powi(k as i32);
    eta0(r / s) - eta0(2.0 * r / s)
}

/// `χ_{k,l}(r)`: identically one for `k <= 99`, otherwise
/// `[1 - η₀(r/2^{k-l})]·1_{r>=0}`.
pub fn chi(k: u32, l: u32, r: f64) -> f64 {
    assert!(l <= 60, "chi is defined for l in [0, 60]");
    if k <= 99 {
        return 1.0;
    }
    if r < 0.0 {
        return 0.0;
    }
    1.0 - eta0(r / 2f64.powi(k as i32 - l as i32))
}

/// Even time cutoff, one on `[-5/4, 5/4]`, supported in `[-8/5, 8/5]`.
pub fn psi(t: f64) -> f64 {
    eta0(t)
}

/// Shell range `[lo, hi]` outside of which `η_k` vanishes.
pub fn shell_support(k: u32) -> (f64, f64) {
    if k == 0 {
        (0.0, SUPPORT)
    } else {
        let s = 2f64.powi(k as i32);
        (s * PLATEAU / 2.0, s * SUPPORT)
    }
}
