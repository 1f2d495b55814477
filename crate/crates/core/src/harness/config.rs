//! `key = value` experiment configuration.

use std::path::{Path, PathBuf};

use crate::error::{Result, SmapError};
use crate::grid::GridSpec;
use crate::nonlinearity::{DealiasPolicy, DealiasRule};
use crate::solver::{step_count, PicardOptions};
use crate::spacetime::{DirectionSet, LemmaOptions, TimeWindow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    GaussianBump,
    ModeSum,
    RandomBandlimited,
}

impl DataKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gaussian_bump" => Some(Self::GaussianBump),
            "mode_sum" => Some(Self::ModeSum),
            "random_bandlimited" => Some(Self::RandomBandlimited),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::GaussianBump => "gaussian_bump",
            Self::ModeSum => "mode_sum",
            Self::RandomBandlimited => "random_bandlimited",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionChoice {
    /// Axes and face diagonals.
    Lattice,
    Axes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub d: usize,
    pub n: usize,
    pub period: f64,
    pub t_final: f64,
    pub dt: f64,
    pub sigma0: f64,
    pub amplitudes: Vec<f64>,
    pub perturbations: Vec<f64>,
    pub tol: f64,
    pub max_iter: usize,
    pub dealias: DealiasRule,
    pub directions: DirectionChoice,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub inner_tol: f64,
    pub data_kind: DataKind,
    pub window: f64,
    pub time_samples: usize,
    pub ensemble_size: usize,
    pub snapshot_stride: usize,
    pub allow_subcritical: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            d: 2,
            n: 64,
            period: 2.0,
            t_final: 0.5,
            dt: 1.0 / 256.0,
            sigma0: 1.6,
            amplitudes: vec![1e-3],
            perturbations: vec![1e-3, 1e-4, 1e-5],
            tol: 1e-10,
            max_iter: 40,
            dealias: DealiasRule::TwoThirds,
            directions: DirectionChoice::Lattice,
            seed: 0,
            output_dir: PathBuf::from("smap-out"),
            inner_tol: 1e-12,
            data_kind: DataKind::GaussianBump,
            window: 1.0,
            time_samples: 64,
            ensemble_size: 8,
            snapshot_stride: 32,
            allow_subcritical: false,
        }
    }
}

fn config_err(line: usize, msg: impl std::fmt::Display) -> SmapError {
    SmapError::Config(format!("line {line}: {msg}"))
}

/// Float, or a fraction `a/b`.
fn parse_real(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|x| parse_real(x.trim())).collect()
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

impl ExperimentConfig {
    /// Parse a config text; every key is optional, unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut sigma0 = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(line_no, format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || config_err(line_no, format!("cannot parse `{value}` for `{key}`"));
            let real = || parse_real(value).ok_or_else(bad);
            let int = || value.parse::<usize>().map_err(|_| bad());
            match key {
                "d" => cfg.d = int()?,
                "n" => cfg.n = int()?,
                "period" => cfg.period = real()?,
                "T" => cfg.t_final = real()?,
                "dt" => cfg.dt = real()?,
                "sigma0" => sigma0 = Some(real()?),
                "amplitudes" => cfg.amplitudes = parse_list(value).ok_or_else(bad)?,
                "perturbations" => cfg.perturbations = parse_list(value).ok_or_else(bad)?,
                "tol" => cfg.tol = real()?,
                "max_iter" => cfg.max_iter = int()?,
                "dealias" => {
                    cfg.dealias = match value {
                        "two_thirds" => DealiasRule::TwoThirds,
                        "none" => DealiasRule::None,
                        _ => return Err(bad()),
                    }
                }
                "directions" => {
                    cfg.directions = match value {
                        "lattice" => DirectionChoice::Lattice,
                        "axes" => DirectionChoice::Axes,
                        _ => return Err(bad()),
                    }
                }
                "seed" => cfg.seed = value.parse().map_err(|_| bad())?,
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                "inner_tol" => cfg.inner_tol = real()?,
                "data_kind" => cfg.data_kind = DataKind::parse(value).ok_or_else(bad)?,
                "window" => cfg.window = real()?,
                "time_samples" => cfg.time_samples = int()?,
                "ensemble_size" => cfg.ensemble_size = int()?,
                "snapshot_stride" => cfg.snapshot_stride = int()?,
                "allow_subcritical" => cfg.allow_subcritical = parse_bool(value).ok_or_else(bad)?,
                _ => return Err(config_err(line_no, format!("unknown key `{key}`"))),
            }
        }
        cfg.sigma0 = sigma0.unwrap_or((cfg.d as f64 + 1.0) / 2.0 + 0.1);
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SmapError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `σ₀` at or below the critical `(d+1)/2`.
    pub fn is_subcritical(&self) -> bool {
        self.sigma0 <= (self.d as f64 + 1.0) / 2.0
    }

    /// Range checks; run after command-line overrides are applied.
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(SmapError::Config(m));
        if self.d == 0 {
            return err("d must be at least 1".into());
        }
        GridSpec::new(self.d, self.n, self.period).map_err(|e| SmapError::Config(e.to_string()))?;
        if !(self.t_final > 0.0 && self.t_final <= 1.0) {
            return err(format!("T must lie in (0, 1], got {}", self.t_final));
        }
        step_count(self.t_final, self.dt).map_err(|e| SmapError::Config(e.to_string()))?;
        for (name, v) in [
            ("tol", self.tol),
            ("inner_tol", self.inner_tol),
            ("window", self.window),
            ("sigma0", self.sigma0),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return err(format!("{name} must be positive, got {v}"));
            }
        }
        if self.amplitudes.is_empty() || self.amplitudes.iter().any(|a| !(*a >= 0.0 && a.is_finite())) {
            return err("amplitudes must be a non-empty list of non-negative numbers".into());
        }
        if self.perturbations.iter().any(|a| !(*a > 0.0)) {
            return err("perturbations must be positive".into());
        }
        for (name, v) in [
            ("max_iter", self.max_iter),
            ("time_samples", self.time_samples),
            ("ensemble_size", self.ensemble_size),
            ("snapshot_stride", self.snapshot_stride),
        ] {
            if v == 0 {
                return err(format!("{name} must be positive"));
            }
        }
        if self.is_subcritical() && !self.allow_subcritical {
            return err(format!(
                "sigma0 = {} is not above (d+1)/2 = {}; pass --allow-subcritical to run anyway",
                self.sigma0,
                (self.d as f64 + 1.0) / 2.0
            ));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.d, self.n, self.period)
    }

    pub fn picard_options(&self) -> PicardOptions {
        PicardOptions {
            sigma0: self.sigma0,
            tol: self.tol,
            max_iter: self.max_iter,
            dt: self.dt,
            dealias: DealiasPolicy { rule: self.dealias },
        }
    }

    pub fn time_window(&self) -> Result<TimeWindow> {
        TimeWindow::new(self.window, self.time_samples)
    }

    pub fn lemma_options(&self) -> Result<LemmaOptions> {
        Ok(LemmaOptions {
            window: self.time_window()?,
            sigma: self.sigma0,
            ..LemmaOptions::default()
        })
    }

    pub fn direction_set(&self) -> DirectionSet {
        match self.directions {
            DirectionChoice::Lattice => DirectionSet::lattice(self.d),
            DirectionChoice::Axes => DirectionSet::axes(self.d),
        }
    }
}
