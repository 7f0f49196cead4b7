//! Parameter sweeps of the closed-form MSC over (Δ₀, ω, T).

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::optimize::golden_section_min;
use crate::steering::{msc_closed_form, SteeringError};
use crate::udw_state::{check_delta0, gamma_ratio, steady_state_coeffs, StateError};

/// Finite differences smaller than this are treated as flat.
pub const CLASSIFICATION_TOL: f64 = 1e-10;
/// Temperature tolerance of the golden-section dip refinement.
pub const DIP_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("grid axis `{0}` is empty")]
    EmptyAxis(&'static str),
    #[error("threshold temperature is only defined for 0 < delta0 < 1, got {0}")]
    ThresholdUndefined(f64),
    #[error("temperature grid needs at least 3 increasing points")]
    InvalidTemperatureGrid,
    #[error("msc curve is neither monotone nor a single dip")]
    Unclassifiable,
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Steering(#[from] SteeringError),
}

/// Inclusive arithmetic progression `start, start + step, ..., stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl LinearRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, SweepError> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
            return Err(SweepError::InvalidRange(format!("{start}:{stop}:{step}")));
        }
        Ok(Self { start, stop, step })
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values computed as `start + i·step` (no accumulated rounding).
    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl std::str::FromStr for LinearRange {
    type Err = SweepError;

    /// Parses `start:stop:step`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || SweepError::InvalidRange(s.to_string());
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        Self::new(nums[0], nums[1], nums[2])
    }
}

/// Axes of a sweep. Rows are produced Δ₀-major, then ω, then T.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub delta0: Vec<f64>,
    pub omega: Vec<f64>,
    pub temperature: Vec<f64>,
}

impl GridSpec {
    pub fn new(delta0: Vec<f64>, omega: Vec<f64>, temperature: Vec<f64>) -> Result<Self, SweepError> {
        if delta0.is_empty() {
            return Err(SweepError::EmptyAxis("delta0"));
        }
        if omega.is_empty() {
            return Err(SweepError::EmptyAxis("omega"));
        }
        if temperature.is_empty() {
            return Err(SweepError::EmptyAxis("temperature"));
        }
        for &d in &delta0 {
            check_delta0(d)?;
        }
        for &w in &omega {
            if !(w.is_finite() && w > 0.0) {
                return Err(StateError::InvalidOmega(w).into());
            }
        }
        for &t in &temperature {
            if !(t.is_finite() && t > 0.0) {
                return Err(StateError::InvalidTemperature(t).into());
            }
        }
        Ok(Self { delta0, omega, temperature })
    }

    pub fn from_ranges(delta0: LinearRange, temperature: LinearRange, omega: Vec<f64>) -> Result<Self, SweepError> {
        Self::new(delta0.values(), omega, temperature.values())
    }

    pub fn len(&self) -> usize {
        self.delta0.len() * self.omega.len() * self.temperature.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point(&self, index: usize) -> (f64, f64, f64) {
        let nt = self.temperature.len();
        let nw = self.omega.len();
        let t = index % nt;
        let w = (index / nt) % nw;
        let d = index / (nt * nw);
        (self.delta0[d], self.omega[w], self.temperature[t])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub delta0: f64,
    pub omega: f64,
    pub temperature: f64,
    pub gamma: f64,
    pub msc: f64,
}

/// Closed-form MSC at one parameter point.
pub fn msc_at(delta0: f64, omega: f64, temperature: f64) -> Result<SweepRow, SweepError> {
    let gamma = gamma_ratio(omega, temperature)?;
    let msc = msc_closed_form(&steady_state_coeffs(delta0, gamma)?)?.value;
    Ok(SweepRow { delta0, omega, temperature, gamma, msc })
}

pub fn msc_grid(spec: &GridSpec) -> Result<Vec<SweepRow>, SweepError> {
    (0..spec.len())
        .map(|i| {
            let (d, w, t) = spec.point(i);
            msc_at(d, w, t)
        })
        .collect()
}

/// [`msc_grid`] evaluated on `threads` worker threads; row order is unchanged.
pub fn msc_grid_parallel(spec: &GridSpec, threads: usize) -> Result<Vec<SweepRow>, SweepError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| SweepError::InvalidRange(format!("thread pool: {e}")))?;
    pool.install(|| {
        (0..spec.len())
            .into_par_iter()
            .map(|i| {
                let (d, w, t) = spec.point(i);
                msc_at(d, w, t)
            })
            .collect()
    })
}

/// T* = ω / (2 artanh √Δ₀), where the steady-state coherence D vanishes.
pub fn threshold_temperature(delta0: f64, omega: f64) -> Result<f64, SweepError> {
    if !(delta0 > 0.0 && delta0 < 1.0) {
        return Err(SweepError::ThresholdUndefined(delta0));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(StateError::InvalidOmega(omega).into());
    }
    Ok(omega / (2.0 * delta0.sqrt().atanh()))
}

/// High-temperature limit |Δ₀|/3.
pub fn asymptotic_msc(delta0: f64) -> Result<f64, SweepError> {
    Ok(check_delta0(delta0)?.abs() / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Monotonicity {
    Decreasing,
    DipThenRise { t_min: f64 },
    Increasing,
    Constant,
}

/// Classifies the closed-form MSC along `t_grid` from finite differences.
pub fn monotonicity_report(delta0: f64, omega: f64, t_grid: &[f64]) -> Result<Monotonicity, SweepError> {
    if t_grid.len() < 3 || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(SweepError::InvalidTemperatureGrid);
    }
    let values: Vec<f64> = t_grid
        .iter()
        .map(|&t| msc_at(delta0, omega, t).map(|r| r.msc))
        .collect::<Result<_, _>>()?;
    let signs: Vec<i8> = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| d.abs() > CLASSIFICATION_TOL)
        .map(|d| if d > 0.0 { 1 } else { -1 })
        .collect();
    if signs.is_empty() {
        return Ok(Monotonicity::Constant);
    }
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    match (changes, signs[0]) {
        (0, -1) => Ok(Monotonicity::Decreasing),
        (0, _) => Ok(Monotonicity::Increasing),
        (1, -1) => {
            let k = values
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .expect("non-empty grid");
            let lo = t_grid[k.saturating_sub(1)];
            let hi = t_grid[(k + 1).min(t_grid.len() - 1)];
            let (t_min, _) = golden_section_min(
                |t| msc_at(delta0, omega, t).map(|r| r.msc).unwrap_or(f64::INFINITY),
                lo,
                hi,
                DIP_TOL,
            );
            Ok(Monotonicity::DipThenRise { t_min })
        }
        _ => Err(SweepError::Unclassifiable),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Figure {
    /// MSC surfaces over (Δ₀, T), one panel per ω.
    Surface,
    /// MSC curves over T, one panel per Δ₀ with one curve per ω.
    Curves,
}

/// Grid choices used when emitting figure data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureDefaults {
    pub temperature: LinearRange,
    pub surface_delta0: LinearRange,
    pub curve_delta0: Vec<f64>,
    pub omega: Vec<f64>,
}

impl Default for FigureDefaults {
    fn default() -> Self {
        Self {
            temperature: LinearRange { start: 0.05, stop: 10.0, step: 0.05 },
            surface_delta0: LinearRange { start: -3.0, stop: 1.0, step: 0.05 },
            curve_delta0: vec![-1.0, 0.5, 1.0],
            omega: vec![1.0, 3.0, 5.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    /// File stem such as `fig1_a`.
    pub name: String,
    pub title: String,
    pub grid: GridSpec,
    pub rows: Vec<SweepRow>,
}

fn panel_letter(i: usize) -> char {
    (b'a' + i as u8) as char
}

/// Rows for each panel of the chosen figure, in panel order.
pub fn figure_data(which: Figure, defaults: &FigureDefaults) -> Result<Vec<Panel>, SweepError> {
    let temperature = defaults.temperature.values();
    match which {
        Figure::Surface => defaults
            .omega
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let grid = GridSpec::new(defaults.surface_delta0.values(), vec![w], temperature.clone())?;
                Ok(Panel {
                    name: format!("fig1_{}", panel_letter(i)),
                    title: format!("omega = {w}"),
                    rows: msc_grid(&grid)?,
                    grid,
                })
            })
            .collect(),
        Figure::Curves => defaults
            .curve_delta0
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let grid = GridSpec::new(vec![d], defaults.omega.clone(), temperature.clone())?;
                Ok(Panel {
                    name: format!("fig2_{}", panel_letter(i)),
                    title: format!("delta0 = {d}"),
                    rows: msc_grid(&grid)?,
                    grid,
                })
            })
            .collect(),
    }
}
