//! CSV, JSON and SVG writers for sweep rows, trajectories and figure panels.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::lindblad::Trajectory;
use crate::qmat::DensityOperator4;
use crate::steering::{msc_numeric, AngleGrid};
use crate::sweep::{FigureDefaults, Panel, SweepRow};
use crate::udw_state::delta_of_state;

pub const SWEEP_HEADER: &str = "delta0,omega,temperature,gamma,msc";
pub const TRAJECTORY_HEADER: &str = "tau,trace,delta,min_eig,dist_to_steady,msc_numeric";
const SIGNIFICANT_DIGITS: usize = 12;

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Formats like C's `%.{digits}g`: shortest of fixed or exponent notation,
/// trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent notation");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -4 || exponent >= digits as i32 {
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exponent.abs())
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn num(x: f64) -> String {
    format_significant(x, SIGNIFICANT_DIGITS)
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", num(r.delta0), num(r.omega), num(r.temperature), num(r.gamma), num(r.msc))?;
    }
    out.flush()
}

pub fn write_json_records<W: Write, T: Serialize>(records: &[T], mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)?;
    out.flush()
}

/// Parses a sweep CSV back into rows.
pub fn read_sweep_csv(text: &str) -> Result<Vec<SweepRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(SWEEP_HEADER) => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .map(|line| {
            let f: Vec<f64> = line
                .split(',')
                .map(|v| v.parse::<f64>().map_err(|e| format!("{line}: {e}")))
                .collect::<Result<_, _>>()?;
            if f.len() != 5 {
                return Err(format!("expected 5 fields: {line}"));
            }
            Ok(SweepRow { delta0: f[0], omega: f[1], temperature: f[2], gamma: f[3], msc: f[4] })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub tau: f64,
    pub trace: f64,
    pub delta: f64,
    pub min_eig: f64,
    pub dist_to_steady: f64,
    pub msc_numeric: f64,
}

/// Diagnostics for each stored state; rows are evaluated in parallel but
/// returned in trajectory order.
pub fn trajectory_rows(traj: &Trajectory, steady: &DensityOperator4, grid: &AngleGrid) -> Vec<TrajectoryRow> {
    traj.times
        .par_iter()
        .zip(traj.states.par_iter())
        .map(|(&tau, rho)| TrajectoryRow {
            tau,
            trace: rho.matrix().trace().re,
            delta: delta_of_state(rho),
            min_eig: rho.min_eigenvalue(),
            dist_to_steady: rho.trace_distance(steady),
            msc_numeric: msc_numeric(rho, grid).map(|r| r.value).unwrap_or(f64::NAN),
        })
        .collect()
}

pub fn write_trajectory_csv<W: Write>(rows: &[TrajectoryRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            num(r.tau),
            num(r.trace),
            num(r.delta),
            num(r.min_eig),
            num(r.dist_to_steady),
            num(r.msc_numeric)
        )?;
    }
    out.flush()
}

#[derive(Debug, Clone, Serialize)]
pub struct PanelMeta {
    pub file: String,
    pub title: String,
    pub delta0: Vec<f64>,
    pub omega: Vec<f64>,
    pub temperature_points: usize,
    pub rows: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureMetadata {
    pub grid: Vec<PanelMeta>,
    pub defaults: FigureDefaults,
    pub version: String,
}

impl FigureMetadata {
    pub fn new(panels: &[Panel], defaults: &FigureDefaults) -> Self {
        Self {
            grid: panels
                .iter()
                .map(|p| PanelMeta {
                    file: format!("{}.csv", p.name),
                    title: p.title.clone(),
                    delta0: p.grid.delta0.clone(),
                    omega: p.grid.omega.clone(),
                    temperature_points: p.grid.temperature.len(),
                    rows: p.rows.len(),
                })
                .collect(),
            defaults: defaults.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 420.0;
const MARGIN: f64 = 50.0;
const LINE_COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn svg_frame(out: &mut String, title: &str, x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    out.push_str(&format!("<text x=\"{}\" y=\"20\" text-anchor=\"middle\">{title}</text>\n", SVG_W / 2.0));
    out.push_str(&format!(
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        SVG_W - 2.0 * MARGIN,
        SVG_H - 2.0 * MARGIN
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label} [{}, {}]</text>\n",
        SVG_W / 2.0,
        SVG_H - 15.0,
        num(x_range.0),
        num(x_range.1)
    ));
    out.push_str(&format!(
        "<text x=\"15\" y=\"{}\" transform=\"rotate(-90 15 {})\" text-anchor=\"middle\">{y_label} [{}, {}]</text>\n",
        SVG_H / 2.0,
        SVG_H / 2.0,
        num(y_range.0),
        num(y_range.1)
    ));
}

fn scale(v: f64, (lo, hi): (f64, f64), from: f64, to: f64) -> f64 {
    if hi > lo {
        from + (v - lo) / (hi - lo) * (to - from)
    } else {
        from
    }
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// One polyline of MSC against T per ω.
pub fn curves_svg(panel: &Panel) -> String {
    let x_range = extent(panel.rows.iter().map(|r| r.temperature));
    let y_range = (0.0, extent(panel.rows.iter().map(|r| r.msc)).1.max(1e-12));
    let mut out = String::new();
    svg_frame(&mut out, &panel.title, "T", "MSC", x_range, y_range);
    for (i, &w) in panel.grid.omega.iter().enumerate() {
        let points: Vec<String> = panel
            .rows
            .iter()
            .filter(|r| r.omega == w)
            .map(|r| {
                let x = scale(r.temperature, x_range, MARGIN, SVG_W - MARGIN);
                let y = scale(r.msc, y_range, SVG_H - MARGIN, MARGIN);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let color = LINE_COLORS[i % LINE_COLORS.len()];
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">omega = {}</text>\n",
            SVG_W - MARGIN - 90.0,
            MARGIN + 16.0 * (i as f64 + 1.0),
            num(w)
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Heat map of MSC over (T, Δ₀), white at 0 to dark blue at 1.
pub fn surface_svg(panel: &Panel) -> String {
    let temps = &panel.grid.temperature;
    let deltas = &panel.grid.delta0;
    let x_range = extent(temps.iter().copied());
    let y_range = extent(deltas.iter().copied());
    let mut out = String::new();
    svg_frame(&mut out, &panel.title, "T", "delta0", x_range, y_range);
    let cell_w = (SVG_W - 2.0 * MARGIN) / temps.len() as f64;
    let cell_h = (SVG_H - 2.0 * MARGIN) / deltas.len() as f64;
    for (k, r) in panel.rows.iter().enumerate() {
        let (i, j) = (k % temps.len(), k / temps.len());
        let shade = (255.0 * (1.0 - r.msc.clamp(0.0, 1.0))).round() as u8;
        out.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"rgb({shade},{shade},255)\"/>\n",
            MARGIN + i as f64 * cell_w,
            SVG_H - MARGIN - (j as f64 + 1.0) * cell_h,
            cell_w + 0.05,
            cell_h + 0.05
        ));
    }
    out.push_str("</svg>\n");
    out
}
