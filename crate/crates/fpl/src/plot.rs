//! Minimal deterministic SVG plotting: line overlays, scatter plots, and
//! heatmaps. Output contains no timestamps or environment-dependent fields,
//! so identical inputs yield byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{FplError, Result};
use crate::Real;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 62.0;
const MARGIN_R: f64 = 18.0;
const MARGIN_T: f64 = 32.0;
const MARGIN_B: f64 = 46.0;

/// Fixed series palette (Okabe-Ito, colorblind-safe).
pub const PALETTE: [&str; 6] =
    ["#0072b2", "#d55e00", "#009e73", "#cc79a7", "#e69f00", "#56b4e9"];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub xs: Vec<Real>,
    pub ys: Vec<Real>,
    /// Draw markers at the points instead of a connected line.
    pub scatter: bool,
}

impl Series {
    pub fn line(label: impl Into<String>, xs: Vec<Real>, ys: Vec<Real>) -> Self {
        Series { label: label.into(), xs, ys, scatter: false }
    }

    pub fn scatter(label: impl Into<String>, xs: Vec<Real>, ys: Vec<Real>) -> Self {
        Series { label: label.into(), xs, ys, scatter: true }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Axes {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Fixed limits; computed from data when `None`.
    pub x_range: Option<(Real, Real)>,
    pub y_range: Option<(Real, Real)>,
}

fn fmt(v: f64) -> String {
    // fixed short float formatting keeps files byte-stable
    let s = format!("{v:.3}");
    s
}

fn data_range(vals: impl Iterator<Item = Real>) -> (Real, Real) {
    let mut lo = Real::INFINITY;
    let mut hi = Real::NEG_INFINITY;
    for v in vals {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.04 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

/// Overlay plot: each series drawn in palette order with a legend. Errors on
/// an empty series list or mismatched coordinate lengths.
pub fn write_line_plot(path: impl AsRef<Path>, axes: &Axes, series: &[Series]) -> Result<()> {
    if series.is_empty() {
        return Err(FplError::InvalidSpec("no series to plot".into()));
    }
    for s in series {
        if s.xs.len() != s.ys.len() {
            return Err(FplError::Shape(format!("series '{}' has uneven coordinates", s.label)));
        }
        if s.xs.is_empty() {
            return Err(FplError::InvalidSpec(format!("series '{}' is empty", s.label)));
        }
    }
    let (x_lo, x_hi) = axes
        .x_range
        .unwrap_or_else(|| data_range(series.iter().flat_map(|s| s.xs.iter().copied())));
    let (y_lo, y_hi) = axes
        .y_range
        .unwrap_or_else(|| data_range(series.iter().flat_map(|s| s.ys.iter().copied())));
    let px = |x: Real| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_L - MARGIN_R);
    let py = |y: Real| HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B);

    let mut svg = String::new();
    header(&mut svg, axes);
    frame(&mut svg, axes, x_lo, x_hi, y_lo, y_hi);
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if s.scatter {
            for (&x, &y) in s.xs.iter().zip(&s.ys) {
                let _ = write!(
                    svg,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{color}\"/>",
                    fmt(px(x)),
                    fmt(py(y))
                );
            }
        } else {
            let pts: Vec<String> =
                s.xs.iter().zip(&s.ys).map(|(&x, &y)| format!("{},{}", fmt(px(x)), fmt(py(y)))).collect();
            let _ = write!(
                svg,
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
                pts.join(" ")
            );
        }
        // legend entry
        let ly = MARGIN_T + 8.0 + 16.0 * i as f64;
        let _ = write!(
            svg,
            "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"4\" fill=\"{color}\"/>\
             <text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"monospace\">{}</text>",
            fmt(WIDTH - MARGIN_R - 150.0),
            fmt(ly - 3.0),
            fmt(WIDTH - MARGIN_R - 133.0),
            fmt(ly + 2.0),
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)?;
    Ok(())
}

/// Heatmap of a row-major grid of values over a rectangle, diverging
/// blue–white–red palette centered at zero.
pub fn write_heatmap(
    path: impl AsRef<Path>,
    axes: &Axes,
    values: &[Real],
    nx: usize,
    ny: usize,
    x_range: (Real, Real),
    y_range: (Real, Real),
) -> Result<()> {
    if values.len() != nx * ny || nx == 0 || ny == 0 {
        return Err(FplError::Shape(format!(
            "heatmap wants {nx}x{ny} values, got {}",
            values.len()
        )));
    }
    let vmax = values.iter().fold(0.0 as Real, |m, v| m.max(v.abs())).max(1e-30);
    let mut svg = String::new();
    header(&mut svg, axes);
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let (cw, ch) = (plot_w / nx as f64, plot_h / ny as f64);
    for iy in 0..ny {
        for ix in 0..nx {
            let v = values[iy * nx + ix] / vmax; // in [-1, 1]
            let (r, g, b) = diverging(v);
            // row 0 is the bottom of the y-axis
            let _ = write!(
                svg,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"rgb({r},{g},{b})\"/>",
                fmt(MARGIN_L + ix as f64 * cw),
                fmt(HEIGHT - MARGIN_B - (iy as f64 + 1.0) * ch),
                fmt(cw + 0.5),
                fmt(ch + 0.5)
            );
        }
    }
    frame(&mut svg, axes, x_range.0, x_range.1, y_range.0, y_range.1);
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)?;
    Ok(())
}

fn diverging(v: Real) -> (u8, u8, u8) {
    let t = v.clamp(-1.0, 1.0);
    if t >= 0.0 {
        // white -> red
        let u = t;
        (255, (255.0 * (1.0 - 0.85 * u)) as u8, (255.0 * (1.0 - 0.9 * u)) as u8)
    } else {
        // white -> blue
        let u = -t;
        ((255.0 * (1.0 - 0.9 * u)) as u8, (255.0 * (1.0 - 0.6 * u)) as u8, 255)
    }
}

fn header(svg: &mut String, axes: &Axes) {
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\
         <text x=\"{}\" y=\"20\" font-size=\"14\" font-family=\"monospace\" text-anchor=\"middle\">{}</text>",
        fmt(WIDTH / 2.0),
        escape(&axes.title)
    );
}

fn frame(svg: &mut String, axes: &Axes, x_lo: Real, x_hi: Real, y_lo: Real, y_hi: Real) {
    let _ = write!(
        svg,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>",
        fmt(MARGIN_L),
        fmt(MARGIN_T),
        fmt(WIDTH - MARGIN_L - MARGIN_R),
        fmt(HEIGHT - MARGIN_T - MARGIN_B)
    );
    for i in 0..=4 {
        let tx = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
        let ty = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
        let pxv = MARGIN_L + (WIDTH - MARGIN_L - MARGIN_R) * i as f64 / 4.0;
        let pyv = HEIGHT - MARGIN_B - (HEIGHT - MARGIN_T - MARGIN_B) * i as f64 / 4.0;
        let _ = write!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"10\" font-family=\"monospace\" text-anchor=\"middle\">{}</text>\
             <text x=\"{}\" y=\"{}\" font-size=\"10\" font-family=\"monospace\" text-anchor=\"end\">{}</text>",
            fmt(pxv),
            fmt(HEIGHT - MARGIN_B + 16.0),
            fmt(tx),
            fmt(MARGIN_L - 6.0),
            fmt(pyv + 3.0),
            fmt(ty)
        );
    }
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"monospace\" text-anchor=\"middle\">{}</text>\
         <text x=\"16\" y=\"{}\" font-size=\"12\" font-family=\"monospace\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>",
        fmt(WIDTH / 2.0),
        fmt(HEIGHT - 10.0),
        escape(&axes.x_label),
        fmt(HEIGHT / 2.0),
        fmt(HEIGHT / 2.0),
        escape(&axes.y_label)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
