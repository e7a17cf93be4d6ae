//! Standalone SVG line plots.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{RunError, RunResult};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }
}

/// Affine map between data coordinates and the pixel plot area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Frame {
    /// Bounds of the finite points; an empty extent is widened to unit size.
    pub fn fit(series: &[Series]) -> Self {
        let finite = series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|(x, y)| x.is_finite() && y.is_finite());
        let (mut x_min, mut x_max, mut y_min, mut y_max) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for &(x, y) in finite {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
        if !x_min.is_finite() {
            (x_min, x_max, y_min, y_max) = (0.0, 1.0, 0.0, 1.0);
        }
        let widen = |lo: f64, hi: f64| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        let (x_min, x_max) = widen(x_min, x_max);
        let (y_min, y_max) = widen(y_min, y_max);
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    fn plot_width() -> f64 {
        WIDTH - LEFT - RIGHT
    }

    fn plot_height() -> f64 {
        HEIGHT - TOP - BOTTOM
    }

    pub fn to_pixel(&self, x: f64, y: f64) -> (f64, f64) {
        let px = LEFT + (x - self.x_min) / (self.x_max - self.x_min) * Self::plot_width();
        let py = TOP + (self.y_max - y) / (self.y_max - self.y_min) * Self::plot_height();
        (px, py)
    }

    pub fn to_data(&self, px: f64, py: f64) -> (f64, f64) {
        let x = self.x_min + (px - LEFT) / Self::plot_width() * (self.x_max - self.x_min);
        let y = self.y_max - (py - TOP) / Self::plot_height() * (self.y_max - self.y_min);
        (x, y)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e5) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Renders one polyline per series with axes, ticks and a legend.
pub fn render(series: &[Series], title: &str) -> RunResult<String> {
    if series.is_empty() {
        return Err(RunError::Config("plot needs at least one series".into()));
    }
    if let Some(s) = series.iter().find(|s| s.points.len() < 2) {
        return Err(RunError::Config(format!(
            "series {:?} has fewer than 2 points",
            s.label
        )));
    }
    let frame = Frame::fit(series);
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        LEFT + Frame::plot_width() / 2.0,
        TOP / 2.0 + 6.0,
        escape(title)
    );

    let (x0, y0) = frame.to_pixel(frame.x_min, frame.y_min);
    let (x1, y1) = frame.to_pixel(frame.x_max, frame.y_max);
    let _ = writeln!(w, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(
        w,
        r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y0:.3}"/>"#
    );
    let _ = writeln!(
        w,
        r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x0:.3}" y2="{y1:.3}"/>"#
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = frame.x_min + t * (frame.x_max - frame.x_min);
        let yv = frame.y_min + t * (frame.y_max - frame.y_min);
        let (px, _) = frame.to_pixel(xv, frame.y_min);
        let (_, py) = frame.to_pixel(frame.x_min, yv);
        let _ = writeln!(
            w,
            r#"<line x1="{px:.3}" y1="{y0:.3}" x2="{px:.3}" y2="{:.3}"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            w,
            r#"<line x1="{:.3}" y1="{py:.3}" x2="{x0:.3}" y2="{py:.3}"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{px:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="11" stroke="none">{}</text>"#,
            y0 + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end" font-family="sans-serif" font-size="11" stroke="none">{}</text>"#,
            x0 - 8.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(
        w,
        r#"<g class="plot" data-x-min="{:e}" data-x-max="{:e}" data-y-min="{:e}" data-y-max="{:e}" fill="none" stroke-width="1.5">"#,
        frame.x_min, frame.x_max, frame.y_min, frame.y_max
    );
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| {
                let (px, py) = frame.to_pixel(x, y);
                format!("{px:.3},{py:.3}")
            })
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline stroke="{}" data-label="{}" points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            escape(&s.label),
            pts.join(" ")
        );
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(
        w,
        r#"<g class="legend" font-family="sans-serif" font-size="12">"#
    );
    for (i, s) in series.iter().enumerate() {
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            w,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="3"/>"#,
            lx + 20.0,
            PALETTE[i % PALETTE.len()]
        );
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, "</svg>");
    Ok(out)
}

/// Writes [`render`] output to `path`.
pub fn emit_plot(series: &[Series], title: &str, path: &Path) -> RunResult<()> {
    let svg = render(series, title)?;
    std::fs::write(path, svg)?;
    Ok(())
}
