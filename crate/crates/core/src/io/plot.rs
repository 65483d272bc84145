//! Deterministic SVG rendering of magnetization traces.
//!
//! Layout mirrors the usual presentation of these experiments: magnetization
//! against time, fixed y-range [-1.05, 1.05], dotted guide line at zero
//! magnetization. Identical tables produce byte-identical SVG.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::results::ResultTable;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 18.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 46.0;
const Y_MIN: f64 = -1.05;
const Y_MAX: f64 = 1.05;

struct Frame {
    t_max: f64,
}

impl Frame {
    fn x(&self, t: f64) -> f64 {
        MARGIN_LEFT + (t / self.t_max) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, mz: f64) -> f64 {
        let frac = (mz - Y_MIN) / (Y_MAX - Y_MIN);
        HEIGHT - MARGIN_BOTTOM - frac * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

fn polyline(out: &mut String, frame: &Frame, pts: &[(f64, f64)], style: &str) {
    if pts.len() == 1 {
        let (t, mz) = pts[0];
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="3" {style}/>"#,
            fmt(frame.x(t)),
            fmt(frame.y(mz)),
        );
        return;
    }
    let coords: Vec<String> = pts
        .iter()
        .map(|&(t, mz)| format!("{},{}", fmt(frame.x(t)), fmt(frame.y(mz))))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" {style} points="{}"/>"#,
        coords.join(" ")
    );
}

/// Render the table as a standalone SVG document.
pub fn plot_svg(table: &ResultTable) -> Result<String> {
    if table.is_empty() {
        return Err(Error::InvalidParams("cannot plot an empty table".into()));
    }
    let t_max = table
        .rows
        .iter()
        .map(|r| r.time_fs)
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let frame = Frame { t_max };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // axes
    let x0 = fmt(MARGIN_LEFT);
    let x1 = fmt(WIDTH - MARGIN_RIGHT);
    let y0 = fmt(HEIGHT - MARGIN_BOTTOM);
    let y1 = fmt(MARGIN_TOP);
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black" stroke-width="1"/>"#
    );

    // y ticks and labels
    for tick in [-1.0f64, -0.5, 0.0, 0.5, 1.0] {
        let y = fmt(frame.y(tick));
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="black" stroke-width="1"/>"#,
            fmt(MARGIN_LEFT - 5.0)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="end" font-family="monospace">{}</text>"#,
            fmt(MARGIN_LEFT - 8.0),
            fmt(frame.y(tick) + 4.0),
            fmt(tick),
        );
    }

    // x ticks at quarters of the horizon
    for k in 0..=4 {
        let t = t_max * k as f64 / 4.0;
        let x = fmt(frame.x(t));
        let _ = writeln!(
            out,
            r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="black" stroke-width="1"/>"#,
            fmt(HEIGHT - MARGIN_BOTTOM + 5.0)
        );
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{}" font-size="12" text-anchor="middle" font-family="monospace">{}</text>"#,
            fmt(HEIGHT - MARGIN_BOTTOM + 20.0),
            fmt(t),
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle" font-family="monospace">time (fs)</text>"#,
        fmt((MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0),
        fmt(HEIGHT - 8.0),
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" font-size="13" text-anchor="middle" font-family="monospace" transform="rotate(-90 16 {})">average magnetization</text>"#,
        fmt(HEIGHT / 2.0),
        fmt(HEIGHT / 2.0),
    );

    // dotted zero-magnetization guide
    let zero_y = fmt(frame.y(0.0));
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{zero_y}" x2="{x1}" y2="{zero_y}" stroke="black" stroke-width="1" stroke-dasharray="2,5"/>"#
    );

    // series
    let exact: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.time_fs, r.mz_exact)).collect();
    polyline(
        &mut out,
        &frame,
        &exact,
        r#"stroke="black" stroke-width="1.5""#,
    );
    let trotter: Vec<(f64, f64)> = table
        .rows
        .iter()
        .map(|r| (r.time_fs, r.mz_trotter))
        .collect();
    polyline(
        &mut out,
        &frame,
        &trotter,
        r##"stroke="#1f77b4" stroke-width="1.5""##,
    );
    let noisy: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter_map(|r| r.mz_noisy.map(|v| (r.time_fs, v)))
        .collect();
    if !noisy.is_empty() {
        polyline(
            &mut out,
            &frame,
            &noisy,
            r#"stroke="black" stroke-width="1.5" stroke-dasharray="8,4""#,
        );
    }
    for r in &table.rows {
        if let Some(mean) = r.mz_sampled_mean {
            let cx = fmt(frame.x(r.time_fs));
            if let Some(se) = r.mz_sampled_stderr {
                let _ = writeln!(
                    out,
                    r##"<line x1="{cx}" y1="{}" x2="{cx}" y2="{}" stroke="#d62728" stroke-width="1"/>"##,
                    fmt(frame.y(mean - se)),
                    fmt(frame.y(mean + se)),
                );
            }
            let _ = writeln!(
                out,
                r##"<circle cx="{cx}" cy="{}" r="3" fill="none" stroke="#d62728" stroke-width="1.5"/>"##,
                fmt(frame.y(mean)),
            );
        }
    }

    // legend
    let has_sampled = table.rows.iter().any(|r| r.mz_sampled_mean.is_some());
    let mut legend: Vec<(&str, &str)> = vec![
        ("exact", r#"stroke="black""#),
        ("trotter", r##"stroke="#1f77b4""##),
    ];
    if !noisy.is_empty() {
        legend.push(("noisy", r#"stroke="black" stroke-dasharray="8,4""#));
    }
    if has_sampled {
        legend.push(("sampled", r##"stroke="#d62728""##));
    }
    for (k, (name, style)) in legend.iter().enumerate() {
        let y = MARGIN_TOP + 14.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style} stroke-width="1.5"/>"#,
            fmt(WIDTH - 150.0),
            fmt(y),
            fmt(WIDTH - 120.0),
            fmt(y),
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" font-family="monospace">{name}</text>"#,
            fmt(WIDTH - 114.0),
            fmt(y + 4.0),
        );
    }

    out.push_str("</svg>\n");
    Ok(out)
}

/// Render the table and write the SVG to `path`.
pub fn render_plot(table: &ResultTable, path: &Path) -> Result<()> {
    let svg = plot_svg(table)?;
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
