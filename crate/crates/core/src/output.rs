//! Run artifacts: CSV time series, JSON run records and SVG line plots.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{QlError, Result};
use crate::scenario::{RunRecord, ScenarioRun};

pub const CSV_HEADER: &str =
    "t,order_re,order_mod,purity,rho00,rho11,rho22,rho33,abs01,abs02,abs03,abs12,abs13,abs23,residual";

const OFFDIAG: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Twelve significant digits in scientific notation.
fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn check_records(records: &[RunRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(QlError::Parameter("no records to write".into()));
    }
    if let Some(r) = records.iter().find(|r| r.rho.dim() != 4) {
        return Err(QlError::Contract(format!(
            "expected 4x4 density matrices, got {}x{} at t = {}",
            r.rho.dim(),
            r.rho.dim(),
            r.t
        )));
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| QlError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| QlError::io(path, e))
}

/// CSV text for `records`, one row per sample time.
pub fn csv_string(records: &[RunRecord]) -> Result<String> {
    check_records(records)?;
    let mut out = String::with_capacity(256 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let mut cells = vec![num(r.t), num(r.order_re), num(r.order_mod), num(r.purity)];
        cells.extend((0..4).map(|k| num(r.rho.rho[(k, k)].re)));
        cells.extend(OFFDIAG.iter().map(|&(m, n)| num(r.rho.rho[(m, n)].norm())));
        cells.push(num(r.residual_mean));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn emit_csv(records: &[RunRecord], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &csv_string(records)?)
}

/// Pretty JSON of the whole run, including the resolved config.
pub fn emit_json(run: &ScenarioRun, path: impl AsRef<Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(run)?;
    text.push('\n');
    write_file(path.as_ref(), &text)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;

const SERIES_COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Named series plotted by [`emit_svg`], in drawing order.
pub fn svg_series(records: &[RunRecord]) -> Vec<(String, Vec<f64>)> {
    let mut series = vec![
        (
            "order_re".to_string(),
            records.iter().map(|r| r.order_re).collect(),
        ),
        (
            "purity".to_string(),
            records.iter().map(|r| r.purity).collect(),
        ),
    ];
    for (m, n) in OFFDIAG {
        series.push((
            format!("abs{m}{n}"),
            records.iter().map(|r| r.rho.rho[(m, n)].norm()).collect(),
        ));
    }
    series
}

/// Standalone SVG line plot of `records`.
pub fn svg_string(records: &[RunRecord]) -> Result<String> {
    check_records(records)?;
    let series = svg_series(records);
    let t0 = records.first().map_or(0.0, |r| r.t);
    let t1 = records.last().map_or(1.0, |r| r.t);
    let span = if t1 > t0 { t1 - t0 } else { 1.0 };
    // every plotted quantity lies in [-1, 1]
    let (y0, y1) = if series.iter().flat_map(|(_, v)| v).any(|&y| y < 0.0) {
        (-1.0, 1.0)
    } else {
        (0.0, 1.0)
    };
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |t: f64| LEFT + (t - t0) / span * pw;
    let py = |y: f64| TOP + (y1 - y.clamp(y0, y1)) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g stroke="black" fill="none"><line x1="{LEFT}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{b}"/></g>"#,
        b = TOP + ph,
        r = LEFT + pw
    );
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="11">"#);
    for k in 0..=4 {
        let t = t0 + span * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            px(t),
            TOP + ph + 15.0,
            trim(t)
        );
        let y = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            py(y) + 4.0,
            trim(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">t (mean periods)</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(s, "</g>");
    for (k, (name, ys)) in series.iter().enumerate() {
        let points: Vec<String> = records
            .iter()
            .zip(ys)
            .map(|(r, &y)| format!("{:.3},{:.3}", px(r.t), py(y)))
            .collect();
        let color = SERIES_COLORS[k % SERIES_COLORS.len()];
        let _ = writeln!(
            s,
            r#"<polyline data-series="{name}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 15.0 * (k as f64 + 1.0);
        let lx = LEFT + pw + 10.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}" font-family="sans-serif" font-size="11">{name}</text>"#,
            lx + 20.0,
            lx + 25.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn trim(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

pub fn emit_svg(records: &[RunRecord], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &svg_string(records)?)
}
