//! Single-series SVG line charts.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::report::{Cell, RunReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub title: String,
    pub x: String,
    pub y: String,
    #[serde(default)]
    pub filter: Vec<(String, Cell)>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Draws the chart of `report` as a standalone SVG document, or `None` if the
/// report has no chart or fewer than two points.
pub fn render_svg(report: &RunReport) -> Option<String> {
    let chart = report.chart.as_ref()?;
    let filter: Vec<(&str, Cell)> = chart.filter.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    let (xi, yi) = (report.column(&chart.x)?, report.column(&chart.y)?);
    let points: Vec<(f64, f64)> = report
        .select(&filter)
        .filter_map(|r| Some((r[xi].as_f64()?, r[yi].as_f64()?)))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(&chart.title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
    );
    let label = |svg: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{}</text>"#,
            escape(&text)
        );
    };
    label(&mut svg, left, bottom + 16.0, "start", format!("{x0:.6}"));
    label(&mut svg, right, bottom + 16.0, "end", format!("{x1:.6}"));
    label(&mut svg, left - 4.0, bottom, "end", format!("{y0:.6}"));
    label(&mut svg, left - 4.0, top + 4.0, "end", format!("{y1:.6}"));
    label(&mut svg, WIDTH / 2.0, HEIGHT - 12.0, "middle", chart.x.clone());
    label(&mut svg, 14.0, HEIGHT / 2.0, "middle", chart.y.clone());
    let path: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    let _ = writeln!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#1f5fa8" stroke-width="2"/>"##,
        path.join(" ")
    );
    svg.push_str("</svg>\n");
    Some(svg)
}
