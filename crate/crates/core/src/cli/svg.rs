//! Minimal SVG emitter for the tabular outputs.

use std::fmt::Write as _;

use super::output::format_sig12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Bars,
    Lines,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub kind: PlotKind,
    /// `(label, points)`
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn bounds(plot: &Plot) -> (f64, f64, f64, f64) {
    let pts = plot.series.iter().flat_map(|s| s.1.iter());
    let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let y0 = 0.0_f64.min(
        plot.series
            .iter()
            .flat_map(|s| s.1.iter().map(|p| p.1))
            .fold(f64::INFINITY, f64::min),
    );
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    (x0, x1, y0, y1)
}

pub fn render(plot: &Plot) -> String {
    let (x0, x1, y0, y1) = bounds(plot);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(&plot.title)
    );
    // axes
    let _ = writeln!(
        out,
        r#"<path d="M{m} {t} L{m} {b} L{r} {b}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    for (value, pos, anchor, x, y) in [
        (x0, sx(x0), "middle", None, Some(HEIGHT - MARGIN + 18.0)),
        (x1, sx(x1), "middle", None, Some(HEIGHT - MARGIN + 18.0)),
        (y0, sy(y0), "end", Some(MARGIN - 6.0), None),
        (y1, sy(y1), "end", Some(MARGIN - 6.0), None),
    ] {
        let (tx, ty) = match (x, y) {
            (None, Some(y)) => (pos, y),
            (Some(x), _) => (x, pos + 4.0),
            _ => unreachable!(),
        };
        let _ = writeln!(
            out,
            r#"<text x="{tx:.2}" y="{ty:.2}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{}</text>"#,
            format_sig12(value)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(&plot.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&plot.y_label)
    );

    for (i, (label, points)) in plot.series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        match plot.kind {
            PlotKind::Bars => {
                let bar = ((WIDTH - 2.0 * MARGIN) / (points.len().max(1) as f64) * 0.6).clamp(1.0, 12.0);
                for &(x, y) in points {
                    if y == 0.0 {
                        continue;
                    }
                    let _ = writeln!(
                        out,
                        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}"/>"#,
                        sx(x) - bar / 2.0,
                        sy(y.max(0.0)),
                        bar,
                        (sy(0.0) - sy(y.max(0.0))).max(0.0)
                    );
                }
            }
            PlotKind::Lines => {
                let d: Vec<String> = points
                    .iter()
                    .enumerate()
                    .map(|(k, &(x, y))| format!("{}{:.2} {:.2}", if k == 0 { "M" } else { "L" }, sx(x), sy(y)))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<path d="{}" stroke="{color}" fill="none" stroke-width="1.5"/>"#,
                    d.join(" ")
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            WIDTH - MARGIN - 150.0,
            MARGIN + 16.0 * i as f64,
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
