//! Minimal SVG 1.1 line and box charts rendered from result tables.

use std::fmt::Write as _;

use crate::table::ResultTable;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// One series per distinct combination of the `groups` columns (or a single
/// series), plotting `y` against `x` in row order.
pub fn series_from(table: &ResultTable, x: &str, y: &str, groups: &[&str]) -> Vec<Series> {
    let (Some(xi), Some(yi)) = (table.column_index(x), table.column_index(y)) else {
        return Vec::new();
    };
    let gi: Vec<(usize, &str)> = groups
        .iter()
        .filter_map(|g| Some((table.column_index(g)?, *g)))
        .collect();
    let mut out: Vec<(Vec<u64>, Series)> = Vec::new();
    for row in table.rows() {
        let key: Vec<u64> = gi.iter().map(|&(j, _)| row[j].to_bits()).collect();
        let pos = match out.iter().position(|(k, _)| *k == key) {
            Some(p) => p,
            None => {
                let label = if gi.is_empty() {
                    y.to_string()
                } else {
                    gi.iter()
                        .map(|&(j, g)| format!("{g} = {}", row[j]))
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                out.push((
                    key,
                    Series {
                        label,
                        points: Vec::new(),
                    },
                ));
                out.len() - 1
            }
        };
        out[pos].1.points.push((row[xi], row[yi]));
    }
    out.into_iter().map(|(_, s)| s).collect()
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Frame {
        let span = |it: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = it
                .filter(|v| v.is_finite())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        let (x0, x1) = span(&mut xs.clone());
        let (y0, y1) = span(&mut ys.clone());
        let pad = 0.05 * (y1 - y0);
        Frame {
            x0,
            x1,
            y0: y0 - pad,
            y1: y1 + pad,
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(svg: &mut String, title: &str) {
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(svg: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let (l, r, t, b) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        svg,
        r#"<path d="M{l} {t} L{l} {b} L{r} {b}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let fx = f.x0 + (f.x1 - f.x0) * k as f64 / 4.0;
        let fy = f.y0 + (f.y1 - f.y0) * k as f64 / 4.0;
        let (x, y) = (f.px(fx), f.py(fy));
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.1}" y1="{b}" x2="{x:.1}" y2="{:.1}" stroke="black"/>"#,
            b + 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            b + 16.0,
            tick(fx)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{l}" y2="{y:.1}" stroke="black"/>"#,
            l - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            l - 6.0,
            y + 4.0,
            tick(fy)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (l + r) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        (t + b) / 2.0,
        (t + b) / 2.0,
        escape(y_label)
    );
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn legend(svg: &mut String, i: usize, label: &str) {
    let (x, y) = (WIDTH - RIGHT + 12.0, TOP + 10.0 + 16.0 * i as f64);
    let c = PALETTE[i % PALETTE.len()];
    let _ = writeln!(
        svg,
        r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{c}" stroke-width="2"/>"#,
        x + 18.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}">{}</text>"#,
        x + 22.0,
        y + 4.0,
        escape(label)
    );
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let all = series.iter().flat_map(|s| s.points.iter());
    let f = Frame::fit(all.clone().map(|p| p.0), all.map(|p| p.1));
    let mut svg = String::new();
    open(&mut svg, title);
    axes(&mut svg, &f, x_label, y_label);
    for (i, s) in series.iter().enumerate() {
        let c = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        for &(x, y) in s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
            let _ = write!(
                d,
                "{}{:.2} {:.2} ",
                if d.is_empty() { "M" } else { "L" },
                f.px(x),
                f.py(y)
            );
        }
        let _ = writeln!(
            svg,
            r#"<path d="{}" fill="none" stroke="{c}" stroke-width="1.5"/>"#,
            d.trim_end()
        );
        legend(&mut svg, i, &s.label);
    }
    svg.push_str("</svg>\n");
    svg
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxStats {
    pub x: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Box-and-whisker groups side by side at each x.
pub fn box_chart(title: &str, x_label: &str, y_label: &str, groups: &[(String, Vec<BoxStats>)]) -> String {
    let boxes = groups.iter().flat_map(|g| g.1.iter());
    let f = Frame::fit(boxes.clone().map(|b| b.x), boxes.flat_map(|b| [b.min, b.max]));
    let mut svg = String::new();
    open(&mut svg, title);
    axes(&mut svg, &f, x_label, y_label);
    let xs: Vec<f64> = groups.iter().flat_map(|g| g.1.iter().map(|b| b.x)).collect();
    let pitch = xs
        .windows(2)
        .map(|w| (f.px(w[1]) - f.px(w[0])).abs())
        .filter(|d| *d > 0.0)
        .fold(40.0, f64::min);
    let w = pitch * 0.8 / groups.len().max(1) as f64;
    for (i, (label, bs)) in groups.iter().enumerate() {
        let c = PALETTE[i % PALETTE.len()];
        let shift = (i as f64 - (groups.len() as f64 - 1.0) / 2.0) * w;
        for b in bs {
            let cx = f.px(b.x) + shift;
            let (lo, hi) = (cx - w * 0.4, cx + w * 0.4);
            let _ = writeln!(
                svg,
                r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="{c}"/>"#,
                f.py(b.min),
                f.py(b.max)
            );
            let _ = writeln!(
                svg,
                r#"<rect x="{lo:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="white" stroke="{c}"/>"#,
                f.py(b.q3),
                hi - lo,
                (f.py(b.q1) - f.py(b.q3)).max(0.5)
            );
            let _ = writeln!(
                svg,
                r#"<line x1="{lo:.2}" y1="{y:.2}" x2="{hi:.2}" y2="{y:.2}" stroke="{c}" stroke-width="2"/>"#,
                y = f.py(b.median)
            );
        }
        legend(&mut svg, i, label);
    }
    svg.push_str("</svg>\n");
    svg
}
