//! Minimal SVG 1.1 lag plots: one stem per lag, quantile envelopes drawn as
//! step lines. Plots are built from the same vectors written to TSV.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 30.0;
const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub lags: Vec<i64>,
    pub values: Vec<f64>,
    pub bands: Vec<(String, Vec<f64>)>,
}

impl Panel {
    pub fn new(title: &str, lags: &[i64], values: &[f64], bands: Vec<(String, Vec<f64>)>) -> Self {
        Panel { title: title.to_string(), lags: lags.to_vec(), values: values.to_vec(), bands }
    }
}

pub fn render(panels: &[Panel]) -> String {
    let height = PANEL_HEIGHT * panels.len().max(1) as f64;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (i, panel) in panels.iter().enumerate() {
        render_panel(&mut out, panel, i as f64 * PANEL_HEIGHT);
    }
    out.push_str("</svg>\n");
    out
}

fn render_panel(out: &mut String, panel: &Panel, top: f64) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = top + MARGIN_TOP;
    let y1 = top + PANEL_HEIGHT - MARGIN_BOTTOM;

    let all = panel.values.iter().chain(panel.bands.iter().flat_map(|(_, b)| b.iter()));
    let (mut lo, mut hi) =
        all.filter(|v| v.is_finite()).fold((0.0f64, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-12 {
        hi = lo + 1.0;
    }
    let pad = 0.05 * (hi - lo);
    lo -= if lo < 0.0 { pad } else { 0.0 };
    hi += pad;

    let (lag_min, lag_max) = match (panel.lags.iter().min(), panel.lags.iter().max()) {
        (Some(&a), Some(&b)) => (a as f64 - 0.5, b as f64 + 0.5),
        _ => (0.0, 1.0),
    };
    let sx = |lag: f64| x0 + (lag - lag_min) / (lag_max - lag_min) * (x1 - x0);
    let sy = |v: f64| y1 - (v - lo) / (hi - lo) * (y1 - y0);

    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13">{}</text>"#,
        x0,
        top + 18.0,
        escape(&panel.title)
    )
    .unwrap();
    writeln!(
        out,
        r##"<rect x="{x0:.1}" y="{y0:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#444"/>"##,
        x1 - x0,
        y1 - y0
    )
    .unwrap();
    for v in [lo, 0.0, hi] {
        if v >= lo && v <= hi {
            writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
                x0 - 4.0,
                sy(v) + 3.0,
                tick_label(v)
            )
            .unwrap();
        }
    }
    if lo < 0.0 {
        writeln!(
            out,
            r##"<line x1="{x0:.1}" y1="{0:.1}" x2="{x1:.1}" y2="{0:.1}" stroke="#999" stroke-width="0.5"/>"##,
            sy(0.0)
        )
        .unwrap();
    }
    if let (Some(first), Some(last)) = (panel.lags.first(), panel.lags.last()) {
        for lag in [*first, *last] {
            writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="middle">{lag}</text>"#,
                sx(lag as f64),
                y1 + 14.0
            )
            .unwrap();
        }
    }

    let base = sy(lo.max(0.0).min(hi));
    for (&lag, &v) in panel.lags.iter().zip(&panel.values) {
        let x = sx(lag as f64);
        writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{base:.2}" x2="{x:.2}" y2="{:.2}" stroke="#222" stroke-width="1.5"/>"##,
            sy(v)
        )
        .unwrap();
    }

    for (k, (label, band)) in panel.bands.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut d = String::new();
        for (i, (&lag, &v)) in panel.lags.iter().zip(band).enumerate() {
            let (xa, xb, y) = (sx(lag as f64 - 0.5), sx(lag as f64 + 0.5), sy(v));
            let cmd = if i == 0 { 'M' } else { 'L' };
            write!(d, "{cmd}{xa:.2},{y:.2} L{xb:.2},{y:.2} ").unwrap();
        }
        writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1" stroke-dasharray="4,2"><title>{}</title></path>"#,
            d.trim_end(),
            escape(label)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" fill="{color}" text-anchor="end">{}</text>"#,
            x1 - 4.0,
            y0 + 12.0 + 12.0 * k as f64,
            escape(label)
        )
        .unwrap();
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 0.01 && v.abs() < 1e4 {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_is_balanced() {
        let p = Panel::new("a<b", &[1, 2, 3], &[0.1, -0.2, 0.3], vec![("q95".into(), vec![0.2, 0.2, 0.2])]);
        let s = render(&[p.clone(), p]);
        assert!(s.starts_with("<?xml"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<path").count(), 2);
        assert_eq!(s.matches("</path>").count(), 2);
        assert!(s.contains("a&lt;b"));
        assert!(!s.contains("NaN"));
    }

    #[test]
    fn empty_panel_renders() {
        let s = render(&[Panel::new("empty", &[], &[], vec![])]);
        assert!(s.contains("</svg>"));
    }
}
