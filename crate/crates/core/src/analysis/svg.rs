//! Minimal self-contained SVG charts.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: &[&str] = &[
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        let (y_min, y_max) = if y_max > y_min {
            (y_min, y_max)
        } else {
            (y_min - 0.5, y_max + 0.5)
        };
        let x_max = if x_max > x_min { x_max } else { x_min + 1.0 };
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn open(out: &mut String, title: &str, x_label: &str, y_label: &str, f: &Frame) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{cx}" y="24" text-anchor="middle" font-size="16">{title}</text>
<line x1="{MARGIN}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>
<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{bottom}" stroke="black"/>
<text x="{cx}" y="{xl}" text-anchor="middle">{x_label}</text>
<text x="16" y="{cy}" text-anchor="middle" transform="rotate(-90 16 {cy})">{y_label}</text>
<text x="{tick}" y="{bottom}" text-anchor="end">{ymin}</text>
<text x="{tick}" y="{top}" text-anchor="end">{ymax}</text>
"#,
        cx = WIDTH / 2.0,
        cy = HEIGHT / 2.0,
        bottom = HEIGHT - MARGIN,
        right = WIDTH - MARGIN,
        top = MARGIN + 4.0,
        xl = HEIGHT - 20.0,
        tick = MARGIN - 4.0,
        title = escape(title),
        x_label = escape(x_label),
        y_label = escape(y_label),
        ymin = fmt_tick(f.y_min),
        ymax = fmt_tick(f.y_max),
    );
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.3e}")
    } else {
        format!("{v:.4}")
    }
}

/// One polyline per series over a shared x axis (the step index).
pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<f64>)],
) -> String {
    let len = series.iter().map(|(_, s)| s.len()).max().unwrap_or(0);
    let finite = series
        .iter()
        .flat_map(|(_, s)| s.iter())
        .filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
    let frame = Frame::new(0.0, len.saturating_sub(1) as f64, lo, hi);
    let mut out = String::new();
    open(&mut out, title, x_label, y_label, &frame);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 16.0,
        len.saturating_sub(1)
    );
    for (k, (name, values)) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        // Thin long series to keep files small.
        let stride = (values.len() / 2000).max(1);
        let mut points = String::new();
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || (i % stride != 0 && i + 1 != values.len()) {
                continue;
            }
            let _ = write!(points, "{:.2},{:.2} ", frame.x(i as f64), frame.y(*v));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.2" points="{}"><title>{}</title></polyline>"#,
            points.trim_end(),
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

pub struct BoxSeries<'a> {
    pub label: &'a str,
    pub external: bool,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Box-and-whisker chart, one box per method. External methods are drawn
/// hatched-grey with a dashed outline.
pub fn box_chart(title: &str, y_label: &str, boxes: &[BoxSeries<'_>]) -> String {
    let lo = boxes.iter().map(|b| b.min).fold(f64::INFINITY, f64::min);
    let hi = boxes
        .iter()
        .map(|b| b.max)
        .fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
    let pad = ((hi - lo) * 0.05).max(1e-12);
    let frame = Frame::new(0.0, boxes.len().max(1) as f64, lo - pad, hi + pad);
    let mut out = String::new();
    open(&mut out, title, "method", y_label, &frame);
    let slot = (WIDTH - 2.0 * MARGIN) / boxes.len().max(1) as f64;
    for (k, b) in boxes.iter().enumerate() {
        let cx = MARGIN + slot * (k as f64 + 0.5);
        let half = (slot * 0.3).min(40.0);
        let (fill, dash) = if b.external {
            ("#dddddd", r#" stroke-dasharray="4 3""#)
        } else {
            (PALETTE[k % PALETTE.len()], "")
        };
        let (y_min, y_q1, y_med, y_q3, y_max) = (
            frame.y(b.min),
            frame.y(b.q1),
            frame.y(b.median),
            frame.y(b.q3),
            frame.y(b.max),
        );
        let _ = writeln!(
            out,
            r#"<g class="{cls}"><line x1="{cx:.2}" y1="{y_min:.2}" x2="{cx:.2}" y2="{y_q1:.2}" stroke="black"{dash}/>
<line x1="{cx:.2}" y1="{y_q3:.2}" x2="{cx:.2}" y2="{y_max:.2}" stroke="black"{dash}/>
<line x1="{l2:.2}" y1="{y_min:.2}" x2="{r2:.2}" y2="{y_min:.2}" stroke="black"/>
<line x1="{l2:.2}" y1="{y_max:.2}" x2="{r2:.2}" y2="{y_max:.2}" stroke="black"/>
<rect x="{l:.2}" y="{y_q3:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}" fill-opacity="0.6" stroke="black"{dash}/>
<line x1="{l:.2}" y1="{y_med:.2}" x2="{r:.2}" y2="{y_med:.2}" stroke="black" stroke-width="2"/>
<text x="{cx:.2}" y="{lbl:.2}" text-anchor="middle">{label}</text></g>"#,
            cls = if b.external { "external" } else { "solver" },
            l = cx - half,
            r = cx + half,
            l2 = cx - half / 2.0,
            r2 = cx + half / 2.0,
            w = 2.0 * half,
            h = (y_q1 - y_q3).max(0.5),
            lbl = HEIGHT - MARGIN + 16.0,
            label = escape(&if b.external {
                format!("{} (ext)", b.label)
            } else {
                b.label.to_string()
            }),
        );
    }
    out.push_str("</svg>\n");
    out
}
