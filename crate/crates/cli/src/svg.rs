//! Static, byte-stable SVG charts.

use std::fmt::Write;

use valuscope::complexity::ProfileEntry;
use valuscope::distribution::{Pmf, PmfStats};
use valuscope::horizons::HorizonSummary;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 32.0;
const BOTTOM: f64 = 48.0;

const STYLE: &str = "text{font-family:sans-serif;font-size:11px}\
.axis{fill:none;stroke:#333}.bar{fill:#7aa6c2;stroke:#35627f}\
.mode{stroke:#c0392b;stroke-width:2}.band1{stroke:#27ae60;stroke-dasharray:6 3}\
.band2{stroke:#8e44ad;stroke-dasharray:2 3}.zero{fill:none;stroke:#999;stroke-dasharray:4 4}\
.min{fill:none;stroke:#c0392b;stroke-width:2}.max{fill:none;stroke:#27ae60;stroke-width:2}\
.modal{fill:none;stroke:#2c3e50;stroke-width:2}.curve{fill:none;stroke:#35627f;stroke-width:2}";

/// A chart and the data behind it.
#[derive(Debug, Clone, Copy)]
pub enum Plot<'a> {
    /// Bars per bin with the mode and the ±1σ, ±2σ band edges marked.
    PmfBars { title: &'a str, pmf: &'a Pmf, stats: &'a PmfStats },
    /// Worst, modal and best return per horizon.
    HorizonLines(&'a [HorizonSummary]),
    /// NMI against lag, starting at lag 1.
    NmiCurve(&'a [f64]),
    /// Entropy, H(2) and largest Lyapunov exponent per horizon.
    ComplexityTriptych(&'a [ProfileEntry]),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsupportedKind(pub &'static str);

impl std::fmt::Display for UnsupportedKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cannot plot {}", self.0)
    }
}

impl std::error::Error for UnsupportedKind {}

pub fn emit_svg(plot: &Plot) -> Result<String, UnsupportedKind> {
    match *plot {
        Plot::PmfBars { title, pmf, stats } => Ok(pmf_bars(title, pmf, stats)),
        Plot::HorizonLines([]) => Err(UnsupportedKind("an empty horizon ladder")),
        Plot::HorizonLines(rows) => Ok(horizon_lines(rows)),
        Plot::NmiCurve([]) => Err(UnsupportedKind("an empty lag curve")),
        Plot::NmiCurve(nmi) => Ok(nmi_curve(nmi)),
        Plot::ComplexityTriptych([]) => Err(UnsupportedKind("an empty complexity profile")),
        Plot::ComplexityTriptych(rows) => Ok(triptych(rows)),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn tick(x: f64) -> String {
    crate::report::fmt_num(x)
}

/// Maps a data interval onto a pixel interval.
#[derive(Clone, Copy)]
struct Scale {
    d0: f64,
    d1: f64,
    p0: f64,
    p1: f64,
}

impl Scale {
    fn new(mut d0: f64, mut d1: f64, p0: f64, p1: f64) -> Self {
        if d1.partial_cmp(&d0) != Some(std::cmp::Ordering::Greater) {
            d0 -= 0.5;
            d1 += 0.5;
        }
        Self { d0, d1, p0, p1 }
    }

    fn at(&self, v: f64) -> f64 {
        self.p0 + (v - self.d0) / (self.d1 - self.d0) * (self.p1 - self.p0)
    }
}

struct Frame {
    x: Scale,
    y: Scale,
    left: f64,
    right: f64,
}

struct Doc {
    out: String,
}

impl Doc {
    fn new(width: f64) -> Self {
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{HEIGHT}" viewBox="0 0 {width} {HEIGHT}">"#
        )
        .unwrap();
        writeln!(out, "<style>{STYLE}</style>").unwrap();
        Self { out }
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        writeln!(self.out, r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}">{}</text>"#, escape(s)).unwrap();
    }

    fn axes(&mut self, f: &Frame, title: &str, x_label: &str) {
        let (top, bottom) = (TOP, HEIGHT - BOTTOM);
        writeln!(
            self.out,
            r#"<path class="axis" d="M{:.2},{top:.2} V{bottom:.2} H{:.2}"/>"#,
            f.left, f.right
        )
        .unwrap();
        self.text((f.left + f.right) / 2.0, 18.0, "middle", title);
        self.text((f.left + f.right) / 2.0, HEIGHT - 10.0, "middle", x_label);
        self.text(f.left - 4.0, bottom, "end", &tick(f.y.d0));
        self.text(f.left - 4.0, top + 8.0, "end", &tick(f.y.d1));
    }

    fn polyline(&mut self, class: &str, pts: impl Iterator<Item = (f64, f64)>) {
        let pts: Vec<String> = pts.map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        writeln!(self.out, r#"<polyline class="{class}" points="{}"/>"#, pts.join(" ")).unwrap();
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn frame(x0: f64, x1: f64, y0: f64, y1: f64, left: f64, right: f64) -> Frame {
    Frame {
        x: Scale::new(x0, x1, left, right),
        y: Scale::new(y0, y1, HEIGHT - BOTTOM, TOP),
        left,
        right,
    }
}

fn pmf_bars(title: &str, pmf: &Pmf, stats: &PmfStats) -> String {
    let edges = pmf.edges();
    let x0 = edges[0].min(stats.band2.lo);
    let x1 = edges[edges.len() - 1].max(stats.band2.hi);
    let top = pmf.probs().iter().copied().fold(0.0, f64::max);
    let f = frame(x0, x1, 0.0, if top > 0.0 { top } else { 1.0 }, LEFT, WIDTH - RIGHT);
    let mut doc = Doc::new(WIDTH);
    doc.axes(&f, title, "value");
    doc.text(f.left, HEIGHT - BOTTOM + 14.0, "start", &tick(x0));
    doc.text(f.right, HEIGHT - BOTTOM + 14.0, "end", &tick(x1));
    for (i, p) in pmf.probs().iter().enumerate() {
        let (a, b) = (f.x.at(edges[i]), f.x.at(edges[i + 1]));
        let (y, base) = (f.y.at(*p), f.y.at(0.0));
        writeln!(
            doc.out,
            r#"<rect class="bar" x="{a:.2}" y="{y:.2}" width="{:.2}" height="{:.2}"/>"#,
            b - a,
            base - y
        )
        .unwrap();
    }
    let markers = [
        ("mode", stats.mode),
        ("band1", stats.band1.lo),
        ("band1", stats.band1.hi),
        ("band2", stats.band2.lo),
        ("band2", stats.band2.hi),
    ];
    for (class, v) in markers {
        let x = f.x.at(v);
        writeln!(
            doc.out,
            r#"<line class="{class}" x1="{x:.2}" y1="{TOP:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
            HEIGHT - BOTTOM
        )
        .unwrap();
    }
    doc.finish()
}

fn category_labels(doc: &mut Doc, f: &Frame, labels: &[&str]) {
    for (i, label) in labels.iter().enumerate() {
        doc.text(f.x.at(i as f64), HEIGHT - BOTTOM + 14.0, "middle", label);
    }
}

fn horizon_lines(rows: &[HorizonSummary]) -> String {
    let lo = rows.iter().map(|r| r.min).fold(0.0, f64::min);
    let hi = rows.iter().map(|r| r.max).fold(0.0, f64::max);
    let f = frame(-0.5, rows.len() as f64 - 0.5, lo, hi, LEFT, WIDTH - RIGHT);
    let mut doc = Doc::new(WIDTH);
    doc.axes(&f, "Minimum, mode and maximum return (%)", "holding period");
    writeln!(
        doc.out,
        r#"<path class="zero" d="M{:.2},{:.2} H{:.2}"/>"#,
        f.left,
        f.y.at(0.0),
        f.right
    )
    .unwrap();
    for (class, get) in [
        ("min", (|r: &HorizonSummary| r.min) as fn(&HorizonSummary) -> f64),
        ("modal", |r| r.mode),
        ("max", |r| r.max),
    ] {
        doc.polyline(class, rows.iter().enumerate().map(|(i, r)| (f.x.at(i as f64), f.y.at(get(r)))));
    }
    let labels: Vec<&str> = rows.iter().map(|r| r.spec.label.as_str()).collect();
    category_labels(&mut doc, &f, &labels);
    doc.finish()
}

fn nmi_curve(nmi: &[f64]) -> String {
    let hi = nmi.iter().copied().fold(0.0, f64::max);
    let n = nmi.len() as f64;
    let f = frame(1.0, n.max(2.0), 0.0, if hi > 0.0 { hi } else { 1.0 }, LEFT, WIDTH - RIGHT);
    let mut doc = Doc::new(WIDTH);
    doc.axes(&f, "Normalized mutual information", "lag (days)");
    doc.text(f.left, HEIGHT - BOTTOM + 14.0, "start", "1");
    doc.text(f.right, HEIGHT - BOTTOM + 14.0, "end", &nmi.len().to_string());
    doc.polyline("curve", nmi.iter().enumerate().map(|(i, v)| (f.x.at(i as f64 + 1.0), f.y.at(*v))));
    doc.finish()
}

type Metric = (&'static str, fn(&ProfileEntry) -> f64);

fn triptych(rows: &[ProfileEntry]) -> String {
    let panel = WIDTH * 0.75;
    let mut doc = Doc::new(3.0 * panel);
    let labels: Vec<&str> = rows.iter().map(|r| r.spec.label.as_str()).collect();
    let metrics: [Metric; 3] = [
        ("Shannon normalized entropy", |r| r.sne),
        ("Hurst exponent H(2)", |r| r.hurst2),
        ("Largest Lyapunov exponent", |r| r.largest_lyapunov),
    ];
    for (k, (title, get)) in metrics.iter().enumerate() {
        let values: Vec<f64> = rows.iter().map(get).collect();
        let lo = values.iter().copied().fold(0.0, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(1.0);
        let left = k as f64 * panel + LEFT;
        let f = frame(-0.5, rows.len() as f64 - 0.5, lo, hi, left, (k + 1) as f64 * panel - RIGHT);
        doc.axes(&f, title, "holding period");
        doc.polyline("curve", values.iter().enumerate().map(|(i, v)| (f.x.at(i as f64), f.y.at(*v))));
        category_labels(&mut doc, &f, &labels);
    }
    doc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use valuscope::distribution::{build_pmf, pmf_stats};

    #[test]
    fn two_bin_pmf_structure() {
        let samples: Vec<f64> = (1..=8).map(f64::from).collect();
        let pmf = build_pmf(&samples).unwrap();
        let stats = pmf_stats(&pmf, &samples, &[]);
        let svg = emit_svg(&Plot::PmfBars { title: "t", pmf: &pmf, stats: &stats }).unwrap();
        assert_eq!(svg.matches("<rect").count(), 2);
        assert_eq!(svg.matches("<line").count(), 5);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn empty_inputs_are_rejected() {
        assert!(emit_svg(&Plot::NmiCurve(&[])).is_err());
        assert!(emit_svg(&Plot::HorizonLines(&[])).is_err());
        assert!(emit_svg(&Plot::ComplexityTriptych(&[])).is_err());
    }

    #[test]
    fn output_is_stable() {
        let a = emit_svg(&Plot::NmiCurve(&[0.3, 0.2, 0.25])).unwrap();
        assert_eq!(a, emit_svg(&Plot::NmiCurve(&[0.3, 0.2, 0.25])).unwrap());
        assert_eq!(a.matches("<polyline").count(), 1);
    }

    #[test]
    fn labels_are_escaped() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}
