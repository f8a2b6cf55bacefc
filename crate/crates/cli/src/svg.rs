//! Deterministic SVG figures: fixed viewport, fixed-precision coordinates,
//! no timestamps, so outputs are byte-stable across runs and diffable in CI.

use quasiper::params::SweepRow;
use quasiper::persistence::PersistenceDiagram;
use quasiper::spectral::{Spectrum, SpectrumPeak};
use std::fmt::Write;

const W: f64 = 960.0;
const H: f64 = 540.0;
const MARGIN: f64 = 50.0;

const SERIES_COLORS: [&str; 6] = ["#1f6fb4", "#e07a29", "#2f9e44", "#c2255c", "#6741d9", "#868e96"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let pad = |a: f64, b: f64| if (b - a).abs() < 1e-12 { (a - 0.5, b + 0.5) } else { (a, b) };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        Frame { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        H - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * MARGIN)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="13">"#
    );
    let _ = write!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = write!(
        out,
        r#"<text x="{:.3}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        W / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let _ = write!(
        out,
        r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#222" stroke-width="1"/>"##,
        MARGIN,
        MARGIN,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    );
    for i in 0..=4 {
        let tx = f.x0 + (f.x1 - f.x0) * i as f64 / 4.0;
        let ty = f.y0 + (f.y1 - f.y0) * i as f64 / 4.0;
        let _ = write!(
            out,
            r##"<text x="{:.3}" y="{:.3}" text-anchor="middle" fill="#444">{}</text>"##,
            f.px(tx),
            H - MARGIN + 18.0,
            fmt_tick(tx)
        );
        let _ = write!(
            out,
            r##"<text x="{:.3}" y="{:.3}" text-anchor="end" fill="#444">{}</text>"##,
            MARGIN - 6.0,
            f.py(ty) + 4.0,
            fmt_tick(ty)
        );
    }
    let _ = write!(
        out,
        r##"<text x="{:.3}" y="{:.3}" text-anchor="middle" fill="#222">{}</text>"##,
        W / 2.0,
        H - 12.0,
        escape(x_label)
    );
    let _ = write!(
        out,
        r##"<text x="16" y="{:.3}" text-anchor="middle" transform="rotate(-90 16 {:.3})" fill="#222">{}</text>"##,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if a >= 1000.0 || a < 0.01 {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn polyline(out: &mut String, f: &Frame, pts: impl Iterator<Item = (f64, f64)>, color: &str) {
    let mut path = String::new();
    for (x, y) in pts {
        let _ = write!(path, "{:.3},{:.3} ", f.px(x), f.py(y));
    }
    let _ = write!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.2"/>"#,
        path.trim_end()
    );
}

/// Signal plot: real part (and imaginary part for complex signals) vs time.
pub fn signal_svg(signal: &quasiper::model::Signal) -> String {
    let n = signal.len();
    let ts: Vec<f64> = (0..n).map(|i| signal.time(i)).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in signal.samples() {
        lo = lo.min(s.re).min(if signal.is_real() { s.re } else { s.im });
        hi = hi.max(s.re).max(if signal.is_real() { s.re } else { s.im });
    }
    let f = Frame::new(ts[0], ts[n - 1], lo, hi);
    let mut out = String::new();
    header(&mut out, "signal");
    axes(&mut out, &f, "t", "value");
    polyline(
        &mut out,
        &f,
        ts.iter().copied().zip(signal.samples().iter().map(|s| s.re)),
        SERIES_COLORS[0],
    );
    if !signal.is_real() {
        polyline(
            &mut out,
            &f,
            ts.iter().copied().zip(signal.samples().iter().map(|s| s.im)),
            SERIES_COLORS[1],
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Spectrum plot with peak markers.
pub fn spectrum_svg(spectrum: &Spectrum, peaks: &[SpectrumPeak]) -> String {
    let f = Frame::new(
        spectrum.freqs().first().copied().unwrap_or(0.0),
        spectrum.freqs().last().copied().unwrap_or(1.0),
        0.0,
        spectrum.max_modulus(),
    );
    let mut out = String::new();
    header(&mut out, "spectrum");
    axes(&mut out, &f, "angular frequency", "modulus");
    polyline(&mut out, &f, spectrum.iter(), SERIES_COLORS[0]);
    for p in peaks {
        let _ = write!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            f.px(p.frequency),
            f.py(p.amplitude),
            SERIES_COLORS[1]
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Persistence diagram scatter with the diagonal and optional dashed
/// persistence-bound guide lines (parallel to the diagonal at offset b).
pub fn diagram_svg(diagrams: &[PersistenceDiagram], bounds: &[f64]) -> String {
    let mut max_v = 0.0f64;
    for d in diagrams {
        for &(b, dd) in d.pairs() {
            max_v = max_v.max(b).max(if dd.is_finite() { dd } else { 0.0 });
        }
    }
    if max_v == 0.0 {
        max_v = 1.0;
    }
    let lim = max_v * 1.1;
    let f = Frame::new(0.0, lim, 0.0, lim);
    let mut out = String::new();
    header(&mut out, "persistence diagram");
    axes(&mut out, &f, "birth", "death");
    // diagonal
    let _ = write!(
        out,
        r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#999" stroke-width="1"/>"##,
        f.px(0.0),
        f.py(0.0),
        f.px(lim),
        f.py(lim)
    );
    // dashed guide lines: death = birth + bound
    for &b in bounds {
        if b <= 0.0 || b > lim {
            continue;
        }
        let _ = write!(
            out,
            r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#333" stroke-width="1" stroke-dasharray="6 4" class="bound-line"/>"##,
            f.px(0.0),
            f.py(b),
            f.px(lim - b),
            f.py(lim)
        );
    }
    for dgm in diagrams {
        let color = SERIES_COLORS[dgm.dimension() % SERIES_COLORS.len()];
        for &(b, dd) in dgm.pairs() {
            if dd.is_finite() {
                let _ = write!(
                    out,
                    r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="{color}" fill-opacity="0.75"/>"#,
                    f.px(b),
                    f.py(dd)
                );
            } else {
                // infinite death: triangle marker pinned to the top edge
                let _ = write!(
                    out,
                    r#"<path d="M {:.3} {:.3} l 4 7 l -8 0 z" fill="{color}"/>"#,
                    f.px(b),
                    MARGIN + 2.0
                );
            }
        }
        let _ = write!(
            out,
            r#"<text x="{:.3}" y="{:.3}" fill="{color}">H{}</text>"#,
            W - MARGIN + 6.0,
            MARGIN + 18.0 * (dgm.dimension() + 1) as f64,
            dgm.dimension()
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Persistence-vs-delay sweep: one polyline per (dimension, rank).
pub fn sweep_svg(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let (mut t0, mut t1, mut pmax) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for r in rows {
        t0 = t0.min(r.tau);
        t1 = t1.max(r.tau);
        pmax = pmax.max(r.persistence);
    }
    if rows.is_empty() {
        t0 = 0.0;
        t1 = 1.0;
    }
    let f = Frame::new(t0, t1, 0.0, pmax.max(1e-9));
    header(&mut out, "persistence vs delay");
    axes(&mut out, &f, "tau", "persistence");
    let mut keys: Vec<(usize, usize)> = rows.iter().map(|r| (r.dim, r.rank)).collect();
    keys.sort_unstable();
    keys.dedup();
    for (i, &(dim, rank)) in keys.iter().enumerate() {
        let mut pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.dim == dim && r.rank == rank)
            .map(|r| (r.tau, r.persistence))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let color = SERIES_COLORS[i % SERIES_COLORS.len()];
        polyline(&mut out, &f, pts.into_iter(), color);
        let _ = write!(
            out,
            r#"<text x="{:.3}" y="{:.3}" fill="{color}">H{dim} #{rank}</text>"#,
            W - MARGIN + 4.0,
            MARGIN + 16.0 * (i + 1) as f64
        );
    }
    out.push_str("</svg>\n");
    out
}

/// 2D projection scatter of a point set (first two coordinates).
pub fn orbit_svg(points: &[Vec<f64>]) -> String {
    let mut out = String::new();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        let y = p.get(1).copied().unwrap_or(0.0);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if points.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let f = Frame::new(x0, x1, y0, y1);
    header(&mut out, "orbit projection");
    axes(&mut out, &f, "coordinate 1", "coordinate 2");
    for p in points {
        let _ = write!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="1.5" fill="{}" fill-opacity="0.6"/>"#,
            f.px(p[0]),
            f.py(p.get(1).copied().unwrap_or(0.0)),
            SERIES_COLORS[0]
        );
    }
    out.push_str("</svg>\n");
    out
}
