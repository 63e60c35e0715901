use crate::{CliError, Result};
use std::fmt::Write;
use std::path::Path;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;

fn counts(values: &[f64], lo: f64, width: f64, bins: usize) -> Vec<f64> {
    let mut c = vec![0.0; bins];
    for v in values {
        let i = (((v - lo) / width) as usize).min(bins - 1);
        c[i] += 1.0;
    }
    // Densities, so samples of different sizes overlay fairly.
    c.iter().map(|k| k / (values.len() as f64 * width)).collect()
}

/// Histogram overlay of a test sample (filled) and a baseline (outline) as
/// an SVG document. Output depends only on the inputs.
pub fn render_svg(test: &[f64], baseline: &[f64], bins: usize, title: &str) -> Result<String> {
    if test.is_empty() || baseline.is_empty() {
        return Err(CliError::Config("cannot draw a histogram of an empty sample".into()));
    }
    if bins == 0 {
        return Err(CliError::Config("histogram needs at least one bin".into()));
    }
    if test.iter().chain(baseline).any(|v| !v.is_finite()) {
        return Err(CliError::Config("histogram input contains non-finite values".into()));
    }
    let lo = test.iter().chain(baseline).copied().fold(f64::INFINITY, f64::min);
    let hi = test.iter().chain(baseline).copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let (ct, cb) = (counts(test, lo, width, bins), counts(baseline, lo, width, bins));
    let top = ct.iter().chain(&cb).copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    let bar = pw / bins as f64;
    let y = |d: f64| HEIGHT - MARGIN - ph * d / top;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#);
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="14">{}</text>"#, escape(title));
    for (i, d) in ct.iter().enumerate() {
        let _ = writeln!(
            s,
            r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#4c78a8" fill-opacity="0.6"/>"##,
            MARGIN + bar * i as f64,
            y(*d),
            bar,
            HEIGHT - MARGIN - y(*d)
        );
    }
    let mut path = format!("M{:.3},{:.3}", MARGIN, HEIGHT - MARGIN);
    for (i, d) in cb.iter().enumerate() {
        let x0 = MARGIN + bar * i as f64;
        let _ = write!(path, " L{:.3},{:.3} L{:.3},{:.3}", x0, y(*d), x0 + bar, y(*d));
    }
    let _ = write!(path, " L{:.3},{:.3}", WIDTH - MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(s, r##"<path d="{path}" fill="none" stroke="#e45756" stroke-width="1.5"/>"##);
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#,
        HEIGHT - MARGIN,
        WIDTH - MARGIN
    );
    for (x, v) in [(MARGIN, lo), (WIDTH - MARGIN, lo + width * bins as f64)] {
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{:.3}" font-family="sans-serif" font-size="11" text-anchor="middle">{v:.4}</text>"#,
            HEIGHT - MARGIN + 16.0
        );
    }
    let _ = writeln!(
        s,
        r##"<text x="{:.3}" y="24" font-family="sans-serif" font-size="11" fill="#4c78a8">test (n={})</text>"##,
        WIDTH - MARGIN - 200.0,
        test.len()
    );
    let _ = writeln!(
        s,
        r##"<text x="{:.3}" y="24" font-family="sans-serif" font-size="11" fill="#e45756">baseline (n={})</text>"##,
        WIDTH - MARGIN - 100.0,
        baseline.len()
    );
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes [`render_svg`] to `path`. Nothing is written on error.
pub fn emit_svg(test: &[f64], baseline: &[f64], bins: usize, title: &str, path: &Path) -> Result<()> {
    let doc = render_svg(test, baseline, bins, title)?;
    std::fs::write(path, doc).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
