use anyhow::{bail, Result};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axes {
    LogLog,
    SemiLogX,
}

/// Hand-written scatter plot with an optional fitted line and slope
/// annotation; byte-deterministic for fixed input.
pub fn emit_plot(
    series: &[(f64, f64)],
    fit: Option<(f64, f64, &str)>,
    axes: Axes,
    title: &str,
    path: &Path,
) -> Result<()> {
    if series.len() < 2 {
        bail!("plot needs at least 2 points, got {}", series.len());
    }
    let tx = |x: f64| -> f64 {
        match axes {
            Axes::LogLog | Axes::SemiLogX => x.log10(),
        }
    };
    let ty = |y: f64| -> f64 {
        match axes {
            Axes::LogLog => y.log10(),
            Axes::SemiLogX => y,
        }
    };
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(x, y)| *x > 0.0 && (axes == Axes::SemiLogX || *y > 0.0))
        .map(|(x, y)| (tx(*x), ty(*y)))
        .collect();
    if pts.len() < 2 {
        bail!("plot needs at least 2 positive points");
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (x, y) in &pts {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    let pad_x = (x1 - x0).max(1e-12) * 0.08;
    let pad_y = (y1 - y0).max(1e-12) * 0.08;
    x0 -= pad_x;
    x1 += pad_x;
    y0 -= pad_y;
    y1 += pad_y;
    let (w, h) = (640.0, 480.0);
    let (ml, mr, mt, mb) = (60.0, 20.0, 40.0, 40.0);
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * (w - ml - mr);
    let sy = |y: f64| h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(out, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">{}</text>",
        ml, title
    );
    // axes frame
    let _ = writeln!(
        out,
        "<rect x=\"{ml}\" y=\"{mt}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"black\"/>",
        w - ml - mr,
        h - mt - mb
    );
    // fitted line across the x-range
    if let Some((slope, intercept, label)) = fit {
        let yl = slope * x0 + intercept;
        let yr = slope * x1 + intercept;
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#cc3333\" stroke-width=\"1.5\"/>",
            sx(x0),
            sy(yl),
            sx(x1),
            sy(yr)
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" fill=\"#cc3333\">{}</text>",
            ml + 8.0,
            mt + 18.0,
            label
        );
    }
    for (x, y) in &pts {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#2255aa\"/>",
            sx(*x),
            sy(*y)
        );
    }
    // corner tick labels
    let _ = writeln!(
        out,
        "<text x=\"{ml}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"10\">{:.3}</text>",
        h - mb + 14.0,
        x0
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"10\">{:.3}</text>",
        w - mr - 40.0,
        h - mb + 14.0,
        x1
    );
    let _ = writeln!(out, "</svg>");
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, out.as_bytes())?;
    Ok(())
}
