//! Deterministic CSV and SVG writers.
//!
//! CSV files start with a comment line carrying the config hash and tool
//! version, followed by a header row. Numbers are printed with 12
//! significant digits in scientific notation, so reruns with the same
//! config are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// FNV-1a 64-bit hash of the canonical config text, as fixed-width hex.
pub fn config_hash(canonical: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in canonical.bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// 12 significant digits; non-finite values print as `nan`/`inf`/`-inf`.
pub fn fmt_value(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

/// A CSV cell: either a formatted number or verbatim text.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

pub fn write_csv(
    path: &Path,
    hash: &str,
    header: &[&str],
    rows: &[Vec<Cell>],
) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "# config-hash={hash} version={TOOL_VERSION}").expect("string write");
    writeln!(out, "{}", header.join(",")).expect("string write");
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let line: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Num(x) => fmt_value(*x),
                Cell::Text(s) => s.clone(),
            })
            .collect();
        writeln!(out, "{}", line.join(",")).expect("string write");
    }
    fs::write(path, out)?;
    Ok(())
}

/// One named polyline of an SVG chart.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const SVG_COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Minimal self-contained line chart: frame, tick labels, legend, one
/// polyline per series. Non-finite points break the line.
pub fn write_svg(path: &Path, title: &str, series: &[Series]) -> Result<()> {
    let (width, height) = (640.0, 420.0);
    let (ml, mr, mt, mb) = (64.0, 16.0, 36.0, 44.0);
    let finite: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 1.0f64, 0.0f64, 1.0f64);
    if !finite.is_empty() {
        x0 = finite.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        x1 = finite.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        y0 = finite.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        y1 = finite.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (width - ml - mr);
    let py = |y: f64| height - mb - (y - y0) / (y1 - y0) * (height - mt - mb);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .expect("string write");
    writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#).expect("string write");
    writeln!(
        svg,
        r#"<text x="{}" y="22" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        width / 2.0,
        xml_escape(title)
    )
    .expect("string write");
    writeln!(
        svg,
        r##"<rect x="{ml}" y="{mt}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
        width - ml - mr,
        height - mt - mb
    )
    .expect("string write");
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="middle">{:.3}</text>"#,
            px(fx),
            height - mb + 16.0,
            fx
        )
        .expect("string write");
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">{:.3}</text>"#,
            ml - 6.0,
            py(fy) + 3.0,
            fy
        )
        .expect("string write");
    }
    for (idx, s) in series.iter().enumerate() {
        let color = SVG_COLORS[idx % SVG_COLORS.len()];
        // Split at non-finite points so gaps are visible, not bridged.
        let mut segment = String::new();
        let flush = |seg: &mut String, svg: &mut String| {
            if !seg.is_empty() {
                writeln!(
                    svg,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    seg.trim_end()
                )
                .expect("string write");
                seg.clear();
            }
        };
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                write!(segment, "{:.2},{:.2} ", px(x), py(y)).expect("string write");
            } else {
                flush(&mut segment, &mut svg);
            }
        }
        flush(&mut segment, &mut svg);
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" fill="{color}">{}</text>"#,
            ml + 8.0,
            mt + 14.0 + 14.0 * idx as f64,
            xml_escape(&s.label)
        )
        .expect("string write");
    }
    writeln!(svg, "</svg>").expect("string write");
    fs::write(path, svg)?;
    Ok(())
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        let a = config_hash("q = 0.05");
        assert_eq!(a, config_hash("q = 0.05"));
        assert_ne!(a, config_hash("q = 0.06"));
        assert_eq!(config_hash(""), "cbf29ce484222325");
    }

    #[test]
    fn formats_12_significant_digits() {
        assert_eq!(fmt_value(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(fmt_value(0.0), "0.00000000000e0");
        assert_eq!(fmt_value(f64::INFINITY), "inf");
        assert_eq!(fmt_value(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let dir = std::env::temp_dir().join("ruindiv_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        write_csv(
            &path,
            "deadbeefdeadbeef",
            &["x", "status"],
            &[vec![Cell::Num(0.5), Cell::Text("binding".into())]],
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        let comment = lines.next().unwrap();
        assert!(comment.starts_with("# config-hash=deadbeefdeadbeef version="));
        assert_eq!(lines.next().unwrap(), "x,status");
        assert_eq!(lines.next().unwrap(), "5.00000000000e-1,binding");
    }

    #[test]
    fn svg_is_self_contained() {
        let dir = std::env::temp_dir().join("ruindiv_svg_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.svg");
        write_svg(
            &path,
            "W on [0, 2]",
            &[Series {
                label: "W".into(),
                points: vec![(0.0, 1.0), (1.0, f64::INFINITY), (2.0, 2.0)],
            }],
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.contains("polyline"));
        assert!(!text.contains("http://") || text.contains("xmlns"));
        assert!(text.trim_end().ends_with("</svg>"));
    }
}
