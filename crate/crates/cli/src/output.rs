//! CSV and SVG writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

/// Column-oriented table written as CSV: comma separated, LF line endings,
/// every value in scientific notation with 17 significant digits.
pub struct Table {
    header: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn new() -> Self {
        Self {
            header: Vec::new(),
            columns: Vec::new(),
        }
    }

    pub fn column(mut self, name: impl Into<String>, values: Vec<f64>) -> Self {
        if let Some(first) = self.columns.first() {
            assert_eq!(first.len(), values.len(), "column length mismatch");
        }
        self.header.push(name.into());
        self.columns.push(values);
        self
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        let rows = self.columns.first().map_or(0, Vec::len);
        for r in 0..rows {
            for (c, col) in self.columns.iter().enumerate() {
                if c > 0 {
                    out.push(',');
                }
                write!(out, "{:.16e}", col[r]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render()).with_context(|| format!("writing {}", path.display()))
    }
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// Polyline plot of several series sharing one x axis.
pub fn write_svg(path: &Path, title: &str, x: &[f64], series: &[(&str, &[f64])]) -> Result<()> {
    let (w, h, pad) = (800.0, 400.0, 40.0);
    let (x_lo, x_hi) = (x[0], x[x.len() - 1]);
    let y_hi = series
        .iter()
        .flat_map(|(_, ys)| ys.iter().copied())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let px = |v: f64| pad + (v - x_lo) / (x_hi - x_lo).max(f64::MIN_POSITIVE) * (w - 2.0 * pad);
    let py = |v: f64| h - pad - v / y_hi * (h - 2.0 * pad);

    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#)?;
    writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#)?;
    writeln!(svg, r#"<text x="{pad}" y="24" font-family="sans-serif" font-size="14">{title}</text>"#)?;
    writeln!(
        svg,
        r#"<line x1="{pad}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#,
        y0 = h - pad,
        x1 = w - pad
    )?;
    writeln!(
        svg,
        r#"<text x="{pad}" y="{y}" font-family="sans-serif" font-size="11">{x_lo}</text><text x="{xr}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="end">{x_hi}</text>"#,
        y = h - pad + 16.0,
        xr = w - pad
    )?;
    for (i, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = x
            .iter()
            .zip(ys.iter())
            .map(|(&a, &b)| format!("{:.2},{:.2}", px(a), py(b)))
            .collect();
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1" points="{}"/>"#,
            points.join(" ")
        )?;
        writeln!(
            svg,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11" fill="{color}" text-anchor="end">{name}</text>"#,
            x = w - pad,
            y = 24.0 + 14.0 * i as f64
        )?;
    }
    svg.push_str("</svg>\n");
    fs::write(path, svg).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_format() {
        let text = Table::new()
            .column("x (units of d)", vec![-0.5, 0.0])
            .column("p", vec![1.0 / 3.0, 2.0])
            .render();
        assert_eq!(
            text,
            "x (units of d),p\n-5.0000000000000000e-1,3.3333333333333331e-1\n0.0000000000000000e0,2.0000000000000000e0\n"
        );
        assert!(!text.contains('\r'));
    }

    #[test]
    fn csv_values_round_trip() {
        let v = std::f64::consts::PI * 1e-7;
        let text = Table::new().column("a", vec![v]).render();
        let parsed: f64 = text.lines().nth(1).unwrap().parse().unwrap();
        assert_eq!(parsed, v);
    }
}
