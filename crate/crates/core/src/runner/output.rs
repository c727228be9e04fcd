//! CSV and SVG emission.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};

use super::sweep::SweepRow;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

/// Column-named table ready for output.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from header");
        self.rows.push(row);
    }

    /// Every parameter of the point followed by the computed columns.
    pub fn from_rows(rows: &[SweepRow]) -> Self {
        let mut columns: Vec<String> = [
            "p", "p_c", "xi", "axis_x", "axis_y", "axis_z", "probe_x", "probe_y", "probe_z", "noise",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        if let Some(first) = rows.first() {
            columns.extend(first.values.iter().map(|(n, _)| n.clone()));
        }
        let mut table = Self::new(columns);
        for row in rows {
            let pt = &row.point;
            let mut cells: Vec<Cell> = [pt.p, pt.p_c, pt.xi]
                .into_iter()
                .chain(pt.axis)
                .chain(pt.probe.to_array())
                .map(Cell::Num)
                .collect();
            cells.push(Cell::Text(pt.noise.name().to_string()));
            cells.extend(row.values.iter().map(|&(_, v)| Cell::Num(v)));
            table.push(cells);
        }
        table
    }

    /// `p` followed by the computed columns only.
    pub fn compact(rows: &[SweepRow]) -> Self {
        let mut columns = vec!["p".to_string()];
        if let Some(first) = rows.first() {
            columns.extend(first.values.iter().map(|(n, _)| n.clone()));
        }
        let mut table = Self::new(columns);
        for row in rows {
            let mut cells = vec![Cell::Num(row.point.p)];
            cells.extend(row.values.iter().map(|&(_, v)| Cell::Num(v)));
            table.push(cells);
        }
        table
    }

    pub fn numeric_column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        self.rows
            .iter()
            .map(|row| match &row[idx] {
                Cell::Num(v) => Some(*v),
                Cell::Text(_) => None,
            })
            .collect()
    }
}

/// Twelve significant digits, trailing zeros kept, C `%#.12g` layout.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

/// Writes `table` as CSV: header, then one line per row, `\n` terminated.
pub fn emit_csv<W: Write>(table: &Table, mut out: W) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::Output("no rows to write".into()));
    }
    let mut text = table.columns.join(",");
    text.push('\n');
    for row in &table.rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                text.push(',');
            }
            match cell {
                Cell::Num(v) if !v.is_finite() => {
                    return Err(Error::Output(format!("non-finite value in column {}", table.columns[i])))
                }
                Cell::Num(v) => text.push_str(&format_number(*v)),
                Cell::Text(s) => text.push_str(s),
            }
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Roughly `target` evenly spaced round tick values covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / target as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * magnitude);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.6}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

/// Line plot of `y_columns` against `x_column` on a fixed 800×600 canvas.
///
/// Columns whose name starts with `fq_cas` are drawn dashed, all others solid.
pub fn emit_svg<W: Write>(table: &Table, x_column: &str, y_columns: &[&str], mut out: W) -> Result<()> {
    let missing = |name: &str| Error::Output(format!("no numeric column `{name}`"));
    if table.rows.len() < 2 {
        return Err(Error::Output(format!("need at least 2 rows to plot, got {}", table.rows.len())));
    }
    if y_columns.is_empty() {
        return Err(Error::Output("no y columns to plot".into()));
    }
    let xs = table.numeric_column(x_column).ok_or_else(|| missing(x_column))?;
    let series = y_columns
        .iter()
        .map(|name| table.numeric_column(name).map(|v| (*name, v)).ok_or_else(|| missing(name)))
        .collect::<Result<Vec<_>>>()?;

    let finite = |v: &&f64| v.is_finite();
    let (x_lo, x_hi) = bounds(xs.iter().filter(finite));
    let (y_lo, y_hi) = bounds(series.iter().flat_map(|(_, v)| v.iter()).filter(finite));
    let (y_lo, y_hi) = (y_lo.min(0.0), if y_hi > y_lo.min(0.0) { y_hi } else { y_lo.min(0.0) + 1.0 });
    let (x_lo, x_hi) = if x_hi > x_lo { (x_lo, x_hi) } else { (x_lo, x_lo + 1.0) };

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{LEFT}" y1="{b:.2}" x2="{r:.2}" y2="{b:.2}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{b:.2}"/></g>"#,
        b = TOP + plot_h,
        r = LEFT + plot_w
    );
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="12">"#);
    for t in ticks(x_lo, x_hi, 5) {
        let x = sx(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{b:.2}" x2="{x:.2}" y2="{b2:.2}" stroke="black"/><text x="{x:.2}" y="{ty:.2}" text-anchor="middle">{}</text>"#,
            tick_label(t),
            b = TOP + plot_h,
            b2 = TOP + plot_h + 5.0,
            ty = TOP + plot_h + 20.0
        );
    }
    for t in ticks(y_lo, y_hi, 5) {
        let y = sy(t);
        let _ = writeln!(
            s,
            r#"<line x1="{l2:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{tx:.2}" y="{yy:.2}" text-anchor="end">{}</text>"#,
            tick_label(t),
            l2 = LEFT - 5.0,
            tx = LEFT - 8.0,
            yy = y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 25.0,
        escape(x_column)
    );
    let _ = writeln!(s, "</g>");

    for (i, (name, ys)) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let dash = if name.starts_with("fq_cas") { r#" stroke-dasharray="6,4""# } else { "" };
        let points: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="2"{dash} points="{}"/>"#,
            points.join(" ")
        );
    }

    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="12">"#);
    for (i, (name, _)) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let dash = if name.starts_with("fq_cas") { r#" stroke-dasharray="6,4""# } else { "" };
        let y = TOP + 10.0 + 20.0 * i as f64;
        let x = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y:.2}" stroke="{colour}" stroke-width="2"{dash}/><text x="{tx:.2}" y="{ty:.2}">{}</text>"#,
            escape(name),
            x2 = x + 30.0,
            tx = x + 36.0,
            ty = y + 4.0
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");

    out.write_all(s.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn bounds<'a>(values: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
