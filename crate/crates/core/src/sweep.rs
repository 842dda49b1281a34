//! Figure-style parameter sweeps and their tabular output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{domain, BecError, Result};
use crate::exact::{condensate_fraction, threshold_temperature};
use crate::semiclassical::{lda_condensate_fraction_limit, tc0, tc_first_order};
use crate::trap::{Shape, TrapSpec};
use crate::validity::{check_validity, max_anisotropy};

/// Condensate fractions tabulated by [`fig1`]: 0.1 %, 0.5 % and 1 %.
pub const THRESHOLD_FRACTIONS: [f64; 3] = [0.001, 0.005, 0.01];
/// Experimentally resolvable onset band of the condensate fraction.
pub const DETECTION_WINDOW: (f64, f64) = (0.001, 0.01);
/// Smallest atom number [`fig1`] accepts without the unsafe override.
pub const SAFE_N_MIN: f64 = 1e4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Column { name: name.into(), unit: unit.into() }
    }

    /// Parses a `name[unit]` header cell; a bare name gets unit `-`.
    pub fn parse_header(cell: &str) -> Self {
        let cell = cell.trim();
        match (cell.find('['), cell.strip_suffix(']')) {
            (Some(open), Some(inner)) => Column::new(&cell[..open], &inner[open + 1..]),
            _ => Column::new(cell, "-"),
        }
    }
}

/// Ordered rows of sweep output, sorted by the first column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn new(columns: Vec<Column>) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("tool_version".to_string(), env!("CARGO_PKG_VERSION").to_string());
        SweepTable { metadata, columns, rows: Vec::new() }
    }

    pub fn set_meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(key.to_string(), value.to_string());
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return domain(format!(
                "row has {} entries, table has {} columns",
                row.len(),
                self.columns.len()
            ));
        }
        self.rows.push(row);
        Ok(())
    }

    fn sort_rows(&mut self) {
        self.rows.sort_by(|a, b| a[0].total_cmp(&b[0]));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c.name == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Metadata as `# key = value` lines, a `name[unit]` header, then rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let header: Vec<String> =
            self.columns.iter().map(|c| format!("{}[{}]", c.name, c.unit)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_sig(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `{"metadata": .., "columns": .., "rows": ..}`. Non-finite cells
    /// become `null`.
    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| {
                        if v.is_finite() {
                            serde_json::Value::Number(
                                serde_json::Number::from_f64(format_sig(v).parse().unwrap_or(v))
                                    .expect("finite"),
                            )
                        } else {
                            serde_json::Value::Null
                        }
                    })
                    .collect()
            })
            .collect();
        let doc = serde_json::json!({
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    /// Appends the columns of `other` (all but its first), matching rows
    /// by nearest first-column value within `1e-9` (relative to
    /// `max(1, |x|)`). Unmatched cells are NaN.
    pub fn merge_overlay(&mut self, other: &SweepTable) {
        let extra = other.columns.len().saturating_sub(1);
        for c in other.columns.iter().skip(1) {
            self.columns.push(Column::new(format!("overlay_{}", c.name), c.unit.clone()));
        }
        for row in &mut self.rows {
            let key = row[0];
            let hit = other
                .rows
                .iter()
                .filter(|r| !r.is_empty())
                .min_by(|a, b| (a[0] - key).abs().total_cmp(&(b[0] - key).abs()))
                .filter(|r| (r[0] - key).abs() <= 1e-9 * key.abs().max(1.0));
            match hit {
                Some(r) => row.extend((1..=extra).map(|i| r.get(i).copied().unwrap_or(f64::NAN))),
                None => row.extend(std::iter::repeat_n(f64::NAN, extra)),
            }
        }
        self.set_meta("overlay_columns", extra);
    }
}

/// Formats with 12 significant digits: positional notation for decimal
/// exponents in `[-5, 12)`, otherwise scientific. Trailing zeros are
/// trimmed.
pub fn format_sig(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "NaN".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `points` values from `lo` to `hi` inclusive, evenly spaced in log10.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..points)
        .map(|i| match i {
            0 => lo,
            i if i + 1 == points => hi,
            i => 10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64),
        })
        .collect()
}

pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| match i {
            0 => lo,
            i if i + 1 == points => hi,
            i => lo + (hi - lo) * i as f64 / (points - 1) as f64,
        })
        .collect()
}

#[cfg(feature = "parallel")]
fn evaluate<T, F>(grid: &[f64], f: F) -> Vec<Result<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    grid.par_iter().map(|&x| f(x)).collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate<T, F>(grid: &[f64], f: F) -> Vec<Result<T>>
where
    F: Fn(f64) -> Result<T>,
{
    grid.iter().map(|&x| f(x)).collect()
}

/// Evaluates `f` on every grid point; the first failure in grid order
/// wins and names its point.
fn sweep<T, F>(label: &str, grid: &[f64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync + Send,
{
    evaluate(grid, f)
        .into_iter()
        .zip(grid)
        .map(|(r, &x)| {
            r.map_err(|e| BecError::GridPoint { point: format!("{label} = {x}"), source: Box::new(e) })
        })
        .collect()
}

fn pct_label(x: f64) -> String {
    format!("t_{}pct", format_sig(100.0 * x))
}

/// Rescaled threshold temperatures against `log10 N` for an isotropic
/// trap.
pub fn fig1(n_min: f64, n_max: f64, points: usize, allow_unsafe: bool) -> Result<SweepTable> {
    if points < 2 {
        return domain(format!("fig1 needs at least 2 points, got {points}"));
    }
    if !(n_min >= 100.0) || !(n_max > n_min) {
        return domain(format!("fig1 needs 100 <= n_min < n_max, got [{n_min}, {n_max}]"));
    }
    if n_min < SAFE_N_MIN && !allow_unsafe {
        return domain(format!(
            "n_min = {n_min} is below {SAFE_N_MIN:e} where the continuum description holds; pass the unsafe override"
        ));
    }
    let trap = TrapSpec::isotropic();
    let grid = log_grid(n_min, n_max, points);
    let rows = sweep("N", &grid, |n| {
        let fo = tc_first_order(&trap, n)?;
        let mut row = vec![n.log10(), 1.0, fo.t_c_first_order / fo.t_c0];
        for x in THRESHOLD_FRACTIONS {
            row.push(threshold_temperature(&trap, n, x)?.t_threshold / fo.t_c0);
        }
        Ok(row)
    })?;

    let mut columns = vec![
        Column::new("log10_n", "-"),
        Column::new("tc0_ratio", "Tc0"),
        Column::new("first_order_ratio", "Tc0"),
    ];
    columns.extend(THRESHOLD_FRACTIONS.iter().map(|&x| Column::new(pct_label(x) + "_ratio", "Tc0")));
    let mut table = SweepTable::new(columns);
    table.set_meta("figure", "fig1");
    table.set_meta("trap", trap);
    table.set_meta("n_min", format_sig(n_min));
    table.set_meta("n_max", format_sig(n_max));
    table.set_meta("points", points);
    table.set_meta(
        "threshold_fractions",
        THRESHOLD_FRACTIONS.map(format_sig).join(";"),
    );
    if n_min < SAFE_N_MIN {
        table.set_meta("unsafe", "true");
    }
    for row in rows {
        table.push_row(row)?;
    }
    table.sort_rows();
    Ok(table)
}

fn n_tag(n: f64) -> String {
    format!("N{}", format_sig(n))
}

/// Condensate fraction against `T/Tc0` on `[0.2, 1.3]` for each atom
/// number, with the thermodynamic-limit curve, the detection window and
/// the first-order `Tc` markers as constant columns.
pub fn fig2(n_atoms: &[f64], t_points: usize) -> Result<SweepTable> {
    if n_atoms.is_empty() {
        return domain("fig2 needs at least one atom number");
    }
    if let Some(&bad) = n_atoms.iter().find(|&&n| !(n >= 100.0)) {
        return domain(format!("fig2 needs N >= 100, got {bad}"));
    }
    if t_points < 10 {
        return domain(format!("fig2 needs at least 10 temperature points, got {t_points}"));
    }
    let trap = TrapSpec::isotropic();
    let grid = linear_grid(0.2, 1.3, t_points);

    let mut curves = Vec::with_capacity(n_atoms.len());
    let mut markers = Vec::with_capacity(n_atoms.len());
    for &n in n_atoms {
        let scale = tc0(&trap, n)?;
        let label = format!("N = {n}, T/Tc0");
        curves.push(sweep(&label, &grid, |r| condensate_fraction(&trap, n, r * scale))?);
        let fo = tc_first_order(&trap, n)?;
        let f_at_fo = condensate_fraction(&trap, n, fo.t_c_first_order).map_err(|e| {
            BecError::GridPoint { point: format!("N = {n}, first-order Tc"), source: Box::new(e) }
        })?;
        markers.push((fo.t_c_first_order / fo.t_c0, f_at_fo));
    }

    let mut columns = vec![Column::new("t_over_tc0", "Tc0")];
    columns.extend(n_atoms.iter().map(|&n| Column::new(format!("f0_{}", n_tag(n)), "-")));
    columns.push(Column::new("f0_lda_limit", "-"));
    columns.push(Column::new("window_lo", "-"));
    columns.push(Column::new("window_hi", "-"));
    for &n in n_atoms {
        columns.push(Column::new(format!("first_order_ratio_{}", n_tag(n)), "Tc0"));
        columns.push(Column::new(format!("f0_at_first_order_{}", n_tag(n)), "-"));
    }
    let mut table = SweepTable::new(columns);
    table.set_meta("figure", "fig2");
    table.set_meta("trap", trap);
    table.set_meta("n_atoms", n_atoms.iter().map(|&n| format_sig(n)).collect::<Vec<_>>().join(";"));
    table.set_meta("t_points", t_points);
    for (i, &r) in grid.iter().enumerate() {
        let mut row = vec![r];
        row.extend(curves.iter().map(|c| c[i]));
        row.push(lda_condensate_fraction_limit(r));
        row.push(DETECTION_WINDOW.0);
        row.push(DETECTION_WINDOW.1);
        for &(ratio, f) in &markers {
            row.push(ratio);
            row.push(f);
        }
        table.push_row(row)?;
    }
    table.sort_rows();
    Ok(table)
}

/// Exact `T_{0.1%}` against the first-order `Tc` over the anisotropy
/// values `s_values` for a disk or cigar trap.
pub fn anisoscan(shape: Shape, n_atoms: f64, s_values: &[f64], threshold: f64) -> Result<SweepTable> {
    if shape == Shape::Isotropic {
        return domain("anisotropy scan needs a disk or cigar trap");
    }
    let bound = max_anisotropy(shape, n_atoms, threshold)?;
    let rows = sweep("s", s_values, |s| {
        let trap = TrapSpec::new(shape, s)?;
        let exact = threshold_temperature(&trap, n_atoms, THRESHOLD_FRACTIONS[0])?.t_threshold;
        let fo = tc_first_order(&trap, n_atoms)?.t_c_first_order;
        let valid = check_validity(&trap, n_atoms, threshold)?.valid;
        Ok(vec![s, exact, fo, (fo - exact).abs() / exact, if valid { 1.0 } else { 0.0 }])
    })?;
    let mut table = SweepTable::new(vec![
        Column::new("s", "-"),
        Column::new("t_0.1pct", "hbar_omega/k_B"),
        Column::new("tc_first_order", "hbar_omega/k_B"),
        Column::new("rel_deviation", "-"),
        Column::new("valid", "bool"),
    ]);
    table.set_meta("figure", "anisoscan");
    table.set_meta("shape", shape);
    table.set_meta("n_atoms", format_sig(n_atoms));
    table.set_meta("threshold", format_sig(threshold));
    table.set_meta("validity_s_max", format!("{bound:.1}"));
    table.set_meta("validity_s_max_exact", format_sig(bound));
    for row in rows {
        table.push_row(row)?;
    }
    table.sort_rows();
    Ok(table)
}

/// [`anisoscan`] on `points` evenly spaced values of `s` in `[1, s_max_scan]`.
pub fn cmd_anisoscan(
    shape: Shape,
    n_atoms: f64,
    s_max_scan: f64,
    points: usize,
    threshold: f64,
) -> Result<SweepTable> {
    if !(s_max_scan > 1.0) {
        return domain(format!("s_max_scan must exceed 1, got {s_max_scan}"));
    }
    if points < 2 {
        return domain(format!("anisotropy scan needs at least 2 points, got {points}"));
    }
    let mut table = anisoscan(shape, n_atoms, &linear_grid(1.0, s_max_scan, points), threshold)?;
    table.set_meta("s_max_scan", format_sig(s_max_scan));
    Ok(table)
}
