//! Tables behind the figures and threshold values, emitted as CSV.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponents::{
    advantage_crossover, advantage_gap, advantage_threshold_asym, advantage_threshold_sym, ratio_sweep, Mode,
    SweepRecord,
};

pub const FIG1_NS: [usize; 3] = [3, 6, 10];
pub const FIG2_N: usize = 10;
pub const FIG2_ALT_U: f64 = 0.4;
pub const RATIO_EPS: f64 = 1e-3;

/// `0.05, 0.10, ..., 2.00`.
pub fn figure_eps_grid() -> Vec<f64> {
    (1..=40).map(|k| k as f64 / 20.0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Fig1,
    Fig2,
    Thresholds,
    Ratios,
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::Fig1 => "fig1",
            Target::Fig2 => "fig2",
            Target::Thresholds => "thresholds",
            Target::Ratios => "ratios",
        }
    }
}

impl FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Target::Fig1),
            "fig2" => Ok(Target::Fig2),
            "thresholds" => Ok(Target::Thresholds),
            "ratios" => Ok(Target::Ratios),
            other => Err(invalid(format!("unknown target `{other}` (fig1|fig2|thresholds|ratios)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Int(usize),
    Float(f64),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Cell::Float(v)
        } else {
            Cell::Empty
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::from)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// CSV with CRLF line endings and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push_str("\r\n");
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Int(v) => write!(out, "{v}").unwrap(),
                    Cell::Float(v) => write!(out, "{v:.16e}").unwrap(),
                    Cell::Empty => {}
                }
            }
            out.push_str("\r\n");
        }
        out
    }

    /// Numeric column by header name; empty cells become `None`.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[idx] {
                    Cell::Int(v) => Some(v as f64),
                    Cell::Float(v) => Some(v),
                    Cell::Empty => None,
                })
                .collect(),
        )
    }
}

pub const SWEEP_HEADER: [&str; 11] = [
    "n",
    "epsilon",
    "eta",
    "s_classical",
    "a_classical",
    "s_qstar",
    "a_qstar",
    "s_ratio",
    "a_ratio",
    "s_qalt",
    "a_qalt",
];

pub fn sweep_table(records: &[SweepRecord]) -> Table {
    let mut t = Table::new(&SWEEP_HEADER);
    for r in records {
        t.rows.push(vec![
            Cell::Int(r.n),
            r.epsilon.into(),
            r.eta.into(),
            r.s_classical.into(),
            r.a_classical.into(),
            r.s_qstar.into(),
            r.a_qstar.into(),
            r.s_ratio.into(),
            r.a_ratio.into(),
            r.s_qalt.into(),
            r.a_qalt.into(),
        ]);
    }
    t
}

fn fig1() -> Result<Table> {
    let grid = figure_eps_grid();
    let mut records = Vec::new();
    for n in FIG1_NS {
        records.extend(ratio_sweep(n, &grid, 1.0, None)?);
    }
    Ok(sweep_table(&records))
}

/// `s_qalt`/`a_qalt` hold the exponents of the isoclinic mechanism with
/// `u = 0.4`, i.e. `(d, r) = (10, 4)`.
fn fig2() -> Result<Table> {
    Ok(sweep_table(&ratio_sweep(FIG2_N, &figure_eps_grid(), 1.0, Some(FIG2_ALT_U))?))
}

fn thresholds() -> Result<Table> {
    let mut t = Table::new(&[
        "n",
        "sym_bound",
        "asym_bound",
        "sym_gap_at_bound",
        "asym_gap_at_bound",
        "sym_crossover",
        "asym_crossover",
    ]);
    for n in 3..=12 {
        let (bs, ba) = (advantage_threshold_sym(n), advantage_threshold_asym(n));
        t.rows.push(vec![
            Cell::Int(n),
            bs.into(),
            ba.into(),
            advantage_gap(n, bs, Mode::Sym).into(),
            advantage_gap(n, ba, Mode::Asym).into(),
            advantage_crossover(n, Mode::Sym)?.into(),
            advantage_crossover(n, Mode::Asym)?.into(),
        ]);
    }
    Ok(t)
}

/// `n(n-1)/(2 floor(n/2) ceil(n/2))`.
pub fn limit_ratio(n: usize) -> f64 {
    let nf = n as f64;
    nf * (nf - 1.0) / (2.0 * ((n / 2) * n.div_ceil(2)) as f64)
}

fn ratios() -> Result<Table> {
    let mut t = Table::new(&["n", "epsilon", "s_ratio", "a_ratio", "limit_ratio"]);
    for n in 2..=12 {
        let r = &ratio_sweep(n, &[RATIO_EPS], 1.0, None)?[0];
        t.rows.push(vec![
            Cell::Int(n),
            RATIO_EPS.into(),
            r.s_ratio.into(),
            r.a_ratio.into(),
            limit_ratio(n).into(),
        ]);
    }
    Ok(t)
}

pub fn table(target: Target) -> Result<Table> {
    match target {
        Target::Fig1 => fig1(),
        Target::Fig2 => fig2(),
        Target::Thresholds => thresholds(),
        Target::Ratios => ratios(),
    }
}

/// Parameters recorded next to each emitted table.
pub fn parameters(target: Target) -> serde_json::Value {
    let grid = figure_eps_grid();
    match target {
        Target::Fig1 => serde_json::json!({"n": FIG1_NS, "epsilon": grid, "eta": 1.0}),
        Target::Fig2 => serde_json::json!({"n": FIG2_N, "epsilon": grid, "eta": 1.0, "alt_u": FIG2_ALT_U}),
        Target::Thresholds => serde_json::json!({"n": (3..=12).collect::<Vec<_>>()}),
        Target::Ratios => serde_json::json!({"n": (2..=12).collect::<Vec<_>>(), "epsilon": RATIO_EPS, "eta": 1.0}),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_format() {
        let mut t = Table::new(&["n", "x", "y"]);
        t.rows.push(vec![Cell::Int(3), Cell::Float(0.1), Cell::Empty]);
        let csv = t.to_csv();
        assert_eq!(csv, "n,x,y\r\n3,1.0000000000000001e-1,\r\n");
        let back: f64 = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn grid_shape() {
        let g = figure_eps_grid();
        assert_eq!(g.len(), 40);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[39], 2.0);
    }

    #[test]
    fn tables_are_deterministic() {
        let a = table(Target::Ratios).unwrap().to_csv();
        let b = table(Target::Ratios).unwrap().to_csv();
        assert_eq!(a, b);
        let t = table(Target::Ratios).unwrap();
        let lim = t.column("limit_ratio").unwrap();
        assert_eq!(lim[1], Some(1.5));
    }
}
