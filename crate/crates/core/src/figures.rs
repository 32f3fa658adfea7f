//! Sweep data behind the comparison plots: one row per sweep point, one
//! exact value per network model.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::closed_form::{dof_hd_only, dof_self_interference, dof_theorem1, dof_theorem2};
use crate::config::{FdConfig, HdSplitConfig};
use crate::error::DofError;
use crate::rational::Rational;
use crate::scheduler::{optimal_split, Mode};

/// Curve columns, in output order.
pub const CURVES: [&str; 4] = ["fd-bs-hd-user", "fd-bs-fd-user", "fd-with-si", "hd-only"];

pub const DECIMAL_PLACES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureName {
    /// Symmetric `(M, M, N, N)` against `N`.
    Ex1,
    /// `N2 = ratio * N1` against `N1`.
    FdSweep,
    /// All splits of a fixed population `N`.
    SplitCurve,
    /// Best split for each population size.
    OptimalSplit,
}

impl FigureName {
    pub const ALL: [FigureName; 4] = [FigureName::Ex1, FigureName::FdSweep, FigureName::SplitCurve, FigureName::OptimalSplit];

    pub fn name(&self) -> &'static str {
        match self {
            FigureName::Ex1 => "ex1",
            FigureName::FdSweep => "fd-sweep",
            FigureName::SplitCurve => "split-curve",
            FigureName::OptimalSplit => "optimal-split",
        }
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureName {
    type Err = DofError;
    fn from_str(s: &str) -> Result<Self, DofError> {
        FigureName::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| DofError::InvalidArgument(format!("unknown figure '{s}'")))
    }
}

/// Sweep parameters; `None` fields fall back to the figure's defaults.
#[derive(Debug, Clone, Default)]
pub struct FigureParams {
    pub m: Option<usize>,
    pub m1: Option<usize>,
    pub m2: Option<usize>,
    /// Total users for `split-curve`.
    pub n: Option<usize>,
    /// Last sweep point for `ex1`, `fd-sweep` and `optimal-split`.
    pub n_max: Option<usize>,
    /// `N2 / N1` for `fd-sweep`.
    pub ratio: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureRow {
    pub sweep: Vec<(&'static str, usize)>,
    /// Values in [`CURVES`] order.
    pub values: [Rational; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureData {
    pub name: FigureName,
    pub sweep_columns: Vec<&'static str>,
    pub rows: Vec<FigureRow>,
}

fn model_values(cfg: &HdSplitConfig, fd_users: usize) -> [Rational; 4] {
    [
        dof_theorem1(cfg).value,
        dof_theorem2(&FdConfig::new(cfg.m1, cfg.m2, fd_users)),
        dof_self_interference(cfg),
        dof_hd_only(cfg),
    ]
}

pub fn figure_data(name: FigureName, params: &FigureParams) -> FigureData {
    let m1 = params.m1.unwrap_or(16);
    let m2 = params.m2.unwrap_or(8);
    let (sweep_columns, rows): (Vec<&'static str>, Vec<FigureRow>) = match name {
        FigureName::Ex1 => {
            let m = params.m.unwrap_or(5);
            let rows = (1..=params.n_max.unwrap_or(20))
                .map(|n| FigureRow {
                    sweep: vec![("n", n)],
                    values: model_values(&HdSplitConfig::new(m, m, n, n), n),
                })
                .collect();
            (vec!["n"], rows)
        }
        FigureName::FdSweep => {
            let ratio = params.ratio.unwrap_or(2);
            let rows = (1..=params.n_max.unwrap_or(25))
                .map(|n1| {
                    let n2 = ratio * n1;
                    FigureRow {
                        sweep: vec![("n1", n1), ("n2", n2), ("n", n1 + n2)],
                        values: model_values(&HdSplitConfig::new(m1, m2, n1, n2), n1 + n2),
                    }
                })
                .collect();
            (vec!["n1", "n2", "n"], rows)
        }
        FigureName::SplitCurve => {
            let n = params.n.unwrap_or(50);
            let rows = (0..=n)
                .map(|n1| FigureRow {
                    sweep: vec![("n1", n1), ("n2", n - n1)],
                    values: model_values(&HdSplitConfig::new(m1, m2, n1, n - n1), n),
                })
                .collect();
            (vec!["n1", "n2"], rows)
        }
        FigureName::OptimalSplit => {
            let rows = (1..=params.n_max.unwrap_or(50))
                .map(|n| FigureRow {
                    sweep: vec![("n", n)],
                    values: [
                        optimal_split(m1, m2, n, Mode::FdNoSi).value,
                        dof_theorem2(&FdConfig::new(m1, m2, n)),
                        optimal_split(m1, m2, n, Mode::FdWithSi).value,
                        optimal_split(m1, m2, n, Mode::HdOnly).value,
                    ],
                })
                .collect();
            (vec!["n"], rows)
        }
    };
    FigureData { name, sweep_columns, rows }
}

impl FigureRow {
    pub fn value(&self, curve: &str) -> Option<&Rational> {
        CURVES.iter().position(|c| *c == curve).map(|i| &self.values[i])
    }

    /// `hd-only <= fd-with-si <= fd-bs-hd-user <= fd-bs-fd-user`.
    pub fn is_mode_ordered(&self) -> bool {
        let [fd, fd_users, si, hd] = &self.values;
        hd <= si && si <= fd && fd <= fd_users
    }
}

impl FigureData {
    /// Header row plus decimal values, LF line endings.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let header: Vec<&str> = self.sweep_columns.iter().copied().chain(CURVES).collect();
        w.write_record(&header)?;
        for row in &self.rows {
            let record: Vec<String> = row
                .sweep
                .iter()
                .map(|(_, v)| v.to_string())
                .chain(row.values.iter().map(|v| v.to_decimal_string(DECIMAL_PLACES)))
                .collect();
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Array of row objects; each curve carries `exact` (`p/q`) and
    /// `decimal` strings.
    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (k, v) in &row.sweep {
                    obj.insert((*k).to_string(), json!(v));
                }
                for (curve, v) in CURVES.iter().zip(&row.values) {
                    obj.insert(
                        (*curve).to_string(),
                        json!({ "exact": v.to_fraction_string(), "decimal": v.to_decimal_string(DECIMAL_PLACES) }),
                    );
                }
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}
