//! Reference tables and tolerance-based table comparison.

use std::collections::BTreeMap;

use crate::error::{QiError, QiResult};

/// Published reference tables, keyed `<function>_<qi>_d<d>_<tensor|hier>`.
pub const REFERENCE_TABLES: &[(&str, &str)] = &[
    ("f1_hier_d2_tensor", include_str!("../../data/reference/f1_hier_d2_tensor.csv")),
    ("f1_hier_d2_hier", include_str!("../../data/reference/f1_hier_d2_hier.csv")),
    ("f1_hier_d3_tensor", include_str!("../../data/reference/f1_hier_d3_tensor.csv")),
    ("f1_hier_d3_hier", include_str!("../../data/reference/f1_hier_d3_hier.csv")),
    ("f1_hier_d4_tensor", include_str!("../../data/reference/f1_hier_d4_tensor.csv")),
    ("f1_hier_d4_hier", include_str!("../../data/reference/f1_hier_d4_hier.csv")),
    ("f1_that-hier_d2_tensor", include_str!("../../data/reference/f1_that-hier_d2_tensor.csv")),
    ("f1_that-hier_d2_hier", include_str!("../../data/reference/f1_that-hier_d2_hier.csv")),
    ("f1_that-hier_d3_tensor", include_str!("../../data/reference/f1_that-hier_d3_tensor.csv")),
    ("f1_that-hier_d3_hier", include_str!("../../data/reference/f1_that-hier_d3_hier.csv")),
    ("f1_that-hier_d4_tensor", include_str!("../../data/reference/f1_that-hier_d4_tensor.csv")),
    ("f1_that-hier_d4_hier", include_str!("../../data/reference/f1_that-hier_d4_hier.csv")),
    ("f1_fd-hier_d3_tensor", include_str!("../../data/reference/f1_fd-hier_d3_tensor.csv")),
    ("f1_fd-hier_d3_hier", include_str!("../../data/reference/f1_fd-hier_d3_hier.csv")),
    ("f2_hier_d3_tensor", include_str!("../../data/reference/f2_hier_d3_tensor.csv")),
    ("f2_hier_d3_hier", include_str!("../../data/reference/f2_hier_d3_hier.csv")),
    ("f2_that-hier_d3_tensor", include_str!("../../data/reference/f2_that-hier_d3_tensor.csv")),
    ("f2_that-hier_d3_hier", include_str!("../../data/reference/f2_that-hier_d3_hier.csv")),
    ("f2_fd-hier_d3_tensor", include_str!("../../data/reference/f2_fd-hier_d3_tensor.csv")),
    ("f2_fd-hier_d3_hier", include_str!("../../data/reference/f2_fd-hier_d3_hier.csv")),
];

pub fn reference_table(name: &str) -> Option<Table> {
    REFERENCE_TABLES.iter().find(|(n, _)| *n == name).map(|(_, t)| Table::parse(t).expect("valid reference table"))
}

/// A CSV table keyed by its first column (`M`); empty cells are absent values.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: BTreeMap<i64, BTreeMap<String, f64>>,
}

impl Table {
    pub fn parse(text: &str) -> QiResult<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let parse_err = |e: csv::Error| QiError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        };
        let columns: Vec<String> = rdr.headers().map_err(parse_err)?.iter().map(str::to_string).collect();
        if columns.is_empty() {
            return Err(QiError::Parse { line: 1, message: "empty table".into() });
        }
        let mut rows = BTreeMap::new();
        for rec in rdr.records() {
            let rec = rec.map_err(parse_err)?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let key: i64 =
                rec[0].parse().map_err(|_| QiError::Parse { line, message: format!("bad key `{}`", &rec[0]) })?;
            let mut row = BTreeMap::new();
            for (c, v) in columns.iter().zip(rec.iter()).skip(1) {
                if v.is_empty() {
                    continue;
                }
                let x: f64 = v.parse().map_err(|_| QiError::Parse { line, message: format!("bad number `{v}`") })?;
                row.insert(c.clone(), x);
            }
            rows.insert(key, row);
        }
        Ok(Self { columns, rows })
    }

    pub fn get(&self, key: i64, column: &str) -> Option<f64> {
        self.rows.get(&key)?.get(column).copied()
    }

    /// Values of one column ordered by key.
    pub fn column(&self, column: &str) -> Vec<Option<f64>> {
        self.rows.values().map(|r| r.get(column).copied()).collect()
    }
}

/// Relative tolerance per column; columns without an entry must match exactly.
pub type Tolerances = BTreeMap<String, f64>;

pub fn default_tolerances() -> Tolerances {
    ["err_sup", "err_x", "err_y", "err_xy"].iter().map(|c| (c.to_string(), 0.01)).collect()
}

/// One cell that differs beyond tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub key: i64,
    pub column: String,
    pub produced: Option<f64>,
    pub expected: f64,
    pub rel: f64,
}

/// Compares every value present in `expected` against `produced`.
pub fn compare_tables(produced: &Table, expected: &Table, tol: &Tolerances) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for (&key, row) in &expected.rows {
        for (col, &want) in row {
            let got = produced.get(key, col);
            let rel = match got {
                Some(g) if want == 0.0 => g.abs(),
                Some(g) => ((g - want) / want).abs(),
                None => f64::INFINITY,
            };
            let limit = tol.get(col).copied().unwrap_or(0.0);
            if rel > limit {
                out.push(Mismatch { key, column: col.clone(), produced: got, expected: want, rel });
            }
        }
    }
    out
}
