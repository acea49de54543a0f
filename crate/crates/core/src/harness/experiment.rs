//! Experiment configuration, runner and table output.

use std::cell::RefCell;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{QiError, QiResult};
use crate::grid::{Degrees, Rect, UniformGrid};
use crate::harness::comparison::{comparison_hqi, comparison_qi};
use crate::harness::counting::{evaluations_from_points, Operator};
use crate::harness::errors::{error_set, ErrorSet};
use crate::harness::functions::{builtin, HermiteOf, TestFunction, ValuesOf};
use crate::hqi::{hierarchical_qi, tensor_qi_from, HierSpline};
use crate::mesh::HierarchicalMesh;
use crate::provider::{fd_hermite_provider, Counting};
use crate::refine::{adaptive_refine, epsilon_from_tensor, IterationRecord, RefinementConfig, StopReason};
use crate::tensor::TensorSpline;

/// The operators the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QiKind {
    Tensor,
    Hier,
    That,
    ThatHier,
    Fd,
    FdHier,
}

impl QiKind {
    pub const ALL: [QiKind; 6] = [QiKind::Tensor, QiKind::Hier, QiKind::That, QiKind::ThatHier, QiKind::Fd, QiKind::FdHier];

    pub fn name(self) -> &'static str {
        match self {
            QiKind::Tensor => "tensor",
            QiKind::Hier => "hier",
            QiKind::That => "that",
            QiKind::ThatHier => "that-hier",
            QiKind::Fd => "fd",
            QiKind::FdHier => "fd-hier",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn is_hierarchical(self) -> bool {
        matches!(self, QiKind::Hier | QiKind::ThatHier | QiKind::FdHier)
    }

    /// The tensor operator of the same family.
    pub fn tensor_kind(self) -> Self {
        match self {
            QiKind::Hier => QiKind::Tensor,
            QiKind::ThatHier => QiKind::That,
            QiKind::FdHier => QiKind::Fd,
            k => k,
        }
    }

    fn counted(self) -> Operator {
        match self.tensor_kind() {
            QiKind::Tensor => Operator::Hermite,
            _ => Operator::Collocation,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub function: String,
    pub degrees: Degrees,
    pub levels: usize,
    pub qi: QiKind,
    pub fd_order: Option<(usize, usize)>,
    pub eps_factor: f64,
    /// Cells of the level-0 grid per direction.
    pub base: (usize, usize),
    pub out: Option<PathBuf>,
}

fn bad(field: &str, message: impl Into<String>) -> QiError {
    QiError::Config { field: field.into(), message: message.into() }
}

fn parse_pair(field: &str, v: &str) -> QiResult<(usize, usize)> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad(field, format!("`{v}` is not a pair of integers")));
    match parts.as_slice() {
        [a] => Ok((num(a)?, num(a)?)),
        [a, b] => Ok((num(a)?, num(b)?)),
        _ => Err(bad(field, format!("`{v}` is not a pair of integers"))),
    }
}

impl ExperimentConfig {
    /// Builds a configuration from `key = value` settings; `function` is required.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> QiResult<Self> {
        let mut function = None;
        let mut cfg = ExperimentConfig {
            function: String::new(),
            degrees: Degrees::square(3)?,
            levels: 5,
            qi: QiKind::Hier,
            fd_order: None,
            eps_factor: 1.5,
            base: (8, 8),
            out: None,
        };
        for (k, v) in pairs {
            let (k, v) = (k.trim(), v.trim());
            match k {
                "function" => {
                    if builtin::<f64>(v).is_none() {
                        return Err(bad(k, format!("unknown function `{v}` (expected f1 or f2)")));
                    }
                    function = Some(v.to_string());
                }
                "degrees" => {
                    let (a, b) = parse_pair(k, v)?;
                    cfg.degrees = Degrees::new(a, b).map_err(|e| bad(k, e.to_string()))?;
                }
                "levels" => {
                    cfg.levels = v.parse().map_err(|_| bad(k, format!("`{v}` is not an integer")))?;
                    if cfg.levels == 0 || cfg.levels > 12 {
                        return Err(bad(k, "must be between 1 and 12"));
                    }
                }
                "qi" => {
                    cfg.qi = QiKind::parse(v).ok_or_else(|| {
                        bad(k, format!("unknown operator `{v}` (expected tensor, hier, that, that-hier, fd, fd-hier)"))
                    })?;
                }
                "fd-order" => cfg.fd_order = Some(parse_pair(k, v)?),
                "eps-factor" => {
                    cfg.eps_factor = v.parse().map_err(|_| bad(k, format!("`{v}` is not a number")))?;
                    if !(cfg.eps_factor > 0.0) {
                        return Err(bad(k, "must be positive"));
                    }
                }
                "base" => {
                    cfg.base = parse_pair(k, v)?;
                    if cfg.base.0 == 0 || cfg.base.1 == 0 {
                        return Err(bad(k, "must be positive"));
                    }
                }
                "out" => cfg.out = Some(PathBuf::from(v)),
                _ => return Err(bad(k, "unknown setting")),
            }
        }
        cfg.function = function.ok_or_else(|| bad("function", "missing (expected f1 or f2)"))?;
        let (k1, k2) = cfg.fd_orders();
        if k1 < cfg.degrees.d1 || k2 < cfg.degrees.d2 {
            return Err(bad("fd-order", "orders must be at least the degrees"));
        }
        Ok(cfg)
    }

    /// Parses a config file of `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> QiResult<Self> {
        let mut pairs = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| QiError::Parse { line: n + 1, message: format!("expected `key = value`, got `{line}`") })?;
            pairs.push((k, v));
        }
        Self::from_pairs(pairs)
    }

    pub fn fd_orders(&self) -> (usize, usize) {
        self.fd_order.unwrap_or((self.degrees.d1, self.degrees.d2))
    }

    pub fn base_grid(&self) -> QiResult<UniformGrid<f64>> {
        UniformGrid::new(Rect::new(-1.0, 1.0, -1.0, 1.0), self.base.0, self.base.1, 0)
    }

    pub fn test_function(&self) -> Box<dyn TestFunction<f64>> {
        builtin(&self.function).expect("validated function name")
    }

    /// File stem for artifacts, e.g. `f1_hier_d3`.
    pub fn stem(&self) -> String {
        let d = if self.degrees.d1 == self.degrees.d2 {
            format!("d{}", self.degrees.d1)
        } else {
            format!("d{}-{}", self.degrees.d1, self.degrees.d2)
        };
        format!("{}_{}_{}", self.function, self.qi.name(), d)
    }
}

/// One table row.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub m: usize,
    pub h_finest: f64,
    pub dim_tensor: usize,
    pub dim_hier: Option<usize>,
    pub errors: ErrorSet<f64>,
    pub evals: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub tensor: Vec<ErrorRow>,
    pub hier: Vec<ErrorRow>,
    pub epsilon: Option<f64>,
    pub trace: Vec<IterationRecord<f64>>,
    pub stop: Option<StopReason>,
    /// Mesh after every built approximation.
    pub meshes: Vec<HierarchicalMesh<f64>>,
}

/// Tensor approximation of the chosen family on one level grid, with the
/// number of function evaluations it issued.
pub fn build_tensor(
    kind: QiKind,
    grid: &UniformGrid<f64>,
    degrees: Degrees,
    f: &dyn TestFunction<f64>,
    fd_order: (usize, usize),
) -> QiResult<(TensorSpline<f64>, usize)> {
    let kind = kind.tensor_kind();
    let (spline, points) = match kind {
        QiKind::Tensor => {
            let p = Counting::new(HermiteOf(f));
            (tensor_qi_from(grid, degrees, &p)?, p.distinct_points())
        }
        QiKind::That => {
            let p = Counting::new(ValuesOf(f));
            (comparison_qi(grid, degrees, &p)?, p.distinct_points())
        }
        _ => {
            let p = fd_hermite_provider(Counting::new(ValuesOf(f)), *grid, degrees, fd_order)?;
            (tensor_qi_from(grid, degrees, &p)?, p.source.distinct_points())
        }
    };
    Ok((spline, evaluations_from_points(kind.counted(), points)))
}

/// Hierarchical approximation of the chosen family on a mesh.
pub fn build_hier(
    kind: QiKind,
    mesh: &HierarchicalMesh<f64>,
    degrees: Degrees,
    f: &dyn TestFunction<f64>,
    fd_order: (usize, usize),
) -> QiResult<(HierSpline<f64>, usize)> {
    let (spline, points) = match kind.tensor_kind() {
        QiKind::Tensor => {
            let p = Counting::new(HermiteOf(f));
            (hierarchical_qi(mesh, degrees, &p)?, p.distinct_points())
        }
        QiKind::That => {
            let p = Counting::new(ValuesOf(f));
            (comparison_hqi(mesh, degrees, &p)?, p.distinct_points())
        }
        _ => {
            let p = fd_hermite_provider(Counting::new(ValuesOf(f)), *mesh.base(), degrees, fd_order)?;
            (hierarchical_qi(mesh, degrees, &p)?, p.source.distinct_points())
        }
    };
    Ok((spline, evaluations_from_points(kind.counted(), points)))
}

fn tensor_dim(grid: &UniformGrid<f64>, d: Degrees) -> usize {
    (grid.n1() + d.d1) * (grid.n2() + d.d2)
}

pub fn run_experiment(config: &ExperimentConfig) -> QiResult<ExperimentReport> {
    let f = config.test_function();
    let base = config.base_grid()?;
    let deg = config.degrees;
    let fd = config.fd_orders();
    let mut tensor = Vec::new();
    let mut finest = None;
    for m in 1..=config.levels {
        let g = base.at_level(m - 1);
        let (s, evals) = build_tensor(config.qi, &g, deg, f.as_ref(), fd)?;
        tensor.push(ErrorRow {
            m,
            h_finest: g.hx(),
            dim_tensor: tensor_dim(&g, deg),
            dim_hier: None,
            errors: error_set(&s, f.as_ref())?,
            evals: Some(evals),
        });
        finest = Some(s);
    }
    let mut report = ExperimentReport {
        config: config.clone(),
        tensor,
        hier: Vec::new(),
        epsilon: None,
        trace: Vec::new(),
        stop: None,
        meshes: Vec::new(),
    };
    if !config.qi.is_hierarchical() {
        return Ok(report);
    }
    let mut rc = RefinementConfig::new(&base, config.levels, 0.0)?;
    let fv = |x: f64, y: f64| f.value(x, y);
    let eps = epsilon_from_tensor(finest.as_ref().unwrap(), &rc.points, fv, config.eps_factor)?;
    rc.epsilon = eps;
    report.epsilon = Some(eps);
    let evals = RefCell::new(Vec::new());
    let mut rows = Vec::new();
    let mut meshes = Vec::new();
    let result = adaptive_refine(
        HierarchicalMesh::from_domains(base, &[])?,
        &rc,
        |mesh| {
            let (s, n) = build_hier(config.qi, mesh, deg, f.as_ref(), fd)?;
            evals.borrow_mut().push(n);
            Ok(s)
        },
        fv,
        |rec, spline| {
            let g = base.at_level(rec.levels - 1);
            rows.push(ErrorRow {
                m: rec.levels,
                h_finest: g.hx(),
                dim_tensor: tensor_dim(&g, deg),
                dim_hier: Some(rec.dim),
                errors: error_set(spline, f.as_ref())?,
                evals: evals.borrow().last().copied(),
            });
            meshes.push(spline.mesh.clone());
            Ok(())
        },
    )?;
    report.hier = rows;
    report.trace = result.trace;
    report.stop = Some(result.stop);
    report.meshes = meshes;
    Ok(report)
}

pub const CSV_HEADER: &str = "M,h_finest,dim_tensor,dim_hier,err_sup,err_x,err_y,err_xy,evals";

/// Scientific notation with four significant digits, e.g. `3.050e-2`.
pub fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

pub fn rows_to_csv(rows: &[ErrorRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let opt = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
    w.write_record(CSV_HEADER.split(',')).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.m.to_string(),
            r.h_finest.to_string(),
            r.dim_tensor.to_string(),
            opt(r.dim_hier),
            sci(r.errors.sup),
            sci(r.errors.x),
            sci(r.errors.y),
            sci(r.errors.xy),
            opt(r.evals),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

/// Aligned plain-text rendering of tensor and hierarchical rows side by side.
pub fn render_text(report: &ExperimentReport) -> String {
    let c = &report.config;
    let mut s = String::new();
    let _ = writeln!(s, "{} {} degrees {} levels {}", c.function, c.qi.name(), c.degrees, c.levels);
    if let Some(eps) = report.epsilon {
        let _ = writeln!(s, "epsilon {}", sci(eps));
    }
    let _ = writeln!(
        s,
        "{:>2} {:>9} {:>7} {:>10} {:>10} {:>10} {:>10} {:>8} | {:>7} {:>10} {:>10} {:>10} {:>10} {:>8}",
        "M", "h", "dim V", "e", "e_x", "e_y", "e_xy", "evals", "dim S_H", "e_H", "e_H,x", "e_H,y", "e_H,xy", "evals"
    );
    let n = report.tensor.len().max(report.hier.len());
    for k in 0..n {
        let t = report.tensor.get(k);
        let h = report.hier.get(k);
        let errs = |r: Option<&ErrorRow>| match r {
            Some(r) => format!(
                "{:>10} {:>10} {:>10} {:>10} {:>8}",
                sci(r.errors.sup),
                sci(r.errors.x),
                sci(r.errors.y),
                sci(r.errors.xy),
                r.evals.map(|v| v.to_string()).unwrap_or_default()
            ),
            None => format!("{:>10} {:>10} {:>10} {:>10} {:>8}", "", "", "", "", ""),
        };
        let m = t.map(|r| r.m).or(h.map(|r| r.m)).unwrap_or(0);
        let hh = t.map(|r| format!("{}", r.h_finest)).unwrap_or_default();
        let dv = t.map(|r| r.dim_tensor.to_string()).unwrap_or_default();
        let ds = h.and_then(|r| r.dim_hier).map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{m:>2} {hh:>9} {dv:>7} {} | {ds:>7} {}", errs(t), errs(h));
    }
    if let Some(stop) = report.stop {
        let _ = writeln!(s, "stopped by {}", match stop {
            StopReason::Tolerance => "tolerance",
            StopReason::LevelLimit => "level limit",
        });
    }
    s
}

pub fn trace_to_csv(trace: &[IterationRecord<f64>]) -> String {
    let mut s = String::from("iteration,M,dim,max_delta,cells_split\n");
    for r in trace {
        let _ = writeln!(s, "{},{},{},{},{}", r.iteration, r.levels, r.dim, sci(r.max_delta), r.cells_split);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_rejected() {
        assert!(matches!(ExperimentConfig::parse(""), Err(QiError::Config { field, .. }) if field == "function"));
    }

    #[test]
    fn config_fields() {
        let c = ExperimentConfig::parse("function = f2\ndegrees = 2,3 # mixed\nqi = fd-hier\nfd-order=3\nlevels=3").unwrap();
        assert_eq!(c.degrees, Degrees::new(2, 3).unwrap());
        assert_eq!(c.fd_orders(), (3, 3));
        assert_eq!(c.stem(), "f2_fd-hier_d2-3");
        let e = ExperimentConfig::parse("function = f1\nqi = spline").unwrap_err();
        assert!(matches!(e, QiError::Config { field, .. } if field == "qi"));
        let e = ExperimentConfig::parse("function = f1\ndegrees = 3\nfd-order = 2").unwrap_err();
        assert!(matches!(e, QiError::Config { field, .. } if field == "fd-order"));
        assert!(matches!(ExperimentConfig::parse("function f1"), Err(QiError::Parse { line: 1, .. })));
    }

    #[test]
    fn sci_format() {
        assert_eq!(sci(0.0305), "3.050e-2");
        assert_eq!(sci(7.401), "7.401e0");
    }
}
