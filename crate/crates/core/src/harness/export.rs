//! Mesh and table files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{QiError, QiResult};
use crate::harness::experiment::{render_text, rows_to_csv, trace_to_csv, ExperimentReport};
use crate::mesh::HierarchicalMesh;
use crate::scalar::Scalar;

fn io_err(path: &Path, e: std::io::Error) -> QiError {
    QiError::Io { path: path.display().to_string(), message: e.to_string() }
}

pub fn write_file(path: &Path, contents: &str) -> QiResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

pub fn read_file(path: &Path) -> QiResult<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

/// SVG 1.1 drawing of every active cell; coarser cells get heavier strokes.
pub fn mesh_svg<T: Scalar>(mesh: &HierarchicalMesh<T>) -> String {
    let d = mesh.domain();
    let (w, h) = (d.width().as_f64(), d.height().as_f64());
    let base = w.max(h) / 200.0;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="600" height="{}" viewBox="{} {} {} {}">"#,
        (600.0 * h / w).round(),
        d.x0.as_f64(),
        -d.y1.as_f64(),
        w,
        h
    );
    // flip y so the drawing has the usual orientation
    let _ = writeln!(s, r#"<g transform="scale(1,-1)" fill="none" stroke="black">"#);
    for c in mesh.all_active_cells() {
        let r = mesh.cell_rect(c);
        let sw = base / (1u64 << c.level) as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{}" height="{}" stroke-width="{}" data-level="{}"/>"#,
            r.x0.as_f64(),
            r.y0.as_f64(),
            r.width().as_f64(),
            r.height().as_f64(),
            sw,
            c.level
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

pub fn export_mesh_svg<T: Scalar>(mesh: &HierarchicalMesh<T>, path: &Path) -> QiResult<()> {
    write_file(path, &mesh_svg(mesh))
}

pub fn export_mesh_text<T: Scalar>(mesh: &HierarchicalMesh<T>, path: &Path) -> QiResult<()> {
    write_file(path, &mesh.to_text())
}

pub fn import_mesh_text(path: &Path) -> QiResult<HierarchicalMesh<f64>> {
    HierarchicalMesh::from_text(&read_file(path)?)
}

/// Writes tables, trace and final mesh of a run into `dir`; returns the files written.
pub fn write_artifacts(report: &ExperimentReport, dir: &Path) -> QiResult<Vec<PathBuf>> {
    let stem = report.config.stem();
    let mut out = Vec::new();
    let mut put = |name: String, text: String| -> QiResult<()> {
        let p = dir.join(name);
        write_file(&p, &text)?;
        out.push(p);
        Ok(())
    };
    put(format!("{stem}_tensor.csv"), rows_to_csv(&report.tensor))?;
    put(format!("{stem}.txt"), render_text(report))?;
    if !report.hier.is_empty() {
        put(format!("{stem}_hier.csv"), rows_to_csv(&report.hier))?;
        put(format!("{stem}_trace.csv"), trace_to_csv(&report.trace))?;
    }
    if let Some(mesh) = report.meshes.last() {
        put(format!("{stem}_mesh.txt"), mesh.to_text())?;
        put(format!("{stem}_mesh.svg"), mesh_svg(mesh))?;
    }
    Ok(out)
}
