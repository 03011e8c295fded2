//! Table and field emitters: sweep CSVs, per-step solver logs, field
//! snapshots, activation maps, conductivity maps, and a Matrix Market dump
//! of the assembled system.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use emi_core::linalg::{LinearOp, SparseSym};
use emi_core::mesh::{EdgeKind, MeshTopology};
use emi_core::sim::StepRecord;

use crate::experiments::SweepRow;

/// Quotes a CSV field when it contains separators or quotes.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_text_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_sweep_csv(path: &Path, header: &[String], rows: &[SweepRow]) -> Result<()> {
    let mut text = String::new();
    for line in header {
        let _ = writeln!(text, "{line}");
    }
    text.push_str("case,preconditioner,k2,iterations,wall_time_s,error\n");
    for r in rows {
        let _ = writeln!(
            text,
            "{},{},{:.6e},{},{:.3},{}",
            csv_field(&r.case),
            r.precond,
            r.k2,
            r.iterations,
            r.wall_s,
            csv_field(r.error.as_deref().unwrap_or(""))
        );
    }
    write_text_file(path, &text)
}

pub fn write_steps_csv(path: &Path, header: &[String], steps: &[StepRecord]) -> Result<()> {
    let mut text = String::new();
    for line in header {
        let _ = writeln!(text, "{line}");
    }
    text.push_str("step,time_ms,iterations,rel_residual,k2\n");
    for s in steps {
        let _ = writeln!(
            text,
            "{},{},{},{:.6e},{:.6e}",
            s.step, s.time, s.iterations, s.rel_residual, s.k2
        );
    }
    write_text_file(path, &text)
}

/// Full field in DOF order with physical coordinates; duplicated interface
/// nodes appear once per owning compartment.
pub fn write_field_csv(path: &Path, topo: &MeshTopology, u: &[f64]) -> Result<()> {
    let h = topo.config.h;
    let mut text = String::from("x,y,subdomain,u\n");
    for d in 0..topo.n_dofs {
        let (gx, gy) = topo.dof_grid(d);
        let _ = writeln!(
            text,
            "{},{},{},{:.9e}",
            gx as f64 * h,
            gy as f64 * h,
            topo.dof_subdomain(d),
            u[d]
        );
    }
    write_text_file(path, &text)
}

pub fn write_activation_csv(
    path: &Path,
    topo: &MeshTopology,
    activation: &[Option<f64>],
) -> Result<()> {
    let mut text = String::from("edge,kind,sub_i,sub_j,activation_ms\n");
    for (ei, e) in topo.edges.iter().enumerate() {
        let kind = match e.kind {
            EdgeKind::Membrane => "membrane",
            EdgeKind::Gap => "gap",
        };
        let time = activation[ei].map_or(String::new(), |t| format!("{t}"));
        let _ = writeln!(text, "{ei},{kind},{},{},{time}", e.sub_i, e.sub_j);
    }
    write_text_file(path, &text)
}

pub fn write_sigma_map_csv(path: &Path, nx: usize, sigmas: &[f64]) -> Result<()> {
    let mut text = String::from("cell,cx,cy,sigma\n");
    for (i, s) in sigmas.iter().enumerate() {
        let _ = writeln!(text, "{},{},{},{:.9e}", i + 1, i % nx, i / nx, s);
    }
    write_text_file(path, &text)
}

/// Coordinate-format symmetric dump (lower triangle, 1-based indices).
pub fn write_matrix_market(path: &Path, m: &SparseSym) -> Result<()> {
    let lower: Vec<(usize, usize, f64)> = m.entries().filter(|&(i, j, _)| i >= j).collect();
    let mut text = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
    let n = m.dim();
    let _ = writeln!(text, "{n} {n} {}", lower.len());
    for (i, j, v) in lower {
        let _ = writeln!(text, "{} {} {:.16e}", i + 1, j + 1, v);
    }
    write_text_file(path, &text)
}
