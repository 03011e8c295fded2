//! Parameter sweeps reproducing the solver-comparison tables: weak
//! scalability over the cell grid, optimality over cells-per-subdomain,
//! step-size dependence, and conductivity heterogeneity.

use std::time::Instant;

use anyhow::Result;

use emi_core::mesh::GeometryConfig;
use emi_core::schwarz::PrecondKind;
use emi_core::sim::{SimConfig, Simulation};

use crate::config::{precond_label, FileConfig};
use crate::sigma::{cell_sigmas, SigmaDistribution};

pub const SCALABILITY_GRIDS: &[usize] = &[2, 4, 8, 12, 16];
pub const OPTIMALITY_SHORT_ELEMS: &[usize] = &[2, 3, 4, 5, 6];
pub const TAU_VALUES: &[f64] = &[0.005, 0.01, 0.02, 0.05, 0.1];
pub const ROBUSTNESS_ALPHAS: &[f64] = &[1.0, 1e-1, 1e-2, 1e-3, 1e-4];
/// Heterogeneity runs use an 8x8 grid of 48x8-element cells.
pub const ROBUSTNESS_GRID: usize = 8;
pub const ROBUSTNESS_SHORT_ELEMS: usize = 8;

pub const ALL_PRECONDS: &[PrecondKind] =
    &[PrecondKind::Gdsw, PrecondKind::AdditiveSchwarz, PrecondKind::None];

/// Default per-case step cap for sweeps; `--full` lifts it. The system
/// matrix is constant in time, so per-step solver metrics settle early and
/// a capped run reports the same trends as the full horizon.
pub const DESK_STEP_CAP: usize = 25;

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub case: String,
    pub precond: &'static str,
    pub k2: f64,
    pub iterations: usize,
    pub wall_s: f64,
    pub error: Option<String>,
}

#[derive(Debug, Default)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub failed: usize,
}

impl SweepOutcome {
    fn push(&mut self, row: SweepRow) {
        if row.error.is_some() {
            self.failed += 1;
        }
        self.rows.push(row);
    }
}

#[derive(Debug, Default)]
pub struct RobustnessOutcome {
    pub sweep: SweepOutcome,
    /// One per-cell conductivity map per case, keyed by the case label.
    pub sigma_maps: Vec<(String, Vec<f64>)>,
}

fn cap_steps(cfg: &mut SimConfig, cap: Option<usize>) {
    if let Some(cap) = cap {
        let n = cfg.n_steps().min(cap.max(1));
        cfg.t_end = cfg.tau * n as f64;
    }
}

fn run_case(case: &str, cfg: SimConfig, ext: f64, cells: &[f64]) -> SweepRow {
    let precond = precond_label(cfg.precond);
    let start = Instant::now();
    let outcome =
        Simulation::with_conductivities(cfg, Some(ext), Some(cells)).and_then(|s| s.run());
    let wall_s = start.elapsed().as_secs_f64();
    match outcome {
        Ok(r) => SweepRow {
            case: case.into(),
            precond,
            k2: r.final_k2(),
            iterations: r.final_iterations(),
            wall_s,
            error: None,
        },
        Err(e) => SweepRow {
            case: case.into(),
            precond,
            k2: f64::NAN,
            iterations: 0,
            wall_s,
            error: Some(e.to_string()),
        },
    }
}

/// Growing cell grid at fixed cell resolution, all three solver variants.
pub fn scalability(
    file: &FileConfig,
    max_cells: usize,
    step_cap: Option<usize>,
) -> Result<SweepOutcome> {
    let dist = file.sigma_distribution()?;
    let s = &file.sigma;
    let mut out = SweepOutcome::default();
    for &n in SCALABILITY_GRIDS.iter().filter(|&&g| g <= max_cells) {
        let cells = cell_sigmas(dist, n, n, s.sigma, s.alpha, s.seed)?;
        for &p in ALL_PRECONDS {
            let mut cfg = file.sim_config()?;
            cfg.geometry.n_cells_x = n;
            cfg.geometry.n_cells_y = n;
            cfg.precond = p;
            cfg.snapshot_every = 0;
            cap_steps(&mut cfg, step_cap);
            out.push(run_case(
                &format!("{n}x{n}"),
                cfg,
                file.extracellular_sigma(),
                &cells,
            ));
        }
    }
    Ok(out)
}

/// Fixed 4x4 grid with growing cells-per-subdomain; the case label is the
/// subdomain-to-mesh size ratio along the long axis.
pub fn optimality(file: &FileConfig, step_cap: Option<usize>) -> Result<SweepOutcome> {
    let dist = file.sigma_distribution()?;
    let s = &file.sigma;
    let cells = cell_sigmas(dist, 4, 4, s.sigma, s.alpha, s.seed)?;
    let mut out = SweepOutcome::default();
    for &es in OPTIMALITY_SHORT_ELEMS {
        for &p in ALL_PRECONDS {
            let mut cfg = file.sim_config()?;
            cfg.geometry = GeometryConfig::cells(4, 4, es);
            cfg.precond = p;
            cfg.snapshot_every = 0;
            cap_steps(&mut cfg, step_cap);
            out.push(run_case(
                &format!("H/h={}", 6 * es),
                cfg,
                file.extracellular_sigma(),
                &cells,
            ));
        }
    }
    Ok(out)
}

/// Step-size sweep on the 8x8 grid at the configured cell resolution.
pub fn tau_sweep(file: &FileConfig, step_cap: Option<usize>) -> Result<SweepOutcome> {
    let dist = file.sigma_distribution()?;
    let s = &file.sigma;
    let cells = cell_sigmas(dist, 8, 8, s.sigma, s.alpha, s.seed)?;
    let mut out = SweepOutcome::default();
    for &tau in TAU_VALUES {
        for &p in ALL_PRECONDS {
            let mut cfg = file.sim_config()?;
            cfg.geometry.n_cells_x = 8;
            cfg.geometry.n_cells_y = 8;
            cfg.tau = tau;
            cfg.precond = p;
            cfg.snapshot_every = 0;
            cap_steps(&mut cfg, step_cap);
            out.push(run_case(
                &format!("tau={tau}"),
                cfg,
                file.extracellular_sigma(),
                &cells,
            ));
        }
    }
    Ok(out)
}

/// The `(distribution, alpha)` pairs the heterogeneity sweep visits: the
/// homogeneous layout once, the contrast layouts over the full alpha range,
/// and the jittered layout only where alpha actually scales it away from
/// the homogeneous base.
pub fn robustness_cases() -> Vec<(SigmaDistribution, f64)> {
    let mut cases = Vec::new();
    for dist in [
        SigmaDistribution::Normal,
        SigmaDistribution::Checkboard,
        SigmaDistribution::Capsule,
        SigmaDistribution::Random,
    ] {
        for &alpha in ROBUSTNESS_ALPHAS {
            match dist {
                SigmaDistribution::Normal if alpha != 1.0 => continue,
                SigmaDistribution::Random if alpha == 1.0 => continue,
                _ => cases.push((dist, alpha)),
            }
        }
    }
    cases
}

/// Conductivity heterogeneity sweep; two-level solver only unless
/// `all_preconds` is set.
pub fn robustness(
    file: &FileConfig,
    step_cap: Option<usize>,
    all_preconds: bool,
) -> Result<RobustnessOutcome> {
    let s = &file.sigma;
    let n = ROBUSTNESS_GRID;
    let preconds: &[PrecondKind] = if all_preconds {
        ALL_PRECONDS
    } else {
        &[PrecondKind::Gdsw]
    };
    let mut out = RobustnessOutcome::default();
    for (dist, alpha) in robustness_cases() {
        let case = format!("{}:alpha={alpha}", dist.label());
        let cells = cell_sigmas(dist, n, n, s.sigma, alpha, s.seed)?;
        for &p in preconds {
            let mut cfg = file.sim_config()?;
            cfg.geometry = GeometryConfig::cells(n, n, ROBUSTNESS_SHORT_ELEMS);
            cfg.precond = p;
            cfg.snapshot_every = 0;
            cap_steps(&mut cfg, step_cap);
            out.sweep
                .push(run_case(&case, cfg, file.extracellular_sigma(), &cells));
        }
        out.sigma_maps.push((case, cells));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_file() -> FileConfig {
        let mut f = FileConfig::default();
        f.geometry.elems_short = 1;
        f.geometry.elems_long = None;
        f.geometry.frame_elems = None;
        f
    }

    #[test]
    fn scalability_enumerates_grids_and_preconds() {
        let out = scalability(&tiny_file(), 4, Some(2)).unwrap();
        assert_eq!(out.failed, 0);
        let cases: Vec<&str> = out.rows.iter().map(|r| r.case.as_str()).collect();
        assert_eq!(cases, ["2x2", "2x2", "2x2", "4x4", "4x4", "4x4"]);
        let preconds: Vec<&str> = out.rows[..3].iter().map(|r| r.precond).collect();
        assert_eq!(preconds, ["gdsw", "as", "none"]);
        for r in &out.rows {
            assert!(r.k2.is_finite() && r.k2 >= 1.0, "{}: k2 {}", r.case, r.k2);
            assert!(r.iterations > 0);
        }
    }

    #[test]
    fn step_cap_shortens_the_horizon() {
        let mut cfg = FileConfig::default().sim_config().unwrap();
        assert_eq!(cfg.n_steps(), 100);
        cap_steps(&mut cfg, Some(10));
        assert_eq!(cfg.n_steps(), 10);
        cap_steps(&mut cfg, Some(500));
        assert_eq!(cfg.n_steps(), 10); // never extends
        cap_steps(&mut cfg, None);
        assert_eq!(cfg.n_steps(), 10);
    }

    #[test]
    fn robustness_case_list_applies_the_skips() {
        let cases = robustness_cases();
        assert_eq!(cases.len(), 1 + 5 + 5 + 4);
        assert_eq!(
            cases
                .iter()
                .filter(|(d, _)| *d == SigmaDistribution::Normal)
                .count(),
            1
        );
        assert!(cases
            .iter()
            .all(|(d, a)| *d != SigmaDistribution::Random || *a != 1.0));
    }

    #[test]
    fn failed_cases_are_reported_not_fatal() {
        let mut f = tiny_file();
        f.solver.max_iter = 2; // force MaxIterations
        let out = scalability(&f, 2, Some(1)).unwrap();
        assert_eq!(out.rows.len(), 3);
        assert!(out.failed > 0);
        let bad = out.rows.iter().find(|r| r.error.is_some()).unwrap();
        assert!(bad.k2.is_nan());
    }
}
