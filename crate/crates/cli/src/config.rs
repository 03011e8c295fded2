//! TOML run configuration and its resolution into solver inputs.
//!
//! Every section and field is optional; omitted values fall back to the
//! library defaults, so an empty file (or no file at all) describes the
//! standard 4x4 run.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use emi_core::ionic::IonicParams;
use emi_core::mesh::{GeometryConfig, DEFAULT_SIGMA};
use emi_core::schwarz::{CoarseMode, PrecondKind};
use emi_core::sim::{BoundaryMode, SimConfig, StimulusConfig};

use crate::sigma::SigmaDistribution;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub geometry: GeometrySection,
    pub time: TimeSection,
    pub solver: SolverSection,
    pub membrane: MembraneSection,
    pub stimulus: StimulusSection,
    pub sigma: SigmaSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    pub cells_x: usize,
    pub cells_y: usize,
    pub elems_short: usize,
    /// Defaults to six times `elems_short` (cells are 24 um x 4 um).
    pub elems_long: Option<usize>,
    /// Frame thickness in elements; defaults to `elems_short`.
    pub frame_elems: Option<usize>,
}

impl Default for GeometrySection {
    fn default() -> Self {
        GeometrySection {
            cells_x: 4,
            cells_y: 4,
            elems_short: 4,
            elems_long: None,
            frame_elems: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    pub tau: f64,
    pub t_end: f64,
}

impl Default for TimeSection {
    fn default() -> Self {
        TimeSection { tau: 0.05, t_end: 5.0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub tol: f64,
    pub max_iter: usize,
    /// `gdsw`, `as`, or `none`.
    pub preconditioner: String,
    /// `vertex_and_edge` or `vertex_only`.
    pub coarse: String,
    /// `dirichlet_left` or `zero_mean`.
    pub boundary: String,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            tol: 1e-6,
            max_iter: 20_000,
            preconditioner: "gdsw".into(),
            coarse: "vertex_and_edge".into(),
            boundary: "dirichlet_left".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MembraneSection {
    pub c_m: f64,
    pub kappa_g: f64,
    pub time_scale: f64,
    pub k: f64,
    pub a: f64,
    pub eps0: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub v_rest: f64,
    pub v_amp: f64,
}

impl Default for MembraneSection {
    fn default() -> Self {
        let p = IonicParams::default();
        MembraneSection {
            c_m: 1e-4,
            kappa_g: p.kappa_g,
            time_scale: p.time_scale,
            k: p.k,
            a: p.a,
            eps0: p.eps0,
            mu1: p.mu1,
            mu2: p.mu2,
            v_rest: p.v_rest,
            v_amp: p.v_amp,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StimulusSection {
    pub amplitude: f64,
    pub duration: f64,
    pub span_cells: usize,
}

impl Default for StimulusSection {
    fn default() -> Self {
        let s = StimulusConfig::default();
        StimulusSection {
            amplitude: s.amplitude,
            duration: s.duration,
            span_cells: s.span_cells,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SigmaSection {
    /// Base cell conductivity.
    pub sigma: f64,
    /// Frame conductivity; defaults to `sigma`.
    pub sigma_e: Option<f64>,
    /// `normal`, `checkboard`, `capsule`, or `random`.
    pub distribution: String,
    /// Contrast factor applied by the non-normal distributions.
    pub alpha: f64,
    pub seed: u64,
}

impl Default for SigmaSection {
    fn default() -> Self {
        SigmaSection {
            sigma: DEFAULT_SIGMA,
            sigma_e: None,
            distribution: "normal".into(),
            alpha: 1.0,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
    pub snapshot_every: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: "out".into(), snapshot_every: 0 }
    }
}

pub fn parse_precond(s: &str) -> Result<PrecondKind> {
    match s.to_ascii_lowercase().as_str() {
        "gdsw" => Ok(PrecondKind::Gdsw),
        "as" | "one_level" => Ok(PrecondKind::AdditiveSchwarz),
        "none" | "cg" => Ok(PrecondKind::None),
        other => bail!("unknown preconditioner {other:?} (expected gdsw, as, or none)"),
    }
}

pub fn parse_coarse(s: &str) -> Result<CoarseMode> {
    match s.to_ascii_lowercase().as_str() {
        "vertex_and_edge" | "vertex-edge" | "vertex_edge" => Ok(CoarseMode::VertexAndEdge),
        "vertex_only" | "vertex" => Ok(CoarseMode::VertexOnly),
        other => bail!("unknown coarse mode {other:?} (expected vertex_and_edge or vertex_only)"),
    }
}

pub fn parse_boundary(s: &str) -> Result<BoundaryMode> {
    match s.to_ascii_lowercase().as_str() {
        "dirichlet_left" => Ok(BoundaryMode::DirichletLeft),
        "zero_mean" => Ok(BoundaryMode::ZeroMean),
        other => bail!("unknown boundary mode {other:?} (expected dirichlet_left or zero_mean)"),
    }
}

pub fn precond_label(kind: PrecondKind) -> &'static str {
    match kind {
        PrecondKind::Gdsw => "gdsw",
        PrecondKind::AdditiveSchwarz => "as",
        PrecondKind::None => "none",
    }
}

pub fn coarse_label(mode: CoarseMode) -> &'static str {
    match mode {
        CoarseMode::VertexAndEdge => "vertex_and_edge",
        CoarseMode::VertexOnly => "vertex_only",
    }
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Loads `path` when given, otherwise the built-in defaults.
    pub fn load_or_default(path: Option<&Path>) -> Result<FileConfig> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(FileConfig::default()),
        }
    }

    pub fn geometry(&self) -> GeometryConfig {
        let g = &self.geometry;
        let mut geo = GeometryConfig::cells(g.cells_x, g.cells_y, g.elems_short);
        if let Some(el) = g.elems_long {
            geo.elems_long = el;
        }
        if let Some(f) = g.frame_elems {
            geo.frame_elems = f;
        }
        geo
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let mut c = SimConfig::new(self.geometry());
        c.tau = self.time.tau;
        c.t_end = self.time.t_end;
        c.c_m = self.membrane.c_m;
        c.tol = self.solver.tol;
        c.max_iter = self.solver.max_iter;
        c.precond = parse_precond(&self.solver.preconditioner)?;
        c.coarse = parse_coarse(&self.solver.coarse)?;
        c.boundary = parse_boundary(&self.solver.boundary)?;
        let m = &self.membrane;
        c.ionic = IonicParams {
            k: m.k,
            a: m.a,
            eps0: m.eps0,
            mu1: m.mu1,
            mu2: m.mu2,
            v_rest: m.v_rest,
            v_amp: m.v_amp,
            time_scale: m.time_scale,
            kappa_g: m.kappa_g,
            ..IonicParams::default()
        };
        c.stimulus = StimulusConfig {
            amplitude: self.stimulus.amplitude,
            duration: self.stimulus.duration,
            span_cells: self.stimulus.span_cells,
        };
        c.initial_v = m.v_rest;
        c.snapshot_every = self.output.snapshot_every;
        Ok(c)
    }

    pub fn sigma_distribution(&self) -> Result<SigmaDistribution> {
        SigmaDistribution::parse(&self.sigma.distribution)
    }

    pub fn extracellular_sigma(&self) -> f64 {
        self.sigma.sigma_e.unwrap_or(self.sigma.sigma)
    }

    /// Resolved-settings comment block prepended to every emitted CSV.
    pub fn header_lines(&self, sim: &SimConfig) -> Vec<String> {
        let g = &sim.geometry;
        vec![
            format!(
                "# cells = {}x{}, elems = {}x{}, frame = {}, h = {}",
                g.n_cells_x, g.n_cells_y, g.elems_long, g.elems_short, g.frame_elems, g.h
            ),
            format!(
                "# tau = {}, t_end = {}, steps = {}",
                sim.tau,
                sim.t_end,
                sim.n_steps()
            ),
            format!(
                "# c_m = {}, kappa_g = {}, time_scale = {}",
                sim.c_m, sim.ionic.kappa_g, sim.ionic.time_scale
            ),
            format!(
                "# preconditioner = {}, coarse = {}, tol = {}, max_iter = {}",
                precond_label(sim.precond),
                coarse_label(sim.coarse),
                sim.tol,
                sim.max_iter
            ),
            format!(
                "# sigma = {}, sigma_e = {}, distribution = {}, alpha = {}, seed = {}",
                self.sigma.sigma,
                self.extracellular_sigma(),
                self.sigma.distribution,
                self.sigma.alpha,
                self.sigma.seed
            ),
            format!(
                "# stimulus: amplitude = {}, duration = {} ms, span_cells = {}",
                sim.stimulus.amplitude, sim.stimulus.duration, sim.stimulus.span_cells
            ),
        ]
    }
}
