//! Implicit-explicit time stepping for the coupled cell-by-cell system.
//!
//! Each step advances the recovery variables and interface currents
//! explicitly, then solves the composite linear system implicitly with
//! preconditioned conjugate gradients. The system matrix is constant in
//! time, so meshing, assembly, and the preconditioner setup happen once per
//! run.

use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{assemble_rhs, assemble_system, CompositeSystem};
use crate::error::Result;
use crate::fp;
use crate::ionic::{compute_jumps, membrane_step, IonicParams, MembraneState};
use crate::linalg::{pcg, LinearOp, PcgOptions};
use crate::mesh::{
    build_geometry, classify_dofs, DirichletSpec, DofPartition, EdgeKind, GeometryConfig,
    InterfaceIndex, MeshTopology, SubdomainKind,
};
use crate::schwarz::{CoarseMode, PrecondKind, SchwarzPreconditioner};

/// A membrane edge counts as activated when its mean jump first reaches
/// this potential.
pub const ACTIVATION_THRESHOLD_MV: f64 = -20.0;

/// External stimulus: a square current pulse on the membranes of the
/// `span_cells` x `span_cells` cell block in the lower-left corner.
#[derive(Debug, Clone)]
pub struct StimulusConfig {
    /// Depolarizing current amplitude (per capacitance; an amplitude of 50
    /// raises the jump by about 50 mV over 1 ms).
    pub amplitude: f64,
    /// Pulse length in ms from t = 0.
    pub duration: f64,
    pub span_cells: usize,
}

impl Default for StimulusConfig {
    fn default() -> Self {
        StimulusConfig { amplitude: 50.0, duration: 1.0, span_cells: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// Ground the left outer frame edge.
    DirichletLeft,
    /// Pure Neumann problem: deflate the constant kernel inside the solver
    /// and re-center the extracellular average after every step.
    ZeroMean,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub geometry: GeometryConfig,
    /// Step size in ms.
    pub tau: f64,
    /// Simulated time span in ms.
    pub t_end: f64,
    /// Interface capacitance entering the jump mass.
    pub c_m: f64,
    /// Relative solver tolerance (preconditioned residual).
    pub tol: f64,
    pub max_iter: usize,
    pub precond: PrecondKind,
    pub coarse: CoarseMode,
    pub boundary: BoundaryMode,
    pub ionic: IonicParams,
    pub stimulus: StimulusConfig,
    /// Starting potential of every cell; the frame starts at zero.
    pub initial_v: f64,
    /// Record a full field snapshot every this many steps (0 = never).
    pub snapshot_every: usize,
}

impl SimConfig {
    pub fn new(geometry: GeometryConfig) -> Self {
        SimConfig {
            geometry,
            tau: 0.05,
            t_end: 5.0,
            c_m: 1e-4,
            tol: 1e-6,
            max_iter: 20_000,
            precond: PrecondKind::Gdsw,
            coarse: CoarseMode::VertexAndEdge,
            boundary: BoundaryMode::DirichletLeft,
            ionic: IonicParams::default(),
            stimulus: StimulusConfig::default(),
            initial_v: -85.0,
            snapshot_every: 0,
        }
    }

    pub fn n_steps(&self) -> usize {
        fp::round(self.t_end / self.tau) as usize
    }
}

/// Solver metrics of one implicit step.
#[derive(Debug, Clone, Copy)]
pub struct StepRecord {
    pub step: usize,
    pub time: f64,
    pub iterations: usize,
    pub rel_residual: f64,
    pub k2: f64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub steps: Vec<StepRecord>,
    pub final_u: Vec<f64>,
    pub final_membrane: MembraneState,
    /// `(step, full field)` pairs when snapshots were requested.
    pub snapshots: Vec<(usize, Vec<f64>)>,
    /// First time the mean jump of each edge reached the activation
    /// threshold; `None` for gap edges and never-activated membranes.
    pub activation_ms: Vec<Option<f64>>,
}

impl RunResult {
    pub fn final_k2(&self) -> f64 {
        self.steps.last().map_or(1.0, |s| s.k2)
    }

    pub fn final_iterations(&self) -> usize {
        self.steps.last().map_or(0, |s| s.iterations)
    }
}

/// A fully set-up problem: mesh, partition, operators, preconditioner.
pub struct Simulation {
    pub config: SimConfig,
    pub topo: MeshTopology,
    pub part: DofPartition,
    pub index: InterfaceIndex,
    pub sys: CompositeSystem,
    pub precond: Option<SchwarzPreconditioner>,
    /// Ionic parameters with current scales resolved against `c_m`.
    pub params: IonicParams,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        Self::with_conductivities(config, None, None)
    }

    /// Builds the problem with optional conductivity overrides (frame and
    /// per-cell, in cell id order).
    pub fn with_conductivities(
        config: SimConfig,
        extracellular: Option<f64>,
        cells: Option<&[f64]>,
    ) -> Result<Self> {
        let mut topo = build_geometry(&config.geometry)?;
        if let Some(s) = extracellular {
            topo.set_extracellular_sigma(s);
        }
        if let Some(cs) = cells {
            topo.set_cell_sigmas(cs)?;
        }
        let spec = match config.boundary {
            BoundaryMode::DirichletLeft => DirichletSpec::LeftOuterEdge,
            BoundaryMode::ZeroMean => DirichletSpec::None,
        };
        let part = classify_dofs(&topo, spec);
        let allow_singular = config.boundary == BoundaryMode::ZeroMean;
        let sys = assemble_system(&topo, &part, config.tau, config.c_m, allow_singular)?;
        let index = InterfaceIndex::build(&topo);
        let precond =
            SchwarzPreconditioner::build(&topo, &part, &sys, config.precond, config.coarse)?;
        let params = config.ionic.clone().with_capacitance(config.c_m);
        Ok(Simulation { config, topo, part, index, sys, precond, params })
    }

    /// Initial field: frame at zero, every cell at `initial_v`, so membrane
    /// jumps start at the resting potential and gap jumps at zero.
    pub fn initial_state(&self) -> Vec<f64> {
        let mut u = vec![0.0; self.topo.n_dofs];
        for s in &self.topo.subdomains[1..] {
            for d in s.dof_start..s.dof_start + s.n_dofs {
                u[d] = self.config.initial_v;
            }
        }
        u
    }

    /// Slots receiving the stimulus: membranes of cells inside the
    /// stimulated corner block.
    fn stimulus_slots(&self) -> Vec<usize> {
        let span = self.config.stimulus.span_cells;
        let hit = |sub: usize| match self.topo.subdomains[sub].kind {
            SubdomainKind::Cell { cx, cy } => cx < span && cy < span,
            SubdomainKind::Extracellular => false,
        };
        let mut slots = Vec::new();
        for (ei, e) in self.topo.edges.iter().enumerate() {
            if e.kind == EdgeKind::Membrane && hit(e.sub_i) {
                let (s, t) = self.index.edge_slots[ei];
                slots.extend(s..t);
            }
        }
        slots
    }

    pub fn run(&self) -> Result<RunResult> {
        let cfg = &self.config;
        let n_steps = cfg.n_steps();
        let zero_mean = cfg.boundary == BoundaryMode::ZeroMean;
        let opts = PcgOptions {
            tol: cfg.tol,
            max_iter: cfg.max_iter,
            deflate: zero_mean.then(|| vec![1.0; self.sys.n_free()]),
        };
        let precond = self.precond.as_ref().map(|p| p as &dyn LinearOp);
        let stim_slots = self.stimulus_slots();
        let stim_value = cfg.stimulus.amplitude * cfg.c_m;

        let mut u = self.initial_state();
        let mut mem = MembraneState::rest(&self.index, &self.params);
        mem.v = compute_jumps(&self.index, &u);
        let mut stim = vec![0.0; self.index.n_slots()];
        let mut steps = Vec::with_capacity(n_steps);
        let mut snapshots = Vec::new();
        let mut activation = vec![None; self.topo.edges.len()];
        for k in 0..n_steps {
            let t = k as f64 * cfg.tau;
            stim.iter_mut().for_each(|v| *v = 0.0);
            if t < cfg.stimulus.duration {
                for &s in &stim_slots {
                    stim[s] = stim_value;
                }
            }
            let f = membrane_step(&mut mem, &self.index, &self.params, cfg.tau, &stim);
            let rhs = assemble_rhs(&self.topo, &self.index, &self.sys.jump_mass, cfg.tau, &u, &f);
            let b = self.sys.map.restrict(&rhs);
            let (x, stats) = pcg(&self.sys.matrix, &b, precond, &opts)?;
            self.sys.map.expand_into(&x, &mut u);
            if zero_mean {
                let frame = &self.topo.subdomains[0];
                let mean: f64 =
                    u[..frame.n_dofs].iter().sum::<f64>() / frame.n_dofs as f64;
                u.iter_mut().for_each(|v| *v -= mean);
            }
            mem.v = compute_jumps(&self.index, &u);
            let time = (k + 1) as f64 * cfg.tau;
            for (ei, e) in self.topo.edges.iter().enumerate() {
                if e.kind == EdgeKind::Membrane && activation[ei].is_none() {
                    let (s, t) = self.index.edge_slots[ei];
                    let mean: f64 = mem.v[s..t].iter().sum::<f64>() / (t - s) as f64;
                    if mean >= ACTIVATION_THRESHOLD_MV {
                        activation[ei] = Some(time);
                    }
                }
            }
            steps.push(StepRecord {
                step: k + 1,
                time,
                iterations: stats.iterations,
                rel_residual: stats.rel_residuals.last().copied().unwrap_or(0.0),
                k2: stats.k2_estimate,
            });
            if cfg.snapshot_every > 0 && (k + 1) % cfg.snapshot_every == 0 {
                snapshots.push((k + 1, u.clone()));
            }
        }
        Ok(RunResult {
            steps,
            final_u: u,
            final_membrane: mem,
            snapshots,
            activation_ms: activation,
        })
    }
}
