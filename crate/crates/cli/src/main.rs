//! Command-line driver: single runs, the four experiment sweeps, and plot
//! script emission.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand};

use emi_cli::config::FileConfig;
use emi_cli::experiments::{self, SweepOutcome, SweepRow, DESK_STEP_CAP};
use emi_cli::output;
use emi_cli::plots;
use emi_cli::sigma::cell_sigmas;
use emi_core::sim::Simulation;

#[derive(Parser)]
#[command(
    name = "emi",
    version,
    about = "Cell-by-cell membrane model: composite DG solver and experiment driver"
)]
struct Cli {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory; defaults to the config's [output] dir.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// One run: per-step solver log, field, activation, and sigma dumps.
    Single {
        /// Preconditioner override: gdsw, as, or none.
        #[arg(long)]
        precond: Option<String>,
        /// Coarse space override: vertex_and_edge or vertex_only.
        #[arg(long)]
        coarse: Option<String>,
        /// Square cell grid override.
        #[arg(long)]
        cells: Option<usize>,
        /// Also dump the assembled system in Matrix Market form.
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Growing cell grid at fixed cell resolution.
    Scalability {
        /// Largest grid edge to include.
        #[arg(long, default_value_t = 16)]
        max_cells: usize,
        /// Run full horizons instead of the short desk cap.
        #[arg(long)]
        full: bool,
    },
    /// Fixed 4x4 grid with growing cells-per-subdomain.
    Optimality {
        #[arg(long)]
        full: bool,
    },
    /// Step-size sweep on the 8x8 grid.
    TauSweep {
        #[arg(long)]
        full: bool,
    },
    /// Conductivity heterogeneity sweep on the 8x8 grid.
    Robustness {
        /// Seed override for the jittered layout.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        full: bool,
        /// Run all preconditioners, not only the two-level one.
        #[arg(long)]
        all_preconds: bool,
    },
    /// Write gnuplot scripts next to the tables.
    Plots,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn step_cap(full: bool) -> Option<usize> {
    if full {
        None
    } else {
        Some(DESK_STEP_CAP)
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    let mut file = FileConfig::load_or_default(cli.config.as_deref())?;
    let out_dir = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&file.output.dir));
    match cli.cmd {
        Cmd::Single { precond, coarse, cells, dump_matrix } => {
            if let Some(p) = precond {
                file.solver.preconditioner = p;
            }
            if let Some(c) = coarse {
                file.solver.coarse = c;
            }
            if let Some(n) = cells {
                file.geometry.cells_x = n;
                file.geometry.cells_y = n;
            }
            run_single(&file, &out_dir, dump_matrix)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Scalability { max_cells, full } => {
            println!("scalability sweep (grids up to {max_cells}x{max_cells}) ...");
            let out = experiments::scalability(&file, max_cells, step_cap(full))?;
            finish_sweep(&file, &out_dir, "scalability.csv", out)
        }
        Cmd::Optimality { full } => {
            println!("optimality sweep (4x4 grid, growing subdomains) ...");
            let out = experiments::optimality(&file, step_cap(full))?;
            finish_sweep(&file, &out_dir, "optimality.csv", out)
        }
        Cmd::TauSweep { full } => {
            println!("step-size sweep (8x8 grid) ...");
            let out = experiments::tau_sweep(&file, step_cap(full))?;
            finish_sweep(&file, &out_dir, "tau.csv", out)
        }
        Cmd::Robustness { seed, full, all_preconds } => {
            if let Some(s) = seed {
                file.sigma.seed = s;
            }
            println!("heterogeneity sweep (8x8 grid of 48x8 cells) ...");
            let out = experiments::robustness(&file, step_cap(full), all_preconds)?;
            for (case, map) in &out.sigma_maps {
                let name = format!(
                    "sigma_{}.csv",
                    case.replace([':', '='], "_")
                );
                output::write_sigma_map_csv(
                    &out_dir.join(name),
                    experiments::ROBUSTNESS_GRID,
                    map,
                )?;
            }
            finish_sweep(&file, &out_dir, "robustness.csv", out.sweep)
        }
        Cmd::Plots => {
            for p in plots::write_plot_scripts(&out_dir)? {
                println!("wrote {}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_single(file: &FileConfig, out_dir: &Path, dump_matrix: bool) -> Result<()> {
    let cfg = file.sim_config()?;
    let dist = file.sigma_distribution()?;
    let g = cfg.geometry.clone();
    let cells = cell_sigmas(
        dist,
        g.n_cells_x,
        g.n_cells_y,
        file.sigma.sigma,
        file.sigma.alpha,
        file.sigma.seed,
    )?;
    let header = file.header_lines(&cfg);
    println!(
        "single run: {}x{} cells, {} steps of {} ms",
        g.n_cells_x,
        g.n_cells_y,
        cfg.n_steps(),
        cfg.tau
    );
    let start = Instant::now();
    let sim =
        Simulation::with_conductivities(cfg, Some(file.extracellular_sigma()), Some(&cells))?;
    println!(
        "  {} DOFs, {} free, setup {:.2}s",
        sim.topo.n_dofs,
        sim.sys.n_free(),
        start.elapsed().as_secs_f64()
    );
    let t_run = Instant::now();
    let result = sim.run()?;
    let wall = t_run.elapsed().as_secs_f64();
    println!(
        "  done in {wall:.2}s: final k2 {:.4e}, final iterations {}",
        result.final_k2(),
        result.final_iterations()
    );

    output::write_steps_csv(&out_dir.join("steps.csv"), &header, &result.steps)?;
    output::write_field_csv(&out_dir.join("field.csv"), &sim.topo, &result.final_u)?;
    output::write_activation_csv(
        &out_dir.join("activation.csv"),
        &sim.topo,
        &result.activation_ms,
    )?;
    output::write_sigma_map_csv(&out_dir.join("sigma.csv"), sim.topo.config.n_cells_x, &cells)?;
    for (step, u) in &result.snapshots {
        output::write_field_csv(&out_dir.join(format!("snap_{step:05}.csv")), &sim.topo, u)?;
    }
    if dump_matrix {
        output::write_matrix_market(&out_dir.join("system.mtx"), &sim.sys.matrix)?;
    }
    let activated = result.activation_ms.iter().flatten().count();
    let membranes = sim
        .topo
        .edges
        .iter()
        .filter(|e| e.kind == emi_core::mesh::EdgeKind::Membrane)
        .count();
    println!(
        "  {activated} of {membranes} membrane edges activated; tables in {}",
        out_dir.display()
    );
    Ok(())
}

fn finish_sweep(
    file: &FileConfig,
    out_dir: &Path,
    name: &str,
    out: SweepOutcome,
) -> Result<ExitCode> {
    let sim = file.sim_config()?;
    let path = out_dir.join(name);
    output::write_sweep_csv(&path, &file.header_lines(&sim), &out.rows)?;
    print_table(&out.rows);
    println!("wrote {}", path.display());
    if out.failed > 0 {
        eprintln!("{} of {} cases failed", out.failed, out.rows.len());
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn print_table(rows: &[SweepRow]) {
    println!(
        "{:<22} {:<6} {:>12} {:>8} {:>9}",
        "case", "prec", "k2", "iters", "wall_s"
    );
    for r in rows {
        match &r.error {
            Some(e) => println!("{:<22} {:<6} failed: {e}", r.case, r.precond),
            None => println!(
                "{:<22} {:<6} {:>12.4e} {:>8} {:>9.3}",
                r.case, r.precond, r.k2, r.iterations, r.wall_s
            ),
        }
    }
}
