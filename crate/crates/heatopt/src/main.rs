use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use heatopt::{emit_csv, emit_field, emit_timing_series, run_study_with, ExperimentPlan, Scaling, StudyError};
use heatopt_core::{reconstruct_control, QuadratureRule, SolverConfig, SpaceTimeField, TargetKind};

#[derive(Parser)]
#[command(name = "heatopt", version, about = "Space-time optimal control of the heat equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a refinement study and write its convergence table.
    Study(StudyArgs),
}

#[derive(Args)]
struct StudyArgs {
    /// smooth, anisotropic, discontinuous or turning-wave
    #[arg(long)]
    target: TargetKind,
    /// Spatial dimension (defaults to the target's)
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value = "uniform")]
    scaling: Scaling,
    /// Elements per spatial axis, one study level each
    #[arg(long, value_delimiter = ',', required = true)]
    levels: Vec<usize>,
    #[arg(long, default_value_t = 1e-12)]
    cg_tol: f64,
    /// Iteration cap per spatial CG solve (default 10 (n_x - 1))
    #[arg(long)]
    cg_max_iter: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    t_end: f64,
    /// Upper bound on N_t * M_x per level
    #[arg(long, default_value_t = heatopt::DEFAULT_MAX_DOFS)]
    max_dofs: usize,
    #[arg(long)]
    out: PathBuf,
    /// Zero the time columns for byte-reproducible output
    #[arg(long)]
    no_timing: bool,
    /// Write the control reconstructed on the finest level
    #[arg(long)]
    control_out: Option<PathBuf>,
    /// Write `dof,simulationTime` per level
    #[arg(long)]
    timing_out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

fn study(args: StudyArgs) -> Result<(), StudyError> {
    let mut plan = ExperimentPlan::new(args.target, args.scaling, args.levels);
    if let Some(dim) = args.dim {
        plan.dim = dim;
    }
    plan.t_end = args.t_end;
    plan.max_dofs = args.max_dofs;

    let mut cfg = SolverConfig::new(0.0);
    cfg.cg_rel_tol = args.cg_tol;
    cfg.cg_max_iter = args.cg_max_iter;
    let quad = QuadratureRule::default();

    let mut finest: Option<SpaceTimeField> = None;
    let keep = args.control_out.is_some();
    let rows = run_study_with(&plan, &cfg, &quad, |row, level| {
        eprintln!(
            "nx={:<4} nt={:<6} dof={:<10} error={:.5e} eoc={} solve={:.1} ms assembly={:.1} ms (not in simulationTime) cg={:.1}",
            row.nx,
            row.nt,
            row.dof,
            row.l2_error,
            row.eoc.map(|e| format!("{e:.2}")).unwrap_or_else(|| "-".into()),
            row.simulation_ms(),
            row.assembly_time.as_secs_f64() * 1e3,
            row.cg_iter_mean,
        );
        if keep {
            finest = Some(level.state);
        }
    })?;

    emit_csv(&rows, &args.out, args.no_timing)?;
    if let Some(path) = &args.timing_out {
        emit_timing_series(&rows, path)?;
    }
    if let (Some(path), Some(state)) = (&args.control_out, finest) {
        let with_reaction = plan.target == TargetKind::TurningWave;
        let z = reconstruct_control(&state, with_reaction, &quad).map_err(|source| StudyError::Solver {
            nx: state.grid().n_x(),
            source,
        })?;
        emit_field(&z, path)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Study(args) => {
            if let Some(n) = args.threads {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("heatopt: cannot set up {n} threads: {e}");
                    return ExitCode::FAILURE;
                }
            }
            study(args)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("heatopt: {e}");
            ExitCode::FAILURE
        }
    }
}
