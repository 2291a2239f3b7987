//! `qdot` — steady-state transport in two Coulomb-coupled quantum dots.
//!
//! Exit codes: 0 success, 1 usage/configuration error, 2 physics-invariant
//! violation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qdot_core::{region_disjointness, solve_transport, sweep, validate, zero_contour, Error};

use qdot_cli::config::{Precision, RunConfig};
use qdot_cli::{output, presets};

#[derive(Parser)]
#[command(
    name = "qdot",
    about = "Steady-state transport simulator for two capacitively coupled quantum dots",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single operating point and print the transport report.
    Point {
        /// JSON run configuration (no grid block).
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate a parameter grid and write the rows as CSV.
    Sweep {
        /// JSON run configuration with a grid block.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (falls back to the config's output.path).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the grid evaluation (output is identical for
        /// any value).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a built-in figure preset (fig2a..fig2d, fig3..fig6).
    Figure {
        /// Figure name.
        name: String,
        /// Output directory for the CSV (and contour sidecar, when the
        /// figure has one).
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override a preset knob, e.g. --set delta_v=3 --set u_max=100.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Run the randomized invariant suite.
    Validate {
        /// RNG seed for the parameter draws.
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Number of random draws per check.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

/// Failures carry the exit code they map to.
enum AppError {
    /// Usage or configuration problem: exit 1.
    Usage(String),
    /// A physics invariant failed: exit 2.
    Physics(String),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation { .. } => AppError::Physics(e.to_string()),
            other => AppError::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are successes; anything else is usage.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Physics(msg)) => {
            eprintln!("physics invariant violation: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Point { config } => cmd_point(&config),
        Command::Sweep { config, out, threads } => cmd_sweep(&config, out.as_deref(), threads),
        Command::Figure { name, out, set } => cmd_figure(&name, &out, &set),
        Command::Validate { seed, trials } => cmd_validate(seed, trials),
    }
}

fn load_config(path: &Path) -> Result<RunConfig, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", path.display())))?;
    RunConfig::parse(&text).map_err(AppError::Usage)
}

fn cmd_point(path: &Path) -> Result<(), AppError> {
    let config = load_config(path)?;
    if config.grid.is_some() {
        return Err(AppError::Usage(
            "config key grid: not allowed for `point` (use `sweep`)".into(),
        ));
    }
    let device = config.device_spec().map_err(AppError::Usage)?;
    let op = config.operating_point().map_err(AppError::Usage)?;
    let solution = solve_transport(&device, &op)?;
    print!("{}", output::render_point(&solution));
    if let Some((name, detail)) = solution.report.check_invariants() {
        return Err(AppError::Physics(format!("{name}: {detail}")));
    }
    Ok(())
}

fn cmd_sweep(path: &Path, out: Option<&Path>, threads: Option<usize>) -> Result<(), AppError> {
    let config = load_config(path)?;
    let template = config.template().map_err(AppError::Usage)?;
    let grid = config
        .grid_spec()
        .map_err(AppError::Usage)?
        .ok_or_else(|| AppError::Usage("config key grid: required for `sweep`".into()))?;
    let tol = config.classify_tol();
    let precision = config.precision().map_err(AppError::Usage)?;
    let out = match (out, config.output_path()) {
        (Some(path), _) => path.to_path_buf(),
        (None, Some(path)) => PathBuf::from(path),
        (None, None) => {
            return Err(AppError::Usage(
                "no output path: pass --out or set output.path in the config".into(),
            ))
        }
    };

    let table = match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| AppError::Usage(format!("--threads {n}: {e}")))?;
            pool.install(|| sweep(&template, &grid, tol))?
        }
        None => sweep(&template, &grid, tol)?,
    };

    write_table(&out, &table, precision)?;
    let disjointness = if grid.axes().len() == 2 {
        Some(region_disjointness(&table)?)
    } else {
        None
    };
    print!("{}", output::render_summary(&table, disjointness.as_ref()));
    if let Some(report) = &disjointness {
        if !report.is_disjoint() {
            return Err(AppError::Physics(format!(
                "inverse-current regions overlap at {:?}",
                report.overlaps[0]
            )));
        }
    }
    Ok(())
}

fn write_table(path: &Path, table: &qdot_core::SweepTable, precision: Precision) -> Result<(), AppError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| AppError::Usage(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    let file = fs::File::create(path)
        .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display())))?;
    let mut writer = std::io::BufWriter::new(file);
    output::write_csv(&mut writer, table, precision)
        .and_then(|()| writer.flush())
        .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_figure(name: &str, out_dir: &Path, set: &[String]) -> Result<(), AppError> {
    let overrides = parse_overrides(set)?;
    let run = presets::figure_run(name, &overrides).map_err(AppError::Usage)?;
    let table = sweep(&run.template, &run.grid, qdot_core::DEFAULT_CLASSIFY_TOL)?;

    fs::create_dir_all(out_dir)
        .map_err(|e| AppError::Usage(format!("cannot create {}: {e}", out_dir.display())))?;
    let csv_path = out_dir.join(format!("{}.csv", run.name));
    write_table(&csv_path, &table, Precision::Full)?;
    println!("wrote {}", csv_path.display());

    let disjointness = if run.grid.axes().len() == 2 {
        Some(region_disjointness(&table)?)
    } else {
        None
    };

    if let Some(quantity) = run.contour {
        let contours = zero_contour(&run.template, &table, quantity)?;
        let sidecar = output::contour_sidecar_json(quantity, &table, &contours);
        let sidecar_path = out_dir.join(format!("{}_contour.json", run.name));
        fs::write(&sidecar_path, sidecar)
            .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", sidecar_path.display())))?;
        println!("wrote {}", sidecar_path.display());
    }

    print!("{}", output::render_summary(&table, disjointness.as_ref()));
    if let Some(report) = &disjointness {
        if !report.is_disjoint() {
            return Err(AppError::Physics(format!(
                "inverse-current regions overlap at {:?}",
                report.overlaps[0]
            )));
        }
    }
    Ok(())
}

fn parse_overrides(set: &[String]) -> Result<Vec<(String, f64)>, AppError> {
    set.iter()
        .map(|entry| {
            let (key, value) = entry.split_once('=').ok_or_else(|| {
                AppError::Usage(format!("--set {entry}: expected KEY=VALUE"))
            })?;
            let parsed: f64 = value
                .parse()
                .map_err(|_| AppError::Usage(format!("--set {entry}: \"{value}\" is not a number")))?;
            Ok((key.to_string(), parsed))
        })
        .collect()
}

fn cmd_validate(seed: u64, trials: usize) -> Result<(), AppError> {
    if trials == 0 {
        return Err(AppError::Usage("--trials must be at least 1".into()));
    }
    let report = validate::run_suite(seed, trials, None);
    print!("{}", report.render());
    if report.passed() {
        Ok(())
    } else {
        Err(AppError::Physics("validation suite failed".into()))
    }
}
