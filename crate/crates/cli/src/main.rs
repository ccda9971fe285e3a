//! `gsmi`: ground-state preparation, Case I / Case II sweeps and scaling fits.
//!
//! Exit status: 0 on success, 2 for configuration or usage errors, 3 for
//! numeric or I/O failures during a run.

mod config;
mod output;

use std::fs;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use gsmi_core::doubled::MAX_SUPERVECTOR_SITES;
use gsmi_core::sweep::{case1, case2, fit_series};
use gsmi_core::tfim::cache::load_or_compute;
use gsmi_core::tfim::{ground_state, MAX_DENSE_SITES, MAX_LANCZOS_SITES};
use gsmi_core::{Axis, FitWindow, GroundStateResult, MiPoint, SolverMethod, TfimModel};

use config::{ConfigError, ExperimentConfig};

#[derive(Parser, Debug)]
#[command(name = "gsmi", version, about = "Rényi-2 generalized Shannon mutual information of the critical Ising chain")]
struct Cli {
    /// Size of the worker pool (defaults to the config value, then all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Experiment configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Directory for cached ground states.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Output CSV path; the fit table goes next to it as `<stem>.fit.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Inclusive fit window `lo:hi` over L_A.
    #[arg(long)]
    window: Option<FitWindow>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute (or load from cache) the critical ground state.
    Ground(RunArgs),
    /// Pure-state sweep over p_m and L_A.
    Case1(RunArgs),
    /// Y-decohered sweep over (p_m, p_y) and L_A in doubled space.
    Case2(RunArgs),
    /// Fit an existing points CSV.
    Fit {
        /// Points CSV written by `case1` or `case2`.
        input: PathBuf,
        /// Output path for the fit table (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Inclusive fit window `lo:hi` over L_A.
        #[arg(long)]
        window: Option<FitWindow>,
    },
}

fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// Configuration with command-line flags applied on top.
fn load_config(args: &RunArgs, workers: Option<usize>) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| config_error(format!("cannot read {}: {e}", args.config.display())))?;
    let mut config = ExperimentConfig::parse(&text)?;
    if args.cache_dir.is_some() {
        config.cache_dir.clone_from(&args.cache_dir);
    }
    if args.out.is_some() {
        config.out.clone_from(&args.out);
    }
    if args.window.is_some() {
        config.window = args.window;
    }
    if workers.is_some() {
        config.workers = workers;
    }
    if config.workers == Some(0) {
        return Err(config_error("workers must be at least 1"));
    }
    Ok(config)
}

fn init_pool(workers: Option<usize>) -> Result<()> {
    if let Some(n) = workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("building worker pool")?;
    }
    Ok(())
}

fn check_solver(config: &ExperimentConfig) -> Result<()> {
    let max = match config.method {
        SolverMethod::Lanczos => MAX_LANCZOS_SITES,
        SolverMethod::Dense => MAX_DENSE_SITES,
    };
    let min = match config.method {
        SolverMethod::Lanczos => 3,
        SolverMethod::Dense => 2,
    };
    if !(min..=max).contains(&config.len) {
        return Err(config_error(format!(
            "L = {} outside [{min}, {max}] for the {} solver",
            config.len, config.method
        )));
    }
    Ok(())
}

fn prepare_ground(config: &ExperimentConfig) -> Result<(GroundStateResult, Option<(PathBuf, bool)>)> {
    let model = TfimModel::new(config.len)?;
    match &config.cache_dir {
        Some(dir) => {
            let cached = load_or_compute(dir, &model, config.method)?;
            Ok((cached.result, Some((cached.path, cached.hit))))
        }
        None => Ok((ground_state(&model, config.method)?, None)),
    }
}

fn fit_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.fit.csv"))
}

fn window_for(config_window: Option<FitWindow>, len: usize) -> FitWindow {
    config_window.unwrap_or_else(|| FitWindow::default_for(len))
}

/// Writes points and fits to `out` (and its fit sibling), or both to stdout.
fn emit(points: &[MiPoint], window: FitWindow, out: Option<&Path>) -> Result<()> {
    let fits = fit_series(points, window)?;
    match out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            output::write_points(BufWriter::new(file), points)?;
            let fpath = fit_path(path);
            let file = fs::File::create(&fpath).with_context(|| format!("creating {}", fpath.display()))?;
            output::write_fits(BufWriter::new(file), &fits)?;
            eprintln!("wrote {} points to {} and {} fits to {}", points.len(), path.display(), fits.len(), fpath.display());
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            output::write_points(&mut lock, points)?;
            writeln!(lock)?;
            output::write_fits(&mut lock, &fits)?;
        }
    }
    Ok(())
}

fn cmd_ground(config: &ExperimentConfig) -> Result<()> {
    check_solver(config)?;
    let (result, cache) = prepare_ground(config)?;
    let mut line = format!(
        "L={} method={} energy={} residual={:e}",
        config.len, config.method, result.energy, result.residual
    );
    if let Some((path, hit)) = cache {
        line.push_str(&format!(" cache={} path={}", if hit { "hit" } else { "miss" }, path.display()));
    }
    println!("{line}");
    Ok(())
}

fn require_p_m(config: &ExperimentConfig) -> Result<()> {
    if config.p_m.is_empty() {
        return Err(config_error("missing required key `p_m`"));
    }
    Ok(())
}

fn cmd_case1(config: &ExperimentConfig) -> Result<()> {
    check_solver(config)?;
    require_p_m(config)?;
    if config.p_y.is_some() {
        return Err(config_error("case1 is pure-state only; remove `p_y` or use case2"));
    }
    let (ground, _) = prepare_ground(config)?;
    let points = case1(&ground.state, config.axis, &config.p_m, &config.sizes, config.algorithm)?;
    emit(&points, window_for(config.window, config.len), config.out.as_deref())
}

fn cmd_case2(config: &ExperimentConfig) -> Result<()> {
    check_solver(config)?;
    require_p_m(config)?;
    if config.len > MAX_SUPERVECTOR_SITES {
        return Err(config_error(format!(
            "case2 needs L <= {MAX_SUPERVECTOR_SITES} (doubled space holds 4^L amplitudes)"
        )));
    }
    if config.axis != Axis::Z {
        return Err(config_error("case2 measures along Z only"));
    }
    if config.algorithm.is_some() {
        return Err(config_error("`algorithm` applies to pure-state sweeps only"));
    }
    let p_y = config.p_y.clone().unwrap_or_else(|| vec![0.0]);
    let (ground, _) = prepare_ground(config)?;
    let points = case2(&ground.state, config.axis, &config.p_m, &p_y, &config.sizes)?;
    emit(&points, window_for(config.window, config.len), config.out.as_deref())
}

fn cmd_fit(input: &Path, out: Option<&Path>, window: Option<FitWindow>) -> Result<()> {
    let file = fs::File::open(input).map_err(|e| config_error(format!("cannot open {}: {e}", input.display())))?;
    let points = output::read_points(BufReader::new(file))?;
    let window = match window {
        Some(w) => w,
        None => {
            let mut lens: Vec<usize> = points.iter().map(|p| p.len).collect();
            lens.dedup();
            match lens.as_slice() {
                [len] => FitWindow::default_for(*len),
                [] => return Err(config_error("points file has no rows")),
                _ => return Err(config_error("points for several L; pass --window")),
            }
        }
    };
    let fits = fit_series(&points, window)?;
    match out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            output::write_fits(BufWriter::new(file), &fits)?;
        }
        None => output::write_fits(io::stdout().lock(), &fits)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Ground(args) | Command::Case1(args) | Command::Case2(args) => {
            let config = load_config(args, cli.workers)?;
            init_pool(config.workers)?;
            match cli.command {
                Command::Ground(_) => cmd_ground(&config),
                Command::Case1(_) => cmd_case1(&config),
                _ => cmd_case2(&config),
            }
        }
        Command::Fit { input, out, window } => {
            if cli.workers == Some(0) {
                return Err(config_error("workers must be at least 1"));
            }
            cmd_fit(input, out.as_deref(), *window)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

