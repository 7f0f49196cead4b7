//! Command line front end.
//!
//! Exit codes: 0 success, 1 self-check failure, 2 invalid arguments, 3 I/O failure.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::lindblad::{evolve_strided, LindbladError, LindbladParams};
use crate::output::{
    curves_svg, surface_svg, trajectory_rows, write_json_records, write_sweep_csv, write_trajectory_csv,
    FigureMetadata,
};
use crate::qmat::{real, DensityOperator4};
use crate::steering::{msc_closed_form, msc_numeric, AngleGrid};
use crate::sweep::{figure_data, msc_grid, msc_grid_parallel, Figure, FigureDefaults, GridSpec, LinearRange};
use crate::udw_state::{coeffs_to_density, delta_of_state, steady_state_coeffs, ModelParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "udw-steering", version, about = "Maximal steered coherence of two Unruh-DeWitt detectors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form MSC at one parameter point
    Msc(MscArgs),
    /// CSV grid of MSC over delta0, T and omega
    Sweep(SweepArgs),
    /// Integrate the master equation from a named initial state
    Evolve(EvolveArgs),
    /// Emit the data behind the MSC surface and curve figures
    Figures(FiguresArgs),
    /// Run the fast invariant suite
    Check,
}

#[derive(Debug, Args)]
pub struct MscArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub delta0: f64,
    #[arg(long)]
    pub omega: f64,
    #[arg(long)]
    pub temperature: f64,
    /// Also run the numerical maximization and report the difference
    #[arg(long)]
    pub numeric: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    pub delta0_range: LinearRange,
    /// start:stop:step
    #[arg(long)]
    pub t_range: LinearRange,
    /// Comma separated, e.g. 1,3,5
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub omega_list: Vec<f64>,
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads for grid evaluation; output is identical to the serial run
    #[arg(long)]
    pub parallel: Option<usize>,
    /// Write a JSON array of records instead of CSV
    #[arg(long)]
    pub json: bool,
}

/// Named initial two-detector states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Singlet,
    Product00,
    Product11,
    Mixed,
    /// p·singlet + (1 − p)·I/4
    Werner(f64),
}

impl InitialState {
    pub fn density(&self) -> DensityOperator4 {
        match *self {
            Self::Singlet => DensityOperator4::singlet(),
            Self::Product00 => DensityOperator4::basis_state(0),
            Self::Product11 => DensityOperator4::basis_state(3),
            Self::Mixed => DensityOperator4::maximally_mixed(),
            Self::Werner(p) => DensityOperator4::from_matrix_unchecked(
                DensityOperator4::singlet().matrix() * real(p)
                    + DensityOperator4::maximally_mixed().matrix() * real(1.0 - p),
            ),
        }
    }

    pub fn delta0(&self) -> f64 {
        match *self {
            Self::Singlet => -3.0,
            Self::Product00 | Self::Product11 => 1.0,
            Self::Mixed => 0.0,
            Self::Werner(p) => -3.0 * p,
        }
    }
}

impl FromStr for InitialState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "singlet" => Ok(Self::Singlet),
            "product00" => Ok(Self::Product00),
            "product11" => Ok(Self::Product11),
            "mixed" => Ok(Self::Mixed),
            _ => {
                let p = s
                    .strip_prefix("werner:")
                    .ok_or_else(|| format!("unknown initial state `{s}` (singlet|product00|product11|mixed|werner:p)"))?;
                let p: f64 = p.parse().map_err(|_| format!("werner parameter `{p}` is not a number"))?;
                if (0.0..=1.0).contains(&p) {
                    Ok(Self::Werner(p))
                } else {
                    Err(format!("werner parameter must lie in [0, 1], got {p}"))
                }
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// singlet | product00 | product11 | mixed | werner:p
    #[arg(long)]
    pub initial: InitialState,
    #[arg(long)]
    pub omega: f64,
    #[arg(long)]
    pub temperature: f64,
    /// Overall rate scale; time is measured in units of 1/scale
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Override the dephasing rate gamma_0
    #[arg(long, allow_negative_numbers = true)]
    pub gamma0: Option<f64>,
    /// Effective gap in the Hamiltonian (defaults to omega)
    #[arg(long)]
    pub effective_gap: Option<f64>,
    /// Final proper time (default 40/gamma_plus)
    #[arg(long)]
    pub tmax: Option<f64>,
    /// RK4 step (default 0.01/gamma_plus)
    #[arg(long)]
    pub dt: Option<f64>,
    /// Store every k-th step
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// 1: surfaces over (delta0, T); 2: curves over T
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Also render SVG plots
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            Self::Invalid(_) => EXIT_INVALID,
            Self::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Invalid(m) => write!(f, "invalid arguments: {m}"),
            Self::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

#[derive(Debug, Serialize)]
struct MscRecord {
    delta0: f64,
    omega: f64,
    temperature: f64,
    gamma: f64,
    msc: f64,
    optimal_theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    msc_numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_difference: Option<f64>,
}

fn cmd_msc(args: &MscArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let params = ModelParams::new(args.omega, args.temperature, args.delta0).map_err(invalid)?;
    let gamma = params.gamma();
    let coeffs = params.steady_state();
    let closed = msc_closed_form(&coeffs).map_err(invalid)?;
    let numeric = if args.numeric {
        Some(msc_numeric(&coeffs_to_density(&coeffs), &AngleGrid::default()).map_err(invalid)?.value)
    } else {
        None
    };
    let record = MscRecord {
        delta0: args.delta0,
        omega: args.omega,
        temperature: args.temperature,
        gamma,
        msc: closed.value,
        optimal_theta: closed.optimal_theta,
        msc_numeric: numeric,
        abs_difference: numeric.map(|n| (n - closed.value).abs()),
    };
    let io = |e: io::Error| CliError::Io(format!("stdout: {e}"));
    if args.json {
        write_json_records(&[record], &mut *stdout).map_err(io)?;
    } else {
        let fields = serde_json::to_value(&record).map_err(|e| CliError::Io(e.to_string()))?;
        let order = ["delta0", "omega", "temperature", "gamma", "msc", "optimal_theta", "msc_numeric", "abs_difference"];
        for key in order {
            if let Some(v) = fields.get(key) {
                writeln!(stdout, "{key} = {v}").map_err(io)?;
            }
        }
    }
    Ok(())
}

/// Evaluates a sweep and writes it to `out`.
pub fn write_sweep(spec: &GridSpec, parallel: Option<usize>, json: bool, out: &Path) -> Result<usize, CliError> {
    let rows = match parallel {
        Some(threads) => msc_grid_parallel(spec, threads),
        None => msc_grid(spec),
    }
    .map_err(invalid)?;
    let file = create(out)?;
    if json {
        write_json_records(&rows, file).map_err(io_err(out))?;
    } else {
        write_sweep_csv(&rows, file).map_err(io_err(out))?;
    }
    Ok(rows.len())
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let spec = GridSpec::from_ranges(args.delta0_range, args.t_range, args.omega_list.clone()).map_err(invalid)?;
    let n = write_sweep(&spec, args.parallel, args.json, &args.out)?;
    writeln!(stdout, "wrote {n} rows to {}", args.out.display()).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

fn cmd_evolve(args: &EvolveArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let model = ModelParams::new(args.omega, args.temperature, args.initial.delta0()).map_err(invalid)?;
    let mut params = LindbladParams::unruh(args.omega, args.temperature, args.scale).map_err(invalid)?;
    if let Some(g0) = args.gamma0 {
        params.rates = params.rates.with_gamma_zero(g0).map_err(invalid)?;
    }
    if let Some(gap) = args.effective_gap {
        params = LindbladParams::new(gap, params.rates).map_err(invalid)?;
    }
    let tau_max = args.tmax.unwrap_or_else(|| params.default_tau_max());
    let dt = args.dt.unwrap_or_else(|| params.default_dt());

    let rho0 = args.initial.density();
    let traj = evolve_strided(&rho0, &params, tau_max, dt, args.stride).map_err(|e| match e {
        LindbladError::StepTooLarge { .. } => CliError::Invalid(e.to_string()),
        other => invalid(other),
    })?;
    let steady = coeffs_to_density(
        &steady_state_coeffs(delta_of_state(&rho0).clamp(-3.0, 1.0), model.gamma()).map_err(invalid)?,
    );
    let rows = trajectory_rows(&traj, &steady, &AngleGrid::default());
    write_trajectory_csv(&rows, create(&args.out)?).map_err(io_err(&args.out))?;
    let last = rows.last().expect("trajectory holds the initial state");
    writeln!(
        stdout,
        "wrote {} rows to {}; final dist_to_steady = {:e}",
        rows.len(),
        args.out.display(),
        last.dist_to_steady
    )
    .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

fn cmd_figures(args: &FiguresArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let which = if args.which == 1 { Figure::Surface } else { Figure::Curves };
    let defaults = FigureDefaults::default();
    let panels = figure_data(which, &defaults).map_err(invalid)?;
    fs::create_dir_all(&args.out_dir).map_err(io_err(&args.out_dir))?;
    for panel in &panels {
        let path = args.out_dir.join(format!("{}.csv", panel.name));
        write_sweep_csv(&panel.rows, create(&path)?).map_err(io_err(&path))?;
        if args.svg {
            let svg = match which {
                Figure::Surface => surface_svg(panel),
                Figure::Curves => curves_svg(panel),
            };
            let path = args.out_dir.join(format!("{}.svg", panel.name));
            fs::write(&path, svg).map_err(io_err(&path))?;
        }
    }
    let meta_path = args.out_dir.join(format!("fig{}_metadata.json", args.which));
    let meta = FigureMetadata::new(&panels, &defaults);
    let mut file = create(&meta_path)?;
    serde_json::to_writer_pretty(&mut file, &meta).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(file).and_then(|_| file.flush()).map_err(io_err(&meta_path))?;
    writeln!(stdout, "wrote {} panels to {}", panels.len(), args.out_dir.display())
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

fn cmd_check(stdout: &mut dyn Write) -> Result<bool, CliError> {
    let mut all = true;
    for outcome in crate::check::run_all() {
        all &= outcome.passed;
        writeln!(stdout, "{outcome}").map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(all)
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Msc(a) => cmd_msc(a, stdout).map(|_| EXIT_OK),
        Command::Sweep(a) => cmd_sweep(a, stdout).map(|_| EXIT_OK),
        Command::Evolve(a) => cmd_evolve(a, stdout).map(|_| EXIT_OK),
        Command::Figures(a) => cmd_figures(a, stdout).map(|_| EXIT_OK),
        Command::Check => cmd_check(stdout).map(|ok| if ok { EXIT_OK } else { EXIT_CHECK_FAILED }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
