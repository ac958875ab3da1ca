//! `lindqbit` command-line front end.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lindqbit::dynamics::TimeConvention;
use lindqbit::plot::LineChart;
use lindqbit::random::resolve_seed;
use lindqbit::scenario::{
    concurrence_report_mixed, concurrence_report_pure, figure1, figure1_chart, figure2, figure2_chart, load_config,
    parse_state_input, random_energies, rate_report, run_simulation, simulation_chart, write_csv, ConcurrenceReport,
    Figure1Params, Figure2Params, ScenarioError, StateInput, TrajectoryRecord, RATE_CHECK_TOL,
};
use lindqbit::state::{bell_state, density_from_pure, BellKind, DEFAULT_TOL};

#[derive(Parser, Debug)]
#[command(name = "lindqbit", version, about = "Two-qubit entanglement dynamics under unitary and dephasing evolution")]
struct Cli {
    /// Write the trajectory CSV here (default: stdout, or the config's csv_path)
    #[arg(long, global = true, value_name = "CSV")]
    out: Option<PathBuf>,
    /// Write an SVG concurrence plot here
    #[arg(long, global = true, value_name = "SVG")]
    plot: Option<PathBuf>,
    /// Seed for random choices (falls back to LINDQBIT_SEED)
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Tolerance for state validation and rate checks
    #[arg(long, global = true, value_name = "REAL")]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entanglement produced from |00> by the control Hamiltonian
    Figure1(Figure1Args),
    /// Bell-state concurrence decay under pure dephasing
    Figure2(Figure2Args),
    /// Run a simulation described by a JSON config
    Simulate { config: PathBuf },
    /// Report dephasing constraints and Lindblad realizability of a config's rates
    CheckRates { config: PathBuf },
    /// Concurrence, Wootters spectrum and entanglement of formation of a state
    Concurrence(ConcurrenceArgs),
}

#[derive(Args, Debug)]
struct Figure1Args {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    y: f64,
    #[arg(long, default_value_t = std::f64::consts::PI)]
    t_max: f64,
    #[arg(long, default_value_t = 400)]
    points: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x3: f64,
    /// Draw x1, x2, x3 from the seed instead
    #[arg(long)]
    random_energies: bool,
    /// Evolve with exp(-itH) instead of exp(+itH)
    #[arg(long)]
    schrodinger: bool,
}

#[derive(Args, Debug)]
struct Figure2Args {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma14: f64,
    /// Value of the other five dephasing rates (default: gamma14)
    #[arg(long, allow_negative_numbers = true)]
    other_gamma: Option<f64>,
    #[arg(long, default_value_t = 5.0)]
    t_max: f64,
    #[arg(long, default_value_t = 400)]
    points: usize,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["state", "file", "bell"])))]
struct ConcurrenceArgs {
    /// JSON: 4 amplitudes (real or [re, im]) or a 4x4 matrix of [re, im]
    state: Option<String>,
    /// Read the JSON state from a file
    #[arg(long)]
    file: Option<PathBuf>,
    /// Named Bell state (phi_plus, phi_minus, psi_plus, psi_minus, phi_i)
    #[arg(long)]
    bell: Option<BellKind>,
    /// Treat the input as a density matrix even when it is a pure state
    #[arg(long)]
    mixed: bool,
    /// Normalize amplitude vectors instead of rejecting them
    #[arg(long)]
    normalize: bool,
}

/// Failure with the documented exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 4, message: e.to_string() }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tol = match cli.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => return Err(config_error(format!("--tol must be positive, got {t}"))),
        t => t,
    };
    match &cli.command {
        Command::Figure1(a) => {
            let energies = if a.random_energies {
                let seed = resolve_seed(cli.seed);
                let e = random_energies(seed);
                eprintln!("seed {seed}: x1 = {}, x2 = {}, x3 = {}", e[0], e[1], e[2]);
                e
            } else {
                [a.x1, a.x2, a.x3]
            };
            let convention = if a.schrodinger { TimeConvention::Schrodinger } else { TimeConvention::Positive };
            let p = Figure1Params { y: a.y, t_max: a.t_max, points: a.points, energies, convention };
            let records = figure1(&p)?;
            emit(&records, cli.out.as_deref(), cli.plot.as_deref(), || figure1_chart(&p, &records))
        }
        Command::Figure2(a) => {
            let p = Figure2Params { gamma14: a.gamma14, other_gamma: a.other_gamma, t_max: a.t_max, points: a.points };
            let out = figure2(&p)?;
            warn_all(&out.warnings);
            emit(&out.records, cli.out.as_deref(), cli.plot.as_deref(), || figure2_chart(&p, &out.records))
        }
        Command::Simulate { config } => {
            let cfg = load_config(config)?;
            let csv_path = cli.out.clone().or_else(|| cfg.outputs.csv_path.as_ref().map(|p| relative_to(config, p)));
            let plot_path = cli.plot.clone().or_else(|| cfg.outputs.plot_path.as_ref().map(|p| relative_to(config, p)));
            match run_simulation(&cfg, tol.unwrap_or(DEFAULT_TOL)) {
                Ok(out) => {
                    warn_all(&out.warnings);
                    emit(&out.records, csv_path.as_deref(), plot_path.as_deref(), || simulation_chart(&out.records))
                }
                Err(ScenarioError::Unphysical { t, reason, records }) => {
                    // keep the rows computed before the failure for inspection
                    emit(&records, csv_path.as_deref(), None, || simulation_chart(&records))?;
                    Err(ScenarioError::Unphysical { t, reason, records: Vec::new() }.into())
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::CheckRates { config } => {
            let cfg = load_config(config)?;
            let report = rate_report(&cfg.dissipation, tol.unwrap_or(RATE_CHECK_TOL))?;
            print!("{report}");
            Ok(())
        }
        Command::Concurrence(a) => {
            let report = concurrence(a, tol.unwrap_or(DEFAULT_TOL))?;
            print_concurrence(&report);
            Ok(())
        }
    }
}

fn concurrence(a: &ConcurrenceArgs, tol: f64) -> Result<ConcurrenceReport, Failure> {
    let input = if let Some(kind) = a.bell {
        StateInput::Pure(bell_state(kind))
    } else {
        let text = match (&a.state, &a.file) {
            (Some(s), _) => s.clone(),
            (None, Some(path)) => {
                fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?
            }
            (None, None) => unreachable!("clap requires an input"),
        };
        parse_state_input(&text, a.normalize, tol).map_err(|e| config_error(format!("invalid state: {e}")))?
    };
    Ok(match input {
        StateInput::Pure(v) if a.mixed => concurrence_report_mixed(&density_from_pure(&v))?,
        StateInput::Pure(v) => concurrence_report_pure(&v)?,
        StateInput::Mixed(rho) => concurrence_report_mixed(&rho)?,
    })
}

fn print_concurrence(r: &ConcurrenceReport) {
    println!("concurrence: {:.16e}", r.concurrence);
    if let Some(l) = r.lambdas {
        println!("lambdas: {}", l.map(|x| format!("{x:.16e}")).join(", "));
    }
    println!("entanglement_of_formation: {:.16e}", r.eof);
    match r.separable {
        Some(true) => println!("verdict: separable"),
        Some(false) => println!("verdict: entangled"),
        None => {}
    }
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

/// Paths in a config are taken relative to the config file.
fn relative_to(config: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    match config.parent() {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p.to_path_buf(),
    }
}

fn emit(
    records: &[TrajectoryRecord],
    csv: Option<&Path>,
    plot: Option<&Path>,
    chart: impl FnOnce() -> LineChart,
) -> Result<(), Failure> {
    match csv {
        Some(path) => write_csv(records, io::BufWriter::new(fs::File::create(path)?))?,
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_csv(records, &mut lock)?;
            lock.flush()?;
        }
    }
    if let Some(path) = plot {
        fs::write(path, chart().to_svg())?;
    }
    Ok(())
}
