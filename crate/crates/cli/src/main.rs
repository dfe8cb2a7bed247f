//! `dqm`: DQ weights, structural eigenproblems, truncation profiles and the
//! operation-count benchmark from the command line.
//!
//! Data goes to stdout (or `--output`); diagnostics go to stderr.
//! Exit codes: 0 success, 2 bad arguments, 3 numeric failure, 4 I/O failure.

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dqm::analysis::{bench_structured, truncation_profile, TestFunction};
use dqm::grid::{Grid, GridKind};
use dqm::problems::{
    effort_report, parse_cases, plate_operator, beam_operator, skew_plate_operator, BeamBc, BeamProblem,
    CaseOutput, CaseSpec, ConvDiffSolution, EdgeSupport, GridSpec, PathChoice, PlateProblem, ProblemSpec,
    SkewPlateProblem,
};
use dqm::weights::higher_order;
use dqm::DqError;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "dqm", version, about = "Differential quadrature with centrosymmetric fast paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a DQ weighting matrix and its symmetry class.
    Weights(WeightsArgs),
    /// Solve a beam, plate, skew-plate or convection-diffusion problem.
    Solve(SolveArgs),
    /// Count multiplies of dense versus factorized det/inverse/eig.
    Bench(BenchArgs),
    /// Per-node error of the DQ first derivative of a test function.
    ErrorProfile(ErrorProfileArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Uniform,
    Chebyshev,
    ChebyshevEnds,
}

impl GridArg {
    fn kind(self) -> GridKind {
        match self {
            GridArg::Uniform => GridKind::Uniform,
            GridArg::Chebyshev => GridKind::ChebyshevShifted,
            GridArg::ChebyshevEnds => GridKind::ChebyshevWithEnds,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Write here (atomically) instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WeightsArgs {
    #[arg(long, value_enum, default_value = "uniform")]
    grid: GridArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    order: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct SolveArgs {
    #[command(subcommand)]
    problem: Option<ProblemCmd>,
    /// JSON file holding one case or `{"cases": [...]}`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Clone)]
struct CommonProblemArgs {
    /// `chebyshev` means the Chebyshev roots plus both endpoints here.
    #[arg(long, value_enum, default_value = "chebyshev")]
    grid: GridArg,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    count: usize,
    #[arg(long, value_enum, default_value = "auto")]
    path: PathArg,
    /// Reference frequencies, comma separated, for relative errors.
    #[arg(long, value_delimiter = ',')]
    reference: Option<Vec<f64>>,
    /// Report multiply counts for dense, two-block and one-block solves on stderr.
    #[arg(long)]
    effort: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Auto,
    Dense,
    Factorized,
}

impl From<PathArg> for PathChoice {
    fn from(p: PathArg) -> Self {
        match p {
            PathArg::Auto => PathChoice::Auto,
            PathArg::Dense => PathChoice::Dense,
            PathArg::Factorized => PathChoice::Factorized,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BeamBcArg {
    SimplySupported,
    ClampedClamped,
}

#[derive(Clone, Copy, ValueEnum)]
enum EdgeArg {
    SimplySupported,
    Clamped,
}

impl From<EdgeArg> for EdgeSupport {
    fn from(e: EdgeArg) -> Self {
        match e {
            EdgeArg::SimplySupported => EdgeSupport::SimplySupported,
            EdgeArg::Clamped => EdgeSupport::Clamped,
        }
    }
}

#[derive(Subcommand, Clone)]
enum ProblemCmd {
    Beam {
        #[command(flatten)]
        common: CommonProblemArgs,
        #[arg(long, value_enum, default_value = "simply-supported")]
        bc: BeamBcArg,
    },
    Plate {
        #[command(flatten)]
        common: CommonProblemArgs,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "simply-supported")]
        bc: EdgeArg,
    },
    SkewPlate {
        #[command(flatten)]
        common: CommonProblemArgs,
        /// Skew angle in degrees, in (0, 90].
        #[arg(long, default_value_t = 90.0)]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, value_enum, default_value = "clamped")]
        bc: EdgeArg,
    },
    ConvDiff {
        #[command(flatten)]
        common: CommonProblemArgs,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        sink: f64,
        /// West-edge values: one per node, or a single value for all.
        #[arg(long, value_delimiter = ',', default_value = "1.0")]
        inlet: Vec<f64>,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, env = "DQ_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ErrorProfileArgs {
    /// exp, sin2pi, runge or monomial:<p>
    #[arg(long = "f", default_value = "exp")]
    function: String,
    #[arg(long, value_enum, default_value = "uniform")]
    grid: GridArg,
    #[arg(long)]
    n: usize,
    /// Assumed bound on the n-th derivative.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[command(flatten)]
    out: OutputArgs,
}

enum CliError {
    Args(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Args(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Args(m) | CliError::Numeric(m) => f.write_str(m),
            CliError::Io(m) => write!(f, "i/o failure: {m}"),
        }
    }
}

impl From<DqError> for CliError {
    fn from(e: DqError) -> Self {
        match e {
            DqError::InvalidArgument(_)
            | DqError::DegenerateGrid { .. }
            | DqError::InsufficientNodes { .. }
            | DqError::NotImplemented(_) => CliError::Args(e.to_string()),
            DqError::ClassificationMismatch { .. } | DqError::Singular { .. } | DqError::NumericFailure(_) => {
                CliError::Numeric(e.to_string())
            }
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Writes to `path` through a temporary file in the same directory, or to stdout.
fn emit(out: &OutputArgs, write: impl FnOnce(&mut dyn Write) -> CliResult<()>) -> CliResult<()> {
    let io = |e: io::Error| CliError::Io(e.to_string());
    match &out.output {
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush().map_err(io)
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            write(tmp.as_file_mut())?;
            tmp.as_file_mut().flush().map_err(io)?;
            tmp.persist(path).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error)))?;
            Ok(())
        }
    }
}

fn json_to(w: &mut dyn Write, value: &impl Serialize) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(w).map_err(|e| CliError::Io(e.to_string()))
}

/// Core CSV writers report sink failures as numeric errors; surface them as I/O.
fn csv_result(r: dqm::Result<()>) -> CliResult<()> {
    r.map_err(|e| CliError::Io(e.to_string()))
}

fn cmd_weights(a: &WeightsArgs) -> CliResult<()> {
    let g = Grid::of_kind(a.grid.kind(), a.n)?;
    let w = higher_order(&g, a.order)?;
    eprintln!("order {} on {} {:?} nodes: {:?}", w.order, w.n, g.kind(), w.symmetry);
    emit(&a.out, |out| match a.out.format {
        Format::Json => json_to(out, &w),
        Format::Csv => csv_result(w.write_csv(out)),
    })
}

fn common_case(c: &CommonProblemArgs, problem: ProblemSpec) -> CaseSpec {
    CaseSpec {
        name: None,
        problem,
        count: c.count,
        path: c.path.into(),
        reference: c.reference.clone(),
    }
}

fn case_from_args(cmd: &ProblemCmd) -> CliResult<(CaseSpec, bool)> {
    let grid_of = |c: &CommonProblemArgs| GridSpec::new(c.grid.kind(), c.n);
    Ok(match cmd {
        ProblemCmd::Beam { common, bc } => {
            let bc = match bc {
                BeamBcArg::SimplySupported => BeamBc::SimplySupported,
                BeamBcArg::ClampedClamped => BeamBc::ClampedClamped,
            };
            (common_case(common, ProblemSpec::Beam { grid: grid_of(common), bc }), common.effort)
        }
        ProblemCmd::Plate { common, alpha, bc } => (
            common_case(
                common,
                ProblemSpec::Plate {
                    grid: grid_of(common),
                    grid_y: None,
                    alpha: *alpha,
                    bc: (*bc).into(),
                },
            ),
            common.effort,
        ),
        ProblemCmd::SkewPlate { common, theta, beta, bc } => (
            common_case(
                common,
                ProblemSpec::SkewPlate {
                    grid: grid_of(common),
                    grid_y: None,
                    theta: *theta,
                    beta: *beta,
                    bc: (*bc).into(),
                },
            ),
            common.effort,
        ),
        ProblemCmd::ConvDiff {
            common,
            alpha,
            beta,
            sink,
            inlet,
        } => {
            let inlet = match inlet.as_slice() {
                [v] => vec![*v; common.n],
                many => many.to_vec(),
            };
            let problem = ProblemSpec::ConvDiff {
                grid: grid_of(common),
                grid_y: None,
                alpha: *alpha,
                beta: *beta,
                sink: *sink,
                inlet,
                east: None,
                south: None,
                north: None,
            };
            (common_case(common, problem), false)
        }
    })
}

fn report_effort(case: &CaseSpec) -> CliResult<()> {
    let op = match &case.problem {
        ProblemSpec::Beam { grid, bc } => beam_operator(&BeamProblem::new(grid.build()?, *bc)?)?,
        ProblemSpec::Plate { grid, alpha, bc, .. } => {
            let g = grid.build()?;
            plate_operator(&PlateProblem::new(g.clone(), g, *alpha, *bc)?)?
        }
        ProblemSpec::SkewPlate { grid, theta, beta, bc, .. } => {
            let g = grid.build()?;
            skew_plate_operator(&SkewPlateProblem::new(g.clone(), g, *theta, *beta, *bc)?)?
        }
        ProblemSpec::ConvDiff { .. } => return Ok(()),
    };
    let e = effort_report(&op)?;
    eprintln!(
        "multiplies: dense {}, both blocks {} ({:.1}% saved), symmetric block only {} ({:.1}% saved)",
        e.dense,
        e.two_block,
        100.0 * (1.0 - e.two_block_ratio()),
        e.one_block,
        100.0 * (1.0 - e.one_block_ratio())
    );
    Ok(())
}

fn write_field_csv(out: &mut dyn Write, s: &ConvDiffSolution, gx: &Grid, gy: &Grid) -> CliResult<()> {
    let io = |e: io::Error| CliError::Io(e.to_string());
    writeln!(out, "i,j,x,y,phi").map_err(io)?;
    for j in 0..gy.n() {
        for i in 0..gx.n() {
            writeln!(
                out,
                "{},{},{:.17e},{:.17e},{:.17e}",
                i + 1,
                j + 1,
                gx.nodes()[i],
                gy.nodes()[j],
                s.values[(i, j)]
            )
            .map_err(io)?;
        }
    }
    Ok(())
}

fn run_cases(cases: &[CaseSpec]) -> Vec<CliResult<CaseOutput>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = cases.iter().map(|c| s.spawn(move || c.run())).collect();
        handles
            .into_iter()
            .map(|h| match h.join() {
                Ok(r) => r.map_err(CliError::from),
                Err(_) => Err(CliError::Numeric("solver thread panicked".into())),
            })
            .collect()
    })
}

fn cmd_solve(a: &SolveArgs) -> CliResult<()> {
    let (cases, effort) = match (&a.problem, &a.config) {
        (Some(cmd), None) => {
            let (case, effort) = case_from_args(cmd)?;
            (vec![case], effort)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            (parse_cases(&text)?, false)
        }
        _ => return Err(CliError::Args("give a problem subcommand or --config".into())),
    };
    if cases.len() > 1 && matches!(a.out.format, Format::Csv) {
        return Err(CliError::Args("batch configs with several cases need --format json".into()));
    }
    let started = Instant::now();
    let outputs: Vec<CaseOutput> = run_cases(&cases).into_iter().collect::<CliResult<_>>()?;
    eprintln!("solved {} case(s) in {:.1} ms", outputs.len(), started.elapsed().as_secs_f64() * 1e3);
    if effort {
        report_effort(&cases[0])?;
    }
    emit(&a.out, |out| match a.out.format {
        Format::Json if outputs.len() == 1 => json_to(out, &outputs[0]),
        Format::Json => json_to(out, &outputs),
        Format::Csv => match &outputs[0] {
            CaseOutput::Frequencies { result, .. } => csv_result(result.write_csv(out, cases[0].reference.as_deref())),
            CaseOutput::Field { solution, .. } => {
                let (gx, gy) = match &cases[0].problem {
                    ProblemSpec::ConvDiff { grid, grid_y, .. } => {
                        let gx = grid.build()?;
                        let gy = grid_y.as_ref().map(|g| g.build()).transpose()?.unwrap_or_else(|| gx.clone());
                        (gx, gy)
                    }
                    _ => unreachable!("field output only comes from conv-diff"),
                };
                write_field_csv(out, solution, &gx, &gy)
            }
        },
    })
}

fn cmd_bench(a: &BenchArgs) -> CliResult<()> {
    let started = Instant::now();
    let report = bench_structured(&a.sizes, a.trials, a.seed)?;
    eprintln!("bench wall clock {:.1} ms (seed {})", started.elapsed().as_secs_f64() * 1e3, a.seed);
    emit(&a.out, |out| match a.out.format {
        Format::Json => json_to(out, &report),
        Format::Csv => csv_result(report.write_csv(out)),
    })
}

fn cmd_error_profile(a: &ErrorProfileArgs) -> CliResult<()> {
    let f: TestFunction = a.function.parse()?;
    let g = Grid::of_kind(a.grid.kind(), a.n)?;
    let (v, dv) = f.sample(&g);
    let report = truncation_profile(&g, &v, &dv, a.k)?;
    eprintln!("{f}: max |error| {:.3e} at node {} of {}", report.max_error, report.argmax, g.n());
    emit(&a.out, |out| match a.out.format {
        Format::Json => json_to(out, &report),
        Format::Csv => csv_result(report.write_csv(out)),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Weights(a) => cmd_weights(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::ErrorProfile(a) => cmd_error_profile(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dqm: {e}");
            ExitCode::from(e.code())
        }
    }
}
