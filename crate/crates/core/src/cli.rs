//! The `mpqw` command-line tool.
//!
//! Exit codes: 0 success, 1 I/O or verification failure, 2 usage error,
//! 3 domain guard (for example no marked vertices, or a graph too large
//! for the requested engine).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{self, CostModel};
use crate::error::Error;
use crate::fixedpoint::{self, RobustSchedule};
use crate::fullsim::EdgeState;
use crate::graph::{GraphConfig, MarkedSets};
use crate::spectral;
use crate::subspace::{self, InitialMode, SubspaceState};

pub const CSV_HEADER: &str = "# mpqw-csv v1";

/// Renders a float with 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
    Io(io::Error),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "mpqw",
    version,
    about = "Quantum-walk search on complete M-partite graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plain or parameterized walk with fixed phases; CSV per step.
    Simulate(SimulateArgs),
    /// Robust walk with a fixed-point schedule; CSV per pair of steps.
    Robust(RobustArgs),
    /// Print a fixed-point phase schedule.
    Schedule(ScheduleArgs),
    /// Phase gap, optimal step count and classical comparison.
    Spectrum(SpectrumArgs),
    /// Compile one walk step to gates.
    Circuit(CircuitArgs),
    /// Final robust success probability over a range of t.
    Sweep(SweepArgs),
}

fn parse_case(s: &str) -> Result<MarkedSets, String> {
    s.parse::<u8>()
        .ok()
        .and_then(|t| MarkedSets::from_tag(t).ok())
        .ok_or_else(|| format!("case must be 1 or 2, got '{s}'"))
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// 1: n marked vertices in every set; 2: n marked vertices in set 0 only.
    #[arg(long, value_parser = parse_case)]
    pub case: MarkedSets,
    /// Number of sets.
    #[arg(long = "M")]
    pub sets: usize,
    /// Vertices per set.
    #[arg(long = "N")]
    pub set_size: usize,
    /// Marked vertices per marked set.
    #[arg(long = "n")]
    pub marked: usize,
}

impl GraphArgs {
    fn config(&self) -> CliResult<GraphConfig> {
        Ok(GraphConfig::new(
            self.sets,
            self.set_size,
            self.marked,
            self.case,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Steps {
    Auto,
    Fixed(usize),
}

fn parse_steps(s: &str) -> Result<Steps, String> {
    if s == "auto" {
        return Ok(Steps::Auto);
    }
    s.parse()
        .map(Steps::Fixed)
        .map_err(|_| format!("steps must be a count or 'auto', got '{s}'"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Subspace,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialArg {
    /// Uniform superposition over all arcs.
    Exact,
    /// Large-graph approximation: |bb> (marks in every set) or |cc> (one set).
    Paper,
}

impl From<InitialArg> for InitialMode {
    fn from(a: InitialArg) -> Self {
        match a {
            InitialArg::Exact => InitialMode::Exact,
            InitialArg::Paper => InitialMode::Asymptotic,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Step count, or `auto` for the spectral optimum.
    #[arg(long, value_parser = parse_steps)]
    pub steps: Steps,
    #[arg(long, default_value_t = std::f64::consts::PI, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = std::f64::consts::PI, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = Engine::Subspace)]
    pub engine: Engine,
    #[arg(long, value_enum, default_value_t = InitialArg::Exact)]
    pub initial: InitialArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RobustArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub epsilon: f64,
    /// Number of step pairs; defaults to the guaranteed threshold.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value_t = InitialArg::Exact)]
    pub initial: InitialArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundFor {
    Case1,
    Case2,
}

#[derive(Debug, Clone, Args)]
pub struct ScheduleArgs {
    #[arg(long, required_unless_present = "from")]
    pub epsilon: Option<f64>,
    #[arg(long, conflicts_with = "bound_for")]
    pub t: Option<usize>,
    /// Take t from the threshold for the given layout (needs --M and --N).
    #[arg(long, value_enum, requires = "set_size")]
    pub bound_for: Option<BoundFor>,
    #[arg(long = "M")]
    pub sets: Option<usize>,
    #[arg(long = "N")]
    pub set_size: Option<usize>,
    /// Re-read a schedule file and print it again.
    #[arg(long, conflicts_with_all = ["epsilon", "t", "bound_for"])]
    pub from: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CircuitArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = std::f64::consts::PI, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = std::f64::consts::PI, allow_negative_numbers = true)]
    pub beta: f64,
    /// Compare with the edge-space step on every arc.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub t_min: usize,
    #[arg(long)]
    pub t_max: usize,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn write_output(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Whether a run follows fixed phases or a robust schedule.
#[derive(Debug, Clone, PartialEq)]
pub enum RunMode {
    Plain {
        alpha: f64,
        beta: f64,
        engine: Engine,
    },
    Robust {
        schedule: RobustSchedule,
        threshold_t: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub step: usize,
    pub p_success: f64,
    pub amplitudes: Vec<Complex64>,
}

/// Result of a simulate or robust run, serialized as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub config: GraphConfig,
    pub initial: InitialMode,
    pub mode: RunMode,
    pub rows: Vec<Row>,
}

impl RunRecord {
    fn row(step: usize, p_success: f64, state: &SubspaceState) -> Row {
        Row {
            step,
            p_success: p_success.clamp(0.0, 1.0),
            amplitudes: state.amplitudes().iter().copied().collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        let initial = match self.initial {
            InitialMode::Exact => "exact",
            InitialMode::Asymptotic => "paper",
        };
        let _ = write!(
            out,
            "# case={} M={} N={} n={} initial={initial}",
            c.case().tag(),
            c.sets(),
            c.set_size(),
            c.marked()
        );
        match &self.mode {
            RunMode::Plain {
                alpha,
                beta,
                engine,
            } => {
                let engine = match engine {
                    Engine::Subspace => "subspace",
                    Engine::Full => "full",
                };
                let _ = writeln!(
                    out,
                    " mode=plain engine={engine} alpha={} beta={}",
                    fmt_float(*alpha),
                    fmt_float(*beta)
                );
            }
            RunMode::Robust { schedule, .. } => {
                let _ = writeln!(
                    out,
                    " mode=robust epsilon={} t={} L={} gamma={}",
                    fmt_float(schedule.epsilon()),
                    schedule.t(),
                    schedule.sequence_length(),
                    fmt_float(schedule.gamma())
                );
            }
        }
        out.push_str("step,p_success");
        for k in 1..=subspace::dimension(c.case()) {
            let _ = write!(out, ",re_a{k},im_a{k}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{},{}", row.step, fmt_float(row.p_success));
            for a in &row.amplitudes {
                let _ = write!(out, ",{},{}", fmt_float(a.re), fmt_float(a.im));
            }
            out.push('\n');
        }
        if let RunMode::Robust {
            schedule,
            threshold_t,
        } = &self.mode
        {
            let final_p = self.rows.last().map_or(0.0, |r| r.p_success);
            let _ = writeln!(
                out,
                "# summary final_p={} t={} threshold_t={threshold_t} epsilon={}",
                fmt_float(final_p),
                schedule.t(),
                fmt_float(schedule.epsilon())
            );
        }
        out
    }
}

fn auto_steps(config: &GraphConfig) -> CliResult<usize> {
    Ok(match config.case() {
        MarkedSets::EverySet => spectral::optimal_steps_case1(config)?.0,
        MarkedSets::OneSet => {
            spectral::optimal_steps_case2(config.sets(), config.set_size(), config.marked())?
        }
    })
}

pub fn simulate(args: &SimulateArgs) -> CliResult<RunRecord> {
    let config = args.graph.config()?;
    let steps = match args.steps {
        Steps::Auto => auto_steps(&config)?,
        Steps::Fixed(s) => s,
    };
    let initial: InitialMode = args.initial.into();
    let rows = match args.engine {
        Engine::Subspace => {
            let op = subspace::operator(&config, args.alpha, args.beta)?;
            let start = subspace::initial_state(&config, initial)?;
            subspace::evolve(&start, &op, steps)?
                .iter()
                .enumerate()
                .map(|(k, s)| RunRecord::row(k, s.success(), s))
                .collect()
        }
        Engine::Full => {
            if initial != InitialMode::Exact {
                return Err(CliError::Usage(
                    "--initial paper is only available with --engine subspace".into(),
                ));
            }
            let mut state = EdgeState::uniform(config)?;
            let mut rows = Vec::with_capacity(steps + 1);
            for k in 0..=steps {
                if k > 0 {
                    state = state.walk_step(args.alpha, args.beta);
                }
                let (projected, _) = state.project();
                rows.push(RunRecord::row(k, state.success_probability(), &projected));
            }
            rows
        }
    };
    Ok(RunRecord {
        config,
        initial,
        mode: RunMode::Plain {
            alpha: args.alpha,
            beta: args.beta,
            engine: args.engine,
        },
        rows,
    })
}

fn threshold(config: &GraphConfig, epsilon: f64) -> CliResult<usize> {
    Ok(match config.case() {
        MarkedSets::EverySet => fixedpoint::min_steps_case1(epsilon, config.set_size())?,
        MarkedSets::OneSet => {
            fixedpoint::min_steps_case2(epsilon, config.sets(), config.set_size())?
        }
    })
}

pub fn robust(args: &RobustArgs) -> CliResult<RunRecord> {
    let config = args.graph.config()?;
    let threshold_t = threshold(&config, args.epsilon)?;
    let schedule = RobustSchedule::generate(args.epsilon, args.t.unwrap_or(threshold_t))?;
    let initial: InitialMode = args.initial.into();
    let start = subspace::initial_state(&config, initial)?;
    let rows = subspace::evolve_robust_from(&config, &schedule, &start)?
        .iter()
        .enumerate()
        .step_by(2)
        .map(|(k, s)| RunRecord::row(k, s.success(), s))
        .collect();
    Ok(RunRecord {
        config,
        initial,
        mode: RunMode::Robust {
            schedule,
            threshold_t,
        },
        rows,
    })
}

pub fn schedule(args: &ScheduleArgs) -> CliResult<RobustSchedule> {
    if let Some(path) = &args.from {
        let text = std::fs::read_to_string(path)?;
        return Ok(RobustSchedule::from_kv_str(&text)?);
    }
    let epsilon = args
        .epsilon
        .ok_or_else(|| CliError::Usage("--epsilon is required".into()))?;
    let t = match (args.t, args.bound_for) {
        (Some(t), None) => t,
        (None, Some(bound)) => {
            let n = args
                .set_size
                .ok_or_else(|| CliError::Usage("--bound-for needs --N".into()))?;
            match bound {
                BoundFor::Case1 => fixedpoint::min_steps_case1(epsilon, n)?,
                BoundFor::Case2 => {
                    let m = args
                        .sets
                        .ok_or_else(|| CliError::Usage("--bound-for case2 needs --M".into()))?;
                    fixedpoint::min_steps_case2(epsilon, m, n)?
                }
            }
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --t and --bound-for".into(),
            ))
        }
    };
    Ok(RobustSchedule::generate(epsilon, t)?)
}

pub fn spectrum(args: &SpectrumArgs) -> CliResult<String> {
    let config = args.graph.config()?;
    if config.marked() == 0 {
        return Err(Error::NoMarkedVertices.into());
    }
    let s = spectral::summary(&config)?;
    let classical = match config.case() {
        MarkedSets::EverySet => config.set_size() as f64 / config.marked() as f64,
        MarkedSets::OneSet => (config.sets() * config.set_size()) as f64 / config.marked() as f64,
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "case={} M={} N={} n={}",
        config.case().tag(),
        config.sets(),
        config.set_size(),
        config.marked()
    );
    let _ = writeln!(out, "omega={}", fmt_float(s.omega));
    match s.t_odd {
        Some(odd) => {
            let _ = writeln!(out, "t_even={}", s.t_even);
            let _ = writeln!(out, "t_odd={odd}");
        }
        None => {
            let _ = writeln!(out, "t_opt={}", s.t_even);
        }
    }
    let _ = writeln!(
        out,
        "predicted_max_probability={}",
        fmt_float(s.predicted_max_probability)
    );
    let _ = writeln!(out, "classical_queries={}", fmt_float(classical));
    let _ = writeln!(out, "quantum_steps={}", s.t_even);
    let _ = writeln!(out, "speedup={}", fmt_float(classical / s.t_even as f64));
    Ok(out)
}

/// Verification tolerance for `circuit --verify`.
pub const CIRCUIT_TOLERANCE: f64 = 1e-12;

pub fn circuit_cmd(
    args: &CircuitArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    let config = args.graph.config()?;
    let c = circuit::build_step(&config, args.alpha, args.beta)?;
    write_output(&args.out, &circuit::emit(&c), stdout)?;
    let counts = c.gate_counts(&CostModel::default());
    write!(stderr, "{}", counts.report())?;
    if args.verify {
        let dev = circuit::verify_step(&config, args.alpha, args.beta)?;
        writeln!(stderr, "max_deviation={}", fmt_float(dev))?;
        if dev >= CIRCUIT_TOLERANCE {
            return Err(CliError::Verification(format!(
                "deviation {dev} exceeds {CIRCUIT_TOLERANCE}"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub t: usize,
    pub steps: usize,
    pub at_or_above_threshold: bool,
    pub p_final: f64,
}

/// Pair counts sampled in `[t_min, t_max]`: even values for marks in
/// every set, every value for a single marked set.
pub fn sweep_points(case: MarkedSets, t_min: usize, t_max: usize) -> Vec<usize> {
    (t_min.max(1)..=t_max)
        .filter(|t| case == MarkedSets::OneSet || t % 2 == 0)
        .collect()
}

pub fn sweep(args: &SweepArgs) -> CliResult<(Vec<SweepPoint>, usize)> {
    let config = args.graph.config()?;
    if args.t_min > args.t_max || args.t_max == 0 {
        return Err(CliError::Usage(format!(
            "invalid range t_min={} t_max={}",
            args.t_min, args.t_max
        )));
    }
    let threshold_t = threshold(&config, args.epsilon)?;
    let start = subspace::initial_state(&config, InitialMode::Exact)?;
    let points = sweep_points(config.case(), args.t_min, args.t_max);
    if points.is_empty() {
        return Err(CliError::Usage("range contains no sample points".into()));
    }
    let rows = points
        .par_iter()
        .map(|&t| -> crate::Result<SweepPoint> {
            let schedule = RobustSchedule::generate(args.epsilon, t)?;
            let traj = subspace::evolve_robust_from(&config, &schedule, &start)?;
            Ok(SweepPoint {
                t,
                steps: 2 * t,
                at_or_above_threshold: t >= threshold_t,
                p_final: traj.last().expect("trajectory is never empty").success(),
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    Ok((rows, threshold_t))
}

pub fn sweep_csv(args: &SweepArgs, points: &[SweepPoint], threshold_t: usize) -> String {
    let g = &args.graph;
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    let _ = writeln!(
        out,
        "# case={} M={} N={} n={} mode=sweep epsilon={} threshold_t={threshold_t}",
        g.case.tag(),
        g.sets,
        g.set_size,
        g.marked,
        fmt_float(args.epsilon)
    );
    out.push_str("t,steps,at_or_above_threshold,p_final\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.t,
            p.steps,
            u8::from(p.at_or_above_threshold),
            fmt_float(p.p_final)
        );
    }
    out
}

/// Guaranteed lower bound on the final success probability.
pub fn success_band(case: MarkedSets, epsilon: f64) -> f64 {
    match case {
        MarkedSets::EverySet => 1.0 - epsilon * epsilon,
        MarkedSets::OneSet => 1.0 - epsilon,
    }
}

/// Line plot of final success probability against step count.
pub fn sweep_svg(points: &[SweepPoint], band: f64) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 50.0;
    let x_min = points.first().map_or(0.0, |p| p.steps as f64);
    let x_max = points.last().map_or(1.0, |p| p.steps as f64);
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let y_min = points
        .iter()
        .map(|p| p.p_final)
        .fold(band, f64::min)
        .min(0.99 * band)
        .max(0.0);
    let y_span = (1.0 - y_min).max(1e-9);
    let sx = |x: f64| PAD + (x - x_min) / x_span * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y_min) / y_span * (H - 2.0 * PAD);
    let coords: Vec<String> = points
        .iter()
        .map(|p| format!("{:.2},{:.2}", sx(p.steps as f64), sy(p.p_final)))
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#
    );
    let (x0, x1, y0, y1) = (PAD, W - PAD, H - PAD, PAD);
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    );
    let by = sy(band);
    let _ = writeln!(
        out,
        r#"<line class="band" x1="{x0}" y1="{by:.2}" x2="{x1}" y2="{by:.2}" stroke="red" stroke-dasharray="4 4"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{x0}" y="{:.2}" font-size="11">{}</text>"#,
        by - 4.0,
        format_args!("band {band:.6}")
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">steps</text>"#,
        W / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" font-size="12" transform="rotate(-90 14 {})" text-anchor="middle">success probability</text>"#,
        H / 2.0,
        H / 2.0
    );
    for (label, x) in [(x_min, sx(x_min)), (x_max, sx(x_max))] {
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{}" font-size="10" text-anchor="middle">{label}</text>"#,
            H - PAD + 14.0
        );
    }
    for (label, y) in [(y_min, sy(y_min)), (1.0, sy(1.0))] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{y:.2}" font-size="10" text-anchor="end">{label:.4}</text>"#,
            PAD - 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="blue" points="{}"/>"#,
        coords.join(" ")
    );
    out.push_str("</svg>\n");
    out
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Simulate(a) => {
            let record = simulate(&a)?;
            write_output(&a.out, &record.to_csv(), stdout)
        }
        Command::Robust(a) => {
            let record = robust(&a)?;
            write_output(&a.out, &record.to_csv(), stdout)
        }
        Command::Schedule(a) => {
            let s = schedule(&a)?;
            write_output(&a.out, &s.to_kv_string(), stdout)
        }
        Command::Spectrum(a) => {
            let report = spectrum(&a)?;
            stdout.write_all(report.as_bytes())?;
            Ok(())
        }
        Command::Circuit(a) => circuit_cmd(&a, stdout, stderr),
        Command::Sweep(a) => {
            let (points, threshold_t) = sweep(&a)?;
            write_output(&a.out, &sweep_csv(&a, &points, threshold_t), stdout)?;
            if let Some(path) = &a.svg {
                write_svg(path, &points, success_band(a.graph.case, a.epsilon))?;
            }
            Ok(())
        }
    }
}

fn write_svg(path: &Path, points: &[SweepPoint], band: f64) -> CliResult<()> {
    std::fs::write(path, sweep_svg(points, band))?;
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("mpqw").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn command_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn float_format_has_twelve_digits() {
        assert_eq!(fmt_float(0.5), "5.00000000000e-1");
        assert_eq!(fmt_float(std::f64::consts::PI), "3.14159265359e0");
    }

    #[test]
    fn sweep_sampling() {
        assert_eq!(sweep_points(MarkedSets::EverySet, 3, 9), vec![4, 6, 8]);
        assert_eq!(sweep_points(MarkedSets::OneSet, 3, 5), vec![3, 4, 5]);
        assert_eq!(sweep_points(MarkedSets::OneSet, 0, 1), vec![1]);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["simulate"]).0, 2);
        assert_eq!(
            run_capture(&[
                "simulate", "--case", "3", "--M", "3", "--N", "4", "--n", "1", "--steps", "1"
            ])
            .0,
            2
        );
        let (code, _, err) = run_capture(&[
            "simulate",
            "--case",
            "1",
            "--M",
            "3",
            "--N",
            "4",
            "--n",
            "1",
            "--steps",
            "1",
            "--engine",
            "full",
            "--initial",
            "paper",
        ]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn domain_errors_exit_three() {
        let (code, _, err) = run_capture(&[
            "simulate", "--case", "1", "--M", "3", "--N", "4", "--n", "0", "--steps", "auto",
        ]);
        assert_eq!(code, 3);
        assert!(err.contains("no marked vertices"));
        let (code, _, _) =
            run_capture(&["circuit", "--case", "1", "--M", "4", "--N", "2", "--n", "1"]);
        assert_eq!(code, 3);
    }

    #[test]
    fn svg_band_and_polyline() {
        let pts = vec![
            SweepPoint {
                t: 2,
                steps: 4,
                at_or_above_threshold: false,
                p_final: 0.5,
            },
            SweepPoint {
                t: 4,
                steps: 8,
                at_or_above_threshold: true,
                p_final: 0.95,
            },
        ];
        let svg = sweep_svg(&pts, 0.9);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("class=\"band\""));
    }
}
