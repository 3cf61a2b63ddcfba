//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 verification failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{Budget, ExperimentConfig, OutputFormat, SnrGrid, TopologySpec};
use super::sweep::{run_snr_sweep, write_sweep};
use super::verify::{verify_daisy_optimality, verify_star_optimality, verify_time_bounds};
use crate::crlb::{
    budgeted_average_crlb, crlb_closed_form, crlb_numeric, fisher_matrix, ScenarioParams,
};
use crate::estimator::{collapse_repetitions, estimation_error, ml_estimate};
use crate::simulate::{draw_gains, synthesize, MeasurementSet, RfGains};
use crate::topology::Topology;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "selfcal", version, about = "Self-calibration analysis for TDD massive-MIMO arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-antenna and average Cramér-Rao bounds.
    Crlb(CrlbArgs),
    /// Parallel measurement schedule as JSON.
    Schedule(ScheduleArgs),
    /// Synthesize a measurement set, or replay one through the estimator.
    Simulate(SimulateArgs),
    /// Monte-Carlo SNR sweep comparing MSE with the bound.
    Sweep(SweepArgs),
    /// Exhaustive verification of the wiring optimality results.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct TopologyArgs {
    /// star, daisy or file:<path to topology JSON>.
    #[arg(long, default_value = "star")]
    topology: String,
    /// Number of antennas (taken from the file when omitted).
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// Reference antenna index.
    #[arg(long = "ref", default_value_t = 1)]
    reference: usize,
}

impl TopologyArgs {
    fn build(&self) -> Result<Topology, Error> {
        let spec: TopologySpec = self.topology.parse()?;
        if self.m == 0 && !matches!(spec, TopologySpec::File(_)) {
            return Err(crate::topology::TopologyError::InvalidAntennaCount(0).into());
        }
        Ok(spec.build(self.m, self.reference)?)
    }
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// SNR in dB; sets the noise variance (overrides --noise-variance).
    #[arg(long)]
    snr_db: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    noise_variance: f64,
    /// Line gain as `re,im`.
    #[arg(long, default_value = "1,0")]
    line_gain: String,
    #[arg(long, default_value_t = 1.0)]
    tx_amplitude: f64,
    #[arg(long, default_value_t = 1.0)]
    rx_amplitude: f64,
    /// Seconds per sounding slot.
    #[arg(long, default_value_t = 1.0)]
    slot_duration: f64,
}

impl ScenarioArgs {
    fn build(&self) -> Result<ScenarioParams, Error> {
        let parts: Vec<f64> = self
            .line_gain
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| super::ConfigError::Scenario(format!("bad line gain `{}`", self.line_gain)))?;
        let h = match parts.as_slice() {
            [re] => Complex64::new(*re, 0.0),
            [re, im] => Complex64::new(*re, *im),
            _ => {
                return Err(super::ConfigError::Scenario(format!(
                    "bad line gain `{}`",
                    self.line_gain
                ))
                .into())
            }
        };
        let s = ScenarioParams::new(
            h,
            self.noise_variance,
            self.tx_amplitude,
            self.rx_amplitude,
            self.slot_duration,
        )?;
        let s = match self.snr_db {
            Some(db) => s.with_snr_db(db),
            None => s,
        };
        Ok(s)
    }
}

#[derive(Debug, Args)]
struct CrlbArgs {
    #[command(flatten)]
    topology: TopologyArgs,
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// time:<slots>; the default is one collection round.
    #[arg(long)]
    budget: Option<String>,
    /// Also invert the Fisher matrix for gains drawn with --seed.
    #[arg(long)]
    numeric: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScheduleArgs {
    #[command(flatten)]
    topology: TopologyArgs,
    #[arg(long, default_value_t = 1.0)]
    slot_duration: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    topology: TopologyArgs,
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Repetitions I of every directed measurement.
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Estimate from a previously dumped simulation instead of synthesizing.
    #[arg(long)]
    replay: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// JSON experiment config; flags below are ignored when given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    topology: TopologyArgs,
    /// time:<slots> or measurements:<count>.
    #[arg(long)]
    budget: Option<String>,
    /// lo:hi:step in dB, or a comma-separated list.
    #[arg(long, default_value = "10:40:5")]
    snr: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Check {
    /// Reference-centered star minimizes the mean calibration distance.
    #[value(alias = "1")]
    StarOptimality,
    /// Collection time lies between 4 slots and 2(M-1) slots.
    #[value(alias = "2")]
    TimeBounds,
    /// Central daisy minimizes the budgeted average bound.
    #[value(alias = "3")]
    DaisyOptimality,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Which property to check exhaustively (`--prop 1|2|3` also accepted).
    #[arg(long, value_enum, alias = "prop")]
    check: Check,
    #[arg(long)]
    m: usize,
    /// Upper end of the antenna range (daisy-optimality only).
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long = "ref", default_value_t = 1)]
    reference: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Everything needed to replay a synthetic run through the estimator.
#[derive(Debug, Serialize, Deserialize)]
pub struct SimulationDump {
    pub topology: Topology,
    pub scenario: ScenarioParams,
    pub gains: RfGains,
    pub measurements: MeasurementSet,
}

fn open_output<'a>(out: Option<&Path>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, Error> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    })
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Error> {
    let mut w = open_output(out, stdout)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn run_crlb(args: &CrlbArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    let t = args.topology.build()?;
    let s = args.scenario.build()?;
    let format: OutputFormat = args.format.parse()?;
    let report = match args.budget.as_deref() {
        None => crlb_closed_form(&t, &s)?,
        Some(b) => match b.parse::<Budget>()? {
            Budget::Time(slots) => budgeted_average_crlb(&t, &s, slots)?,
            Budget::Measurements(_) => {
                return Err(super::ConfigError::BudgetSyntax(format!("{b} (crlb accepts time:<slots>)")).into())
            }
        },
    };
    let numeric = if args.numeric {
        let gains = draw_gains(t.m(), &s, args.seed);
        Some(crlb_numeric(&fisher_matrix(&t, &gains, &s)?)?)
    } else {
        None
    };
    match format {
        OutputFormat::Csv => {
            let mut w = open_output(args.out.as_deref(), stdout)?;
            report.write_csv(&mut w)?;
            w.flush()?;
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                closed_form: &'a crate::crlb::CrlbReport,
                #[serde(skip_serializing_if = "Option::is_none")]
                numeric: Option<crate::crlb::NumericCrlb>,
            }
            write_json(
                &Out {
                    closed_form: &report,
                    numeric,
                },
                args.out.as_deref(),
                stdout,
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn run_schedule(args: &ScheduleArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    let t = args.topology.build()?;
    if !(args.slot_duration > 0.0) {
        return Err(super::ConfigError::Scenario("slot duration must be positive".into()).into());
    }
    write_json(&t.measurement_schedule(args.slot_duration), args.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn run_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    if let Some(path) = &args.replay {
        let dump: SimulationDump = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if !dump.measurements.matches(&dump.topology) {
            return Err(super::ConfigError::Scenario(
                "measurement set does not match its topology".into(),
            )
            .into());
        }
        let f = dump.topology.reference();
        let collapsed = collapse_repetitions(&dump.measurements);
        let estimates = ml_estimate(
            &collapsed,
            &dump.topology,
            &dump.scenario,
            dump.gains.alpha(f),
            dump.gains.beta(f),
        )?;
        let errors = estimation_error(&estimates, &dump.gains)?;
        #[derive(Serialize)]
        struct Out {
            estimates: crate::estimator::GainEstimates,
            errors: crate::estimator::EstimationError,
        }
        write_json(&Out { estimates, errors }, args.out.as_deref(), stdout)?;
        return Ok(EXIT_OK);
    }

    let t = args.topology.build()?;
    let s = args.scenario.build()?;
    if args.reps == 0 {
        return Err(super::ConfigError::Scenario("--reps must be at least 1".into()).into());
    }
    let gains = draw_gains(t.m(), &s, crate::seed::derive(args.seed, &[0]));
    let measurements = synthesize(&t, &gains, &s, args.reps, crate::seed::derive(args.seed, &[1]));
    let dump = SimulationDump {
        topology: t,
        scenario: s,
        gains,
        measurements,
    };
    write_json(&dump, args.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn run_sweep(args: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Error> {
    let cfg = match &args.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => {
            let spec: TopologySpec = args.topology.topology.parse()?;
            let mut cfg = ExperimentConfig::new(spec, args.topology.m, args.topology.reference);
            cfg.snr_grid_db = args.snr.parse::<SnrGrid>()?;
            cfg.trials = args.trials;
            cfg.master_seed = args.seed;
            cfg.budget = args.budget.as_deref().map(str::parse).transpose()?;
            cfg.output_path = args.out.clone();
            if let Some(f) = &args.format {
                cfg.output_format = f.parse()?;
            } else if args.out.as_ref().and_then(|p| p.extension()).is_some_and(|e| e == "json") {
                cfg.output_format = OutputFormat::Json;
            }
            cfg
        }
    };
    let rows = run_snr_sweep(&cfg)?;
    for row in rows.iter().filter(|r| r.flagged()) {
        writeln!(
            stderr,
            "warning: {} dB: division-hazard rate {:.2}% exceeds 1%",
            row.snr_db,
            100.0 * row.hazard_rate
        )?;
    }
    let w = open_output(cfg.output_path.as_deref(), stdout)?;
    write_sweep(&rows, cfg.output_format, w)?;
    Ok(EXIT_OK)
}

fn run_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    let out = args.out.as_deref();
    let passed = match args.check {
        Check::StarOptimality => {
            let r = verify_star_optimality(args.m, args.reference)?;
            write_json(&r, out, stdout)?;
            r.passed
        }
        Check::TimeBounds => {
            let r = verify_time_bounds(args.m)?;
            write_json(&r, out, stdout)?;
            r.passed
        }
        Check::DaisyOptimality => {
            let hi = args.m_max.unwrap_or(args.m);
            let r = verify_daisy_optimality(args.m..=hi)?;
            write_json(&r, out, stdout)?;
            r.passed
        }
    };
    Ok(if passed { EXIT_OK } else { EXIT_VERIFICATION })
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Crlb(a) => run_crlb(a, stdout),
        Command::Schedule(a) => run_schedule(a, stdout),
        Command::Simulate(a) => run_simulate(a, stdout),
        Command::Sweep(a) => run_sweep(a, stdout, stderr),
        Command::Verify(a) => run_verify(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_VALIDATION
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
