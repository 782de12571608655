//! `qfb` — command-line runner for the feedback simulator.
//!
//! Subcommands: `predict`, `run`, `ramsey`, `init-map`, `latency`,
//! `calibrate`, `validate`. Every command is deterministic given its flags
//! and `--seed`; rerunning produces byte-identical output files.
//!
//! Exit codes: 0 success, 2 input error (bad flags, config, or sequence
//! file), 3 internal invariant violation.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qfb_core::feedback::{
    build_initialization, predict_final, run_schedule, Branch, FeedbackSpec, PulseTiming,
    SimOptions,
};
use qfb_core::harness::experiments::convergence_columns;
use qfb_core::harness::{
    calibrate_rabi, fringe_frequency, initialization_map, latency_budget, ramsey_during_readout,
    Axis, DecoherenceParams, InitMapConfig, LatencyMode, LatencyModel, RabiCalibration,
    RamseyPrep, SweepSpec,
};
use qfb_core::seqlang::{lower, parse};
use qfb_core::{DeviceParams, PureState, RandomSource};

use config::DeviceConfig;
use output::{format_sig, write_output, CliError, CliResult};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Parser)]
#[command(name = "qfb", version, about = "Measurement-conditioned qubit feedback simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Device config file (TOML, flat keys with units in their names).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed for all randomness.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form final states of both measurement branches.
    Predict {
        #[command(flatten)]
        common: Common,
        /// Ground-branch angle, e.g. `180deg`, `3.14rad` or plain radians.
        #[arg(long, default_value = "180deg")]
        theta1: String,
        /// Excited-branch angle.
        #[arg(long, default_value = "180deg")]
        theta2: String,
        /// Excited-branch phase.
        #[arg(long, default_value = "0rad")]
        phi: String,
    },
    /// Execute a `.seq` file for N shots and write the outcome CSV.
    Run {
        #[command(flatten)]
        common: Common,
        /// Sequence file.
        seq_file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        /// Initial qubit state.
        #[arg(long, value_enum, default_value_t = InitialState::Ground)]
        initial: InitialState,
        #[arg(long, value_enum, default_value_t = TimingArg::Instantaneous)]
        timing: TimingArg,
    },
    /// Readout-window Ramsey traces for the π and 2π preparations.
    Ramsey {
        #[command(flatten)]
        common: Common,
        /// Override the High−Low shift difference (MHz).
        #[arg(long)]
        delta_omega_mhz: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        gap_start_ns: f64,
        #[arg(long, default_value_t = 20.0)]
        gap_stop_ns: f64,
        #[arg(long, default_value_t = 0.1)]
        gap_step_ns: f64,
        #[arg(long, default_value_t = 10_000)]
        shots: usize,
    },
    /// The (τ1, τ2) initialization colormap.
    InitMap {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        delta_omega_mhz: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        tau1_start_ns: f64,
        #[arg(long, default_value_t = 6.0)]
        tau1_stop_ns: f64,
        #[arg(long, default_value_t = 0.1)]
        tau1_step_ns: f64,
        #[arg(long, default_value_t = 0.0)]
        tau2_start_ns: f64,
        #[arg(long, default_value_t = 20.0)]
        tau2_stop_ns: f64,
        #[arg(long, default_value_t = 0.5)]
        tau2_step_ns: f64,
        #[arg(long, default_value_t = 200)]
        shots: usize,
        /// Calibrated π-pulse duration.
        #[arg(long, default_value_t = 0.9)]
        pi_ns: f64,
        /// Calibrated prep-pulse time offset.
        #[arg(long, default_value_t = 0.8)]
        t0_ns: f64,
        #[arg(long, value_enum, default_value_t = TimingArg::Instantaneous)]
        timing: TimingArg,
        /// Energy-relaxation time (µs); noiseless when omitted.
        #[arg(long)]
        t1_us: Option<f64>,
        /// Coherence time (µs).
        #[arg(long)]
        t2_us: Option<f64>,
    },
    /// Feedback-loop latency budget.
    Latency {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModeArg::OnChip)]
        mode: ModeArg,
        #[arg(long, default_value_t = 20.0)]
        cable_m: f64,
        #[arg(long, default_value_t = 5.0)]
        rate_ns_per_m: f64,
        #[arg(long, default_value_t = 0.0)]
        processing_us: f64,
        #[arg(long, default_value_t = 7.0)]
        tau_jba_ns: f64,
        #[arg(long, default_value_t = 5.5)]
        tau_pi_ns: f64,
    },
    /// Fit the prep-pulse calibration from anchor pulse widths.
    Calibrate {
        #[command(flatten)]
        common: Common,
        /// Comma-separated pulse widths (ns) that prepare the excited state.
        #[arg(long, default_value = "1.7,3.5,5.3")]
        excited_ns: String,
        /// Comma-separated pulse widths (ns) that prepare the ground state.
        #[arg(long, default_value = "2.6,4.4")]
        ground_ns: String,
    },
    /// Parse and lower a `.seq` file, reporting diagnostics.
    Validate {
        #[command(flatten)]
        common: Common,
        seq_file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InitialState {
    Ground,
    Excited,
}

#[derive(Clone, Copy, ValueEnum)]
enum TimingArg {
    Instantaneous,
    Finite,
}

impl From<TimingArg> for PulseTiming {
    fn from(t: TimingArg) -> Self {
        match t {
            TimingArg::Instantaneous => PulseTiming::Instantaneous,
            TimingArg::Finite => PulseTiming::FiniteDuration,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    OnChip,
    OffChip,
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn dispatch() -> CliResult<()> {
    match Cli::parse().command {
        Command::Predict { common, theta1, theta2, phi } => {
            cmd_predict(&common, &theta1, &theta2, &phi)
        }
        Command::Run { common, seq_file, shots, initial, timing } => {
            cmd_run(&common, &seq_file, shots, initial, timing)
        }
        Command::Ramsey { common, delta_omega_mhz, gap_start_ns, gap_stop_ns, gap_step_ns, shots } => {
            cmd_ramsey(&common, delta_omega_mhz, (gap_start_ns, gap_stop_ns, gap_step_ns), shots)
        }
        Command::InitMap {
            common,
            delta_omega_mhz,
            tau1_start_ns,
            tau1_stop_ns,
            tau1_step_ns,
            tau2_start_ns,
            tau2_stop_ns,
            tau2_step_ns,
            shots,
            pi_ns,
            t0_ns,
            timing,
            t1_us,
            t2_us,
        } => cmd_init_map(
            &common,
            delta_omega_mhz,
            (tau1_start_ns, tau1_stop_ns, tau1_step_ns),
            (tau2_start_ns, tau2_stop_ns, tau2_step_ns),
            shots,
            (pi_ns, t0_ns),
            timing,
            (t1_us, t2_us),
        ),
        Command::Latency { common, mode, cable_m, rate_ns_per_m, processing_us, tau_jba_ns, tau_pi_ns } => {
            cmd_latency(&common, mode, cable_m, rate_ns_per_m, processing_us, tau_jba_ns, tau_pi_ns)
        }
        Command::Calibrate { common, excited_ns, ground_ns } => {
            cmd_calibrate(&common, &excited_ns, &ground_ns)
        }
        Command::Validate { common, seq_file } => cmd_validate(&common, &seq_file),
    }
}

fn load_device(common: &Common) -> CliResult<DeviceParams> {
    match &common.config {
        Some(path) => DeviceConfig::load(path)?.into_device(),
        None => Ok(DeviceParams::default()),
    }
}

/// Angles accept `deg`/`rad` suffixes; a bare number is radians.
fn parse_angle(s: &str) -> CliResult<f64> {
    let t = s.trim();
    let (num, scale) = if let Some(v) = t.strip_suffix("deg") {
        (v, std::f64::consts::PI / 180.0)
    } else if let Some(v) = t.strip_suffix("rad") {
        (v, 1.0)
    } else {
        (t, 1.0)
    };
    num.trim()
        .parse::<f64>()
        .map(|v| v * scale)
        .map_err(|_| CliError::Input(format!("malformed angle '{s}' (use 90deg, 1.57rad or 1.57)")))
}

/// Suppress sub-1e-12 float residue in human-facing state printouts.
fn snap(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

fn fmt_amp(c: qfb_core::C64) -> String {
    let (re_v, im_v) = (snap(c.re), snap(c.im));
    let re = format_sig(re_v, 6);
    let im = format_sig(im_v.abs(), 6);
    if im_v == 0.0 {
        re
    } else if re_v == 0.0 {
        format!("{}{}i", if im_v < 0.0 { "-" } else { "" }, im)
    } else {
        let sign = if im_v < 0.0 { "-" } else { "+" };
        format!("({re}{sign}{im}i)")
    }
}

fn fmt_state(s: &PureState) -> String {
    format!("|psi> = {}|g> + {}|e>", fmt_amp(s.amp_g), fmt_amp(s.amp_e))
}

fn fmt_bloch(s: &PureState) -> String {
    let b = s.bloch();
    format!("({}, {}, {})", format_sig(snap(b.x), 6), format_sig(snap(b.y), 6), format_sig(snap(b.z), 6))
}

fn cmd_predict(common: &Common, theta1: &str, theta2: &str, phi: &str) -> CliResult<()> {
    let device = load_device(common)?;
    let spec = FeedbackSpec::for_device(
        parse_angle(theta1)?,
        parse_angle(theta2)?,
        parse_angle(phi)?,
        &device,
    )
    .map_err(|e| CliError::Input(e.to_string()))?;
    let mut out = String::new();
    for (label, branch) in
        [("ground detected", Branch::GroundDetected), ("excited detected", Branch::ExcitedDetected)]
    {
        let state = predict_final(branch, &spec);
        out.push_str(&format!(
            "{label}:\n  {}\n  bloch = {}\n",
            fmt_state(&state),
            fmt_bloch(&state)
        ));
    }
    write_output(common.out.as_deref(), &out)
}

fn cmd_run(
    common: &Common,
    seq_file: &PathBuf,
    shots: usize,
    initial: InitialState,
    timing: TimingArg,
) -> CliResult<()> {
    if shots == 0 {
        return Err(CliError::Input("--shots must be positive".into()));
    }
    let device = load_device(common)?;
    let source = std::fs::read_to_string(seq_file)
        .map_err(|e| CliError::Input(format!("{}: {e}", seq_file.display())))?;
    let schedule = parse(&source)
        .and_then(|doc| lower(&doc, &device))
        .map_err(|e| CliError::Input(format!("{}:{e}", seq_file.display())))?;

    let initial = match initial {
        InitialState::Ground => PureState::ground(),
        InitialState::Excited => PureState::excited(),
    };
    let opts = SimOptions { timing: timing.into(), ..Default::default() };

    let mut csv = String::from("shot,outcomes,final_p_excited\n");
    let mut mean = 0.0;
    for shot in 0..shots {
        let mut rng = RandomSource::new(common.seed, shot as u64);
        let run = run_schedule(&schedule, &initial, &mut rng, &opts)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let outcomes: String = run.records.iter().map(|r| r.outcome.code()).collect();
        let p = run.final_state.p_excited();
        mean += p;
        csv.push_str(&format!("{shot},{outcomes},{}\n", format_sig(p, 9)));
    }
    mean /= shots as f64;
    eprintln!("{} shots, mean final P(e) = {}", shots, format_sig(mean, 6));
    write_output(common.out.as_deref(), &csv)
}

fn apply_delta_override(device: DeviceParams, delta_omega_mhz: Option<f64>) -> DeviceParams {
    match delta_omega_mhz {
        Some(mhz) => device.with_delta_omega(TWO_PI * 1e6 * mhz),
        None => device,
    }
}

fn axis_ns(name: &str, (start, stop, step): (f64, f64, f64)) -> CliResult<Axis> {
    if !(start.is_finite() && start >= 0.0) {
        return Err(CliError::Input(format!("{name} sweep must start at >= 0 ns, got {start}")));
    }
    Axis::new(name, start * 1e-9, stop * 1e-9, step * 1e-9)
        .map_err(|e| CliError::Input(e.to_string()))
}

fn cmd_ramsey(
    common: &Common,
    delta_omega_mhz: Option<f64>,
    gap: (f64, f64, f64),
    shots: usize,
) -> CliResult<()> {
    let device = apply_delta_override(load_device(common)?, delta_omega_mhz);
    let axis = axis_ns("gap", gap)?;
    if axis.len() < 8 {
        return Err(CliError::Input(format!(
            "gap sweep has only {} points; the fringe fit needs at least 8",
            axis.len()
        )));
    }
    let dt = gap.2 * 1e-9;
    let sweep =
        SweepSpec::new(axis, None, shots, common.seed).map_err(|e| CliError::Input(e.to_string()))?;

    let mut csv = String::from("prep,gap_ns,p_excited,shots\n");
    let mut fitted = Vec::new();
    for prep in [RamseyPrep::PiPulse, RamseyPrep::TwoPiPulse] {
        let grid = ramsey_during_readout(prep, &sweep, &device)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let trace = grid.column(0);
        fitted.push(fringe_frequency(&trace, dt));
        for (i, gap_s) in grid.axis1.values.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                prep.label(),
                format_sig(gap_s * 1e9, 9),
                format_sig(trace[i], 9),
                shots
            ));
        }
    }
    eprintln!(
        "fitted fringe: pi-prep {} MHz, 2pi-prep {} MHz, difference {} MHz",
        format_sig(fitted[0] / 1e6, 6),
        format_sig(fitted[1] / 1e6, 6),
        format_sig((fitted[0] - fitted[1]) / 1e6, 6)
    );
    write_output(common.out.as_deref(), &csv)
}

#[allow(clippy::too_many_arguments)]
fn cmd_init_map(
    common: &Common,
    delta_omega_mhz: Option<f64>,
    tau1: (f64, f64, f64),
    tau2: (f64, f64, f64),
    shots: usize,
    (pi_ns, t0_ns): (f64, f64),
    timing: TimingArg,
    (t1_us, t2_us): (Option<f64>, Option<f64>),
) -> CliResult<()> {
    let device = apply_delta_override(load_device(common)?, delta_omega_mhz);
    let cal = RabiCalibration::new(pi_ns * 1e-9, t0_ns * 1e-9)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let noise = DecoherenceParams::new(t1_us.map(|v| v * 1e-6), t2_us.map(|v| v * 1e-6))
        .map_err(|e| CliError::Input(e.to_string()))?;
    let sweep = SweepSpec::new(
        axis_ns("tau1", tau1)?,
        Some(axis_ns("tau2", tau2)?),
        shots,
        common.seed,
    )
    .map_err(|e| CliError::Input(e.to_string()))?;

    let cfg = InitMapConfig { timing: timing.into(), noise };
    let grid = initialization_map(&sweep, &device, &cal, &cfg)
        .map_err(|e| CliError::Internal(e.to_string()))?;

    let columns = convergence_columns(&grid, 0.99);
    let rendered: Vec<String> =
        columns.iter().map(|t| format!("{} ns", format_sig(t * 1e9, 6))).collect();
    eprintln!(
        "convergence columns (min P(e) > 0.99 over tau1): {}",
        if rendered.is_empty() { "none".to_string() } else { rendered.join(", ") }
    );
    eprintln!(
        "model period note: columns repeat at odd multiples of {} ns; even multiples are anti-nodes",
        format_sig(std::f64::consts::PI / device.jba.delta_omega() * 1e9, 6)
    );
    write_output(common.out.as_deref(), &grid.to_map_csv())
}

fn cmd_latency(
    common: &Common,
    mode: ModeArg,
    cable_m: f64,
    rate_ns_per_m: f64,
    processing_us: f64,
    tau_jba_ns: f64,
    tau_pi_ns: f64,
) -> CliResult<()> {
    let mode = match mode {
        ModeArg::OnChip => LatencyMode::OnChip,
        ModeArg::OffChip => LatencyMode::OffChip,
    };
    let model = LatencyModel::new(
        mode,
        cable_m,
        rate_ns_per_m * 1e-9,
        processing_us * 1e-6,
        tau_jba_ns * 1e-9,
        tau_pi_ns * 1e-9,
    )
    .map_err(|e| CliError::Input(e.to_string()))?;
    let budget = latency_budget(&model);
    print!("{}", budget.to_table());
    if let Some(path) = &common.out {
        std::fs::write(path, budget.to_csv())
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn parse_ns_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map(|v| v * 1e-9)
                .map_err(|_| CliError::Input(format!("malformed time list entry '{t}'")))
        })
        .collect()
}

fn cmd_calibrate(common: &Common, excited_ns: &str, ground_ns: &str) -> CliResult<()> {
    let excited = parse_ns_list(excited_ns)?;
    let ground = parse_ns_list(ground_ns)?;
    let cal = calibrate_rabi(&excited, &ground).map_err(|e| CliError::Input(e.to_string()))?;
    let mut out = String::from("parameter,value\n");
    out.push_str(&format!("pi_duration_ns,{}\n", format_sig(cal.pi_duration * 1e9, 9)));
    out.push_str(&format!("time_offset_ns,{}\n", format_sig(cal.time_offset * 1e9, 9)));
    out.push_str(&format!("rabi_mhz,{}\n", format_sig(cal.rabi_omega() / TWO_PI / 1e6, 9)));
    eprintln!(
        "pi_duration = {} ns, t0 = {} ns",
        format_sig(cal.pi_duration * 1e9, 6),
        format_sig(cal.time_offset * 1e9, 6)
    );
    write_output(common.out.as_deref(), &out)
}

fn cmd_validate(common: &Common, seq_file: &PathBuf) -> CliResult<()> {
    let device = load_device(common)?;
    let source = std::fs::read_to_string(seq_file)
        .map_err(|e| CliError::Input(format!("{}: {e}", seq_file.display())))?;
    let schedule = parse(&source)
        .and_then(|doc| lower(&doc, &device))
        .map_err(|e| CliError::Input(format!("{}:{e}", seq_file.display())))?;
    println!(
        "OK: {} events, {} readout window(s), {} ns total",
        schedule.events.len(),
        schedule.window_count(),
        format_sig(schedule.total_duration() * 1e9, 6)
    );
    Ok(())
}

/// The built-in θ1=θ2=π initialization sequence in canonical DSL form.
#[allow(dead_code)]
fn initialization_seq_text(device: &DeviceParams) -> String {
    let schedule = build_initialization(device).expect("default preset builds");
    qfb_core::seqlang::serialize(&qfb_core::seqlang::doc_from_schedule(&schedule))
}
