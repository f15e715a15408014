//! `hfqpu` — command-line front end for the single-atom two-qubit simulator.
//!
//! Subcommands: `spectrum`, `rabi`, `gate`, `algo dj`, `algo grover`.
//! Outputs are deterministic given the config and seed; re-running a command
//! produces byte-identical files. Exit codes: 0 success, 2 configuration or
//! usage error, 3 numerical contract violation.

mod config;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hfqpu_core::algorithms::{deutsch_jozsa, grover, AlgoError, DJOracle, RunSetup};
use hfqpu_core::gates::{ideal_unitary, process_fidelity, Gate};
use hfqpu_core::hamiltonian::{energy_levels, transition_table, SystemParams};
use hfqpu_core::pulse::{compile_gate, default_dt, execute, Backend, ExecuteError};
use hfqpu_core::rabi::rabi_scan;
use hfqpu_core::spin::{Operator4, SpinChannel};

#[derive(Debug)]
pub struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    pub fn usage(message: String) -> Self {
        Self { message, code: 2 }
    }
    pub fn numeric(message: String) -> Self {
        Self { message, code: 3 }
    }
}

fn map_execute(e: ExecuteError) -> CliError {
    match e {
        ExecuteError::Dynamics(_) => CliError::numeric(e.to_string()),
        _ => CliError::usage(e.to_string()),
    }
}

fn map_algo(e: AlgoError) -> CliError {
    match e {
        AlgoError::NotNormalized { .. } | AlgoError::Gate(_) => CliError::numeric(e.to_string()),
        AlgoError::Execute(inner) => map_execute(inner),
        _ => CliError::usage(e.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Ideal,
    Physical,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Ideal => Backend::Ideal,
            BackendArg::Physical => Backend::Physical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChannelArg {
    Electron,
    Nuclear,
}

impl From<ChannelArg> for SpinChannel {
    fn from(c: ChannelArg) -> SpinChannel {
        match c {
            ChannelArg::Electron => SpinChannel::Electron,
            ChannelArg::Nuclear => SpinChannel::Nuclear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON run configuration; defaults to $HFQPU_DEFAULT_CONFIG, then to
    /// the built-in demo parameters.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (json for reports; csv for tabular data).
    #[arg(long, global = true)]
    format: Option<FormatArg>,
    /// Execution backend.
    #[arg(long, global = true)]
    backend: Option<BackendArg>,
    /// Measurement seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of measurement shots.
    #[arg(long, global = true)]
    shots: Option<u64>,
    /// Integrator step override, seconds.
    #[arg(long, global = true)]
    dt: Option<f64>,
}

#[derive(Debug, Parser)]
#[command(
    name = "hfqpu",
    version,
    about = "Pulse-level simulator of a hyperfine-coupled two-qubit atom"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Energy levels and single-spin-flip transition lines.
    Spectrum,
    /// Populations of |00⟩ under a continuous transverse tone.
    Rabi {
        /// Driven channel.
        #[arg(long, value_enum, default_value = "electron")]
        channel: ChannelArg,
        /// Carrier angular frequency; defaults to the channel's
        /// spectator-up conditional line.
        #[arg(long)]
        carrier: Option<f64>,
        /// Scan length, seconds; defaults to one full Rabi cycle.
        #[arg(long)]
        t_max: Option<f64>,
        /// Number of sample points (≥ 2).
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Compile one gate, execute it, and report the achieved unitary.
    Gate {
        /// Gate name: rx|ry|rz|h|x|z|cz|cnot.
        #[arg(long)]
        gate: String,
        /// Rotation angle for rx/ry/rz; accepts forms like "pi/2", "-pi",
        /// "0.75", "3pi/4".
        #[arg(long)]
        angle: Option<String>,
        /// Target spin for single-spin gates.
        #[arg(long, value_enum)]
        target: Option<ChannelArg>,
        /// Control spin for cnot.
        #[arg(long, value_enum, default_value = "nuclear")]
        control: ChannelArg,
    },
    /// Run a two-qubit algorithm end to end.
    Algo {
        #[command(subcommand)]
        which: AlgoCommand,
    },
}

#[derive(Debug, Subcommand)]
enum AlgoCommand {
    /// Deutsch–Jozsa with one of the four one-bit oracles.
    Dj {
        /// const0 | const1 | balanced_id | balanced_not
        #[arg(long)]
        oracle: String,
    },
    /// Grover search for a marked basis state.
    Grover {
        /// Marked basis index 0..=3 (bits are nucleus, electron).
        #[arg(long)]
        marked: usize,
        #[arg(long, default_value_t = 1)]
        iterations: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports always serialize");
    text.push('\n');
    text
}

fn unitary_rows(u: &Operator4) -> [[[f64; 2]; 4]; 4] {
    let mut rows = [[[0.0; 2]; 4]; 4];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let z = u.get(i, j);
            *entry = [z.re, z.im];
        }
    }
    rows
}

/// Parse an angle that may involve π: "pi", "-pi/2", "3pi/4", "0.5pi", or a
/// plain decimal in radians.
fn parse_angle(text: &str) -> Result<f64, CliError> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let err = || {
        CliError::usage(format!(
            "cannot parse angle {text:?}; use radians or a form like pi/2, -pi, 3pi/4"
        ))
    };
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    let idx = rest.find("pi").ok_or_else(err)?;
    let (coefficient, tail) = rest.split_at(idx);
    let tail = &tail[2..];
    let coefficient = if coefficient.is_empty() {
        1.0
    } else {
        coefficient.parse::<f64>().map_err(|_| err())?
    };
    let denominator = if tail.is_empty() {
        1.0
    } else {
        let d = tail.strip_prefix('/').ok_or_else(err)?;
        let d: f64 = d.parse().map_err(|_| err())?;
        if d == 0.0 {
            return Err(err());
        }
        d
    };
    Ok(sign * coefficient * PI / denominator)
}

#[derive(Serialize)]
struct TransitionRow {
    from: usize,
    to: usize,
    channel: SpinChannel,
    frequency: f64,
    spectator_m: f64,
}

#[derive(Serialize)]
struct SpectrumReport {
    system: SystemParams,
    secular_regime_ok: bool,
    levels: [f64; 4],
    transitions: Vec<TransitionRow>,
}

#[derive(Serialize)]
struct GateReport {
    gate: String,
    backend: Backend,
    fidelity: f64,
    /// Total physical duration of the compiled sequence, seconds.
    duration: f64,
    global_phase: f64,
    warnings: Vec<String>,
    /// Achieved unitary, row-major, entries as [re, im].
    unitary: [[[f64; 2]; 4]; 4],
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config::load(cli.common.config.as_ref(), cli.common.dt)?;
    let backend: Backend = cli.common.backend.unwrap_or(BackendArg::Ideal).into();
    let format = cli.common.format;
    let out = cli.common.out.as_ref();

    match cli.command {
        Command::Spectrum => {
            let levels = energy_levels(&cfg.params);
            let table = transition_table(&cfg.params);
            let transitions: Vec<TransitionRow> = table
                .transitions
                .iter()
                .map(|t| TransitionRow {
                    from: t.from_index,
                    to: t.to_index,
                    channel: t.channel,
                    frequency: t.angular_frequency,
                    spectator_m: t.spectator_projection(),
                })
                .collect();
            match format.unwrap_or(FormatArg::Json) {
                FormatArg::Json => {
                    let report = SpectrumReport {
                        system: cfg.params,
                        secular_regime_ok: cfg.params.secular_regime_ok(),
                        levels,
                        transitions,
                    };
                    emit(out, &to_json_pretty(&report))
                }
                FormatArg::Csv => {
                    let mut text = String::from("kind,from,to,channel,value\n");
                    for (i, level) in levels.iter().enumerate() {
                        text.push_str(&format!("level,{i},,,{level}\n"));
                    }
                    for t in &transitions {
                        text.push_str(&format!(
                            "transition,{},{},{},{}\n",
                            t.from, t.to, t.channel, t.frequency
                        ));
                    }
                    emit(out, &text)
                }
            }
        }

        Command::Rabi {
            channel,
            carrier,
            t_max,
            points,
        } => {
            let channel: SpinChannel = channel.into();
            let rabi = cfg.budget.rabi(channel);
            let table = transition_table(&cfg.params);
            let carrier = carrier.unwrap_or_else(|| table.line_for(channel, 0.5).angular_frequency);
            let t_max = t_max.unwrap_or(if rabi > 0.0 { 2.0 * PI / rabi } else { 1.0 });
            let rows = rabi_scan(
                &cfg.params,
                &cfg.physical,
                channel,
                carrier,
                rabi,
                t_max,
                points,
                cfg.dt,
            )
            .map_err(map_execute)?;
            match format.unwrap_or(FormatArg::Csv) {
                FormatArg::Csv => {
                    let mut text = String::from("t,p00,p01,p10,p11\n");
                    for r in &rows {
                        text.push_str(&format!(
                            "{},{},{},{},{}\n",
                            r.t,
                            r.populations[0],
                            r.populations[1],
                            r.populations[2],
                            r.populations[3]
                        ));
                    }
                    emit(out, &text)
                }
                FormatArg::Json => {
                    #[derive(Serialize)]
                    struct RabiReport {
                        channel: SpinChannel,
                        carrier: f64,
                        rabi: f64,
                        t: Vec<f64>,
                        p00: Vec<f64>,
                        p01: Vec<f64>,
                        p10: Vec<f64>,
                        p11: Vec<f64>,
                    }
                    let report = RabiReport {
                        channel,
                        carrier,
                        rabi,
                        t: rows.iter().map(|r| r.t).collect(),
                        p00: rows.iter().map(|r| r.populations[0]).collect(),
                        p01: rows.iter().map(|r| r.populations[1]).collect(),
                        p10: rows.iter().map(|r| r.populations[2]).collect(),
                        p11: rows.iter().map(|r| r.populations[3]).collect(),
                    };
                    emit(out, &to_json_pretty(&report))
                }
            }
        }

        Command::Gate {
            gate,
            angle,
            target,
            control,
        } => {
            if format == Some(FormatArg::Csv) {
                return Err(CliError::usage(
                    "the gate report has no csv form; use --format json".to_string(),
                ));
            }
            let needs_target = || -> Result<SpinChannel, CliError> {
                target.map(Into::into).ok_or_else(|| {
                    CliError::usage(format!("gate {gate:?} needs --target electron|nuclear"))
                })
            };
            let needs_angle = || -> Result<f64, CliError> {
                angle
                    .as_deref()
                    .ok_or_else(|| CliError::usage(format!("gate {gate:?} needs --angle")))
                    .and_then(parse_angle)
            };
            let parsed = match gate.as_str() {
                "rx" => Gate::Rx {
                    target: needs_target()?,
                    angle: needs_angle()?,
                },
                "ry" => Gate::Ry {
                    target: needs_target()?,
                    angle: needs_angle()?,
                },
                "rz" => Gate::Rz {
                    target: needs_target()?,
                    angle: needs_angle()?,
                },
                "h" => Gate::H {
                    target: needs_target()?,
                },
                "x" => Gate::X {
                    target: needs_target()?,
                },
                "z" => Gate::Z {
                    target: needs_target()?,
                },
                "cz" => Gate::Cz,
                "cnot" => Gate::Cnot {
                    control: control.into(),
                },
                other => {
                    return Err(CliError::usage(format!(
                        "unsupported gate {other:?}; expected rx|ry|rz|h|x|z|cz|cnot"
                    )))
                }
            };
            let seq = compile_gate(&parsed, &cfg.params, &cfg.budget)
                .map_err(|e| CliError::usage(e.to_string()))?;
            if let Some(dt) = cfg.dt {
                let recommended = default_dt(&cfg.params, &seq);
                if dt > recommended {
                    eprintln!(
                        "warning: dt {dt:.3e} is coarser than the recommended {recommended:.3e}"
                    );
                }
            }
            let achieved =
                execute(&seq, backend, &cfg.params, &cfg.physical, cfg.dt).map_err(map_execute)?;
            let fidelity = process_fidelity(&achieved, &ideal_unitary(&parsed))
                .map_err(|e| CliError::numeric(e.to_string()))?;
            let report = GateReport {
                gate,
                backend,
                fidelity,
                duration: seq.duration(),
                global_phase: seq.global_phase,
                warnings: seq.warnings.clone(),
                unitary: unitary_rows(&achieved),
            };
            emit(out, &to_json_pretty(&report))
        }

        Command::Algo { which } => {
            if format == Some(FormatArg::Csv) {
                return Err(CliError::usage(
                    "algorithm reports have no csv form; use --format json".to_string(),
                ));
            }
            let setup = RunSetup {
                params: cfg.params,
                physical: cfg.physical,
                budget: cfg.budget,
                dt: cfg.dt,
                shots: cli.common.shots.unwrap_or(4096),
                seed: cli.common.seed.unwrap_or(42),
            };
            if setup.shots == 0 {
                return Err(CliError::usage("--shots must be at least 1".to_string()));
            }
            match which {
                AlgoCommand::Dj { oracle } => {
                    let oracle: DJOracle = oracle.parse().map_err(CliError::usage)?;
                    let result = deutsch_jozsa(oracle, backend, &setup).map_err(map_algo)?;
                    emit(out, &to_json_pretty(&result))
                }
                AlgoCommand::Grover { marked, iterations } => {
                    let result = grover(marked, iterations, backend, &setup).map_err(map_algo)?;
                    emit(out, &to_json_pretty(&result))
                }
            }
        }
    }
}
