//! Pulse-sequence IR, the gate → pulse compiler, and the two execution
//! backends.
//!
//! # IR semantics
//!
//! A sequence is an ordered list of elements applied left-to-right in time:
//!
//! - `RfPulse`: a resonant rectangular tone on one channel. Its carrier
//!   addresses one conditional line of the transition table, so the pulse
//!   rotates the matching two-level pair by θ = rabi·duration about the
//!   in-plane axis given by `phase` (0 = x, π/2 = y), identity on the other
//!   pair. An unconditional rotation is two such pulses, one per line; when
//!   the lines are degenerate (a = 0) a single tone drives both pairs.
//! - `Delay`: free evolution. Reported in the Zeeman rotating frame, a delay
//!   of duration τ is a pure coupling rotation exp(−i·a·τ·S_z·I_z) — the
//!   entangling resource of the controlled-phase construction.
//! - `VirtualZ`: a zero-duration frame rotation exp(−i·θ·G) for G ∈
//!   {I_z, S_z, 2·I_z·S_z}, exact in both backends. Physically it is carrier
//!   phase steering: every later pulse has its drive phase offset by the
//!   accumulated diagonal frame.
//!
//! # Backends
//!
//! `Ideal` multiplies the exact per-element unitaries. `Physical` integrates
//! the full lab-frame Hamiltonian H₀ + H_m(t) — rectangular cos(ωt + φ)
//! drive on both channels through the shared coil, no rotating-wave
//! approximation — then reports exp(+i·H₀·T)·U_lab dressed with the exact
//! diagonal frame of the virtual elements. The two backends agree up to
//! genuine control error (counter-rotating terms, off-resonant crosstalk).

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    expm_i_hermitian, propagate, to_rotating_frame, DynamicsError, PropagationSpec,
};
use crate::hamiltonian::{
    energy_levels, static_hamiltonian, transition_table, PhysicalInput, SystemParams, Transition,
};
use crate::spin::{cr, phase, spin_operator, Complex, Operator4, SpinAxis, SpinChannel};

/// Diagonals of the virtual-Z generators over the basis index order.
const IZ_DIAG: [f64; 4] = [0.5, 0.5, -0.5, -0.5];
const SZ_DIAG: [f64; 4] = [0.5, -0.5, 0.5, -0.5];
const ZZ2_DIAG: [f64; 4] = [0.5, -0.5, -0.5, 0.5]; // 2·I_z·S_z

#[derive(Debug, Error, PartialEq)]
pub enum CompileError {
    #[error("no coupling available: a = 0 cannot generate a ZZ rotation")]
    NoCoupling,
    #[error("rabi rate for the {channel} channel must be positive, got {rabi}")]
    InvalidRabi { channel: SpinChannel, rabi: f64 },
    #[error("the two {channel} lines coincide but belong to oppositely ordered pairs; no single tone can drive both coherently")]
    UnresolvableLines { channel: SpinChannel },
}

#[derive(Debug, Error, PartialEq)]
pub enum ExecuteError {
    #[error("invalid pulse sequence: {0}")]
    InvalidSequence(String),
    #[error("carrier {carrier} matches no {channel} transition of this system")]
    CarrierOffResonance { channel: SpinChannel, carrier: f64 },
    #[error("carrier {carrier} addresses two oppositely ordered {channel} pairs at once")]
    AmbiguousCarrier { channel: SpinChannel, carrier: f64 },
    #[error("the {0} channel has zero drive coupling; physical pulses cannot reach it")]
    NoDriveCoupling(SpinChannel),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Target of a virtual frame rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VirtualTarget {
    Electron,
    Nuclear,
    Zz,
}

impl VirtualTarget {
    fn generator_diag(self) -> [f64; 4] {
        match self {
            VirtualTarget::Electron => SZ_DIAG,
            VirtualTarget::Nuclear => IZ_DIAG,
            VirtualTarget::Zz => ZZ2_DIAG,
        }
    }
}

impl From<SpinChannel> for VirtualTarget {
    fn from(c: SpinChannel) -> Self {
        match c {
            SpinChannel::Electron => VirtualTarget::Electron,
            SpinChannel::Nuclear => VirtualTarget::Nuclear,
        }
    }
}

/// One element of a pulse program.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum PulseElement {
    #[serde(rename = "rf")]
    RfPulse {
        channel: SpinChannel,
        /// Carrier angular frequency, rad·s⁻¹ (a transition-table line).
        #[serde(rename = "carrier")]
        carrier_omega: f64,
        /// On-resonance Rabi rate Ω, rad·s⁻¹; θ = Ω·duration.
        #[serde(rename = "rabi")]
        rabi_rate: f64,
        /// In-plane rotation axis: 0 = +x, π/2 = +y.
        phase: f64,
        /// Pulse length, seconds.
        duration: f64,
    },
    #[serde(rename = "delay")]
    Delay { duration: f64 },
    #[serde(rename = "vz")]
    VirtualZ { target: VirtualTarget, angle: f64 },
}

impl PulseElement {
    pub fn duration(&self) -> f64 {
        match self {
            PulseElement::RfPulse { duration, .. } | PulseElement::Delay { duration } => *duration,
            PulseElement::VirtualZ { .. } => 0.0,
        }
    }
}

/// An ordered pulse program with its tracked global phase.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PulseSequence {
    pub elements: Vec<PulseElement>,
    /// Accumulated global phase e^{i·global_phase} applied by both backends.
    pub global_phase: f64,
    /// Compiler diagnostics; not part of the wire format.
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl PulseSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, element: PulseElement) {
        self.elements.push(element);
    }

    /// Append another sequence in time after this one.
    pub fn extend(&mut self, mut other: PulseSequence) {
        self.elements.append(&mut other.elements);
        self.global_phase += other.global_phase;
        self.warnings.append(&mut other.warnings);
    }

    /// Total physical duration (virtual elements take no time).
    pub fn duration(&self) -> f64 {
        self.elements.iter().map(|e| e.duration()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pulse sequences always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Which execution model realizes a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Ideal,
    Physical,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Ideal => write!(f, "ideal"),
            Backend::Physical => write!(f, "physical"),
        }
    }
}

/// Per-channel Rabi rates available to the compiler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveBudget {
    pub rabi_e: f64,
    pub rabi_n: f64,
}

impl Default for DriveBudget {
    fn default() -> Self {
        Self {
            rabi_e: 1.0,
            rabi_n: 1.0,
        }
    }
}

impl DriveBudget {
    pub fn rabi(&self, channel: SpinChannel) -> f64 {
        match channel {
            SpinChannel::Electron => self.rabi_e,
            SpinChannel::Nuclear => self.rabi_n,
        }
    }
}

/// Generators accepted by [`rotation_semantics`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationGenerator {
    Iz,
    Sz,
    /// 2·I_z·S_z, the coupling generator of the controlled-phase sequence.
    IzSz2,
    Ix,
    Iy,
    Sx,
    Sy,
}

impl RotationGenerator {
    pub fn operator(self) -> Operator4 {
        match self {
            RotationGenerator::Iz => spin_operator(SpinChannel::Nuclear, SpinAxis::Z),
            RotationGenerator::Sz => spin_operator(SpinChannel::Electron, SpinAxis::Z),
            RotationGenerator::Ix => spin_operator(SpinChannel::Nuclear, SpinAxis::X),
            RotationGenerator::Iy => spin_operator(SpinChannel::Nuclear, SpinAxis::Y),
            RotationGenerator::Sx => spin_operator(SpinChannel::Electron, SpinAxis::X),
            RotationGenerator::Sy => spin_operator(SpinChannel::Electron, SpinAxis::Y),
            RotationGenerator::IzSz2 => {
                let iz = spin_operator(SpinChannel::Nuclear, SpinAxis::Z);
                let sz = spin_operator(SpinChannel::Electron, SpinAxis::Z);
                iz.matmul(&sz).scale(cr(2.0))
            }
        }
    }
}

/// The crate-wide rotation convention: (θ·G) ≡ exp(−i·θ·G), θ in radians.
/// The 90° elements of the controlled-phase sequence are θ = π/2.
pub fn rotation_semantics(generator: RotationGenerator, theta: f64) -> Operator4 {
    expm_i_hermitian(&generator.operator(), theta)
        .expect("spin generators are Hermitian by construction")
}

/// The three-element controlled-phase program
/// (π/2·I_z)(π/2·S_z)(−π/2·2·I_z·S_z), all as virtual frame rotations.
/// Its unitary is diag(1,1,1,−1) times the global phase e^{−iπ/4}.
pub fn cz_virtual_sequence() -> PulseSequence {
    PulseSequence {
        elements: vec![
            PulseElement::VirtualZ {
                target: VirtualTarget::Nuclear,
                angle: FRAC_PI_2,
            },
            PulseElement::VirtualZ {
                target: VirtualTarget::Electron,
                angle: FRAC_PI_2,
            },
            PulseElement::VirtualZ {
                target: VirtualTarget::Zz,
                angle: -FRAC_PI_2,
            },
        ],
        global_phase: 0.0,
        warnings: Vec::new(),
    }
}

/// Free-evolution delay realizing exp(−i·θ·2·I_z·S_z) in the reporting frame.
///
/// The coupling term advances the ZZ angle at rate a/2, so a non-negative
/// angle (relative to the sign of a) costs duration 2θ/a. Angles of the
/// opposite sign are realized by the 2π-complement delay with a tracked
/// global phase of π per winding, using
/// exp(−i·(2π−|θ|)·2·I_z·S_z) = −exp(+i·|θ|·2·I_z·S_z).
///
/// Returns the delay element and the global-phase contribution to add to the
/// enclosing sequence.
pub fn zz_delay(theta: f64, params: &SystemParams) -> Result<(PulseElement, f64), CompileError> {
    if params.a == 0.0 {
        return Err(CompileError::NoCoupling);
    }
    let sign = params.a.signum();
    // work in units where the coupling advances the angle positively
    let theta_along = theta * sign;
    let (theta_eff, windings) = if theta_along >= 0.0 {
        (theta_along, 0i64)
    } else {
        let deficit = (-theta_along).rem_euclid(TAU);
        let eff = (TAU - deficit).rem_euclid(TAU);
        (eff, ((eff - theta_along) / TAU).round() as i64)
    };
    let duration = 2.0 * theta_eff / params.a.abs();
    let phase_flip = if windings % 2 == 0 { 0.0 } else { PI };
    Ok((PulseElement::Delay { duration }, phase_flip))
}

/// Compile one logical gate into a pulse program for the given system.
///
/// Transverse rotations become resonant pulses of duration |θ|/Ω, one per
/// conditional line of the addressed channel (a single tone when the lines
/// are degenerate), with the axis and rotation sign encoded in the pulse
/// phase. R_z is a virtual frame rotation. H is the exact decomposition
/// R_y(π/2)·R_z(π). CZ is the controlled-phase program with its ZZ element
/// lowered to a free-evolution delay; CNOT is H(target)·CZ·H(target).
///
/// The compiled global phase makes ideal execution equal the gate's unitary
/// exactly, not merely up to phase.
pub fn compile_gate(
    gate: &crate::gates::Gate,
    params: &SystemParams,
    budget: &DriveBudget,
) -> Result<PulseSequence, CompileError> {
    use crate::gates::Gate;
    match *gate {
        Gate::Rx { target, angle } => transverse_rotation(target, angle, 0.0, params, budget),
        Gate::Ry { target, angle } => transverse_rotation(target, angle, FRAC_PI_2, params, budget),
        Gate::Rz { target, angle } => Ok(PulseSequence {
            elements: vec![PulseElement::VirtualZ {
                target: target.into(),
                angle,
            }],
            global_phase: 0.0,
            warnings: Vec::new(),
        }),
        Gate::H { target } => {
            // H = i · R_y(π/2) · R_z(π)
            let mut seq = PulseSequence {
                elements: vec![PulseElement::VirtualZ {
                    target: target.into(),
                    angle: PI,
                }],
                global_phase: FRAC_PI_2,
                warnings: Vec::new(),
            };
            seq.extend(transverse_rotation(
                target, FRAC_PI_2, FRAC_PI_2, params, budget,
            )?);
            Ok(seq)
        }
        Gate::X { target } => {
            // X = i · R_x(π)
            let mut seq = transverse_rotation(target, PI, 0.0, params, budget)?;
            seq.global_phase += FRAC_PI_2;
            Ok(seq)
        }
        Gate::Z { target } => Ok(PulseSequence {
            elements: vec![PulseElement::VirtualZ {
                target: target.into(),
                angle: PI,
            }],
            // Z = i · R_z(π)
            global_phase: FRAC_PI_2,
            warnings: Vec::new(),
        }),
        Gate::Cz => {
            let (delay, flip) = zz_delay(-FRAC_PI_2, params)?;
            Ok(PulseSequence {
                elements: vec![
                    PulseElement::VirtualZ {
                        target: VirtualTarget::Nuclear,
                        angle: FRAC_PI_2,
                    },
                    PulseElement::VirtualZ {
                        target: VirtualTarget::Electron,
                        angle: FRAC_PI_2,
                    },
                    delay,
                ],
                // the bare program is e^{−iπ/4}·CZ; align it exactly
                global_phase: flip + PI / 4.0,
                warnings: Vec::new(),
            })
        }
        Gate::Cnot { control } => {
            let target = control.other();
            let mut seq = compile_gate(&Gate::H { target }, params, budget)?;
            seq.extend(compile_gate(&Gate::Cz, params, budget)?);
            seq.extend(compile_gate(&Gate::H { target }, params, budget)?);
            Ok(seq)
        }
    }
}

/// Unconditional rotation exp(−i·θ·(cos φ₀·X + sin φ₀·Y)-generator) on one
/// channel, lowered to one resonant pulse per conditional line.
fn transverse_rotation(
    channel: SpinChannel,
    angle: f64,
    base_phase: f64,
    params: &SystemParams,
    budget: &DriveBudget,
) -> Result<PulseSequence, CompileError> {
    let rabi = budget.rabi(channel);
    if !rabi.is_finite() || rabi <= 0.0 {
        return Err(CompileError::InvalidRabi { channel, rabi });
    }
    let mut seq = PulseSequence::new();
    if params.a != 0.0 && rabi >= params.a.abs() / 5.0 {
        seq.warnings.push(format!(
            "rabi rate {rabi} on the {channel} channel is not small against the hyperfine \
             splitting {}; conditional lines are not cleanly resolved",
            params.a
        ));
    }
    if angle == 0.0 {
        return Ok(seq);
    }
    let pulse_phase = if angle >= 0.0 {
        base_phase
    } else {
        base_phase + PI
    };
    let duration = angle.abs() / rabi;
    let table = transition_table(params);
    let [line_up, line_down] = table.lines(channel);
    if line_up.angular_frequency == line_down.angular_frequency {
        // degenerate lines: one tone addresses both pairs, but only if the
        // pairs are ordered the same way in energy
        let levels = energy_levels(params);
        let ordering = |t: &Transition| {
            let (l0, l1) = logical_pair(t, channel);
            (levels[l0] - levels[l1]).signum()
        };
        if ordering(line_up) != ordering(line_down) {
            return Err(CompileError::UnresolvableLines { channel });
        }
        seq.push(PulseElement::RfPulse {
            channel,
            carrier_omega: line_up.angular_frequency,
            rabi_rate: rabi,
            phase: pulse_phase,
            duration,
        });
    } else {
        for line in [line_up, line_down] {
            seq.push(PulseElement::RfPulse {
                channel,
                carrier_omega: line.angular_frequency,
                rabi_rate: rabi,
                phase: pulse_phase,
                duration,
            });
        }
    }
    Ok(seq)
}

/// Indices (logical |0⟩, logical |1⟩) of the two-level pair a transition
/// addresses: the state with the flipping spin up first.
fn logical_pair(t: &Transition, channel: SpinChannel) -> (usize, usize) {
    if crate::spin::projection_of(t.from_index, channel) > 0.0 {
        (t.from_index, t.to_index)
    } else {
        (t.to_index, t.from_index)
    }
}

/// Conditional two-level rotation: exp(−i·θ·(n̂·σ⃗)/2) on the (l0, l1) pair,
/// identity elsewhere. φ is the in-plane axis angle in the logical basis.
fn conditional_rotation(l0: usize, l1: usize, theta: f64, phi: f64) -> Operator4 {
    let mut u = Operator4::identity();
    let c = cr((theta / 2.0).cos());
    let s = (theta / 2.0).sin();
    let minus_i = Complex::new(0.0, -1.0);
    u.set(l0, l0, c);
    u.set(l1, l1, c);
    u.set(l0, l1, minus_i * phase(-phi).scale(s));
    u.set(l1, l0, minus_i * phase(phi).scale(s));
    u
}

fn carrier_match_tolerance(carrier: f64) -> f64 {
    1e-9 * carrier.abs() + 1e-12
}

/// The pairs a pulse addresses, each as (logical0, logical1, signed
/// splitting E(l0) − E(l1)).
fn matched_pairs(
    channel: SpinChannel,
    carrier: f64,
    params: &SystemParams,
) -> Result<Vec<(usize, usize, f64)>, ExecuteError> {
    let table = transition_table(params);
    let levels = energy_levels(params);
    let matches = table.matches(channel, carrier, carrier_match_tolerance(carrier));
    if matches.is_empty() {
        return Err(ExecuteError::CarrierOffResonance { channel, carrier });
    }
    let pairs: Vec<(usize, usize, f64)> = matches
        .iter()
        .map(|t| {
            let (l0, l1) = logical_pair(t, channel);
            (l0, l1, levels[l0] - levels[l1])
        })
        .collect();
    if pairs.len() == 2 && pairs[0].2.signum() != pairs[1].2.signum() {
        return Err(ExecuteError::AmbiguousCarrier { channel, carrier });
    }
    Ok(pairs)
}

/// The exact unitary of a single element (the Ideal backend's semantics).
pub fn element_unitary(
    element: &PulseElement,
    params: &SystemParams,
) -> Result<Operator4, ExecuteError> {
    match *element {
        PulseElement::RfPulse {
            channel,
            carrier_omega,
            rabi_rate,
            phase: axis,
            duration,
        } => {
            let theta = rabi_rate * duration;
            let mut u = Operator4::identity();
            for (l0, l1, _) in matched_pairs(channel, carrier_omega, params)? {
                u = conditional_rotation(l0, l1, theta, axis).matmul(&u);
            }
            Ok(u)
        }
        PulseElement::Delay { duration } => {
            // exp(−i·a·τ·S_z·I_z)
            let mut phases = [Complex::ZERO; 4];
            for (i, p) in phases.iter_mut().enumerate() {
                *p = phase(-params.a * duration * ZZ2_DIAG[i] / 2.0);
            }
            Ok(Operator4::from_diag_complex(phases))
        }
        PulseElement::VirtualZ { target, angle } => {
            let diag = target.generator_diag();
            let mut phases = [Complex::ZERO; 4];
            for (i, p) in phases.iter_mut().enumerate() {
                *p = phase(-angle * diag[i]);
            }
            Ok(Operator4::from_diag_complex(phases))
        }
    }
}

fn validate_sequence(seq: &PulseSequence) -> Result<(), ExecuteError> {
    if !seq.global_phase.is_finite() {
        return Err(ExecuteError::InvalidSequence(
            "global phase is not finite".into(),
        ));
    }
    for (i, e) in seq.elements.iter().enumerate() {
        let bad = |what: &str| {
            Err(ExecuteError::InvalidSequence(format!(
                "element {i}: {what}"
            )))
        };
        match *e {
            PulseElement::RfPulse {
                carrier_omega,
                rabi_rate,
                phase,
                duration,
                ..
            } => {
                if !duration.is_finite() || duration < 0.0 {
                    return bad("pulse duration must be finite and non-negative");
                }
                if !rabi_rate.is_finite() || rabi_rate <= 0.0 {
                    return bad("rabi rate must be finite and positive");
                }
                if !carrier_omega.is_finite() || !phase.is_finite() {
                    return bad("carrier and phase must be finite");
                }
            }
            PulseElement::Delay { duration } => {
                if !duration.is_finite() || duration < 0.0 {
                    return bad("delay duration must be finite and non-negative");
                }
            }
            PulseElement::VirtualZ { angle, .. } => {
                if !angle.is_finite() {
                    return bad("virtual-Z angle must be finite");
                }
            }
        }
    }
    Ok(())
}

/// Default integrator step: at least 50 samples per period of the fastest
/// frequency in the problem, carriers included.
pub fn default_dt(params: &SystemParams, seq: &PulseSequence) -> f64 {
    let mut omega_max = (params.omega_e.abs() + params.a.abs() / 2.0)
        .max(params.omega_n.abs() + params.a.abs() / 2.0);
    for e in &seq.elements {
        if let PulseElement::RfPulse { carrier_omega, .. } = e {
            omega_max = omega_max.max(carrier_omega.abs());
        }
    }
    TAU / omega_max.max(1e-12) / 50.0
}

/// Run a pulse program on a backend and return the achieved unitary.
///
/// `Ideal` is the exact ordered product of element unitaries times the
/// tracked global phase. `Physical` integrates the lab-frame Schrödinger
/// equation over the program and reports the result in the rotating frame of
/// the static Hamiltonian, with virtual elements applied as exact frame
/// rotations (realized on later pulses as carrier phase offsets). `dt` of
/// `None` uses [`default_dt`].
pub fn execute(
    seq: &PulseSequence,
    backend: Backend,
    params: &SystemParams,
    physical: &PhysicalInput,
    dt: Option<f64>,
) -> Result<Operator4, ExecuteError> {
    validate_sequence(seq)?;
    match backend {
        Backend::Ideal => {
            let mut u = Operator4::identity();
            for element in &seq.elements {
                u = element_unitary(element, params)?.matmul(&u);
            }
            Ok(u.scale(phase(seq.global_phase)))
        }
        Backend::Physical => execute_physical(seq, params, physical, dt),
    }
}

fn execute_physical(
    seq: &PulseSequence,
    params: &SystemParams,
    physical: &PhysicalInput,
    dt: Option<f64>,
) -> Result<Operator4, ExecuteError> {
    let dt = dt.unwrap_or_else(|| default_dt(params, seq));
    let h0 = static_hamiltonian(params);
    let sx = spin_operator(SpinChannel::Electron, SpinAxis::X);
    let ix = spin_operator(SpinChannel::Nuclear, SpinAxis::X);

    // accumulated diagonal frame (radians per basis state) from virtual
    // elements and the ideal ZZ content of delays; later pulses are steered
    // by it, and it multiplies the reported unitary at the end
    let mut frame_phases = [0.0f64; 4];
    let mut t = 0.0f64;
    let mut u_lab = Operator4::identity();

    for element in &seq.elements {
        match *element {
            PulseElement::VirtualZ { target, angle } => {
                let diag = target.generator_diag();
                for (p, g) in frame_phases.iter_mut().zip(diag.iter()) {
                    *p -= angle * g;
                }
            }
            PulseElement::Delay { duration } => {
                if duration > 0.0 {
                    let spec = PropagationSpec::new(t, t + duration, dt.min(duration));
                    u_lab = propagate(|_| h0, &spec)?.matmul(&u_lab);
                    t += duration;
                }
                for (p, g) in frame_phases.iter_mut().zip(ZZ2_DIAG.iter()) {
                    *p -= params.a * duration * g / 2.0;
                }
            }
            PulseElement::RfPulse {
                channel,
                carrier_omega,
                rabi_rate,
                phase: axis,
                duration,
            } => {
                if duration == 0.0 {
                    continue;
                }
                let pairs = matched_pairs(channel, carrier_omega, params)?;
                let (l0, l1, splitting) = pairs[0];
                // drive strength: the addressed channel reaches its Rabi
                // rate; the other channel hangs off the same coil
                let own_gamma = match channel {
                    SpinChannel::Electron => physical.gamma_e,
                    SpinChannel::Nuclear => physical.gamma_n,
                };
                if own_gamma == 0.0 {
                    return Err(ExecuteError::NoDriveCoupling(channel));
                }
                let hx = 2.0 * rabi_rate / own_gamma.abs();
                // effective coupling sign on the addressed channel: the
                // drive is (γ_e·S_x − γ_n·I_x)·H_x
                let kappa = match channel {
                    SpinChannel::Electron => physical.gamma_e,
                    SpinChannel::Nuclear => -physical.gamma_n,
                };
                let steering = frame_phases[l0] - frame_phases[l1];
                let mut drive_phase = splitting.signum() * (axis + steering);
                if kappa < 0.0 {
                    drive_phase += PI;
                }
                let drive = sx
                    .scale(cr(physical.gamma_e * hx))
                    .sub(&ix.scale(cr(physical.gamma_n * hx)));
                let spec = PropagationSpec::new(t, t + duration, dt.min(duration));
                let step = propagate(
                    |time| h0.add(&drive.scale(cr((carrier_omega * time + drive_phase).cos()))),
                    &spec,
                )?;
                u_lab = step.matmul(&u_lab);
                t += duration;
            }
        }
    }

    let rotated = to_rotating_frame(&u_lab, &h0, t)?;
    let mut out = Operator4::zero();
    for i in 0..4 {
        let dress = phase(frame_phases[i]);
        for j in 0..4 {
            out.set(i, j, dress * rotated.get(i, j));
        }
    }
    Ok(out.scale(phase(seq.global_phase)))
}
