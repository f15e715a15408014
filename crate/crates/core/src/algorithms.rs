//! Two-qubit Deutsch–Jozsa and Grover runs on either backend, with simulated
//! projective measurement in the |m_I, m_S⟩ basis.
//!
//! Qubit roles: the nucleus is the query/search qubit (most significant bit
//! of reported outcomes), the electron is the ancilla/second qubit. Every
//! circuit routes through the pulse compiler — no algorithm builds a raw
//! unitary — so these runs exercise the compiler and the chosen backend end
//! to end.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gates::{ideal_unitary, process_fidelity, Gate, GateError};
use crate::hamiltonian::{PhysicalInput, SystemParams};
use crate::pulse::{
    compile_gate, execute, Backend, CompileError, DriveBudget, ExecuteError, PulseSequence,
};
use crate::rng::unit_f64;
use crate::spin::{Operator4, SpinChannel, StateVector4};

#[derive(Debug, Error)]
pub enum AlgoError {
    #[error("state entering measurement is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },
    #[error("shots must be at least 1")]
    NoShots,
    #[error("marked index {0} outside 0..=3")]
    BadMarkedIndex(usize),
    #[error("grover needs at least one iteration")]
    NoIterations,
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Execute(#[from] ExecuteError),
    #[error(transparent)]
    Gate(#[from] GateError),
}

/// The four one-bit oracles of the two-qubit Deutsch–Jozsa problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DJOracle {
    Const0,
    Const1,
    BalancedId,
    BalancedNot,
}

impl DJOracle {
    pub fn is_constant(self) -> bool {
        matches!(self, DJOracle::Const0 | DJOracle::Const1)
    }

    pub fn name(self) -> &'static str {
        match self {
            DJOracle::Const0 => "const0",
            DJOracle::Const1 => "const1",
            DJOracle::BalancedId => "balanced_id",
            DJOracle::BalancedNot => "balanced_not",
        }
    }
}

impl std::str::FromStr for DJOracle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "const0" => Ok(DJOracle::Const0),
            "const1" => Ok(DJOracle::Const1),
            "balanced_id" => Ok(DJOracle::BalancedId),
            "balanced_not" => Ok(DJOracle::BalancedNot),
            other => Err(format!(
                "unknown oracle {other:?}; expected const0|const1|balanced_id|balanced_not"
            )),
        }
    }
}

/// Projective measurement record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementCounts {
    /// Counts per basis index 0..=3.
    pub counts: [u64; 4],
    pub shots: u64,
    pub seed: u64,
    /// The exact probability vector the counts were sampled from.
    pub probabilities: [f64; 4],
}

impl MeasurementCounts {
    /// Outcome label of a basis index as a (nucleus, electron) bitstring.
    pub fn bitstring(index: usize) -> String {
        format!("{}{}", (index >> 1) & 1, index & 1)
    }
}

/// Sample `shots` projective measurements of `state`.
///
/// Each shot uses the (seed, shot index) entry of a counter-based stream, so
/// the result is a pure function of its arguments: bit-identical across
/// runs, platforms, and any parallel batching of shots.
pub fn measure(
    state: &StateVector4,
    shots: u64,
    seed: u64,
) -> Result<MeasurementCounts, AlgoError> {
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(AlgoError::NotNormalized { norm });
    }
    if shots == 0 {
        return Err(AlgoError::NoShots);
    }
    let probabilities = state.probabilities();
    let mut counts = [0u64; 4];
    for shot in 0..shots {
        let u = unit_f64(seed, shot);
        let mut acc = 0.0;
        let mut outcome = 3; // attribute any rounding remainder to the last bin
        for (i, p) in probabilities.iter().enumerate() {
            acc += p;
            if u < acc {
                outcome = i;
                break;
            }
        }
        counts[outcome] += 1;
    }
    Ok(MeasurementCounts {
        counts,
        shots,
        seed,
        probabilities,
    })
}

/// Common inputs for an algorithm run.
#[derive(Debug, Clone, Copy)]
pub struct RunSetup {
    pub params: SystemParams,
    pub physical: PhysicalInput,
    pub budget: DriveBudget,
    /// Integrator override for the physical backend.
    pub dt: Option<f64>,
    pub shots: u64,
    pub seed: u64,
}

impl RunSetup {
    /// Demo-regime setup with the crate defaults.
    pub fn demo(shots: u64, seed: u64) -> Self {
        let params = SystemParams::demo();
        Self {
            params,
            physical: PhysicalInput::demo(&params),
            budget: DriveBudget::default(),
            dt: None,
            shots,
            seed,
        }
    }
}

/// Outcome fields shared by both algorithms; serializes to the documented
/// result schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOutcome {
    pub probabilities: [f64; 4],
    /// Counts keyed by (nucleus, electron) bitstring.
    pub counts: CountsByBitstring,
    pub shots: u64,
    pub seed: u64,
    pub backend: Backend,
    /// Process fidelity of the executed circuit against its ideal unitary;
    /// null on the ideal backend.
    pub fidelity_vs_ideal: Option<f64>,
}

/// Counts in the fixed "00","01","10","11" key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsByBitstring {
    #[serde(rename = "00")]
    pub c00: u64,
    #[serde(rename = "01")]
    pub c01: u64,
    #[serde(rename = "10")]
    pub c10: u64,
    #[serde(rename = "11")]
    pub c11: u64,
}

impl From<&MeasurementCounts> for CountsByBitstring {
    fn from(m: &MeasurementCounts) -> Self {
        Self {
            c00: m.counts[0],
            c01: m.counts[1],
            c10: m.counts[2],
            c11: m.counts[3],
        }
    }
}

/// Deutsch–Jozsa verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Constant,
    Balanced,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DJResult {
    pub oracle: DJOracle,
    pub verdict: Verdict,
    /// P(query = 0), P(query = 1) from the exact state.
    pub query_probabilities: [f64; 2],
    #[serde(flatten)]
    pub outcome: RunOutcome,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroverResult {
    pub marked: usize,
    pub iterations: u32,
    /// Bitstring of the most probable outcome.
    pub top_outcome: String,
    #[serde(flatten)]
    pub outcome: RunOutcome,
}

/// Gate list of the standard two-qubit Deutsch–Jozsa circuit.
///
/// Query = nucleus, ancilla = electron. Oracles map to the native set as
/// f ≡ 0: nothing; f ≡ 1: X(ancilla); f(x) = x: CNOT(query → ancilla);
/// f(x) = 1−x: CNOT then X(ancilla).
pub fn deutsch_jozsa_circuit(oracle: DJOracle) -> Vec<Gate> {
    let query = SpinChannel::Nuclear;
    let ancilla = SpinChannel::Electron;
    let mut gates = vec![
        Gate::X { target: ancilla },
        Gate::H { target: query },
        Gate::H { target: ancilla },
    ];
    match oracle {
        DJOracle::Const0 => {}
        DJOracle::Const1 => gates.push(Gate::X { target: ancilla }),
        DJOracle::BalancedId => gates.push(Gate::Cnot { control: query }),
        DJOracle::BalancedNot => {
            gates.push(Gate::Cnot { control: query });
            gates.push(Gate::X { target: ancilla });
        }
    }
    gates.push(Gate::H { target: query });
    gates
}

/// Gate list for Grover with the given marked item, one block per iteration:
/// phase-flip the marked state (CZ conjugated by X where the marked bit is
/// 0), then the diffusion H⊗H · flip|00⟩ · H⊗H.
pub fn grover_circuit(marked: usize, iterations: u32) -> Vec<Gate> {
    let nuclear = SpinChannel::Nuclear;
    let electron = SpinChannel::Electron;
    let flip_on = |index: usize, gates: &mut Vec<Gate>| {
        // phase flip of |index⟩: conjugate CZ by X on each qubit whose bit
        // in `index` is 0
        let wraps: Vec<Gate> = [(nuclear, (index >> 1) & 1), (electron, index & 1)]
            .iter()
            .filter(|(_, bit)| *bit == 0)
            .map(|(ch, _)| Gate::X { target: *ch })
            .collect();
        gates.extend(wraps.iter().copied());
        gates.push(Gate::Cz);
        gates.extend(wraps.iter().copied());
    };
    let mut gates = vec![Gate::H { target: nuclear }, Gate::H { target: electron }];
    for _ in 0..iterations {
        flip_on(marked, &mut gates);
        gates.push(Gate::H { target: nuclear });
        gates.push(Gate::H { target: electron });
        flip_on(0, &mut gates);
        gates.push(Gate::H { target: nuclear });
        gates.push(Gate::H { target: electron });
    }
    gates
}

/// Compile a gate list into one pulse program and run it end to end from
/// |00⟩ on the chosen backend.
fn run_circuit(
    gates: &[Gate],
    backend: Backend,
    setup: &RunSetup,
) -> Result<(StateVector4, MeasurementCounts, Option<f64>), AlgoError> {
    let mut program = PulseSequence::new();
    let mut ideal = Operator4::identity();
    for gate in gates {
        program.extend(compile_gate(gate, &setup.params, &setup.budget)?);
        ideal = ideal_unitary(gate).matmul(&ideal);
    }
    let achieved = execute(&program, backend, &setup.params, &setup.physical, setup.dt)?;
    let fidelity = match backend {
        Backend::Ideal => None,
        Backend::Physical => Some(process_fidelity(&achieved, &ideal)?),
    };
    let state = achieved.apply(&StateVector4::basis(0)).normalized();
    let counts = measure(&state, setup.shots, setup.seed)?;
    Ok((state, counts, fidelity))
}

/// Run Deutsch–Jozsa for one oracle. The verdict is Constant iff outcome 0
/// dominates on the query (nuclear) qubit.
pub fn deutsch_jozsa(
    oracle: DJOracle,
    backend: Backend,
    setup: &RunSetup,
) -> Result<DJResult, AlgoError> {
    let gates = deutsch_jozsa_circuit(oracle);
    let (state, counts, fidelity) = run_circuit(&gates, backend, setup)?;
    let p = state.probabilities();
    let query_probabilities = [p[0] + p[1], p[2] + p[3]];
    let verdict = if query_probabilities[0] >= query_probabilities[1] {
        Verdict::Constant
    } else {
        Verdict::Balanced
    };
    Ok(DJResult {
        oracle,
        verdict,
        query_probabilities,
        outcome: RunOutcome {
            probabilities: counts.probabilities,
            counts: CountsByBitstring::from(&counts),
            shots: counts.shots,
            seed: counts.seed,
            backend,
            fidelity_vs_ideal: fidelity,
        },
    })
}

/// Run Grover search for one marked basis state. One iteration is optimal
/// and exact for N = 4; more are legal for demonstration.
pub fn grover(
    marked: usize,
    iterations: u32,
    backend: Backend,
    setup: &RunSetup,
) -> Result<GroverResult, AlgoError> {
    if marked > 3 {
        return Err(AlgoError::BadMarkedIndex(marked));
    }
    if iterations == 0 {
        return Err(AlgoError::NoIterations);
    }
    let gates = grover_circuit(marked, iterations);
    let (state, counts, fidelity) = run_circuit(&gates, backend, setup)?;
    let p = state.probabilities();
    let top = (0..4)
        .max_by(|&i, &j| p[i].partial_cmp(&p[j]).unwrap())
        .unwrap();
    Ok(GroverResult {
        marked,
        iterations,
        top_outcome: MeasurementCounts::bitstring(top),
        outcome: RunOutcome {
            probabilities: counts.probabilities,
            counts: CountsByBitstring::from(&counts),
            shots: counts.shots,
            seed: counts.seed,
            backend,
            fidelity_vs_ideal: fidelity,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{basis_state, Complex};

    // ---- independent 4-amplitude statevector oracle (test-only) ----
    // Hand-rolled kron circuit simulation sharing nothing with the gate or
    // pulse modules.

    type V4 = [Complex; 4];

    fn apply2(left: [[f64; 2]; 2], right: [[f64; 2]; 2], v: &V4) -> V4 {
        // amplitudes indexed 2·n + e
        let mut out = [Complex::ZERO; 4];
        for n_out in 0..2 {
            for e_out in 0..2 {
                let mut acc = Complex::ZERO;
                for n_in in 0..2 {
                    for e_in in 0..2 {
                        acc += Complex::new(left[n_out][n_in] * right[e_out][e_in], 0.0)
                            * v[2 * n_in + e_in];
                    }
                }
                out[2 * n_out + e_out] = acc;
            }
        }
        out
    }

    const ID2: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];
    const X2: [[f64; 2]; 2] = [[0.0, 1.0], [1.0, 0.0]];
    fn h2() -> [[f64; 2]; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [[s, s], [s, -s]]
    }

    fn apply_cnot_nuclear_control(v: &V4) -> V4 {
        [v[0], v[1], v[3], v[2]]
    }

    fn apply_cz(v: &V4) -> V4 {
        [v[0], v[1], v[2], -v[3]]
    }

    fn probs(v: &V4) -> [f64; 4] {
        [
            v[0].norm_sqr(),
            v[1].norm_sqr(),
            v[2].norm_sqr(),
            v[3].norm_sqr(),
        ]
    }

    fn dj_reference(oracle: DJOracle) -> [f64; 4] {
        let mut v: V4 = [Complex::ZERO; 4];
        v[0] = Complex::new(1.0, 0.0);
        v = apply2(ID2, X2, &v); // ancilla to |1⟩
        v = apply2(h2(), h2(), &v);
        match oracle {
            DJOracle::Const0 => {}
            DJOracle::Const1 => v = apply2(ID2, X2, &v),
            DJOracle::BalancedId => v = apply_cnot_nuclear_control(&v),
            DJOracle::BalancedNot => {
                v = apply_cnot_nuclear_control(&v);
                v = apply2(ID2, X2, &v);
            }
        }
        v = apply2(h2(), ID2, &v);
        probs(&v)
    }

    fn grover_reference(marked: usize) -> [f64; 4] {
        let flip = |index: usize, mut v: V4| -> V4 {
            let nuclear_bit = (index >> 1) & 1;
            let electron_bit = index & 1;
            if nuclear_bit == 0 {
                v = apply2(X2, ID2, &v);
            }
            if electron_bit == 0 {
                v = apply2(ID2, X2, &v);
            }
            v = apply_cz(&v);
            if nuclear_bit == 0 {
                v = apply2(X2, ID2, &v);
            }
            if electron_bit == 0 {
                v = apply2(ID2, X2, &v);
            }
            v
        };
        let mut v: V4 = [Complex::ZERO; 4];
        v[0] = Complex::new(1.0, 0.0);
        v = apply2(h2(), h2(), &v);
        v = flip(marked, v);
        v = apply2(h2(), h2(), &v);
        v = flip(0, v);
        v = apply2(h2(), h2(), &v);
        probs(&v)
    }

    // ---- measurement ----

    #[test]
    fn measuring_basis_state_is_deterministic() {
        let state = basis_state(0.5, 0.5).unwrap();
        let m = measure(&state, 257, 9).unwrap();
        assert_eq!(m.counts, [257, 0, 0, 0]);
    }

    #[test]
    fn uniform_state_statistics() {
        let amp = Complex::new(0.5, 0.0);
        let state = crate::spin::StateVector4::new([amp; 4]);
        let shots = 4096u64;
        let m = measure(&state, shots, 1234).unwrap();
        // each count within ±4σ of the mean, σ = sqrt(n·p·(1−p))
        let mean = shots as f64 * 0.25;
        let sigma = (shots as f64 * 0.25 * 0.75).sqrt();
        for c in m.counts {
            assert!((c as f64 - mean).abs() <= 4.0 * sigma, "count {c}");
        }
        assert_eq!(m.counts.iter().sum::<u64>(), shots);
    }

    #[test]
    fn fixed_seed_reproduces_counts_exactly() {
        let amp = Complex::new(0.5, 0.0);
        let state = crate::spin::StateVector4::new([amp; 4]);
        let a = measure(&state, 1000, 42).unwrap();
        let b = measure(&state, 1000, 42).unwrap();
        assert_eq!(a.counts, b.counts);
        let c = measure(&state, 1000, 43).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let state = crate::spin::StateVector4::new([
            Complex::new(0.9, 0.0),
            Complex::ZERO,
            Complex::ZERO,
            Complex::ZERO,
        ]);
        assert!(matches!(
            measure(&state, 10, 0),
            Err(AlgoError::NotNormalized { .. })
        ));
    }

    // ---- ideal-backend algorithms against the reference ----

    #[test]
    fn dj_ideal_matches_reference_for_all_oracles() {
        let setup = RunSetup::demo(512, 7);
        for oracle in [
            DJOracle::Const0,
            DJOracle::Const1,
            DJOracle::BalancedId,
            DJOracle::BalancedNot,
        ] {
            let result = deutsch_jozsa(oracle, Backend::Ideal, &setup).unwrap();
            let reference = dj_reference(oracle);
            for i in 0..4 {
                assert!(
                    (result.outcome.probabilities[i] - reference[i]).abs() < 1e-10,
                    "{oracle:?} index {i}"
                );
            }
            let expected_verdict = if oracle.is_constant() {
                Verdict::Constant
            } else {
                Verdict::Balanced
            };
            assert_eq!(result.verdict, expected_verdict, "{oracle:?}");
            // the deciding outcome is certain
            let deciding = if oracle.is_constant() {
                result.query_probabilities[0]
            } else {
                result.query_probabilities[1]
            };
            assert!((deciding - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn grover_ideal_is_point_mass_for_every_marked_item() {
        let setup = RunSetup::demo(256, 3);
        for marked in 0..4 {
            let result = grover(marked, 1, Backend::Ideal, &setup).unwrap();
            let reference = grover_reference(marked);
            assert!((reference[marked] - 1.0).abs() < 1e-12);
            for i in 0..4 {
                assert!(
                    (result.outcome.probabilities[i] - reference[i]).abs() < 1e-10,
                    "marked {marked} index {i}"
                );
            }
            assert_eq!(result.top_outcome, MeasurementCounts::bitstring(marked));
            assert_eq!(
                result.outcome.counts.c00
                    + result.outcome.counts.c01
                    + result.outcome.counts.c10
                    + result.outcome.counts.c11,
                256
            );
        }
    }

    #[test]
    fn grover_validates_inputs() {
        let setup = RunSetup::demo(16, 0);
        assert!(matches!(
            grover(5, 1, Backend::Ideal, &setup),
            Err(AlgoError::BadMarkedIndex(5))
        ));
        assert!(matches!(
            grover(1, 0, Backend::Ideal, &setup),
            Err(AlgoError::NoIterations)
        ));
    }

    #[test]
    fn result_json_schema() {
        let setup = RunSetup::demo(128, 42);
        let result = grover(3, 1, Backend::Ideal, &setup).unwrap();
        let text = serde_json::to_string(&result).unwrap();
        assert!(text.contains("\"probabilities\":"));
        assert!(text.contains("\"counts\":{\"00\":"));
        assert!(text.contains("\"backend\":\"ideal\""));
        assert!(text.contains("\"fidelity_vs_ideal\":null"));
        assert!(text.contains("\"shots\":128"));
        assert!(text.contains("\"seed\":42"));
    }
}
