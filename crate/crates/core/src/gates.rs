//! Ideal logical-gate library and gate-comparison metrics.
//!
//! Gates are textbook 4×4 unitaries embedded per the crate basis convention
//! (nucleus = left tensor factor, m = +1/2 is logical |0⟩). Single-spin gates
//! tensor the identity on the spectator.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spin::{cr, phase, Complex, Operator4, SpinChannel};

#[derive(Debug, Error, PartialEq)]
pub enum GateError {
    #[error("operator is not unitary (‖U†U − I‖_F = {deviation:.3e})")]
    NotUnitary { deviation: f64 },
}

/// Logical gate descriptor.
///
/// CNOT names only its control; the target is the other spin, which keeps
/// control ≠ target true by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    Rx { target: SpinChannel, angle: f64 },
    Ry { target: SpinChannel, angle: f64 },
    Rz { target: SpinChannel, angle: f64 },
    H { target: SpinChannel },
    X { target: SpinChannel },
    Z { target: SpinChannel },
    Cz,
    Cnot { control: SpinChannel },
}

fn single_qubit(u: [[Complex; 2]; 2], target: SpinChannel) -> Operator4 {
    const ID: [[Complex; 2]; 2] = [
        [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
        [Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)],
    ];
    match target {
        SpinChannel::Electron => Operator4::kron(ID, u),
        SpinChannel::Nuclear => Operator4::kron(u, ID),
    }
}

fn rx_block(theta: f64) -> [[Complex; 2]; 2] {
    let c = cr((theta / 2.0).cos());
    let s = Complex::new(0.0, -(theta / 2.0).sin());
    [[c, s], [s, c]]
}

fn ry_block(theta: f64) -> [[Complex; 2]; 2] {
    let c = cr((theta / 2.0).cos());
    let s = (theta / 2.0).sin();
    [[c, cr(-s)], [cr(s), c]]
}

fn rz_block(theta: f64) -> [[Complex; 2]; 2] {
    [
        [phase(-theta / 2.0), Complex::ZERO],
        [Complex::ZERO, phase(theta / 2.0)],
    ]
}

const H_BLOCK: [[Complex; 2]; 2] = [
    [
        Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ],
    [
        Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ],
];
const X_BLOCK: [[Complex; 2]; 2] = [
    [Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)],
    [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
];
const Z_BLOCK: [[Complex; 2]; 2] = [
    [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
    [Complex::new(0.0, 0.0), Complex::new(-1.0, 0.0)],
];

/// The exact unitary of a gate.
pub fn ideal_unitary(gate: &Gate) -> Operator4 {
    match *gate {
        Gate::Rx { target, angle } => single_qubit(rx_block(angle), target),
        Gate::Ry { target, angle } => single_qubit(ry_block(angle), target),
        Gate::Rz { target, angle } => single_qubit(rz_block(angle), target),
        Gate::H { target } => single_qubit(H_BLOCK, target),
        Gate::X { target } => single_qubit(X_BLOCK, target),
        Gate::Z { target } => single_qubit(Z_BLOCK, target),
        Gate::Cz => Operator4::from_diag([1.0, 1.0, 1.0, -1.0]),
        Gate::Cnot { control } => {
            // flip the target iff the control is logical |1⟩
            let mut u = Operator4::zero();
            for col in 0..4usize {
                let control_bit = match control {
                    SpinChannel::Nuclear => (col >> 1) & 1,
                    SpinChannel::Electron => col & 1,
                };
                let row = if control_bit == 1 {
                    match control {
                        SpinChannel::Nuclear => col ^ 1,  // flip electron
                        SpinChannel::Electron => col ^ 2, // flip nucleus
                    }
                } else {
                    col
                };
                u.set(row, col, cr(1.0));
            }
            u
        }
    }
}

/// Entanglement (process) fidelity F = |Tr(U†V)|² / d² with d = 4.
/// Invariant under a global phase on either argument.
pub fn process_fidelity(u: &Operator4, v: &Operator4) -> Result<f64, GateError> {
    for op in [u, v] {
        let deviation = op
            .adjoint()
            .matmul(op)
            .frobenius_distance(&Operator4::identity());
        if deviation > 1e-8 {
            return Err(GateError::NotUnitary { deviation });
        }
    }
    let trace = u.adjoint().matmul(v).trace();
    Ok(trace.norm_sqr() / 16.0)
}

/// True iff min over φ of ‖U − e^{iφ}V‖_F ≤ tol, with φ the phase of
/// Tr(V†U). Returns false when that trace vanishes (no alignment exists).
pub fn equal_up_to_global_phase(u: &Operator4, v: &Operator4, tol: f64) -> bool {
    let trace = v.adjoint().matmul(u).trace();
    if trace.norm() == 0.0 {
        return false;
    }
    let align = trace / trace.norm();
    u.frobenius_distance(&v.scale(align)) <= tol
}

/// The aligning global phase arg Tr(V†U), when it exists.
pub fn global_phase_between(u: &Operator4, v: &Operator4) -> Option<f64> {
    let trace = v.adjoint().matmul(u).trace();
    if trace.norm() == 0.0 {
        None
    } else {
        Some(trace.arg())
    }
}
