//! Complex linear algebra over the 4-dimensional electron ⊗ nucleus Hilbert
//! space, plus construction of the embedded spin-1/2 operators.
//!
//! Basis convention (used everywhere in this crate): the computational basis
//! is the product basis |m_I, m_S⟩ with the nuclear spin as the left
//! (most-significant) tensor factor,
//!
//!   index = 2·bit(m_I) + bit(m_S),   bit(+1/2) = 0, bit(−1/2) = 1,
//!
//! so index 0 = |+1/2, +1/2⟩ = |00⟩, index 1 = |01⟩, index 2 = |10⟩,
//! index 3 = |11⟩. Logically m = +1/2 is |0⟩ and m = −1/2 is |1⟩.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// Shorthand for a real complex constant.
#[inline]
pub(crate) fn cr(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

/// e^{iφ} as a complex number.
#[inline]
pub(crate) fn phase(phi: f64) -> Complex {
    Complex::new(phi.cos(), phi.sin())
}

#[derive(Debug, Error, PartialEq)]
pub enum SpinError {
    /// Spin projections must be exactly +1/2 or −1/2.
    #[error("invalid spin projection {0}; expected +0.5 or -0.5")]
    InvalidProjection(f64),
}

/// Which spin a pulse or operator addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinChannel {
    Electron,
    Nuclear,
}

impl SpinChannel {
    /// The other spin of the pair.
    pub fn other(self) -> Self {
        match self {
            SpinChannel::Electron => SpinChannel::Nuclear,
            SpinChannel::Nuclear => SpinChannel::Electron,
        }
    }
}

impl std::fmt::Display for SpinChannel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpinChannel::Electron => write!(f, "electron"),
            SpinChannel::Nuclear => write!(f, "nuclear"),
        }
    }
}

/// Cartesian component of a spin operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinAxis {
    X,
    Y,
    Z,
}

/// Dense 4×4 complex matrix over the |m_I, m_S⟩ basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator4 {
    entries: [[Complex; 4]; 4],
}

impl Operator4 {
    pub fn zero() -> Self {
        Self {
            entries: [[Complex::ZERO; 4]; 4],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = cr(1.0);
        }
        m
    }

    pub fn from_rows(entries: [[Complex; 4]; 4]) -> Self {
        Self { entries }
    }

    /// Diagonal matrix from real entries.
    pub fn from_diag(d: [f64; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = cr(d[i]);
        }
        m
    }

    /// Diagonal matrix from complex entries.
    pub fn from_diag_complex(d: [Complex; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = d[i];
        }
        m
    }

    /// Kronecker product of two 2×2 blocks, left factor most significant
    /// (nucleus ⊗ electron under this crate's basis ordering).
    pub fn kron(left: [[Complex; 2]; 2], right: [[Complex; 2]; 2]) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.entries[2 * i + k][2 * j + l] = left[i][j] * right[k][l];
                    }
                }
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row][col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex) {
        self.entries[row][col] = value;
    }

    pub fn entries(&self) -> &[[Complex; 4]; 4] {
        &self.entries
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Complex::ZERO;
                for k in 0..4 {
                    acc += self.entries[i][k] * rhs.entries[k][j];
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] = self.entries[j][i].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex) -> Self {
        let mut out = *self;
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                *e *= factor;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] += rhs.entries[i][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] -= rhs.entries[i][j];
            }
        }
        out
    }

    pub fn trace(&self) -> Complex {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    /// ‖A‖_F = sqrt(Σ |a_ij|²).
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ‖A − B‖_F.
    pub fn frobenius_distance(&self, rhs: &Self) -> f64 {
        self.sub(rhs).frobenius_norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.frobenius_distance(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .matmul(self)
            .frobenius_distance(&Self::identity())
            <= tol
    }

    /// True when every entry is finite (no NaN/Inf).
    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }

    /// Apply to a state vector: |out⟩ = A|ψ⟩.
    pub fn apply(&self, psi: &StateVector4) -> StateVector4 {
        let mut out = [Complex::ZERO; 4];
        for i in 0..4 {
            for k in 0..4 {
                out[i] += self.entries[i][k] * psi.amplitudes[k];
            }
        }
        StateVector4 { amplitudes: out }
    }

    /// Commutator [A, B] = AB − BA.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs).sub(&rhs.matmul(self))
    }
}

impl std::ops::Mul for &Operator4 {
    type Output = Operator4;
    fn mul(self, rhs: Self) -> Operator4 {
        self.matmul(rhs)
    }
}

/// Length-4 complex state vector over the |m_I, m_S⟩ basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector4 {
    amplitudes: [Complex; 4],
}

impl StateVector4 {
    pub fn new(amplitudes: [Complex; 4]) -> Self {
        Self { amplitudes }
    }

    /// Computational basis vector at `index`.
    pub fn basis(index: usize) -> Self {
        assert!(index < 4, "basis index out of range");
        let mut amplitudes = [Complex::ZERO; 4];
        amplitudes[index] = cr(1.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex; 4] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        let mut out = *self;
        for a in out.amplitudes.iter_mut() {
            *a /= n;
        }
        out
    }

    /// ⟨self|rhs⟩.
    pub fn inner(&self, rhs: &Self) -> Complex {
        self.amplitudes
            .iter()
            .zip(rhs.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |amplitude|² per basis state.
    pub fn probabilities(&self) -> [f64; 4] {
        let mut p = [0.0; 4];
        for (i, a) in self.amplitudes.iter().enumerate() {
            p[i] = a.norm_sqr();
        }
        p
    }
}

/// Basis index for given spin projections, per the crate-wide ordering.
fn projection_bit(m: f64) -> Result<usize, SpinError> {
    if m == 0.5 {
        Ok(0)
    } else if m == -0.5 {
        Ok(1)
    } else {
        Err(SpinError::InvalidProjection(m))
    }
}

/// Computational basis state |m_I, m_S⟩. Projections must be ±1/2.
pub fn basis_state(m_i: f64, m_s: f64) -> Result<StateVector4, SpinError> {
    let index = 2 * projection_bit(m_i)? + projection_bit(m_s)?;
    Ok(StateVector4::basis(index))
}

/// The spin projection (±1/2) of `channel` encoded in basis `index`.
pub fn projection_of(index: usize, channel: SpinChannel) -> f64 {
    let bit = match channel {
        SpinChannel::Nuclear => (index >> 1) & 1,
        SpinChannel::Electron => index & 1,
    };
    if bit == 0 {
        0.5
    } else {
        -0.5
    }
}

const PAULI_HALF_X: [[Complex; 2]; 2] = [
    [Complex::new(0.0, 0.0), Complex::new(0.5, 0.0)],
    [Complex::new(0.5, 0.0), Complex::new(0.0, 0.0)],
];
const PAULI_HALF_Y: [[Complex; 2]; 2] = [
    [Complex::new(0.0, 0.0), Complex::new(0.0, -0.5)],
    [Complex::new(0.0, 0.5), Complex::new(0.0, 0.0)],
];
const PAULI_HALF_Z: [[Complex; 2]; 2] = [
    [Complex::new(0.5, 0.0), Complex::new(0.0, 0.0)],
    [Complex::new(0.0, 0.0), Complex::new(-0.5, 0.0)],
];
const IDENTITY_2: [[Complex; 2]; 2] = [
    [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
    [Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)],
];

/// Spin-1/2 operator for one channel, embedded in the 4-dim product space.
///
/// Electron operators act on the right tensor factor (identity on the
/// nucleus); nuclear operators act on the left factor. Entries are exact:
/// the eigenvalues of every returned operator are ±1/2.
pub fn spin_operator(channel: SpinChannel, axis: SpinAxis) -> Operator4 {
    let half_pauli = match axis {
        SpinAxis::X => PAULI_HALF_X,
        SpinAxis::Y => PAULI_HALF_Y,
        SpinAxis::Z => PAULI_HALF_Z,
    };
    match channel {
        SpinChannel::Electron => Operator4::kron(IDENTITY_2, half_pauli),
        SpinChannel::Nuclear => Operator4::kron(half_pauli, IDENTITY_2),
    }
}
