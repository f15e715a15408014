//! The static hyperfine Hamiltonian, its spectrum, and the transverse drive.
//!
//! Units: ħ = 1 throughout. Every Hamiltonian is stored in angular-frequency
//! units (rad·s⁻¹); the conversion from raw physical constants happens in
//! exactly one place, [`SystemParams::from_physical`].
//!
//! The static Hamiltonian of the electron ⊗ nucleus system in a field B ∥ z is
//!
//!   H₀ = ω_e·S_z − ω_n·I_z + a·S_z·I_z
//!
//! with ω_e = gβB/ħ (electron Zeeman), ω_n = γ_n·B (nuclear Zeeman, note the
//! sign convention), and a = A/ħ (secular hyperfine coupling). It is diagonal
//! in the |m_I, m_S⟩ basis with levels
//!
//!   E(m_I, m_S) = ω_e·m_S − ω_n·m_I + a·m_I·m_S.
//!
//! A transverse oscillating field H_x cos(ωt) drives single-spin flips:
//!
//!   H_m(t) = (γ_e·S_x − γ_n·I_x)·H_x·cos(ωt + φ),
//!
//! giving two electron lines at |ω_e ± a/2| (conditioned on m_I) and two
//! nuclear lines at |ω_n ∓ a/2| (conditioned on m_S).

use serde::{Deserialize, Serialize};

use crate::spin::{projection_of, spin_operator, Operator4, SpinAxis, SpinChannel};

/// Raw physical inputs the angular-frequency parameters derive from.
///
/// `gamma_e` is kept as its own field rather than forced to gβ/ħ: the drive
/// term and the static Zeeman term may be wired with independent couplings
/// (see [`PhysicalInput::demo`] for why the dimensionless preset uses that
/// freedom).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalInput {
    /// Electron g-factor (dimensionless).
    pub g_factor: f64,
    /// Bohr magneton over ħ, rad·s⁻¹·T⁻¹.
    pub bohr_magneton_over_hbar: f64,
    /// Static field B along z, Tesla.
    pub field_b: f64,
    /// Nuclear gyromagnetic ratio, rad·s⁻¹·T⁻¹.
    pub gamma_n: f64,
    /// Electron gyromagnetic ratio used by the drive term, rad·s⁻¹·T⁻¹.
    pub gamma_e: f64,
    /// Hyperfine coupling A over ħ, rad·s⁻¹.
    pub hyperfine_a_over_hbar: f64,
}

impl PhysicalInput {
    /// Hydrogen-like atom: real constants for ¹H plus the free-electron g.
    ///
    /// Not data from any experiment in this project; the values are the CODATA
    /// constants and the 21 cm hyperfine splitting, provided as a realistic
    /// preset.
    pub fn hydrogen(field_b: f64) -> Self {
        let g = 2.002_319_304_362;
        let bohr_over_hbar = 8.793_723_2e10; // μ_B/ħ, rad s⁻¹ T⁻¹
        Self {
            g_factor: g,
            bohr_magneton_over_hbar: bohr_over_hbar,
            field_b,
            gamma_n: 2.675_221_874_4e8,        // proton, rad s⁻¹ T⁻¹
            gamma_e: g * bohr_over_hbar,       // default wiring γ_e = gβ/ħ
            hyperfine_a_over_hbar: 8.924_66e9, // 2π × 1420.405751 MHz
        }
    }

    /// Synthetic lift of dimensionless [`SystemParams`] onto physical fields.
    ///
    /// B = 1 so the Zeeman frequencies read back verbatim. Both drive
    /// couplings are set to γ_n: with the single shared drive coil, a drive
    /// coupling ratio γ_e/γ_n = ω_e/ω_n would shake the electron γ_e/γ_n
    /// times harder than the nucleus during nuclear pulses, burying the
    /// demo regime in off-resonant light shifts. Matched couplings keep the
    /// cross-channel error perturbative while preserving the shared-coil
    /// drive structure. The hydrogen preset keeps the physical wiring.
    pub fn demo(params: &SystemParams) -> Self {
        Self {
            g_factor: 1.0,
            bohr_magneton_over_hbar: params.omega_e,
            field_b: 1.0,
            gamma_n: params.omega_n,
            gamma_e: params.omega_n,
            hyperfine_a_over_hbar: params.a,
        }
    }
}

/// The three angular frequencies that define the static Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Electron Zeeman angular frequency gβB/ħ, rad·s⁻¹.
    pub omega_e: f64,
    /// Nuclear Zeeman angular frequency γ_n·B, rad·s⁻¹.
    pub omega_n: f64,
    /// Hyperfine coupling A/ħ, rad·s⁻¹.
    pub a: f64,
}

impl SystemParams {
    pub fn new(omega_e: f64, omega_n: f64, a: f64) -> Self {
        Self {
            omega_e,
            omega_n,
            a,
        }
    }

    /// Desk-scale demo regime: Ω ≪ a ≪ ω_e with fast integration.
    /// Artifact defaults, not values from any publication.
    pub fn demo() -> Self {
        Self::new(1000.0, 10.0, 50.0)
    }

    pub fn from_physical(p: &PhysicalInput) -> Self {
        Self {
            omega_e: p.g_factor * p.bohr_magneton_over_hbar * p.field_b,
            omega_n: p.gamma_n * p.field_b,
            a: p.hyperfine_a_over_hbar,
        }
    }

    /// Whether the parameters sit in the regime the secular Hamiltonian
    /// assumes (electron Zeeman energy dominating the hyperfine coupling).
    /// Advisory only; the propagator is exact for any parameters.
    pub fn secular_regime_ok(&self) -> bool {
        self.omega_e > 0.0 && self.omega_e >= 10.0 * self.a.abs()
    }

    /// Closed-form level E(m_I, m_S) = ω_e·m_S − ω_n·m_I + a·m_I·m_S.
    pub fn level(&self, m_i: f64, m_s: f64) -> f64 {
        self.omega_e * m_s - self.omega_n * m_i + self.a * m_i * m_s
    }
}

/// Parameters of a continuous transverse drive tone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    /// Drive field strength H_x (Tesla-equivalent). Non-negative; sign
    /// belongs in the phase.
    pub amplitude_hx: f64,
    /// Carrier angular frequency ω, rad·s⁻¹.
    pub frequency_omega: f64,
    /// Carrier phase, radians.
    pub phase: f64,
    /// Tone duration, seconds.
    pub duration: f64,
}

/// One single-spin-flip resonance line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    /// Lower-energy basis index (absorption convention).
    pub from_index: usize,
    /// Higher-energy basis index.
    pub to_index: usize,
    /// Which spin flips.
    pub channel: SpinChannel,
    /// |E_to − E_from|, rad·s⁻¹, always positive.
    pub angular_frequency: f64,
}

impl Transition {
    /// Projection (±1/2) of the spectator spin that selects this line.
    pub fn spectator_projection(&self) -> f64 {
        projection_of(self.from_index, self.channel.other())
    }
}

/// The four single-spin-flip lines of the system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionTable {
    pub transitions: Vec<Transition>,
}

impl TransitionTable {
    /// Both lines of a channel, ordered by spectator projection (+1/2 first).
    pub fn lines(&self, channel: SpinChannel) -> [&Transition; 2] {
        let mut picked: Vec<&Transition> = self
            .transitions
            .iter()
            .filter(|t| t.channel == channel)
            .collect();
        picked.sort_by(|x, y| {
            y.spectator_projection()
                .partial_cmp(&x.spectator_projection())
                .unwrap()
        });
        [picked[0], picked[1]]
    }

    /// The line of `channel` selected by the spectator being in `m` (±1/2).
    pub fn line_for(&self, channel: SpinChannel, spectator_m: f64) -> &Transition {
        self.transitions
            .iter()
            .find(|t| t.channel == channel && t.spectator_projection() == spectator_m)
            .expect("transition table always holds both lines per channel")
    }

    /// The transition whose frequency matches `carrier` within `tol`,
    /// restricted to `channel`. Returns all matches (two when degenerate).
    pub fn matches(&self, channel: SpinChannel, carrier: f64, tol: f64) -> Vec<&Transition> {
        self.transitions
            .iter()
            .filter(|t| t.channel == channel && (t.angular_frequency - carrier).abs() <= tol)
            .collect()
    }
}

/// H₀/ħ = ω_e·S_z − ω_n·I_z + a·S_z·I_z, assembled from the spin operators.
pub fn static_hamiltonian(params: &SystemParams) -> Operator4 {
    let sz = spin_operator(SpinChannel::Electron, SpinAxis::Z);
    let iz = spin_operator(SpinChannel::Nuclear, SpinAxis::Z);
    let szz = sz.matmul(&iz);
    sz.scale(crate::spin::cr(params.omega_e))
        .sub(&iz.scale(crate::spin::cr(params.omega_n)))
        .add(&szz.scale(crate::spin::cr(params.a)))
}

/// The four levels ordered by basis index; equals the diagonal of
/// [`static_hamiltonian`] and the closed form E(m_I, m_S).
pub fn energy_levels(params: &SystemParams) -> [f64; 4] {
    let mut levels = [0.0; 4];
    for (index, level) in levels.iter_mut().enumerate() {
        let m_i = projection_of(index, SpinChannel::Nuclear);
        let m_s = projection_of(index, SpinChannel::Electron);
        *level = params.level(m_i, m_s);
    }
    levels
}

/// The four single-spin-flip lines the transverse drive can address.
///
/// Electron lines sit at |ω_e + a·m_I| for spectator m_I = ±1/2; nuclear
/// lines at |−ω_n + a·m_S| for spectator m_S = ±1/2.
pub fn transition_table(params: &SystemParams) -> TransitionTable {
    let levels = energy_levels(params);
    // (channel, index pair) for each single flip; pair listed as
    // (spin-up index, spin-down index) of the flipping spin.
    let flips = [
        (SpinChannel::Electron, 0usize, 1usize),
        (SpinChannel::Electron, 2, 3),
        (SpinChannel::Nuclear, 0, 2),
        (SpinChannel::Nuclear, 1, 3),
    ];
    let transitions = flips
        .iter()
        .map(|&(channel, up, down)| {
            let (from_index, to_index) = if levels[up] >= levels[down] {
                (down, up)
            } else {
                (up, down)
            };
            Transition {
                from_index,
                to_index,
                channel,
                angular_frequency: (levels[to_index] - levels[from_index]).abs(),
            }
        })
        .collect();
    TransitionTable { transitions }
}

/// H_m(t)/ħ = (γ_e·S_x − γ_n·I_x)·H_x·cos(ωt + φ).
///
/// Both spin channels hang off the same coil, exactly as in the drive term of
/// the model; cross-channel off-resonant effects are therefore present in
/// any simulation that uses this operator.
pub fn drive_hamiltonian(phys: &PhysicalInput, drive: &DriveParams, t: f64) -> Operator4 {
    let sx = spin_operator(SpinChannel::Electron, SpinAxis::X);
    let ix = spin_operator(SpinChannel::Nuclear, SpinAxis::X);
    let envelope = drive.amplitude_hx * (drive.frequency_omega * t + drive.phase).cos();
    sx.scale(crate::spin::cr(phys.gamma_e * envelope))
        .sub(&ix.scale(crate::spin::cr(phys.gamma_n * envelope)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::cr;

    #[test]
    fn zero_params_give_zero_hamiltonian() {
        let h = static_hamiltonian(&SystemParams::new(0.0, 0.0, 0.0));
        assert_eq!(h.frobenius_norm(), 0.0);
    }

    #[test]
    fn static_hamiltonian_matches_closed_form() {
        // Evaluate E(m_I, m_S) at all four sign pairs and compare against
        // the matrix assembled from spin operators.
        let p = SystemParams::new(100.0, 1.0, 4.0);
        let h = static_hamiltonian(&p);
        let expected = [50.5, -51.5, 49.5, -48.5];
        for i in 0..4 {
            assert!((h.get(i, i).re - expected[i]).abs() < 1e-12);
            for j in 0..4 {
                if i != j {
                    assert_eq!(h.get(i, j), crate::spin::Complex::ZERO);
                }
            }
        }
        assert!(h.is_hermitian(0.0));
    }

    #[test]
    fn static_hamiltonian_without_coupling() {
        let h = static_hamiltonian(&SystemParams::new(100.0, 1.0, 0.0));
        let expected = [49.5, -50.5, 50.5, -49.5];
        for i in 0..4 {
            assert!((h.get(i, i).re - expected[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_levels_match_matrix_diagonal() {
        let p = SystemParams::new(100.0, 1.0, 4.0);
        let h = static_hamiltonian(&p);
        let levels = energy_levels(&p);
        let expected = [50.5, -51.5, 49.5, -48.5];
        for i in 0..4 {
            assert!((levels[i] - expected[i]).abs() < 1e-12);
            assert!((levels[i] - h.get(i, i).re).abs() < 1e-12);
        }
        // all three generators are traceless
        assert!(levels.iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn transition_frequencies_from_level_differences() {
        let p = SystemParams::new(100.0, 1.0, 4.0);
        let levels = energy_levels(&p);
        let table = transition_table(&p);
        assert_eq!(table.transitions.len(), 4);
        for t in &table.transitions {
            let diff = (levels[t.to_index] - levels[t.from_index]).abs();
            assert!((t.angular_frequency - diff).abs() <= 1e-12 * diff.max(1.0));
            assert!(t.angular_frequency > 0.0);
            assert!(levels[t.to_index] >= levels[t.from_index]);
        }
        let mut electron: Vec<f64> = table
            .lines(SpinChannel::Electron)
            .iter()
            .map(|t| t.angular_frequency)
            .collect();
        electron.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((electron[0] - 98.0).abs() < 1e-12);
        assert!((electron[1] - 102.0).abs() < 1e-12);

        let mut nuclear: Vec<f64> = table
            .lines(SpinChannel::Nuclear)
            .iter()
            .map(|t| t.angular_frequency)
            .collect();
        nuclear.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((nuclear[0] - 1.0).abs() < 1e-12);
        assert!((nuclear[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn electron_lines_degenerate_without_coupling() {
        let table = transition_table(&SystemParams::new(100.0, 1.0, 0.0));
        let [up, down] = table.lines(SpinChannel::Electron);
        assert_eq!(up.angular_frequency, 100.0);
        assert_eq!(down.angular_frequency, 100.0);
    }

    #[test]
    fn line_for_selects_by_spectator() {
        let p = SystemParams::demo();
        let table = transition_table(&p);
        let line = table.line_for(SpinChannel::Electron, 0.5);
        assert!((line.angular_frequency - 1025.0).abs() < 1e-9);
        let line = table.line_for(SpinChannel::Electron, -0.5);
        assert!((line.angular_frequency - 975.0).abs() < 1e-9);
        // nuclear lines of the demo system: |−10 ± 25|
        let line = table.line_for(SpinChannel::Nuclear, 0.5);
        assert!((line.angular_frequency - 15.0).abs() < 1e-9);
        let line = table.line_for(SpinChannel::Nuclear, -0.5);
        assert!((line.angular_frequency - 35.0).abs() < 1e-9);
    }

    #[test]
    fn drive_vanishes_without_amplitude_or_at_node() {
        let phys = PhysicalInput::demo(&SystemParams::demo());
        let silent = DriveParams {
            amplitude_hx: 0.0,
            frequency_omega: 10.0,
            phase: 0.0,
            duration: 1.0,
        };
        assert_eq!(drive_hamiltonian(&phys, &silent, 0.3).frobenius_norm(), 0.0);

        let tone = DriveParams {
            amplitude_hx: 2.0,
            frequency_omega: 1.0,
            phase: 0.0,
            duration: 1.0,
        };
        // cos(ωt) = 0 at t = π/2
        let h = drive_hamiltonian(&phys, &tone, std::f64::consts::FRAC_PI_2);
        assert!(h.frobenius_norm() < 1e-12);
    }

    #[test]
    fn drive_reduces_to_electron_term() {
        let phys = PhysicalInput {
            gamma_n: 0.0,
            ..PhysicalInput::demo(&SystemParams::demo())
        };
        let tone = DriveParams {
            amplitude_hx: 3.0,
            frequency_omega: 5.0,
            phase: 0.0,
            duration: 1.0,
        };
        // t = 0 so cos(...) = 1
        let h = drive_hamiltonian(&phys, &tone, 0.0);
        let expected =
            spin_operator(SpinChannel::Electron, SpinAxis::X).scale(cr(phys.gamma_e * 3.0));
        assert!(h.frobenius_distance(&expected) < 1e-12);
    }

    #[test]
    fn drive_is_off_diagonal() {
        let phys = PhysicalInput::demo(&SystemParams::demo());
        let tone = DriveParams {
            amplitude_hx: 1.0,
            frequency_omega: 17.0,
            phase: 0.4,
            duration: 1.0,
        };
        for k in 0..20 {
            let h = drive_hamiltonian(&phys, &tone, 0.05 * k as f64);
            for i in 0..4 {
                assert_eq!(h.get(i, i), crate::spin::Complex::ZERO);
            }
            assert!(h.is_hermitian(1e-15));
        }
    }

    #[test]
    fn levels_are_linear_in_params() {
        let p = SystemParams::new(321.0, 7.0, 13.0);
        let scaled = SystemParams::new(p.omega_e * 2.5, p.omega_n * 2.5, p.a * 2.5);
        let base = energy_levels(&p);
        let big = energy_levels(&scaled);
        for i in 0..4 {
            assert!((big[i] - 2.5 * base[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn regime_flag() {
        assert!(SystemParams::demo().secular_regime_ok());
        assert!(!SystemParams::new(100.0, 1.0, 20.0).secular_regime_ok());
        assert!(!SystemParams::new(-100.0, 1.0, 1.0).secular_regime_ok());
        assert!(PhysicalInput::hydrogen(1.0).field_b == 1.0);
        assert!(SystemParams::from_physical(&PhysicalInput::hydrogen(1.0)).secular_regime_ok());
    }

    #[test]
    fn physical_round_trip() {
        let p = SystemParams::demo();
        let lifted = PhysicalInput::demo(&p);
        let back = SystemParams::from_physical(&lifted);
        assert!((back.omega_e - p.omega_e).abs() < 1e-12);
        assert!((back.omega_n - p.omega_n).abs() < 1e-12);
        assert!((back.a - p.a).abs() < 1e-12);
    }

    #[test]
    fn static_commutes_with_both_z_operators() {
        let h = static_hamiltonian(&SystemParams::demo());
        let sz = spin_operator(SpinChannel::Electron, SpinAxis::Z);
        let iz = spin_operator(SpinChannel::Nuclear, SpinAxis::Z);
        assert_eq!(h.commutator(&sz).frobenius_norm(), 0.0);
        assert_eq!(h.commutator(&iz).frobenius_norm(), 0.0);
    }
}
