//! Property tests for the algebraic invariants of the simulator.

#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;

use hfqpu_core::dynamics::expm_i_hermitian;
use hfqpu_core::gates::{equal_up_to_global_phase, process_fidelity};
use hfqpu_core::hamiltonian::{
    drive_hamiltonian, energy_levels, static_hamiltonian, transition_table, DriveParams,
    PhysicalInput, SystemParams,
};
use hfqpu_core::pulse::{PulseElement, PulseSequence, VirtualTarget};
use hfqpu_core::spin::{Complex, Operator4, SpinChannel};

fn params_strategy() -> impl Strategy<Value = SystemParams> {
    (-5000.0f64..5000.0, -500.0f64..500.0, -500.0f64..500.0)
        .prop_map(|(omega_e, omega_n, a)| SystemParams::new(omega_e, omega_n, a))
}

fn hermitian_strategy() -> impl Strategy<Value = Operator4> {
    proptest::collection::vec(-10.0f64..10.0, 16).prop_map(|v| {
        let mut m = Operator4::zero();
        for i in 0..4 {
            m.set(i, i, Complex::new(v[i], 0.0));
        }
        let mut k = 4;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let z = Complex::new(v[k], v[k + 1]);
                k += 2;
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn levels_scale_linearly(p in params_strategy(), c in -8.0f64..8.0) {
        let scaled = SystemParams::new(p.omega_e * c, p.omega_n * c, p.a * c);
        let base = energy_levels(&p);
        let big = energy_levels(&scaled);
        let scale = (p.omega_e.abs() + p.omega_n.abs() + p.a.abs()) * c.abs();
        for i in 0..4 {
            prop_assert!((big[i] - c * base[i]).abs() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn transition_frequencies_are_level_differences(p in params_strategy()) {
        let levels = energy_levels(&p);
        let table = transition_table(&p);
        prop_assert_eq!(table.transitions.len(), 4);
        let mut per_channel = [0usize; 2];
        for t in &table.transitions {
            let diff = (levels[t.to_index] - levels[t.from_index]).abs();
            let scale = diff.max(1e-9);
            prop_assert!((t.angular_frequency - diff).abs() <= 1e-12 * scale);
            prop_assert!(t.angular_frequency >= 0.0);
            per_channel[match t.channel { SpinChannel::Electron => 0, SpinChannel::Nuclear => 1 }] += 1;
            // exactly one spin flips between from and to
            let differs = (t.from_index ^ t.to_index).count_ones();
            prop_assert_eq!(differs, 1);
        }
        prop_assert_eq!(per_channel, [2, 2]);
    }

    #[test]
    fn static_hamiltonian_diagonal_matches_levels(p in params_strategy()) {
        let h = static_hamiltonian(&p);
        let levels = energy_levels(&p);
        let scale = (p.omega_e.abs() + p.omega_n.abs() + p.a.abs()).max(1.0);
        for i in 0..4 {
            prop_assert!((h.get(i, i).re - levels[i]).abs() <= 1e-12 * scale);
            for j in 0..4 {
                if i != j {
                    prop_assert_eq!(h.get(i, j), Complex::ZERO);
                }
            }
        }
    }

    #[test]
    fn drive_is_hermitian_and_off_diagonal(
        p in params_strategy(),
        hx in 0.0f64..10.0,
        omega in 0.1f64..2000.0,
        phi in -7.0f64..7.0,
        t in 0.0f64..10.0,
    ) {
        let phys = PhysicalInput::demo(&p);
        let tone = DriveParams { amplitude_hx: hx, frequency_omega: omega, phase: phi, duration: 1.0 };
        let h = drive_hamiltonian(&phys, &tone, t);
        prop_assert!(h.is_hermitian(1e-12 * h.frobenius_norm().max(1.0)));
        for i in 0..4 {
            prop_assert_eq!(h.get(i, i), Complex::ZERO);
        }
    }

    #[test]
    fn expm_is_unitary_and_inverts(h in hermitian_strategy(), t in -5.0f64..5.0) {
        let u = expm_i_hermitian(&h, t).unwrap();
        prop_assert!(u.is_unitary(1e-12));
        let back = expm_i_hermitian(&h, -t).unwrap();
        prop_assert!(u.matmul(&back).frobenius_distance(&Operator4::identity()) < 1e-12);
    }

    #[test]
    fn fidelity_symmetric_and_phase_blind(
        g in hermitian_strategy(),
        h in hermitian_strategy(),
        phi in -7.0f64..7.0,
    ) {
        let u = expm_i_hermitian(&g, 1.0).unwrap();
        let v = expm_i_hermitian(&h, 1.0).unwrap();
        let f_uv = process_fidelity(&u, &v).unwrap();
        let f_vu = process_fidelity(&v, &u).unwrap();
        prop_assert!((f_uv - f_vu).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f_uv));

        let spun = u.scale(Complex::new(phi.cos(), phi.sin()));
        prop_assert!((process_fidelity(&u, &spun).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!(equal_up_to_global_phase(&u, &spun, 1e-9));
        prop_assert!(process_fidelity(&u, &spun).unwrap() >= 1.0 - 1e-12);
    }
}

fn element_strategy() -> impl Strategy<Value = PulseElement> {
    prop_oneof![
        (
            prop_oneof![Just(SpinChannel::Electron), Just(SpinChannel::Nuclear)],
            0.1f64..5000.0,
            1e-3f64..100.0,
            -7.0f64..7.0,
            0.0f64..100.0,
        )
            .prop_map(|(channel, carrier, rabi, phi, duration)| {
                PulseElement::RfPulse {
                    channel,
                    carrier_omega: carrier,
                    rabi_rate: rabi,
                    phase: phi,
                    duration,
                }
            }),
        (0.0f64..100.0).prop_map(|duration| PulseElement::Delay { duration }),
        (
            prop_oneof![
                Just(VirtualTarget::Electron),
                Just(VirtualTarget::Nuclear),
                Just(VirtualTarget::Zz)
            ],
            -20.0f64..20.0,
        )
            .prop_map(|(target, angle)| PulseElement::VirtualZ { target, angle }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pulse_sequence_json_round_trips_bit_exactly(
        elements in proptest::collection::vec(element_strategy(), 0..12),
        global_phase in -20.0f64..20.0,
    ) {
        let seq = PulseSequence { elements, global_phase, warnings: Vec::new() };
        let text = seq.to_json();
        let back = PulseSequence::from_json(&text).unwrap();
        prop_assert_eq!(&back, &seq);
        prop_assert_eq!(back.to_json(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn measurement_counts_partition_shots(
        weights in proptest::collection::vec(0.01f64..1.0, 4),
        shots in 1u64..2000,
        seed in any::<u64>(),
    ) {
        let norm: f64 = weights.iter().sum::<f64>().sqrt();
        let amps = [
            Complex::new(weights[0].sqrt() / norm, 0.0),
            Complex::new(weights[1].sqrt() / norm, 0.0),
            Complex::new(weights[2].sqrt() / norm, 0.0),
            Complex::new(weights[3].sqrt() / norm, 0.0),
        ];
        let state = hfqpu_core::spin::StateVector4::new(amps);
        let a = hfqpu_core::algorithms::measure(&state, shots, seed).unwrap();
        prop_assert_eq!(a.counts.iter().sum::<u64>(), shots);
        let b = hfqpu_core::algorithms::measure(&state, shots, seed).unwrap();
        prop_assert_eq!(a.counts, b.counts);
    }
}
