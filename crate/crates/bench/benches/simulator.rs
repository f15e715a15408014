use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use hfqpu_core::algorithms::{grover, RunSetup};
use hfqpu_core::dynamics::{expm_i_hermitian, propagate, PropagationSpec};
use hfqpu_core::gates::Gate;
use hfqpu_core::hamiltonian::{static_hamiltonian, PhysicalInput, SystemParams};
use hfqpu_core::pulse::{compile_gate, execute, Backend, DriveBudget};
use hfqpu_core::spin::{spin_operator, Complex, SpinAxis, SpinChannel};

fn bench_expm(c: &mut Criterion) {
    let p = SystemParams::demo();
    let h = static_hamiltonian(&p)
        .add(&spin_operator(SpinChannel::Electron, SpinAxis::X).scale(Complex::new(1.3, 0.0)));
    c.bench_function("expm_i_hermitian 4x4", |b| {
        b.iter(|| expm_i_hermitian(black_box(&h), black_box(1.7e-4)).unwrap())
    });
}

fn bench_propagate(c: &mut Criterion) {
    let p = SystemParams::demo();
    let h0 = static_hamiltonian(&p);
    let sx = spin_operator(SpinChannel::Electron, SpinAxis::X);
    let driven = move |t: f64| h0.add(&sx.scale(Complex::new(2.0 * (1025.0 * t).cos(), 0.0)));
    let dt = 1.226e-4;
    let spec = PropagationSpec::new(0.0, 1000.0 * dt, dt);
    c.bench_function("propagate 1000 midpoint steps", |b| {
        b.iter(|| propagate(black_box(driven), black_box(&spec)).unwrap())
    });
}

fn bench_cnot(c: &mut Criterion) {
    let p = SystemParams::demo();
    let phys = PhysicalInput::demo(&p);
    let budget = DriveBudget::default();
    let gate = Gate::Cnot {
        control: SpinChannel::Nuclear,
    };
    c.bench_function("compile + ideal execute CNOT", |b| {
        b.iter(|| {
            let seq = compile_gate(black_box(&gate), &p, &budget).unwrap();
            execute(&seq, Backend::Ideal, &p, &phys, None).unwrap()
        })
    });
    let seq = compile_gate(&gate, &p, &budget).unwrap();
    c.bench_function("physical execute CNOT", |b| {
        b.iter(|| execute(black_box(&seq), Backend::Physical, &p, &phys, None).unwrap())
    });
}

fn bench_grover(c: &mut Criterion) {
    let setup = RunSetup::demo(256, 42);
    c.bench_function("grover ideal end-to-end", |b| {
        b.iter(|| grover(black_box(2), 1, Backend::Ideal, &setup).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bench_expm, bench_propagate, bench_cnot, bench_grover
}
criterion_main!(benches);
