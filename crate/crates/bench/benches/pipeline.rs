//! Hot-path benchmarks: propagators, single protocol shots, DSL parsing and
//! a small sweep.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use qfb_core::dynamics::{lab_propagator, rwa_propagator, DriveParams, IntegratorConfig, RotatingFrameParams};
use qfb_core::feedback::{build_initialization, run_schedule, SimOptions};
use qfb_core::harness::{calibrate_rabi, initialization_map, Axis, InitMapConfig, SweepSpec};
use qfb_core::seqlang::{lower, parse};
use qfb_core::{DeviceParams, PureState, RandomSource};

const DEMO_SEQ: &str = "\
pulse x for 1.7ns
readout on
pulse x 90deg
wait 5.5ns
pulse x 90deg
readout off
readout on
measure
readout off
";

fn bench_propagators(c: &mut Criterion) {
    let p = RotatingFrameParams::new(5.7e8, 3.5e9, 0.45e-9).unwrap();
    c.bench_function("rwa_propagator", |b| b.iter(|| rwa_propagator(black_box(&p))));

    let drive = DriveParams::resonant(2.0 * std::f64::consts::PI * 3.4e9, 2.0 * std::f64::consts::PI * 100e6, 1e-9)
        .unwrap();
    let cfg = IntegratorConfig::default_1ps(drive.fastest_angular_frequency()).unwrap();
    c.bench_function("lab_propagator_1ns_1ps", |b| {
        b.iter(|| lab_propagator(black_box(&drive), black_box(&cfg)).unwrap())
    });
}

fn bench_protocol_shot(c: &mut Criterion) {
    let device = DeviceParams::default();
    let schedule = build_initialization(&device).unwrap();
    let opts = SimOptions::default();
    let mut shot = 0u64;
    c.bench_function("initialization_shot", |b| {
        b.iter(|| {
            shot += 1;
            let mut rng = RandomSource::new(1, shot);
            run_schedule(&schedule, &PureState::ground(), &mut rng, &opts).unwrap()
        })
    });
}

fn bench_dsl(c: &mut Criterion) {
    let device = DeviceParams::default();
    c.bench_function("parse_and_lower_demo", |b| {
        b.iter(|| lower(&parse(black_box(DEMO_SEQ)).unwrap(), &device).unwrap())
    });
}

fn bench_sweep(c: &mut Criterion) {
    let device = DeviceParams::default();
    let cal = calibrate_rabi(&[1.7e-9, 3.5e-9, 5.3e-9], &[2.6e-9, 4.4e-9]).unwrap();
    let sweep = SweepSpec::new(
        Axis::new("tau1", 0.0, 3e-9, 0.5e-9).unwrap(),
        Some(Axis::new("tau2", 0.0, 8e-9, 1.0e-9).unwrap()),
        50,
        1,
    )
    .unwrap();
    c.bench_function("init_map_7x9_cells_50_shots", |b| {
        b.iter(|| initialization_map(&sweep, &device, &cal, &InitMapConfig::default()).unwrap())
    });
}

criterion_group!(benches, bench_propagators, bench_protocol_shot, bench_dsl, bench_sweep);
criterion_main!(benches);
