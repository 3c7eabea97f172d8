use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rmi_core::*;

fn weno5(c: &mut Criterion) {
    let params = WenoParams::default();
    let smooth = Stencil5([1.0, 1.1, 1.3, 1.6, 2.0]);
    let jump = Stencil5([1.0, 1.0, 1.0, 4.0, 4.0]);
    c.bench_function("weno5/smooth", |b| {
        b.iter(|| weno5_reconstruct(black_box(&smooth), &params))
    });
    c.bench_function("weno5/jump", |b| {
        b.iter(|| weno5_reconstruct(black_box(&jump), &params))
    });
}

fn line_flux_bench(c: &mut Criterion) {
    let (spec, mut field) = init_rmi(RmiParams::for_mach(1.21).unwrap(), 64).unwrap();
    fill_ghost(&mut field, &spec.bc);
    let mut line = Vec::new();
    field.read_line(Direction::Y, field.nx() / 2, &mut line);
    let alpha = max_wave_speed(&field, Direction::Y, &spec.eos).unwrap();
    c.bench_function("line_flux/rmi_column_64ppw", |b| {
        b.iter(|| line_flux(black_box(&line), Direction::Y, &spec.eos, &spec.weno, alpha).unwrap())
    });
}

fn strang_step_bench(c: &mut Criterion) {
    let (spec, mut field) = init_rmi(RmiParams::for_mach(1.21).unwrap(), 16).unwrap();
    fill_ghost(&mut field, &spec.bc);
    let scheme = spec.scheme();
    let dt = compute_dt(&field, spec.cfl, &spec.eos, spec.dt_mode).unwrap();
    let mut group = c.benchmark_group("strang_step");
    group.sample_size(20);
    group.bench_function("rmi_16ppw", |b| {
        b.iter_batched_ref(
            || field.clone(),
            |f| strang_step(f, dt, &spec.bc, &scheme).unwrap(),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

criterion_group!(benches, weno5, line_flux_bench, strang_step_bench);
criterion_main!(benches);
