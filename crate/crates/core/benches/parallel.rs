//! Sequential vs. rayon-parallel sweeps on the two hot loops: OU decay
//! curves over a time grid and the Jacobi bound sweep over a large
//! spectral truncation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DMatrix;

use intertwine_core::exec;
use intertwine_core::jacobi;
use intertwine_core::ouhypo;

fn decay_workload(c: &mut Criterion) {
    let b = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 2.0]);
    let q = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[0.0, 1.0]));
    let model = ouhypo::build_model(&q, &b).unwrap();
    let f = ouhypo::random_test_function(2, 24, 3.0, 42);
    let ts: Vec<f64> = (0..600).map(|k| 10.0 * k as f64 / 599.0).collect();

    let weight = intertwine_core::gaussalg::GaussianWeight::new(model.qinf().clone()).unwrap();
    let fluct = f.sub(&intertwine_core::gaussalg::equilibrium_project(&f, &weight).unwrap());
    let mut group = c.benchmark_group("ou_decay_curve");
    let eval = |t: &f64| -> f64 {
        // one ratio evaluation, the per-point body of decay_curve
        let moved = intertwine_core::gaussalg::ou_apply(model.b(), model.qinf(), *t, &fluct).unwrap();
        intertwine_core::gaussalg::norm(&moved, &weight).unwrap()
    };
    group.bench_function(BenchmarkId::new("sequential", ts.len()), |bch| {
        bch.iter(|| exec::map_seq(&ts, eval))
    });
    group.bench_function(BenchmarkId::new("parallel", ts.len()), |bch| {
        bch.iter(|| exec::map_par(&ts, eval))
    });
    group.finish();
}

fn jacobi_workload(c: &mut Criterion) {
    let (gamma1, m, nmax) = (3.0, 2.0, 20_000usize);
    let log_f = jacobi::f_m_log_table(gamma1, m, nmax).unwrap();
    let grid = jacobi::default_bound_grid(gamma1, m, 64).unwrap();

    let mut group = c.benchmark_group("jacobi_bound_sweep");
    let eval = |t: &f64| -> f64 {
        (1..=nmax)
            .map(|n| (-jacobi::jacobi_eigenvalue(gamma1, n) * t - log_f[n]).exp())
            .fold(0.0f64, f64::max)
    };
    group.bench_function(BenchmarkId::new("sequential", nmax), |bch| {
        bch.iter(|| exec::map_seq(&grid, eval))
    });
    group.bench_function(BenchmarkId::new("parallel", nmax), |bch| {
        bch.iter(|| exec::map_par(&grid, eval))
    });
    group.finish();
}

criterion_group!(benches, decay_workload, jacobi_workload);
criterion_main!(benches);
