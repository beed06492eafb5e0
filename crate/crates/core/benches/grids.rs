use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rmt_core::su1n::{phi_chi_l, ChiParam};
use rmt_core::{cx, par, Cx};
use std::hint::black_box;

fn grid(len: usize) -> Vec<(Cx, f64)> {
    (0..len).map(|j| (cx(0.0, 0.05 * (j % 40) as f64), 0.01 * (j / 40) as f64)).collect()
}

fn spherical_grid(c: &mut Criterion) {
    let p = ChiParam::new(3, 2).expect("valid parameters");
    let eval = |&(lam, t): &(Cx, f64)| phi_chi_l(lam, p, cx(t, 0.0)).map(|v| v.re).unwrap_or(f64::NAN);
    let mut group = c.benchmark_group("phi_chi_l grid");
    for len in [400usize, 1600] {
        let pts = grid(len);
        group.bench_with_input(BenchmarkId::new("sequential", len), &pts, |b, pts| {
            b.iter(|| par::map_seq(black_box(pts), eval))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", len), &pts, |b, pts| {
            b.iter(|| par::map_par(black_box(pts), eval))
        });
    }
    group.finish();
}

criterion_group!(benches, spherical_grid);
criterion_main!(benches);
