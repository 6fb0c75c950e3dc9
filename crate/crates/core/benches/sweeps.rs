//! Sequential versus rayon execution of the main sweeps.
//!
//!   cargo bench -p stiefel-core
//!   cargo bench -p stiefel-core --no-default-features   # both arms sequential

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stiefel_core::actions::{self, ActionRow};
use stiefel_core::curvature::CurvatureTensor;
use stiefel_core::tables;
use stiefel_core::totgeo::{self, TojoChecker, TojoOptions};
use stiefel_core::{build_space, Exec};

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn table1(c: &mut Criterion) {
    let ns: Vec<usize> = (3..=8).collect();
    let mut g = c.benchmark_group("table1_sweep");
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::new(name, "n3..8x16"), |b| {
            b.iter(|| tables::table1_sweep(black_box(&ns), 16, exec).unwrap())
        });
    }
    g.finish();
}

fn tensor(c: &mut Criterion) {
    let mut g = c.benchmark_group("curvature_tensor");
    for n in [4, 8] {
        let space = build_space(n).unwrap();
        for (name, exec) in POLICIES {
            g.bench_with_input(BenchmarkId::new(name, n), &space, |b, s| b.iter(|| CurvatureTensor::new(s, exec)));
        }
    }
    g.finish();
}

fn tojo(c: &mut Criterion) {
    let mut g = c.benchmark_group("tojo_catalog");
    g.sample_size(10);
    for n in [4, 6] {
        let space = build_space(n).unwrap();
        let catalog = totgeo::catalog(&space).unwrap();
        for (name, exec) in POLICIES {
            let checker = TojoChecker::new(&space, exec);
            let opts = TojoOptions { exec, ..Default::default() };
            g.bench_with_input(BenchmarkId::new(name, n), &catalog, |b, cat| {
                b.iter(|| checker.check_all(black_box(cat), &opts).unwrap())
            });
        }
    }
    g.finish();
}

fn orbits(c: &mut Criterion) {
    let spec = actions::build_action(ActionRow::Spin9So2).unwrap();
    let mut g = c.benchmark_group("cohomogeneity_spin9");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_function(name, |b| b.iter(|| actions::cohomogeneity(&spec, 16, 42, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, table1, tensor, tojo, orbits);
criterion_main!(benches);
