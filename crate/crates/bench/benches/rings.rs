use std::path::PathBuf;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use orbring_core::verify::{self, Suite};
use orbring_core::{InvariantRing, OrbifoldDatum, StringyRing, Theory};

fn load(name: &str) -> Arc<OrbifoldDatum> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../corpus/{name}.json"));
    Arc::new(OrbifoldDatum::load(path).unwrap())
}

fn tables(c: &mut Criterion) {
    let kummer = load("kummer");
    for theory in Theory::ALL {
        c.bench_function(&format!("kummer {theory} table"), |b| {
            b.iter(|| StringyRing::new(kummer.clone(), theory).unwrap())
        });
    }
    let ring = StringyRing::new(kummer.clone(), Theory::Chow).unwrap();
    c.bench_function("kummer invariant subring", |b| {
        b.iter(|| InvariantRing::new(&ring).unwrap())
    });
    c.bench_function("kummer load", |b| b.iter(|| load("kummer")));
}

fn checks(c: &mut Criterion) {
    let mut g = c.benchmark_group("checks");
    g.sample_size(10);
    let kummer = load("kummer");
    let ring = StringyRing::new(kummer.clone(), Theory::K).unwrap();
    g.bench_function("kummer associativity", |b| {
        b.iter(|| verify::check_associativity(&ring))
    });
    for name in ["c2_z3", "p2_z3", "bg_s3"] {
        let d = load(name);
        g.bench_function(format!("{name} all suites"), |b| {
            b.iter(|| verify::run(&d, &Suite::ALL, None))
        });
    }
    g.finish();
}

criterion_group!(benches, tables, checks);
criterion_main!(benches);
