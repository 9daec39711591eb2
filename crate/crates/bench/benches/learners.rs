use criterion::{criterion_group, criterion_main, Criterion};
use netband::baselines::{run_classical_ucb, run_cucb, ClassicalUcbConfig, CucbConfig};
use netband::pucb::run_pucbi;
use netband::rng::{stream, Stream};
use netband::{Confidence, OracleMode, PucbConfig};
use netband_bench::fixture;

const HORIZON: usize = 2048;

fn learners(c: &mut Criterion) {
    let inst = fixture(10, 3, 2, 7);
    inst.optimum().unwrap();
    let mut group = c.benchmark_group("learners_n10");
    group.sample_size(10);
    group.bench_function("pucb_i", |b| {
        let cfg = PucbConfig {
            use_practical_delta: true,
            ..PucbConfig::new(HORIZON)
        };
        b.iter(|| {
            run_pucbi(
                &inst,
                inst.graph(),
                &cfg,
                &mut stream(1, Stream::Algorithm(0)),
            )
            .unwrap()
        })
    });
    group.bench_function("cucb", |b| {
        let cfg = CucbConfig {
            horizon: HORIZON,
            oracle: OracleMode::default(),
        };
        b.iter(|| {
            run_cucb(
                &inst,
                inst.graph(),
                &cfg,
                &mut stream(1, Stream::Algorithm(1)),
            )
            .unwrap()
        })
    });
    group.bench_function("classical_ucb", |b| {
        let cfg = ClassicalUcbConfig {
            horizon: HORIZON,
            confidence: Confidence::Practical,
            arm_budget: 1 << 20,
        };
        b.iter(|| run_classical_ucb(&inst, &cfg, &mut stream(1, Stream::Algorithm(2))).unwrap())
    });
    group.finish();
}

criterion_group!(benches, learners);
criterion_main!(benches);
