use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use presslim::compile::DEFAULT_BUDGET;
use presslim::encoding::{decode, encode};
use presslim::enumerate::{enumerate_trees, EnumerationSpec};
use presslim::fixtures::ord_omega;
use presslim::par::Exec;
use presslim::presentation::{convert_presentation, KPolicy};
use presslim::random::random_reduced;
use presslim::random::RandomSpec;
use presslim::slim::{decide_slim, exact_max_thickness};
use presslim::symbol::alphabet;
use presslim::verify::{sanity_order_word, verify_presentation};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn bench_verify(c: &mut Criterion) {
    let tree = ord_omega();
    let word = convert_presentation(&tree, KPolicy::Exact, DEFAULT_BUDGET).unwrap();
    let mut g = c.benchmark_group("verify_ord_omega");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::new(name, 6), |b| b.iter(|| verify_presentation(&tree, &word, 6, exec).unwrap()));
    }
    g.finish();

    let mut g = c.benchmark_group("sanity_order_word");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::new(name, 8), |b| b.iter(|| sanity_order_word(&word, 8, exec).unwrap()));
    }
    g.finish();
}

fn bench_round_trip(c: &mut Criterion) {
    let spec = EnumerationSpec::new(alphabet(&["a", "b"]), 4).thickness(3);
    let trees = enumerate_trees(&spec);
    let mut g = c.benchmark_group("round_trip_k3");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(name, |b| {
            b.iter(|| exec.count(&trees, |t| decode(&encode(t, 3).unwrap()).unwrap() == *t))
        });
    }
    g.finish();
}

fn bench_slim_sweep(c: &mut Criterion) {
    let sample = random_reduced(2024, 100, RandomSpec { sink_bias: 0.6, ..RandomSpec::default() });
    let mut g = c.benchmark_group("slim_sweep");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(name, |b| {
            b.iter(|| {
                exec.map(&sample, |a| {
                    let v = decide_slim(a);
                    v.is_slim().then(|| exact_max_thickness(a, v.bound as usize).ok())
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bench_verify, bench_round_trip, bench_slim_sweep);
criterion_main!(benches);
