use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hemln::compose::LayerStore;
use hemln::meta::{build_cbg, HubRule, Metric};
use hemln::pairing::{pair_batch, Algorithm};
use hemln::par::ExecMode;
use hemln::synth::{gen_planted_mln, PlantedParams};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn params() -> PlantedParams {
    PlantedParams {
        layers: 6,
        blocks_per_layer: 20,
        block_size: 50,
        p_in: 0.2,
        p_out: 0.001,
        coupling_density: 0.02,
    }
}

fn layer_detection(c: &mut Criterion) {
    let (mln, _) = gen_planted_mln(params(), 1).unwrap();
    let names = mln.layer_names();
    let mut g = c.benchmark_group("layer_detection");
    g.sample_size(10);
    for (label, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| LayerStore::detect(&mln, &names, 42, HubRule::default(), mode).unwrap())
        });
    }
    g.finish();
}

fn pairing(c: &mut Criterion) {
    let (mln, _) = gen_planted_mln(params(), 2).unwrap();
    let names = mln.layer_names();
    let store = LayerStore::detect(&mln, &names, 42, HubRule::default(), ExecMode::Parallel).unwrap();
    let mut cbgs = Vec::new();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            let la = store.get(a).unwrap();
            let lb = store.get(b).unwrap();
            cbgs.push(build_cbg(&mln, a, b, la, lb, Metric::EdgeCount).unwrap());
        }
    }
    let mut g = c.benchmark_group("pair_batch");
    for algo in [Algorithm::Mwm, Algorithm::Mwpm] {
        for (label, mode) in MODES {
            g.bench_function(BenchmarkId::new(algo.code(), label), |b| {
                b.iter(|| pair_batch(&cbgs, algo, mode))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, layer_detection, pairing);
criterion_main!(benches);
