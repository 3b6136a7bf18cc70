use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use infharm::oracle::{grid_eval, EnvelopeSampler};
use infharm::{admit, parse_spline, AdmissibleProblem, Execution, GridSpec, ProblemParams, Provenance};

const SPLINE: &str = "f0 0\nknot -1 0.5\nknot 0 0\nknot 1 0.5\n";

fn problem() -> AdmissibleProblem {
    admit(ProblemParams::new(parse_spline(SPLINE).unwrap(), 2.0, 0.1)).unwrap()
}

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn grids(c: &mut Criterion) {
    let p = problem();
    let cases = [
        (
            Provenance::ClosedForm,
            GridSpec {
                xmin: -2.0,
                xmax: 2.0,
                nx: 257,
                nd: 17,
                h_y: 1e-6,
                margin: 0.0,
            },
        ),
        (
            Provenance::BruteForce,
            GridSpec {
                xmin: -2.0,
                xmax: 2.0,
                nx: 33,
                nd: 5,
                h_y: 1e-6,
                margin: 0.0,
            },
        ),
    ];
    let mut group = c.benchmark_group("grid");
    group.sample_size(10);
    for (prov, spec) in cases {
        for (name, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(prov.as_str(), name), &spec, |b, spec| {
                b.iter(|| grid_eval(&p, black_box(spec), prov, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn envelopes(c: &mut Criterion) {
    let p = problem();
    let margin = 10.0 * p.window_radius * p.delta();
    let mut group = c.benchmark_group("envelope_sampler");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| EnvelopeSampler::new(&p, -2.0, 2.0, black_box(1e-4), margin, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, grids, envelopes);
criterion_main!(benches);
