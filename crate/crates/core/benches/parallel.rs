//! Sequential vs parallel sweeps. On a single core the two should be close;
//! the gap shows the scheduling overhead.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use dedekind::arith::{rat, rat_frac, Poly};
use dedekind::closure::{closure_intersection_probe, Extension};
use dedekind::field::{make_field, FieldElement};
use dedekind::galois::{chebotarev_census, subfield_generated_by, GaloisGroup};
use dedekind::par::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn census(c: &mut Criterion) {
    let field = make_field(&Poly::from_ints([1, 0, -10, 0, 1]), None).unwrap();
    let group = GaloisGroup::over_rationals(&field).unwrap();
    let mut g = c.benchmark_group("chebotarev_census");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 2000), &exec, |b, &exec| {
            b.iter(|| chebotarev_census(&group, black_box(2000), exec).unwrap())
        });
    }
    g.finish();
}

fn probe(c: &mut Criterion) {
    // Q(sqrt2,sqrt3) over Q(sqrt6); sqrt2 = (theta^3 - 9 theta) / 2
    let field = make_field(&Poly::from_ints([1, 0, -10, 0, 1]), None).unwrap();
    let sqrt2 = FieldElement::new(&field, vec![rat(0), rat_frac(-9, 2), rat(0), rat_frac(1, 2)]);
    let sqrt6 = FieldElement::from_ints(&field, &[-5, 0, 1]);
    let (_, emb) = subfield_generated_by(&sqrt6).unwrap();
    let ext = Extension::new(emb).unwrap();
    let mut g = c.benchmark_group("closure_intersection_probe");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 25), &exec, |b, &exec| {
            b.iter(|| closure_intersection_probe(&ext, black_box(&sqrt2), 25, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, census, probe);
criterion_main!(benches);
