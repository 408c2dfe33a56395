use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use phscalc_core::arith::{int, GaussianRational, Poly1, RationalFunction};
use phscalc_core::geometry::{Base, BaseFunction, CurveBase, PrimeDivisor};
use phscalc_core::segdiv::{Segment, SegmentalDivisor};
use phscalc_core::symbolic::verify_hp;
use phscalc_core::{build_graded, downgrade, mj_equiv, pair_equiv, phs_validate, DpdPair};

fn poly(c: &[i64]) -> Poly1 {
    Poly1::from_rationals(c.iter().map(|x| int(*x)).collect())
}

fn mj(c: &mut Criterion) {
    let p = poly(&[1, -2, 3]);
    let mut g = c.benchmark_group("mj_verify");
    g.sample_size(10);
    for r in 1..=3u32 {
        g.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| b.iter(|| verify_hp(black_box(&p), r).unwrap()));
    }
    g.finish();
    c.bench_function("mj_equiv r=3", |b| {
        let q = poly(&[2, -16, 96]);
        b.iter(|| mj_equiv(black_box(&p), black_box(&q), 3).unwrap())
    });
}

fn toric(c: &mut Criterion) {
    let mut g = c.benchmark_group("downgrade");
    for r in 1..=3i64 {
        let n = 2 * r + 1;
        let w = [2, -2, n, -n];
        g.bench_with_input(BenchmarkId::from_parameter(n), &w, |b, w| b.iter(|| downgrade(black_box(w), &[]).unwrap()));
    }
    g.finish();
}

fn shifted(beta: i64, c: i64) -> DpdPair {
    let base = Base::Curve(CurveBase::standard("z"));
    let bg = GaussianRational::from_i64(beta);
    let h = (&RationalFunction::var() - &RationalFunction::constant(bg.clone())).scale(&GaussianRational::from_i64(c));
    let d = SegmentalDivisor::single(PrimeDivisor::Point(bg), Segment::new(int(0), int(1)).unwrap());
    phs_validate(&base, d, BaseFunction::Rational(h)).unwrap().to_dpd()
}

fn equiv(c: &mut Criterion) {
    let (a, b) = (shifted(3, 2), shifted(0, 1));
    c.bench_function("pair_equiv", |bn| bn.iter(|| pair_equiv(black_box(&a), black_box(&b)).unwrap()));
    let phs = phs_validate(
        &Base::Curve(CurveBase::standard("z")),
        SegmentalDivisor::single(PrimeDivisor::Point(GaussianRational::from_i64(0)), Segment::new(int(0), int(1)).unwrap()),
        BaseFunction::Rational(RationalFunction::var()),
    )
    .unwrap();
    c.bench_function("build_graded mmax=12", |bn| bn.iter(|| build_graded(black_box(&phs), 12).unwrap()));
}

criterion_group!(benches, mj, toric, equiv);
criterion_main!(benches);
