//! Randomized properties shared by the core test suite and the acceptance
//! report.

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use phscalc_core::arith::{int, rat, GaussianRational, Poly1, Rational, RationalFunction};
use phscalc_core::classify::{pair_equiv, verify_witness};
use phscalc_core::geometry::{div_leq, Affine, Base, BaseFunction, CurveBase, PrimeDivisor, WeilQDivisor};
use phscalc_core::graded::build_graded;
use phscalc_core::pairs::{dpd_to_seg, dpd_validate, seg_to_dpd, DpdPair};
use phscalc_core::segdiv::{Segment, SegmentalDivisor};

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Small coefficients keep the degrees of `h` moderate.
fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn segment() -> impl Strategy<Value = Segment> {
    (rational(), 0i64..=8, 1i64..=4).prop_map(|(lo, len, d)| {
        let hi = &lo + &rat(len, d);
        Segment::new(lo, hi).unwrap()
    })
}

fn point() -> impl Strategy<Value = GaussianRational> {
    (-3i64..=3, -2i64..=2).prop_map(|(re, im)| GaussianRational::new(int(re), int(im)))
}

fn segdiv() -> impl Strategy<Value = SegmentalDivisor> {
    prop::collection::vec((point(), segment()), 0..5)
        .prop_map(|terms| SegmentalDivisor::from_terms(terms.into_iter().map(|(p, s)| (PrimeDivisor::Point(p), s))))
}

fn line() -> Base {
    Base::Curve(CurveBase::standard("z"))
}

fn ceil(q: &Rational) -> i64 {
    q.ceil().to_integer().try_into().unwrap()
}

/// A DPD pair on the line with conjugation: random `D`, then
/// `h = c·Π(z − q)^{e_q}` with `e_q = e_{q̄} ≥ (D + τ*D)_q`.
fn dpd_pair() -> impl Strategy<Value = DpdPair> {
    dpd_pair_upto(3)
}

fn dpd_pair_upto(points: usize) -> impl Strategy<Value = DpdPair> {
    (prop::collection::vec((point(), small_rational()), 0..=points), prop::collection::vec(0i64..=1, 8), 1i64..=3, any::<bool>())
        .prop_map(|(terms, extra, c, neg)| {
            let d = WeilQDivisor::from_terms(terms.iter().map(|(p, q)| (PrimeDivisor::Point(p.clone()), q.clone())));
            let sym = d.add(&line().pullback_real(&d));
            let mut num = Poly1::one();
            let mut den = Poly1::one();
            let mut seen: Vec<GaussianRational> = Vec::new();
            for (k, (p, _)) in terms.iter().enumerate() {
                if seen.contains(p) {
                    continue;
                }
                let e = ceil(&sym.coeff(&PrimeDivisor::Point(p.clone()))) + extra[k];
                let mut factors = vec![p.clone()];
                if !p.is_real() {
                    factors.push(p.conj());
                }
                for q in factors {
                    seen.push(q.clone());
                    let lin = Poly1::linear(&q).pow(e.unsigned_abs() as u32);
                    if e >= 0 {
                        num = &num * &lin;
                    } else {
                        den = &den * &lin;
                    }
                }
            }
            let c = if neg { -c } else { c };
            let h = RationalFunction::new(num.scale(&GaussianRational::from_i64(c)), den).unwrap();
            dpd_validate(&line(), d, BaseFunction::Rational(h)).expect("constructed to satisfy the inequality")
        })
}

fn real_affine() -> impl Strategy<Value = Affine> {
    (small_rational().prop_filter("nonzero", |a| !a.is_zero()), small_rational())
        .prop_map(|(a, b)| Affine::new(GaussianRational::real(a), GaussianRational::real(b)).unwrap())
}

fn twist_function() -> impl Strategy<Value = RationalFunction> {
    (prop::collection::vec(point(), 0..3), prop::collection::vec(point(), 0..2), 1i64..=3).prop_map(|(zeros, poles, c)| {
        let num = zeros.iter().fold(Poly1::constant(GaussianRational::from_i64(c)), |acc, p| &acc * &Poly1::linear(p));
        let den = poles.iter().fold(Poly1::one(), |acc, p| &acc * &Poly1::linear(p));
        RationalFunction::new(num, den).unwrap()
    })
}

/// One randomized property: a name and a runner taking the case count.
pub struct Suite {
    pub name: &'static str,
    pub run: fn(u32) -> Result<(), String>,
}

/// Runs with the deterministic default seed so failures reproduce.
fn check<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn ev_homomorphism(cases: u32) -> Result<(), String> {
    check(cases, (segment(), segment(), -20i64..=20), |(s, t, m)| {
        let direct = |seg: &Segment| {
            let a = int(m) * seg.lo();
            let b = int(m) * seg.hi();
            if a < b { a } else { b }
        };
        prop_assert_eq!(s.add(&t).ev(m), direct(&s) + direct(&t));
        prop_assert_eq!(s.ev(m), direct(&s));
        Ok(())
    })
}

fn superadditive(cases: u32) -> Result<(), String> {
    check(cases, (segdiv(), -12i64..=12, -12i64..=12), |(d, m, n)| {
        prop_assert!(div_leq(&d.eval(m).add(&d.eval(n)), &d.eval(m + n)));
        Ok(())
    })
}

fn opposite_degrees(cases: u32) -> Result<(), String> {
    check(cases, (segdiv(), -12i64..=12), |(d, m)| {
        prop_assert!(div_leq(&d.eval(m).add(&d.eval(-m)), &WeilQDivisor::zero()));
        Ok(())
    })
}

fn dpd_seg_round_trip(cases: u32) -> Result<(), String> {
    check(cases, dpd_pair(), |p| {
        let phs = dpd_to_seg(&p);
        prop_assert_eq!(&seg_to_dpd(&phs), &p);
        prop_assert_eq!(seg_to_dpd(&phs).to_phs(), phs);
        Ok(())
    })
}

/// `τ_{−m}*∘τ_m* = id`, and `τ_m*` maps `A_m` onto `A_{−m}`: `g_m` goes to
/// a unit times `g_{−m}`, with `ū_m·u_{−m} = 1`.
fn graded_involution(cases: u32) -> Result<(), String> {
    check(cases, dpd_pair_upto(2), |p| {
        let (slice, inv) = build_graded(&dpd_to_seg(&p), 3).unwrap();
        for m in -3i64..=3 {
            let g = slice.generator(m).unwrap();
            prop_assert_eq!(&inv.apply(-m, &inv.apply(m, g)), g);
            let u = inv.unit(m).expect("image is a constant multiple of g_(-m)");
            let v = inv.unit(-m).unwrap();
            prop_assert!((&u.conj() * v).is_one());
            prop_assert_eq!(&slice.generator(-m).unwrap().scale(u), inv.image(m).unwrap());
        }
        Ok(())
    })
}

fn witness_replays(cases: u32) -> Result<(), String> {
    check(cases, (dpd_pair(), real_affine(), twist_function()), |(p, psi, f)| {
        let q = p.twist(&psi, &f).unwrap();
        for (a, b) in [(&p, &q), (&q, &p)] {
            let d = pair_equiv(a, b).unwrap();
            let w = d.witness().expect("twisted pairs are equivalent");
            prop_assert!(verify_witness(a, b, w));
        }
        Ok(())
    })
}

/// `h ↦ (λλ̄)·h` keeps the class, with `λ = re + i·im ≠ 0`.
fn norm_scaling(cases: u32) -> Result<(), String> {
    let lambda = (-4i64..=4, -4i64..=4).prop_filter("nonzero", |(re, im)| *re != 0 || *im != 0);
    check(cases, (dpd_pair(), lambda), |(p, (re, im))| {
        let n = GaussianRational::new(int(re), int(im)).norm();
        let h = p.h().as_rational().unwrap().scale(&GaussianRational::real(n));
        let scaled = dpd_validate(p.base(), p.divisor().clone(), BaseFunction::Rational(h)).unwrap();
        let d = pair_equiv(&p, &scaled).unwrap();
        let w = d.witness().expect("norm scaling keeps the class");
        prop_assert!(w.residual.is_positive());
        prop_assert!(w.residual.is_one());
        prop_assert!(verify_witness(&p, &scaled, w));
        Ok(())
    })
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite { name: "ev_m homomorphism", run: ev_homomorphism },
        Suite { name: "D(m)+D(n) <= D(m+n)", run: superadditive },
        Suite { name: "D(m)+D(-m) <= 0", run: opposite_degrees },
        Suite { name: "tau_(-m)* tau_m* = id, sigma*(A_m) = A_(-m)", run: graded_involution },
        Suite { name: "dpd <-> seg round trip", run: dpd_seg_round_trip },
        Suite { name: "pair_equiv witness replay", run: witness_replays },
        Suite { name: "h -> (lambda*conj(lambda))*h invariance", run: norm_scaling },
    ]
}
