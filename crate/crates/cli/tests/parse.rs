use std::collections::BTreeMap;

use num_traits::Signed;
use proptest::prelude::*;

use phscalc_cli::{parse, parse_poly, Document, PairDecl, PairDivisor, ParseError, Task};
use phscalc_core::arith::{int, rat, GaussianRational, Poly1, Rational, RationalFunction};
use phscalc_core::geometry::{Base, BaseFunction, CurveBase, FunctionWord, PresentedBase, PrimeDivisor, WeilQDivisor};
use phscalc_core::segdiv::{Segment, SegmentalDivisor};

fn gr(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(int(re), int(im))
}

#[test]
fn one_validate_task() {
    let doc = parse("base curve conj; pair dpd D = 0, h = w^2+1; validate").unwrap();
    assert_eq!(doc.tasks, vec![Task::Validate(Some("p1".into()))]);
    let p = &doc.pairs[0];
    assert_eq!(p.divisor, PairDivisor::Dpd(WeilQDivisor::zero()));
    let w2 = Poly1::from_rationals(vec![int(1), int(0), int(1)]);
    assert_eq!(p.h, BaseFunction::Rational(RationalFunction::from_poly(w2)));
    assert_eq!(doc.base.var(), "w");
}

#[test]
fn two_term_segdiv() {
    let doc = parse("base curve conj; segdiv [0,1]*{0} + {1}*{2-3i}").unwrap();
    let (name, d) = &doc.segdivs[0];
    assert_eq!(name, "s1");
    let want = SegmentalDivisor::from_terms([
        (PrimeDivisor::Point(gr(0, 0)), Segment::new(int(0), int(1)).unwrap()),
        (PrimeDivisor::Point(gr(2, -3)), Segment::point(int(1))),
    ]);
    assert_eq!(d, &want);
    assert_eq!(d.terms().count(), 2);
}

#[test]
fn reversed_segment_is_a_syntax_error() {
    let err = parse("base curve conj;\nsegdiv [1,0]*{0};").unwrap_err();
    assert!(matches!(err, ParseError::Syntax { line: 2, col: 8, .. }), "{err}");
}

#[test]
fn undeclared_symbols() {
    let e = parse("base sphere; pair phs D = {1}*D_x, h = oneMinusZ;").unwrap_err();
    assert!(matches!(&e, ParseError::Undeclared { name, .. } if name == "D_x"), "{e}");
    let e = parse("base sphere; pair phs D = {1}*D_u, h = twoMinusZ;").unwrap_err();
    assert!(matches!(&e, ParseError::Undeclared { name, .. } if name == "twoMinusZ"), "{e}");
    let e = parse("base curve conj; pair dpd D = 0, h = x;").unwrap_err();
    assert!(matches!(&e, ParseError::Undeclared { name, .. } if name == "x"), "{e}");
    let e = parse("base curve conj; validate q;").unwrap_err();
    assert!(matches!(&e, ParseError::Undeclared { name, .. } if name == "q"), "{e}");
    let e = parse("base curve conj; pair dpd D = 2*<w^2+2>, h = 1;").unwrap_err();
    assert!(matches!(e, ParseError::Undeclared { .. }), "{e}");
}

#[test]
fn syntax_errors_carry_positions() {
    let e = parse("base curve conj;\npair dpd D = 0 h = 1;").unwrap_err();
    assert_eq!(e.position(), (2, 16));
    let e = parse("base curve conj; pair dpd D = 0, h = 1/0;").unwrap_err();
    assert!(matches!(e, ParseError::Syntax { .. }));
    let e = parse("base curve conj; pair dpd D = 0, h = w $ 2;").unwrap_err();
    assert_eq!(e.position(), (1, 40));
    assert!(parse("pair dpd D = 0, h = 1;").is_err());
    assert!(parse("base torus;").is_err());
}

#[test]
fn literals_are_exact() {
    let doc = parse("base point; pair dpd D = 0, h = 123456789012345678901234567890/7 - 1/3i;").unwrap();
    let big: Rational = "123456789012345678901234567890/7".parse().unwrap();
    assert_eq!(doc.pairs[0].h, BaseFunction::constant(GaussianRational::new(big, rat(-1, 3))));
}

#[test]
fn exponent_binds_before_division() {
    let doc = parse("base curve conj; pair dpd D = 0, h = w^2/3;").unwrap();
    let want = Poly1::from_rationals(vec![int(0), int(0), rat(1, 3)]);
    assert_eq!(doc.pairs[0].h, BaseFunction::Rational(RationalFunction::from_poly(want)));
}

#[test]
fn presented_base_declarations() {
    let src = "base presented; prime A, B; function g = A - B; tau A = B; tau g = 2*g^-1;\n\
               pair phs D = {1}*A + {1}*B, h = 4; validate;";
    let doc = parse(src).unwrap();
    let p = doc.base.as_presented().unwrap();
    assert_eq!(p.primes(), ["A".to_string(), "B".to_string()]);
    assert_eq!(p.declared_tau_primes().get("B"), Some(&"A".to_string()));
    assert_eq!(parse(&doc.to_string()).unwrap(), doc);
}

#[test]
fn unnamed_tasks_use_the_latest_pair() {
    let doc = parse("base curve conj; pair a dpd D = 0, h = w; validate; pair b dpd D = 0, h = 1; validate;").unwrap();
    assert_eq!(doc.tasks, vec![Task::Validate(Some("a".into())), Task::Validate(Some("b".into()))]);
}

#[test]
fn polynomials_in_any_variable() {
    assert_eq!(parse_poly("1+w").unwrap(), parse_poly("z+1").unwrap());
    assert_eq!(parse_poly("3").unwrap(), Poly1::constant(gr(3, 0)));
    assert!(parse_poly("x+y").is_err());
    assert!(parse_poly("1/x").is_err());
}

#[test]
fn mj_tasks() {
    let doc = parse("base point; mj verify P = 1 + 2*t^3, r = 3; mj equiv P1 = 1+z, P2 = 2+16*z, r = 2").unwrap();
    assert_eq!(doc.tasks.len(), 2);
    assert!(matches!(&doc.tasks[0], Task::MjVerify { r: 3, .. }));
    assert!(parse("base point; mj verify P = 1, r = 0").is_err());
}

// ---- round trip ----

fn small_rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (small_rational(), prop_oneof![3 => Just(int(0)), 2 => small_rational()]).prop_map(|(a, b)| GaussianRational::new(a, b))
}

fn segment() -> impl Strategy<Value = Segment> {
    (small_rational(), prop_oneof![Just(int(0)), small_rational().prop_map(|x| x.abs())])
        .prop_map(|(lo, len)| Segment::new(lo.clone(), lo + len).unwrap())
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly1> {
    prop::collection::vec(gaussian(), 0..=max_deg + 1).prop_map(Poly1::new)
}

#[derive(Clone, Debug)]
enum BaseKind {
    Point,
    Curve { var: &'static str, tau: u8, opaque: bool },
    Sphere,
    Presented(i64),
}

fn base_kind() -> impl Strategy<Value = BaseKind> {
    prop_oneof![
        Just(BaseKind::Point),
        (prop::sample::select(vec!["w", "z", "t", "x1"]), 0u8..3, any::<bool>())
            .prop_map(|(var, tau, opaque)| BaseKind::Curve { var, tau, opaque }),
        Just(BaseKind::Sphere),
        (1i64..4).prop_map(BaseKind::Presented),
    ]
}

fn make_base(kind: &BaseKind) -> Base {
    match kind {
        BaseKind::Point => Base::Point,
        BaseKind::Curve { var, tau, opaque } => {
            let (a, b) = match tau {
                0 => (gr(1, 0), gr(0, 0)),
                1 => (gr(-1, 0), GaussianRational::real(rat(5, 2))),
                _ => (gr(1, 0), gr(0, -3)),
            };
            let mut c = CurveBase::new(a, b, *var).unwrap();
            if *opaque && tau == &0 {
                c.declare_prime(&Poly1::from_rationals(vec![int(2), int(0), int(1)])).unwrap();
            }
            Base::Curve(c)
        }
        BaseKind::Sphere => Base::Presented(PresentedBase::sphere()),
        BaseKind::Presented(c) => {
            let primes = vec!["A".to_string(), "B".to_string(), "C".to_string()];
            let mut relations = BTreeMap::new();
            relations.insert("g".to_string(), BTreeMap::from([("A".to_string(), 1), ("B".to_string(), -1)]));
            relations.insert("k".to_string(), BTreeMap::from([("C".to_string(), 2)]));
            let tau_primes = BTreeMap::from([("A".to_string(), "B".to_string()), ("B".to_string(), "A".to_string())]);
            let tau_functions = BTreeMap::from([
                ("g".to_string(), FunctionWord::from_parts(int(*c), [("g".to_string(), -1)])),
                ("k".to_string(), FunctionWord::symbol("k")),
            ]);
            Base::Presented(PresentedBase::new(primes, relations, tau_primes, tau_functions).unwrap())
        }
    }
}

fn primes_of(base: &Base) -> Vec<PrimeDivisor> {
    match base {
        Base::Point => vec![],
        Base::Curve(c) => {
            let mut v: Vec<PrimeDivisor> = [gr(0, 0), gr(1, 0), gr(0, 1), gr(-2, 3), GaussianRational::new(rat(1, 2), rat(-3, 4))]
                .into_iter()
                .map(PrimeDivisor::Point)
                .collect();
            v.extend(c.opaque_primes().cloned().map(PrimeDivisor::Opaque));
            v
        }
        Base::Presented(p) => p.primes().iter().cloned().map(PrimeDivisor::Named).collect(),
    }
}

fn symbols_of(base: &Base) -> Vec<String> {
    base.as_presented().map(|p| p.functions().cloned().collect()).unwrap_or_default()
}

fn weil(primes: Vec<PrimeDivisor>) -> BoxedStrategy<WeilQDivisor> {
    if primes.is_empty() {
        return Just(WeilQDivisor::zero()).boxed();
    }
    prop::collection::vec((prop::sample::select(primes), small_rational()), 0..4)
        .prop_map(WeilQDivisor::from_terms)
        .boxed()
}

fn segdiv(primes: Vec<PrimeDivisor>) -> BoxedStrategy<SegmentalDivisor> {
    if primes.is_empty() {
        return Just(SegmentalDivisor::zero()).boxed();
    }
    prop::collection::vec((prop::sample::select(primes), segment()), 0..4)
        .prop_map(SegmentalDivisor::from_terms)
        .boxed()
}

fn function(base: &Base) -> BoxedStrategy<BaseFunction> {
    match base {
        Base::Point => gaussian().prop_map(BaseFunction::constant).boxed(),
        Base::Curve(_) => (poly(3), poly(2))
            .prop_map(|(n, d)| {
                let d = if d.is_zero() { Poly1::one() } else { d };
                BaseFunction::Rational(RationalFunction::new(n, d).unwrap())
            })
            .boxed(),
        Base::Presented(_) => {
            let syms = symbols_of(base);
            (small_rational(), prop::collection::vec((prop::sample::select(syms), -3i64..=3), 0..3))
                .prop_map(|(c, e)| {
                    let w = FunctionWord::from_parts(c, e);
                    if w.is_constant() {
                        BaseFunction::constant(GaussianRational::real(w.scalar))
                    } else {
                        BaseFunction::Word(w)
                    }
                })
                .boxed()
        }
    }
}

fn rational_poly() -> impl Strategy<Value = Poly1> {
    prop::collection::vec(small_rational(), 0..4).prop_map(Poly1::from_rationals)
}

fn task(pairs: usize) -> BoxedStrategy<Task> {
    let name = move |i: usize| format!("p{}", i % pairs.max(1) + 1);
    let generic = prop_oneof![
        (prop::collection::vec(-9i64..=9, 1..5), prop::collection::vec(prop::sample::select(vec!["a", "b", "E1"]), 0..3))
            .prop_map(|(weights, labels)| Task::Downgrade { weights, labels: labels.into_iter().map(String::from).collect() }),
        (rational_poly(), 1u32..4).prop_map(|(p, r)| Task::MjVerify { p, r }),
        (rational_poly(), rational_poly(), 1u32..4).prop_map(|(p1, p2, r)| Task::MjEquiv { p1, p2, r }),
        prop::option::of(prop::sample::select(vec!["mj", "hopf"])).prop_map(|f| Task::Corpus { filter: f.map(String::from) }),
    ];
    if pairs == 0 {
        return generic.boxed();
    }
    prop_oneof![
        (0..pairs).prop_map(move |i| Task::Validate(Some(name(i)))),
        (0..pairs).prop_map(move |i| Task::Convert(Some(name(i)))),
        (0..pairs).prop_map(move |i| Task::Classify(Some(name(i)))),
        (0..pairs, prop::option::of(1i64..20)).prop_map(move |(i, mmax)| Task::Graded { pair: Some(name(i)), mmax }),
        (0..pairs, 0..pairs).prop_map(move |(i, j)| Task::Equiv(name(i), name(j))),
        generic,
    ]
    .boxed()
}

fn document() -> impl Strategy<Value = Document> {
    base_kind().prop_flat_map(|kind| {
        let base = make_base(&kind);
        let primes = primes_of(&base);
        let segdivs = prop::collection::vec(segdiv(primes.clone()), 0..3);
        let pair = (any::<bool>(), weil(primes.clone()), segdiv(primes), function(&base));
        (Just(base), segdivs, prop::collection::vec(pair, 0..4)).prop_flat_map(|(base, segdivs, pairs)| {
            let n = pairs.len();
            let segdivs: Vec<(String, SegmentalDivisor)> =
                segdivs.into_iter().enumerate().map(|(i, d)| (format!("s{}", i + 1), d)).collect();
            let pairs: Vec<PairDecl> = pairs
                .into_iter()
                .enumerate()
                .map(|(i, (dpd, w, s, h))| PairDecl {
                    name: format!("p{}", i + 1),
                    divisor: if dpd { PairDivisor::Dpd(w) } else { PairDivisor::Phs(s) },
                    h,
                })
                .collect();
            prop::collection::vec(task(n), 0..5).prop_map(move |tasks| Document {
                base: base.clone(),
                segdivs: segdivs.clone(),
                pairs: pairs.clone(),
                tasks,
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn parse_print_round_trip(doc in document()) {
        let text = doc.to_string();
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &doc, "{}", text);
        // printing is deterministic
        prop_assert_eq!(back.to_string(), text);
    }
}
