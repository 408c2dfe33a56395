//! Built-in worked examples, each checked against its own expected values.

use std::time::Instant;

use rayon::prelude::*;

use phscalc_core::arith::{int, rat, GaussianRational, Poly1, Rational, RationalFunction};
use phscalc_core::classify::{classify_point_pair, pair_equiv, verify_witness, mj_equiv, MjEquiv};
use phscalc_core::geometry::{Base, BaseFunction, CurveBase, FunctionWord, PresentedBase, PrimeDivisor, WeilQDivisor};
use phscalc_core::graded::{
    ah_center_ideal, build_graded, generation_degree, hyperbolicity_check, point_invariants, CurveClass, Presentation,
};
use phscalc_core::pairs::{dpd_validate, phs_validate, PairError};
use phscalc_core::segdiv::{Segment, SegmentalDivisor};
use phscalc_core::symbolic::{build_mp, build_sigma_p, fourfold, verify_hp};
use phscalc_core::toric::{downgrade, LatticeMap};

use crate::exec::{Report, Status};

/// Deliberate defects for negative controls.
#[derive(Clone, Debug, Default)]
pub struct Faults {
    /// Run the Hopf case on the sphere with every relation negated.
    pub hopf_sign: bool,
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

type Check = Result<String, String>;

struct Case {
    name: String,
    run: Box<dyn Fn(&Faults) -> Check + Send + Sync>,
}

fn case(name: impl Into<String>, run: impl Fn(&Faults) -> Check + Send + Sync + 'static) -> Case {
    Case { name: name.into(), run: Box::new(run) }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn line(var: &str) -> Base {
    Base::Curve(CurveBase::standard(var))
}

fn point(re: i64, im: i64) -> PrimeDivisor {
    PrimeDivisor::Point(GaussianRational::new(int(re), int(im)))
}

fn seg(lo: i64, hi: i64) -> Segment {
    Segment::new(int(lo), int(hi)).expect("lo <= hi")
}

fn poly(coeffs: &[i64]) -> Poly1 {
    Poly1::from_rationals(coeffs.iter().map(|c| int(*c)).collect())
}

fn rf(p: &Poly1) -> BaseFunction {
    BaseFunction::Rational(RationalFunction::from_poly(p.clone()))
}

fn two_curves(_: &Faults) -> Check {
    let hs: Vec<Rational> = [1, -1, 2, -2, 7, -7].into_iter().map(int).chain([rat(1, 3), rat(-1, 3)]).collect();
    let mut classes = Vec::new();
    for h in &hs {
        let class = classify_point_pair(h).map_err(|e| e.to_string())?;
        let expected = if *h > int(0) { CurveClass::Circle } else { CurveClass::ImaginaryCircle };
        ensure(class == expected, || format!("h = {h}: got {class}"))?;
        let inv = point_invariants(h).map_err(|e| e.to_string())?;
        let rel = inv.relation.display_with(&inv.names).to_string();
        let want = if *h > int(0) { "x^2+y^2-1" } else { "u^2+v^2+1" };
        ensure(inv.verified && rel == want, || format!("h = {h}: relation {rel}, verified {}", inv.verified))?;
        if !classes.contains(&class) {
            classes.push(class);
        }
    }
    ensure(classes.len() == 2, || format!("{} classes", classes.len()))?;
    Ok("2 classes over 8 values of h".into())
}

/// `(0, P)` on the line: segments `[0, mult]` at the roots and
/// `A_m = C[w]·P^max(0,−m)`.
fn conic_bundle(p: &Poly1, roots: &[((i64, i64), i64)]) -> Check {
    let base = line("w");
    let pair = dpd_validate(&base, WeilQDivisor::zero(), rf(p)).map_err(|e| e.to_string())?;
    let phs = pair.to_phs();
    let expected = SegmentalDivisor::from_terms(roots.iter().map(|((re, im), k)| (point(*re, *im), seg(0, *k))));
    ensure(phs.divisor() == &expected, || format!("segdiv {} != {}", phs.divisor().display_in("w"), expected.display_in("w")))?;
    ensure(phs.to_dpd() == pair, || "round trip".into())?;
    let (slice, _) = build_graded(&phs, 8).map_err(|e| e.to_string())?;
    for m in -8..=8i64 {
        let want = RationalFunction::from_poly(p.pow(u32::try_from(0.max(-m)).expect("small")));
        ensure(slice.generator(m) == Some(&want), || format!("A_{m}"))?;
    }
    if let Some(pres) = Presentation::conic_bundle(p) {
        ensure(pres.verify(&slice, 6, 6).ok(), || "presentation".into())?;
    }
    Ok(format!("P = {}: {}", p.display_in("w"), phs.divisor().display_in("w")))
}

fn gutwirth(_: &Faults) -> Check {
    let z = RationalFunction::var();
    let base = line("z");
    let d = SegmentalDivisor::single(point(0, 0), seg(0, 1));
    let pair = phs_validate(&base, d, BaseFunction::Rational(z.clone())).map_err(|e| e.to_string())?;
    let (slice, _) = build_graded(&pair, 8).map_err(|e| e.to_string())?;
    ensure(hyperbolicity_check(&slice), || "hyperbolicity".into())?;
    let deg = generation_degree(&slice, 8).map_err(|e| e.to_string())?;
    ensure(deg == 1, || format!("generation degree {deg}"))?;
    let ideal = ah_center_ideal(&slice, 1).map_err(|e| e.to_string())?;
    ensure(ideal == vec![Poly1::var()], || "center ideal".into())?;
    ensure(Presentation::gutwirth().verify(&slice, 6, 6).ok(), || "presentation".into())?;
    let model = pair.to_dpd();
    for (c, beta) in [(1, 0), (2, 3), (-1, 1)] {
        let (c, beta) = (GaussianRational::from_i64(c), GaussianRational::from_i64(beta));
        let d = SegmentalDivisor::single(PrimeDivisor::Point(beta.clone()), seg(0, 1));
        let h = (&z - &RationalFunction::constant(beta.clone())).scale(&c);
        let other = phs_validate(&base, d, BaseFunction::Rational(h)).map_err(|e| e.to_string())?.to_dpd();
        let dec = pair_equiv(&other, &model).map_err(|e| e.to_string())?;
        let w = dec.witness().ok_or_else(|| format!("(c,beta) = ({c},{beta}) not identified"))?;
        ensure(verify_witness(&other, &model, w), || "witness replay".into())?;
    }
    Ok("d = 1, <z>, 3 twisted copies identified".into())
}

fn moebius(_: &Faults) -> Check {
    let half = WeilQDivisor::single(point(0, 0), rat(1, 2));
    let pair = dpd_validate(&line("z"), half, BaseFunction::Rational(RationalFunction::var())).map_err(|e| e.to_string())?;
    let phs = pair.to_phs();
    let want = SegmentalDivisor::single(point(0, 0), Segment::point(rat(1, 2)));
    ensure(phs.divisor() == &want, || format!("segdiv {}", phs.divisor().display_in("z")))?;
    ensure(phs.to_dpd() == pair, || "round trip".into())?;
    Ok(format!("{}", phs.display()))
}

fn sphere(negated: bool) -> Result<Base, String> {
    let s = PresentedBase::sphere();
    Ok(Base::Presented(if negated { s.with_negated_relations().map_err(|e| e.to_string())? } else { s }))
}

/// `({1}⊗(p·D_u), (1−z)^p)`; p = 1 is the Hopf pair.
fn lens(p: i64, fault: bool, negative_control: bool) -> Check {
    let base = sphere(fault)?;
    let d = SegmentalDivisor::single(PrimeDivisor::named("D_u"), Segment::point(int(p)));
    let h = BaseFunction::Word(FunctionWord::symbol("oneMinusZ").pow(p).expect("nonzero"));
    let pair = phs_validate(&base, d.clone(), h.clone()).map_err(|e| e.to_string())?;
    if negative_control {
        let neg = Base::Presented(PresentedBase::sphere().with_negated_relations().map_err(|e| e.to_string())?);
        match phs_validate(&neg, d, h) {
            Err(PairError::FlipIdentityFails { prime, .. }) => {
                ensure(prime == PrimeDivisor::named("D_u"), || format!("negated table fails at {prime}"))?
            }
            other => return Err(format!("negated table: expected a flip failure, got {other:?}")),
        }
    }
    Ok(format!("{}", pair.display()))
}

fn downgrade_case(r: i64) -> Check {
    let start = Instant::now();
    let n = 2 * r + 1;
    let labels: Vec<String> = ["Dzu", "Dzv", "Dwv", "Dwu", "E"].map(String::from).to_vec();
    let d = downgrade(&[2, -2, n, -n], &labels).map_err(|e| e.to_string())?;
    ensure(d.rays.len() == 5, || format!("{} rays", d.rays.len()))?;
    let g = LatticeMap::new(vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![n, 0, 0, 2]], 4);
    let (moved, _) = d.rebase(&g, &[0, r, 1, 0]).map_err(|e| e.to_string())?;
    let f: Vec<&Vec<i64>> = moved.rays.iter().map(|x| &x.generator).collect();
    let comb = |a: &Vec<i64>, b: &Vec<i64>| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| 2 * x + n * y).collect() };
    ensure(*f[4] == comb(f[0], f[2]) && *f[4] == comb(f[1], f[3]), || format!("rays {f:?}"))?;
    let named = |s: &str| PrimeDivisor::named(s);
    let want = SegmentalDivisor::from_terms([
        (named("Dzv"), Segment::point(int(r))),
        (named("Dwv"), Segment::point(int(1))),
        (named("E"), seg(2 * r, 2 * r + 1)),
    ]);
    let got = moved.segdiv();
    ensure(got == want, || format!("segdiv {}", got.display_in("z")))?;
    let ms = start.elapsed().as_millis();
    ensure(ms < 1000, || format!("took {ms} ms"))?;
    Ok(format!("{}", got.display_in("z")))
}

fn mj(_: &Faults) -> Check {
    let ps = [poly(&[1]), poly(&[1, 1]), poly(&[2, -1, 3]), Poly1::from_rationals(vec![rat(1, 2), int(0), int(0), rat(-5, 3)])];
    for r in 1..=3u32 {
        for p in &ps {
            let tag = || format!("P = {}, r = {r}", p.display_in("z"));
            let det = build_mp(p, r).map_err(|e| e.to_string())?.det();
            ensure(det.display_with(&phscalc_core::symbolic::VARS).to_string() == "1", || format!("{}: det", tag()))?;
            let sigma = build_sigma_p(p, r).map_err(|e| e.to_string())?;
            ensure(sigma.square().is_identity(), || format!("{}: sigma^2", tag()))?;
            let rep = verify_hp(p, r).map_err(|e| e.to_string())?;
            ensure(rep.holds() && rep.invariant, || format!("{}: {rep}", tag()))?;
            let shifted = p.compose_affine(&GaussianRational::from_i64(4), &GaussianRational::zero()).scale(&GaussianRational::from_i64(2));
            ensure(mj_equiv(p, &shifted, r).map_err(|e| e.to_string())? == MjEquiv::Rational(int(2)), || {
                format!("{}: mj_equiv c = 2", tag())
            })?;
        }
        let f = fourfold(r).map_err(|e| e.to_string())?;
        ensure(f.d == 2 * i64::from(f.n), || format!("r = {r}: d = {}", f.d))?;
        let ideal = f.ideal_display();
        ensure(ideal == format!("(u,v,z^{},w^2)", f.n), || format!("r = {r}: ideal {ideal}"))?;
    }
    Ok("12 (P, r) verified, fourfold d = 2n".into())
}

fn cases() -> Vec<Case> {
    let mut out = vec![case("two-curves", two_curves)];
    let bundles: [(&str, Poly1, Vec<((i64, i64), i64)>); 4] = [
        ("w", poly(&[0, 1]), vec![((0, 0), 1)]),
        ("w^2+1", poly(&[1, 0, 1]), vec![((0, 1), 1), ((0, -1), 1)]),
        ("w(w^2+1)", poly(&[0, 1, 0, 1]), vec![((0, 0), 1), ((0, 1), 1), ((0, -1), 1)]),
        ("(w-2)^2(w^2+4)", &poly(&[-2, 1]).pow(2) * &poly(&[4, 0, 1]), vec![((2, 0), 2), ((0, 2), 1), ((0, -2), 1)]),
    ];
    for (label, p, roots) in bundles {
        out.push(case(format!("conic-bundle {label}"), move |_| conic_bundle(&p, &roots)));
    }
    out.push(case("gutwirth", gutwirth));
    out.push(case("moebius", moebius));
    out.push(case("hopf", |f| lens(1, f.hopf_sign, true)));
    for p in 1..=4 {
        out.push(case(format!("lens p={p}"), move |_| lens(p, false, false)));
    }
    for r in 1..=3 {
        out.push(case(format!("downgrade r={r}"), move |_| downgrade_case(r)));
    }
    out.push(case("mj", mj));
    out
}

pub fn case_names() -> Vec<String> {
    cases().into_iter().map(|c| c.name).collect()
}

/// Cases whose name contains `filter`, run in parallel, results in
/// declaration order.
pub fn run(filter: Option<&str>, faults: &Faults) -> Vec<CaseResult> {
    let selected: Vec<Case> = cases().into_iter().filter(|c| filter.is_none_or(|f| c.name.contains(f))).collect();
    selected
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let outcome = (c.run)(faults);
            let millis = start.elapsed().as_millis();
            let (pass, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CaseResult { name: c.name.clone(), pass, detail, millis }
        })
        .collect()
}

pub fn report(results: &[CaseResult]) -> Report {
    let mut rep = Report::new("corpus");
    for r in results {
        let tag = if r.pass { "PASS" } else { "FAIL" };
        rep.line(format!("{tag}  {:<26} {:>6} ms  {}", r.name, r.millis, r.detail));
        rep.key(&format!("case.{}", r.name.replace(' ', "_")), tag);
    }
    let passed = results.iter().filter(|r| r.pass).count();
    rep.line(format!("{passed}/{} passed", results.len()));
    rep.key("passed", passed);
    rep.key("total", results.len());
    if passed != results.len() {
        rep.status = Status::Failed;
    }
    rep
}
