use std::fmt;

use num_traits::{One, Signed};

use super::ClassifyError;
use crate::arith::{int, rational_root, sum_of_two_squares, GaussianRational, Rational, RationalFunction};
use crate::geometry::{Affine, Base, BaseFunction, PrimeDivisor};
use crate::graded::section_generator;
use crate::pairs::{dpd_validate, normalize_real_structure, DpdPair};

/// `ψ*D₂ = D₁ + div(f)` and `ψ*h₂ = residual·(f·τ*f)·h₁`.
///
/// The residual is 1 whenever the positive constant left over is a norm
/// from `Q(i)`; otherwise it is a positive rational and the real witness is
/// `f·√residual`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub psi: Affine,
    pub f: RationalFunction,
    pub residual: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// The multisets of non-integral segment classes differ.
    SupportMismatch(String),
    /// Every admissible `ψ` leaves a negative constant.
    NegativeResidual { psi: Affine, residual: Rational },
    /// No real automorphism matches the supports with a constant residual.
    NoBranch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivDecision {
    Equivalent(IsoWitness),
    Inequivalent(Obstruction),
}

impl EquivDecision {
    pub fn witness(&self) -> Option<&IsoWitness> {
        match self {
            EquivDecision::Equivalent(w) => Some(w),
            EquivDecision::Inequivalent(_) => None,
        }
    }

    pub fn is_equivalent(&self) -> bool {
        self.witness().is_some()
    }
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::SupportMismatch(s) => write!(f, "support mismatch: {s}"),
            Obstruction::NegativeResidual { psi, residual } => {
                write!(f, "residual {residual} < 0 for psi(z) = ({})*z+({})", psi.alpha, psi.beta)
            }
            Obstruction::NoBranch => write!(f, "no real automorphism matches the supports"),
        }
    }
}

type Class = (Rational, Rational);

/// Points whose segment is not an integer singleton, with the segment class
/// `(lo mod 1, length)`. Integer singletons can be absorbed by `div f`.
fn essential(pair: &DpdPair) -> Result<Vec<(GaussianRational, Class)>, ClassifyError> {
    let mut out = Vec::new();
    for (p, seg) in pair.to_phs().divisor().terms() {
        if seg.is_singleton() && seg.lo().is_integer() {
            continue;
        }
        match p {
            PrimeDivisor::Point(z) => {
                out.push((z.clone(), (seg.lo() - seg.lo().floor(), seg.length())));
            }
            other => return Err(ClassifyError::UnresolvableSupport(other.display_in(pair.base().var()).to_string())),
        }
    }
    Ok(out)
}

fn sorted_classes(ess: &[(GaussianRational, Class)]) -> Vec<Class> {
    let mut v: Vec<Class> = ess.iter().map(|(_, c)| c.clone()).collect();
    v.sort();
    v
}

fn rational_h(pair: &DpdPair) -> &RationalFunction {
    pair.h().as_rational().expect("curve base functions are rational")
}

/// For a fixed `ψ`: `f` with `div f = ψ*D₂ − D₁` and the constant
/// `ψ*h₂ / (f·f̄·h₁)`, if it is constant.
fn branch(p1: &DpdPair, p2: &DpdPair, psi: &Affine) -> Option<(RationalFunction, Rational)> {
    let e = psi.pullback_divisor(p2.divisor()).sub(p1.divisor());
    if !e.is_integral() {
        return None;
    }
    let f = section_generator(p1.base(), &e.neg()).ok()?;
    let den = &(&f * &f.conj()) * rational_h(p1);
    let c = (&psi.pullback_function(rational_h(p2)) / &den).as_constant()?;
    c.is_real().then_some((f, c.re))
}

/// Absorbs a positive residual into `f` when it is a square or a norm.
fn finalize(psi: Affine, f: RationalFunction, c: Rational) -> IsoWitness {
    let lambda = rational_root(&c, 2)
        .map(GaussianRational::real)
        .or_else(|| sum_of_two_squares(&c).map(|(a, b)| GaussianRational::new(a, b)));
    match lambda {
        Some(l) => IsoWitness { psi, f: f.scale(&l), residual: Rational::one() },
        None => IsoWitness { psi, f, residual: c },
    }
}

fn real_affine(alpha: &GaussianRational, beta: &GaussianRational) -> Option<Affine> {
    if alpha.is_real() && beta.is_real() && !alpha.is_zero() {
        Affine::new(alpha.clone(), beta.clone()).ok()
    } else {
        None
    }
}

fn decide_standard(p1: &DpdPair, p2: &DpdPair) -> Result<EquivDecision, ClassifyError> {
    let ess1 = essential(p1)?;
    let ess2 = essential(p2)?;
    let (c1, c2) = (sorted_classes(&ess1), sorted_classes(&ess2));
    if c1 != c2 {
        let desc = format!("{} vs {} non-integral segments", ess1.len(), ess2.len());
        let desc = if ess1.len() == ess2.len() { "segment classes differ".to_string() } else { desc };
        return Ok(EquivDecision::Inequivalent(Obstruction::SupportMismatch(desc)));
    }
    let mut negative = None;
    let consider = |psi: Affine, negative: &mut Option<(Affine, Rational)>| -> Option<IsoWitness> {
        let (f, c) = branch(p1, p2, &psi)?;
        if c.is_positive() {
            Some(finalize(psi, f, c))
        } else {
            if negative.is_none() {
                *negative = Some((psi, c));
            }
            None
        }
    };
    match ess1.len() {
        0 => {
            if let Some(w) = consider(Affine::identity(), &mut negative) {
                return Ok(EquivDecision::Equivalent(w));
            }
        }
        1 => {
            let (p, q) = (&ess1[0].0, &ess2[0].0);
            if !p.is_real() || !q.is_real() {
                return Ok(EquivDecision::Inequivalent(Obstruction::NoBranch));
            }
            let at = |alpha: Rational| {
                let alpha = GaussianRational::real(alpha);
                let beta = q - &(&alpha * p);
                Affine::new(alpha, beta).expect("alpha is nonzero")
            };
            // ψ_α(z) = α(z − p) + q leaves the residual C·α^k
            let (Some((_, r1)), Some((_, r2))) = (branch(p1, p2, &at(int(1))), branch(p1, p2, &at(int(2)))) else {
                return Ok(EquivDecision::Inequivalent(Obstruction::NoBranch));
            };
            let ratio = &r2 / &r1;
            let k = (-256i64..=256)
                .find(|k| {
                    let two = int(2);
                    let pw = if *k >= 0 { num_traits::pow(two, *k as usize) } else { num_traits::pow(two.recip(), (-k) as usize) };
                    pw == ratio
                })
                .ok_or(ClassifyError::OnePointFamily)?;
            let exact = match k {
                0 => None,
                k if k > 0 => rational_root(&r1.recip(), k as u32),
                k => rational_root(&r1, (-k) as u32),
            };
            let alpha = match exact {
                Some(a) => a,
                None if k % 2 != 0 && r1.is_negative() => -Rational::one(),
                None => Rational::one(),
            };
            if let Some(w) = consider(at(alpha), &mut negative) {
                return Ok(EquivDecision::Equivalent(w));
            }
        }
        _ => {
            let (a1, cl1) = &ess1[0];
            let (a2, cl2) = &ess1[1];
            for (b1, d1) in &ess2 {
                if d1 != cl1 {
                    continue;
                }
                for (b2, d2) in &ess2 {
                    if b2 == b1 || d2 != cl2 {
                        continue;
                    }
                    let alpha = &(b1 - b2) / &(a1 - a2);
                    let beta = b1 - &(&alpha * a1);
                    let Some(psi) = real_affine(&alpha, &beta) else { continue };
                    let bijective = ess1.iter().all(|(p, cl)| {
                        let img = psi.apply(p);
                        ess2.iter().any(|(q, d)| *q == img && d == cl)
                    });
                    if !bijective {
                        continue;
                    }
                    if let Some(w) = consider(psi, &mut negative) {
                        return Ok(EquivDecision::Equivalent(w));
                    }
                }
            }
        }
    }
    Ok(EquivDecision::Inequivalent(match negative {
        Some((psi, residual)) => Obstruction::NegativeResidual { psi, residual },
        None => Obstruction::NoBranch,
    }))
}

/// Decides whether two DPD pairs on the same line are equivariantly
/// isomorphic, i.e. whether a real `ψ` and `f` exist with
/// `ψ*D₂ = D₁ + div f` and `ψ*h₂ = (f·τ*f)·h₁`.
///
/// Nonstandard real structures are first moved to complex conjugation; the
/// witness is transported back. Every returned witness has been replayed.
pub fn pair_equiv(p1: &DpdPair, p2: &DpdPair) -> Result<EquivDecision, ClassifyError> {
    let (Some(b1), Some(b2)) = (p1.base().as_curve(), p2.base().as_curve()) else {
        return Err(ClassifyError::UnsupportedBase("pair equivalence needs a curve base".into()));
    };
    if b1.a() != b2.a() || b1.b() != b2.b() {
        return Err(ClassifyError::DifferentBases);
    }
    let decision = if b1.is_standard() {
        decide_standard(p1, p2)?
    } else {
        let (n1, chi) = normalize_real_structure(p1)?;
        let (n2, _) = normalize_real_structure(p2)?;
        match decide_standard(&n1, &n2)? {
            EquivDecision::Equivalent(w) => {
                let chi_inv = chi.inverse();
                EquivDecision::Equivalent(IsoWitness {
                    psi: chi.compose(&w.psi).compose(&chi_inv),
                    f: chi_inv.pullback_function(&w.f),
                    residual: w.residual,
                })
            }
            other => other,
        }
    };
    if let EquivDecision::Equivalent(w) = &decision {
        assert!(verify_witness(p1, p2, w), "witness replay failed");
    }
    Ok(decision)
}

/// Replays a witness: twisting `p2` must give `(D₁, residual·h₁)`.
pub fn verify_witness(p1: &DpdPair, p2: &DpdPair, w: &IsoWitness) -> bool {
    let Ok(t) = p2.twist(&w.psi, &w.f) else { return false };
    let target_h = rational_h(p1).scale(&GaussianRational::real(w.residual.clone()));
    w.residual.is_positive() && t.divisor() == p1.divisor() && t.h() == &BaseFunction::Rational(target_h)
}

/// The twisted forms `(D, h)` and `(D, −h)` and whether they coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealForms {
    pub plus: DpdPair,
    pub minus: DpdPair,
    pub decision: EquivDecision,
}

impl RealForms {
    pub fn count(&self) -> usize {
        if self.decision.is_equivalent() {
            1
        } else {
            2
        }
    }
}

pub fn real_forms(pair: &DpdPair) -> Result<RealForms, ClassifyError> {
    let base: &Base = pair.base();
    let neg_h = match pair.h() {
        BaseFunction::Rational(r) => BaseFunction::Rational(-r),
        BaseFunction::Word(_) => return Err(ClassifyError::UnsupportedBase("real forms need a curve base".into())),
    };
    let minus = dpd_validate(base, pair.divisor().clone(), neg_h)?;
    let decision = pair_equiv(pair, &minus)?;
    Ok(RealForms { plus: pair.clone(), minus, decision })
}
