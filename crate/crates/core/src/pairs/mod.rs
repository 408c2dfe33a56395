//! phs-pairs `(𝒟, h)` and DPD pairs `(D, h)`: validation, conversion between
//! the two, and twisted pullback along real automorphisms.

use std::fmt;

use thiserror::Error;

use crate::arith::{Rational, RationalFunction};
use crate::geometry::{Affine, Base, BaseFunction, CurveBase, GeometryError, PrimeDivisor, WeilQDivisor};
use crate::segdiv::{properness_check, Properness, Segment, SegmentalDivisor};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PairError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("divisor is not proper: {0}")]
    NotProper(String),
    #[error("h = {0} is not invariant under the real structure")]
    NotTauInvariant(String),
    #[error("flip identity fails at {prime}: tau-pullback gives {tau_side}, flip + div(h) gives {flip_side}")]
    FlipIdentityFails { prime: PrimeDivisor, tau_side: Segment, flip_side: Segment },
    #[error("D + tau*D <= div(h) fails at {prime}: {lhs} > {rhs}")]
    InequalityFails { prime: PrimeDivisor, lhs: Rational, rhs: Rational },
    #[error("automorphism does not commute with the real structure")]
    NotRealAutomorphism,
    #[error("{0}")]
    UnsupportedBase(String),
}

/// Validated phs-pair: `h` is `τ`-invariant and `τ*𝒟 = ⌣𝒟 + {1}⊗div(h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhsPair {
    base: Base,
    divisor: SegmentalDivisor,
    h: BaseFunction,
    properness: Properness,
}

/// Validated DPD pair: `h` is `τ`-invariant and `D + τ*D ≤ div(h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpdPair {
    base: Base,
    divisor: WeilQDivisor,
    h: BaseFunction,
}

fn check_h(base: &Base, h: &BaseFunction) -> Result<WeilQDivisor, PairError> {
    let div_h = base.div_of_function(h)?;
    if !base.is_tau_invariant(h)? {
        return Err(PairError::NotTauInvariant(base.display_function(h).to_string()));
    }
    Ok(div_h)
}

pub fn phs_validate(base: &Base, divisor: SegmentalDivisor, h: BaseFunction) -> Result<PhsPair, PairError> {
    let properness = properness_check(base, &divisor);
    if let Properness::NotProper(reason) = properness {
        return Err(PairError::NotProper(reason));
    }
    let div_h = check_h(base, &h)?;
    let tau_side = divisor.pullback_real(base);
    let flip_side = divisor.flip().add_divisor(&div_h);
    if tau_side != flip_side {
        let prime = tau_side
            .support()
            .chain(flip_side.support())
            .filter(|p| tau_side.segment(p) != flip_side.segment(p))
            .min()
            .expect("the divisors differ somewhere")
            .clone();
        return Err(PairError::FlipIdentityFails {
            tau_side: tau_side.segment(&prime),
            flip_side: flip_side.segment(&prime),
            prime,
        });
    }
    Ok(PhsPair { base: base.clone(), divisor, h, properness })
}

pub fn dpd_validate(base: &Base, divisor: WeilQDivisor, h: BaseFunction) -> Result<DpdPair, PairError> {
    for p in divisor.support() {
        base.check_prime(p)?;
    }
    let div_h = check_h(base, &h)?;
    let lhs = divisor.add(&base.pullback_real(&divisor));
    if let Err(prime) = lhs.leq_witness(&div_h) {
        return Err(PairError::InequalityFails { lhs: lhs.coeff(&prime), rhs: div_h.coeff(&prime), prime });
    }
    Ok(DpdPair { base: base.clone(), divisor, h })
}

impl PhsPair {
    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn divisor(&self) -> &SegmentalDivisor {
        &self.divisor
    }

    pub fn h(&self) -> &BaseFunction {
        &self.h
    }

    pub fn properness(&self) -> &Properness {
        &self.properness
    }

    /// `D = 𝒟(1)`.
    pub fn to_dpd(&self) -> DpdPair {
        let d = self.divisor.eval(1);
        dpd_validate(&self.base, d, self.h.clone()).expect("the DPD inequality follows from the flip identity")
    }

    /// `(ψ*𝒟 − {1}⊗div f, ψ*h / (f·τ*f))`, re-validated.
    pub fn twist(&self, psi: &Affine, f: &RationalFunction) -> Result<PhsPair, PairError> {
        let (curve, div_f, h) = twist_parts(&self.base, psi, f, &self.h)?;
        let divisor = self.divisor.pullback(psi).add_divisor(&div_f.neg());
        phs_validate(&Base::Curve(curve.clone()), divisor, BaseFunction::Rational(h))
    }

    pub fn display(&self) -> PairDisplay<'_> {
        PairDisplay { base: &self.base, divisor: DivisorRef::Seg(&self.divisor), h: &self.h }
    }
}

impl DpdPair {
    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn divisor(&self) -> &WeilQDivisor {
        &self.divisor
    }

    pub fn h(&self) -> &BaseFunction {
        &self.h
    }

    /// `D₋ = τ*D₊ − div(h)`.
    pub fn d_minus(&self) -> WeilQDivisor {
        let div_h = self.base.div_of_function(&self.h).expect("validated");
        self.base.pullback_real(&self.divisor).sub(&div_h)
    }

    /// `𝒟 = {1}⊗D₊ + [0,1]⊗(−D₊−D₋)`: the segment at each prime is
    /// `[d₊, −d₋]`.
    pub fn to_phs(&self) -> PhsPair {
        let d_plus = &self.divisor;
        let d_minus = self.d_minus();
        let primes: std::collections::BTreeSet<&PrimeDivisor> = d_plus.support().chain(d_minus.support()).collect();
        let divisor = SegmentalDivisor::from_terms(primes.into_iter().map(|p| {
            let seg = Segment::new(d_plus.coeff(p), -d_minus.coeff(p)).expect("D + tau*D <= div(h)");
            (p.clone(), seg)
        }));
        phs_validate(&self.base, divisor, self.h.clone()).expect("conversion of a validated DPD pair")
    }

    /// `(ψ*D − div f, ψ*h / (f·τ*f))`, re-validated.
    pub fn twist(&self, psi: &Affine, f: &RationalFunction) -> Result<DpdPair, PairError> {
        let (curve, div_f, h) = twist_parts(&self.base, psi, f, &self.h)?;
        let divisor = psi.pullback_divisor(&self.divisor).sub(&div_f);
        dpd_validate(&Base::Curve(curve.clone()), divisor, BaseFunction::Rational(h))
    }

    pub fn display(&self) -> PairDisplay<'_> {
        PairDisplay { base: &self.base, divisor: DivisorRef::Weil(&self.divisor), h: &self.h }
    }
}

fn twist_parts<'a>(
    base: &'a Base,
    psi: &Affine,
    f: &RationalFunction,
    h: &BaseFunction,
) -> Result<(&'a CurveBase, WeilQDivisor, RationalFunction), PairError> {
    let curve = base
        .as_curve()
        .ok_or_else(|| PairError::UnsupportedBase("twisted pullback needs a curve base".into()))?;
    if !psi.commutes_with(curve) {
        return Err(PairError::NotRealAutomorphism);
    }
    let h = h.as_rational().expect("curve base functions are rational");
    let div_f = curve.div_of(f)?;
    let norm = f * &curve.tau_function(f);
    if norm.is_zero() {
        return Err(GeometryError::ZeroFunction.into());
    }
    Ok((curve, div_f, &psi.pullback_function(h) / &norm))
}

pub fn dpd_to_seg(pair: &DpdPair) -> PhsPair {
    pair.to_phs()
}

pub fn seg_to_dpd(pair: &PhsPair) -> DpdPair {
    pair.to_dpd()
}

pub fn pair_pullback_twist(psi: &Affine, f: &RationalFunction, pair: &PhsPair) -> Result<PhsPair, PairError> {
    pair.twist(psi, f)
}

/// Moves a pair on `(A¹, τ)` to the line with standard conjugation by
/// pulling back along [`CurveBase::normalizer`]. Returns the new pair and
/// the normalizing map.
pub fn normalize_real_structure(pair: &DpdPair) -> Result<(DpdPair, Affine), PairError> {
    let curve = pair
        .base
        .as_curve()
        .ok_or_else(|| PairError::UnsupportedBase("normalization needs a curve base".into()))?;
    let chi = curve.normalizer();
    let mut target = CurveBase::standard(curve.var());
    for p in curve.opaque_primes() {
        target.declare_prime(&chi.pullback_poly(p))?;
    }
    let divisor = chi.pullback_divisor(&pair.divisor);
    let h = chi.pullback_function(pair.h.as_rational().expect("curve base functions are rational"));
    Ok((dpd_validate(&Base::Curve(target), divisor, BaseFunction::Rational(h))?, chi))
}

enum DivisorRef<'a> {
    Seg(&'a SegmentalDivisor),
    Weil(&'a WeilQDivisor),
}

pub struct PairDisplay<'a> {
    base: &'a Base,
    divisor: DivisorRef<'a>,
    h: &'a BaseFunction,
}

impl fmt::Display for PairDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.base.var();
        match self.divisor {
            DivisorRef::Seg(d) => write!(f, "({}, {})", d.display_in(var), self.base.display_function(self.h)),
            DivisorRef::Weil(d) => write!(f, "({}, {})", d.display_in(var), self.base.display_function(self.h)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, GaussianRational, Poly1};
    use crate::geometry::{FunctionWord, PresentedBase};

    fn line() -> Base {
        Base::Curve(CurveBase::standard("z"))
    }

    fn z() -> RationalFunction {
        RationalFunction::var()
    }

    fn origin() -> PrimeDivisor {
        PrimeDivisor::Point(GaussianRational::zero())
    }

    #[test]
    fn gutwirth_pair() {
        let d = SegmentalDivisor::single(origin(), Segment::new(int(0), int(1)).unwrap());
        let pair = phs_validate(&line(), d.clone(), BaseFunction::Rational(z())).unwrap();
        assert_eq!(pair.to_dpd().to_phs(), pair);
        let zi = &z() - &RationalFunction::constant(GaussianRational::i());
        assert!(matches!(phs_validate(&line(), d, BaseFunction::Rational(zi)), Err(PairError::NotTauInvariant(_))));
    }

    #[test]
    fn hopf_pair() {
        let base = Base::Presented(PresentedBase::sphere());
        let d = SegmentalDivisor::single(PrimeDivisor::named("D_u"), Segment::point(int(1)));
        let h = BaseFunction::Word(FunctionWord::symbol("oneMinusZ"));
        assert!(phs_validate(&base, d.clone(), h.clone()).is_ok());
        let negated = Base::Presented(PresentedBase::sphere().with_negated_relations().unwrap());
        match phs_validate(&negated, d, h) {
            Err(PairError::FlipIdentityFails { prime, .. }) => assert_eq!(prime, PrimeDivisor::named("D_u")),
            other => panic!("expected a flip failure, got {other:?}"),
        }
    }

    #[test]
    fn dpd_inequality() {
        let bad = dpd_validate(&line(), WeilQDivisor::single(origin(), int(1)), BaseFunction::Rational(RationalFunction::one()));
        assert!(matches!(bad, Err(PairError::InequalityFails { .. })));
        let moebius =
            dpd_validate(&line(), WeilQDivisor::single(origin(), rat(1, 2)), BaseFunction::Rational(z())).unwrap();
        let seg = moebius.to_phs();
        assert_eq!(seg.divisor(), &SegmentalDivisor::single(origin(), Segment::point(rat(1, 2))));
        assert_eq!(seg.to_dpd(), moebius);
    }

    #[test]
    fn twist_by_z() {
        // ({1}⊗{0}, z²) twisted by f = z: divisor loses {1}⊗{0}, h is divided by z·z̄-pullback = z².
        let pair = phs_validate(
            &line(),
            SegmentalDivisor::single(origin(), Segment::point(int(1))),
            BaseFunction::Rational(z().pow(2).unwrap()),
        )
        .unwrap();
        let t = pair.twist(&Affine::identity(), &z()).unwrap();
        assert!(t.divisor().is_zero());
        assert_eq!(t.h(), &BaseFunction::Rational(RationalFunction::one()));
    }

    #[test]
    fn normalization_to_standard() {
        let curve = CurveBase::new(-GaussianRational::one(), GaussianRational::from_i64(2), "z").unwrap();
        // τ(z) = 2 - z̄ fixes 1 + i·t; (z-1)·τ*(z-1) = -(z-1)^2 is τ-invariant.
        let p = PrimeDivisor::Point(GaussianRational::one());
        let lin = RationalFunction::from_poly(Poly1::linear(&GaussianRational::one()));
        let h = -&(&lin * &lin);
        let pair = dpd_validate(&Base::Curve(curve), WeilQDivisor::single(p, int(1)), BaseFunction::Rational(h)).unwrap();
        let (std_pair, _) = normalize_real_structure(&pair).unwrap();
        assert!(std_pair.base().as_curve().unwrap().is_standard());
        assert_eq!(std_pair.divisor(), &WeilQDivisor::single(origin(), int(1)));
    }
}
