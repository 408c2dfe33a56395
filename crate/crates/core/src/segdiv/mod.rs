//! Closed rational intervals, their evaluations, and segmental divisors
//! `Σ [aᵢ,bᵢ]⊗Dᵢ`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::arith::{int, Rational};
use crate::geometry::{Affine, Base, PrimeDivisor, WeilQDivisor};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("segment [{0},{1}] has lower bound above upper bound")]
    Reversed(Rational, Rational),
}

/// Closed interval `[lo, hi]` with rational bounds; `{a}` is `[a, a]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    lo: Rational,
    hi: Rational,
}

impl Segment {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, SegmentError> {
        if lo > hi {
            return Err(SegmentError::Reversed(lo, hi));
        }
        Ok(Segment { lo, hi })
    }

    pub fn point(a: Rational) -> Self {
        Segment { lo: a.clone(), hi: a }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    /// Minkowski sum.
    pub fn add(&self, other: &Self) -> Self {
        Segment { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    /// `ev_m([a,b]) = min(ma, mb)`.
    pub fn ev(&self, m: i64) -> Rational {
        if m >= 0 {
            int(m) * &self.lo
        } else {
            int(m) * &self.hi
        }
    }

    /// `[a,b] ↦ [−b,−a]`.
    pub fn flip(&self) -> Self {
        Segment { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn shift(&self, c: &Rational) -> Self {
        Segment { lo: &self.lo + c, hi: &self.hi + c }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() {
            write!(f, "{{{}}}", self.lo)
        } else {
            write!(f, "[{},{}]", self.lo, self.hi)
        }
    }
}

pub fn seg_add(s: &Segment, t: &Segment) -> Segment {
    s.add(t)
}

pub fn ev(m: i64, s: &Segment) -> Rational {
    s.ev(m)
}

pub fn seg_flip(s: &Segment) -> Segment {
    s.flip()
}

/// Finite formal sum of segments tensored with prime divisors. Terms equal
/// to `{0}` are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SegmentalDivisor {
    terms: BTreeMap<PrimeDivisor, Segment>,
}

impl SegmentalDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(p: PrimeDivisor, s: Segment) -> Self {
        let mut d = Self::zero();
        d.add_term(p, s);
        d
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (PrimeDivisor, Segment)>) -> Self {
        let mut d = Self::zero();
        for (p, s) in terms {
            d.add_term(p, s);
        }
        d
    }

    /// `Σ {dᵢ}⊗Dᵢ` for `D = Σ dᵢDᵢ`.
    pub fn from_divisor(d: &WeilQDivisor) -> Self {
        Self::from_terms(d.terms().map(|(p, c)| (p.clone(), Segment::point(c.clone()))))
    }

    pub fn add_term(&mut self, p: PrimeDivisor, s: Segment) {
        let sum = match self.terms.remove(&p) {
            Some(t) => t.add(&s),
            None => s,
        };
        if !sum.is_zero() {
            self.terms.insert(p, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PrimeDivisor, &Segment)> {
        self.terms.iter()
    }

    pub fn segment(&self, p: &PrimeDivisor) -> Segment {
        self.terms.get(p).cloned().unwrap_or_else(Segment::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &PrimeDivisor> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, s) in &other.terms {
            out.add_term(p.clone(), s.clone());
        }
        out
    }

    /// `𝒟 + {1}⊗D`.
    pub fn add_divisor(&self, d: &WeilQDivisor) -> Self {
        self.add(&Self::from_divisor(d))
    }

    /// `𝒟(m) = Σ ev_m(segᵢ)·Dᵢ`.
    pub fn eval(&self, m: i64) -> WeilQDivisor {
        WeilQDivisor::from_terms(self.terms.iter().map(|(p, s)| (p.clone(), s.ev(m))))
    }

    /// `⌣𝒟`: flips every segment, keeping the primes.
    pub fn flip(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, s)| (p.clone(), s.flip())))
    }

    pub fn map_primes(&self, mut f: impl FnMut(&PrimeDivisor) -> PrimeDivisor) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, s)| (f(p), s.clone())))
    }

    /// `τ*𝒟`.
    pub fn pullback_real(&self, base: &Base) -> Self {
        self.map_primes(|p| base.pullback_real_prime(p))
    }

    /// `ψ*𝒟` for an automorphism of the line.
    pub fn pullback(&self, psi: &Affine) -> Self {
        self.map_primes(|p| psi.pullback_prime(p))
    }

    /// `true` when every segment is a singleton with integer value.
    pub fn is_integral_divisor(&self) -> bool {
        self.terms.values().all(|s| s.is_singleton() && s.lo.is_integer())
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> SegDivDisplay<'a> {
        SegDivDisplay { d: self, var }
    }
}

pub struct SegDivDisplay<'a> {
    d: &'a SegmentalDivisor,
    var: &'a str,
}

impl fmt::Display for SegDivDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d.is_zero() {
            return write!(f, "0");
        }
        for (idx, (p, s)) in self.d.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, "+")?;
            }
            write!(f, "{s}({})", p.display_in(self.var))?;
        }
        Ok(())
    }
}

impl fmt::Display for SegmentalDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("z"))
    }
}

pub fn segdiv_eval(d: &SegmentalDivisor, m: i64) -> WeilQDivisor {
    d.eval(m)
}

pub fn segdiv_flip(d: &SegmentalDivisor) -> SegmentalDivisor {
    d.flip()
}

pub fn segdiv_pullback_real(base: &Base, d: &SegmentalDivisor) -> SegmentalDivisor {
    d.pullback_real(base)
}

pub fn segdiv_pullback(psi: &Affine, d: &SegmentalDivisor) -> SegmentalDivisor {
    d.pullback(psi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Properness {
    Proper,
    /// Bigness and semiampleness cannot be read off a presentation; the
    /// caller's declaration is taken on trust.
    AssertedProper,
    NotProper(String),
}

/// On the line and the point every Q-divisor is principal, so every
/// segmental divisor is proper. On a presented base properness is asserted.
pub fn properness_check(base: &Base, d: &SegmentalDivisor) -> Properness {
    for p in d.support() {
        if let Err(e) = base.check_prime(p) {
            return Properness::NotProper(e.to_string());
        }
    }
    match base {
        Base::Point | Base::Curve(_) => Properness::Proper,
        Base::Presented(_) => Properness::AssertedProper,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, GaussianRational};
    use crate::geometry::{CurveBase, PresentedBase};

    fn pt(re: i64) -> PrimeDivisor {
        PrimeDivisor::Point(GaussianRational::from_i64(re))
    }

    fn seg(a: i64, b: i64) -> Segment {
        Segment::new(int(a), int(b)).unwrap()
    }

    #[test]
    fn segment_ops() {
        assert_eq!(seg(0, 1).add(&seg(2, 3)), seg(2, 4));
        let s = Segment::new(rat(1, 2), int(3)).unwrap();
        assert_eq!(s.ev(2), int(1));
        assert_eq!(s.ev(-1), int(-3));
        assert_eq!(s.ev(0), int(0));
        assert_eq!(seg(0, 1).flip(), seg(-1, 0));
        assert!(Segment::new(int(1), int(0)).is_err());
        assert_eq!(seg(0, 1).to_string(), "[0,1]");
        assert_eq!(Segment::point(rat(-1, 2)).to_string(), "{-1/2}");
    }

    #[test]
    fn gutwirth_divisor() {
        let d = SegmentalDivisor::single(pt(0), seg(0, 1));
        assert_eq!(d.eval(-2), WeilQDivisor::single(pt(0), int(-2)));
        assert_eq!(d.eval(3), WeilQDivisor::zero());
        assert_eq!(d.to_string(), "[0,1]({0})");
        let shift = Affine::new(GaussianRational::one(), GaussianRational::one()).unwrap();
        let e = SegmentalDivisor::single(pt(0), Segment::point(int(1)));
        assert_eq!(e.pullback(&shift), SegmentalDivisor::single(pt(-1), Segment::point(int(1))));
        assert_eq!(properness_check(&Base::Curve(CurveBase::standard("z")), &d), Properness::Proper);
    }

    #[test]
    fn presented_pullback() {
        let base = Base::Presented(PresentedBase::sphere());
        let d = SegmentalDivisor::single(PrimeDivisor::named("D_u"), Segment::point(int(1)));
        assert_eq!(d.pullback_real(&base), SegmentalDivisor::single(PrimeDivisor::named("D_v"), Segment::point(int(1))));
        assert_eq!(properness_check(&base, &d), Properness::AssertedProper);
        let bad = SegmentalDivisor::single(PrimeDivisor::named("D_x"), Segment::point(int(1)));
        assert!(matches!(properness_check(&base, &bad), Properness::NotProper(_)));
    }
}
