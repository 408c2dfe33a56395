use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{GaussianRational, Poly1, Rational};

/// A prime Weil divisor on one of the supported bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeDivisor {
    /// A point of the affine line with Gaussian rational coordinate.
    Point(GaussianRational),
    /// The zero set of a monic polynomial without roots in `Q(i)`, taken as
    /// prime on the user's word.
    Opaque(Poly1),
    /// A declared prime of a presented base.
    Named(String),
}

impl PrimeDivisor {
    pub fn point(p: GaussianRational) -> Self {
        PrimeDivisor::Point(p)
    }

    pub fn named(s: impl Into<String>) -> Self {
        PrimeDivisor::Named(s.into())
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> PrimeDisplay<'a> {
        PrimeDisplay { prime: self, var }
    }
}

pub struct PrimeDisplay<'a> {
    prime: &'a PrimeDivisor,
    var: &'a str,
}

impl fmt::Display for PrimeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.prime {
            PrimeDivisor::Point(p) => write!(f, "{{{p}}}"),
            PrimeDivisor::Opaque(p) => write!(f, "<{}>", p.display_in(self.var)),
            PrimeDivisor::Named(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Display for PrimeDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("z"))
    }
}

/// Finite rational combination of prime divisors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeilQDivisor {
    coeffs: BTreeMap<PrimeDivisor, Rational>,
}

impl WeilQDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(p: PrimeDivisor, c: Rational) -> Self {
        let mut d = Self::zero();
        d.add_term(p, c);
        d
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (PrimeDivisor, Rational)>) -> Self {
        let mut d = Self::zero();
        for (p, c) in terms {
            d.add_term(p, c);
        }
        d
    }

    pub fn add_term(&mut self, p: PrimeDivisor, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(p.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, p: &PrimeDivisor) -> Rational {
        self.coeffs.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PrimeDivisor, &Rational)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &PrimeDivisor> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.coeffs {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(p, a)| (p.clone(), a * c)))
    }

    /// Coefficientwise floor.
    pub fn round_down(&self) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(p, a)| (p.clone(), a.floor())))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// `self ≤ other` coefficientwise. On failure returns the first prime
    /// (in divisor order) where the inequality breaks.
    pub fn leq_witness(&self, other: &Self) -> Result<(), PrimeDivisor> {
        let diff = other.sub(self);
        match diff.coeffs.iter().find(|(_, c)| c.is_negative()) {
            Some((p, _)) => Err(p.clone()),
            None => Ok(()),
        }
    }

    /// Transports every coefficient along `f` on primes. `f` must be
    /// injective for the result to be meaningful.
    pub fn map_primes(&self, mut f: impl FnMut(&PrimeDivisor) -> PrimeDivisor) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(p, c)| (f(p), c.clone())))
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> WeilDisplay<'a> {
        WeilDisplay { d: self, var }
    }
}

/// Coefficientwise `d1 ≤ d2` over the union of supports.
pub fn div_leq(d1: &WeilQDivisor, d2: &WeilQDivisor) -> bool {
    d1.leq_witness(d2).is_ok()
}

pub fn round_down(d: &WeilQDivisor) -> WeilQDivisor {
    d.round_down()
}

pub struct WeilDisplay<'a> {
    d: &'a WeilQDivisor,
    var: &'a str,
}

impl fmt::Display for WeilDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d.is_zero() {
            return write!(f, "0");
        }
        for (idx, (p, c)) in self.d.coeffs.iter().enumerate() {
            if c.is_negative() {
                write!(f, "-")?;
            } else if idx > 0 {
                write!(f, "+")?;
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", p.display_in(self.var))?;
        }
        Ok(())
    }
}

impl fmt::Display for WeilQDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("z"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn pt(re: i64, im: i64) -> PrimeDivisor {
        PrimeDivisor::Point(GaussianRational::new(int(re), int(im)))
    }

    #[test]
    fn arithmetic_and_order() {
        let d = WeilQDivisor::from_terms([(pt(0, 0), rat(1, 2)), (pt(0, 1), int(-3))]);
        assert_eq!(d.round_down(), WeilQDivisor::single(pt(0, 1), int(-3)));
        assert!(d.add(&d.neg()).is_zero());
        assert!(div_leq(&WeilQDivisor::single(pt(0, 0), int(-1)), &WeilQDivisor::zero()));
        assert_eq!(WeilQDivisor::single(pt(0, 0), int(2)).leq_witness(&WeilQDivisor::zero()), Err(pt(0, 0)));
        assert_eq!(d.to_string(), "1/2*{0}-3*{i}");
        assert_eq!(WeilQDivisor::single(PrimeDivisor::named("D_u"), int(1)).to_string(), "D_u");
    }
}
