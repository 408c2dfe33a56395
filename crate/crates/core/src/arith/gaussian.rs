use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{int, parse_rational, Rational};

/// An element `re + im·i` of the Gaussian rationals `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::real(int(n))
    }

    pub fn i() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    /// `z·z̄ = re² + im²`.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussianRational { re: &self.re / &n, im: -&self.im / n })
    }

    pub fn pow(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Some(acc)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        GaussianRational { re: &self.re * q, im: &self.im * q }
    }

    /// Parses forms such as `3`, `-1/2`, `i`, `-i`, `2i`, `3/4i`, `1+i`,
    /// `2-3i`, `1/2+3/4i`. Whitespace is ignored.
    pub fn parse(s: &str) -> Option<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return None;
        }
        // split at the last sign that is not the leading one
        let bytes = s.as_bytes();
        let mut split = None;
        for (idx, b) in bytes.iter().enumerate().skip(1) {
            if *b == b'+' || *b == b'-' {
                split = Some(idx);
            }
        }
        let (first, second) = match split {
            Some(idx) => (&s[..idx], Some(&s[idx..])),
            None => (&s[..], None),
        };
        match second {
            None => {
                if first.ends_with('i') {
                    Some(GaussianRational::new(Rational::zero(), parse_imag(first)?))
                } else {
                    Some(GaussianRational::real(parse_rational(first)?))
                }
            }
            Some(second) => {
                if first.ends_with('i') || !second.ends_with('i') {
                    return None;
                }
                Some(GaussianRational::new(parse_rational(first)?, parse_imag(second)?))
            }
        }
    }
}

fn parse_imag(s: &str) -> Option<Rational> {
    let body = s.strip_suffix('i')?;
    match body {
        "" | "+" => Some(Rational::one()),
        "-" => Some(-Rational::one()),
        _ => parse_rational(body),
    }
}

impl From<Rational> for GaussianRational {
    fn from(q: Rational) -> Self {
        GaussianRational::real(q)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &Rational| -> String {
            if im.abs().is_one() {
                "i".to_string()
            } else {
                format!("{}i", im.abs())
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                if self.im.is_negative() {
                    write!(f, "-{}", im_part(&self.im))
                } else {
                    write!(f, "{}", im_part(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}", self.re, sign, im_part(&self.im))
            }
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

/// Panics on division by zero, like the rational division it wraps.
impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        self * &o.inv().expect("division by zero in Q(i)")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, o: GaussianRational) -> GaussianRational {
                (&self).$method(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn g(s: &str) -> GaussianRational {
        GaussianRational::parse(s).unwrap()
    }

    #[test]
    fn conjugation() {
        let x = GaussianRational::new(rat(3, 2), rat(1, 5));
        assert_eq!(x.conj(), GaussianRational::new(rat(3, 2), rat(-1, 5)));
        assert_eq!(g("7").conj(), g("7"));
        assert_eq!(g("-i").conj().conj(), g("-i"));
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "7", "-1/2", "i", "-i", "2i", "3/4i", "1+i", "2-3i", "1/2+3/4i", "-5-i"] {
            assert_eq!(g(s).to_string(), s, "{s}");
        }
        assert_eq!(g("+i"), GaussianRational::i());
        assert!(GaussianRational::parse("i+1").is_none());
        assert!(GaussianRational::parse("").is_none());
        assert!(GaussianRational::parse("1/0").is_none());
    }

    #[test]
    fn field_ops() {
        let a = g("1+2i");
        let b = g("3-i");
        assert_eq!(&a * &b, g("5+5i"));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(a.norm(), rat(5, 1));
        assert_eq!(g("i").pow(2).unwrap(), g("-1"));
        assert_eq!(g("2").pow(-2).unwrap(), g("1/4"));
        assert!(GaussianRational::zero().inv().is_none());
    }
}
