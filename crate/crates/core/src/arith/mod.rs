//! Exact scalar and polynomial arithmetic.
//!
//! Everything here is exact: rationals are arbitrary precision, complex
//! scalars live in the Gaussian rationals `Q(i)`, and there is no floating
//! point anywhere in the crate.

mod gaussian;
mod mpoly;
mod poly;
mod ratfun;

pub use gaussian::GaussianRational;
pub use mpoly::{MPoly, Monomial};
pub use poly::{LinearFactorization, Poly1};
pub use ratfun::RationalFunction;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q` into a rational. Returns `None` on malformed
/// input or a zero denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Converts an integral rational to `i64` if it fits.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if is_integer(q) {
        q.numer().to_i64()
    } else {
        None
    }
}

/// `q = a² + b²` with `a, b` rational, if such a representation exists.
///
/// A positive rational is a sum of two rational squares exactly when the
/// product of its numerator and denominator is a sum of two integer squares.
/// The search is exhaustive up to `isqrt(n)`, so it is only attempted for
/// integers below 2^48.
pub fn sum_of_two_squares(q: &Rational) -> Option<(Rational, Rational)> {
    if !q.is_positive() {
        return None;
    }
    let n = q.numer() * q.denom();
    let n = n.to_u64().filter(|n| *n < (1u64 << 48))?;
    let mut a: u64 = 0;
    while a * a <= n {
        let rest = n - a * a;
        let b = rest.isqrt();
        if b * b == rest {
            // q = n / d²
            let d = Rational::from_integer(q.denom().clone());
            return Some((int(a as i64) / &d, int(b as i64) / d));
        }
        a += 1;
    }
    None
}

/// Exact `k`-th root of a rational, when it is again rational.
pub fn rational_root(q: &Rational, k: u32) -> Option<Rational> {
    if k == 0 {
        return None;
    }
    if q.is_negative() && k % 2 == 0 {
        return None;
    }
    let root_int = |n: &BigInt| -> Option<BigInt> {
        let r = n.nth_root(k);
        if num_traits::pow(r.clone(), k as usize) == *n {
            Some(r)
        } else {
            None
        }
    };
    let num = root_int(q.numer())?;
    let den = root_int(q.denom())?;
    Some(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-7"), Some(int(-7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn two_squares() {
        let (a, b) = sum_of_two_squares(&int(2)).unwrap();
        assert_eq!(&a * &a + &b * &b, int(2));
        let (a, b) = sum_of_two_squares(&rat(25, 4)).unwrap();
        assert_eq!(&a * &a + &b * &b, rat(25, 4));
        assert!(sum_of_two_squares(&int(3)).is_none());
        assert!(sum_of_two_squares(&int(-1)).is_none());
    }

    #[test]
    fn roots() {
        assert_eq!(rational_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(rational_root(&int(2), 3), None);
        assert_eq!(rational_root(&int(-4), 2), None);
    }
}
