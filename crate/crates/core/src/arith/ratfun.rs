use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{GaussianRational, Poly1};

/// Quotient `num / den` of polynomials over `Q(i)` in lowest terms with a
/// monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    num: Poly1,
    den: Poly1,
}

impl RationalFunction {
    /// `None` if `den` is zero.
    pub fn new(num: Poly1, den: Poly1) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let g = num.gcd(&den);
        if g.is_one() {
            return Some(Self::from_coprime(num, den));
        }
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        Some(Self::from_coprime(num, den))
    }

    /// Skips the gcd: `num` and `den` must be coprime, `den` nonzero.
    fn from_coprime(num: Poly1, den: Poly1) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_monic() {
            return RationalFunction { num, den };
        }
        let lc = den.leading().inv().expect("nonzero");
        RationalFunction { num: num.scale(&lc), den: den.scale(&lc) }
    }

    /// `(a/b)·(c/d)` with `a/b`, `c/d` reduced: cancelling `gcd(a,d)` and
    /// `gcd(c,b)` leaves a reduced product.
    fn mul_reduced(a: &Poly1, b: &Poly1, c: &Poly1, d: &Poly1) -> Self {
        if a.is_zero() || c.is_zero() {
            return Self::zero();
        }
        let g1 = a.gcd(d);
        let g2 = c.gcd(b);
        let cut = |p: &Poly1, g: &Poly1| if g.is_one() { p.clone() } else { p.exact_div(g).expect("gcd divides") };
        Self::from_coprime(&cut(a, &g1) * &cut(c, &g2), &cut(b, &g2) * &cut(d, &g1))
    }

    pub fn from_poly(p: Poly1) -> Self {
        RationalFunction { num: p, den: Poly1::one() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(Poly1::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly1::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly1::one())
    }

    pub fn var() -> Self {
        Self::from_poly(Poly1::var())
    }

    pub fn numer(&self) -> &Poly1 {
        &self.num
    }

    pub fn denom(&self) -> &Poly1 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value if this is a constant function.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.coeff(0))
    }

    pub fn as_polynomial(&self) -> Option<&Poly1> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = u32::try_from(e.unsigned_abs()).ok()?;
        Some(RationalFunction { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::from_coprime(self.num.scale(c), self.den.clone())
    }

    /// Coefficientwise conjugation of numerator and denominator.
    pub fn conj(&self) -> Self {
        RationalFunction { num: self.num.conj(), den: self.den.conj() }
    }

    /// `f(alpha·z + beta)`; `alpha` must be nonzero.
    pub fn compose_affine(&self, alpha: &GaussianRational, beta: &GaussianRational) -> Self {
        Self::from_coprime(self.num.compose_affine(alpha, beta), self.den.compose_affine(alpha, beta))
    }

    /// `f(c / z)` for a nonzero constant `c`.
    pub fn compose_scaled_inverse(&self, c: &GaussianRational) -> Self {
        let invert = |p: &Poly1| -> Poly1 {
            // p(c/z) · z^deg
            let d = p.degree().unwrap_or(0);
            let mut coeffs = vec![GaussianRational::zero(); d + 1];
            for (k, a) in p.coeffs().iter().enumerate() {
                coeffs[d - k] = a * &c.pow(k as i64).expect("c nonzero");
            }
            Poly1::new(coeffs)
        };
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        let shift = RationalFunction::var().pow(dd - dn).expect("z is invertible");
        &Self::new(invert(&self.num), invert(&self.den)).expect("nonzero") * &shift
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> RatFunDisplay<'a> {
        RatFunDisplay { f: self, var }
    }
}

pub struct RatFunDisplay<'a> {
    f: &'a RationalFunction,
    var: &'a str,
}

fn needs_parens(p: &Poly1) -> bool {
    p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
}

impl fmt::Display for RatFunDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.f.num.display_in(self.var).to_string();
        if self.f.den.is_one() {
            return write!(f, "{num}");
        }
        let den = self.f.den.display_in(self.var).to_string();
        let num = if needs_parens(&self.f.num) { format!("({num})") } else { num };
        let den = if needs_parens(&self.f.den) { format!("({den})") } else { den };
        write!(f, "{num}/{den}")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("z"))
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
            .expect("nonzero")
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
            .expect("nonzero")
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::mul_reduced(&self.num, &self.den, &o.num, &o.den)
    }
}

/// Panics on division by the zero function.
impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, o: &RationalFunction) -> RationalFunction {
        assert!(!o.is_zero(), "division by the zero rational function");
        RationalFunction::mul_reduced(&self.num, &self.den, &o.den, &o.num)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        GaussianRational::parse(s).unwrap()
    }

    #[test]
    fn normalizes() {
        // (2z^2 - 2) / (2z + 2) = z - 1
        let num = Poly1::new(vec![g("-2"), g("0"), g("2")]);
        let den = Poly1::new(vec![g("2"), g("2")]);
        let f = RationalFunction::new(num, den).unwrap();
        assert_eq!(f, RationalFunction::from_poly(Poly1::linear(&g("1"))));
        assert!(RationalFunction::new(Poly1::one(), Poly1::zero()).is_none());
    }

    #[test]
    fn arithmetic_and_substitution() {
        let z = RationalFunction::var();
        let one = RationalFunction::one();
        let f = &(&z + &one) / &z;
        assert_eq!(&f * &z, &z + &one);
        assert_eq!(f.pow(-1).unwrap(), &z / &(&z + &one));
        // f(2/z) = (2/z + 1)/(2/z) = (2 + z)/2
        let sub = f.compose_scaled_inverse(&g("2"));
        assert_eq!(sub, RationalFunction::from_poly(Poly1::new(vec![g("1"), g("1/2")])));
        assert_eq!(z.compose_affine(&g("3"), &g("i")).as_polynomial().unwrap(), &Poly1::new(vec![g("i"), g("3")]));
        assert_eq!(RationalFunction::constant(g("2")).as_constant(), Some(g("2")));
        assert_eq!(f.display_in("w").to_string(), "(w+1)/w");
    }
}
