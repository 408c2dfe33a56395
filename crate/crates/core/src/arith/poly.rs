use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{GaussianRational, Rational};

/// Univariate polynomial over `Q(i)`, coefficients stored from the constant
/// term upwards with no trailing zeros. The zero polynomial has no
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly1 {
    coeffs: Vec<GaussianRational>,
}

/// Result of [`Poly1::factor_linear`]:
/// `p = leading · Π (z - root)^mult · remainder` with `remainder` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactorization {
    pub leading: GaussianRational,
    pub roots: Vec<(GaussianRational, u32)>,
    pub remainder: Poly1,
}

impl Poly1 {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        Self::new(coeffs.into_iter().map(GaussianRational::real).collect())
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// The variable `z`.
    pub fn var() -> Self {
        Self::new(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    /// `z - root`
    pub fn linear(root: &GaussianRational) -> Self {
        Self::new(vec![-root, GaussianRational::one()])
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> GaussianRational {
        self.coeffs.last().cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Every coefficient real.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(inv) => self.scale(&inv),
            None => Self::zero(),
        }
    }

    /// Coefficientwise complex conjugation.
    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(GaussianRational::conj).collect())
    }

    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Rational::from_integer(BigInt::from(k))))
                .collect(),
        )
    }

    /// Gaussian-integer coefficients and a common denominator.
    fn integer_parts(&self) -> (Vec<(BigInt, BigInt)>, BigInt) {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.re.denom()).lcm(c.im.denom());
        }
        let scale = |q: &Rational| q.numer() * (&lcm / q.denom());
        (self.coeffs.iter().map(|c| (scale(&c.re), scale(&c.im))).collect(), lcm)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `p(alpha·z + beta)`
    pub fn compose_affine(&self, alpha: &GaussianRational, beta: &GaussianRational) -> Self {
        let inner = Self::new(vec![beta.clone(), alpha.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &Self::constant(c.clone());
        }
        acc
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dlen = divisor.coeffs.len();
        assert!(dlen > 0, "polynomial division by zero");
        if self.coeffs.len() < dlen {
            return (Self::zero(), self.clone());
        }
        let integral = |c: &GaussianRational| c.re.is_integer() && c.im.is_integer();
        if divisor.is_monic() && divisor.coeffs.iter().all(integral) {
            return self.div_rem_integral(divisor);
        }
        let lead_inv = divisor.leading().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GaussianRational::zero(); rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dlen - 1] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * d);
            }
            quot[k] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Long division by a monic divisor over `Z[i]`, run on the cleared
    /// numerators of `self`.
    fn div_rem_integral(&self, divisor: &Self) -> (Self, Self) {
        let dlen = divisor.coeffs.len();
        let (mut rem, d) = self.integer_parts();
        let div: Vec<(BigInt, BigInt)> = divisor.coeffs.iter().map(|c| (c.re.to_integer(), c.im.to_integer())).collect();
        let mut quot = vec![(BigInt::zero(), BigInt::zero()); rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dlen - 1].clone();
            if c.0.is_zero() && c.1.is_zero() {
                continue;
            }
            for (j, (dr, di)) in div.iter().enumerate() {
                let slot = &mut rem[k + j];
                slot.0 -= &c.0 * dr - &c.1 * di;
                slot.1 -= &c.0 * di + &c.1 * dr;
            }
            quot[k] = c;
        }
        let back = |v: Vec<(BigInt, BigInt)>| {
            Self::new(
                v.into_iter()
                    .map(|(re, im)| GaussianRational::new(Rational::new(re, d.clone()), Rational::new(im, d.clone())))
                    .collect(),
            )
        };
        (back(quot), back(rem))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    /// Monic gcd; remainders are made monic to curb coefficient growth.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one();
        }
        // when the smaller one splits over Q(i), match roots by deflation
        let (small, big) = if self.coeffs.len() <= other.coeffs.len() { (self, other) } else { (other, self) };
        let split = small.factor_linear();
        if split.remainder.is_constant() {
            let mut g = Self::one();
            let mut rest = big.clone();
            for (root, m) in &split.roots {
                let (q, k) = rest.strip_root_upto(root, *m);
                rest = q;
                g = &g * &Self::linear(root).pow(k);
            }
            return g;
        }
        self.gcd_euclid(other)
    }

    fn gcd_euclid(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = if r.is_zero() { r } else { r.monic() };
        }
        a
    }

    /// Order of vanishing at `root`.
    pub fn multiplicity(&self, root: &GaussianRational) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        self.strip_root(root).1
    }

    /// Synthetic division by `z − c`: quotient and remainder `p(c)`.
    pub fn deflate(&self, c: &GaussianRational) -> (Self, GaussianRational) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Self::zero(), GaussianRational::zero());
        }
        if c.re.is_integer() && c.im.is_integer() {
            // Horner over Z[i] on the cleared numerators
            let (a, d) = self.integer_parts();
            let (cr, ci) = (c.re.to_integer(), c.im.to_integer());
            let mut q = vec![(BigInt::zero(), BigInt::zero()); n - 1];
            let mut acc = a[n - 1].clone();
            for k in (0..n - 1).rev() {
                let next = (&a[k].0 + &cr * &acc.0 - &ci * &acc.1, &a[k].1 + &cr * &acc.1 + &ci * &acc.0);
                q[k] = std::mem::replace(&mut acc, next);
            }
            let back = |(re, im): (BigInt, BigInt)| {
                GaussianRational::new(Rational::new(re, d.clone()), Rational::new(im, d.clone()))
            };
            return (Self::new(q.into_iter().map(back).collect()), back(acc));
        }
        let mut q = vec![GaussianRational::zero(); n - 1];
        let mut acc = self.coeffs[n - 1].clone();
        for k in (0..n - 1).rev() {
            let next = &self.coeffs[k] + &(c * &acc);
            q[k] = std::mem::replace(&mut acc, next);
        }
        (Self::new(q), acc)
    }

    /// Divides out `(z − c)` as often as possible.
    fn strip_root(&self, c: &GaussianRational) -> (Self, u32) {
        self.strip_root_upto(c, u32::MAX)
    }

    /// Divides out `(z − c)` at most `limit` times.
    fn strip_root_upto(&self, c: &GaussianRational, limit: u32) -> (Self, u32) {
        let (a, b) = lowest_terms(c);
        let (mut parts, d) = self.integer_parts();
        let m = strip_linear(&mut parts, &a, &b, limit);
        if m == 0 {
            return (self.clone(), 0);
        }
        // p = (b·z − a)^m·q/d = (z − c)^m·b^m·q/d
        let q = Self::new(parts.into_iter().map(|(re, im)| GaussianRational::new(re.into(), im.into())).collect());
        let b = GaussianRational::new(b.0.into(), b.1.into());
        (q.scale(&(&c_pow(&b, m) / &GaussianRational::real(d.into()))), m)
    }

    /// Extracts all linear factors with roots in `Q(i)`.
    ///
    /// Roots are found by the Gaussian rational root
    /// test: after clearing denominators, a root `α/β` in lowest terms has
    /// `α` dividing the constant term and `β` dividing the leading
    /// coefficient in `Z[i]`. Divisors come from the Gaussian prime
    /// factorization; if a norm cannot be factored by trial division up to
    /// 2^20, the search is skipped and everything lands in the remainder.
    ///
    /// Panics on the zero polynomial.
    pub fn factor_linear(&self) -> LinearFactorization {
        assert!(!self.is_zero(), "factor_linear of the zero polynomial");
        let leading = self.leading();
        let mut rest = self.monic();
        let mut roots = Vec::new();

        let zero = GaussianRational::zero();
        let m0 = rest.coeffs.iter().take_while(|c| c.is_zero()).count();
        if m0 > 0 {
            roots.push((zero, m0 as u32));
            rest = Self::new(rest.coeffs[m0..].to_vec());
        }
        if rest.degree().unwrap_or(0) > 0 {
            // candidates from the squarefree part only when the full
            // polynomial has coefficients too large to factor
            let candidates = root_candidates(&rest).or_else(|| {
                let squarefree = rest.exact_div(&rest.gcd_euclid(&rest.derivative())).expect("divisible");
                root_candidates(&squarefree)
            });
            let approx = ApproxPoly::new(&rest);
            let (mut parts, _) = rest.integer_parts();
            for (a, b) in candidates.unwrap_or_default() {
                if parts.len() <= 1 {
                    break;
                }
                if !approx.may_vanish(gint_quotient_f64(a, b)) {
                    continue;
                }
                let (ab, bb) = (gint_big(a), gint_big(b));
                let m = strip_linear(&mut parts, &ab, &bb, u32::MAX);
                if m > 0 {
                    roots.push((&gint_to_gr(a) / &gint_to_gr(b), m));
                }
            }
            rest = Self::new(parts.into_iter().map(|(re, im)| GaussianRational::new(re.into(), im.into())).collect()).monic();
        }
        roots.sort();
        LinearFactorization { leading, roots, remainder: rest }
    }

    /// Writes the polynomial in the variable `var`.
    pub fn display_in<'a>(&'a self, var: &'a str) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, var }
    }
}

/// Floating-point copy of a polynomial, used to discard root candidates
/// cheaply before the exact test.
struct ApproxPoly(Vec<(f64, f64)>);

impl ApproxPoly {
    fn new(p: &Poly1) -> Self {
        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        ApproxPoly(p.coeffs().iter().map(|c| (f(&c.re), f(&c.im))).collect())
    }

    /// False only if the value at `z` is clearly nonzero. Any NaN or
    /// overflow keeps the candidate.
    fn may_vanish(&self, (zr, zi): (f64, f64)) -> bool {
        let (mut vr, mut vi, mut scale) = (0.0f64, 0.0f64, 0.0f64);
        let modulus = zr.hypot(zi);
        for (cr, ci) in self.0.iter().rev() {
            let (r, i) = (vr * zr - vi * zi + cr, vr * zi + vi * zr + ci);
            vr = r;
            vi = i;
            scale = scale * modulus + cr.hypot(*ci);
        }
        let v = vr.hypot(vi);
        !(v.is_finite() && scale.is_finite()) || v <= 1e-6 * scale
    }
}

/// Gaussian integer with small components, used only for root candidates.
type GInt = (i128, i128);

/// Candidate roots `a/b` as pairs of Gaussian integers; `None` when the end
/// coefficients are too large to factor.
fn root_candidates(p: &Poly1) -> Option<Vec<(GInt, GInt)>> {
    const NORM_LIMIT: i128 = 1 << 100;
    // clear denominators
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.re.denom()).lcm(c.im.denom());
    }
    let to_gint = |c: &GaussianRational| -> Option<GInt> {
        let l = Rational::from_integer(lcm.clone());
        let re = (&c.re * &l).to_integer().to_i128()?;
        let im = (&c.im * &l).to_integer().to_i128()?;
        Some((re, im))
    };
    let (c0, cn) = (to_gint(&p.coeff(0))?, to_gint(&p.leading())?);
    let small = |g: GInt| g.0.abs() < 1 << 50 && g.1.abs() < 1 << 50 && g.0 * g.0 + g.1 * g.1 < NORM_LIMIT;
    if !small(c0) || !small(cn) || c0 == (0, 0) {
        return None;
    }
    let nums = gaussian_divisors(c0)?;
    let dens = gaussian_divisors(cn)?;
    let units: [GInt; 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    let mut out = Vec::with_capacity(nums.len() * dens.len() * 4);
    for a in &nums {
        for b in &dens {
            for u in units {
                out.push((gint_mul(*a, u), *b));
            }
        }
    }
    Some(out)
}

type GBig = (BigInt, BigInt);

fn gint_big(g: GInt) -> GBig {
    (BigInt::from(g.0), BigInt::from(g.1))
}

fn gbig_mul(x: &GBig, y: &GBig) -> GBig {
    (&x.0 * &y.0 - &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

/// `x / d` in `Z[i]` if exact.
fn gbig_div_exact(x: &GBig, d: &GBig) -> Option<GBig> {
    let n = &d.0 * &d.0 + &d.1 * &d.1;
    let re = &x.0 * &d.0 + &x.1 * &d.1;
    let im = &x.1 * &d.0 - &x.0 * &d.1;
    let (qr, rr) = re.div_rem(&n);
    let (qi, ri) = im.div_rem(&n);
    (rr.is_zero() && ri.is_zero()).then_some((qr, qi))
}

/// Remainder of `x` by `d` with the rounded quotient, so its norm drops.
fn gbig_rem(x: &GBig, d: &GBig) -> GBig {
    let n = &d.0 * &d.0 + &d.1 * &d.1;
    let re = &x.0 * &d.0 + &x.1 * &d.1;
    let im = &x.1 * &d.0 - &x.0 * &d.1;
    let round = |t: BigInt| {
        let twice: BigInt = &t * 2 + &n;
        twice.div_floor(&(&n * 2u32))
    };
    let q = (round(re), round(im));
    let qd = gbig_mul(&q, d);
    (&x.0 - &qd.0, &x.1 - &qd.1)
}

fn gbig_gcd(mut x: GBig, mut y: GBig) -> GBig {
    while !(y.0.is_zero() && y.1.is_zero()) {
        let r = gbig_rem(&x, &y);
        x = std::mem::replace(&mut y, r);
    }
    x
}

/// `c = a/b` with `a, b` coprime Gaussian integers.
fn lowest_terms(c: &GaussianRational) -> (GBig, GBig) {
    let d = c.re.denom().lcm(c.im.denom());
    let scale = |q: &Rational| q.numer() * (&d / q.denom());
    let num = (scale(&c.re), scale(&c.im));
    let den = (d, BigInt::zero());
    if num.0.is_zero() && num.1.is_zero() {
        return (num, (BigInt::one(), BigInt::zero()));
    }
    let g = gbig_gcd(num.clone(), den.clone());
    (gbig_div_exact(&num, &g).expect("gcd divides"), gbig_div_exact(&den, &g).expect("gcd divides"))
}

fn c_pow(c: &GaussianRational, e: u32) -> GaussianRational {
    (0..e).fold(GaussianRational::one(), |acc, _| &acc * c)
}

/// Divides the Gaussian integer coefficients `p` by `b·z − a` while the
/// division is exact, at most `limit` times. For coprime `a, b` the
/// quotient by a root `a/b` always stays integral.
fn strip_linear(p: &mut Vec<GBig>, a: &GBig, b: &GBig, limit: u32) -> u32 {
    let mut m = 0;
    'outer: while m < limit && p.len() > 1 {
        let n = p.len();
        let mut q: Vec<GBig> = vec![(BigInt::zero(), BigInt::zero()); n - 1];
        let Some(top) = gbig_div_exact(&p[n - 1], b) else { break };
        q[n - 2] = top;
        for k in (1..n - 1).rev() {
            let t = gbig_mul(a, &q[k]);
            let num = (&p[k].0 + &t.0, &p[k].1 + &t.1);
            let Some(v) = gbig_div_exact(&num, b) else { break 'outer };
            q[k - 1] = v;
        }
        let t = gbig_mul(a, &q[0]);
        if !((&p[0].0 + &t.0).is_zero() && (&p[0].1 + &t.1).is_zero()) {
            break;
        }
        *p = q;
        m += 1;
    }
    m
}

fn gint_quotient_f64(a: GInt, b: GInt) -> (f64, f64) {
    let n = (b.0 * b.0 + b.1 * b.1) as f64;
    let re = (a.0 * b.0 + a.1 * b.1) as f64 / n;
    let im = (a.1 * b.0 - a.0 * b.1) as f64 / n;
    (re, im)
}

fn gint_to_gr(g: GInt) -> GaussianRational {
    GaussianRational::new(
        Rational::from_integer(BigInt::from(g.0)),
        Rational::from_integer(BigInt::from(g.1)),
    )
}

/// Divisors of `g` in `Z[i]`, one representative per associate class, built
/// from the Gaussian prime factorization of `g`.
fn gaussian_divisors(g: GInt) -> Option<Vec<GInt>> {
    let mut rest = g;
    let mut primes: Vec<(GInt, u32)> = Vec::new();
    for p in prime_factors(g.0 * g.0 + g.1 * g.1)? {
        let pis = if p == 2 {
            vec![(1, 1)]
        } else if p % 4 == 3 {
            vec![(p, 0)]
        } else {
            let (a, b) = two_squares(p);
            vec![(a, b), (a, -b)]
        };
        for pi in pis {
            let mut e = 0;
            while gint_divides(pi, rest) {
                rest = gint_div(rest, pi);
                e += 1;
            }
            if e > 0 {
                primes.push((pi, e));
            }
        }
    }
    let mut out = vec![(1, 0)];
    for (pi, e) in primes {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut x = *d;
            for _ in 0..=e {
                next.push(x);
                x = gint_mul(x, pi);
            }
        }
        out = next;
    }
    Some(out)
}

/// Distinct prime factors of `0 < n ≤ 2^100`: trial division, then
/// Miller–Rabin and Pollard–Brent on the cofactor. `None` if rho gives up.
fn prime_factors(n: i128) -> Option<Vec<i128>> {
    const TRIAL: u128 = 1 << 12;
    let mut n = n as u128;
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n && d <= TRIAL {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            if !out.contains(&m) {
                out.push(m);
            }
            continue;
        }
        let f = rho(m)?;
        stack.push(f);
        stack.push(m / f);
    }
    out.sort();
    Some(out.into_iter().map(|p| p as i128).collect())
}

/// `a·b mod n` for `a, b < n ≤ 2^100`, in 27-bit limbs of `a`.
fn mulmod(a: u128, b: u128, n: u128) -> u128 {
    if n <= 1 << 64 {
        return a * b % n;
    }
    let mut r = 0;
    for shift in [81, 54, 27, 0] {
        r = (r << 27) % n;
        r = (r + ((a >> shift) & ((1 << 27) - 1)) * b % n) % n;
    }
    r
}

fn powmod(mut b: u128, mut e: u128, n: u128) -> u128 {
    let mut acc = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, n);
        }
        b = mulmod(b, b, n);
        e >>= 1;
    }
    acc
}

/// Miller–Rabin; the bases make it exact well beyond `2^64`.
fn is_prime(n: u128) -> bool {
    const BASES: [u128; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A nontrivial factor of the odd composite `n` by Pollard–Brent, with a
/// fixed iteration budget.
fn rho(n: u128) -> Option<u128> {
    const BUDGET: u32 = 1 << 18;
    const BATCH: u32 = 64;
    for c in 1..8u128 {
        let f = |x: u128| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u128, 2u128, 2u128);
        let mut q = 1u128;
        let mut g = 1u128;
        let mut r = 1u32;
        let mut steps = 0u32;
        while g == 1 && steps < BUDGET {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = gcd_u128(q, n);
                k += BATCH;
            }
            steps += r;
            r *= 2;
        }
        if g == n {
            // the batch overshot; replay one step at a time
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

/// `a² + b² = p` for a prime `p ≡ 1 mod 4`, from a square root of −1
/// modulo `p` by the Euclidean descent.
fn two_squares(p: i128) -> (i128, i128) {
    let pu = p as u128;
    let x = (2..)
        .map(|c| powmod(c, (pu - 1) / 4, pu))
        .find(|x| mulmod(*x, *x, pu) == pu - 1)
        .expect("p is 1 mod 4");
    let (mut a, mut b) = (pu, x);
    let limit = (pu).isqrt();
    while b > limit {
        (a, b) = (b, a % b);
    }
    let rest = pu - b * b;
    let c = rest.isqrt();
    debug_assert_eq!(c * c, rest);
    (b as i128, c as i128)
}

fn gint_mul(x: GInt, y: GInt) -> GInt {
    (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

/// Exact quotient, assuming `d` divides `g`.
fn gint_div(g: GInt, d: GInt) -> GInt {
    let n = d.0 * d.0 + d.1 * d.1;
    ((g.0 * d.0 + g.1 * d.1) / n, (g.1 * d.0 - g.0 * d.1) / n)
}

fn gint_divides(d: GInt, g: GInt) -> bool {
    let n = d.0 * d.0 + d.1 * d.1;
    // g · conj(d)
    let re = g.0 * d.0 + g.1 * d.1;
    let im = g.1 * d.0 - g.0 * d.1;
    re % n == 0 && im % n == 0
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly1,
    var: &'a str,
}

/// Splits a coefficient into a sign and the text of its magnitude, wrapping
/// numbers with both a real and an imaginary part in parentheses.
pub(crate) fn signed_coeff_text(c: &GaussianRational) -> (bool, String) {
    let negative = c.re.is_negative() || (c.re.is_zero() && c.im.is_negative());
    let mag = if negative { -c } else { c.clone() };
    let text = if !mag.re.is_zero() && !mag.im.is_zero() {
        format!("({mag})")
    } else {
        mag.to_string()
    };
    (negative, text)
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, text) = signed_coeff_text(c);
            if negative {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, k),
            };
            match (k, text.as_str()) {
                (0, _) => write!(f, "{text}")?,
                (_, "1") => write!(f, "{mono}")?,
                _ => write!(f, "{text}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("z"))
    }
}

impl<'a> Add<&'a Poly1> for &'a Poly1 {
    type Output = Poly1;
    fn add(self, o: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly1::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Poly1> for &'a Poly1 {
    type Output = Poly1;
    fn sub(self, o: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly1::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Poly1> for &'a Poly1 {
    type Output = Poly1;
    fn mul(self, o: &Poly1) -> Poly1 {
        if self.is_zero() || o.is_zero() {
            return Poly1::zero();
        }
        // multiply integer numerators, divide by the denominators once
        let (a, da) = self.integer_parts();
        let (b, db) = o.integer_parts();
        let zero = || (BigInt::zero(), BigInt::zero());
        let mut acc = vec![zero(); a.len() + b.len() - 1];
        for (i, (ar, ai)) in a.iter().enumerate() {
            if ar.is_zero() && ai.is_zero() {
                continue;
            }
            for (j, (br, bi)) in b.iter().enumerate() {
                let slot = &mut acc[i + j];
                slot.0 += ar * br - ai * bi;
                slot.1 += ar * bi + ai * br;
            }
        }
        let den = da * db;
        Poly1::new(
            acc.into_iter()
                .map(|(re, im)| GaussianRational::new(Rational::new(re, den.clone()), Rational::new(im, den.clone())))
                .collect(),
        )
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        Poly1::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for Poly1 {
    type Output = Poly1;
    fn add(self, o: Poly1) -> Poly1 {
        &self + &o
    }
}

impl Sub for Poly1 {
    type Output = Poly1;
    fn sub(self, o: Poly1) -> Poly1 {
        &self - &o
    }
}

impl Mul for Poly1 {
    type Output = Poly1;
    fn mul(self, o: Poly1) -> Poly1 {
        &self * &o
    }
}
