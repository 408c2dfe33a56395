use std::collections::BTreeSet;

use num_traits::One;

use super::{GeometryError, PrimeDivisor, WeilQDivisor};
use crate::arith::{int, rat, GaussianRational, Poly1, RationalFunction};

/// The complex affine line with real structure `τ(z) = a·z̄ + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveBase {
    a: GaussianRational,
    b: GaussianRational,
    var: String,
    opaque: BTreeSet<Poly1>,
}

impl CurveBase {
    /// Checks `aā = 1` and `ab̄ + b = 0`, which together say `τ∘τ = id`.
    pub fn new(a: GaussianRational, b: GaussianRational, var: impl Into<String>) -> Result<Self, GeometryError> {
        if !a.norm().is_one() || !(&(&a * &b.conj()) + &b).is_zero() {
            return Err(GeometryError::InvalidRealStructure);
        }
        Ok(CurveBase { a, b, var: var.into(), opaque: BTreeSet::new() })
    }

    /// Standard complex conjugation.
    pub fn standard(var: impl Into<String>) -> Self {
        Self::new(GaussianRational::one(), GaussianRational::zero(), var).expect("conjugation is an involution")
    }

    pub fn a(&self) -> &GaussianRational {
        &self.a
    }

    pub fn b(&self) -> &GaussianRational {
        &self.b
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn is_standard(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn opaque_primes(&self) -> impl Iterator<Item = &Poly1> {
        self.opaque.iter()
    }

    /// Declares a monic polynomial without `Q(i)` roots as a prime divisor
    /// support. Its `τ`-transform is declared along with it.
    pub fn declare_prime(&mut self, p: &Poly1) -> Result<PrimeDivisor, GeometryError> {
        let p = p.monic();
        if p.is_constant() || !p.factor_linear().roots.is_empty() {
            return Err(GeometryError::NotPrime(p.display_in(&self.var).to_string()));
        }
        let q = self.tau_poly(&p).monic();
        self.opaque.insert(p.clone());
        self.opaque.insert(q);
        Ok(PrimeDivisor::Opaque(p))
    }

    pub fn tau_point(&self, p: &GaussianRational) -> GaussianRational {
        &(&self.a * &p.conj()) + &self.b
    }

    /// `τ*f (z) = f̄(āz + b̄)`.
    pub fn tau_poly(&self, f: &Poly1) -> Poly1 {
        f.conj().compose_affine(&self.a.conj(), &self.b.conj())
    }

    pub fn tau_function(&self, f: &RationalFunction) -> RationalFunction {
        f.conj().compose_affine(&self.a.conj(), &self.b.conj())
    }

    pub fn tau_prime(&self, p: &PrimeDivisor) -> PrimeDivisor {
        match p {
            PrimeDivisor::Point(z) => PrimeDivisor::Point(self.tau_point(z)),
            PrimeDivisor::Opaque(f) => PrimeDivisor::Opaque(self.tau_poly(f).monic()),
            PrimeDivisor::Named(_) => p.clone(),
        }
    }

    pub fn div_poly(&self, f: &Poly1) -> Result<WeilQDivisor, GeometryError> {
        if f.is_zero() {
            return Err(GeometryError::ZeroFunction);
        }
        let fac = f.factor_linear();
        let mut d = WeilQDivisor::from_terms(
            fac.roots.iter().map(|(r, m)| (PrimeDivisor::Point(r.clone()), int(i64::from(*m)))),
        );
        let mut rest = fac.remainder;
        for p in &self.opaque {
            let mut m = 0;
            while let Some(q) = rest.exact_div(p) {
                rest = q;
                m += 1;
            }
            d.add_term(PrimeDivisor::Opaque(p.clone()), int(m));
        }
        if !rest.is_constant() {
            return Err(GeometryError::UnfactoredInput(rest.display_in(&self.var).to_string()));
        }
        Ok(d)
    }

    pub fn div_of(&self, f: &RationalFunction) -> Result<WeilQDivisor, GeometryError> {
        Ok(self.div_poly(f.numer())?.sub(&self.div_poly(f.denom())?))
    }

    pub fn pullback_divisor(&self, d: &WeilQDivisor) -> WeilQDivisor {
        d.map_primes(|p| self.tau_prime(p))
    }

    /// A real isomorphism `χ` from the line with standard conjugation onto
    /// this base: `χ(z̄) = τ(χ(z))`. Pulling data back along `χ` moves it to
    /// the standard model.
    pub fn normalizer(&self) -> Affine {
        let lambda = if self.a == -GaussianRational::one() {
            GaussianRational::i()
        } else {
            &GaussianRational::one() + &self.a
        };
        let mu = self.b.scale(&rat(1, 2));
        Affine::new(lambda, mu).expect("lambda is nonzero")
    }
}

/// Affine automorphism `ψ(z) = αz + β` of the line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub alpha: GaussianRational,
    pub beta: GaussianRational,
}

impl Affine {
    pub fn new(alpha: GaussianRational, beta: GaussianRational) -> Result<Self, GeometryError> {
        if alpha.is_zero() {
            return Err(GeometryError::NotAutomorphism);
        }
        Ok(Affine { alpha, beta })
    }

    pub fn identity() -> Self {
        Affine { alpha: GaussianRational::one(), beta: GaussianRational::zero() }
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_one() && self.beta.is_zero()
    }

    pub fn apply(&self, z: &GaussianRational) -> GaussianRational {
        &(&self.alpha * z) + &self.beta
    }

    pub fn inverse(&self) -> Self {
        let ai = self.alpha.inv().expect("alpha is nonzero");
        let beta = -(&ai * &self.beta);
        Affine { alpha: ai, beta }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Affine { alpha: &self.alpha * &other.alpha, beta: self.apply(&other.beta) }
    }

    /// `ψ∘τ = τ∘ψ`.
    pub fn commutes_with(&self, base: &CurveBase) -> bool {
        // α·a = a·ᾱ and α·b + β = a·β̄ + b
        &self.alpha * &base.a == &base.a * &self.alpha.conj()
            && &(&self.alpha * &base.b) + &self.beta == &(&base.a * &self.beta.conj()) + &base.b
    }

    pub fn pullback_function(&self, f: &RationalFunction) -> RationalFunction {
        f.compose_affine(&self.alpha, &self.beta)
    }

    pub fn pullback_poly(&self, f: &Poly1) -> Poly1 {
        f.compose_affine(&self.alpha, &self.beta)
    }

    /// `ψ*{p} = {ψ⁻¹(p)}`.
    pub fn pullback_prime(&self, p: &PrimeDivisor) -> PrimeDivisor {
        match p {
            PrimeDivisor::Point(z) => PrimeDivisor::Point(self.inverse().apply(z)),
            PrimeDivisor::Opaque(f) => PrimeDivisor::Opaque(self.pullback_poly(f).monic()),
            PrimeDivisor::Named(_) => p.clone(),
        }
    }

    pub fn pullback_divisor(&self, d: &WeilQDivisor) -> WeilQDivisor {
        d.map_primes(|p| self.pullback_prime(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(int(re), int(im))
    }

    #[test]
    fn divisor_of_conic_polynomial() {
        let base = CurveBase::standard("w");
        let p = Poly1::new(vec![g(1, 0), g(0, 0), g(1, 0)]);
        let d = base.div_poly(&p).unwrap();
        assert_eq!(d.to_string(), "{-i}+{i}");
        assert_eq!(base.pullback_divisor(&d), d);
        let q = Poly1::new(vec![g(-2, 0), g(0, 0), g(1, 0)]);
        assert!(matches!(base.div_poly(&q), Err(GeometryError::UnfactoredInput(_))));
    }

    #[test]
    fn opaque_prime_declared() {
        let mut base = CurveBase::standard("w");
        let q = Poly1::new(vec![g(-2, 0), g(0, 0), g(1, 0)]);
        let prime = base.declare_prime(&q).unwrap();
        let d = base.div_poly(&q.pow(2)).unwrap();
        assert_eq!(d, WeilQDivisor::single(prime, int(2)));
    }

    #[test]
    fn nonstandard_structure() {
        // τ(z) = -z̄ + 2 is an involution fixing the line Re z = 1.
        let base = CurveBase::new(g(-1, 0), g(2, 0), "z").unwrap();
        assert!(CurveBase::new(g(2, 0), g(0, 0), "z").is_err());
        let p = g(3, 1);
        assert_eq!(base.tau_point(&base.tau_point(&p)), p);
        let chi = base.normalizer();
        for z in [g(0, 0), g(1, 2), GaussianRational::new(rat(1, 3), rat(-5, 7))] {
            assert_eq!(chi.apply(&z.conj()), base.tau_point(&chi.apply(&z)));
        }
        let tau_f = base.tau_poly(&Poly1::linear(&p));
        assert_eq!(tau_f.monic(), Poly1::linear(&base.tau_point(&p)));
    }

    #[test]
    fn affine_algebra() {
        let psi = Affine::new(g(2, 0), g(1, 0)).unwrap();
        let z = g(5, -3);
        assert_eq!(psi.inverse().apply(&psi.apply(&z)), z);
        assert!(psi.commutes_with(&CurveBase::standard("z")));
        assert!(!Affine::new(g(0, 1), g(0, 0)).unwrap().commutes_with(&CurveBase::standard("z")));
        let d = WeilQDivisor::single(PrimeDivisor::Point(g(0, 0)), int(1));
        let shift = Affine::new(g(1, 0), g(1, 0)).unwrap();
        assert_eq!(shift.pullback_divisor(&d), WeilQDivisor::single(PrimeDivisor::Point(g(-1, 0)), int(1)));
        assert!(Affine::new(g(0, 0), g(1, 0)).is_err());
    }
}
