use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::{GeometryError, PrimeDivisor, WeilQDivisor};
use crate::arith::{int, Rational};

/// Monomial `c·g₁^e₁⋯g_k^e_k` in declared invertible function symbols, with
/// a rational scalar. Exponents may be negative; zero exponents are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionWord {
    pub scalar: Rational,
    exps: BTreeMap<String, i64>,
}

impl FunctionWord {
    pub fn one() -> Self {
        FunctionWord { scalar: Rational::one(), exps: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        FunctionWord { scalar: c, exps: BTreeMap::new() }
    }

    pub fn symbol(name: impl Into<String>) -> Self {
        Self::from_parts(Rational::one(), [(name.into(), 1)])
    }

    pub fn from_parts(scalar: Rational, exps: impl IntoIterator<Item = (String, i64)>) -> Self {
        let mut w = FunctionWord { scalar, exps: BTreeMap::new() };
        for (s, e) in exps {
            *w.exps.entry(s).or_insert(0) += e;
        }
        w.exps.retain(|_, e| *e != 0);
        w
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&String, &i64)> {
        self.exps.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_parts(
            &self.scalar * &other.scalar,
            self.exps.iter().chain(&other.exps).map(|(s, e)| (s.clone(), *e)),
        )
    }

    /// `None` when the scalar is zero and `e < 0`.
    pub fn pow(&self, e: i64) -> Option<Self> {
        if e < 0 && self.scalar.is_zero() {
            return None;
        }
        let mut scalar = Rational::one();
        let base = if e < 0 { self.scalar.recip() } else { self.scalar.clone() };
        for _ in 0..e.unsigned_abs() {
            scalar *= &base;
        }
        Some(Self::from_parts(scalar, self.exps.iter().map(|(s, x)| (s.clone(), x * e))))
    }

    pub fn inv(&self) -> Option<Self> {
        self.pow(-1)
    }
}

impl fmt::Display for FunctionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "{}", self.scalar);
        }
        if self.scalar == -Rational::one() {
            write!(f, "-")?;
        } else if !self.scalar.is_one() {
            write!(f, "{}*", self.scalar)?;
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|(s, e)| if *e == 1 { s.clone() } else { format!("{s}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A base given only through a presentation of its divisor group: named
/// primes, named invertible functions with their principal divisors, and the
/// action of the real structure on both.
///
/// Nothing here checks that the presentation comes from an actual variety;
/// the declared data is trusted beyond the consistency conditions verified
/// in [`PresentedBase::new`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedBase {
    primes: Vec<String>,
    relations: BTreeMap<String, BTreeMap<String, i64>>,
    tau_primes: BTreeMap<String, String>,
    tau_functions: BTreeMap<String, FunctionWord>,
}

impl PresentedBase {
    /// Validates and builds a presentation. Primes missing from `tau_primes`
    /// and functions missing from `tau_functions` are taken as fixed by the
    /// real structure.
    pub fn new(
        primes: Vec<String>,
        relations: BTreeMap<String, BTreeMap<String, i64>>,
        tau_primes: BTreeMap<String, String>,
        tau_functions: BTreeMap<String, FunctionWord>,
    ) -> Result<Self, GeometryError> {
        let declared: BTreeSet<&String> = primes.iter().collect();
        if declared.len() != primes.len() {
            return Err(GeometryError::InvalidPresentation("duplicate prime".into()));
        }
        for (g, rel) in &relations {
            if declared.contains(g) {
                return Err(GeometryError::InvalidPresentation(format!("{g} is both a prime and a function")));
            }
            if let Some(p) = rel.keys().find(|p| !declared.contains(p)) {
                return Err(GeometryError::UndeclaredSymbol(p.clone()));
            }
        }
        for (p, q) in &tau_primes {
            for s in [p, q] {
                if !declared.contains(s) {
                    return Err(GeometryError::UndeclaredSymbol(s.clone()));
                }
            }
        }
        let base = PresentedBase {
            primes,
            relations: relations
                .into_iter()
                .map(|(g, mut rel)| {
                    rel.retain(|_, e| *e != 0);
                    (g, rel)
                })
                .collect(),
            tau_primes,
            tau_functions,
        };
        for p in &base.primes {
            let q = base.tau_prime(p);
            if base.tau_prime(&q) != *p {
                return Err(GeometryError::InvalidPresentation(format!("tau is not an involution on primes at {p}")));
            }
        }
        for (g, img) in &base.tau_functions {
            if !base.relations.contains_key(g) {
                return Err(GeometryError::UndeclaredSymbol(g.clone()));
            }
            if let Some((s, _)) = img.exponents().find(|(s, _)| !base.relations.contains_key(*s)) {
                return Err(GeometryError::UndeclaredSymbol(s.clone()));
            }
            if img.scalar.is_zero() {
                return Err(GeometryError::InvalidPresentation(format!("tau image of {g} is zero")));
            }
        }
        for g in base.relations.keys() {
            let w = FunctionWord::symbol(g.clone());
            let lhs = base.pullback_divisor(&base.div_word(&w)?);
            let rhs = base.div_word(&base.tau_word(&w))?;
            if lhs != rhs {
                return Err(GeometryError::InvalidPresentation(format!(
                    "tau*div({g}) = {lhs} but div(tau*{g}) = {rhs}"
                )));
            }
            if base.tau_word(&base.tau_word(&w)) != w {
                return Err(GeometryError::InvalidPresentation(format!("tau is not an involution on {g}")));
            }
        }
        Ok(base)
    }

    /// The quadric `uv = (1−z)(1+z)` with real structure `u ↔ v`, i.e. the
    /// real sphere. Primes: `D_u = {u = 1−z = 0}`, `D_v = {v = 1−z = 0}`,
    /// `D_u' = {u = 1+z = 0}`, `D_v' = {v = 1+z = 0}`. Functions `u`, `v`,
    /// `oneMinusZ`, `onePlusZ`.
    pub fn sphere() -> Self {
        let rel = |pairs: &[(&str, i64)]| pairs.iter().map(|(p, e)| (p.to_string(), *e)).collect();
        let relations = BTreeMap::from([
            ("u".to_string(), rel(&[("D_u", 1), ("D_u'", 1)])),
            ("v".to_string(), rel(&[("D_v", 1), ("D_v'", 1)])),
            ("oneMinusZ".to_string(), rel(&[("D_u", 1), ("D_v", 1)])),
            ("onePlusZ".to_string(), rel(&[("D_u'", 1), ("D_v'", 1)])),
        ]);
        let swap = |a: &str, b: &str| [(a.to_string(), b.to_string()), (b.to_string(), a.to_string())];
        let tau_primes = swap("D_u", "D_v").into_iter().chain(swap("D_u'", "D_v'")).collect();
        let tau_functions = BTreeMap::from([
            ("u".to_string(), FunctionWord::symbol("v")),
            ("v".to_string(), FunctionWord::symbol("u")),
        ]);
        let primes = ["D_u", "D_v", "D_u'", "D_v'"].map(String::from).to_vec();
        Self::new(primes, relations, tau_primes, tau_functions).expect("sphere presentation is consistent")
    }

    /// Same presentation with every principal divisor negated.
    pub fn with_negated_relations(&self) -> Result<Self, GeometryError> {
        let relations = self
            .relations
            .iter()
            .map(|(g, rel)| (g.clone(), rel.iter().map(|(p, e)| (p.clone(), -e)).collect()))
            .collect();
        Self::new(self.primes.clone(), relations, self.tau_primes.clone(), self.tau_functions.clone())
    }

    pub fn primes(&self) -> &[String] {
        &self.primes
    }

    pub fn functions(&self) -> impl Iterator<Item = &String> {
        self.relations.keys()
    }

    pub fn relation(&self, g: &str) -> Option<&BTreeMap<String, i64>> {
        self.relations.get(g)
    }

    pub fn declared_tau_primes(&self) -> &BTreeMap<String, String> {
        &self.tau_primes
    }

    pub fn declared_tau_functions(&self) -> &BTreeMap<String, FunctionWord> {
        &self.tau_functions
    }

    pub fn has_prime(&self, p: &str) -> bool {
        self.primes.iter().any(|q| q == p)
    }

    pub fn has_function(&self, g: &str) -> bool {
        self.relations.contains_key(g)
    }

    pub fn tau_prime(&self, p: &str) -> String {
        self.tau_primes.get(p).cloned().unwrap_or_else(|| p.to_string())
    }

    /// `τ*` on words: scalars are rational, hence fixed.
    pub fn tau_word(&self, w: &FunctionWord) -> FunctionWord {
        let mut out = FunctionWord::constant(w.scalar.clone());
        for (g, e) in w.exponents() {
            let img = self.tau_functions.get(g).cloned().unwrap_or_else(|| FunctionWord::symbol(g.clone()));
            out = out.mul(&img.pow(*e).expect("tau images are nonzero"));
        }
        out
    }

    pub fn div_word(&self, w: &FunctionWord) -> Result<WeilQDivisor, GeometryError> {
        if w.scalar.is_zero() {
            return Err(GeometryError::ZeroFunction);
        }
        let mut d = WeilQDivisor::zero();
        for (g, e) in w.exponents() {
            let rel = self.relations.get(g).ok_or_else(|| GeometryError::UndeclaredSymbol(g.clone()))?;
            for (p, c) in rel {
                d.add_term(PrimeDivisor::Named(p.clone()), int(c * e));
            }
        }
        Ok(d)
    }

    pub fn pullback_divisor(&self, d: &WeilQDivisor) -> WeilQDivisor {
        d.map_primes(|p| match p {
            PrimeDivisor::Named(s) => PrimeDivisor::Named(self.tau_prime(s)),
            other => other.clone(),
        })
    }

    pub fn is_tau_invariant(&self, w: &FunctionWord) -> bool {
        self.tau_word(w) == *w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_relations() {
        let s = PresentedBase::sphere();
        let d = s.div_word(&FunctionWord::symbol("oneMinusZ")).unwrap();
        let expected = WeilQDivisor::from_terms([
            (PrimeDivisor::named("D_u"), int(1)),
            (PrimeDivisor::named("D_v"), int(1)),
        ]);
        assert_eq!(d, expected);
        assert_eq!(
            s.pullback_divisor(&WeilQDivisor::single(PrimeDivisor::named("D_u"), int(1))),
            WeilQDivisor::single(PrimeDivisor::named("D_v"), int(1))
        );
        // uv = (1-z)(1+z): both sides have the same divisor
        let uv = FunctionWord::symbol("u").mul(&FunctionWord::symbol("v"));
        let zz = FunctionWord::symbol("oneMinusZ").mul(&FunctionWord::symbol("onePlusZ"));
        assert_eq!(s.div_word(&uv).unwrap(), s.div_word(&zz).unwrap());
        assert!(s.is_tau_invariant(&uv));
        assert!(!s.is_tau_invariant(&FunctionWord::symbol("u")));
    }

    #[test]
    fn inconsistent_tau_rejected() {
        let s = PresentedBase::sphere();
        let mut tf = s.declared_tau_functions().clone();
        tf.insert("oneMinusZ".into(), FunctionWord::symbol("onePlusZ"));
        tf.insert("onePlusZ".into(), FunctionWord::symbol("oneMinusZ"));
        let rels = s.functions().map(|g| (g.clone(), s.relation(g).unwrap().clone())).collect();
        let r = PresentedBase::new(s.primes().to_vec(), rels, s.declared_tau_primes().clone(), tf);
        assert!(matches!(r, Err(GeometryError::InvalidPresentation(_))));
    }

    #[test]
    fn word_display() {
        let w = FunctionWord::from_parts(int(-1), [("u".to_string(), 2), ("v".to_string(), -1)]);
        assert_eq!(w.to_string(), "-u^2*v^-1");
        assert_eq!(w.pow(2).unwrap().to_string(), "u^4*v^-2");
    }
}
