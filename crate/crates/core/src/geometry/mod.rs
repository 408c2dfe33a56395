//! Base varieties with real structure, prime divisors and Weil Q-divisors.
//!
//! Three shapes of base are supported: a point (`Spec C` with complex
//! conjugation), the affine line with a real structure `z ↦ a·z̄ + b`, and a
//! base known only through a presentation of its divisor group.

mod curve;
mod divisor;
mod presented;

pub use curve::{Affine, CurveBase};
pub use divisor::{div_leq, round_down, PrimeDisplay, PrimeDivisor, WeilDisplay, WeilQDivisor};
pub use presented::{FunctionWord, PresentedBase};

use std::fmt;

use thiserror::Error;

use crate::arith::{GaussianRational, RationalFunction};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("factor {0} has no Q(i) roots and is not a declared prime")]
    UnfactoredInput(String),
    #[error("real structure z -> a*conj(z) + b is not an involution")]
    InvalidRealStructure,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("undeclared symbol {0}")]
    UndeclaredSymbol(String),
    #[error("{0} is not a valid opaque prime")]
    NotPrime(String),
    #[error("not an automorphism: leading coefficient is zero")]
    NotAutomorphism,
    #[error("the zero function has no divisor")]
    ZeroFunction,
    #[error("{0}")]
    WrongBase(String),
}

/// Rational function on a base: an element of `C(z)` on the line, a constant
/// on the point, a word in declared symbols on a presented base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseFunction {
    Rational(RationalFunction),
    Word(FunctionWord),
}

impl BaseFunction {
    pub fn constant(c: GaussianRational) -> Self {
        BaseFunction::Rational(RationalFunction::constant(c))
    }

    pub fn as_rational(&self) -> Option<&RationalFunction> {
        match self {
            BaseFunction::Rational(f) => Some(f),
            BaseFunction::Word(_) => None,
        }
    }

    pub fn as_word(&self) -> Option<&FunctionWord> {
        match self {
            BaseFunction::Word(w) => Some(w),
            BaseFunction::Rational(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    Point,
    Curve(CurveBase),
    Presented(PresentedBase),
}

impl Base {
    pub fn kind(&self) -> &'static str {
        match self {
            Base::Point => "point",
            Base::Curve(_) => "curve",
            Base::Presented(_) => "presented",
        }
    }

    /// Name of the coordinate used for printing functions and opaque primes.
    pub fn var(&self) -> &str {
        match self {
            Base::Curve(c) => c.var(),
            _ => "z",
        }
    }

    pub fn as_curve(&self) -> Option<&CurveBase> {
        match self {
            Base::Curve(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_presented(&self) -> Option<&PresentedBase> {
        match self {
            Base::Presented(p) => Some(p),
            _ => None,
        }
    }

    /// Checks that `f` has the shape this base expects.
    pub fn check_function(&self, f: &BaseFunction) -> Result<(), GeometryError> {
        match (self, f) {
            (Base::Point, BaseFunction::Rational(r)) if r.as_constant().is_some() => Ok(()),
            (Base::Point, _) => Err(GeometryError::WrongBase("functions on the point base are constants".into())),
            (Base::Curve(_), BaseFunction::Rational(_)) => Ok(()),
            (Base::Curve(_), BaseFunction::Word(_)) => {
                Err(GeometryError::WrongBase("function words need a presented base".into()))
            }
            (Base::Presented(_), BaseFunction::Word(_)) => Ok(()),
            (Base::Presented(_), BaseFunction::Rational(r)) => match r.as_constant() {
                Some(c) if c.is_real() => Ok(()),
                _ => Err(GeometryError::WrongBase("functions on a presented base are words".into())),
            },
        }
    }

    /// Reads a constant rational function as a word on a presented base.
    fn as_word(&self, f: &BaseFunction) -> Result<FunctionWord, GeometryError> {
        match f {
            BaseFunction::Word(w) => Ok(w.clone()),
            BaseFunction::Rational(r) => match r.as_constant() {
                Some(c) if c.is_real() => Ok(FunctionWord::constant(c.re)),
                _ => Err(GeometryError::WrongBase("functions on a presented base are words".into())),
            },
        }
    }

    pub fn check_prime(&self, p: &PrimeDivisor) -> Result<(), GeometryError> {
        match (self, p) {
            (Base::Curve(_), PrimeDivisor::Point(_)) => Ok(()),
            (Base::Curve(c), PrimeDivisor::Opaque(f)) => {
                if c.opaque_primes().any(|q| q == f) {
                    Ok(())
                } else {
                    Err(GeometryError::UndeclaredSymbol(p.display_in(c.var()).to_string()))
                }
            }
            (Base::Presented(pb), PrimeDivisor::Named(s)) => {
                if pb.has_prime(s) {
                    Ok(())
                } else {
                    Err(GeometryError::UndeclaredSymbol(s.clone()))
                }
            }
            (Base::Point, _) => Err(GeometryError::WrongBase("the point base has no prime divisors".into())),
            _ => Err(GeometryError::WrongBase(format!("prime {p} does not live on a {} base", self.kind()))),
        }
    }

    pub fn div_of_function(&self, f: &BaseFunction) -> Result<WeilQDivisor, GeometryError> {
        self.check_function(f)?;
        match (self, f) {
            (Base::Point, BaseFunction::Rational(r)) => {
                if r.is_zero() {
                    Err(GeometryError::ZeroFunction)
                } else {
                    Ok(WeilQDivisor::zero())
                }
            }
            (Base::Curve(c), BaseFunction::Rational(r)) => {
                if r.is_zero() {
                    return Err(GeometryError::ZeroFunction);
                }
                c.div_of(r)
            }
            (Base::Presented(p), _) => p.div_word(&self.as_word(f)?),
            _ => unreachable!("checked above"),
        }
    }

    pub fn pullback_real(&self, d: &WeilQDivisor) -> WeilQDivisor {
        match self {
            Base::Point => d.clone(),
            Base::Curve(c) => c.pullback_divisor(d),
            Base::Presented(p) => p.pullback_divisor(d),
        }
    }

    pub fn pullback_real_prime(&self, p: &PrimeDivisor) -> PrimeDivisor {
        match (self, p) {
            (Base::Curve(c), _) => c.tau_prime(p),
            (Base::Presented(pb), PrimeDivisor::Named(s)) => PrimeDivisor::Named(pb.tau_prime(s)),
            _ => p.clone(),
        }
    }

    pub fn pullback_real_function(&self, f: &BaseFunction) -> Result<BaseFunction, GeometryError> {
        self.check_function(f)?;
        Ok(match (self, f) {
            (Base::Point, BaseFunction::Rational(r)) => BaseFunction::Rational(r.conj()),
            (Base::Curve(c), BaseFunction::Rational(r)) => BaseFunction::Rational(c.tau_function(r)),
            (Base::Presented(p), _) => BaseFunction::Word(p.tau_word(&self.as_word(f)?)),
            _ => unreachable!("checked above"),
        })
    }

    pub fn is_tau_invariant(&self, f: &BaseFunction) -> Result<bool, GeometryError> {
        let g = self.pullback_real_function(f)?;
        Ok(self.functions_equal(f, &g)?)
    }

    pub fn functions_equal(&self, f: &BaseFunction, g: &BaseFunction) -> Result<bool, GeometryError> {
        match self {
            Base::Presented(_) => Ok(self.as_word(f)? == self.as_word(g)?),
            _ => match (f, g) {
                (BaseFunction::Rational(a), BaseFunction::Rational(b)) => Ok(a == b),
                _ => Err(GeometryError::WrongBase("function words need a presented base".into())),
            },
        }
    }

    pub fn mul_functions(&self, f: &BaseFunction, g: &BaseFunction) -> Result<BaseFunction, GeometryError> {
        match self {
            Base::Presented(_) => Ok(BaseFunction::Word(self.as_word(f)?.mul(&self.as_word(g)?))),
            _ => match (f, g) {
                (BaseFunction::Rational(a), BaseFunction::Rational(b)) => Ok(BaseFunction::Rational(a * b)),
                _ => Err(GeometryError::WrongBase("function words need a presented base".into())),
            },
        }
    }

    pub fn pow_function(&self, f: &BaseFunction, e: i64) -> Result<BaseFunction, GeometryError> {
        match self {
            Base::Presented(_) => {
                self.as_word(f)?.pow(e).map(BaseFunction::Word).ok_or(GeometryError::ZeroFunction)
            }
            _ => match f {
                BaseFunction::Rational(a) => a.pow(e).map(BaseFunction::Rational).ok_or(GeometryError::ZeroFunction),
                BaseFunction::Word(_) => Err(GeometryError::WrongBase("function words need a presented base".into())),
            },
        }
    }

    pub fn display_function<'a>(&'a self, f: &'a BaseFunction) -> FunctionDisplay<'a> {
        FunctionDisplay { f, var: self.var() }
    }
}

pub struct FunctionDisplay<'a> {
    f: &'a BaseFunction,
    var: &'a str,
}

impl fmt::Display for FunctionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.f {
            BaseFunction::Rational(r) => write!(f, "{}", r.display_in(self.var)),
            BaseFunction::Word(w) => write!(f, "{w}"),
        }
    }
}

/// Principal divisor of `f` on `base`.
pub fn div_of_function(base: &Base, f: &BaseFunction) -> Result<WeilQDivisor, GeometryError> {
    base.div_of_function(f)
}

/// `τ*D`.
pub fn pullback_real(base: &Base, d: &WeilQDivisor) -> WeilQDivisor {
    base.pullback_real(d)
}
