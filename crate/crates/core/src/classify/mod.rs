//! Equivariant isomorphism of pairs, the sign obstruction in
//! `H² = (K*)^τ / norms`, point-base curves, and equivalence of the
//! Moser-Jauslin family.

mod equiv;
mod mj;

pub use crate::graded::CurveClass;
pub use equiv::{pair_equiv, real_forms, verify_witness, EquivDecision, IsoWitness, Obstruction, RealForms};
pub use mj::{mj_equiv, MjEquiv};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{GaussianRational, Rational};
use crate::geometry::GeometryError;
use crate::pairs::PairError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("constant {0} is not real")]
    NotReal(String),
    #[error("h must be nonzero")]
    ZeroH,
    #[error("support point {0} cannot be matched exactly")]
    UnresolvableSupport(String),
    #[error("automorphism family through a single point is undetermined")]
    OnePointFamily,
    #[error("pairs live on different bases")]
    DifferentBases,
    #[error("{0}")]
    UnsupportedBase(String),
    #[error("polynomial {0} does not have rational coefficients")]
    NotRationalPolynomial(String),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Class of a nonzero real constant in `R*/R₊ ≅ {±1}`.
pub fn h2_class(c: &GaussianRational) -> Result<i8, ClassifyError> {
    if !c.is_real() {
        return Err(ClassifyError::NotReal(c.to_string()));
    }
    if c.re.is_zero() {
        return Err(ClassifyError::ZeroH);
    }
    Ok(if c.re.is_positive() { 1 } else { -1 })
}

/// Over the point the pair is just `h ∈ R*`, and two values give isomorphic
/// curves iff they have the same sign.
pub fn classify_point_pair(h: &Rational) -> Result<CurveClass, ClassifyError> {
    if h.is_zero() {
        return Err(ClassifyError::ZeroH);
    }
    Ok(if h.is_positive() { CurveClass::Circle } else { CurveClass::ImaginaryCircle })
}
