//! Graded coordinate rings `A = ⊕ Γ(Y, O(𝒟(m)))` over the line and the
//! point, with the real structure `σ* = ⊕ τ_m*`.

mod monomial;
mod point;
mod presentation;

pub use monomial::MonomialAlgebra;
pub use point::{point_invariants, CurveClass, PointPresentation};
pub use presentation::{Generator, Presentation, PresentationReport};

use thiserror::Error;

use crate::arith::{GaussianRational, Poly1, RationalFunction};
use crate::geometry::{Base, PrimeDivisor, WeilQDivisor};
use crate::pairs::PhsPair;

pub const DEFAULT_M_MAX: i64 = 12;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("{0}")]
    UnsupportedBase(String),
    #[error("involution check fails in degree {m}: {reason}")]
    InvolutionFails { m: i64, reason: String },
    #[error("superadditivity fails: g_{m}*g_{n}/g_{sum} is not a polynomial", sum = m + n)]
    Superadditivity { m: i64, n: i64 },
    #[error("no generation degree d with 2d <= {0}")]
    BoundExceeded(i64),
    #[error("h must be nonzero")]
    ZeroH,
}

/// Monic `g` with `div(g) = −⌊E⌋`, so that `Γ(A¹, O(E)) = g·C[z]`.
pub fn section_generator(base: &Base, e: &WeilQDivisor) -> Result<RationalFunction, GradedError> {
    match base {
        Base::Point => Ok(RationalFunction::one()),
        Base::Curve(_) => {
            let mut g = RationalFunction::one();
            for (p, c) in e.round_down().terms() {
                let factor = match p {
                    PrimeDivisor::Point(z) => Poly1::linear(z),
                    PrimeDivisor::Opaque(q) => q.clone(),
                    PrimeDivisor::Named(_) => {
                        return Err(GradedError::UnsupportedBase("named primes need a presented base".into()))
                    }
                };
                let k = -crate::arith::to_i64(c).expect("integral after round-down");
                g = &g * &RationalFunction::from_poly(factor).pow(k).expect("nonzero factor");
            }
            Ok(g)
        }
        Base::Presented(_) => {
            Err(GradedError::UnsupportedBase("section modules need the line or the point as base".into()))
        }
    }
}

/// The pieces `A_m = g_m·C[z]` (or `C` on the point) for `|m| ≤ m_max`.
/// A piece is `None` only in artificially damaged slices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSlice {
    m_max: i64,
    pieces: Vec<Option<RationalFunction>>,
    pair: PhsPair,
}

impl GradedSlice {
    pub fn m_max(&self) -> i64 {
        self.m_max
    }

    pub fn pair(&self) -> &PhsPair {
        &self.pair
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        -self.m_max..=self.m_max
    }

    pub fn generator(&self, m: i64) -> Option<&RationalFunction> {
        if m.abs() > self.m_max {
            return None;
        }
        self.pieces[(m + self.m_max) as usize].as_ref()
    }

    /// Copy with the piece in degree `m` replaced by zero.
    pub fn with_zero_piece(&self, m: i64) -> Self {
        let mut out = self.clone();
        if m.abs() <= self.m_max {
            out.pieces[(m + self.m_max) as usize] = None;
        }
        out
    }
}

/// `τ_m*: g ↦ h^m·τ*g`, with the images of the slice generators and the
/// unit `h^m·τ*(g_m) / g_{−m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionData {
    base: Base,
    h: RationalFunction,
    /// `h^m` for `|m| ≤ m_max`
    h_powers: Vec<RationalFunction>,
    m_max: i64,
    images: Vec<RationalFunction>,
    units: Vec<GaussianRational>,
}

impl InvolutionData {
    pub fn h(&self) -> &RationalFunction {
        &self.h
    }

    pub fn apply(&self, m: i64, g: &RationalFunction) -> RationalFunction {
        match self.h_powers.get((m + self.m_max) as usize) {
            Some(hm) if m.abs() <= self.m_max => tau_with(&self.base, hm, g),
            _ => tau_with(&self.base, &self.h.pow(m).expect("h is nonzero"), g),
        }
    }

    pub fn image(&self, m: i64) -> Option<&RationalFunction> {
        self.images.get((m + self.m_max) as usize)
    }

    pub fn unit(&self, m: i64) -> Option<&GaussianRational> {
        self.units.get((m + self.m_max) as usize)
    }
}

/// `τ_m*(g) = h^m·τ*g`, given `h^m`.
fn tau_with(base: &Base, hm: &RationalFunction, g: &RationalFunction) -> RationalFunction {
    let tg = match base {
        Base::Curve(c) => c.tau_function(g),
        _ => g.conj(),
    };
    hm * &tg
}

fn curve_or_point(pair: &PhsPair) -> Result<(), GradedError> {
    match pair.base() {
        Base::Presented(_) => Err(GradedError::UnsupportedBase("graded rings need the line or the point as base".into())),
        _ => Ok(()),
    }
}

/// Builds the slice and the involution data, checking `σ*(A_m) = A_{−m}`,
/// `τ_{−m}*∘τ_m* = id`, and superadditivity of the generators.
pub fn build_graded(pair: &PhsPair, m_max: i64) -> Result<(GradedSlice, InvolutionData), GradedError> {
    curve_or_point(pair)?;
    let base = pair.base();
    let h = pair.h().as_rational().expect("line and point functions are rational").clone();
    if h.is_zero() {
        return Err(GradedError::ZeroH);
    }
    let mut pieces = Vec::new();
    for m in -m_max..=m_max {
        pieces.push(Some(section_generator(base, &pair.divisor().eval(m))?));
    }
    let slice = GradedSlice { m_max, pieces, pair: pair.clone() };
    let g = |m: i64| slice.generator(m).expect("every piece is present");

    let h_powers: Vec<RationalFunction> = (-m_max..=m_max).map(|m| h.pow(m).expect("h is nonzero")).collect();
    let hp = |m: i64| &h_powers[(m + m_max) as usize];
    let tau_m = |m: i64, g: &RationalFunction| tau_with(base, hp(m), g);
    let probe = &RationalFunction::var() + &RationalFunction::one();
    let mut images = Vec::new();
    let mut units = Vec::new();
    for m in -m_max..=m_max {
        let img = tau_m(m, g(m));
        let unit = (&img / g(-m)).as_constant().filter(|c| !c.is_zero()).ok_or_else(|| {
            GradedError::InvolutionFails { m, reason: format!("h^m*tau*(g_m)/g_(-m) = {} is not a unit", &img / g(-m)) }
        })?;
        for elem in [g(m).clone(), g(m) * &probe] {
            let back = tau_m(-m, &tau_m(m, &elem));
            if back != elem {
                return Err(GradedError::InvolutionFails { m, reason: "tau_(-m)* o tau_m* is not the identity".into() });
            }
        }
        images.push(img);
        units.push(unit);
    }
    for m in -m_max..=m_max {
        for n in -m_max..=m_max {
            if (m + n).abs() > m_max {
                continue;
            }
            if (&(g(m) * g(n)) / g(m + n)).as_polynomial().is_none() {
                return Err(GradedError::Superadditivity { m, n });
            }
        }
    }
    let inv = InvolutionData { base: base.clone(), h, h_powers, m_max, images, units };
    Ok((slice, inv))
}

/// Every piece in range is nonzero.
pub fn hyperbolicity_check(slice: &GradedSlice) -> bool {
    slice.pieces.iter().all(|p| p.as_ref().is_some_and(|g| !g.is_zero()))
}

/// Graded algebras for which generation of the Veronese-type subring
/// `⊕ A_{dk}` by `A_{±d}` can be decided degree by degree.
pub trait GradedModel {
    /// Largest `|m|` the model can answer questions about.
    fn max_degree(&self) -> Option<i64>;

    /// Whether `A_{kd} = A_{±d}^{|k|}·A₀`, the sign following `k`.
    fn generated_in(&self, d: i64, k: i64) -> bool;
}

impl GradedModel for GradedSlice {
    fn max_degree(&self) -> Option<i64> {
        Some(self.m_max)
    }

    fn generated_in(&self, d: i64, k: i64) -> bool {
        let sign = k.signum();
        match (self.generator(k * d), self.generator(sign * d)) {
            (Some(target), Some(g)) => {
                // products of more copies of A_d and A_{-d} already lie in A_d^k·A₀
                g.pow(k.abs()).is_some_and(|p| p == *target)
            }
            _ => false,
        }
    }
}

/// Smallest `d` such that `⊕_k A_{dk}` is generated by `A_{±d}`, checked for
/// all `|kd| ≤ bound`. Products `A_d^{k+j}·A_{−d}^j` lie in `A_d^k·A₀`, so
/// only pure powers need testing. At least `k = 2` must be checkable, so
/// candidates stop at `d = bound/2`.
pub fn generation_degree<M: GradedModel + ?Sized>(model: &M, bound: i64) -> Result<i64, GradedError> {
    let bound = model.max_degree().map_or(bound, |top| bound.min(top));
    for d in 1..=bound / 2 {
        let kmax = bound / d;
        if (1..=kmax).all(|k| model.generated_in(d, k) && model.generated_in(d, -k)) {
            return Ok(d);
        }
    }
    Err(GradedError::BoundExceeded(bound))
}

/// Generation degree of the ring of a pair on the line or the point.
pub fn pair_generation_degree(pair: &PhsPair, bound: i64) -> Result<i64, GradedError> {
    let (slice, _) = build_graded(pair, bound)?;
    generation_degree(&slice, bound)
}

/// Generator of `A_d·A_{−d} ⊂ A₀ = C[z]`, made monic.
pub fn ah_center_ideal(slice: &GradedSlice, d: i64) -> Result<Vec<Poly1>, GradedError> {
    let (Some(gp), Some(gm)) = (slice.generator(d), slice.generator(-d)) else {
        return Err(GradedError::BoundExceeded(slice.m_max));
    };
    let prod = gp * gm;
    let p = prod.as_polynomial().expect("A_d*A_(-d) lies in A_0").monic();
    Ok(vec![p])
}
