use num_traits::{One, Signed, Zero};

use super::GradedError;
use crate::arith::{int, rat, sum_of_two_squares, GaussianRational, MPoly, Rational, RationalFunction};

/// The two real forms of `G_m` over the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveClass {
    /// `x² + y² − 1 = 0`
    Circle,
    /// `u² + v² + 1 = 0`
    ImaginaryCircle,
}

impl std::fmt::Display for CurveClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveClass::Circle => write!(f, "circle"),
            CurveClass::ImaginaryCircle => write!(f, "imaginary-circle"),
        }
    }
}

/// Invariant generators of `C[z, z⁻¹]` under `σ*(z) = h/z` (coefficients
/// conjugated), and the relation they satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointPresentation {
    pub h: Rational,
    pub class: CurveClass,
    pub names: [&'static str; 2],
    pub generators: [RationalFunction; 2],
    /// `x² + y² − h` (resp. `u² + v² − h`), satisfied by the generators.
    pub raw_relation: MPoly,
    /// `x² + y² − 1` or `u² + v² + 1`, reached from the raw relation by
    /// scaling both generators by `1/√|h|`.
    pub relation: MPoly,
    /// `λ ∈ Q(i)` with `λλ̄ = |h|` when one exists; `z ↦ z/λ` then turns the
    /// involution into `z ↦ ±1/z` over `Q`.
    pub rescaling: Option<GaussianRational>,
    pub verified: bool,
}

fn sigma(h: &Rational, f: &RationalFunction) -> RationalFunction {
    f.conj().compose_scaled_inverse(&GaussianRational::real(h.clone()))
}

fn eval2(p: &MPoly, x: &RationalFunction, y: &RationalFunction) -> RationalFunction {
    let mut acc = RationalFunction::zero();
    for (m, c) in p.terms() {
        let term = &(&x.pow(i64::from(m.0[0])).expect("nonzero") * &y.pow(i64::from(m.0[1])).expect("nonzero"))
            * &RationalFunction::constant(GaussianRational::real(c.clone()));
        acc = &acc + &term;
    }
    acc
}

fn sum_of_squares_minus(c: Rational) -> MPoly {
    let x = MPoly::var(2, 0);
    let y = MPoly::var(2, 1);
    &(&(&x * &x) + &(&y * &y)) - &MPoly::constant(2, c)
}

/// `½(z + h/z)` and `(1/2i)(z − h/z)`, both fixed by `σ*`. For `h = −k`
/// these are `u = ½(z − k/z)` and `v = (1/2i)(z + k/z)`.
fn invariants(h: &Rational) -> [RationalFunction; 2] {
    let z = RationalFunction::var();
    let h_over_z = &RationalFunction::constant(GaussianRational::real(h.clone())) * &z.inv().expect("z is nonzero");
    let half = GaussianRational::real(rat(1, 2));
    let half_i_inv = GaussianRational::new(int(0), rat(-1, 2));
    [(&z + &h_over_z).scale(&half), (&z - &h_over_z).scale(&half_i_inv)]
}

/// Checks `raw(x, y) = |h|·N(x/√|h|, y/√|h|)` as polynomials; every term of
/// `N` has even degree, so the scaling stays rational.
fn scaled_relation_matches(raw: &MPoly, normalized: &MPoly, abs_h: &Rational) -> bool {
    let mut rebuilt = MPoly::zero(2);
    for (m, c) in normalized.terms() {
        let deg = m.degree();
        if deg % 2 == 1 {
            return false;
        }
        let k = 1 - i64::from(deg / 2);
        let factor = if k >= 0 {
            num_traits::pow(abs_h.clone(), k as usize)
        } else {
            num_traits::pow(abs_h.recip(), (-k) as usize)
        };
        rebuilt = &rebuilt + &MPoly::monomial(m.0.clone(), c * factor);
    }
    rebuilt == *raw
}

pub fn point_invariants(h: &Rational) -> Result<PointPresentation, GradedError> {
    if h.is_zero() {
        return Err(GradedError::ZeroH);
    }
    let class = if h.is_positive() { CurveClass::Circle } else { CurveClass::ImaginaryCircle };
    let names = match class {
        CurveClass::Circle => ["x", "y"],
        CurveClass::ImaginaryCircle => ["u", "v"],
    };
    let generators = invariants(h);
    let raw_relation = sum_of_squares_minus(h.clone());
    let sign = if h.is_positive() { Rational::one() } else { -Rational::one() };
    let relation = sum_of_squares_minus(sign.clone());

    let mut verified = generators.iter().all(|g| sigma(h, g) == *g);
    verified &= eval2(&raw_relation, &generators[0], &generators[1]).is_zero();
    verified &= scaled_relation_matches(&raw_relation, &relation, &h.abs());

    let rescaling = sum_of_two_squares(&h.abs()).map(|(a, b)| GaussianRational::new(a, b));
    if rescaling.is_some() {
        // after z ↦ z/λ the involution is z ↦ ±1/z and the normalized
        // relation holds on the nose
        let unit_gens = invariants(&sign);
        verified &= unit_gens.iter().all(|g| sigma(&sign, g) == *g);
        verified &= eval2(&relation, &unit_gens[0], &unit_gens[1]).is_zero();
    }
    Ok(PointPresentation { h: h.clone(), class, names, generators, raw_relation, relation, rescaling, verified })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circles() {
        let p = point_invariants(&int(1)).unwrap();
        assert!(p.verified);
        assert_eq!(p.class, CurveClass::Circle);
        assert_eq!(p.relation.display_with(&["x", "y"]).to_string(), "x^2+y^2-1");
        let q = point_invariants(&int(-1)).unwrap();
        assert!(q.verified);
        assert_eq!(q.relation.display_with(&["u", "v"]).to_string(), "u^2+v^2+1");
        let r = point_invariants(&int(7)).unwrap();
        assert!(r.verified && r.rescaling.is_none());
        let s = point_invariants(&int(4)).unwrap();
        assert_eq!(s.rescaling.map(|l| l.norm()), Some(int(4)));
        assert!(point_invariants(&int(0)).is_err());
    }
}
