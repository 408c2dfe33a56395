use num_traits::Zero;

use super::ClassifyError;
use crate::arith::{rational_root, Poly1, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MjEquiv {
    /// `P₂(z) ≡ c·P₁(c²z) mod z^r` with this rational `c`.
    Rational(Rational),
    /// A real `c` exists and is the real root `c = rho^(1/exponent)`, which
    /// is irrational.
    RealIrrational { exponent: u32, rho: Rational },
    /// No real `c ≠ 0` works.
    Inequivalent,
}

impl MjEquiv {
    pub fn is_equivalent(&self) -> bool {
        !matches!(self, MjEquiv::Inequivalent)
    }
}

fn rational_coeffs(p: &Poly1) -> Result<Vec<Rational>, ClassifyError> {
    p.coeffs()
        .iter()
        .map(|c| if c.is_real() { Ok(c.re.clone()) } else { Err(ClassifyError::NotRationalPolynomial(p.to_string())) })
        .collect()
}

/// Decides whether `P₂(z) ≡ c·P₁(c²z) (mod z^r)` for some real `c ≠ 0`.
///
/// Coefficientwise the congruence reads `P₂ₖ = c^{2k+1}·P₁ₖ` for `k < r`.
/// The lowest `k₀` with `P₁ₖ₀ ≠ 0` fixes `c^e = ρ` with `e = 2k₀+1` odd, so
/// `c` is the unique real `e`-th root of `ρ`. The remaining equations are
/// checked after raising to the `e`-th power, which is injective on `R`.
pub fn mj_equiv(p1: &Poly1, p2: &Poly1, r: u32) -> Result<MjEquiv, ClassifyError> {
    let a = rational_coeffs(p1)?;
    let b = rational_coeffs(p2)?;
    let coeff = |v: &[Rational], k: usize| v.get(k).cloned().unwrap_or_else(Rational::zero);
    let r = r as usize;
    let Some(k0) = (0..r).find(|&k| !coeff(&a, k).is_zero()) else {
        let all_zero = (0..r).all(|k| coeff(&b, k).is_zero());
        return Ok(if all_zero { MjEquiv::Rational(Rational::from_integer(1.into())) } else { MjEquiv::Inequivalent });
    };
    if (0..k0).any(|k| !coeff(&b, k).is_zero()) {
        return Ok(MjEquiv::Inequivalent);
    }
    let rho = coeff(&b, k0) / coeff(&a, k0);
    if rho.is_zero() {
        return Ok(MjEquiv::Inequivalent);
    }
    let e = (2 * k0 + 1) as u32;
    for k in k0 + 1..r {
        let (ak, bk) = (coeff(&a, k), coeff(&b, k));
        let ok = if ak.is_zero() {
            bk.is_zero()
        } else {
            num_traits::pow(&bk / &ak, e as usize) == num_traits::pow(rho.clone(), 2 * k + 1)
        };
        if !ok {
            return Ok(MjEquiv::Inequivalent);
        }
    }
    Ok(match rational_root(&rho, e) {
        Some(c) => MjEquiv::Rational(c),
        None => MjEquiv::RealIrrational { exponent: e, rho },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn poly(c: &[i64]) -> Poly1 {
        Poly1::from_rationals(c.iter().map(|x| int(*x)).collect())
    }

    #[test]
    fn small_cases() {
        assert_eq!(mj_equiv(&poly(&[1, 1]), &poly(&[1, 1]), 2).unwrap(), MjEquiv::Rational(int(1)));
        assert_eq!(mj_equiv(&poly(&[1]), &poly(&[2]), 1).unwrap(), MjEquiv::Rational(int(2)));
        assert_eq!(mj_equiv(&poly(&[1, 1]), &poly(&[1, -1]), 2).unwrap(), MjEquiv::Inequivalent);
        assert_eq!(mj_equiv(&poly(&[1]), &poly(&[3]), 1).unwrap(), MjEquiv::Rational(int(3)));
        assert_eq!(
            mj_equiv(&poly(&[0, 1]), &poly(&[0, 2]), 2).unwrap(),
            MjEquiv::RealIrrational { exponent: 3, rho: int(2) }
        );
        assert_eq!(mj_equiv(&poly(&[0, 1]), &poly(&[0, 8]), 2).unwrap(), MjEquiv::Rational(int(2)));
        assert_eq!(mj_equiv(&poly(&[0, 1]), &poly(&[0, 1]), 1).unwrap(), MjEquiv::Rational(int(1)));
    }
}
