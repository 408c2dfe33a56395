use std::collections::BTreeMap;

use super::GradedSlice;
use crate::arith::{GaussianRational, MPoly, Poly1, RationalFunction};

/// Homogeneous element `value·s^degree` of the graded ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub value: RationalFunction,
}

/// A candidate presentation by homogeneous generators and relations.
/// `leading` lists, per relation, the monomial it rewrites; monomials not
/// divisible by any of them are the standard monomials of the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<MPoly>,
    pub leading: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresentationReport {
    /// Each generator lies in its graded piece.
    pub membership: bool,
    /// Each relation vanishes after substitution.
    pub relations_vanish: bool,
    /// A degree-zero monomial is a coordinate on the line, and in every
    /// tested degree the monomials generate the piece over `A₀`.
    pub generates: bool,
    /// Standard monomials are linearly independent in every tested degree,
    /// so no relation is missing.
    pub standard_independent: bool,
}

impl PresentationReport {
    pub fn ok(&self) -> bool {
        self.membership && self.relations_vanish && self.generates && self.standard_independent
    }
}

impl Presentation {
    /// `s` in degree 1 and `z·s⁻¹` in degree −1, no relations.
    pub fn gutwirth() -> Self {
        Presentation {
            generators: vec![
                Generator { name: "s".into(), degree: 1, value: RationalFunction::one() },
                Generator { name: "t".into(), degree: -1, value: RationalFunction::var() },
            ],
            relations: Vec::new(),
            leading: Vec::new(),
        }
    }

    /// `u = P·s⁻¹`, `v = s`, `w = z` with the single relation `uv − P(w)`.
    /// Needs `P` with rational coefficients.
    pub fn conic_bundle(p: &Poly1) -> Option<Self> {
        let coeffs: Option<Vec<_>> = p.coeffs().iter().map(|c| c.is_real().then(|| c.re.clone())).collect();
        let w = MPoly::var(3, 2);
        let uv = &MPoly::var(3, 0) * &MPoly::var(3, 1);
        let relation = &uv - &w.eval_univariate(&coeffs?);
        Some(Presentation {
            generators: vec![
                Generator { name: "u".into(), degree: -1, value: RationalFunction::from_poly(p.clone()) },
                Generator { name: "v".into(), degree: 1, value: RationalFunction::one() },
                Generator { name: "w".into(), degree: 0, value: RationalFunction::var() },
            ],
            relations: vec![relation],
            leading: vec![vec![1, 1, 0]],
        })
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    fn degree_of(&self, e: &[u32]) -> i64 {
        e.iter().zip(&self.generators).map(|(x, g)| i64::from(*x) * g.degree).sum()
    }

    fn value_of(&self, e: &[u32]) -> RationalFunction {
        let mut v = RationalFunction::one();
        for (x, g) in e.iter().zip(&self.generators) {
            v = &v * &g.value.pow(i64::from(*x)).expect("generator values are nonzero");
        }
        v
    }

    fn monomials(&self, max_total: u32) -> Vec<Vec<u32>> {
        fn rec(idx: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if idx == cur.len() {
                out.push(cur.clone());
                return;
            }
            for x in 0..=left {
                cur[idx] = x;
                rec(idx + 1, left - x, cur, out);
            }
            cur[idx] = 0;
        }
        let mut out = Vec::new();
        rec(0, max_total, &mut vec![0; self.generators.len()], &mut out);
        out
    }

    /// Checks the presentation against `slice` in degrees `|m| ≤ min(m_max,
    /// max_degree)`, using monomials of total exponent at most `max_total`.
    pub fn verify(&self, slice: &GradedSlice, max_degree: i64, max_total: u32) -> PresentationReport {
        let mut report = PresentationReport::default();
        let piece = |m: i64| slice.generator(m);

        report.membership = self.generators.iter().all(|g| {
            piece(g.degree).is_some_and(|gm| (&g.value / gm).as_polynomial().is_some())
        });
        if !report.membership {
            return report;
        }

        report.relations_vanish = self.relations.iter().all(|rel| {
            let mut by_degree: BTreeMap<i64, RationalFunction> = BTreeMap::new();
            for (m, c) in rel.terms() {
                let term = self.value_of(&m.0).scale(&GaussianRational::real(c.clone()));
                let slot = by_degree.entry(self.degree_of(&m.0)).or_insert_with(RationalFunction::zero);
                *slot = &*slot + &term;
            }
            by_degree.values().all(RationalFunction::is_zero)
        });

        let monos = self.monomials(max_total);
        let top = max_degree.min(slice.m_max());
        let coordinate = monos.iter().any(|e| {
            self.degree_of(e) == 0 && self.value_of(e).as_polynomial().is_some_and(|p| p.degree() == Some(1))
        });
        let mut generates = coordinate;
        let mut independent = true;
        for m in -top..=top {
            let gm = piece(m).expect("in range");
            let in_degree: Vec<&Vec<u32>> = monos.iter().filter(|e| self.degree_of(e) == m).collect();
            let mut gcd = Poly1::zero();
            for e in &in_degree {
                let p = (&self.value_of(e) / gm).as_polynomial().cloned().expect("products of members are members");
                gcd = gcd.gcd(&p);
            }
            generates &= gcd.is_one();
            let standard: Vec<Poly1> = in_degree
                .iter()
                .filter(|e| !self.leading.iter().any(|l| l.iter().zip(e.iter()).all(|(a, b)| a <= b)))
                .map(|e| (&self.value_of(e) / gm).as_polynomial().cloned().expect("member"))
                .collect();
            independent &= rank(&standard) == standard.len();
        }
        report.generates = generates;
        report.standard_independent = independent;
        report
    }
}

/// Rank over `Q(i)` of the coefficient vectors of `polys`.
fn rank(polys: &[Poly1]) -> usize {
    let width = polys.iter().filter_map(Poly1::degree).max().map_or(0, |d| d + 1);
    let mut rows: Vec<Vec<GaussianRational>> = polys.iter().map(|p| (0..width).map(|k| p.coeff(k)).collect()).collect();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inv().expect("pivot is nonzero");
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] * &inv;
                for c in col..width {
                    let delta = &factor * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - &delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_family() {
        let z = Poly1::var();
        let one = Poly1::one();
        assert_eq!(rank(&[z.clone(), one.clone(), &z + &one]), 2);
        assert_eq!(rank(&[]), 0);
    }
}
