use std::collections::BTreeMap;

use super::GradedModel;

/// The polynomial ring `C[x₁,…,x_n]` graded by integer weights of the
/// variables. `A_m` is spanned by the monomials of weight `m`, and is a
/// module over the invariant ring `A₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialAlgebra {
    weights: Vec<i64>,
    hilbert_basis: Vec<Vec<u32>>,
}

impl MonomialAlgebra {
    pub fn new(weights: Vec<i64>) -> Self {
        let mut alg = MonomialAlgebra { weights, hilbert_basis: Vec::new() };
        alg.hilbert_basis = alg.minimal_solutions(0);
        alg
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, e: &[u32]) -> i64 {
        e.iter().zip(&self.weights).map(|(x, w)| i64::from(*x) * w).sum()
    }

    /// Minimal generators of the weight-zero monoid.
    pub fn invariant_generators(&self) -> &[Vec<u32>] {
        &self.hilbert_basis
    }

    /// Minimal monomial generators of `A_m` as an `A₀`-module.
    pub fn module_generators(&self, m: i64) -> Vec<Vec<u32>> {
        if m == 0 {
            return vec![vec![0; self.weights.len()]];
        }
        self.minimal_solutions(m)
    }

    /// Componentwise-minimal nonzero exponent vectors of weight `m`.
    ///
    /// Ordering the unit steps of a solution so that partial sums stay in a
    /// window of width `|m| + W⁺ + W⁻` shows that a solution of larger total
    /// degree repeats a partial sum and so contains a weight-zero part. That
    /// bounds the search.
    fn minimal_solutions(&self, m: i64) -> Vec<Vec<u32>> {
        let w_pos: i64 = self.weights.iter().copied().filter(|w| *w > 0).max().unwrap_or(0);
        let w_neg: i64 = self.weights.iter().copied().filter(|w| *w < 0).map(|w| -w).max().unwrap_or(0);
        let bound = (m.abs() + w_pos + w_neg) as u32;
        let mut found: Vec<Vec<u32>> = Vec::new();
        let mut cur = vec![0u32; self.weights.len()];
        // Enumerate by increasing total degree so that minimality only needs
        // comparison against solutions already found.
        for total in 1..=bound {
            let mut batch = Vec::new();
            self.enumerate(0, total, m, &mut cur, &mut batch);
            for e in batch {
                let reducible = if m == 0 {
                    found.iter().any(|f| leq(f, &e))
                } else {
                    found.iter().any(|f| leq(f, &e)) || self.hilbert_basis.iter().any(|f| leq(f, &e))
                };
                if !reducible {
                    found.push(e);
                }
            }
        }
        found.sort();
        found
    }

    fn enumerate(&self, idx: usize, remaining: u32, target: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = self.weights.len();
        if idx + 1 == n {
            cur[idx] = remaining;
            if self.weight(cur) == target {
                out.push(cur.clone());
            }
            cur[idx] = 0;
            return;
        }
        for x in 0..=remaining {
            cur[idx] = x;
            self.enumerate(idx + 1, remaining - x, target, cur, out);
        }
        cur[idx] = 0;
    }

    /// Whether `e` is divisible by a product of `k` generators taken from
    /// `gens` (the quotient is then a weight-zero monomial).
    fn decomposes(e: &[u32], gens: &[Vec<u32>], k: u32, memo: &mut BTreeMap<(Vec<u32>, u32), bool>) -> bool {
        if k == 0 {
            return true;
        }
        if let Some(v) = memo.get(&(e.to_vec(), k)) {
            return *v;
        }
        let mut ok = false;
        for g in gens {
            if leq(g, e) {
                let rest: Vec<u32> = e.iter().zip(g).map(|(a, b)| a - b).collect();
                if Self::decomposes(&rest, gens, k - 1, memo) {
                    ok = true;
                    break;
                }
            }
        }
        memo.insert((e.to_vec(), k), ok);
        ok
    }

    /// Writes a monomial of weight `k·d` as `g₁⋯g_k·q` with `gᵢ` generators
    /// of `A_d` and `q` of weight zero, if possible.
    pub fn factor_through(&self, e: &[u32], d: i64, k: u32) -> Option<Vec<Vec<u32>>> {
        let gens = self.module_generators(d);
        let mut out = Vec::new();
        let mut rest = e.to_vec();
        let mut memo = BTreeMap::new();
        for left in (1..=k).rev() {
            let g = gens.iter().find(|g| {
                leq(g, &rest) && {
                    let r: Vec<u32> = rest.iter().zip(g.iter()).map(|(a, b)| a - b).collect();
                    Self::decomposes(&r, &gens, left - 1, &mut memo)
                }
            })?;
            rest = rest.iter().zip(g).map(|(a, b)| a - b).collect();
            out.push(g.clone());
        }
        out.push(rest);
        Some(out)
    }
}

fn leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl GradedModel for MonomialAlgebra {
    fn max_degree(&self) -> Option<i64> {
        None
    }

    fn generated_in(&self, d: i64, k: i64) -> bool {
        let sign = k.signum();
        let gens = self.module_generators(sign * d);
        let target = self.module_generators(k * d);
        let mut memo = BTreeMap::new();
        target.iter().all(|e| Self::decomposes(e, &gens, k.unsigned_abs() as u32, &mut memo))
    }
}
