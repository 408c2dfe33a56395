//! Small dense integer and rational matrices.

use num_traits::{Signed, Zero};

use crate::arith::{int, Rational};

pub type IMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &IMatrix, b: &IMatrix) -> IMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn mat_vec(a: &IMatrix, v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| num_integer::gcd(g, *x))
}

/// Divides by the gcd of the entries; zero stays zero.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_vec(v);
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn det(a: &IMatrix) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|x| i128::from(*x)).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else { return 0 };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    i64::try_from(sign * m[n - 1][n - 1]).expect("determinant fits in i64")
}

/// Smith normal form: returns `(U, S, V)` with `U·A·V = S`, `U` and `V`
/// unimodular, and `S` diagonal with nonnegative entries each dividing the
/// next.
pub fn smith_normal_form(a: &IMatrix) -> (IMatrix, IMatrix, IMatrix) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut s = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block becomes the pivot
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| s[i][j] != 0)
            .min_by_key(|&(i, j)| (s[i][j].abs(), i, j));
        let Some((pi, pj)) = pivot else { break };
        s.swap(t, pi);
        u.swap(t, pi);
        for row in s.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = s[i][t].div_euclid(s[t][t]);
            if q != 0 {
                for j in 0..cols {
                    s[i][j] -= q * s[t][j];
                }
                for j in 0..rows {
                    u[i][j] -= q * u[t][j];
                }
            }
            clean &= s[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = s[t][j].div_euclid(s[t][t]);
            if q != 0 {
                for i in 0..rows {
                    s[i][j] -= q * s[i][t];
                }
                for i in 0..cols {
                    v[i][j] -= q * v[i][t];
                }
            }
            clean &= s[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // divisibility: fold an offending row into the pivot row and redo
        let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| s[i][j] % s[t][t] != 0));
        if let Some(i) = offending {
            for j in 0..cols {
                s[t][j] += s[i][j];
            }
            for j in 0..rows {
                u[t][j] += u[i][j];
            }
            continue;
        }
        if s[t][t] < 0 {
            for j in 0..cols {
                s[t][j] = -s[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
        t += 1;
    }
    (u, s, v)
}

/// Inverse of a unimodular matrix, via the adjugate-free route of solving
/// with rationals and checking integrality.
pub fn unimodular_inverse(a: &IMatrix) -> Option<IMatrix> {
    let n = a.len();
    let q: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect();
    let inv = rational_inverse(&q)?;
    inv.iter()
        .map(|r| r.iter().map(|x| if x.is_integer() { crate::arith::to_i64(x) } else { None }).collect())
        .collect::<Option<IMatrix>>()
        .filter(|m| m.len() == n)
}

pub fn rational_inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| int(i64::from(i == j))));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..2 * n {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Reduced row echelon form over `Q`; returns the pivot columns.
fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rational>> = vectors.iter().map(|v| v.iter().map(|x| int(*x)).collect()).collect();
    rref(&mut m).len()
}

/// Integral basis of the rational kernel `{x : Mx = 0}` (each vector made
/// primitive). `dim` is the number of columns, needed when `m` is empty.
pub fn kernel(m: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let mut q: Vec<Vec<Rational>> = m.iter().map(|v| v.iter().map(|x| int(*x)).collect()).collect();
    let pivots = rref(&mut q);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); dim];
            x[f] = int(1);
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -q[row][f].clone();
            }
            clear_denominators(&x)
        })
        .collect()
}

/// Smallest integer multiple of a rational vector, made primitive.
pub fn clear_denominators(x: &[Rational]) -> Vec<i64> {
    let l = x.iter().fold(num_bigint::BigInt::from(1), |l, q| num_integer::Integer::lcm(&l, q.denom()));
    let ints: Vec<i64> = x
        .iter()
        .map(|q| crate::arith::to_i64(&(q * Rational::from_integer(l.clone()))).expect("fits"))
        .collect();
    primitive(&ints)
}

/// Solves `Σ cᵢ·vᵢ = target` for linearly independent `vᵢ`; `None` if there
/// is no solution.
pub fn solve_combination(vectors: &[Vec<i64>], target: &[i64]) -> Option<Vec<Rational>> {
    let k = vectors.len();
    let dim = target.len();
    let mut m: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rational> = vectors.iter().map(|v| int(v[i])).collect();
            row.push(int(target[i]));
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) || pivots.len() < k {
        return None;
    }
    Some((0..k).map(|i| m[i][k].clone()).collect())
}

pub fn is_nonnegative(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
