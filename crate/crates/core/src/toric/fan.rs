//! The chamber complex cut out by the images of the faces of the positive
//! orthant under a linear map.

use super::linalg::{dot, kernel, primitive, rank};

/// H-description of a rational polyhedral cone: `a·x ≥ 0` for every
/// inequality and `b·x = 0` for every equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub inequalities: Vec<Vec<i64>>,
    pub equations: Vec<Vec<i64>>,
}

impl Cone {
    pub fn contains(&self, x: &[i64]) -> bool {
        self.equations.iter().all(|b| dot(b, x) == 0) && self.inequalities.iter().all(|a| dot(a, x) >= 0)
    }

    /// Converts generators to inequalities. The facet normals within the span
    /// are orthogonal to `k−1` independent generators and to the orthogonal
    /// complement of the span.
    pub fn from_generators(gens: &[Vec<i64>], dim: usize) -> Self {
        let gens: Vec<Vec<i64>> = gens.iter().filter(|g| g.iter().any(|x| *x != 0)).cloned().collect();
        let equations = kernel(&gens, dim);
        let k = dim - equations.len();
        let mut inequalities: Vec<Vec<i64>> = Vec::new();
        if k > 0 {
            for subset in subsets(gens.len(), k - 1) {
                let mut rows: Vec<Vec<i64>> = subset.iter().map(|&i| gens[i].clone()).collect();
                if rank(&rows) != k - 1 {
                    continue;
                }
                rows.extend(equations.iter().cloned());
                let normal = kernel(&rows, dim);
                if normal.len() != 1 {
                    continue;
                }
                let a = &normal[0];
                let signs: Vec<i64> = gens.iter().map(|g| dot(a, g).signum()).collect();
                let oriented = if signs.iter().all(|s| *s >= 0) {
                    a.clone()
                } else if signs.iter().all(|s| *s <= 0) {
                    a.iter().map(|x| -x).collect()
                } else {
                    continue;
                };
                if !inequalities.contains(&oriented) {
                    inequalities.push(oriented);
                }
            }
        }
        Cone { inequalities, equations }
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Rays of the common refinement of the cones `G(face)` over all faces of
/// the orthant. A candidate direction is a ray exactly when the intersection
/// of all image cones containing it is that direction alone; since the
/// support is pointed, a larger intersection would contain another
/// candidate.
pub fn chamber_rays(columns: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let n = columns.len();
    let mut cones = Vec::new();
    for mask in 1u32..(1 << n) {
        let gens: Vec<Vec<i64>> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| columns[i].clone()).collect();
        cones.push(Cone::from_generators(&gens, dim));
    }
    let support = Cone::from_generators(columns, dim);

    let mut normals: Vec<Vec<i64>> = Vec::new();
    for c in &cones {
        for a in c.inequalities.iter().chain(&c.equations) {
            let p = primitive(a);
            let neg: Vec<i64> = p.iter().map(|x| -x).collect();
            if !normals.contains(&p) && !normals.contains(&neg) {
                normals.push(p);
            }
        }
    }
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    for subset in subsets(normals.len(), dim - 1) {
        let rows: Vec<Vec<i64>> = subset.iter().map(|&i| normals[i].clone()).collect();
        let k = kernel(&rows, dim);
        if k.len() != 1 {
            continue;
        }
        for dir in [k[0].clone(), k[0].iter().map(|x| -x).collect()] {
            if support.contains(&dir) && !candidates.contains(&dir) {
                candidates.push(dir);
            }
        }
    }
    let parallel = |a: &[i64], b: &[i64]| primitive(a) == primitive(b);
    candidates
        .iter()
        .filter(|p| {
            let containing: Vec<&Cone> = cones.iter().filter(|c| c.contains(p)).collect();
            !candidates.iter().any(|q| !parallel(p, q) && containing.iter().all(|c| c.contains(q)))
        })
        .cloned()
        .collect()
}
