//! Toric downgrading: restricting the torus of `A^n` to the one-parameter
//! subgroup with weights `w` and reading off the segmental divisor on the
//! quotient toric variety.

mod fan;
pub mod linalg;

pub use fan::{chamber_rays, Cone};

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{int, Rational};
use crate::geometry::PrimeDivisor;
use crate::segdiv::{Segment, SegmentalDivisor};
use linalg::{det, dot, gcd_vec, mat_mul, mat_vec, primitive, smith_normal_form, solve_combination, unimodular_inverse, IMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("weight vector is not primitive (gcd {0})")]
    NonPrimitiveWeight(i64),
    #[error("rank {0} is outside the supported range 2..=5")]
    UnsupportedRank(usize),
    #[error("fiber over {0:?} is unbounded: weights need both signs")]
    UnboundedFiber(Vec<i64>),
    #[error("{0:?} is not in the image of the orthant")]
    NotInSupport(Vec<i64>),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("no unimodular matching: {0}")]
    NoMatching(String),
}

/// Integer matrix with `rows` = target rank and `cols` = source rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub matrix: IMatrix,
    pub source_rank: usize,
    pub target_rank: usize,
}

impl LatticeMap {
    pub fn new(matrix: IMatrix, source_rank: usize) -> Self {
        let target_rank = matrix.len();
        LatticeMap { matrix, source_rank, target_rank }
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        mat_vec(&self.matrix, x)
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.matrix.iter().map(|r| r[j]).collect()
    }
}

impl fmt::Display for LatticeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.matrix.iter().map(|r| format!("{r:?}")).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

fn check_weights(w: &[i64]) -> Result<(), ToricError> {
    if w.len() < 2 || w.len() > 5 {
        return Err(ToricError::UnsupportedRank(w.len()));
    }
    let g = gcd_vec(w);
    if g != 1 {
        return Err(ToricError::NonPrimitiveWeight(g));
    }
    Ok(())
}

/// Unimodular `U` with `U·w = e₁`: its first row is a section `γ`, the other
/// rows a cokernel map `G`.
fn splitting(w: &[i64]) -> IMatrix {
    let column: IMatrix = w.iter().map(|x| vec![*x]).collect();
    let (mut u, s, v) = smith_normal_form(&column);
    // U·w·v = s with v = ±1 and s = (1,0,…)
    if s[0][0] * v[0][0] < 0 {
        u[0] = u[0].iter().map(|x| -x).collect();
    }
    u
}

/// `G: Z^n → Z^{n−1}` surjective with kernel `Z·w`.
pub fn cokernel_map(w: &[i64]) -> Result<LatticeMap, ToricError> {
    check_weights(w)?;
    let u = splitting(w);
    Ok(LatticeMap::new(u[1..].to_vec(), w.len()))
}

/// `γ` with `γ·w = 1`.
pub fn section_of(w: &[i64]) -> Result<Vec<i64>, ToricError> {
    check_weights(w)?;
    Ok(splitting(w)[0].clone())
}

/// A ray of the downgraded fan with its segment `γ(fiber)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayData {
    pub generator: Vec<i64>,
    pub name: String,
    pub segment: Segment,
    /// Indices `i` with `G(eᵢ)` on this ray.
    pub images_of: Vec<usize>,
}

/// `target = Σ coeff·ray` with positive rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayRelation {
    pub target: usize,
    pub terms: Vec<(Rational, usize)>,
}

/// `[min γ(x), max γ(x)]` over `{x ≥ 0 : Gx = f}`. The fiber is a segment
/// of the line `x₀ + t·w`, so its vertices are found by clipping `t`.
pub fn ray_segment(w: &[i64], g: &LatticeMap, gamma: &[i64], f: &[i64]) -> Result<Segment, ToricError> {
    let u_inv = unimodular_inverse(&splitting(w)).expect("splitting matrix is unimodular");
    // x₀ = U⁻¹·(0, f) solves Gx₀ = f when G is the tail of U; for another G
    // solve in its own basis
    let mut rhs = vec![0];
    rhs.extend_from_slice(f);
    let mut x0 = mat_vec(&u_inv, &rhs);
    if g.apply(&x0) != f {
        let own = cokernel_map(w)?;
        let m = match_basis(&own, g)?;
        let m_inv = unimodular_inverse(&m).ok_or_else(|| ToricError::NoMatching("singular".into()))?;
        let mut rhs = vec![0];
        rhs.extend(mat_vec(&m_inv, f));
        x0 = mat_vec(&u_inv, &rhs);
        debug_assert_eq!(g.apply(&x0), f);
    }
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for (xi, wi) in x0.iter().zip(w) {
        if *wi == 0 {
            if *xi < 0 {
                return Err(ToricError::NotInSupport(f.to_vec()));
            }
            continue;
        }
        // x_i + t·w_i ≥ 0
        let bound = Rational::new((-xi).into(), (*wi).into());
        if *wi > 0 {
            lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
        } else {
            hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(ToricError::UnboundedFiber(f.to_vec()));
    };
    if lo > hi {
        return Err(ToricError::NotInSupport(f.to_vec()));
    }
    let gamma_at = |t: &Rational| int(dot(gamma, &x0)) + t * int(dot(gamma, w));
    let (a, b) = (gamma_at(&lo), gamma_at(&hi));
    Ok(Segment::new(a.clone().min(b.clone()), a.max(b)).expect("ordered"))
}

/// Result of downgrading along `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Downgrade {
    pub weights: Vec<i64>,
    pub g: LatticeMap,
    pub gamma: Vec<i64>,
    pub rays: Vec<RayData>,
    pub relations: Vec<RayRelation>,
}

/// Rays of the coarsest fan refining the images of the orthant's faces:
/// images `G(eᵢ)` first in index order, then the remaining rays
/// lexicographically.
pub fn downgrade_fan(w: &[i64]) -> Result<Vec<(Vec<i64>, Vec<usize>)>, ToricError> {
    let g = cokernel_map(w)?;
    fan_for(w, &g)
}

fn fan_for(w: &[i64], g: &LatticeMap) -> Result<Vec<(Vec<i64>, Vec<usize>)>, ToricError> {
    if !(w.iter().any(|x| *x > 0) && w.iter().any(|x| *x < 0)) {
        return Err(ToricError::UnboundedFiber(vec![]));
    }
    let columns: Vec<Vec<i64>> = (0..w.len()).map(|j| g.column(j)).collect();
    let mut rays = chamber_rays(&columns, g.target_rank);
    let mut ordered: Vec<(Vec<i64>, Vec<usize>)> = Vec::new();
    for (i, c) in columns.iter().enumerate() {
        if c.iter().all(|x| *x == 0) {
            continue;
        }
        let p = primitive(c);
        if let Some(entry) = ordered.iter_mut().find(|(r, _)| *r == p) {
            entry.1.push(i);
        } else if rays.contains(&p) {
            ordered.push((p, vec![i]));
        }
    }
    rays.retain(|r| !ordered.iter().any(|(o, _)| o == r));
    rays.sort();
    ordered.extend(rays.into_iter().map(|r| (r, Vec::new())));
    Ok(ordered)
}

/// Downgrades along `w` with the computed `G` and `γ`. `labels` name the
/// rays in fan order; missing labels default to `f1, f2, …`.
pub fn downgrade(w: &[i64], labels: &[String]) -> Result<Downgrade, ToricError> {
    let g = cokernel_map(w)?;
    let gamma = section_of(w)?;
    downgrade_with(w, g, gamma, labels)
}

/// Same with a caller-supplied `G` (kernel `Z·w`) and section `γ`.
pub fn downgrade_with(w: &[i64], g: LatticeMap, gamma: Vec<i64>, labels: &[String]) -> Result<Downgrade, ToricError> {
    check_weights(w)?;
    let fan = fan_for(w, &g)?;
    if !labels.is_empty() && labels.len() != fan.len() {
        return Err(ToricError::LabelCount { expected: fan.len(), got: labels.len() });
    }
    let mut rays = Vec::new();
    for (idx, (f, images_of)) in fan.into_iter().enumerate() {
        let name = labels.get(idx).cloned().unwrap_or_else(|| format!("f{}", idx + 1));
        let segment = ray_segment(w, &g, &gamma, &f)?;
        rays.push(RayData { generator: f, name, segment, images_of });
    }
    let relations = ray_relations(&rays, g.target_rank);
    Ok(Downgrade { weights: w.to_vec(), g, gamma, rays, relations })
}

/// For every ray that is not an image `G(eᵢ)`, its expressions as positive
/// combinations of linearly independent image rays.
fn ray_relations(rays: &[RayData], dim: usize) -> Vec<RayRelation> {
    let image_idx: Vec<usize> = (0..rays.len()).filter(|&i| !rays[i].images_of.is_empty()).collect();
    let mut out = Vec::new();
    for (t, ray) in rays.iter().enumerate() {
        if !ray.images_of.is_empty() {
            continue;
        }
        for size in 2..=dim.min(image_idx.len()) {
            for subset in fan::subsets(image_idx.len(), size) {
                let idx: Vec<usize> = subset.iter().map(|&s| image_idx[s]).collect();
                let vecs: Vec<Vec<i64>> = idx.iter().map(|&i| rays[i].generator.clone()).collect();
                if linalg::rank(&vecs) != size {
                    continue;
                }
                let Some(coeffs) = solve_combination(&vecs, &ray.generator) else { continue };
                if coeffs.iter().all(|c| c.is_positive()) {
                    out.push(RayRelation { target: t, terms: coeffs.into_iter().zip(idx).collect() });
                }
            }
        }
    }
    out
}

impl Downgrade {
    /// `Σ segment⊗ray`, rays with segment `{0}` dropped.
    pub fn segdiv(&self) -> SegmentalDivisor {
        SegmentalDivisor::from_terms(
            self.rays.iter().map(|r| (PrimeDivisor::Named(r.name.clone()), r.segment.clone())),
        )
    }

    /// Re-expresses the result in another basis `target` of the cokernel
    /// with section `target_gamma`. Rays move by the unimodular matching and
    /// segments shift by `u·f` where `target_gamma − γ = u·G`.
    pub fn rebase(&self, target: &LatticeMap, target_gamma: &[i64]) -> Result<(Downgrade, Matching), ToricError> {
        let m = match_basis(&self.g, target)?;
        let u = gamma_shift(&self.g, &self.gamma, target_gamma)?;
        let rays = self
            .rays
            .iter()
            .map(|r| RayData {
                generator: mat_vec(&m, &r.generator),
                name: r.name.clone(),
                segment: r.segment.shift(&int(dot(&u, &r.generator))),
                images_of: r.images_of.clone(),
            })
            .collect();
        let moved = Downgrade {
            weights: self.weights.clone(),
            g: target.clone(),
            gamma: target_gamma.to_vec(),
            rays,
            relations: self.relations.clone(),
        };
        Ok((moved, Matching { matrix: m, gamma_shift: u }))
    }
}

/// `M` unimodular with `M·G = target`, and `u` with `target_γ = γ + u·G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub matrix: IMatrix,
    pub gamma_shift: Vec<i64>,
}

/// Right inverse `R` of a surjective `G` (`G·R = I`), read off the splitting
/// of `w`.
fn right_inverse(g: &LatticeMap) -> Result<IMatrix, ToricError> {
    let w = kernel_vector(g)?;
    let u = splitting(&w);
    let u_inv = unimodular_inverse(&u).expect("unimodular");
    // with G' = tail of U: G'·(columns 1.. of U⁻¹) = I; then M' = G·R' maps
    // G' to G and R = R'·M'⁻¹
    let r_own: IMatrix = u_inv.iter().map(|row| row[1..].to_vec()).collect();
    let m = mat_mul(&g.matrix, &r_own);
    let m_inv = unimodular_inverse(&m).ok_or_else(|| ToricError::NoMatching("map is not surjective".into()))?;
    Ok(mat_mul(&r_own, &m_inv))
}

fn kernel_vector(g: &LatticeMap) -> Result<Vec<i64>, ToricError> {
    let k = linalg::kernel(&g.matrix, g.source_rank);
    if k.len() != 1 {
        return Err(ToricError::NoMatching("kernel is not a line".into()));
    }
    Ok(k[0].clone())
}

/// Unimodular `M` with `M·from = to`.
pub fn match_basis(from: &LatticeMap, to: &LatticeMap) -> Result<IMatrix, ToricError> {
    if from.source_rank != to.source_rank || from.target_rank != to.target_rank {
        return Err(ToricError::NoMatching("shapes differ".into()));
    }
    let r = right_inverse(from)?;
    let m = mat_mul(&to.matrix, &r);
    if mat_mul(&m, &from.matrix) != to.matrix {
        return Err(ToricError::NoMatching("kernels differ".into()));
    }
    if det(&m).abs() != 1 {
        return Err(ToricError::NoMatching(format!("determinant {}", det(&m))));
    }
    Ok(m)
}

/// `u` with `to = from + u·G`.
pub fn gamma_shift(g: &LatticeMap, from: &[i64], to: &[i64]) -> Result<Vec<i64>, ToricError> {
    let diff: Vec<i64> = to.iter().zip(from).map(|(a, b)| a - b).collect();
    let r = right_inverse(g)?;
    let u: Vec<i64> = (0..g.target_rank).map(|j| diff.iter().zip(&r).map(|(d, row)| d * row[j]).sum()).collect();
    let back: Vec<i64> = (0..g.source_rank).map(|i| (0..g.target_rank).map(|j| u[j] * g.matrix[j][i]).sum()).collect();
    if back != diff {
        return Err(ToricError::NoMatching("sections differ on the kernel".into()));
    }
    Ok(u)
}

/// Checks that the sequence `0 → Z →w Z^n →G Z^{n−1} → 0` is exact: `G·w = 0`
/// and the Smith form of `G` is `[I | 0]`.
pub fn is_exact(w: &[i64], g: &LatticeMap) -> bool {
    let (_, s, _) = smith_normal_form(&g.matrix);
    g.apply(w).iter().all(|x| *x == 0)
        && gcd_vec(w) == 1
        && (0..g.target_rank).all(|i| s[i][i] == 1)
        && s.iter().flatten().filter(|x| !x.is_zero()).count() == g.target_rank
}
