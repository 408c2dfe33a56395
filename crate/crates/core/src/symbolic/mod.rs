//! Exact verification of the twisted real structure `σ_P` on
//! `C[a,b,x,y]` and of the quotient data of the weight `(2,−2,n,−n)`
//! fourfold.

use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::arith::{int, MPoly, Monomial, Poly1, Rational};
use crate::graded::{generation_degree, GradedError, MonomialAlgebra};

pub const VARS: [&str; 4] = ["a", "b", "x", "y"];
pub const QUOTIENT_VARS: [&str; 4] = ["u", "v", "z", "w"];
const A: usize = 0;
const B: usize = 1;
const X: usize = 2;
const Y: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("P must have rational coefficients")]
    NotRational,
    #[error("r must be at least 1")]
    BadR,
    #[error("det M_P = {0}, expected 1")]
    Determinant(String),
    #[error("sigma_P is not an involution: {var} maps to {image}")]
    InvolutionFails { var: &'static str, image: String },
    #[error(transparent)]
    Graded(#[from] GradedError),
}

fn var(i: usize) -> MPoly {
    MPoly::var(4, i)
}

fn rational_coeffs(p: &Poly1) -> Result<Vec<Rational>, SymbolicError> {
    if !p.is_real() {
        return Err(SymbolicError::NotRational);
    }
    Ok(p.coeffs().iter().map(|c| c.re.clone()).collect())
}

/// Ring endomorphism of `Q[a,b,x,y]` given by the images of the variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingEndo4 {
    pub images: [MPoly; 4],
}

impl RingEndo4 {
    pub fn identity() -> Self {
        RingEndo4 { images: [var(A), var(B), var(X), var(Y)] }
    }

    pub fn apply(&self, f: &MPoly) -> MPoly {
        f.substitute(&self.images)
    }

    /// `self ∘ other` as pullbacks: `(self ∘ other)(f) = self(other(f))`.
    pub fn then_apply(&self, other: &RingEndo4) -> RingEndo4 {
        RingEndo4 { images: other.images.clone().map(|g| self.apply(&g)) }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

/// Antilinear ring endomorphism. With rational scalars conjugation is
/// trivial, so it acts by substitution; the flag records antilinearity for
/// composition bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntiEndo4 {
    pub endo: RingEndo4,
    pub conjugate: bool,
}

impl AntiEndo4 {
    /// `(a,b,x,y) ↦ (b,a,y,x)` composed with complex conjugation.
    pub fn swap() -> Self {
        AntiEndo4 { endo: RingEndo4 { images: [var(B), var(A), var(Y), var(X)] }, conjugate: true }
    }

    pub fn apply(&self, f: &MPoly) -> MPoly {
        self.endo.apply(f)
    }

    pub fn square(&self) -> RingEndo4 {
        self.endo.then_apply(&self.endo)
    }
}

/// `Q = P(ab)`.
fn p_of_ab(p: &[Rational]) -> MPoly {
    (&var(A) * &var(B)).eval_univariate(p)
}

/// The matrix `M_P ∈ SL₂(Q[a,b])`, rows first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixMP {
    pub entries: [[MPoly; 2]; 2],
    pub n: u32,
}

impl MatrixMP {
    pub fn det(&self) -> MPoly {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }

    /// `φ_P*`: `x ↦ M₁₁x + M₁₂y`, `y ↦ M₂₁x + M₂₂y`, `a,b` fixed.
    pub fn endo(&self) -> RingEndo4 {
        let e = &self.entries;
        let row = |i: usize| &(&e[i][0] * &var(X)) + &(&e[i][1] * &var(Y));
        RingEndo4 { images: [var(A), var(B), row(0), row(1)] }
    }
}

pub fn build_mp(p: &Poly1, r: u32) -> Result<MatrixMP, SymbolicError> {
    if r == 0 {
        return Err(SymbolicError::BadR);
    }
    let coeffs = rational_coeffs(p)?;
    let n = 2 * r + 1;
    let q = &var(A) * &var(B);
    let big_q = p_of_ab(&coeffs);
    let q_qsq = &q * &big_q.pow(2);
    let qn = big_q.pow(n);
    let one = MPoly::one(4);
    let mut s = MPoly::zero(4);
    let mut power = one.clone();
    for _ in 0..=2 * r {
        s = &s + &power;
        power = &power * &q_qsq;
    }
    let m = MatrixMP {
        entries: [
            [&one - &q_qsq, &var(A).pow(n) * &qn],
            [-&(&var(B).pow(n) * &qn), s],
        ],
        n,
    };
    let det = m.det();
    if det != one {
        return Err(SymbolicError::Determinant(det.display_with(&VARS).to_string()));
    }
    Ok(m)
}

/// Composition order of `σ` and `φ_P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// `σ_P = φ_P ∘ σ`, pulled back as `σ*(φ_P*(·))`.
    PhiAfterSigma,
    /// `σ ∘ φ_P`, kept as a negative control.
    SigmaAfterPhi,
}

/// `σ_P` with its involution property checked.
pub fn build_sigma_p(p: &Poly1, r: u32) -> Result<AntiEndo4, SymbolicError> {
    build_sigma_p_ordered(p, r, Order::PhiAfterSigma)
}

pub fn build_sigma_p_ordered(p: &Poly1, r: u32, order: Order) -> Result<AntiEndo4, SymbolicError> {
    let phi = build_mp(p, r)?.endo();
    let sigma = AntiEndo4::swap();
    let endo = match order {
        Order::PhiAfterSigma => sigma.endo.then_apply(&phi),
        Order::SigmaAfterPhi => phi.then_apply(&sigma.endo),
    };
    let out = AntiEndo4 { endo, conjugate: true };
    let sq = out.square();
    for (i, img) in sq.images.iter().enumerate() {
        if *img != var(i) {
            return Err(SymbolicError::InvolutionFails { var: VARS[i], image: img.display_with(&VARS).to_string() });
        }
    }
    Ok(out)
}

/// Whether `f ↦ σ_P*(f)` sends every monomial of weight `m` and total degree
/// at most `max_degree` into the weight `−m` part.
pub fn reverses_weights(sigma: &AntiEndo4, weights: &[i64; 4], max_degree: u32) -> bool {
    let mut ok = true;
    for_each_monomial(max_degree, |e| {
        if !ok {
            return;
        }
        let m = Monomial(e.to_vec()).weight(weights);
        let image = sigma.apply(&MPoly::monomial(e.to_vec(), Rational::one()));
        ok = image.weights(weights).iter().all(|w| *w == -m);
    });
    ok
}

fn for_each_monomial(max_degree: u32, mut f: impl FnMut(&[u32; 4])) {
    for total in 0..=max_degree {
        for i in 0..=total {
            for j in 0..=total - i {
                for k in 0..=total - i - j {
                    f(&[i, j, k, total - i - j - k]);
                }
            }
        }
    }
}

/// Outcome of comparing `s·σ_P*(s)` with the closed form of `h_P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpReport {
    pub r: u32,
    pub lhs: MPoly,
    pub rhs: MPoly,
    pub difference: MPoly,
    /// `h_P` is weight zero and `σ_P`-invariant.
    pub invariant: bool,
}

impl HpReport {
    pub fn holds(&self) -> bool {
        self.difference.is_zero()
    }
}

impl fmt::Display for HpReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            write!(f, "PASS h_P = {}", self.rhs.display_with(&VARS))
        } else {
            write!(f, "FAIL difference = {}", self.difference.display_with(&VARS))
        }
    }
}

/// `(u,v,z,w) = (aⁿy², bⁿx², ab, xy)` as images in `Q[a,b,x,y]`.
pub fn quotient_map(r: u32) -> [MPoly; 4] {
    let n = 2 * r + 1;
    [
        &var(A).pow(n) * &var(Y).pow(2),
        &var(B).pow(n) * &var(X).pow(2),
        &var(A) * &var(B),
        &var(X) * &var(Y),
    ]
}

/// `z^r(Pⁿ(z)·v + (1 − zP²(z))·w)` in `Q[u,v,z,w]`.
pub fn h_p_closed_form(p: &Poly1, r: u32) -> Result<MPoly, SymbolicError> {
    let coeffs = rational_coeffs(p)?;
    let n = 2 * r + 1;
    let z = MPoly::var(4, 2);
    let pz = z.eval_univariate(&coeffs);
    let one = MPoly::one(4);
    let inner = &(&pz.pow(n) * &MPoly::var(4, 1)) + &(&(&one - &(&z * &pz.pow(2))) * &MPoly::var(4, 3));
    Ok(&z.pow(r) * &inner)
}

pub fn verify_hp(p: &Poly1, r: u32) -> Result<HpReport, SymbolicError> {
    verify_hp_with(p, r, &build_sigma_p(p, r)?)
}

/// Compares `s·σ*(s)` for `s = b^r·x` against the closed form pulled back
/// along the quotient map.
pub fn verify_hp_with(p: &Poly1, r: u32, sigma: &AntiEndo4) -> Result<HpReport, SymbolicError> {
    let s = &var(B).pow(r) * &var(X);
    let lhs = &s * &sigma.apply(&s);
    let rhs = h_p_closed_form(p, r)?;
    let pulled = rhs.substitute(&quotient_map(r));
    let difference = &lhs - &pulled;
    let n = i64::from(2 * r + 1);
    let weights = [2, -2, n, -n];
    let invariant = sigma.apply(&lhs) == lhs && lhs.weights(&weights).iter().all(|w| *w == 0);
    Ok(HpReport { r, lhs, rhs, difference, invariant })
}

/// `uv − z^{2r+1}w²` vanishes on the quotient map, whose components have
/// weight zero.
pub fn verify_quotient_relation(r: u32) -> bool {
    let n = 2 * r + 1;
    let map = quotient_map(r);
    let weights = [2, -2, i64::from(n), -i64::from(n)];
    let weight_zero = map.iter().all(|m| m.weights(&weights).iter().all(|w| *w == 0));
    let rel = quotient_relation(r);
    weight_zero && rel.substitute(&map).is_zero()
}

/// `uv − z^{2r+1}w²` in `Q[u,v,z,w]`.
pub fn quotient_relation(r: u32) -> MPoly {
    let u = MPoly::var(4, 0);
    let v = MPoly::var(4, 1);
    let z = MPoly::var(4, 2);
    let w = MPoly::var(4, 3);
    &(&u * &v) - &(&z.pow(2 * r + 1) * &w.pow(2))
}

/// Generation degree and center ideal of `C[a,b,x,y]` graded by
/// `(2,−2,n,−n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourfoldData {
    pub n: u32,
    pub d: i64,
    pub positive: Vec<Vec<u32>>,
    pub negative: Vec<Vec<u32>>,
    /// Products `A_d·A_{−d}` rewritten in `u,v,z,w`.
    pub ideal: Vec<MPoly>,
}

impl FourfoldData {
    pub fn ideal_display(&self) -> String {
        let parts: Vec<String> = self.ideal.iter().map(|g| g.display_with(&QUOTIENT_VARS).to_string()).collect();
        format!("({})", parts.join(","))
    }
}

pub fn fourfold(r: u32) -> Result<FourfoldData, SymbolicError> {
    if r == 0 {
        return Err(SymbolicError::BadR);
    }
    let n = 2 * r + 1;
    let ni = i64::from(n);
    let alg = MonomialAlgebra::new(vec![2, -2, ni, -ni]);
    // candidates up to 2n, each checked through k = 2
    let d = generation_degree(&alg, 4 * ni)?;
    let positive = alg.module_generators(d);
    let negative = alg.module_generators(-d);
    let mut ideal: Vec<MPoly> = Vec::new();
    for p in &positive {
        for q in &negative {
            let e: Vec<u32> = p.iter().zip(q).map(|(x, y)| x + y).collect();
            let g = in_quotient_coords(&e, n).expect("weight-zero monomial factors through u,v,z,w");
            if !ideal.contains(&g) {
                ideal.push(g);
            }
        }
    }
    ideal.sort_by(|a, b| b.cmp_leading(a));
    Ok(FourfoldData { n, d, positive, negative, ideal })
}

/// Writes `a^α b^β x^γ y^δ` as `u^i v^j z^k w^l`, preferring the fewest `z`.
fn in_quotient_coords(e: &[u32], n: u32) -> Option<MPoly> {
    let (al, be, ga, de) = (e[0], e[1], e[2], e[3]);
    for i in (0..=al / n).rev() {
        let k = al - n * i;
        if be < k || (be - k) % n != 0 {
            continue;
        }
        let j = (be - k) / n;
        if ga < 2 * j || de < 2 * i || ga - 2 * j != de - 2 * i {
            continue;
        }
        let l = ga - 2 * j;
        return Some(MPoly::monomial(vec![i, j, k, l], int(1)));
    }
    None
}

trait LeadingOrder {
    fn cmp_leading(&self, other: &Self) -> std::cmp::Ordering;
}

impl LeadingOrder for MPoly {
    fn cmp_leading(&self, other: &Self) -> std::cmp::Ordering {
        // variable order u,v,z,w: u first
        let key = |p: &MPoly| p.terms().next().map(|(m, _)| m.0.clone()).unwrap_or_default();
        key(self).cmp(&key(other))
    }
}
