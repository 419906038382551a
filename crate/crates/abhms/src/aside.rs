//! The symplectic side: affine Lagrangian branes with flat `U(1)`
//! connections on the torus `T^{2g}`, Floer morphism spaces with
//! gradings, the equal-slope differential and its cohomology, and the
//! triangle products with theta-valued coefficients.
//!
//! A brane is the pair of a linear Lagrangian of integer slope `k` (or a
//! vertical torus, slope infinity) at position `b` and a flat connection
//! with holonomy vector `a`; both coordinates are kept canonical in
//! `[0, 1)^g`. Morphism spaces are spanned by intersection points; equal
//! slopes are handled by an explicit Hamiltonian perturbation giving `2^g`
//! generators and a differential whose entries are sine factors times a
//! bigon weight.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{binom, index_box, svd_rank, torus_eq, wrap01, wrap01_vec, CMat, CVec, RVec};
use crate::siegel::SiegelPoint;
use crate::theta::{theta_eval, ThetaChar, ThetaError, ThetaRequest};

const PI: f64 = std::f64::consts::PI;
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Rank threshold (relative to `sigma_max`) for cohomology dimensions.
pub const RANK_REL_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FloerError {
    #[error("slopes are equal; use the perturbed complex")]
    EqualSlopes,
    #[error("a vertical brane needs the slope-vertical morphism space")]
    VerticalSlope,
    #[error("slopes must be pairwise distinct finite integers")]
    RepeatedSlopes,
    #[error("slope order violated: need k1 < k2")]
    SlopeOrderViolation,
    #[error("slope triple has non-positive ordered product")]
    InvalidSlopeTriple,
    #[error("operands live over different moduli")]
    ModulusMismatch,
    #[error("elements do not share the middle brane")]
    BraneChainMismatch,
    #[error("Hamiltonian amplitude {0} outside (0, 0.1)")]
    EpsilonOutOfRange(f64),
    #[error("invalid generator for this morphism space: {0}")]
    InvalidGenerator(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// Slope of an affine Lagrangian: a finite integer or vertical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slope {
    Finite(i64),
    Infinite,
}

impl Slope {
    pub fn finite(&self) -> Option<i64> {
        match self {
            Slope::Finite(k) => Some(*k),
            Slope::Infinite => None,
        }
    }
}

/// An A-side object: slope, position `b`, holonomy `a`, all over a fixed
/// modulus `tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct Brane {
    tau: SiegelPoint,
    slope: Slope,
    b: RVec,
    a: RVec,
}

impl Brane {
    /// Builds a brane, wrapping the coordinates into `[0, 1)^g`.
    pub fn new(tau: SiegelPoint, slope: Slope, b: RVec, a: RVec) -> Result<Self, FloerError> {
        let g = tau.genus();
        if b.len() != g || a.len() != g {
            return Err(FloerError::DimensionMismatch(format!(
                "coordinates of length {}/{} for genus {}",
                b.len(),
                a.len(),
                g
            )));
        }
        Ok(Self {
            tau,
            slope,
            b: wrap01_vec(&b),
            a: wrap01_vec(&a),
        })
    }

    pub fn tau(&self) -> &SiegelPoint {
        &self.tau
    }

    pub fn slope(&self) -> Slope {
        self.slope
    }

    pub fn b(&self) -> &RVec {
        &self.b
    }

    pub fn a(&self) -> &RVec {
        &self.a
    }

    pub fn genus(&self) -> usize {
        self.tau.genus()
    }

    /// Same object: equal slope and equal coordinates on the torus.
    pub fn same_object(&self, other: &Brane) -> bool {
        self.tau == other.tau
            && self.slope == other.slope
            && torus_eq(&self.b, &other.b, 1e-10)
            && torus_eq(&self.a, &other.a, 1e-10)
    }
}

/// Generator key inside a fixed morphism space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GenKey {
    /// Transverse intersection point of distinct finite slopes,
    /// labeled by `lambda` in `{0..|k2-k1|-1}^g`.
    Transverse(Vec<i64>),
    /// Self-intersection point after Hamiltonian perturbation,
    /// labeled by `delta` in `{0,1}^g`.
    Perturbed(Vec<u8>),
    /// The single slope-vertical intersection point.
    SlopeVertical,
}

/// A Floer generator: key, cohomological degree, and the intersection
/// coordinates `(r, theta)` (informational).
#[derive(Debug, Clone, PartialEq)]
pub struct FloerGenerator {
    pub key: GenKey,
    pub degree: usize,
    pub r: RVec,
    pub theta: RVec,
}

/// A formal complex combination of generators of one morphism space, all
/// of one degree.
#[derive(Debug, Clone)]
pub struct FloerElement {
    source: Brane,
    target: Brane,
    degree: usize,
    coeffs: BTreeMap<GenKey, Complex64>,
}

impl FloerElement {
    pub fn zero(source: Brane, target: Brane, degree: usize) -> Self {
        Self {
            source,
            target,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(source: Brane, target: Brane, generator: &FloerGenerator) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(generator.key.clone(), Complex64::new(1.0, 0.0));
        Self {
            source,
            target,
            degree: generator.degree,
            coeffs,
        }
    }

    pub fn source(&self) -> &Brane {
        &self.source
    }

    pub fn target(&self) -> &Brane {
        &self.target
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<GenKey, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, key: &GenKey) -> Complex64 {
        self.coeffs
            .get(key)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn set(&mut self, key: GenKey, value: Complex64) {
        if value == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Hamiltonian perturbation parameters for equal-slope morphism spaces.
#[derive(Debug, Clone, Copy)]
pub struct PerturbationParams {
    pub epsilon: f64,
    pub quadrature_tol: f64,
    /// Force the bigon weight `e^{2 pi i (A + A')}` to 1; ranks and
    /// vanishing are unaffected (the weight scales whole columns).
    pub unit_prefactor: bool,
}

impl Default for PerturbationParams {
    fn default() -> Self {
        Self {
            epsilon: 0.01,
            quadrature_tol: 1e-10,
            unit_prefactor: false,
        }
    }
}

impl PerturbationParams {
    pub fn new(epsilon: f64, quadrature_tol: f64) -> Result<Self, FloerError> {
        if !(epsilon > 0.0 && epsilon < 0.1) {
            return Err(FloerError::EpsilonOutOfRange(epsilon));
        }
        Ok(Self {
            epsilon,
            quadrature_tol,
            unit_prefactor: false,
        })
    }

    pub fn with_unit_prefactor(mut self) -> Self {
        self.unit_prefactor = true;
        self
    }
}

/// Transverse intersection points of two branes of distinct finite
/// slopes: exactly `|k2 - k1|^g` generators, in lexicographic `lambda`
/// order, of degree 0 when `k1 < k2` and `g` when `k1 > k2`.
pub fn intersection_points(b1: &Brane, b2: &Brane) -> Result<Vec<FloerGenerator>, FloerError> {
    if b1.tau != b2.tau {
        return Err(FloerError::ModulusMismatch);
    }
    let (k1, k2) = match (b1.slope.finite(), b2.slope.finite()) {
        (Some(k1), Some(k2)) => (k1, k2),
        _ => return Err(FloerError::VerticalSlope),
    };
    if k1 == k2 {
        return Err(FloerError::EqualSlopes);
    }
    let g = b1.genus();
    let dk = k2 - k1;
    let degree = if k1 < k2 { 0 } else { g };
    let mut out = Vec::with_capacity(dk.unsigned_abs().pow(g as u32) as usize);
    for lam in index_box(dk.abs(), g) {
        let r = RVec::from_fn(g, |j, _| {
            wrap01((lam[j] as f64 + b2.b[j] - b1.b[j]) / dk as f64)
        });
        let theta = RVec::from_fn(g, |j, _| {
            wrap01((-(k1 as f64) * lam[j] as f64 + k2 as f64 * b1.b[j] - k1 as f64 * b2.b[j]) / dk as f64)
        });
        out.push(FloerGenerator {
            key: GenKey::Transverse(lam),
            degree,
            r,
            theta,
        });
    }
    Ok(out)
}

/// The single degree-0 intersection point of a finite-slope brane with a
/// vertical brane, at `(r, theta) = (b2, b1 - k*b2)`.
pub fn slope_vertical_generator(b1: &Brane, b2: &Brane) -> Result<FloerGenerator, FloerError> {
    if b1.tau != b2.tau {
        return Err(FloerError::ModulusMismatch);
    }
    let k = b1
        .slope
        .finite()
        .ok_or(FloerError::InvalidGenerator("source must have finite slope".into()))?;
    if b2.slope != Slope::Infinite {
        return Err(FloerError::InvalidGenerator("target must be vertical".into()));
    }
    let g = b1.genus();
    let r = b2.b.clone();
    let theta = RVec::from_fn(g, |j, _| wrap01(b1.b[j] - k as f64 * b2.b[j]));
    Ok(FloerGenerator {
        key: GenKey::SlopeVertical,
        degree: 0,
        r,
        theta,
    })
}

/// The perturbed equal-slope Floer complex: `2^g` generators `p_delta`
/// with degree `sum(delta)` and the bigon differential.
#[derive(Debug, Clone)]
pub struct PerturbedComplex {
    g: usize,
    generators: Vec<FloerGenerator>,
    /// `diff[w]` maps degree `w` to degree `w+1`; entry `(row, col)` is
    /// the coefficient of the row generator in the image of the column
    /// generator.
    diff: Vec<CMat>,
}

impl PerturbedComplex {
    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn generators(&self) -> &[FloerGenerator] {
        &self.generators
    }

    pub fn differentials(&self) -> &[CMat] {
        &self.diff
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Largest entry of any composite `d . d` (zero for a complex).
    pub fn d_squared_max(&self) -> f64 {
        let mut worst = 0.0f64;
        for w in 0..self.diff.len().saturating_sub(1) {
            let prod = &self.diff[w + 1] * &self.diff[w];
            for v in prod.iter() {
                worst = worst.max(v.norm());
            }
        }
        worst
    }
}

fn delta_keys(g: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity(1 << g);
    for mask in 0..(1usize << g) {
        // lexicographic over (delta_1, ..., delta_g)
        let delta: Vec<u8> = (0..g).map(|j| ((mask >> (g - 1 - j)) & 1) as u8).collect();
        out.push(delta);
    }
    out.sort();
    out
}

/// Composite-Simpson quadrature with interval doubling until the change
/// drops below `tol`.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let mut n = 8usize;
    let mut prev = simpson_n(&f, a, b, n);
    loop {
        n *= 2;
        let cur = simpson_n(&f, a, b, n);
        if (cur - prev).abs() < tol || n >= 1 << 20 {
            return cur;
        }
        prev = cur;
    }
}

fn simpson_n(f: &impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        acc += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Complexified area `A` of the first bigon in coordinate `j`, by
/// iterated quadrature of the parametrization
/// `(t, s) -> (r_j = t/2, y_j = s*sin(pi t))` against
/// `omega_tau = sum (B Omega^{-1} + i)_{jl} dr_j ^ dy_l`.
fn bigon_area(tau: &SiegelPoint, j: usize, params: &PerturbationParams) -> Complex64 {
    let eps = params.epsilon;
    let b_om_inv = tau.b()
        * tau
            .omega()
            .clone()
            .try_inverse()
            .expect("Omega of a validated point is invertible");
    let coef = Complex64::new(b_om_inv[(j, j)], 1.0);
    // Jacobian det of (t,s) -> (r=t/2, y=s sin(pi t)) is sin(pi t)/2,
    // independent of s; integrate s numerically all the same.
    let area2d = simpson(
        |t| {
            simpson(|_s| (PI * t).sin() * 0.5, 0.0, TWO_PI * eps, params.quadrature_tol)
        },
        0.0,
        1.0,
        params.quadrature_tol,
    );
    coef * area2d
}

/// The connection correction `A'`: the B-field part of the perturbed
/// connection integrated along the moving boundary, restricted to the
/// coordinate `j` the bigon varies.
fn bigon_connection_correction(tau: &SiegelPoint, j: usize, params: &PerturbationParams) -> f64 {
    let eps = params.epsilon;
    let b_om_inv = tau.b()
        * tau
            .omega()
            .clone()
            .try_inverse()
            .expect("Omega of a validated point is invertible");
    let coef = b_om_inv[(j, j)];
    TWO_PI * eps * coef * simpson(|t| (PI * t).sin() * 0.5, 0.0, 1.0, params.quadrature_tol)
}

fn build_combinatorial_complex(
    g: usize,
    delta_a: &RVec,
    axis_prefactor: &[Complex64],
    base_b: &RVec,
    slope_for_theta: f64,
) -> PerturbedComplex {
    let deltas = delta_keys(g);
    let generators: Vec<FloerGenerator> = deltas
        .iter()
        .map(|delta| {
            let degree = delta.iter().map(|&d| d as usize).sum();
            let r = RVec::from_fn(g, |j, _| delta[j] as f64 / 2.0);
            let theta = RVec::from_fn(g, |j, _| {
                wrap01(base_b[j] - slope_for_theta * (delta[j] as f64 / 2.0))
            });
            FloerGenerator {
                key: GenKey::Perturbed(delta.clone()),
                degree,
                r,
                theta,
            }
        })
        .collect();

    // per-axis factors Delta_j = prefactor_j (e^{pi i da_j} - e^{-pi i da_j})
    let axis_delta: Vec<Complex64> = (0..g)
        .map(|j| {
            let up = Complex64::from_polar(1.0, PI * delta_a[j]);
            let dn = Complex64::from_polar(1.0, -PI * delta_a[j]);
            axis_prefactor[j] * (up - dn)
        })
        .collect();

    // group generator indices per degree, keep lexicographic order
    let mut per_degree: Vec<Vec<usize>> = vec![Vec::new(); g + 1];
    for (idx, gen) in generators.iter().enumerate() {
        per_degree[gen.degree].push(idx);
    }
    let mut diff = Vec::with_capacity(g);
    for w in 0..g {
        let rows = per_degree[w + 1].len();
        let cols = per_degree[w].len();
        let mut m = CMat::zeros(rows, cols);
        for (col, &pi_idx) in per_degree[w].iter().enumerate() {
            let p = match &generators[pi_idx].key {
                GenKey::Perturbed(d) => d.clone(),
                _ => unreachable!(),
            };
            for (row, &qi_idx) in per_degree[w + 1].iter().enumerate() {
                let q = match &generators[qi_idx].key {
                    GenKey::Perturbed(d) => d.clone(),
                    _ => unreachable!(),
                };
                // q must differ from p in exactly one axis, 0 -> 1
                let mut flip = None;
                let mut ok = true;
                for j in 0..g {
                    match (p[j], q[j]) {
                        (a, b) if a == b => {}
                        (0, 1) if flip.is_none() => flip = Some(j),
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if let (true, Some(j)) = (ok, flip) {
                    // Koszul position: ones of p strictly before axis j
                    let k_pos: usize = p[..j].iter().map(|&d| d as usize).sum();
                    let sign = if k_pos % 2 == 0 { 1.0 } else { -1.0 };
                    m[(row, col)] = sign * axis_delta[j];
                }
            }
        }
        diff.push(m);
    }
    PerturbedComplex {
        g,
        generators,
        diff,
    }
}

/// The equal-slope morphism complex after Hamiltonian perturbation.
///
/// Distinct positions (`[b1] != [b2]`) give the zero complex. Otherwise
/// there are `2^g` generators `p_delta` of degree `sum(delta)`, and the
/// only nonzero differential entries pair generators differing in one
/// coordinate `j`, with value
/// `(-1)^{k} e^{2 pi i (A + A')} (e^{pi i da_j} - e^{-pi i da_j})` where
/// `da = a2 - a1` and `k` counts the 1-entries before `j`.
pub fn perturbed_complex(
    b1: &Brane,
    b2: &Brane,
    params: &PerturbationParams,
) -> Result<PerturbedComplex, FloerError> {
    if b1.tau != b2.tau {
        return Err(FloerError::ModulusMismatch);
    }
    let (k1, k2) = match (b1.slope.finite(), b2.slope.finite()) {
        (Some(k1), Some(k2)) => (k1, k2),
        _ => return Err(FloerError::VerticalSlope),
    };
    if k1 != k2 {
        return Err(FloerError::InvalidGenerator(
            "perturbed complex needs equal slopes".into(),
        ));
    }
    if !(params.epsilon > 0.0 && params.epsilon < 0.1) {
        return Err(FloerError::EpsilonOutOfRange(params.epsilon));
    }
    let g = b1.genus();
    if !torus_eq(&b1.b, &b2.b, 1e-10) {
        return Ok(PerturbedComplex {
            g,
            generators: Vec::new(),
            diff: Vec::new(),
        });
    }
    let delta_a = RVec::from_fn(g, |j, _| b2.a[j] - b1.a[j]);
    let prefactors: Vec<Complex64> = (0..g)
        .map(|j| {
            if params.unit_prefactor {
                Complex64::new(1.0, 0.0)
            } else {
                let total = bigon_area(&b1.tau, j, params)
                    + bigon_connection_correction(&b1.tau, j, params);
                (Complex64::i() * TWO_PI * total).exp()
            }
        })
        .collect();
    Ok(build_combinatorial_complex(
        g,
        &delta_a,
        &prefactors,
        &b1.b,
        k1 as f64,
    ))
}

/// Cohomology dimensions of a perturbed complex via singular-value rank.
pub fn floer_cohomology_dims(cx: &PerturbedComplex) -> Vec<usize> {
    let g = cx.g;
    if cx.is_zero() {
        return vec![0; g + 1];
    }
    let mut dims = vec![0usize; g + 1];
    for gen in &cx.generators {
        dims[gen.degree] += 1;
    }
    let ranks: Vec<usize> = cx
        .diff
        .iter()
        .map(|m| svd_rank(m, RANK_REL_THRESHOLD))
        .collect();
    (0..=g)
        .map(|w| {
            let below = if w == 0 { 0 } else { ranks[w - 1] };
            let here = if w == g { 0 } else { ranks[w] };
            dims[w] - here - below
        })
        .collect()
}

/// Full morphism-space cohomology table for any pair of brane kinds.
pub fn morphism_space_dims(
    b1: &Brane,
    b2: &Brane,
    params: &PerturbationParams,
) -> Result<Vec<u128>, FloerError> {
    if b1.tau != b2.tau {
        return Err(FloerError::ModulusMismatch);
    }
    let g = b1.genus();
    let mut dims = vec![0u128; g + 1];
    match (b1.slope.finite(), b2.slope.finite()) {
        (Some(k1), Some(k2)) if k1 != k2 => {
            let slot = if k1 < k2 { 0 } else { g };
            dims[slot] = (k2 - k1).unsigned_abs().pow(g as u32) as u128;
        }
        (Some(_), Some(_)) => {
            let cx = perturbed_complex(b1, b2, params)?;
            for (w, d) in floer_cohomology_dims(&cx).into_iter().enumerate() {
                dims[w] = d as u128;
            }
        }
        (Some(_), None) => {
            // one transverse point in degree 0
            dims[0] = 1;
        }
        (None, Some(_)) => {
            // the same point read backwards sits in top degree
            dims[g] = 1;
        }
        (None, None) => {
            if torus_eq(&b1.b, &b2.b, 1e-10) {
                // vertical self-morphisms: same combinatorics with the
                // holonomy difference driving the differential; the bigon
                // weight is a global scale, irrelevant to ranks
                let delta_a = RVec::from_fn(g, |j, _| b2.a[j] - b1.a[j]);
                let unit = vec![Complex64::new(1.0, 0.0); g];
                let cx = build_combinatorial_complex(g, &delta_a, &unit, &b1.b, 0.0);
                for (w, d) in floer_cohomology_dims(&cx).into_iter().enumerate() {
                    dims[w] = d as u128;
                }
            }
        }
    }
    Ok(dims)
}

/// Expected cohomology table `binom(g, w)` (used by tests and sweeps).
pub fn binomial_table(g: usize) -> Vec<u128> {
    (0..=g).map(|w| binom(g, w)).collect()
}

/// Complexified area of the triangle with corner data
/// `(k1, k2, k3, lambda1, lambda2)`, positions `b1, b2, b3`, and lift
/// index `m`.
pub fn triangle_area(
    k1: i64,
    k2: i64,
    k3: i64,
    lam1: &[i64],
    lam2: &[i64],
    b1: &RVec,
    b2: &RVec,
    b3: &RVec,
    m: &[i64],
    tau: &SiegelPoint,
) -> Result<Complex64, FloerError> {
    let p = (k2 - k1) * (k3 - k2) * (k3 - k1);
    if p <= 0 {
        return Err(FloerError::InvalidSlopeTriple);
    }
    let g = tau.genus();
    let s = triangle_s_vector(k1, k2, k3, lam1, lam2, b1, b2, b3, m, g);
    Ok(tau.quad_form(&s) / (2.0 * p as f64))
}

fn triangle_s_vector(
    k1: i64,
    k2: i64,
    k3: i64,
    lam1: &[i64],
    lam2: &[i64],
    b1: &RVec,
    b2: &RVec,
    b3: &RVec,
    m: &[i64],
    g: usize,
) -> RVec {
    RVec::from_fn(g, |j, _| {
        (k3 - k2) as f64 * (lam1[j] as f64 + b2[j] - b1[j])
            - (k2 - k1) as f64 * (lam2[j] as f64 + b3[j] - b2[j])
            - ((k2 - k1) * (k3 - k2)) as f64 * m[j] as f64
    })
}

struct TripleData {
    k1: i64,
    k2: i64,
    k3: i64,
    product: i64,
    out_span: i64,
}

fn check_triple(e1: &FloerElement, e2: &FloerElement) -> Result<TripleData, FloerError> {
    if e1.source.tau != e1.target.tau
        || e2.source.tau != e2.target.tau
        || e1.source.tau != e2.source.tau
    {
        return Err(FloerError::ModulusMismatch);
    }
    if !e1.target.same_object(&e2.source) {
        return Err(FloerError::BraneChainMismatch);
    }
    let (k1, k2, k3) = match (
        e1.source.slope.finite(),
        e1.target.slope.finite(),
        e2.target.slope.finite(),
    ) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err(FloerError::RepeatedSlopes),
    };
    if k1 == k2 || k2 == k3 || k1 == k3 {
        return Err(FloerError::RepeatedSlopes);
    }
    Ok(TripleData {
        k1,
        k2,
        k3,
        product: (k2 - k1) * (k3 - k2) * (k3 - k1),
        out_span: (k3 - k1).abs(),
    })
}

/// The triangle product `mu^2` into `CF(b1, b3)`.
///
/// When the input degrees cannot add up to the forced degree of the
/// output space (equivalently, the ordered slope product is negative) the
/// zero element is returned. Otherwise, for a generator pair
/// `(lambda1, lambda2)` the coefficient on the output generator indexed by
/// `(lambda1 + lambda2 + (k3-k2) w) mod |k3-k1|` is the theta constant
///
/// ```text
/// D^w = theta[ -S_w / P, (k2-k1)(a3-a2) - (k3-k2)(a2-a1) ](P tau, 1)
/// ```
///
/// with `P = (k2-k1)(k3-k2)(k3-k1)` and `S_w` the triangle offset vector.
pub fn mu2(e1: &FloerElement, e2: &FloerElement, tol: f64) -> Result<FloerElement, FloerError> {
    mu2_impl(e1, e2, tol, false)
}

/// Reference path for `mu2`: sums the triangle family directly (area and
/// holonomy per lift) instead of evaluating the closed-form constants.
pub fn mu2_triangle_sum(
    e1: &FloerElement,
    e2: &FloerElement,
    tol: f64,
) -> Result<FloerElement, FloerError> {
    mu2_impl(e1, e2, tol, true)
}

fn mu2_impl(
    e1: &FloerElement,
    e2: &FloerElement,
    tol: f64,
    raw_sum: bool,
) -> Result<FloerElement, FloerError> {
    let triple = check_triple(e1, e2)?;
    let (k1, k2, k3) = (triple.k1, triple.k2, triple.k3);
    let g = e1.source.genus();
    let forced_degree = if k1 < k3 { 0 } else { g };
    let mut out = FloerElement::zero(e1.source.clone(), e2.target.clone(), forced_degree);
    if triple.product <= 0 {
        // degree bookkeeping forbids a nonzero product
        return Ok(out);
    }
    let tau = &e1.source.tau;
    let p = triple.product;
    let span = triple.out_span;
    let (b1v, b2v, b3v) = (&e1.source.b, &e1.target.b, &e2.target.b);
    let (a1v, a2v, a3v) = (&e1.source.a, &e1.target.a, &e2.target.a);
    let dd = RVec::from_fn(g, |j, _| {
        (k2 - k1) as f64 * (a3v[j] - a2v[j]) - (k3 - k2) as f64 * (a2v[j] - a1v[j])
    });
    for (key1, c1) in &e1.coeffs {
        let lam1 = match key1 {
            GenKey::Transverse(l) => l,
            _ => return Err(FloerError::InvalidGenerator(format!("{key1:?}"))),
        };
        for (key2, c2) in &e2.coeffs {
            let lam2 = match key2 {
                GenKey::Transverse(l) => l,
                _ => return Err(FloerError::InvalidGenerator(format!("{key2:?}"))),
            };
            let amp = c1 * c2;
            for w in index_box(span, g) {
                let dw = if raw_sum {
                    triangle_family_sum(
                        tau, k1, k2, k3, lam1, lam2, b1v, b2v, b3v, &dd, &w, tol,
                    )?
                } else {
                    let s_w = triangle_s_vector(k1, k2, k3, lam1, lam2, b1v, b2v, b3v, &w, g);
                    let c = RVec::from_fn(g, |j, _| -s_w[j] / p as f64);
                    let chr = ThetaChar::new(c, dd.clone())?;
                    theta_eval(&ThetaRequest::constant(tau.scale(p), chr, tol)?)?
                };
                let lam_out: Vec<i64> = (0..g)
                    .map(|j| (lam1[j] + lam2[j] + (k3 - k2) * w[j]).rem_euclid(span))
                    .collect();
                let key = GenKey::Transverse(lam_out);
                let prev = out.coeff(&key);
                out.set(key, prev + amp * dw);
            }
        }
    }
    Ok(out)
}

/// Direct sum over the lifts `m = w + |k3-k1| * mt`: each term carries
/// the weight `e^{2 pi i area(u_m)}` and the boundary holonomy.
#[allow(clippy::too_many_arguments)]
fn triangle_family_sum(
    tau: &SiegelPoint,
    k1: i64,
    k2: i64,
    k3: i64,
    lam1: &[i64],
    lam2: &[i64],
    b1: &RVec,
    b2: &RVec,
    b3: &RVec,
    dd: &RVec,
    w: &[i64],
    tol: f64,
) -> Result<Complex64, FloerError> {
    let g = tau.genus();
    let p = (k2 - k1) * (k3 - k2) * (k3 - k1);
    let span = (k3 - k1).abs();
    // in the lift index mt (with m = w + span*mt) the offset vector is
    // S_w - Q*mt, Q = (k2-k1)(k3-k2)*span, so the area decays at rate
    // pi * lambda_min * P * |mt - S_w/Q|^2
    let q = (k2 - k1) * (k3 - k2) * span;
    let lambda_eff = p as f64 * tau.lambda_min();
    let mut radius = 2i64;
    while (-PI * lambda_eff * (radius as f64 - 1.0) * (radius as f64 - 1.0)).exp() > tol * 1e-2 {
        radius += 1;
        if radius > 200 {
            break;
        }
    }
    // center the lift box on the area minimizer
    let s_w = triangle_s_vector(k1, k2, k3, lam1, lam2, b1, b2, b3, w, g);
    let ranges: Vec<(i64, i64)> = (0..g)
        .map(|j| {
            let center = (s_w[j] / q as f64).round() as i64;
            (center - radius, center + radius)
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    crate::linalg::for_each_lattice_point(&ranges, |mt| {
        let m: Vec<i64> = (0..g).map(|j| w[j] + span * mt[j]).collect();
        let s_m = triangle_s_vector(k1, k2, k3, lam1, lam2, b1, b2, b3, &m, g);
        let area = tau.quad_form(&s_m) / (2.0 * p as f64);
        let hol_phase: f64 = (0..g).map(|j| dd[j] * (-s_m[j] / p as f64)).sum();
        total += (Complex64::i() * (TWO_PI * area)).exp()
            * Complex64::from_polar(1.0, TWO_PI * hol_phase);
    });
    Ok(total)
}

/// The product with a vertical brane: `CF(b1,b2) x CF(b2, vertical)` into
/// `CF(b1, vertical)` for `k1 < k2`.
///
/// The coefficient on the single output generator is
///
/// ```text
/// e^{pi i (k2-k1) b(x)^T tau b(x)} e^{-2 pi i ((a2-a1) + (k2-k1) a(x))^T b(x)}
///   * theta[(lambda + b2 - b1)/(k2-k1), a2-a1]((k2-k1) tau, (k2-k1) z(x))
/// ```
///
/// where `(a(x), b(x))` are the vertical brane coordinates and
/// `z(x) = -a(x) - tau b(x)` is the mirror evaluation point.
pub fn mu2_vertical(
    e12: &FloerElement,
    ev: &FloerElement,
    tol: f64,
) -> Result<FloerElement, FloerError> {
    if e12.source.tau != e12.target.tau || e12.source.tau != ev.source.tau {
        return Err(FloerError::ModulusMismatch);
    }
    let (k1, k2) = match (e12.source.slope.finite(), e12.target.slope.finite()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(FloerError::VerticalSlope),
    };
    if k1 >= k2 {
        return Err(FloerError::SlopeOrderViolation);
    }
    if !e12.target.same_object(&ev.source) {
        return Err(FloerError::BraneChainMismatch);
    }
    if ev.target.slope != Slope::Infinite {
        return Err(FloerError::InvalidGenerator("target must be vertical".into()));
    }
    let g = e12.source.genus();
    let tau = &e12.source.tau;
    let kappa = k2 - k1;
    let vb = &ev.target;
    // z(x) = -a_v - tau b_v
    let tau_bv_b = tau.b() * &vb.b;
    let tau_bv_o = tau.omega() * &vb.b;
    let zx = CVec::from_fn(g, |j, _| {
        Complex64::new(-vb.a[j] - tau_bv_b[j], -tau_bv_o[j])
    });
    // prefactor
    let quad = tau.quad_form(&vb.b);
    let da = RVec::from_fn(g, |j, _| e12.target.a[j] - e12.source.a[j]);
    let lin: f64 = (0..g).map(|j| (da[j] + kappa as f64 * vb.a[j]) * vb.b[j]).sum();
    let prefactor =
        (Complex64::i() * (PI * kappa as f64 * quad)).exp() * Complex64::from_polar(1.0, -TWO_PI * lin);

    let cv = match ev.coeffs.get(&GenKey::SlopeVertical) {
        Some(c) => *c,
        None => Complex64::new(0.0, 0.0),
    };
    let mut out = FloerElement::zero(e12.source.clone(), vb.clone(), 0);
    if cv == Complex64::new(0.0, 0.0) {
        return Ok(out);
    }
    let kz = zx.map(|v| v * kappa as f64);
    let mut acc = Complex64::new(0.0, 0.0);
    for (key, c12) in &e12.coeffs {
        let lam = match key {
            GenKey::Transverse(l) => l,
            _ => return Err(FloerError::InvalidGenerator(format!("{key:?}"))),
        };
        let c = RVec::from_fn(g, |j, _| {
            (lam[j] as f64 + e12.target.b[j] - e12.source.b[j]) / kappa as f64
        });
        let chr = ThetaChar::new(c, da.clone())?;
        let theta = theta_eval(&ThetaRequest::new(tau.scale(kappa), kz.clone(), chr, tol)?)?;
        acc += c12 * cv * prefactor * theta;
    }
    out.set(GenKey::SlopeVertical, acc);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RMat;
    use crate::mirror::sampling::random_tau;
    use crate::siegel::validate_siegel;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tau_i(g: usize) -> SiegelPoint {
        validate_siegel(&RMat::zeros(g, g), &RMat::identity(g, g)).unwrap()
    }

    fn brane(tau: &SiegelPoint, k: i64, b: &[f64], a: &[f64]) -> Brane {
        Brane::new(
            tau.clone(),
            Slope::Finite(k),
            RVec::from_row_slice(b),
            RVec::from_row_slice(a),
        )
        .unwrap()
    }

    fn vertical(tau: &SiegelPoint, b: &[f64], a: &[f64]) -> Brane {
        Brane::new(
            tau.clone(),
            Slope::Infinite,
            RVec::from_row_slice(b),
            RVec::from_row_slice(a),
        )
        .unwrap()
    }

    #[test]
    fn transverse_counts_and_degrees() {
        let tau = tau_i(2);
        let b0 = brane(&tau, 0, &[0.0, 0.0], &[0.0, 0.0]);
        let b3 = brane(&tau, 3, &[0.2, 0.7], &[0.0, 0.0]);
        let pts = intersection_points(&b0, &b3).unwrap();
        assert_eq!(pts.len(), 9);
        assert!(pts.iter().all(|p| p.degree == 0));

        let tau1 = tau_i(1);
        let hi = brane(&tau1, 2, &[0.0], &[0.0]);
        let lo = brane(&tau1, 0, &[0.0], &[0.0]);
        let pts = intersection_points(&hi, &lo).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| p.degree == 1));
    }

    #[test]
    fn transverse_point_coordinates() {
        let tau = tau_i(1);
        let b0 = brane(&tau, 0, &[0.0], &[0.0]);
        let b1 = brane(&tau, 1, &[0.0], &[0.0]);
        let pts = intersection_points(&b0, &b1).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].r[0].abs() < 1e-15 && pts[0].theta[0].abs() < 1e-15);
    }

    #[test]
    fn equal_slopes_rejected_for_transverse() {
        let tau = tau_i(1);
        let x = brane(&tau, 2, &[0.1], &[0.0]);
        let y = brane(&tau, 2, &[0.4], &[0.0]);
        assert!(matches!(
            intersection_points(&x, &y),
            Err(FloerError::EqualSlopes)
        ));
    }

    #[test]
    fn slope_vertical_point() {
        let tau = tau_i(1);
        let b1 = brane(&tau, 2, &[0.5], &[0.0]);
        let b2 = vertical(&tau, &[0.25], &[0.0]);
        let p = slope_vertical_generator(&b1, &b2).unwrap();
        assert_eq!(p.degree, 0);
        assert!((p.r[0] - 0.25).abs() < 1e-15);
        assert!(p.theta[0].abs() < 1e-15, "theta {}", p.theta[0]);
    }

    #[test]
    fn disjoint_verticals_have_zero_morphisms() {
        let tau = tau_i(2);
        let v1 = vertical(&tau, &[0.1, 0.2], &[0.0, 0.0]);
        let v2 = vertical(&tau, &[0.3, 0.2], &[0.0, 0.0]);
        let dims = morphism_space_dims(&v1, &v2, &PerturbationParams::default()).unwrap();
        assert_eq!(dims, vec![0, 0, 0]);
    }

    #[test]
    fn perturbed_g1_equal_holonomy_has_zero_differential() {
        let tau = tau_i(1);
        let x = brane(&tau, 1, &[0.3], &[0.6]);
        let y = brane(&tau, 1, &[0.3], &[0.6]);
        let cx = perturbed_complex(&x, &y, &PerturbationParams::default()).unwrap();
        assert_eq!(cx.generators().len(), 2);
        assert!(cx.differentials()[0].amax() < 1e-15);
        assert_eq!(floer_cohomology_dims(&cx), vec![1, 1]);
    }

    #[test]
    fn perturbed_g1_half_offset_is_acyclic() {
        let tau = tau_i(1);
        let x = brane(&tau, 1, &[0.3], &[0.25]);
        let y = brane(&tau, 1, &[0.3], &[0.75]);
        let cx = perturbed_complex(&x, &y, &PerturbationParams::default()).unwrap();
        assert!(cx.differentials()[0].amax() > 0.1);
        assert_eq!(floer_cohomology_dims(&cx), vec![0, 0]);
    }

    #[test]
    fn differential_squares_to_zero_g3() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..5 {
            let tau = random_tau(3, &mut rng);
            let b = RVec::from_fn(3, |_, _| rng.gen_range(0.0..1.0));
            let x = Brane::new(
                tau.clone(),
                Slope::Finite(2),
                b.clone(),
                RVec::from_fn(3, |_, _| rng.gen_range(0.0..1.0)),
            )
            .unwrap();
            let y = Brane::new(
                tau.clone(),
                Slope::Finite(2),
                b,
                RVec::from_fn(3, |_, _| rng.gen_range(0.0..1.0)),
            )
            .unwrap();
            let cx = perturbed_complex(&x, &y, &PerturbationParams::default()).unwrap();
            assert!(cx.d_squared_max() < 1e-12, "d^2 = {}", cx.d_squared_max());
        }
    }

    #[test]
    fn ranks_invariant_under_unit_prefactor() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let tau = random_tau(2, &mut rng);
        let b = RVec::from_fn(2, |_, _| rng.gen_range(0.0..1.0));
        let x = Brane::new(
            tau.clone(),
            Slope::Finite(1),
            b.clone(),
            RVec::from_fn(2, |_, _| rng.gen_range(0.0..1.0)),
        )
        .unwrap();
        let y = Brane::new(
            tau.clone(),
            Slope::Finite(1),
            b,
            RVec::from_fn(2, |_, _| rng.gen_range(0.0..1.0)),
        )
        .unwrap();
        let plain = perturbed_complex(&x, &y, &PerturbationParams::default()).unwrap();
        let unit = perturbed_complex(
            &x,
            &y,
            &PerturbationParams::default().with_unit_prefactor(),
        )
        .unwrap();
        assert_eq!(floer_cohomology_dims(&plain), floer_cohomology_dims(&unit));
    }

    #[test]
    fn bigon_quadrature_matches_closed_form() {
        // A = 2 eps ((B Omega^{-1})_{jj} + i), A' = 2 eps (B Omega^{-1})_{jj}
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let tau = random_tau(2, &mut rng);
        let params = PerturbationParams::default();
        let b_om_inv = tau.b() * tau.omega().clone().try_inverse().unwrap();
        for j in 0..2 {
            let a = bigon_area(&tau, j, &params);
            let expected = Complex64::new(b_om_inv[(j, j)], 1.0) * 2.0 * params.epsilon;
            assert!((a - expected).norm() < 1e-9, "area {a} vs {expected}");
            let ap = bigon_connection_correction(&tau, j, &params);
            assert!((ap - 2.0 * params.epsilon * b_om_inv[(j, j)]).abs() < 1e-9);
        }
    }

    #[test]
    fn triangle_area_examples() {
        let tau = tau_i(1);
        // S_m = 0 -> 0
        let zero = RVec::zeros(1);
        let a0 = triangle_area(0, 1, 2, &[0], &[0], &zero, &zero, &zero, &[0], &tau).unwrap();
        assert!(a0.norm() < 1e-15);
        // m = 1 -> S = -1, area = tau/4
        let a1 = triangle_area(0, 1, 2, &[0], &[0], &zero, &zero, &zero, &[1], &tau).unwrap();
        assert!((a1 - Complex64::new(0.0, 0.25)).norm() < 1e-15);
        // positive imaginary part whenever S != 0
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let tau = random_tau(2, &mut rng);
            let b: Vec<RVec> = (0..3)
                .map(|_| RVec::from_fn(2, |_, _| rng.gen_range(0.0..1.0)))
                .collect();
            let ar = triangle_area(
                0,
                1,
                3,
                &[0, 1],
                &[1, 0],
                &b[0],
                &b[1],
                &b[2],
                &[1, -1],
                &tau,
            )
            .unwrap();
            assert!(ar.im > 0.0);
        }
        // bad ordering
        assert!(matches!(
            triangle_area(0, 2, 1, &[0], &[0], &zero, &zero, &zero, &[0], &tau),
            Err(FloerError::InvalidSlopeTriple)
        ));
    }

    #[test]
    fn mu2_level_one_constants() {
        // (0,1,2) with all shifts zero: D^w = theta[w/2, 0](2 tau, 1)
        let tau = tau_i(1);
        let b0 = brane(&tau, 0, &[0.0], &[0.0]);
        let b1 = brane(&tau, 1, &[0.0], &[0.0]);
        let b2 = brane(&tau, 2, &[0.0], &[0.0]);
        let p1 = FloerElement::basis(
            b0.clone(),
            b1.clone(),
            &intersection_points(&b0, &b1).unwrap()[0],
        );
        let p2 = FloerElement::basis(
            b1.clone(),
            b2.clone(),
            &intersection_points(&b1, &b2).unwrap()[0],
        );
        let out = mu2(&p1, &p2, 1e-13).unwrap();
        assert_eq!(out.degree(), 0);
        let d0 = out.coeff(&GenKey::Transverse(vec![0]));
        let d1 = out.coeff(&GenKey::Transverse(vec![1]));
        assert!((d0.re - 1.003_734_885_487_739).abs() < 1e-12, "{d0}");
        assert!((d1.re - 0.415_760_602_596_027).abs() < 1e-12, "{d1}");
    }

    #[test]
    fn mu2_zero_input_gives_zero() {
        let tau = tau_i(1);
        let b0 = brane(&tau, 0, &[0.0], &[0.0]);
        let b1 = brane(&tau, 1, &[0.0], &[0.0]);
        let b2 = brane(&tau, 2, &[0.0], &[0.0]);
        let z = FloerElement::zero(b0.clone(), b1.clone(), 0);
        let p2 = FloerElement::basis(
            b1.clone(),
            b2.clone(),
            &intersection_points(&b1, &b2).unwrap()[0],
        );
        assert!(mu2(&z, &p2, 1e-12).unwrap().is_zero());
    }

    #[test]
    fn mu2_degree_mismatch_returns_zero() {
        // (0, 2, 1): degrees 0 + g cannot land in the forced degree 0
        let tau = tau_i(1);
        let b0 = brane(&tau, 0, &[0.1], &[0.0]);
        let b2 = brane(&tau, 2, &[0.3], &[0.0]);
        let b1 = brane(&tau, 1, &[0.7], &[0.0]);
        let p1 = FloerElement::basis(
            b0.clone(),
            b2.clone(),
            &intersection_points(&b0, &b2).unwrap()[0],
        );
        let p2 = FloerElement::basis(
            b2.clone(),
            b1.clone(),
            &intersection_points(&b2, &b1).unwrap()[0],
        );
        let out = mu2(&p1, &p2, 1e-12).unwrap();
        assert!(out.is_zero());
        assert_eq!(out.degree(), 0);
    }

    #[test]
    fn mu2_degree_additivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let tau = random_tau(1, &mut rng);
        for (k1, k2, k3) in [(0i64, 1i64, 2i64), (1, 2, 0), (2, 0, 1)] {
            let br1 = Brane::new(
                tau.clone(),
                Slope::Finite(k1),
                RVec::from_fn(1, |_, _| rng.gen_range(0.0..1.0)),
                RVec::from_fn(1, |_, _| rng.gen_range(0.0..1.0)),
            )
            .unwrap();
            let mid_b = RVec::from_fn(1, |_, _| rng.gen_range(0.0..1.0));
            let mid_a = RVec::from_fn(1, |_, _| rng.gen_range(0.0..1.0));
            let br2 = Brane::new(tau.clone(), Slope::Finite(k2), mid_b.clone(), mid_a.clone())
                .unwrap();
            let br2b = Brane::new(tau.clone(), Slope::Finite(k2), mid_b, mid_a).unwrap();
            let br3 = Brane::new(
                tau.clone(),
                Slope::Finite(k3),
                RVec::from_fn(1, |_, _| rng.gen_range(0.0..1.0)),
                RVec::from_fn(1, |_, _| rng.gen_range(0.0..1.0)),
            )
            .unwrap();
            let p1 = FloerElement::basis(
                br1.clone(),
                br2.clone(),
                &intersection_points(&br1, &br2).unwrap()[0],
            );
            let p2 = FloerElement::basis(
                br2b.clone(),
                br3.clone(),
                &intersection_points(&br2b, &br3).unwrap()[0],
            );
            let out = mu2(&p1, &p2, 1e-12).unwrap();
            if !out.is_zero() {
                assert_eq!(out.degree(), p1.degree() + p2.degree());
            }
        }
    }

    #[test]
    fn mu2_matches_triangle_family_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let tau = random_tau(1, &mut rng);
        let mk = |k: i64, rng: &mut ChaCha8Rng| {
            Brane::new(
                tau.clone(),
                Slope::Finite(k),
                RVec::from_fn(1, |_, _| rng.gen_range(0.0..1.0)),
                RVec::from_fn(1, |_, _| rng.gen_range(0.0..1.0)),
            )
            .unwrap()
        };
        let br1 = mk(0, &mut rng);
        let br2 = mk(1, &mut rng);
        let br3 = mk(3, &mut rng);
        let p1 = FloerElement::basis(
            br1.clone(),
            br2.clone(),
            &intersection_points(&br1, &br2).unwrap()[0],
        );
        for gen2 in intersection_points(&br2, &br3).unwrap() {
            let p2 = FloerElement::basis(br2.clone(), br3.clone(), &gen2);
            let closed = mu2(&p1, &p2, 1e-13).unwrap();
            let raw = mu2_triangle_sum(&p1, &p2, 1e-13).unwrap();
            for (key, c) in closed.coeffs() {
                assert!(
                    (c - raw.coeff(key)).norm() < 1e-10,
                    "key {key:?}: {} vs {}",
                    c,
                    raw.coeff(key)
                );
            }
        }
    }

    #[test]
    fn mu2_vertical_at_origin() {
        // z(x) = 0: prefactor 1, coefficient theta[(lam+b2-b1)/k, a2-a1]
        let tau = tau_i(1);
        let b0 = brane(&tau, 0, &[0.0], &[0.0]);
        let b1 = brane(&tau, 1, &[0.0], &[0.0]);
        let vb = vertical(&tau, &[0.0], &[0.0]);
        let p12 = FloerElement::basis(
            b0.clone(),
            b1.clone(),
            &intersection_points(&b0, &b1).unwrap()[0],
        );
        let pv = FloerElement::basis(
            b1.clone(),
            vb.clone(),
            &slope_vertical_generator(&b1, &vb).unwrap(),
        );
        let out = mu2_vertical(&p12, &pv, 1e-12).unwrap();
        let c = out.coeff(&GenKey::SlopeVertical);
        // theta[0,0](tau, 0) at tau = i
        assert!((c.re - 1.086_434_811_213_308).abs() < 1e-12, "{c}");
    }

    #[test]
    fn mu2_vertical_requires_increasing_slopes() {
        let tau = tau_i(1);
        let b2 = brane(&tau, 2, &[0.0], &[0.0]);
        let b1 = brane(&tau, 1, &[0.0], &[0.0]);
        let vb = vertical(&tau, &[0.3], &[0.1]);
        let p12 = FloerElement::basis(
            b2.clone(),
            b1.clone(),
            &intersection_points(&b2, &b1).unwrap()[0],
        );
        let pv = FloerElement::basis(
            b1.clone(),
            vb.clone(),
            &slope_vertical_generator(&b1, &vb).unwrap(),
        );
        assert!(matches!(
            mu2_vertical(&p12, &pv, 1e-12),
            Err(FloerError::SlopeOrderViolation)
        ));
    }
}
