//! The holomorphic side: line bundle labels on the abelian variety,
//! explicit section bases via shifted theta functions, Ext dimension
//! tables, the multiplication formula with its structure constants, and
//! the graded ring of sections.
//!
//! Conventions. A line bundle label is a level `k` together with a
//! translate `z = a + tau*b` (`a` the phase slot, `b` the frequency slot;
//! the basis section with index `lambda` is the function
//! `theta[(b + lambda)/k, a](k*tau, k*z)`). Translates on labels are kept
//! as the exact real vectors handed in rather than reduced mod 1: reducing
//! changes the basis by a permutation and per-index phases, so raw
//! representatives keep product bookkeeping exact. Canonical torus points
//! (entries in `[0,1)`) are used where only the point class matters:
//! moduli comparisons and Ext dimension tables.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{binom, index_box, torus_eq, upow, wrap01_vec, CVec, RVec};
use crate::siegel::SiegelPoint;
use crate::theta::{theta_eval, ThetaChar, ThetaError, ThetaRequest};

/// Wraparound threshold for equality of canonical torus coordinates.
pub const TORUS_EQ_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SectionError {
    #[error("level must be positive, got {0}")]
    LevelNotPositive(i64),
    #[error("level order violated: need k' < k'', got {0} >= {1}")]
    LevelOrderViolation(i64, i64),
    #[error("operands live over different moduli")]
    ModulusMismatch,
    #[error("section index {0:?} outside the index box for level {1}")]
    IndexOutOfRange(Vec<i64>, i64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("expected a {expected} operand")]
    WrongDuality { expected: &'static str },
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// A point of the torus `V_tau` in canonical coordinates:
/// `z = a + tau*b` with `a, b` componentwise in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    a: RVec,
    b: RVec,
}

impl TorusPoint {
    /// Wraps the given coordinates into `[0, 1)`.
    pub fn new(a: RVec, b: RVec) -> Result<Self, SectionError> {
        if a.len() != b.len() {
            return Err(SectionError::DimensionMismatch(format!(
                "coordinate lengths differ: {} vs {}",
                a.len(),
                b.len()
            )));
        }
        Ok(Self {
            a: wrap01_vec(&a),
            b: wrap01_vec(&b),
        })
    }

    pub fn zero(g: usize) -> Self {
        Self {
            a: RVec::zeros(g),
            b: RVec::zeros(g),
        }
    }

    pub fn genus(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &RVec {
        &self.a
    }

    pub fn b(&self) -> &RVec {
        &self.b
    }

    /// The representative `z = a + tau*b`.
    pub fn z(&self, tau: &SiegelPoint) -> CVec {
        translate_z(tau, &self.a, &self.b)
    }

    /// Componentwise equality on the torus, wraparound at 0/1.
    pub fn torus_eq(&self, other: &TorusPoint) -> bool {
        torus_eq(&self.a, &other.a, TORUS_EQ_TOL) && torus_eq(&self.b, &other.b, TORUS_EQ_TOL)
    }
}

fn translate_z(tau: &SiegelPoint, a: &RVec, b: &RVec) -> CVec {
    let bb = tau.b() * b;
    let ob = tau.omega() * b;
    CVec::from_fn(a.len(), |j, _| Complex64::new(a[j] + bb[j], ob[j]))
}

/// Splits `z` as `a + tau*b` and reduces both coordinates mod 1.
///
/// Adding any lattice vector `m + tau*n` to `z` yields the identical
/// canonical point.
pub fn reduce_torus_point(tau: &SiegelPoint, z: &CVec) -> Result<TorusPoint, SectionError> {
    let g = tau.genus();
    if z.len() != g {
        return Err(SectionError::DimensionMismatch(format!(
            "z has length {}, expected {}",
            z.len(),
            g
        )));
    }
    let y = z.map(|v| v.im);
    let b_unreduced = tau
        .omega()
        .clone()
        .lu()
        .solve(&y)
        .ok_or_else(|| SectionError::DimensionMismatch("Omega numerically singular".into()))?;
    let a_unreduced = z.map(|v| v.re) - tau.b() * &b_unreduced;
    TorusPoint::new(a_unreduced, b_unreduced)
}

/// A translate `z = a + tau*b` attached to a line bundle label, kept as
/// the exact (unreduced) real vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Translate {
    pub a: RVec,
    pub b: RVec,
}

impl Translate {
    pub fn zero(g: usize) -> Self {
        Self {
            a: RVec::zeros(g),
            b: RVec::zeros(g),
        }
    }

    pub fn from_torus_point(p: &TorusPoint) -> Self {
        Self {
            a: p.a().clone(),
            b: p.b().clone(),
        }
    }

    pub fn genus(&self) -> usize {
        self.a.len()
    }

    /// The canonical point class of this translate.
    pub fn reduced(&self) -> TorusPoint {
        TorusPoint::new(self.a.clone(), self.b.clone()).expect("lengths agree")
    }

    pub fn z(&self, tau: &SiegelPoint) -> CVec {
        translate_z(tau, &self.a, &self.b)
    }

    fn add(&self, other: &Translate) -> Translate {
        Translate {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
        }
    }

    fn sub(&self, other: &Translate) -> Translate {
        Translate {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
        }
    }
}

/// A line bundle label: a level and a translate.
#[derive(Debug, Clone, PartialEq)]
pub struct LineBundleLabel {
    pub level: i64,
    pub translate: Translate,
}

impl LineBundleLabel {
    pub fn new(level: i64, translate: Translate) -> Self {
        Self { level, translate }
    }

    pub fn power(level: i64, g: usize) -> Self {
        Self {
            level,
            translate: Translate::zero(g),
        }
    }
}

/// An element of the global-section space at level `k > 0` (basis
/// `s_{k,z,lambda}`) or, with `dual` set, of the top-cohomology space at
/// level `-k` (the dual basis `s^{k,z,lambda}`), stored as coefficients
/// over the `|k|^g` index box.
#[derive(Debug, Clone)]
pub struct SectionVector {
    tau: SiegelPoint,
    label: LineBundleLabel,
    dual: bool,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

impl SectionVector {
    pub fn zero(tau: SiegelPoint, label: LineBundleLabel, dual: bool) -> Result<Self, SectionError> {
        if label.level < 1 {
            return Err(SectionError::LevelNotPositive(label.level));
        }
        Ok(Self {
            tau,
            label,
            dual,
            coeffs: BTreeMap::new(),
        })
    }

    /// The basis element with the given index.
    pub fn basis(
        tau: SiegelPoint,
        label: LineBundleLabel,
        dual: bool,
        lambda: &[i64],
    ) -> Result<Self, SectionError> {
        let mut v = Self::zero(tau, label, dual)?;
        v.check_index(lambda)?;
        v.coeffs.insert(lambda.to_vec(), Complex64::new(1.0, 0.0));
        Ok(v)
    }

    fn check_index(&self, lambda: &[i64]) -> Result<(), SectionError> {
        let g = self.tau.genus();
        let k = self.label.level;
        if lambda.len() != g || lambda.iter().any(|&l| l < 0 || l >= k) {
            return Err(SectionError::IndexOutOfRange(lambda.to_vec(), k));
        }
        Ok(())
    }

    pub fn set(&mut self, lambda: &[i64], value: Complex64) -> Result<(), SectionError> {
        self.check_index(lambda)?;
        if value == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(lambda);
        } else {
            self.coeffs.insert(lambda.to_vec(), value);
        }
        Ok(())
    }

    pub fn tau(&self) -> &SiegelPoint {
        &self.tau
    }

    pub fn label(&self) -> &LineBundleLabel {
        &self.label
    }

    pub fn dual(&self) -> bool {
        self.dual
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<i64>, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, lambda: &[i64]) -> Complex64 {
        self.coeffs
            .get(lambda)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Largest coefficient magnitude (0 for the zero vector).
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Max coefficientwise deviation from `other` (indices aligned).
    pub fn max_diff(&self, other: &SectionVector) -> f64 {
        let mut worst = 0.0f64;
        for key in self.coeffs.keys().chain(other.coeffs.keys()) {
            worst = worst.max((self.coeff(key) - other.coeff(key)).norm());
        }
        worst
    }

    /// Evaluates the (non-dual) section at the argument `z`.
    pub fn value_at(&self, z: &CVec, tol: f64) -> Result<Complex64, SectionError> {
        if self.dual {
            return Err(SectionError::WrongDuality {
                expected: "non-dual",
            });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (lambda, coef) in &self.coeffs {
            total += coef * section_value(&self.tau, &self.label, lambda, z, tol)?;
        }
        Ok(total)
    }
}

/// Value of the basis section `s_{k, z_label, lambda}` at the argument
/// `z`: the theta value `theta[(b + lambda)/k, a](k*tau, k*z)`.
pub fn section_value(
    tau: &SiegelPoint,
    label: &LineBundleLabel,
    lambda: &[i64],
    z: &CVec,
    tol: f64,
) -> Result<Complex64, SectionError> {
    let k = label.level;
    if k < 1 {
        return Err(SectionError::LevelNotPositive(k));
    }
    let g = tau.genus();
    if lambda.len() != g || z.len() != g {
        return Err(SectionError::DimensionMismatch(format!(
            "lambda/z lengths {}/{} for genus {}",
            lambda.len(),
            z.len(),
            g
        )));
    }
    let kf = k as f64;
    let c = RVec::from_fn(g, |j, _| (label.translate.b[j] + lambda[j] as f64) / kf);
    let chr = ThetaChar::new(c, label.translate.a.clone())?;
    let kz = z.map(|v| v * kf);
    let req = ThetaRequest::new(tau.scale(k), kz, chr, tol)?;
    Ok(theta_eval(&req)?)
}

/// Dimension of the space of global sections at level `k >= 1`: `k^g`.
pub fn h0_dim(k: i64, g: usize) -> Result<u128, SectionError> {
    if k < 1 {
        return Err(SectionError::LevelNotPositive(k));
    }
    Ok(upow(k as u128, g))
}

/// The Ext dimension table between labels `(k, [z])` and `(k', [z'])`:
/// entry `w` is `dim Ext^w`, for `w = 0..=g`.
pub fn ext_dims(k: i64, kp: i64, z: &TorusPoint, zp: &TorusPoint, g: usize) -> Vec<u128> {
    let mut dims = vec![0u128; g + 1];
    if kp > k {
        dims[0] = upow((kp - k) as u128, g);
    } else if kp < k {
        dims[g] = upow((k - kp) as u128, g);
    } else if z.torus_eq(zp) {
        for (w, slot) in dims.iter_mut().enumerate() {
            *slot = binom(g, w);
        }
    }
    dims
}

/// Unique split `n' = n + k''*nt + w`, `n'' = n - k'*nt` with
/// `w` in `{0,..,k'+k''-1}^g`, via the per-axis Euclidean remainder of
/// `n' - n''` mod `k' + k''`.
pub fn lattice_split(
    kp: i64,
    kpp: i64,
    np: &[i64],
    npp: &[i64],
) -> Result<(Vec<i64>, Vec<i64>, Vec<i64>), SectionError> {
    if kp < 1 {
        return Err(SectionError::LevelNotPositive(kp));
    }
    if kpp < 1 {
        return Err(SectionError::LevelNotPositive(kpp));
    }
    if np.len() != npp.len() {
        return Err(SectionError::DimensionMismatch(format!(
            "vector lengths differ: {} vs {}",
            np.len(),
            npp.len()
        )));
    }
    let big_k = kp + kpp;
    let mut n = Vec::with_capacity(np.len());
    let mut nt = Vec::with_capacity(np.len());
    let mut w = Vec::with_capacity(np.len());
    for j in 0..np.len() {
        let diff = np[j] - npp[j];
        let wj = diff.rem_euclid(big_k);
        let ntj = (diff - wj) / big_k;
        n.push(npp[j] + kp * ntj);
        nt.push(ntj);
        w.push(wj);
    }
    Ok((n, nt, w))
}

/// Structure constants of one basis product: the coefficients, indexed by
/// `w` in `{0..k'+k''-1}^g`, multiplying the output basis element with
/// index `(lambda' + lambda'' + k'*w) mod (k'+k'')`.
///
/// `ct1 = b_translate' + lambda'` and `ct2 = b_translate'' + lambda''` are
/// the effective frequency shifts of the two factors.
fn product_constant(
    tau: &SiegelPoint,
    k1: i64,
    ct1: &RVec,
    d1: &RVec,
    k2: i64,
    ct2: &RVec,
    d2: &RVec,
    w: &[i64],
    tol: f64,
) -> Result<Complex64, SectionError> {
    let g = tau.genus();
    let prod = k1 * k2 * (k1 + k2);
    let denom = prod as f64;
    let c = RVec::from_fn(g, |j, _| {
        ((k1 * k2 * w[j]) as f64 + k2 as f64 * ct1[j] - k1 as f64 * ct2[j]) / denom
    });
    let d = RVec::from_fn(g, |j, _| k2 as f64 * d1[j] - k1 as f64 * d2[j]);
    let chr = ThetaChar::new(c, d)?;
    let req = ThetaRequest::constant(tau.scale(prod), chr, tol)?;
    Ok(theta_eval(&req)?)
}

/// Coefficients of one basis product `s_{k1, z1, lam1} * s_{k2, z2, lam2}`
/// over the output basis at level `k1 + k2`.
///
/// The index vectors may lie outside the canonical box: shifting `lam1` by
/// `k1 * n` relabels the `w`-sum without changing the aggregate, so out-of
/// -range indices produce the identical output coefficients.
pub(crate) fn basis_product_coeffs(
    tau: &SiegelPoint,
    k1: i64,
    t1: &Translate,
    lam1: &[i64],
    k2: i64,
    t2: &Translate,
    lam2: &[i64],
    tol: f64,
) -> Result<BTreeMap<Vec<i64>, Complex64>, SectionError> {
    let g = tau.genus();
    let big_k = k1 + k2;
    let ct1 = RVec::from_fn(g, |j, _| t1.b[j] + lam1[j] as f64);
    let ct2 = RVec::from_fn(g, |j, _| t2.b[j] + lam2[j] as f64);
    let mut out: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    for w in index_box(big_k, g) {
        let cw = product_constant(tau, k1, &ct1, &t1.a, k2, &ct2, &t2.a, &w, tol)?;
        let lam_out: Vec<i64> = (0..g)
            .map(|j| (lam1[j] + lam2[j] + k1 * w[j]).rem_euclid(big_k))
            .collect();
        *out.entry(lam_out).or_insert(Complex64::new(0.0, 0.0)) += cw;
    }
    Ok(out)
}

/// Pointwise product of two section vectors, expanded over the basis of
/// the target level `k' + k''` with translate `z' + z''`.
///
/// For basis inputs the output coefficient on
/// `lambda = (lambda' + lambda'' + k'*w) mod (k'+k'')` is the theta
/// constant of [`product_constant`]; the general case extends bilinearly.
pub fn multiply_sections(
    sp: &SectionVector,
    spp: &SectionVector,
    tol: f64,
) -> Result<SectionVector, SectionError> {
    if sp.dual || spp.dual {
        return Err(SectionError::WrongDuality {
            expected: "non-dual",
        });
    }
    if sp.tau != spp.tau {
        return Err(SectionError::ModulusMismatch);
    }
    let (k1, k2) = (sp.label.level, spp.label.level);
    if k1 < 1 {
        return Err(SectionError::LevelNotPositive(k1));
    }
    if k2 < 1 {
        return Err(SectionError::LevelNotPositive(k2));
    }
    let big_k = k1 + k2;
    let out_label = LineBundleLabel::new(big_k, sp.label.translate.add(&spp.label.translate));
    let mut out = SectionVector::zero(sp.tau.clone(), out_label, false)?;
    for (lam1, coef1) in &sp.coeffs {
        for (lam2, coef2) in &spp.coeffs {
            let amp = coef1 * coef2;
            let block = basis_product_coeffs(
                &sp.tau,
                k1,
                &sp.label.translate,
                lam1,
                k2,
                &spp.label.translate,
                lam2,
                tol,
            )?;
            for (lam_out, cw) in block {
                let prev = out.coeff(&lam_out);
                out.set(&lam_out, prev + amp * cw)?;
            }
        }
    }
    Ok(out)
}

/// Product of a section with a dual vector of strictly higher level:
/// the output is dual at level `k'' - k'` with translate `z'' - z'`, and
/// its coefficient on dual index `lambda` is the structure constant that
/// `multiply_sections` would place on `lambda''` in the product
/// `s_{k',z',lambda'} * s_{k''-k', z''-z', lambda}`.
pub fn serre_dual_product(
    sp: &SectionVector,
    sdual: &SectionVector,
    tol: f64,
) -> Result<SectionVector, SectionError> {
    if sp.dual {
        return Err(SectionError::WrongDuality {
            expected: "non-dual",
        });
    }
    if !sdual.dual {
        return Err(SectionError::WrongDuality { expected: "dual" });
    }
    if sp.tau != sdual.tau {
        return Err(SectionError::ModulusMismatch);
    }
    let (k1, k2) = (sp.label.level, sdual.label.level);
    if k1 >= k2 {
        return Err(SectionError::LevelOrderViolation(k1, k2));
    }
    let g = sp.tau.genus();
    let k_out = k2 - k1;
    let mid_translate = sdual.label.translate.sub(&sp.label.translate);
    let out_label = LineBundleLabel::new(k_out, mid_translate.clone());
    let mut out = SectionVector::zero(sp.tau.clone(), out_label, true)?;
    for (lam1, coef1) in &sp.coeffs {
        for lam in index_box(k_out, g) {
            // coefficient of s_{k2, z'', lambda''} in the product
            // s_{k1, z', lam1} * s_{k_out, z''-z', lam}, contracted with
            // the dual coefficients
            let block = basis_product_coeffs(
                &sp.tau,
                k1,
                &sp.label.translate,
                lam1,
                k_out,
                &mid_translate,
                &lam,
                tol,
            )?;
            let mut acc = Complex64::new(0.0, 0.0);
            for (lam_top, cw) in block {
                let cdual = sdual.coeff(&lam_top);
                if cdual != Complex64::new(0.0, 0.0) {
                    acc += cdual * cw;
                }
            }
            if acc != Complex64::new(0.0, 0.0) {
                let prev = out.coeff(&lam);
                out.set(&lam, prev + coef1 * acc)?;
            }
        }
    }
    Ok(out)
}

/// The perfect pairing of a level-`k` section against a level-`k` dual
/// vector: on basis pairs it is `delta_lambda^lambda'` (the coefficient on
/// the canonical top class).
pub fn dual_pairing(sp: &SectionVector, sdual: &SectionVector) -> Result<Complex64, SectionError> {
    if sp.dual {
        return Err(SectionError::WrongDuality {
            expected: "non-dual",
        });
    }
    if !sdual.dual {
        return Err(SectionError::WrongDuality { expected: "dual" });
    }
    if sp.tau != sdual.tau {
        return Err(SectionError::ModulusMismatch);
    }
    if sp.label.level != sdual.label.level {
        return Err(SectionError::LevelOrderViolation(
            sp.label.level,
            sdual.label.level,
        ));
    }
    if !sp
        .label
        .translate
        .reduced()
        .torus_eq(&sdual.label.translate.reduced())
    {
        return Err(SectionError::ModulusMismatch);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (lam, c) in &sp.coeffs {
        acc += c * sdual.coeff(lam);
    }
    Ok(acc)
}

/// The graded structure-constant table of the ring of sections up to a
/// degree bound: for every `1 <= d', d''` with `d' + d'' <= d_max`, the
/// full coefficient tensor of the product
/// `H^0(L^{d'}) x H^0(L^{d''}) -> H^0(L^{d'+d''})` in the `s`-bases
/// (translates zero).
#[derive(Debug, Clone)]
pub struct RingTable {
    pub g: usize,
    pub d_max: i64,
    /// `(d', d'') -> (lambda', lambda'') -> lambda -> coefficient`
    pub blocks: BTreeMap<(i64, i64), BTreeMap<(Vec<i64>, Vec<i64>), BTreeMap<Vec<i64>, Complex64>>>,
}

impl RingTable {
    /// Coefficient of `lambda` in the product of basis elements
    /// `(d1, lambda1) * (d2, lambda2)`.
    pub fn coefficient(
        &self,
        d1: i64,
        lambda1: &[i64],
        d2: i64,
        lambda2: &[i64],
        lambda: &[i64],
    ) -> Complex64 {
        self.blocks
            .get(&(d1, d2))
            .and_then(|b| b.get(&(lambda1.to_vec(), lambda2.to_vec())))
            .and_then(|m| m.get(lambda))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// Builds the ring-of-sections table up to total degree `d_max`.
pub fn ring_table(tau: &SiegelPoint, d_max: i64, tol: f64) -> Result<RingTable, SectionError> {
    if d_max < 2 {
        return Err(SectionError::DimensionMismatch(
            "d_max must be at least 2".into(),
        ));
    }
    let g = tau.genus();
    let mut blocks = BTreeMap::new();
    for d1 in 1..d_max {
        for d2 in 1..=(d_max - d1) {
            let mut block = BTreeMap::new();
            for lam1 in index_box(d1, g) {
                for lam2 in index_box(d2, g) {
                    let s1 = SectionVector::basis(
                        tau.clone(),
                        LineBundleLabel::power(d1, g),
                        false,
                        &lam1,
                    )?;
                    let s2 = SectionVector::basis(
                        tau.clone(),
                        LineBundleLabel::power(d2, g),
                        false,
                        &lam2,
                    )?;
                    let prod = multiply_sections(&s1, &s2, tol)?;
                    block.insert((lam1.clone(), lam2.clone()), prod.coeffs.clone());
                }
            }
            blocks.insert((d1, d2), block);
        }
    }
    Ok(RingTable { g, d_max, blocks })
}

/// Largest associativity defect of the table over basis triples with
/// `d1 + d2 + d3 <= d_max`.
pub fn ring_associativity_residual(table: &RingTable) -> f64 {
    let g = table.g;
    let mut worst = 0.0f64;
    for d1 in 1..table.d_max {
        for d2 in 1..table.d_max {
            for d3 in 1..table.d_max {
                if d1 + d2 + d3 > table.d_max {
                    continue;
                }
                for lam1 in index_box(d1, g) {
                    for lam2 in index_box(d2, g) {
                        for lam3 in index_box(d3, g) {
                            for lam_out in index_box(d1 + d2 + d3, g) {
                                // ((1*2)*3) vs (1*(2*3))
                                let mut left = Complex64::new(0.0, 0.0);
                                for mid in index_box(d1 + d2, g) {
                                    left += table.coefficient(d1, &lam1, d2, &lam2, &mid)
                                        * table.coefficient(d1 + d2, &mid, d3, &lam3, &lam_out);
                                }
                                let mut right = Complex64::new(0.0, 0.0);
                                for mid in index_box(d2 + d3, g) {
                                    right += table.coefficient(d2, &lam2, d3, &lam3, &mid)
                                        * table.coefficient(d1, &lam1, d2 + d3, &mid, &lam_out);
                                }
                                worst = worst.max((left - right).norm());
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

/// Largest graded-commutativity defect of the table (all degrees are even
/// in the section ring, so plain symmetry).
pub fn ring_commutativity_residual(table: &RingTable) -> f64 {
    let g = table.g;
    let mut worst = 0.0f64;
    for (&(d1, d2), block) in &table.blocks {
        let Some(swapped) = table.blocks.get(&(d2, d1)) else {
            continue;
        };
        for ((lam1, lam2), coeffs) in block {
            let other = swapped.get(&(lam2.clone(), lam1.clone()));
            for lam in index_box(d1 + d2, g) {
                let a = coeffs.get(&lam).copied().unwrap_or(Complex64::new(0.0, 0.0));
                let b = other
                    .and_then(|m| m.get(&lam))
                    .copied()
                    .unwrap_or(Complex64::new(0.0, 0.0));
                worst = worst.max((a - b).norm());
            }
        }
    }
    worst
}

// --- JSON encoding -------------------------------------------------------
//
// {"k": int, "dual": bool, "translate": {"a": [...], "b": [...]},
//  "coeffs": [{"lambda": [...], "re": f, "im": f}]}, coefficients sorted
// lexicographically by lambda.

impl serde::Serialize for SectionVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SectionVector", 4)?;
        st.serialize_field("k", &self.label.level)?;
        st.serialize_field("dual", &self.dual)?;
        st.serialize_field(
            "translate",
            &serde_json::json!({
                "a": self.label.translate.a.iter().copied().collect::<Vec<f64>>(),
                "b": self.label.translate.b.iter().copied().collect::<Vec<f64>>(),
            }),
        )?;
        let coeffs: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(lam, c)| serde_json::json!({"lambda": lam, "re": c.re, "im": c.im}))
            .collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}
