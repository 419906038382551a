//! Points of the Siegel upper half space, its tropical counterpart, and
//! the integer modular group actions on them.
//!
//! A point is written `tau = B + i*Omega` with `B` real symmetric and
//! `Omega` real symmetric positive definite. Integer matrices act through
//! the symplectic group `Sp(2g, Z)` (blocks `A, B, C, D` with
//! `M^T J M = J`), its parabolic subgroup (`C = 0`), and `GL(g, Z)` on the
//! positive definite part alone.

use nalgebra::Cholesky;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{
    asymmetry, complexify, condition_number, int_det, int_to_real, unimodular_inverse, CMat, IMat,
    RMat,
};

/// Largest genus the dense-matrix envelope supports.
pub const MAX_GENUS: usize = 8;

/// Positive definiteness margin: smallest eigenvalue must exceed this.
pub const PD_TOL: f64 = 1e-12;

/// Inputs asymmetric beyond this are refused rather than symmetrized.
pub const SYMMETRY_TOL: f64 = 1e-13;

/// Condition-number ceiling for the symplectic action denominator.
pub const DENOMINATOR_COND_LIMIT: f64 = 1e14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SiegelError {
    #[error("matrix is not symmetric (asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not positive definite (lambda_min {0:.3e})")]
    NotPositiveDefinite(f64),
    #[error("genus {0} outside the supported range 1..={MAX_GENUS}")]
    UnsupportedGenus(usize),
    #[error("dimension mismatch: expected {expected}x{expected}, got {got_rows}x{got_cols}")]
    DimensionMismatch {
        expected: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("integer matrix is not symplectic")]
    NotSymplectic,
    #[error("integer matrix is not unimodular")]
    NotUnimodular,
    #[error("blocks do not form a parabolic element (A B^T != B A^T or |det A| != 1)")]
    NotParabolic,
    #[error("C*tau + D is numerically singular (condition {0:.3e})")]
    SingularDenominator(f64),
}

/// A point `tau = B + i*Omega` of the genus-`g` Siegel upper half space.
///
/// Construction validates symmetry and positive definiteness; the
/// eigenvalue margin of `Omega` is kept for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    genus: usize,
    b: RMat,
    omega: RMat,
    lambda_min: f64,
}

impl SiegelPoint {
    pub fn genus(&self) -> usize {
        self.genus
    }

    /// The B-field part, `Re tau`.
    pub fn b(&self) -> &RMat {
        &self.b
    }

    /// The positive definite imaginary part, `Im tau`.
    pub fn omega(&self) -> &RMat {
        &self.omega
    }

    /// Smallest eigenvalue of `Omega`, the positive definiteness margin.
    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    /// `tau` as a dense complex matrix.
    pub fn as_complex(&self) -> CMat {
        CMat::from_fn(self.genus, self.genus, |i, j| {
            Complex64::new(self.b[(i, j)], self.omega[(i, j)])
        })
    }

    /// The point `k*tau` for a positive integer level `k`.
    pub fn scale(&self, k: i64) -> SiegelPoint {
        assert!(k > 0, "scale factor must be positive");
        let kf = k as f64;
        SiegelPoint {
            genus: self.genus,
            b: &self.b * kf,
            omega: &self.omega * kf,
            lambda_min: self.lambda_min * kf,
        }
    }

    /// Quadratic form `v^T tau v` for a real vector `v`.
    pub fn quad_form(&self, v: &crate::linalg::RVec) -> Complex64 {
        let bv = &self.b * v;
        let ov = &self.omega * v;
        Complex64::new(v.dot(&bv), v.dot(&ov))
    }
}

/// Validates `(B, Omega)` and assembles the Siegel point `B + i*Omega`.
///
/// Inputs must be square of matching size, symmetric within
/// [`SYMMETRY_TOL`] (they are then symmetrized exactly as `(X + X^T)/2`),
/// and `Omega` must have smallest eigenvalue above [`PD_TOL`].
pub fn validate_siegel(b: &RMat, omega: &RMat) -> Result<SiegelPoint, SiegelError> {
    let g = b.nrows();
    if g == 0 || g > MAX_GENUS {
        return Err(SiegelError::UnsupportedGenus(g));
    }
    for m in [b, omega] {
        if m.nrows() != g || m.ncols() != g {
            return Err(SiegelError::DimensionMismatch {
                expected: g,
                got_rows: m.nrows(),
                got_cols: m.ncols(),
            });
        }
    }
    let asym = asymmetry(b).max(asymmetry(omega));
    if asym > SYMMETRY_TOL {
        return Err(SiegelError::NotSymmetric(asym));
    }
    let b = (b + b.transpose()) * 0.5;
    let omega = (omega + omega.transpose()) * 0.5;
    let lambda_min = check_positive_definite(&omega)?;
    Ok(SiegelPoint {
        genus: g,
        b,
        omega,
        lambda_min,
    })
}

/// Cheap factorization gate, then the eigenvalue margin.
fn check_positive_definite(omega: &RMat) -> Result<f64, SiegelError> {
    let lambda_min = omega
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if Cholesky::new(omega.clone()).is_none() || lambda_min <= PD_TOL {
        return Err(SiegelError::NotPositiveDefinite(lambda_min));
    }
    Ok(lambda_min)
}

/// A point of the pure tropical Siegel space: a real symmetric positive
/// definite `g x g` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalPoint {
    omega: RMat,
    lambda_min: f64,
}

impl TropicalPoint {
    pub fn new(omega: &RMat) -> Result<Self, SiegelError> {
        let g = omega.nrows();
        if g == 0 || g > MAX_GENUS {
            return Err(SiegelError::UnsupportedGenus(g));
        }
        if omega.ncols() != g {
            return Err(SiegelError::DimensionMismatch {
                expected: g,
                got_rows: omega.nrows(),
                got_cols: omega.ncols(),
            });
        }
        let asym = asymmetry(omega);
        if asym > SYMMETRY_TOL {
            return Err(SiegelError::NotSymmetric(asym));
        }
        let omega = (omega + omega.transpose()) * 0.5;
        let lambda_min = check_positive_definite(&omega)?;
        Ok(TropicalPoint { omega, lambda_min })
    }

    pub fn genus(&self) -> usize {
        self.omega.nrows()
    }

    pub fn omega(&self) -> &RMat {
        &self.omega
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }
}

/// An element of `Sp(2g, Z)`, stored as its four integer blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticIntMatrix {
    genus: usize,
    a: IMat,
    b: IMat,
    c: IMat,
    d: IMat,
}

impl SymplecticIntMatrix {
    /// Builds from blocks, checking `M^T J M = J` in exact integer
    /// arithmetic.
    pub fn from_blocks(a: IMat, b: IMat, c: IMat, d: IMat) -> Result<Self, SiegelError> {
        let g = a.nrows();
        if g == 0 || g > MAX_GENUS {
            return Err(SiegelError::UnsupportedGenus(g));
        }
        for m in [&a, &b, &c, &d] {
            if m.nrows() != g || m.ncols() != g {
                return Err(SiegelError::DimensionMismatch {
                    expected: g,
                    got_rows: m.nrows(),
                    got_cols: m.ncols(),
                });
            }
        }
        let m = Self { genus: g, a, b, c, d };
        if !m.preserves_j() {
            return Err(SiegelError::NotSymplectic);
        }
        Ok(m)
    }

    /// The standard symplectic form matrix `J_g = [[0, I], [-I, 0]]`.
    pub fn j_matrix(g: usize) -> IMat {
        IMat::from_fn(2 * g, 2 * g, |i, j| {
            if i < g && j == i + g {
                1
            } else if i >= g && j == i - g {
                -1
            } else {
                0
            }
        })
    }

    pub fn identity(g: usize) -> Self {
        Self {
            genus: g,
            a: IMat::identity(g, g),
            b: IMat::zeros(g, g),
            c: IMat::zeros(g, g),
            d: IMat::identity(g, g),
        }
    }

    /// The element with blocks `(0, -I, I, 0)`, acting by `tau -> -tau^{-1}`.
    pub fn j_element(g: usize) -> Self {
        Self {
            genus: g,
            a: IMat::zeros(g, g),
            b: -IMat::identity(g, g),
            c: IMat::identity(g, g),
            d: IMat::zeros(g, g),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn block_a(&self) -> &IMat {
        &self.a
    }
    pub fn block_b(&self) -> &IMat {
        &self.b
    }
    pub fn block_c(&self) -> &IMat {
        &self.c
    }
    pub fn block_d(&self) -> &IMat {
        &self.d
    }

    /// The full `2g x 2g` integer matrix.
    pub fn full(&self) -> IMat {
        let g = self.genus;
        IMat::from_fn(2 * g, 2 * g, |i, j| match (i < g, j < g) {
            (true, true) => self.a[(i, j)],
            (true, false) => self.b[(i, j - g)],
            (false, true) => self.c[(i - g, j)],
            (false, false) => self.d[(i - g, j - g)],
        })
    }

    fn preserves_j(&self) -> bool {
        let m = self.full();
        let j = Self::j_matrix(self.genus);
        let n = 2 * self.genus;
        // M^T J M == J with i128 accumulation
        for row in 0..n {
            for col in 0..n {
                let mut acc: i128 = 0;
                for s in 0..n {
                    for t in 0..n {
                        acc += m[(s, row)] as i128 * j[(s, t)] as i128 * m[(t, col)] as i128;
                    }
                }
                if acc != j[(row, col)] as i128 {
                    return false;
                }
            }
        }
        true
    }

    /// Group multiplication (integer matrix product).
    pub fn compose(&self, other: &Self) -> Result<Self, SiegelError> {
        if self.genus != other.genus {
            return Err(SiegelError::DimensionMismatch {
                expected: self.genus,
                got_rows: other.genus,
                got_cols: other.genus,
            });
        }
        let p = self.full() * other.full();
        let g = self.genus;
        Self::from_blocks(
            p.view((0, 0), (g, g)).into(),
            p.view((0, g), (g, g)).into(),
            p.view((g, 0), (g, g)).into(),
            p.view((g, g), (g, g)).into(),
        )
    }
}

/// An element of the Siegel parabolic subgroup: blocks `A` (unimodular)
/// and `B` with `A B^T = B A^T`, embedding as `[[A, B], [0, (A^T)^{-1}]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicElement {
    a: IMat,
    b: IMat,
}

impl ParabolicElement {
    pub fn new(a: IMat, b: IMat) -> Result<Self, SiegelError> {
        let g = a.nrows();
        if g == 0 || g > MAX_GENUS {
            return Err(SiegelError::UnsupportedGenus(g));
        }
        for m in [&a, &b] {
            if m.nrows() != g || m.ncols() != g {
                return Err(SiegelError::DimensionMismatch {
                    expected: g,
                    got_rows: m.nrows(),
                    got_cols: m.ncols(),
                });
            }
        }
        let det = int_det(&a);
        if det != 1 && det != -1 {
            return Err(SiegelError::NotParabolic);
        }
        // A B^T symmetric, checked exactly
        let abt = &a * b.transpose();
        let bat = &b * a.transpose();
        if abt != bat {
            return Err(SiegelError::NotParabolic);
        }
        Ok(Self { a, b })
    }

    pub fn block_a(&self) -> &IMat {
        &self.a
    }
    pub fn block_b(&self) -> &IMat {
        &self.b
    }

    /// Embeds into `Sp(2g, Z)` with lower-left block zero.
    pub fn embed(&self) -> Result<SymplecticIntMatrix, SiegelError> {
        let g = self.a.nrows();
        let a_inv_t = unimodular_inverse(&self.a)
            .ok_or(SiegelError::NotParabolic)?
            .transpose();
        SymplecticIntMatrix::from_blocks(self.a.clone(), self.b.clone(), IMat::zeros(g, g), a_inv_t)
    }
}

/// The modular action `tau -> (A tau + B)(C tau + D)^{-1}`.
///
/// The result is re-validated; a denominator with condition number above
/// [`DENOMINATOR_COND_LIMIT`] is reported as numerical breakdown.
pub fn sp_act(m: &SymplecticIntMatrix, tau: &SiegelPoint) -> Result<SiegelPoint, SiegelError> {
    let g = tau.genus();
    if m.genus() != g {
        return Err(SiegelError::DimensionMismatch {
            expected: g,
            got_rows: m.genus(),
            got_cols: m.genus(),
        });
    }
    let tau_c = tau.as_complex();
    let a = complexify(&int_to_real(m.block_a()));
    let b = complexify(&int_to_real(m.block_b()));
    let c = complexify(&int_to_real(m.block_c()));
    let d = complexify(&int_to_real(m.block_d()));
    let num = &a * &tau_c + b;
    let den = &c * &tau_c + d;
    let cond = condition_number(&den);
    if !cond.is_finite() || cond > DENOMINATOR_COND_LIMIT {
        return Err(SiegelError::SingularDenominator(cond));
    }
    let den_inv = den
        .lu()
        .try_inverse()
        .ok_or(SiegelError::SingularDenominator(cond))?;
    let x = num * den_inv;
    // Exact arithmetic gives a symmetric result; project out roundoff.
    let sym = (&x + x.transpose()) * Complex64::new(0.5, 0.0);
    let re = sym.map(|v| v.re);
    let im = sym.map(|v| v.im);
    validate_siegel(&re, &im)
}

/// The parabolic action `tau -> (A tau + B) A^T`; its imaginary part is
/// `A Omega A^T` exactly.
pub fn parabolic_act(p: &ParabolicElement, tau: &SiegelPoint) -> Result<SiegelPoint, SiegelError> {
    let g = tau.genus();
    if p.block_a().nrows() != g {
        return Err(SiegelError::DimensionMismatch {
            expected: g,
            got_rows: p.block_a().nrows(),
            got_cols: p.block_a().ncols(),
        });
    }
    let a = int_to_real(p.block_a());
    let b = int_to_real(p.block_b());
    let re = &a * tau.b() * a.transpose() + &b * a.transpose();
    let im = &a * tau.omega() * a.transpose();
    let re = (&re + re.transpose()) * 0.5;
    let im = (&im + im.transpose()) * 0.5;
    validate_siegel(&re, &im)
}

/// The `GL(g, Z)` action `Omega -> A Omega A^T` on the tropical space.
pub fn gl_act(a: &IMat, omega: &TropicalPoint) -> Result<TropicalPoint, SiegelError> {
    let g = omega.genus();
    if a.nrows() != g || a.ncols() != g {
        return Err(SiegelError::DimensionMismatch {
            expected: g,
            got_rows: a.nrows(),
            got_cols: a.ncols(),
        });
    }
    let det = int_det(a);
    if det != 1 && det != -1 {
        return Err(SiegelError::NotUnimodular);
    }
    let ar = int_to_real(a);
    let out = &ar * omega.omega() * ar.transpose();
    TropicalPoint::new(&out)
}

/// Membership test for the symplectic group of a constant form `Omega`:
/// `A^T Omega D - C^T Omega B = Omega`, `A^T Omega C = C^T Omega A`,
/// `B^T Omega D = D^T Omega B`, each entrywise within `1e-10`.
pub fn is_sp_omega(m: &IMat, omega: &TropicalPoint) -> bool {
    let g = omega.genus();
    if m.nrows() != 2 * g || m.ncols() != 2 * g {
        return false;
    }
    let to_real = |r0: usize, c0: usize| RMat::from_fn(g, g, |i, j| m[(r0 + i, c0 + j)] as f64);
    let a = to_real(0, 0);
    let b = to_real(0, g);
    let c = to_real(g, 0);
    let d = to_real(g, g);
    let om = omega.omega();
    let tol = 1e-10;
    let r1 = a.transpose() * om * &d - c.transpose() * om * &b - om;
    let r2 = a.transpose() * om * &c - c.transpose() * om * &a;
    let r3 = b.transpose() * om * &d - d.transpose() * om * &b;
    [r1, r2, r3].iter().all(|r| r.amax() <= tol)
}

// --- JSON encoding -------------------------------------------------------
//
// {"g": int, "B": [[...]], "Omega": [[...]]}, row-major decimal floats.

#[derive(Serialize, Deserialize)]
struct SiegelPointRepr {
    g: usize,
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
    #[serde(rename = "Omega")]
    omega: Vec<Vec<f64>>,
}

fn rows(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>]) -> Option<RMat> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return None;
    }
    Some(RMat::from_fn(n, n, |i, j| rows[i][j]))
}

impl Serialize for SiegelPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SiegelPointRepr {
            g: self.genus,
            b: rows(&self.b),
            omega: rows(&self.omega),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SiegelPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SiegelPointRepr::deserialize(deserializer)?;
        let b = matrix_from_rows(&repr.b)
            .ok_or_else(|| D::Error::custom("B is not a square row-major matrix"))?;
        let omega = matrix_from_rows(&repr.omega)
            .ok_or_else(|| D::Error::custom("Omega is not a square row-major matrix"))?;
        if b.nrows() != repr.g {
            return Err(D::Error::custom("field g disagrees with matrix size"));
        }
        validate_siegel(&b, &omega).map_err(D::Error::custom)
    }
}
