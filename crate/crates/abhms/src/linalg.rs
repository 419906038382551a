//! Small dense matrix helpers shared across the crate.
//!
//! Everything here operates on `g x g` (or `2g x 2g`) matrices with
//! `g <= 8`, so plain dense algorithms are used throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type IMat = DMatrix<i64>;
pub type IVec = DVector<i64>;

/// Lifts a real matrix into the complex field.
pub fn complexify(m: &RMat) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| Complex64::new(m[(i, j)], 0.0))
}

/// Lifts an integer matrix into the reals.
pub fn int_to_real(m: &IMat) -> RMat {
    RMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] as f64)
}

/// Wraps a real number into the canonical interval `[0, 1)`.
pub fn wrap01(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Wraps every entry of a vector into `[0, 1)`.
pub fn wrap01_vec(v: &RVec) -> RVec {
    v.map(wrap01)
}

/// Distance between two reals on the circle `R/Z`.
pub fn circle_dist(x: f64, y: f64) -> f64 {
    let d = wrap01(x - y);
    d.min(1.0 - d)
}

/// True when two vectors agree componentwise on the torus `(R/Z)^g`,
/// with wraparound at 0/1.
pub fn torus_eq(x: &RVec, y: &RVec, tol: f64) -> bool {
    x.len() == y.len() && x.iter().zip(y.iter()).all(|(a, b)| circle_dist(*a, *b) <= tol)
}

/// Largest entrywise deviation from symmetry, `max |X - X^T|`.
pub fn asymmetry(m: &RMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Numerical rank from singular values, relative threshold on `sigma_max`.
pub fn svd_rank(m: &CMat, rel_threshold: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.max();
    if !(smax > 0.0) {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_threshold * smax).count()
}

/// 2-norm condition number; `inf` when the matrix is singular.
pub fn condition_number(m: &CMat) -> f64 {
    let sv = m.clone().singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if smin <= 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
pub fn int_det(m: &IMat) -> i128 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "determinant of a non-square matrix");
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)] as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Exact inverse of an integer matrix with determinant `+-1`.
///
/// Returns `None` when `|det| != 1`. The result satisfies `m * inv == I`
/// in exact integer arithmetic.
pub fn unimodular_inverse(m: &IMat) -> Option<IMat> {
    let n = m.nrows();
    let det = int_det(m);
    if det != 1 && det != -1 {
        return None;
    }
    let mut inv = IMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // adjugate: cofactor of (j, i)
            let minor = minor_matrix(m, j, i);
            let cof = int_det(&minor) * if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[(i, j)] = (cof * det) as i64;
        }
    }
    debug_assert_eq!(m * &inv, IMat::identity(n, n));
    Some(inv)
}

fn minor_matrix(m: &IMat, drop_row: usize, drop_col: usize) -> IMat {
    let n = m.nrows();
    IMat::from_fn(n - 1, n - 1, |i, j| {
        let r = if i < drop_row { i } else { i + 1 };
        let c = if j < drop_col { j } else { j + 1 };
        m[(r, c)]
    })
}

/// Binomial coefficient `g choose w`.
pub fn binom(g: usize, w: usize) -> u128 {
    if w > g {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..w.min(g - w) {
        acc = acc * (g - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `base^exp` as an exact 128-bit integer.
pub fn upow(base: u128, exp: usize) -> u128 {
    base.pow(exp as u32)
}

/// Odometer over the integer box `prod_j [lo_j, hi_j]`, visited in
/// lexicographic order. Calls `f` with each multi-index.
pub fn for_each_lattice_point(ranges: &[(i64, i64)], mut f: impl FnMut(&[i64])) {
    let g = ranges.len();
    if g == 0 {
        f(&[]);
        return;
    }
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return;
    }
    let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        f(&idx);
        let mut axis = g;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            if idx[axis] < ranges[axis].1 {
                idx[axis] += 1;
                for r in axis + 1..g {
                    idx[r] = ranges[r].0;
                }
                break;
            }
        }
    }
}

/// All multi-indices in `{0, .., k-1}^g` in lexicographic order.
pub fn index_box(k: i64, g: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let ranges: Vec<(i64, i64)> = (0..g).map(|_| (0, k - 1)).collect();
    for_each_lattice_point(&ranges, |idx| out.push(idx.to_vec()));
    out
}
