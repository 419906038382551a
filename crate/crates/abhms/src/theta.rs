//! Genus-`g` theta functions with characteristics, evaluated to a
//! requested absolute tolerance with a certified truncation box.
//!
//! The series evaluated here is
//!
//! ```text
//! theta[c,d](tau, z) = sum_{n in Z^g} exp( pi*i (n+c)^T tau (n+c)
//!                                        + 2*pi*i (n+c)^T (z+d) )
//! ```
//!
//! Everything works in `z`-coordinates (`x = e^{2 pi i z}` is never formed
//! as a standalone value), which keeps `x^{n+c}` single-valued. Summation
//! runs in lexicographic order over a fixed integer box, so results are
//! bit-reproducible for a fixed box.
//!
//! Truncation: the term magnitude is governed by the Gaussian
//! `exp(-pi (m - mu)^T Omega (m - mu))` around a real center `mu`, so a
//! per-axis radius `R` with tail bound driven by `lambda_min(Omega)`
//! certifies an absolute error below the requested tolerance.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{for_each_lattice_point, CVec, RVec};
use crate::siegel::SiegelPoint;

/// Default absolute truncation error target.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Cap on the number of lattice terms a single evaluation may sum.
pub const DEFAULT_BOX_CAP: u128 = 100_000_000;

const PI: f64 = std::f64::consts::PI;
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaError {
    #[error("lattice box needs {terms} terms, above the cap {cap} (tolerance unreachable for this Omega)")]
    BoxTooLarge { terms: u128, cap: u128 },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

/// A characteristic pair `(c, d)` of real `g`-vectors shifting the series.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaChar {
    c: RVec,
    d: RVec,
}

impl ThetaChar {
    pub fn new(c: RVec, d: RVec) -> Result<Self, ThetaError> {
        if c.len() != d.len() {
            return Err(ThetaError::InvalidRequest(format!(
                "characteristic lengths differ: {} vs {}",
                c.len(),
                d.len()
            )));
        }
        if c.iter().chain(d.iter()).any(|v| !v.is_finite()) {
            return Err(ThetaError::InvalidRequest(
                "characteristic entries must be finite".into(),
            ));
        }
        Ok(Self { c, d })
    }

    pub fn zero(g: usize) -> Self {
        Self {
            c: RVec::zeros(g),
            d: RVec::zeros(g),
        }
    }

    pub fn c(&self) -> &RVec {
        &self.c
    }

    pub fn d(&self) -> &RVec {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.len() == 0
    }
}

/// One theta evaluation: modulus, argument, characteristic, tolerance.
#[derive(Debug, Clone)]
pub struct ThetaRequest {
    pub tau: SiegelPoint,
    pub z: CVec,
    pub chr: ThetaChar,
    pub tol: f64,
    /// Kahan-compensated accumulation; off by default (determinism-first,
    /// the box tolerance already dominates roundoff at these sizes).
    pub compensated: bool,
}

impl ThetaRequest {
    pub fn new(tau: SiegelPoint, z: CVec, chr: ThetaChar, tol: f64) -> Result<Self, ThetaError> {
        let g = tau.genus();
        if z.len() != g || chr.len() != g {
            return Err(ThetaError::InvalidRequest(format!(
                "genus {} but |z| = {}, |char| = {}",
                g,
                z.len(),
                chr.len()
            )));
        }
        if !(tol > 0.0) {
            return Err(ThetaError::InvalidRequest("tol must be positive".into()));
        }
        if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(ThetaError::InvalidRequest("z entries must be finite".into()));
        }
        Ok(Self {
            tau,
            z,
            chr,
            tol,
            compensated: false,
        })
    }

    /// Zero-argument request (theta constants).
    pub fn constant(tau: SiegelPoint, chr: ThetaChar, tol: f64) -> Result<Self, ThetaError> {
        let g = tau.genus();
        Self::new(tau, CVec::zeros(g), chr, tol)
    }
}

/// The integer summation box: all `n` with `|n_j - center_j| <= radius`.
#[derive(Debug, Clone)]
pub struct LatticeBox {
    pub center: RVec,
    pub radius: f64,
    pub ranges: Vec<(i64, i64)>,
    pub cardinality: u128,
}

impl LatticeBox {
    fn around(center: &RVec, radius: f64) -> Self {
        let ranges: Vec<(i64, i64)> = center
            .iter()
            .map(|&c| {
                let lo = (c - radius).ceil() as i64;
                let hi = (c + radius).floor() as i64;
                (lo, hi)
            })
            .collect();
        let cardinality = ranges
            .iter()
            .map(|(lo, hi)| if hi >= lo { (hi - lo + 1) as u128 } else { 0 })
            .product();
        LatticeBox {
            center: center.clone(),
            radius,
            ranges,
            cardinality,
        }
    }
}

/// One-sided Gaussian tail `2 sum_{j>=0} exp(-pi l (r+j)^2)`, bounded in
/// closed form by `2 exp(-pi l r^2) / (1 - exp(-2 pi l r))`.
fn axis_tail_bound(lambda: f64, r: f64) -> f64 {
    let denom = 1.0 - (-TWO_PI * lambda * r).exp();
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    2.0 * (-PI * lambda * r * r).exp() / denom
}

/// Full one-axis sum bound `sum_{k in Z} exp(-pi l k^2)` (worst alignment).
fn axis_full_bound(lambda: f64) -> f64 {
    let denom = 1.0 - (-TWO_PI * lambda).exp();
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    1.0 + 2.0 * (-PI * lambda).exp() / denom
}

/// Chooses a lattice box whose exterior tail sum is provably below `tol`.
///
/// The box is centered at `-c - Omega^{-1} Im(z)` (the maximum of the term
/// magnitude); the radius comes from the per-axis Gaussian bound with the
/// global `lambda_min(Omega)`.
pub fn truncation_radius(
    tau: &SiegelPoint,
    chr: &ThetaChar,
    z: &CVec,
    tol: f64,
) -> Result<LatticeBox, ThetaError> {
    truncation_radius_capped(tau, chr, z, tol, DEFAULT_BOX_CAP)
}

/// [`truncation_radius`] with an explicit cap on the box cardinality.
pub fn truncation_radius_capped(
    tau: &SiegelPoint,
    chr: &ThetaChar,
    z: &CVec,
    tol: f64,
    cap: u128,
) -> Result<LatticeBox, ThetaError> {
    if !(tol > 0.0) {
        return Err(ThetaError::InvalidRequest("tol must be positive".into()));
    }
    let g = tau.genus();
    let lambda = tau.lambda_min();
    let y = z.map(|v| v.im);
    // center of the Gaussian in n-coordinates: -c - Omega^{-1} y
    let omega_inv_y = tau
        .omega()
        .clone()
        .lu()
        .solve(&y)
        .ok_or_else(|| ThetaError::InvalidRequest("Omega is numerically singular".into()))?;
    let center = -(chr.c() + &omega_inv_y);
    // scale factor exp(pi y^T Omega^{-1} y) from completing the square
    let prefactor = (PI * y.dot(&omega_inv_y)).exp();
    let full = axis_full_bound(lambda);

    let mut radius = 1.0f64;
    loop {
        let tail = prefactor * g as f64 * axis_tail_bound(lambda, radius) * full.powi(g as i32 - 1);
        let bx = LatticeBox::around(&center, radius);
        if bx.cardinality > cap {
            return Err(ThetaError::BoxTooLarge {
                terms: bx.cardinality,
                cap,
            });
        }
        if tail < tol {
            return Ok(bx);
        }
        radius += 1.0;
    }
}

/// Evaluates the theta series over its certified box.
///
/// The absolute truncation error is below `req.tol`; repeated calls with
/// identical inputs return bit-identical values.
pub fn theta_eval(req: &ThetaRequest) -> Result<Complex64, ThetaError> {
    theta_eval_with_box(req).map(|(v, _)| v)
}

/// [`theta_eval`] also returning the box that was summed.
pub fn theta_eval_with_box(req: &ThetaRequest) -> Result<(Complex64, LatticeBox), ThetaError> {
    let bx = truncation_radius(&req.tau, &req.chr, &req.z, req.tol)?;
    let g = req.tau.genus();
    let b = req.tau.b();
    let omega = req.tau.omega();
    let x_re = req.z.map(|v| v.re);
    let y_im = req.z.map(|v| v.im);
    let c = req.chr.c();
    let d = req.chr.d();

    let mut sum_re = 0.0f64;
    let mut sum_im = 0.0f64;
    let mut comp_re = 0.0f64;
    let mut comp_im = 0.0f64;
    let mut m = RVec::zeros(g);
    for_each_lattice_point(&bx.ranges, |n| {
        for j in 0..g {
            m[j] = n[j] as f64 + c[j];
        }
        let bm = b * &m;
        let om = omega * &m;
        // pi*i m^T tau m + 2*pi*i m^T (z + d)
        let re_exp = -PI * m.dot(&om) - TWO_PI * m.dot(&y_im);
        let im_exp = PI * m.dot(&bm) + TWO_PI * (m.dot(&x_re) + m.dot(d));
        let scale = re_exp.exp();
        let (s, co) = im_exp.sin_cos();
        let term_re = scale * co;
        let term_im = scale * s;
        if req.compensated {
            let y1 = term_re - comp_re;
            let t1 = sum_re + y1;
            comp_re = (t1 - sum_re) - y1;
            sum_re = t1;
            let y2 = term_im - comp_im;
            let t2 = sum_im + y2;
            comp_im = (t2 - sum_im) - y2;
            sum_im = t2;
        } else {
            sum_re += term_re;
            sum_im += term_im;
        }
    });
    Ok((Complex64::new(sum_re, sum_im), bx))
}

/// Residual of the quasi-periodicity law under `z -> z + a + tau*b` for
/// integer vectors `a`, `b`.
///
/// The law states
/// `theta[c,d](tau, z + a + tau b) = e^{2 pi i (c.a - d.b)} e^{-pi i b.tau.b}
/// e^{-2 pi i b.z} theta[c,d](tau, z)`.
/// The residual is measured after dividing out the shift factor (that is,
/// `|theta(z + a + tau b) / factor - theta(z)|`), which keeps it scale-free:
/// the factor grows like `e^{pi b.Omega.b}` and would otherwise drown the
/// comparison in rounding noise at large shifts.
pub fn quasiperiodicity_residual(
    tau: &SiegelPoint,
    z: &CVec,
    chr: &ThetaChar,
    a: &[i64],
    b: &[i64],
    tol: f64,
) -> Result<f64, ThetaError> {
    let g = tau.genus();
    if a.len() != g || b.len() != g {
        return Err(ThetaError::InvalidRequest(
            "shift vectors must have length g".into(),
        ));
    }
    let af = RVec::from_iterator(g, a.iter().map(|&v| v as f64));
    let bf = RVec::from_iterator(g, b.iter().map(|&v| v as f64));
    let tau_c = tau.as_complex();
    let tau_b = &tau_c * bf.map(|v| Complex64::new(v, 0.0));
    let z_shift = CVec::from_fn(g, |j, _| req_add(z[j], af[j], tau_b[j]));

    let theta_base = theta_eval(&ThetaRequest::new(tau.clone(), z.clone(), chr.clone(), tol)?)?;
    let theta_shift = theta_eval(&ThetaRequest::new(tau.clone(), z_shift, chr.clone(), tol)?)?;

    // inverse factor: e^{-2 pi i (c.a - d.b)} e^{+pi i b.tau.b} e^{+2 pi i b.z}
    let b_tau_b = tau.quad_form(&bf);
    let b_dot_z: Complex64 = (0..g).map(|j| z[j] * bf[j]).sum();
    let exponent = Complex64::i()
        * (-TWO_PI * (chr.c().dot(&af) - chr.d().dot(&bf)) * Complex64::new(1.0, 0.0)
            + PI * b_tau_b
            + TWO_PI * b_dot_z);
    let normalized = theta_shift * exponent.exp();
    Ok((normalized - theta_base).norm())
}

fn req_add(z: Complex64, a: f64, tb: Complex64) -> Complex64 {
    Complex64::new(z.re + a + tb.re, z.im + tb.im)
}

/// The factor `e^{2 pi i c^T dd}` relating `theta[c+dc, d+dd]` to
/// `theta[c, d]` for integer shift vectors.
pub fn integral_shift_factor(chr: &ThetaChar, _dc: &[i64], dd: &[i64]) -> Complex64 {
    let dot: f64 = chr
        .c()
        .iter()
        .zip(dd.iter())
        .map(|(&c, &m)| c * m as f64)
        .sum();
    Complex64::from_polar(1.0, TWO_PI * dot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RMat;
    use crate::siegel::validate_siegel;
    use num_complex::Complex64;

    /// Reference sum with a fixed crude cutoff per axis, kept independent
    /// of the certified-box path.
    pub fn naive_theta(
        tau: &SiegelPoint,
        z: &CVec,
        chr: &ThetaChar,
        cutoff: i64,
    ) -> Complex64 {
        let g = tau.genus();
        let mut total = Complex64::new(0.0, 0.0);
        let ranges: Vec<(i64, i64)> = (0..g).map(|_| (-cutoff, cutoff)).collect();
        for_each_lattice_point(&ranges, |n| {
            let m = RVec::from_iterator(g, (0..g).map(|j| n[j] as f64 + chr.c()[j]));
            let quad = tau.quad_form(&m);
            let lin: Complex64 = (0..g)
                .map(|j| (z[j] + Complex64::new(chr.d()[j], 0.0)) * m[j])
                .sum();
            let e = Complex64::i() * (std::f64::consts::PI * quad
                + 2.0 * std::f64::consts::PI * lin);
            total += e.exp();
        });
        total
    }

    fn tau_i(g: usize) -> SiegelPoint {
        validate_siegel(&RMat::zeros(g, g), &RMat::identity(g, g)).unwrap()
    }

    #[test]
    fn value_at_tau_i() {
        // oracle: naive lattice sum, cutoff 20
        let tau = tau_i(1);
        let req = ThetaRequest::constant(tau.clone(), ThetaChar::zero(1), 1e-12).unwrap();
        let v = theta_eval(&req).unwrap();
        let oracle = naive_theta(&tau, &CVec::zeros(1), &ThetaChar::zero(1), 20);
        assert!((v - oracle).norm() < 1e-12);
        assert!((v.re - 1.086_434_811_213_308).abs() < 1e-12);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn huge_omega_gives_single_term() {
        let tau = validate_siegel(&RMat::zeros(2, 2), &(RMat::identity(2, 2) * 1e6)).unwrap();
        let req = ThetaRequest::constant(tau, ThetaChar::zero(2), 1e-12).unwrap();
        let (v, bx) = theta_eval_with_box(&req).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(bx.radius, 1.0);
    }

    #[test]
    fn diagonal_tau_factorizes() {
        let tau2 = tau_i(2);
        let v2 = theta_eval(&ThetaRequest::constant(tau2, ThetaChar::zero(2), 1e-12).unwrap())
            .unwrap();
        let v1 = theta_eval(&ThetaRequest::constant(tau_i(1), ThetaChar::zero(1), 1e-13).unwrap())
            .unwrap();
        assert!((v2 - v1 * v1).norm() < 2e-12);
        assert!((v2.re - 1.180_340_599_016_096_2).abs() < 1e-12);
    }

    #[test]
    fn truncation_radius_matches_hand_bound() {
        // g=1, Omega=1, tol=1e-12: R=4 certifies (tail ~ 2.8e-22); R=3 does not
        let tau = tau_i(1);
        let bx = truncation_radius(&tau, &ThetaChar::zero(1), &CVec::zeros(1), 1e-12).unwrap();
        assert_eq!(bx.radius, 4.0);
        assert_eq!(bx.ranges, vec![(-4, 4)]);
    }

    #[test]
    fn small_lambda_needs_wide_box_or_errors() {
        // lambda_min = 0.01: solving exp(-pi*0.01*R^2) < 1e-12 forces a
        // per-axis radius near 30, about 60 integer points per axis.
        let tau = validate_siegel(&RMat::zeros(1, 1), &RMat::from_row_slice(1, 1, &[0.01]))
            .unwrap();
        match truncation_radius(&tau, &ThetaChar::zero(1), &CVec::zeros(1), 1e-12) {
            Ok(bx) => {
                assert!(bx.radius >= 29.0);
                let per_axis = bx.ranges[0].1 - bx.ranges[0].0 + 1;
                assert!(per_axis >= 59, "per-axis points {per_axis}");
            }
            Err(ThetaError::BoxTooLarge { .. }) => {}
            Err(e) => panic!("unexpected error {e:?}"),
        }
    }

    #[test]
    fn box_cap_triggers() {
        let tau = validate_siegel(&RMat::zeros(2, 2), &(RMat::identity(2, 2) * 0.01)).unwrap();
        let r = truncation_radius_capped(&tau, &ThetaChar::zero(2), &CVec::zeros(2), 1e-30, 100);
        assert!(matches!(r, Err(ThetaError::BoxTooLarge { .. })));
    }

    #[test]
    fn determinism_bit_identical() {
        let tau = tau_i(2);
        let z = CVec::from_fn(2, |j, _| Complex64::new(0.1 * (j as f64 + 1.0), 0.05));
        let chr = ThetaChar::new(
            RVec::from_row_slice(&[0.3, -0.2]),
            RVec::from_row_slice(&[0.1, 0.7]),
        )
        .unwrap();
        let req = ThetaRequest::new(tau, z, chr, 1e-12).unwrap();
        let v1 = theta_eval(&req).unwrap();
        let v2 = theta_eval(&req).unwrap();
        assert_eq!(v1.re.to_bits(), v2.re.to_bits());
        assert_eq!(v1.im.to_bits(), v2.im.to_bits());
    }

    #[test]
    fn quasiperiodicity_zero_shift_is_exact() {
        let tau = tau_i(1);
        let r = quasiperiodicity_residual(
            &tau,
            &CVec::zeros(1),
            &ThetaChar::zero(1),
            &[0],
            &[0],
            1e-12,
        )
        .unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn quasiperiodicity_unit_b_shift() {
        // g=1, tau=i, z=0, a=0, b=1: both sides at scale e^{pi}*theta(i,1)
        let tau = tau_i(1);
        let r = quasiperiodicity_residual(
            &tau,
            &CVec::zeros(1),
            &ThetaChar::zero(1),
            &[0],
            &[1],
            1e-12,
        )
        .unwrap();
        assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn integral_shift_examples() {
        let chr = ThetaChar::new(RVec::from_row_slice(&[0.5]), RVec::zeros(1)).unwrap();
        // dd = 0 -> 1
        let f0 = integral_shift_factor(&chr, &[2], &[0]);
        assert!((f0 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        // c = 1/2, dd = 1 -> e^{pi i} = -1
        let f1 = integral_shift_factor(&chr, &[0], &[1]);
        assert!((f1 - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        // integer c^T dd -> 1
        let chr_int = ThetaChar::new(RVec::from_row_slice(&[2.0]), RVec::zeros(1)).unwrap();
        let f2 = integral_shift_factor(&chr_int, &[0], &[3]);
        assert!((f2 - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn integral_shift_identity_on_values() {
        // theta[c+dc, d+dd] = factor * theta[c, d]
        let tau = tau_i(2);
        let z = CVec::from_fn(2, |j, _| Complex64::new(0.07 * (j as f64 + 1.0), 0.02));
        let c = RVec::from_row_slice(&[0.3, -0.4]);
        let d = RVec::from_row_slice(&[0.15, 0.6]);
        let chr = ThetaChar::new(c.clone(), d.clone()).unwrap();
        let (dc, dd) = ([1i64, -2], [2i64, 1]);
        let shifted = ThetaChar::new(
            RVec::from_fn(2, |j, _| c[j] + dc[j] as f64),
            RVec::from_fn(2, |j, _| d[j] + dd[j] as f64),
        )
        .unwrap();
        let tol = 1e-12;
        let lhs = theta_eval(&ThetaRequest::new(tau.clone(), z.clone(), shifted, tol).unwrap())
            .unwrap();
        let rhs = integral_shift_factor(&chr, &dc, &dd)
            * theta_eval(&ThetaRequest::new(tau, z, chr, tol).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 10.0 * tol);
    }
}
