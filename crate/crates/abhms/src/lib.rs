//! Numerical mirror symmetry for principally polarized abelian varieties
//! at the cohomological level.
//!
//! The two sides of the package:
//!
//! - [`bside`]: holomorphic data on the abelian variety `V_tau` — line
//!   bundle labels, explicit section bases built from shifted theta
//!   functions, Ext dimension tables, and the graded ring of sections
//!   with its structure constants.
//! - [`aside`]: symplectic data on the torus `T^{2g}` — affine Lagrangian
//!   branes with flat `U(1)` connections, Floer complexes with gradings
//!   and differentials, and the triangle products `mu^2` with
//!   theta-valued coefficients.
//!
//! Supporting modules: [`siegel`] (the moduli parameters `tau = B + i*Omega`
//! and the integer modular group actions on them), [`theta`] (certified
//! evaluation of genus-`g` theta functions with characteristics), and
//! [`mirror`] (the generator-to-section assignment and the numerical
//! verification scenarios that tie the two sides together).
//!
//! All operations are pure functions over immutable values and are safe to
//! call from any number of threads.

pub mod aside;
pub mod bside;
pub mod linalg;
pub mod mirror;
pub mod siegel;
pub mod theta;

pub use num_complex::Complex64;
