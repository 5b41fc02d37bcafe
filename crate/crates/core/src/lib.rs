//! Weighted pseudospectra of matrix polynomials.
//!
//! A matrix polynomial `P(λ) = Σ Pⱼ λʲ` with `n×n` complex coefficients is
//! perturbed coefficient-wise by matrices `Δⱼ` with `‖Δⱼ‖ ≤ ε·wⱼ`. The set of
//! all eigenvalues reachable this way is the ε-pseudospectrum
//! `Λε(P) = { λ : s_n(P(λ)) ≤ ε·w(|λ|) }`.
//!
//! The crate is organised bottom-up:
//!
//! * [`matpoly`] evaluates polynomials, their derivatives and weights, and
//!   computes eigenvalues through a companion linearization.
//! * [`svdcore`] provides singular triplets of `P(λ)`, the level function
//!   `F_ε` and its analytic gradient.
//! * [`pseudospectrum`] samples `s_n/w` on a grid, labels sublevel
//!   components, traces boundaries and locates component merges.
//! * [`faultlines`] finds points where the two lowest distinct singular value
//!   surfaces meet.
//! * [`perturbations`] builds the explicit boundary perturbations `Q̂`, `Q̃`
//!   and certifies multiple eigenvalues, including the distance `r(P)`.

pub mod error;
pub mod faultlines;
pub mod matpoly;
pub mod neldermead;
pub mod par;
pub mod perturbations;
pub mod pseudospectrum;
pub mod svdcore;

pub use error::{Error, Result};
pub use matpoly::{CMatrix, EigenReport, MatrixPolynomial, WeightPolynomial};
pub use num_complex::Complex64;
pub use par::Execution;
