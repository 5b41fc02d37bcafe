//! Singular triplets of `P(λ)`, the level function `F_ε(λ) = s_n(λ) − ε·w(|λ|)`
//! and its gradient.
//!
//! With `u`, `v` the singular vectors of a simple non-zero `s_n`,
//! `∂s_n/∂x = Re(u* P′(λ) v)` and `∂s_n/∂y = Re(u* iP′(λ) v)`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matpoly::{CMatrix, MatrixPolynomial, WeightPolynomial};

/// Relative gap below which `s_n` is treated as a repeated singular value.
pub const TAU_GAP_REL: f64 = 1e-8;
/// Relative size below which `s_n` is treated as zero.
pub const TAU_ZERO_REL: f64 = 1e-12;
/// Radius below which `λ` is treated as the origin.
pub const TAU_ORIGIN: f64 = 1e-12;

pub type CVector = DVector<Complex64>;

/// Singular values `s₁ ≥ … ≥ s_n` with left and right singular vectors,
/// `P(λ) vⱼ = sⱼ uⱼ`.
#[derive(Debug, Clone)]
pub struct SingularTripletSet {
    pub values: Vec<f64>,
    pub left: Vec<CVector>,
    pub right: Vec<CVector>,
}

impl SingularTripletSet {
    /// Full SVD of `a`, sorted descending. The phase of each pair is fixed so
    /// that the largest-modulus entry of `vⱼ` is real and positive.
    pub fn of_matrix(a: &CMatrix) -> Self {
        let n = a.nrows();
        let svd = a.clone().svd(true, true);
        let u = svd.u.expect("left vectors requested");
        let v_t = svd.v_t.expect("right vectors requested");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &k| {
            svd.singular_values[k]
                .partial_cmp(&svd.singular_values[i])
                .unwrap()
        });
        let mut values = Vec::with_capacity(n);
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for &j in &order {
            let mut uj: CVector = u.column(j).into_owned();
            let mut vj: CVector = v_t.row(j).adjoint();
            let vmax = vj.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if let Some(pivot) = vj.iter().find(|z| z.norm() >= vmax * (1.0 - 1e-12)).copied() {
                if pivot.norm() > 0.0 {
                    let phase = pivot.conj() / pivot.norm();
                    vj *= phase;
                    uj *= phase;
                }
            }
            values.push(svd.singular_values[j]);
            left.push(uj);
            right.push(vj);
        }
        Self {
            values,
            left,
            right,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.values[0]
    }

    pub fn smallest(&self) -> f64 {
        *self.values.last().expect("non-empty")
    }

    /// `s_{n−1} − s_n`, infinite for `n = 1`.
    pub fn lowest_gap(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            f64::INFINITY
        } else {
            self.values[n - 2] - self.values[n - 1]
        }
    }

    /// Number of singular values within `tol` of `s_n`.
    pub fn smallest_multiplicity(&self, tol: f64) -> usize {
        let sn = self.smallest();
        self.values.iter().filter(|&&s| s - sn <= tol).count()
    }
}

pub fn singular_triplets(p: &MatrixPolynomial, lambda: Complex64) -> SingularTripletSet {
    SingularTripletSet::of_matrix(&p.evaluate(lambda))
}

/// Singular values of `P(λ)`, sorted descending.
pub fn singular_values(p: &MatrixPolynomial, lambda: Complex64) -> Vec<f64> {
    let mut s: Vec<f64> = p.evaluate(lambda).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Smallest singular value `s_n(λ)` of `P(λ)`.
pub fn s_min(p: &MatrixPolynomial, lambda: Complex64) -> f64 {
    p.evaluate(lambda)
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `F_ε(λ) = s_n(λ) − ε·w(|λ|)`; non-positive exactly on `Λε(P)`.
pub fn f_eps(p: &MatrixPolynomial, w: &WeightPolynomial, eps: f64, lambda: Complex64) -> f64 {
    s_min(p, lambda) - eps * w.eval_unchecked(lambda.norm())
}

/// Gradient of a real function of `λ = x + iy`, with the smallest-gap
/// information needed to judge whether it exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientValue {
    pub dx: f64,
    pub dy: f64,
    /// `s_{n−1} − s_n` at the point (infinite for `n = 1`).
    pub gap: f64,
    pub valid: bool,
}

impl GradientValue {
    pub fn norm(&self) -> f64 {
        self.dx.hypot(self.dy)
    }

    /// The gradient as the complex number `dx + i·dy`.
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.dx, self.dy)
    }
}

/// Gradient of `s_n` together with the triplets it was computed from.
pub fn grad_s_min_with_triplets(
    p: &MatrixPolynomial,
    lambda: Complex64,
) -> (GradientValue, SingularTripletSet) {
    let t = singular_triplets(p, lambda);
    let n = t.len();
    let s1 = t.largest();
    let sn = t.smallest();
    let gap = t.lowest_gap();
    let valid = gap > TAU_GAP_REL * s1 && sn > TAU_ZERO_REL * (1.0 + s1);
    let dp = p.evaluate_derivative(lambda);
    let z = t.left[n - 1].dotc(&(&dp * &t.right[n - 1]));
    // Re(u* P′ v) and Re(i·u* P′ v) = −Im(u* P′ v).
    let g = GradientValue {
        dx: z.re,
        dy: -z.im,
        gap,
        valid,
    };
    (g, t)
}

pub fn grad_s_min(p: &MatrixPolynomial, lambda: Complex64) -> GradientValue {
    grad_s_min_with_triplets(p, lambda).0
}

/// Gradient of `w(|λ|)`, or `None` where it does not exist (the origin with a
/// non-zero linear weight).
pub fn grad_weight(w: &WeightPolynomial, lambda: Complex64) -> Option<(f64, f64)> {
    let r = lambda.norm();
    if r < TAU_ORIGIN {
        if w.weight(1) != 0.0 {
            return None;
        }
        return Some((0.0, 0.0));
    }
    let d = w.derivative_at(r);
    Some((d * lambda.re / r, d * lambda.im / r))
}

/// `∇F_ε = ∇s_n − ε·∇w(|λ|)`.
pub fn grad_f(
    p: &MatrixPolynomial,
    w: &WeightPolynomial,
    eps: f64,
    lambda: Complex64,
) -> GradientValue {
    let g = grad_s_min(p, lambda);
    combine_weight_gradient(g, w, eps, lambda)
}

pub(crate) fn combine_weight_gradient(
    g: GradientValue,
    w: &WeightPolynomial,
    eps: f64,
    lambda: Complex64,
) -> GradientValue {
    match grad_weight(w, lambda) {
        Some((wx, wy)) => GradientValue {
            dx: g.dx - eps * wx,
            dy: g.dy - eps * wy,
            ..g
        },
        None => GradientValue { valid: false, ..g },
    }
}

/// `s_{n−1}(λ) − s_n(λ)`.
pub fn gap(p: &MatrixPolynomial, lambda: Complex64) -> Result<f64> {
    if p.dim() < 2 {
        return Err(Error::NoSecondSingularValue);
    }
    let s = singular_values(p, lambda);
    Ok(s[s.len() - 2] - s[s.len() - 1])
}
