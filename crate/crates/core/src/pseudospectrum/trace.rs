//! Predictor–corrector tracing of the zero set of `F_ε`.
//!
//! The predictor moves along `i·∇F/‖∇F‖`, which keeps the interior
//! (`F < 0`) on the left. The corrector runs Newton iterations along the local
//! gradient until `|F| ≤ τ_on_curve`. Failures halve the step; below the
//! minimum step the curve ends with [`Termination::GradientInvalid`].

use num_complex::Complex64;

use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::matpoly::{MatrixPolynomial, WeightPolynomial};
use crate::svdcore::{f_eps, grad_f, GradientValue};

/// Gradient norm below which a point is treated as stationary.
pub const TAU_SADDLE: f64 = 1e-7;
const CORRECTOR_ITERATIONS: usize = 20;

/// Residual accepted for a point on `F_ε = 0`.
pub fn tau_on_curve(p: &MatrixPolynomial) -> f64 {
    1e-9 * (1.0 + p.max_norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Closed,
    LeftWindow,
    GradientInvalid,
    StepLimit,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Closed => "closed",
            Termination::LeftWindow => "left_window",
            Termination::GradientInvalid => "gradient_invalid",
            Termination::StepLimit => "step_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub points: Vec<Complex64>,
    pub closed: bool,
    pub termination: Termination,
    /// Smallest `‖∇F_ε‖` seen along the curve and where it occurred.
    pub min_gradient_norm: f64,
    pub min_gradient_point: Complex64,
    /// Set when probes on both sides of the curve find `F_ε ≤ 0`, i.e. the
    /// curve is a level line inside `Λε(P)` rather than part of its boundary.
    pub interior_level_curve: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    pub step_size: f64,
    pub max_steps: usize,
    pub min_step: f64,
    pub window: Option<GridSpec>,
}

impl TraceOptions {
    /// Step `diag(window)/500`, at most 20000 steps.
    pub fn for_window(window: GridSpec) -> Self {
        let step = window.diagonal() / 500.0;
        Self {
            step_size: step,
            max_steps: 20_000,
            min_step: step * 1e-4,
            window: Some(window),
        }
    }

    pub fn with_step(step_size: f64) -> Self {
        Self {
            step_size,
            max_steps: 20_000,
            min_step: step_size * 1e-4,
            window: None,
        }
    }
}

/// Finds a zero of `F_ε` on the ray `origin + t·direction`, `0 < t ≤ max_distance`,
/// starting from a point inside `Λε(P)`. Brackets the first sign change with
/// geometrically growing samples, then bisects to machine precision.
pub fn find_boundary_seed(
    p: &MatrixPolynomial,
    w: &WeightPolynomial,
    eps: f64,
    origin: Complex64,
    direction: Complex64,
    max_distance: f64,
) -> Result<Complex64> {
    if direction.norm() == 0.0 {
        return Err(Error::Precondition("direction must be non-zero".into()));
    }
    let dir = direction / direction.norm();
    let f = |t: f64| f_eps(p, w, eps, origin + dir * t);
    if !(f(0.0) < 0.0) {
        return Err(Error::Precondition(format!(
            "F is not negative at the ray origin {origin}"
        )));
    }
    let mut prev = 0.0;
    let mut t = max_distance * 1e-6;
    let mut bracket = None;
    while prev < max_distance {
        let tt = t.min(max_distance);
        if f(tt) > 0.0 {
            // First positive sample on a finer subdivision of [prev, tt].
            let sub = 32;
            let mut lo = prev;
            for k in 1..=sub {
                let s = prev + (tt - prev) * k as f64 / sub as f64;
                if f(s) > 0.0 {
                    bracket = Some((lo, s));
                    break;
                }
                lo = s;
            }
            break;
        }
        prev = tt;
        t *= 2.0;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoBoundaryOnRay(max_distance))?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    Ok(origin + dir * t)
}

struct Corrected {
    point: Complex64,
    grad: GradientValue,
}

fn correct(
    p: &MatrixPolynomial,
    w: &WeightPolynomial,
    eps: f64,
    start: Complex64,
    tau: f64,
) -> Option<Corrected> {
    let mut z = start;
    for _ in 0..=CORRECTOR_ITERATIONS {
        let g = grad_f(p, w, eps, z);
        if !g.valid || g.norm() < TAU_SADDLE {
            return None;
        }
        let fz = f_eps(p, w, eps, z);
        if fz.abs() <= tau {
            return Some(Corrected { point: z, grad: g });
        }
        let gc = g.as_complex();
        z -= gc * (fz / gc.norm_sqr());
    }
    None
}

/// Traces the curve `F_ε = 0` through `seed`, keeping the interior on the left.
pub fn trace_boundary(
    p: &MatrixPolynomial,
    w: &WeightPolynomial,
    eps: f64,
    seed: Complex64,
    opts: &TraceOptions,
) -> Result<BoundaryCurve> {
    let tau = tau_on_curve(p);
    if !(opts.step_size > 0.0) {
        return Err(Error::Precondition("step size must be positive".into()));
    }
    if f_eps(p, w, eps, seed).abs() > tau {
        return Err(Error::Precondition(format!(
            "seed {seed} is not on the curve (|F| = {:.3e} > {tau:.3e})",
            f_eps(p, w, eps, seed).abs()
        )));
    }
    let mut g = grad_f(p, w, eps, seed);
    if !g.valid || g.norm() < TAU_SADDLE {
        return Err(Error::Precondition(format!(
            "gradient at seed {seed} is undefined or vanishing"
        )));
    }

    let mut points = vec![seed];
    let mut z = seed;
    let mut h = opts.step_size;
    let mut traveled = 0.0;
    let mut min_grad = (g.norm(), seed);
    let mut termination = Termination::StepLimit;

    'steps: for _ in 0..opts.max_steps {
        let tangent = Complex64::i() * g.as_complex() / g.norm();
        let next = loop {
            let predicted = z + tangent * h;
            let accepted = correct(p, w, eps, predicted, tau).filter(|c| {
                let new_tangent = Complex64::i() * c.grad.as_complex() / c.grad.norm();
                let moved = (c.point - z).norm();
                moved <= 2.0 * h && moved > 0.0 && (tangent.conj() * new_tangent).re > 0.5
            });
            match accepted {
                Some(c) => break c,
                None => {
                    h *= 0.5;
                    if h < opts.min_step {
                        termination = Termination::GradientInvalid;
                        break 'steps;
                    }
                }
            }
        };

        if traveled > 2.0 * opts.step_size
            && segment_distance(seed, z, next.point) <= 0.5 * opts.step_size
        {
            termination = Termination::Closed;
            break;
        }
        traveled += (next.point - z).norm();
        z = next.point;
        g = next.grad;
        points.push(z);
        if g.norm() < min_grad.0 {
            min_grad = (g.norm(), z);
        }
        if let Some(win) = &opts.window {
            if !win.contains(z) {
                termination = Termination::LeftWindow;
                break;
            }
        }
        h = (2.0 * h).min(opts.step_size);
    }

    let interior_level_curve = probe_interior(p, w, eps, &points, opts.step_size);
    Ok(BoundaryCurve {
        closed: termination == Termination::Closed,
        points,
        termination,
        min_gradient_norm: min_grad.0,
        min_gradient_point: min_grad.1,
        interior_level_curve,
    })
}

fn segment_distance(q: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (q - a).norm();
    }
    let t = (((q - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (q - (a + ab * t)).norm()
}

/// Probes `F_ε` a short distance along `±∇F` at up to 16 points; a majority
/// with `F ≤ 0` on both sides marks an interior level curve.
fn probe_interior(
    p: &MatrixPolynomial,
    w: &WeightPolynomial,
    eps: f64,
    points: &[Complex64],
    step: f64,
) -> bool {
    let stride = (points.len() / 16).max(1);
    let mut both_inside = 0;
    let mut probes = 0;
    for &z in points.iter().step_by(stride) {
        let g = grad_f(p, w, eps, z);
        if !g.valid || g.norm() == 0.0 {
            continue;
        }
        let n = g.as_complex() / g.norm();
        let d = 0.1 * step;
        probes += 1;
        if f_eps(p, w, eps, z + n * d) <= 0.0 && f_eps(p, w, eps, z - n * d) <= 0.0 {
            both_inside += 1;
        }
    }
    probes > 0 && 2 * both_inside > probes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn seed_on_disc() {
        let a = c(0.7, -0.3);
        let p = MatrixPolynomial::scalar(&[-a, c(1.0, 0.0)]).unwrap();
        let w = WeightPolynomial::unit();
        let s = find_boundary_seed(&p, &w, 0.5, a, c(1.0, 0.0), 3.0).unwrap();
        assert!((s - (a + 0.5)).norm() < 1e-10);

        let d = MatrixPolynomial::diagonal(&[
            vec![c(-1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let s = find_boundary_seed(&d, &w, 0.25, c(-1.0, 0.0), c(-1.0, 0.0), 3.0).unwrap();
        assert!((s - c(-1.25, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn seed_errors() {
        let p = MatrixPolynomial::scalar(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let w = WeightPolynomial::unit();
        assert!(matches!(
            find_boundary_seed(&p, &w, 0.5, c(0.0, 0.0), c(1.0, 0.0), 0.2),
            Err(Error::NoBoundaryOnRay(_))
        ));
        assert!(find_boundary_seed(&p, &w, 0.5, c(2.0, 0.0), c(1.0, 0.0), 3.0).is_err());
    }

    #[test]
    fn circle_is_closed_and_counterclockwise() {
        let a = c(-0.4, 0.9);
        let p = MatrixPolynomial::scalar(&[-a, c(1.0, 0.0)]).unwrap();
        let w = WeightPolynomial::unit();
        let seed = find_boundary_seed(&p, &w, 0.5, a, c(0.0, 1.0), 2.0).unwrap();
        let curve = trace_boundary(&p, &w, 0.5, seed, &TraceOptions::with_step(0.01)).unwrap();
        assert!(curve.closed);
        assert!(!curve.interior_level_curve);
        let dev = curve
            .points
            .iter()
            .map(|z| ((z - a).norm() - 0.5).abs())
            .fold(0.0, f64::max);
        assert!(dev < 1e-6, "{dev}");
        // signed area positive for counterclockwise traversal
        let area: f64 = curve
            .points
            .iter()
            .zip(curve.points.iter().cycle().skip(1))
            .map(|(p0, p1)| p0.re * p1.im - p1.re * p0.im)
            .sum::<f64>()
            / 2.0;
        assert!((area - std::f64::consts::PI * 0.25).abs() < 1e-3, "{area}");
        for pair in curve.points.windows(2) {
            assert!((pair[1] - pair[0]).norm() <= 0.02 + 1e-12);
        }
    }

    #[test]
    fn leaves_window() {
        let p = MatrixPolynomial::scalar(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let w = WeightPolynomial::unit();
        let win = GridSpec::new(-0.3, 2.0, -2.0, 2.0, 2, 2).unwrap();
        let mut opts = TraceOptions::for_window(win);
        opts.step_size = 0.01;
        let curve = trace_boundary(&p, &w, 0.5, c(0.5, 0.0), &opts).unwrap();
        assert_eq!(curve.termination, Termination::LeftWindow);
    }
}
