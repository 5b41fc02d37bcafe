//! Boundary perturbations realising a prescribed eigenvalue, multiplicity
//! certificates and the distance `r(P)` to polynomials with a multiple
//! eigenvalue.
//!
//! For `μ ∉ σ(P)` with SVD `P(μ) = Σ sⱼ uⱼ vⱼ*` and `s_n` of multiplicity `k`,
//! `Ẑ = Σ uⱼ vⱼ*` (all `j`) and `Z̃ = Σ uⱼ vⱼ*` (the trailing `k` pairs). With
//! `E = −s_n Z` the coefficient perturbations
//! `Δⱼ = (μ̄/|μ|)ʲ wⱼ w(|μ|)^{-1} E` satisfy `Σ Δⱼ μʲ = E`, so `μ` is an
//! eigenvalue of `P + Δ` of geometric multiplicity `k`, and
//! `‖Δⱼ‖ = wⱼ·s_n(μ)/w(|μ|)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matpoly::{spectral_norm, CMatrix, EigenReport, MatrixPolynomial, WeightPolynomial};
use crate::neldermead;
use crate::par::Execution;
use crate::pseudospectrum::{
    boundedness_check, components, compute_field_with, default_window, merge_node, GridSpec,
    ScalarField, TAU_SADDLE,
};
use crate::svdcore::{
    combine_weight_gradient, grad_s_min_with_triplets, s_min, singular_triplets, CVector,
    GradientValue, SingularTripletSet, TAU_ORIGIN, TAU_ZERO_REL,
};

/// Relative width of the singular-value cluster that defines `k`.
pub const TAU_MULT_REL: f64 = 1e-8;
/// Relative size of `|u* Q′(μ) v|` below which `μ` is certified multiple.
pub const TAU_DEFECT_REL: f64 = 1e-6;
/// Relative tolerance for classifying a perturbation as on the ball boundary.
pub const TAU_BALL_REL: f64 = 1e-9;
/// Residual threshold (relative to `max(1, scale)`) for a realised eigenvalue.
pub const TAU_RESIDUAL_REL: f64 = 1e-8;

/// Coefficient perturbations `Δ₀ … Δ_m` of a base polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSet {
    pub deltas: Vec<CMatrix>,
    pub base: MatrixPolynomial,
    /// True when `μ = 0` forced the constant weight `w_c(x) = w₀` in place of a
    /// non-constant `w`.
    pub origin_substitution: bool,
}

impl PerturbationSet {
    pub fn new(base: MatrixPolynomial, deltas: Vec<CMatrix>) -> Result<Self> {
        if deltas.len() != base.degree() + 1 {
            return Err(Error::InvalidPolynomial(format!(
                "expected {} perturbation matrices, got {}",
                base.degree() + 1,
                deltas.len()
            )));
        }
        let n = base.dim();
        if deltas.iter().any(|d| d.nrows() != n || d.ncols() != n) {
            return Err(Error::InvalidPolynomial("perturbation matrix has wrong shape".into()));
        }
        Ok(Self {
            deltas,
            base,
            origin_substitution: false,
        })
    }

    pub fn zero(base: &MatrixPolynomial) -> Self {
        let n = base.dim();
        Self {
            deltas: vec![CMatrix::zeros(n, n); base.degree() + 1],
            base: base.clone(),
            origin_substitution: false,
        }
    }

    /// `Q(λ) = Σ (Pⱼ + Δⱼ) λʲ`.
    pub fn perturbed(&self) -> MatrixPolynomial {
        let coeffs = self
            .base
            .coeffs()
            .iter()
            .zip(&self.deltas)
            .map(|(p, d)| p + d)
            .collect();
        MatrixPolynomial::new(coeffs).expect("shapes checked on construction")
    }

    pub fn norms(&self) -> Vec<f64> {
        self.deltas.iter().map(spectral_norm).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallClass {
    Interior,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallMembership {
    /// Smallest `ε` with `‖Δⱼ‖ ≤ ε·wⱼ` for all `j`; infinite when a perturbation
    /// is non-zero where its weight vanishes.
    pub radius: f64,
    pub classification: BallClass,
}

/// Locates `Δ` relative to `B(P, ε, w)`. The boundary is `radius = ε` up to a
/// relative `1e-9`.
pub fn ball_membership(delta: &PerturbationSet, w: &WeightPolynomial, eps: f64) -> BallMembership {
    let mut radius: f64 = 0.0;
    for (j, n) in delta.norms().into_iter().enumerate() {
        let wj = w.weight(j);
        if wj > 0.0 {
            radius = radius.max(n / wj);
        } else if n > 0.0 {
            radius = f64::INFINITY;
        }
    }
    let tol = TAU_BALL_REL * eps.max(f64::MIN_POSITIVE);
    let classification = if radius.is_infinite() || radius > eps + tol {
        BallClass::Outside
    } else if radius >= eps - tol {
        BallClass::Boundary
    } else {
        BallClass::Interior
    };
    BallMembership {
        radius,
        classification,
    }
}

/// Ingredients shared by `Q̂` and `Q̃` at one point.
struct Construction {
    triplets: SingularTripletSet,
    k: usize,
}

fn analyse(p: &MatrixPolynomial, w: &WeightPolynomial, mu: Complex64) -> Result<Construction> {
    if w.weights().iter().skip(p.degree() + 1).any(|&x| x > 0.0) {
        return Err(Error::InvalidWeight(format!(
            "weight degree exceeds polynomial degree {}",
            p.degree()
        )));
    }
    let triplets = singular_triplets(p, mu);
    let s1 = triplets.largest();
    if triplets.smallest() <= TAU_ZERO_REL * (1.0 + s1) {
        return Err(Error::PointOnSpectrum(mu));
    }
    let k = triplets.smallest_multiplicity(TAU_MULT_REL * s1);
    Ok(Construction { triplets, k })
}

/// `Σ uⱼ vⱼ*` over the trailing `k` singular pairs; `k = n` gives the unitary `Ẑ`.
pub fn trailing_projector(t: &SingularTripletSet, k: usize) -> CMatrix {
    let n = t.len();
    let mut z = CMatrix::zeros(n, n);
    for j in n.saturating_sub(k)..n {
        z += &t.left[j] * t.right[j].adjoint();
    }
    z
}

/// Distributes `E` over the coefficients as `Δⱼ = (μ̄/|μ|)ʲ wⱼ w(|μ|)^{-1} E`,
/// so that `Σ Δⱼ μʲ = E`. At `μ = 0` the whole of `E` goes to `Δ₀`.
pub fn spread_perturbation(p: &MatrixPolynomial, w: &WeightPolynomial, mu: Complex64, e: CMatrix) -> PerturbationSet {
    let m = p.degree();
    let at_origin = mu.norm() < TAU_ORIGIN;
    let deltas = if at_origin {
        let mut d = vec![CMatrix::zeros(p.dim(), p.dim()); m + 1];
        d[0] = e;
        d
    } else {
        let r = mu.norm();
        let phase = mu.conj() / r;
        let wr = w.eval_unchecked(r);
        (0..=m)
            .map(|j| &e * (phase.powi(j as i32) * (w.weight(j) / wr)))
            .collect()
    };
    PerturbationSet {
        deltas,
        base: p.clone(),
        origin_substitution: at_origin && !w.is_constant(),
    }
}

/// Full-rank perturbation `Q̂` with `E = −s_n(μ) Ẑ`.
pub fn build_qhat(p: &MatrixPolynomial, w: &WeightPolynomial, mu: Complex64) -> Result<PerturbationSet> {
    let c = analyse(p, w, mu)?;
    let z = trailing_projector(&c.triplets, c.triplets.len());
    let e = z * Complex64::new(-c.triplets.smallest(), 0.0);
    Ok(spread_perturbation(p, w, mu, e))
}

/// Rank-`k` perturbation `Q̃` with `E = −s_n(μ) Z̃`.
pub fn build_qtilde(p: &MatrixPolynomial, w: &WeightPolynomial, mu: Complex64) -> Result<PerturbationSet> {
    let c = analyse(p, w, mu)?;
    let z = trailing_projector(&c.triplets, c.k);
    let e = z * Complex64::new(-c.triplets.smallest(), 0.0);
    Ok(spread_perturbation(p, w, mu, e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDistance {
    /// `s_n(μ)/w(|μ|)`, the radius of the smallest ball containing a
    /// polynomial with eigenvalue `μ`.
    pub delta: f64,
    /// Set when `μ` is already (numerically) an eigenvalue; `delta` is then 0.
    pub on_spectrum: bool,
}

pub fn distance_to_eigenvalue(p: &MatrixPolynomial, w: &WeightPolynomial, mu: Complex64) -> EigenDistance {
    let t = singular_triplets(p, mu);
    if t.smallest() <= TAU_ZERO_REL * (1.0 + t.largest()) {
        return EigenDistance {
            delta: 0.0,
            on_spectrum: true,
        };
    }
    let wr = if mu.norm() < TAU_ORIGIN { w.w0() } else { w.eval_unchecked(mu.norm()) };
    EigenDistance {
        delta: t.smallest() / wr,
        on_spectrum: false,
    }
}

/// `u* Q′(μ) v`; zero certifies that an eigenvalue `μ` with left/right
/// eigenvectors `u`, `v` is multiple.
pub fn multiple_criterion(q: &MatrixPolynomial, mu: Complex64, u: &CVector, v: &CVector) -> Complex64 {
    u.dotc(&(q.evaluate_derivative(mu) * v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityCertificate {
    pub mu: Complex64,
    pub q_hat: PerturbationSet,
    pub q_tilde: PerturbationSet,
    /// Ball radius `s_n(μ)/w(|μ|)` on whose boundary `Q̂`, `Q̃` lie.
    pub delta: f64,
    /// Multiplicity `k` of `s_n(μ)` as a singular value of `P(μ)`.
    pub geometric_mult: usize,
    /// Geometric multiplicity of `μ` observed in `Q̂`.
    pub geometric_mult_qhat: usize,
    /// `u_n* Q̂′(μ) v_n` when `k = 1`.
    pub criterion: Option<Complex64>,
    /// Algebraic multiplicity exceeds the geometric one (certified when
    /// `k = 1` and the criterion vanishes).
    pub defective: bool,
    /// `μ` is a multiple eigenvalue of `Q̂` and `Q̃`.
    pub multiple: bool,
    pub residual_hat: f64,
    pub residual_tilde: f64,
}

impl MultiplicityCertificate {
    pub fn residual(&self) -> f64 {
        self.residual_hat.max(self.residual_tilde)
    }
}

pub fn certify_multiple(p: &MatrixPolynomial, w: &WeightPolynomial, mu: Complex64) -> Result<MultiplicityCertificate> {
    let c = analyse(p, w, mu)?;
    let q_hat = build_qhat(p, w, mu)?;
    let q_tilde = build_qtilde(p, w, mu)?;
    let qh = q_hat.perturbed();
    let qt = q_tilde.perturbed();
    let residual_hat = s_min(&qh, mu);
    let residual_tilde = s_min(&qt, mu);
    let threshold = TAU_RESIDUAL_REL * qh.scale_at(mu).max(1.0);
    if residual_hat.max(residual_tilde) > threshold {
        return Err(Error::ConstructionFailure {
            mu,
            residual: residual_hat.max(residual_tilde),
            threshold,
        });
    }
    let n = c.triplets.len();
    let delta = distance_to_eigenvalue(p, w, mu).delta;
    let (criterion, defective) = if c.k == 1 {
        let crit = multiple_criterion(&qh, mu, &c.triplets.left[n - 1], &c.triplets.right[n - 1]);
        let tau = TAU_DEFECT_REL * spectral_norm(&p.evaluate_derivative(mu)).max(1.0);
        (Some(crit), crit.norm() < tau)
    } else {
        (None, false)
    };
    let geometric_mult_qhat = qh.geometric_multiplicity(mu, TAU_RESIDUAL_REL);
    Ok(MultiplicityCertificate {
        mu,
        delta,
        geometric_mult: c.k,
        geometric_mult_qhat,
        criterion,
        defective,
        multiple: c.k > 1 || defective,
        residual_hat,
        residual_tilde,
        q_hat,
        q_tilde,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaddleKind {
    /// `∇(s_n/w) = 0` with `s_n` simple.
    Smooth,
    /// Minimum of `s_n/w` along a fault line, where `s_n` is repeated.
    Fault,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Saddle {
    pub mu: Complex64,
    pub delta: f64,
    pub kind: SaddleKind,
    pub iterations: usize,
}

const NEWTON_ITERATIONS: usize = 100;
const FAULT_PENALTY: f64 = 10.0;
const FAULT_ITERATIONS: usize = 1000;

/// `∇F_δ` at `δ = s_n/w`, which vanishes exactly where `s_n/w` is stationary.
fn stationarity(p: &MatrixPolynomial, w: &WeightPolynomial, z: Complex64) -> (GradientValue, f64, f64) {
    let (g, t) = grad_s_min_with_triplets(p, z);
    let wr = w.eval_unchecked(z.norm());
    let ratio = t.smallest() / wr;
    (combine_weight_gradient(g, w, ratio, z), ratio, t.largest())
}

/// Locates a stationary point of `s_n(λ)/w(|λ|)` off the spectrum, i.e. a
/// point where `∇F_δ = 0` with `δ = s_n/w`. Damped Newton with a
/// finite-difference Jacobian handles smooth saddles; when the iteration hits
/// a point where `s_n` is repeated, or stalls, the search continues along the
/// fault line by minimising `s_n/w + 10·(s_{n−1} − s_n)/w`.
pub fn find_saddle(p: &MatrixPolynomial, w: &WeightPolynomial, start: Complex64, window: &GridSpec) -> Result<Saddle> {
    match newton_saddle(p, w, start, window) {
        Ok(s) => Ok(s),
        Err(Error::GradientUndefined(z)) | Err(Error::NoConvergence { last: z, .. }) => {
            fault_saddle(p, w, z, window).or_else(|_| fault_saddle(p, w, start, window))
        }
        Err(e) => Err(e),
    }
}

pub fn newton_saddle(p: &MatrixPolynomial, w: &WeightPolynomial, start: Complex64, window: &GridSpec) -> Result<Saddle> {
    let max_step = window.diagonal() / 10.0;
    let mut z = start;
    for it in 0..NEWTON_ITERATIONS {
        let (g, ratio, s1) = stationarity(p, w, z);
        if ratio * w.eval_unchecked(z.norm()) <= 1e-10 * (1.0 + s1) {
            return Err(Error::ConvergedToEigenvalue(z));
        }
        if !g.valid {
            return Err(Error::GradientUndefined(z));
        }
        if g.norm() < TAU_SADDLE {
            return Ok(Saddle {
                mu: z,
                delta: ratio,
                kind: SaddleKind::Smooth,
                iterations: it,
            });
        }
        // Jacobian of (gx, gy) by central differences
        let h = 1e-6 * (1.0 + z.norm());
        let col = |dz: Complex64| {
            let (gp, _, _) = stationarity(p, w, z + dz);
            let (gm, _, _) = stationarity(p, w, z - dz);
            ((gp.dx - gm.dx) / (2.0 * h), (gp.dy - gm.dy) / (2.0 * h))
        };
        let (a, c) = col(Complex64::new(h, 0.0));
        let (b, d) = col(Complex64::new(0.0, h));
        let det = a * d - b * c;
        let mut step = if det.abs() > 1e-300 {
            Complex64::new(-(d * g.dx - b * g.dy) / det, -(-c * g.dx + a * g.dy) / det)
        } else {
            -g.as_complex()
        };
        if step.norm() > max_step {
            step *= max_step / step.norm();
        }
        let mut accepted = false;
        for _ in 0..30 {
            let candidate = z + step;
            let (gc, _, _) = stationarity(p, w, candidate);
            if gc.valid && gc.norm() < g.norm() {
                z = candidate;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence { iterations: it, last: z });
        }
        if !window.contains(z) {
            return Err(Error::LeftWindow(z));
        }
    }
    Err(Error::NoConvergence {
        iterations: NEWTON_ITERATIONS,
        last: z,
    })
}

pub fn fault_saddle(p: &MatrixPolynomial, w: &WeightPolynomial, start: Complex64, window: &GridSpec) -> Result<Saddle> {
    if p.dim() < 2 {
        return Err(Error::GradientUndefined(start));
    }
    let objective = |z: Complex64| {
        let s = crate::svdcore::singular_values(p, z);
        let n = s.len();
        (s[n - 1] + FAULT_PENALTY * (s[n - 2] - s[n - 1])) / w.eval_unchecked(z.norm())
    };
    let scale = window.diagonal() / 100.0;
    let m = neldermead::minimize(objective, start, scale, FAULT_ITERATIONS);
    let z = m.point;
    if !window.contains(z) {
        return Err(Error::LeftWindow(z));
    }
    let t = singular_triplets(p, z);
    let s1 = t.largest();
    if t.smallest() <= 1e-10 * (1.0 + s1) {
        return Err(Error::ConvergedToEigenvalue(z));
    }
    if t.lowest_gap() > 1e-6 * (1.0 + s1) {
        return Err(Error::NoConvergence {
            iterations: m.iterations,
            last: z,
        });
    }
    let wr = if z.norm() < TAU_ORIGIN { w.w0() } else { w.eval_unchecked(z.norm()) };
    Ok(Saddle {
        mu: z,
        delta: t.smallest() / wr,
        kind: SaddleKind::Fault,
        iterations: m.iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceOptions {
    pub nx: usize,
    pub ny: usize,
    pub window: Option<GridSpec>,
    pub exec: Execution,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            nx: 301,
            ny: 301,
            window: None,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    /// Distance to the nearest polynomial with a multiple eigenvalue.
    pub r: f64,
    /// Bracket on `ε` around the first drop in the component count.
    pub bracket: (f64, f64),
    pub certificate: MultiplicityCertificate,
    pub saddle_kind: Option<SaddleKind>,
    /// False when saddle refinement failed and `r` is the bracket midpoint.
    pub refined: bool,
    /// Components holding eigenvalues at the smallest resolved `ε`.
    pub initial_components: usize,
    /// Bracket on the level at which all eigenvalues share one component.
    pub connected_bracket: Option<(f64, f64)>,
    /// Merge at the origin with a non-constant weight.
    pub origin_case: bool,
    pub bounded: bool,
    pub window: GridSpec,
    pub warnings: Vec<String>,
}

struct CountProbe<'a> {
    field: &'a ScalarField,
    eigen: &'a EigenReport,
}

impl CountProbe<'_> {
    /// Labels of the eigenvalues at `eps`, `None` if the grid cannot resolve them.
    fn labels(&self, eps: f64) -> Option<Vec<u32>> {
        components(self.field, eps, self.eigen).ok().map(|r| r.eigen_labels)
    }

    fn count(&self, eps: f64) -> Option<usize> {
        self.labels(eps).map(|l| distinct(&l))
    }
}

fn distinct(labels: &[u32]) -> usize {
    let mut l = labels.to_vec();
    l.sort_unstable();
    l.dedup();
    l.len()
}

/// Smallest `ε` at which every eigenvalue is resolved by the grid.
fn resolution_floor(field: &ScalarField, eigen: &EigenReport) -> f64 {
    let g = &field.grid;
    eigen
        .eigenvalues
        .iter()
        .map(|&z| {
            g.cell_corners(z)
                .into_iter()
                .map(|(i, j)| field.value(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn bisect<F: Fn(f64) -> bool>(mut lo: f64, mut hi: f64, pred: F) -> (f64, f64) {
    // pred(lo) false, pred(hi) true
    while hi - lo > crate::pseudospectrum::components::TAU_EPS_REL * hi {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// `r(P)`: bisection on the number of components holding eigenvalues locates
/// the first merge as `ε` grows; a saddle search started at the grid merge
/// node sharpens it, and the certificate is built there.
pub fn distance_to_multiple(
    p: &MatrixPolynomial,
    w: &WeightPolynomial,
    eps_max: f64,
    opts: &DistanceOptions,
) -> Result<DistanceReport> {
    if !(eps_max > 0.0) {
        return Err(Error::Precondition(format!("eps_max must be positive, got {eps_max}")));
    }
    let eigen = p.eigenvalues(None)?;
    let mut warnings = Vec::new();
    if !eigen.all_simple() {
        warnings.push("polynomial has multiple eigenvalues; reporting the first component merge".to_string());
    }
    let bounded = boundedness_check(p, w, eps_max)?;
    if !bounded {
        warnings.push(format!(
            "pseudospectrum may be unbounded at eps = {eps_max:e}; counts are window-limited"
        ));
    }
    let window = match opts.window {
        Some(g) => g,
        None => default_window(p, w, eps_max, &eigen, opts.nx, opts.ny)?,
    };
    let field = compute_field_with(p, w, window, opts.exec);
    let probe = CountProbe {
        field: &field,
        eigen: &eigen,
    };

    let floor = resolution_floor(&field, &eigen) * (1.0 + 1e-12) + f64::MIN_POSITIVE;
    if floor >= eps_max {
        return Err(Error::GridTooCoarse {
            eigenvalue: eigen.eigenvalues.first().copied().unwrap_or_default(),
            epsilon: eps_max,
        });
    }
    let initial = probe.count(floor).ok_or(Error::GridTooCoarse {
        eigenvalue: eigen.eigenvalues.first().copied().unwrap_or_default(),
        epsilon: floor,
    })?;

    // Coarse logarithmic sweep, evaluated concurrently.
    const SWEEP: usize = 24;
    let levels: Vec<f64> = (0..=SWEEP)
        .map(|k| floor * (eps_max / floor).powf(k as f64 / SWEEP as f64))
        .collect();
    let counts = opts.exec.map(levels.len(), |k| probe.count(levels[k]).unwrap_or(initial));
    let first_drop = counts
        .iter()
        .position(|&c| c < initial)
        .ok_or(Error::NotFoundWithinBudget { initial, eps_max })?;
    let (lo, hi) = bisect(levels[first_drop - 1], levels[first_drop], |e| {
        probe.count(e).is_some_and(|c| c < initial)
    });

    let connected_bracket = counts.iter().position(|&c| c == 1).and_then(|k| {
        (k > 0 && initial > 1).then(|| bisect(levels[k - 1], levels[k], |e| probe.count(e) == Some(1)))
    });

    // The pair of groups that merged inside the bracket.
    let l_lo = probe.labels(lo).expect("resolved above the floor");
    let l_hi = probe.labels(hi).expect("resolved above the floor");
    let mut pair = None;
    'search: for a in 0..l_lo.len() {
        for b in (a + 1)..l_lo.len() {
            if l_lo[a] != l_lo[b] && l_hi[a] == l_hi[b] {
                pair = Some((l_lo[a], l_lo[b]));
                break 'search;
            }
        }
    }
    let (la, lb) = pair.expect("a merge happened inside the bracket");
    let group = |label: u32| -> Vec<Complex64> {
        eigen
            .eigenvalues
            .iter()
            .zip(&l_lo)
            .filter(|(_, &l)| l == label)
            .map(|(&z, _)| z)
            .collect()
    };
    let (node, node_value) = merge_node(&field, &group(la), &group(lb)).expect("groups lie in the window");
    let start = window.point_at(node);

    let cell = window.cell_diagonal();
    let plausible = |s: &Saddle| {
        (s.mu - start).norm() <= 5.0 * cell && (s.delta - node_value).abs() <= 0.1 * node_value
    };
    let saddle = find_saddle(p, w, start, &window)
        .ok()
        .filter(plausible)
        .or_else(|| fault_saddle(p, w, start, &window).ok().filter(plausible));

    let origin_case = !w.is_constant()
        && saddle.map_or(start, |s| s.mu).norm() <= cell;
    if origin_case {
        warnings.push("components merge at the origin; constant-weight certificate reported".to_string());
    }

    let (r, mu, refined) = match saddle {
        Some(s) if !(origin_case && !bounded) => (s.delta, s.mu, true),
        _ => {
            warnings.push("saddle refinement failed; reporting the bracket midpoint".to_string());
            (0.5 * (lo + hi), start, false)
        }
    };
    let certificate = certify_multiple(p, w, mu)?;
    Ok(DistanceReport {
        r,
        bracket: (lo, hi),
        certificate,
        saddle_kind: saddle.map(|s| s.kind),
        refined,
        initial_components: initial,
        connected_bracket,
        origin_case,
        bounded,
        window,
        warnings,
    })
}
