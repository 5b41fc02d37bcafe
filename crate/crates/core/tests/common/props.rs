//! Property checks shared by the proptest suites and the acceptance runner.
//! Each returns `Err` with a description of the first violation.

use polyspectra_core::faultlines::{build_surface_map, fault_scan, halton_probes};
use polyspectra_core::matpoly::spectral_norm;
use polyspectra_core::perturbations::{
    ball_membership, build_qhat, build_qtilde, certify_multiple, distance_to_eigenvalue, find_saddle,
    spread_perturbation, trailing_projector, SaddleKind, TAU_DEFECT_REL, TAU_MULT_REL,
};
use polyspectra_core::pseudospectrum::components::label_at;
use polyspectra_core::pseudospectrum::{
    compute_field, default_window, field_value, label_sublevel, components, GridSpec, ScalarField,
};
use polyspectra_core::svdcore::{f_eps, grad_s_min, s_min, singular_triplets, singular_values};
use polyspectra_core::{CMatrix, Complex64, MatrixPolynomial, WeightPolynomial};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| random_complex(rng))
}

pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    random_matrix(rng, n).qr().q()
}

pub fn random_poly<R: Rng>(rng: &mut R, n: usize, m: usize) -> MatrixPolynomial {
    MatrixPolynomial::new((0..=m).map(|_| random_matrix(rng, n)).collect()).unwrap()
}

pub fn random_point<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    Complex64::new(rng.random_range(-radius..radius), rng.random_range(-radius..radius))
}

/// Weights in `[0.5, 1.5]` on every coefficient.
pub fn random_weight<R: Rng>(rng: &mut R, m: usize) -> WeightPolynomial {
    WeightPolynomial::new((0..=m).map(|_| rng.random_range(0.5..1.5)).collect()).unwrap()
}

pub fn horner_matches_naive(p: &MatrixPolynomial, z: Complex64) -> Check {
    let naive: CMatrix = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| c * z.powi(j as i32))
        .fold(CMatrix::zeros(p.dim(), p.dim()), |a, b| a + b);
    let diff = (p.evaluate(z) - &naive).norm();
    let scale = p.scale_at(z).max(naive.norm());
    if diff <= 1e-12 * scale {
        Ok(())
    } else {
        Err(format!("Horner differs from power sum by {diff:e} at {z}"))
    }
}

pub fn eigenvalues_consistent(p: &MatrixPolynomial) -> Check {
    let eigen = p.eigenvalues(None).map_err(|e| e.to_string())?;
    if eigen.total_multiplicity() != p.dim() * p.degree() {
        return Err(format!("multiplicities sum to {}", eigen.total_multiplicity()));
    }
    for (z, mult) in eigen.iter() {
        let scale = p.scale_at(z).max(1.0);
        let s = s_min(p, z);
        if s >= 1e-8 * scale {
            return Err(format!("s_min = {s:e} at reported eigenvalue {z}"));
        }
        let geo = p.geometric_multiplicity(z, 1e-8);
        if geo > mult {
            return Err(format!("geometric {geo} > algebraic {mult} at {z}"));
        }
    }
    Ok(())
}

/// Central differences with `h = 1e-6`; skipped (`Ok(false)`) where the gap
/// or `s_n` is below `1e-3`.
pub fn gradient_matches_differences(p: &MatrixPolynomial, z: Complex64) -> Result<bool, String> {
    let s = singular_values(p, z);
    let n = s.len();
    if s[n - 1] < 1e-3 || (n > 1 && s[n - 2] - s[n - 1] < 1e-3) {
        return Ok(false);
    }
    let h = 1e-6;
    let fd_x = (s_min(p, z + h) - s_min(p, z - h)) / (2.0 * h);
    let fd_y = (s_min(p, z + Complex64::new(0.0, h)) - s_min(p, z - Complex64::new(0.0, h))) / (2.0 * h);
    let g = grad_s_min(p, z);
    if !g.valid {
        return Err(format!("gradient invalid at {z} with gap ≥ 1e-3"));
    }
    let err = Complex64::new(g.dx - fd_x, g.dy - fd_y).norm();
    let scale = Complex64::new(fd_x, fd_y).norm().max(1.0);
    if err <= 1e-5 * scale {
        Ok(true)
    } else {
        Err(format!("gradient ({}, {}) vs differences ({fd_x}, {fd_y}) at {z}", g.dx, g.dy))
    }
}

pub fn weyl_continuity(p: &MatrixPolynomial, a: Complex64, b: Complex64) -> Check {
    let lhs = (s_min(p, a) - s_min(p, b)).abs();
    let rhs = spectral_norm(&(p.evaluate(a) - p.evaluate(b)));
    if lhs <= rhs * (1.0 + 1e-10) + 1e-13 {
        Ok(())
    } else {
        Err(format!("|Δs_min| = {lhs:e} > {rhs:e} between {a} and {b}"))
    }
}

pub fn f_monotone(p: &MatrixPolynomial, w: &WeightPolynomial, z: Complex64, e1: f64, e2: f64) -> Check {
    let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
    if lo == hi {
        return Ok(());
    }
    if f_eps(p, w, lo, z) > f_eps(p, w, hi, z) {
        Ok(())
    } else {
        Err(format!("F not decreasing in ε at {z}"))
    }
}

/// Component count never exceeds the number of distinct eigenvalues; the
/// sublevel sets are nested; every bounded component holds an eigenvalue.
pub fn component_structure(p: &MatrixPolynomial, w: &WeightPolynomial, levels: &[f64], nx: usize) -> Check {
    let eigen = p.eigenvalues(None).map_err(|e| e.to_string())?;
    let eps_max = levels.iter().copied().fold(0.0, f64::max);
    let grid = default_window(p, w, eps_max, &eigen, nx, nx).map_err(|e| e.to_string())?;
    let field = compute_field(p, w, grid);
    let mut previous: Option<Vec<u32>> = None;
    let mut sorted = levels.to_vec();
    sorted.sort_by(f64::total_cmp);
    for &eps in &sorted {
        let (labels, count) = label_sublevel(&field, eps);
        if count > eigen.distinct_count() {
            return Err(format!(
                "{count} components at ε = {eps:e} but {} distinct eigenvalues",
                eigen.distinct_count()
            ));
        }
        if let Some(prev) = &previous {
            if prev.iter().zip(&labels).any(|(&a, &b)| a != 0 && b == 0) {
                return Err(format!("sublevel set at ε = {eps:e} does not contain the smaller one"));
            }
        }
        if let Ok(report) = components(&field, eps, &eigen) {
            let spurious = report
                .eigen_assignment
                .iter()
                .zip(&report.bounded)
                .filter(|(e, &b)| b && e.is_empty())
                .count();
            if spurious > 0 {
                return Err(format!("{spurious} bounded components without eigenvalues at ε = {eps:e}"));
            }
        }
        previous = Some(labels);
    }
    Ok(())
}

/// Interior strict local minima of the field sit within two cells of an
/// eigenvalue.
pub fn local_minima_near_eigenvalues(p: &MatrixPolynomial, w: &WeightPolynomial, nx: usize) -> Check {
    let eigen = p.eigenvalues(None).map_err(|e| e.to_string())?;
    let grid = default_window(p, w, 0.1 * p.max_norm(), &eigen, nx, nx).map_err(|e| e.to_string())?;
    let field = compute_field(p, w, grid);
    let tol = 2.0 * grid.cell_diagonal();
    for j in 1..grid.ny - 1 {
        for i in 1..grid.nx - 1 {
            let v = field.value(i, j);
            if grid.neighbors8(i, j).all(|(a, b)| field.value(a, b) > v) {
                let z = grid.point(i, j);
                if eigen.eigenvalues.iter().all(|e| (e - z).norm() > tol) {
                    return Err(format!("strict local minimum {v:e} at {z} away from σ(P)"));
                }
            }
        }
    }
    Ok(())
}

/// Random members of the ball have their eigenvalues in `Λε`, and each
/// bounded component keeps its eigenvalue count.
pub fn ball_members_respect_components<R: Rng>(
    rng: &mut R,
    p: &MatrixPolynomial,
    w: &WeightPolynomial,
    eps: f64,
    samples: usize,
    nx: usize,
) -> Check {
    let eigen = p.eigenvalues(None).map_err(|e| e.to_string())?;
    // raise ε until the grid resolves every eigenvalue
    let mut eps = eps;
    let (field, report) = loop {
        let grid = default_window(p, w, eps, &eigen, nx, nx).map_err(|e| e.to_string())?;
        let field = compute_field(p, w, grid);
        match components(&field, eps, &eigen) {
            Ok(report) => break (field, report),
            Err(polyspectra_core::Error::GridTooCoarse { .. }) if eps < 1e3 * p.max_norm() => eps *= 2.0,
            Err(e) => return Err(e.to_string()),
        }
    };
    let conserve = report.all_bounded();
    let totals = report.multiplicity_totals();
    for _ in 0..samples {
        let deltas = (0..=p.degree())
            .map(|j| {
                let d = random_matrix(rng, p.dim());
                let target = eps * w.weight(j) * rng.random_range(0.0..1.0);
                &d * Complex64::new(target / spectral_norm(&d), 0.0)
            })
            .collect();
        let q = polyspectra_core::perturbations::PerturbationSet::new(p.clone(), deltas)
            .map_err(|e| e.to_string())?;
        let eq = q.perturbed().eigenvalues(None).map_err(|e| e.to_string())?;
        let mut counts = vec![0usize; report.count];
        for (z, mult) in eq.iter() {
            let v = field_value(p, w, z);
            if v > eps * (1.0 + 1e-9) {
                return Err(format!("eigenvalue {z} of a ball member has s_n/w = {v:e} > ε = {eps:e}"));
            }
            if conserve {
                let label = label_at(&field, &report.labels, z)
                    .or_else(|| nearest_label(&field, &report.labels, z, 2))
                    .ok_or_else(|| format!("eigenvalue {z} of a ball member not on any component"))?;
                counts[label as usize - 1] += mult;
            }
        }
        if conserve && counts != totals {
            return Err(format!("component eigenvalue counts {counts:?} differ from {totals:?}"));
        }
    }
    Ok(())
}

fn nearest_label(field: &ScalarField, labels: &[u32], z: Complex64, cells: usize) -> Option<u32> {
    let g = &field.grid;
    let (ci, cj) = g.nearest(z)?;
    let mut best: Option<(f64, u32)> = None;
    for j in cj.saturating_sub(cells)..=(cj + cells).min(g.ny - 1) {
        for i in ci.saturating_sub(cells)..=(ci + cells).min(g.nx - 1) {
            let l = labels[g.index(i, j)];
            let d = (g.point(i, j) - z).norm();
            if l != 0 && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, l));
            }
        }
    }
    best.map(|(_, l)| l)
}

/// Fault points of `Iλ − A` for normal `A` are equidistant from their two
/// nearest eigenvalues.
pub fn normal_pencil_faults_are_voronoi<R: Rng>(rng: &mut R, k: usize) -> Check {
    let eigs: Vec<Complex64> = (0..k).map(|_| random_point(rng, 2.0)).collect();
    let u = random_unitary(rng, k);
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(eigs.clone()));
    let a = &u * d * u.adjoint();
    let p = MatrixPolynomial::pencil(&a).map_err(|e| e.to_string())?;
    let grid = GridSpec::around(&eigs, 0.2, 0.5, 121, 121).map_err(|e| e.to_string())?;
    let map = build_surface_map(&p, &halton_probes(&grid, 32)).map_err(|e| e.to_string())?;
    let report = fault_scan(&p, &grid, &map);
    if report.refined_points.is_empty() {
        return Err("no fault points found for a normal pencil".into());
    }
    let tol = grid.cell_diagonal();
    for z in &report.refined_points {
        let mut dist: Vec<f64> = eigs.iter().map(|e| (e - z).norm()).collect();
        dist.sort_by(f64::total_cmp);
        if dist[1] - dist[0] > tol {
            return Err(format!("fault point {z} is {:e} closer to one eigenvalue", dist[1] - dist[0]));
        }
    }
    Ok(())
}

/// The `Q̂`/`Q̃` construction properties at `μ`.
pub fn perturbation_properties<R: Rng>(rng: &mut R, p: &MatrixPolynomial, w: &WeightPolynomial, mu: Complex64) -> Check {
    let t = singular_triplets(p, mu);
    let n = t.len();
    let k = t.smallest_multiplicity(TAU_MULT_REL * t.largest());
    let delta = distance_to_eigenvalue(p, w, mu).delta;
    let qh = build_qhat(p, w, mu).map_err(|e| e.to_string())?;
    let qt = build_qtilde(p, w, mu).map_err(|e| e.to_string())?;
    for (name, q) in [("Q̂", &qh), ("Q̃", &qt)] {
        let r = ball_membership(q, w, delta).radius;
        if (r - delta).abs() > 1e-12 * delta {
            return Err(format!("{name} ball radius {r:e} vs δ = {delta:e}"));
        }
        let qp = q.perturbed();
        let res = s_min(&qp, mu);
        if res > 1e-10 * qp.scale_at(mu).max(1.0) {
            return Err(format!("{name}(μ) has s_min = {res:e}"));
        }
    }
    let qhp = qh.perturbed();
    let geo = qhp.geometric_multiplicity(mu, 1e-10);
    if geo != k {
        return Err(format!("geometric multiplicity {geo} in Q̂, singular-value multiplicity {k}"));
    }
    let qmu = qhp.evaluate(mu);
    for j in n - k..n {
        let r = (t.left[j].adjoint() * &qmu).norm();
        if r > 1e-10 * qhp.scale_at(mu).max(1.0) {
            return Err(format!("u_{j}* Q̂(μ) has norm {r:e}"));
        }
    }
    for (j, d) in qt.deltas.iter().enumerate() {
        if w.weight(j) == 0.0 {
            continue;
        }
        let s = d.singular_values();
        let rank = s.iter().filter(|&&x| x > 1e-10 * s.max()).count();
        if rank != k {
            return Err(format!("rank Δ̃_{j} = {rank}, expected {k}"));
        }
    }
    let z = trailing_projector(&t, n);
    let defect = (z.adjoint() * &z - CMatrix::identity(n, n)).norm();
    if defect > 1e-12 {
        return Err(format!("‖Ẑ*Ẑ − I‖ = {defect:e}"));
    }
    // Rebuild Ẑ from the singular vectors with random per-pair phases.
    let mut rotated = t.clone();
    for j in 0..n {
        let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        rotated.left[j] *= phase;
        rotated.right[j] *= phase;
    }
    let e = trailing_projector(&rotated, n) * Complex64::new(-t.smallest(), 0.0);
    let rebuilt = spread_perturbation(p, w, mu, e);
    for (a, b) in rebuilt.deltas.iter().zip(&qh.deltas) {
        let d = (a - b).norm();
        if d > 1e-12 * b.norm().max(1e-300).max(delta) {
            return Err(format!("phase change moved Q̂ coefficients by {d:e}"));
        }
    }
    Ok(())
}

/// When `find_saddle` converges to a smooth saddle, `Q̂` there has a multiple
/// eigenvalue. Returns whether a smooth saddle was found.
pub fn saddle_is_defective(p: &MatrixPolynomial, w: &WeightPolynomial, start: Complex64, window: &GridSpec) -> Result<bool, String> {
    let Ok(s) = find_saddle(p, w, start, window) else {
        return Ok(false);
    };
    if s.kind != SaddleKind::Smooth {
        return Ok(false);
    }
    let cert = certify_multiple(p, w, s.mu).map_err(|e| e.to_string())?;
    if cert.geometric_mult != 1 {
        return Ok(false);
    }
    let crit = cert.criterion.expect("k = 1").norm();
    let tau = TAU_DEFECT_REL * spectral_norm(&p.evaluate_derivative(s.mu)).max(1.0);
    if crit < tau && cert.defective {
        Ok(true)
    } else {
        Err(format!("saddle {} has criterion {crit:e} ≥ {tau:e}", s.mu))
    }
}
