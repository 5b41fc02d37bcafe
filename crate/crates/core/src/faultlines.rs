//! Fault points: where the two lowest distinct singular-value surfaces of
//! `P(λ)` meet.
//!
//! Surfaces that coincide on a set of generic probe points are collapsed to a
//! single representative index; `c1 > c2` are the two largest representatives
//! and the fault set is `{ λ : s_{c1}(λ) = s_{c2}(λ) }`. Nothing here depends on
//! a weight polynomial.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matpoly::MatrixPolynomial;
use crate::neldermead;
use crate::par::Execution;
use crate::pseudospectrum::GridSpec;
use crate::svdcore::singular_values;

/// Minimum number of probes for surface identification.
pub const MIN_PROBES: usize = 20;
/// Relative agreement at which two surfaces are identified.
pub const TAU_SURFACE: f64 = 1e-10;
/// Iteration cap for the simplex refinement of a fault candidate.
pub const REFINE_ITERATIONS: usize = 200;

/// The map `j ↦ p(j)` on 1-based surface indices (`s₁ ≥ … ≥ s_n`), read at
/// the most generic probe, together with the structural multiplicity of each
/// distinct surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceIndexMap {
    pub representative: Vec<usize>,
    pub c1: usize,
    /// `None` when there is only one distinct surface.
    pub c2: Option<usize>,
    /// Number of coincident sorted indices carried by each distinct surface,
    /// listed from the top surface down.
    pub multiplicities: Vec<usize>,
}

impl SurfaceIndexMap {
    pub fn distinct_surfaces(&self) -> usize {
        self.multiplicities.len()
    }
}

/// `count` points of the Halton (2, 3) sequence mapped into `window`.
pub fn halton_probes(window: &GridSpec, count: usize) -> Vec<Complex64> {
    fn radical_inverse(mut k: usize, base: usize) -> f64 {
        let mut x = 0.0;
        let mut f = 1.0 / base as f64;
        while k > 0 {
            x += (k % base) as f64 * f;
            k /= base;
            f /= base as f64;
        }
        x
    }
    (1..=count)
        .map(|k| {
            Complex64::new(
                window.x_min + (window.x_max - window.x_min) * radical_inverse(k, 2),
                window.y_min + (window.y_max - window.y_min) * radical_inverse(k, 3),
            )
        })
        .collect()
}

/// Sizes of runs of equal values in a descending list.
fn runs(values: &[f64]) -> Vec<usize> {
    let tol = TAU_SURFACE * (1.0 + values[0]);
    let mut sizes = vec![1];
    for w in values.windows(2) {
        if w[0] - w[1] <= tol {
            *sizes.last_mut().unwrap() += 1;
        } else {
            sizes.push(1);
        }
    }
    sizes
}

/// Identifies coincident singular-value surfaces from their values at the
/// probes. Accidental coincidences only merge runs, so the probe showing the
/// most runs reveals the distinct surfaces; each run is represented by its
/// largest index.
pub fn build_surface_map(p: &MatrixPolynomial, probes: &[Complex64]) -> Result<SurfaceIndexMap> {
    if probes.len() < MIN_PROBES {
        return Err(Error::Precondition(format!(
            "surface identification needs at least {MIN_PROBES} probes, got {}",
            probes.len()
        )));
    }
    let multiplicities = probes
        .iter()
        .map(|&z| runs(&singular_values(p, z)))
        .fold(Vec::new(), |best: Vec<usize>, r| if r.len() > best.len() { r } else { best });
    let mut representative = Vec::with_capacity(p.dim());
    let mut end = 0;
    for &size in &multiplicities {
        end += size;
        representative.extend(std::iter::repeat_n(end, size));
    }
    let c1 = end;
    let c2 = (multiplicities.len() > 1).then(|| c1 - multiplicities[multiplicities.len() - 1]);
    Ok(SurfaceIndexMap {
        representative,
        c1,
        c2,
        multiplicities,
    })
}

/// Gap between the lowest distinct surface and the next one up, or `None`
/// without a second surface.
///
/// The lowest surface at `λ` carries the smallest structural multiplicity
/// `k` for which `s_{n−k}` separates from `s_n`; the gap is `s_{n−k} − s_n`,
/// and zero when no structural multiplicity separates (a fault point).
pub fn collapsed_gap(p: &MatrixPolynomial, lambda: Complex64, map: &SurfaceIndexMap) -> Option<f64> {
    map.c2?;
    let s = singular_values(p, lambda);
    let n = s.len();
    let tol = TAU_SURFACE * (1.0 + s[0]);
    let mut sizes = map.multiplicities.clone();
    sizes.sort_unstable();
    sizes.dedup();
    Some(
        sizes
            .into_iter()
            .filter(|&k| k < n)
            .map(|k| s[n - 1 - k] - s[n - 1])
            .find(|&g| g > tol)
            .unwrap_or(0.0),
    )
}

pub fn is_fault_point(p: &MatrixPolynomial, lambda: Complex64, map: &SurfaceIndexMap, tau: f64) -> bool {
    collapsed_gap(p, lambda, map).is_some_and(|g| g <= tau)
}

/// Acceptance threshold for refined fault points.
pub fn tau_fault_refined(p: &MatrixPolynomial, lambda: Complex64) -> f64 {
    let s1 = singular_values(p, lambda)[0];
    1e-8 * (1.0 + s1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaultReport {
    /// Grid nodes `(i, j)` flagged as local minima of the gap, sorted by index.
    pub cells: Vec<(usize, usize)>,
    pub refined_points: Vec<Complex64>,
    pub empty: bool,
}

pub fn fault_scan(p: &MatrixPolynomial, grid: &GridSpec, map: &SurfaceIndexMap) -> FaultReport {
    fault_scan_with(p, grid, map, Execution::Parallel)
}

pub fn fault_scan_with(
    p: &MatrixPolynomial,
    grid: &GridSpec,
    map: &SurfaceIndexMap,
    exec: Execution,
) -> FaultReport {
    if map.c2.is_none() {
        return FaultReport {
            cells: Vec::new(),
            refined_points: Vec::new(),
            empty: true,
        };
    }
    let gap_at = |z: Complex64| collapsed_gap(p, z, map).expect("c2 defined");
    let g = exec.map(grid.len(), |idx| gap_at(grid.point_at(idx)));

    let candidates: Vec<usize> = (0..grid.len())
        .filter(|&idx| is_candidate(grid, &g, idx))
        .collect();

    let cell = grid.cell_diagonal();
    let refined: Vec<Option<Complex64>> = exec.map(candidates.len(), |k| {
        let start = grid.point_at(candidates[k]);
        let scale = 0.5 * grid.dx().min(grid.dy());
        let m = neldermead::minimize(gap_at, start, scale, REFINE_ITERATIONS);
        let ok = m.value <= tau_fault_refined(p, m.point)
            && grid.contains(m.point)
            && (m.point - start).norm() <= 3.0 * cell;
        ok.then_some(m.point)
    });

    let mut refined_points: Vec<Complex64> = Vec::new();
    for z in refined.into_iter().flatten() {
        if refined_points.iter().all(|q| (q - z).norm() > 0.5 * cell) {
            refined_points.push(z);
        }
    }
    let cells = candidates.iter().map(|&idx| grid.coords(idx)).collect();
    FaultReport {
        empty: refined_points.is_empty(),
        cells,
        refined_points,
    }
}

/// A node is a candidate when it is an 8-neighbour minimum of the gap, or the
/// bottom of a valley along one of the four grid directions, and the gap is
/// below `10·cell diagonal·local Lipschitz estimate`.
fn is_candidate(grid: &GridSpec, g: &[f64], idx: usize) -> bool {
    let (i, j) = grid.coords(idx);
    let v = g[idx];
    let here = grid.point(i, j);
    let mut lipschitz: f64 = 0.0;
    let mut local_min = true;
    for (ni, nj) in grid.neighbors8(i, j) {
        let nv = g[grid.index(ni, nj)];
        lipschitz = lipschitz.max((nv - v).abs() / (grid.point(ni, nj) - here).norm());
        if nv < v {
            local_min = false;
        }
    }
    let threshold = 10.0 * grid.cell_diagonal() * lipschitz;
    if !(v < threshold) && v != 0.0 {
        return false;
    }
    if local_min {
        return true;
    }
    if grid.on_edge(i, j) {
        return false;
    }
    const DIRS: [(isize, isize); 4] = [(1, 0), (0, 1), (1, 1), (1, -1)];
    DIRS.iter().any(|&(di, dj)| {
        let a = grid.index((i as isize + di) as usize, (j as isize + dj) as usize);
        let b = grid.index((i as isize - di) as usize, (j as isize - dj) as usize);
        v <= g[a] && v <= g[b]
    })
}
