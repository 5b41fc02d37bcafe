use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matpoly::{EigenReport, MatrixPolynomial, WeightPolynomial};
use crate::par::Execution;
use crate::svdcore::s_min;

/// Uniform `nx × ny` lattice over a rectangle of the complex plane. Node
/// `(i, j)` sits at `x_min + i·dx + i·(y_min + j·dy)`; storage is row-major
/// with `y` as the slow index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(x_min < x_max) || !(y_min < y_max) {
            return Err(Error::InvalidGrid(format!(
                "empty window [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        if ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidGrid("window bounds must be finite".into()));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 nodes per axis, got {nx} x {ny}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn cell_diagonal(&self) -> f64 {
        self.dx().hypot(self.dy())
    }

    pub fn diagonal(&self) -> f64 {
        (self.x_max - self.x_min).hypot(self.y_max - self.y_min)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.x_min + i as f64 * self.dx(),
            self.y_min + j as f64 * self.dy(),
        )
    }

    pub fn point_at(&self, idx: usize) -> Complex64 {
        let (i, j) = self.coords(idx);
        self.point(i, j)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x_min && z.re <= self.x_max && z.im >= self.y_min && z.im <= self.y_max
    }

    /// Nearest node to `z`, or `None` outside the window.
    pub fn nearest(&self, z: Complex64) -> Option<(usize, usize)> {
        if !self.contains(z) {
            return None;
        }
        let i = ((z.re - self.x_min) / self.dx()).round() as usize;
        let j = ((z.im - self.y_min) / self.dy()).round() as usize;
        Some((i.min(self.nx - 1), j.min(self.ny - 1)))
    }

    /// Corners of the cell containing `z`, nearest first.
    pub fn cell_corners(&self, z: Complex64) -> Vec<(usize, usize)> {
        if !self.contains(z) {
            return Vec::new();
        }
        let fi = ((z.re - self.x_min) / self.dx()).floor() as usize;
        let fj = ((z.im - self.y_min) / self.dy()).floor() as usize;
        let fi = fi.min(self.nx - 2);
        let fj = fj.min(self.ny - 2);
        let mut corners = vec![(fi, fj), (fi + 1, fj), (fi, fj + 1), (fi + 1, fj + 1)];
        corners.sort_by(|a, b| {
            let da = (self.point(a.0, a.1) - z).norm();
            let db = (self.point(b.0, b.1) - z).norm();
            da.partial_cmp(&db).unwrap().then(a.cmp(b))
        });
        corners
    }

    /// 8-neighbours of node `(i, j)` that lie on the grid.
    pub fn neighbors8(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        const OFFSETS: [(isize, isize); 8] = [
            (-1, -1),
            (0, -1),
            (1, -1),
            (-1, 0),
            (1, 0),
            (-1, 1),
            (0, 1),
            (1, 1),
        ];
        OFFSETS.iter().filter_map(move |&(di, dj)| {
            let ni = i as isize + di;
            let nj = j as isize + dj;
            (ni >= 0 && nj >= 0 && (ni as usize) < self.nx && (nj as usize) < self.ny)
                .then_some((ni as usize, nj as usize))
        })
    }

    pub fn on_edge(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1
    }

    /// Bounding box of `points` scaled by `1 + inflate` about its centre and
    /// padded by `margin` on every side.
    pub fn around(points: &[Complex64], inflate: f64, margin: f64, nx: usize, ny: usize) -> Result<Self> {
        if points.is_empty() {
            let r = margin.max(1.0);
            return Self::new(-r, r, -r, r, nx, ny);
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for z in points {
            x0 = x0.min(z.re);
            x1 = x1.max(z.re);
            y0 = y0.min(z.im);
            y1 = y1.max(z.im);
        }
        let hx = 0.5 * (x1 - x0) * (1.0 + inflate) + margin;
        let hy = 0.5 * (y1 - y0) * (1.0 + inflate) + margin;
        let cx = 0.5 * (x0 + x1);
        let cy = 0.5 * (y0 + y1);
        Self::new(cx - hx, cx + hx, cy - hy, cy + hy, nx, ny)
    }
}

/// Default window for `Λε(P)`: the bounding box of `σ(P)` inflated by 50%,
/// padded by a first-order estimate `ε·w(ρ)·‖P_m^{-1}‖` of the component
/// radius (at least a quarter of the spectral extent, and at least 0.5).
pub fn default_window(
    p: &MatrixPolynomial,
    w: &WeightPolynomial,
    eps: f64,
    eigen: &EigenReport,
    nx: usize,
    ny: usize,
) -> Result<GridSpec> {
    let rho = eigen
        .eigenvalues
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let inv_norm = 1.0 / p.check_leading_nonsingular()?;
    let extent = eigen
        .eigenvalues
        .iter()
        .flat_map(|a| eigen.eigenvalues.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    let margin = (eps * w.eval_unchecked(rho + 1.0) * inv_norm)
        .max(0.25 * extent)
        .max(0.5);
    GridSpec::around(&eigen.eigenvalues, 0.5, margin, nx, ny)
}

/// Samples of `s_n(λ)/w(|λ|)` on a grid; `Λε(P) ∩ grid = { value ≤ ε }` for
/// every `ε` at once.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Bilinear interpolation of the field at `z` (clamped to the window).
    pub fn interpolate(&self, z: Complex64) -> f64 {
        let g = &self.grid;
        let fx = ((z.re - g.x_min) / g.dx()).clamp(0.0, (g.nx - 1) as f64);
        let fy = ((z.im - g.y_min) / g.dy()).clamp(0.0, (g.ny - 1) as f64);
        let i = (fx.floor() as usize).min(g.nx - 2);
        let j = (fy.floor() as usize).min(g.ny - 2);
        let tx = fx - i as f64;
        let ty = fy - j as f64;
        let v00 = self.value(i, j);
        let v10 = self.value(i + 1, j);
        let v01 = self.value(i, j + 1);
        let v11 = self.value(i + 1, j + 1);
        (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11)
    }
}

/// `s_n(λ)/w(|λ|)` at one point.
pub fn field_value(p: &MatrixPolynomial, w: &WeightPolynomial, lambda: Complex64) -> f64 {
    s_min(p, lambda) / w.eval_unchecked(lambda.norm())
}

pub fn compute_field(p: &MatrixPolynomial, w: &WeightPolynomial, grid: GridSpec) -> ScalarField {
    compute_field_with(p, w, grid, Execution::Parallel)
}

pub fn compute_field_with(
    p: &MatrixPolynomial,
    w: &WeightPolynomial,
    grid: GridSpec,
    exec: Execution,
) -> ScalarField {
    let values = exec.map(grid.len(), |idx| field_value(p, w, grid.point_at(idx)));
    ScalarField { grid, values }
}

/// Sufficient condition for `Λε(P)` to be bounded: `ε·w_m < 1/‖P_m^{-1}‖`.
/// Weights beyond the polynomial degree make the set unbounded.
pub fn boundedness_check(p: &MatrixPolynomial, w: &WeightPolynomial, eps: f64) -> Result<bool> {
    let m = p.degree();
    if w.weights().iter().skip(m + 1).any(|&x| x > 0.0) {
        return Ok(false);
    }
    let smin = p.check_leading_nonsingular()?;
    Ok(eps * w.weight(m) < smin)
}
