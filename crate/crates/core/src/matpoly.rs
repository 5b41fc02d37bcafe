//! Matrix polynomials `P(λ) = Σ Pⱼ λʲ`, weight polynomials and eigenvalues.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Spectral norm (largest singular value) of a complex matrix.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Smallest singular value of a square complex matrix.
pub fn smallest_singular_value(a: &CMatrix) -> f64 {
    a.singular_values()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// A degree-`m` polynomial with `n×n` complex coefficients, index `j` holding
/// the coefficient of `λʲ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    n: usize,
    coeffs: Vec<CMatrix>,
}

impl MatrixPolynomial {
    pub fn new(coeffs: Vec<CMatrix>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidPolynomial("no coefficients".into()))?;
        let n = first.nrows();
        if n == 0 {
            return Err(Error::InvalidPolynomial("dimension must be positive".into()));
        }
        for (j, c) in coeffs.iter().enumerate() {
            if c.nrows() != n || c.ncols() != n {
                return Err(Error::InvalidPolynomial(format!(
                    "coefficient {j} is {}x{}, expected {n}x{n}",
                    c.nrows(),
                    c.ncols()
                )));
            }
            if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidPolynomial(format!(
                    "coefficient {j} has non-finite entries"
                )));
            }
        }
        Ok(Self { n, coeffs })
    }

    /// Builds a polynomial from real coefficient matrices given as rows.
    pub fn from_real_rows(coeffs: &[Vec<Vec<f64>>]) -> Result<Self> {
        let mats = coeffs
            .iter()
            .map(|rows| {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidPolynomial("coefficient is not square".into()));
                }
                Ok(CMatrix::from_fn(n, n, |i, k| Complex64::new(rows[i][k], 0.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(mats)
    }

    /// Scalar polynomial `Σ cⱼ λʲ` (n = 1), coefficients in ascending order.
    pub fn scalar(coeffs: &[Complex64]) -> Result<Self> {
        Self::new(
            coeffs
                .iter()
                .map(|&c| CMatrix::from_element(1, 1, c))
                .collect(),
        )
    }

    /// The pencil `Iλ − A` of the standard eigenvalue problem.
    pub fn pencil(a: &CMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::InvalidPolynomial("pencil matrix is not square".into()));
        }
        let n = a.nrows();
        Self::new(vec![-a.clone(), CMatrix::identity(n, n)])
    }

    /// Diagonal polynomial with the given scalar polynomials on the diagonal.
    /// Each entry lists ascending coefficients; shorter entries are zero-padded.
    pub fn diagonal(entries: &[Vec<Complex64>]) -> Result<Self> {
        let n = entries.len();
        let m = entries.iter().map(|e| e.len()).max().unwrap_or(0);
        if n == 0 || m == 0 {
            return Err(Error::InvalidPolynomial("empty diagonal".into()));
        }
        let coeffs = (0..m)
            .map(|j| {
                CMatrix::from_fn(n, n, |i, k| {
                    if i == k {
                        entries[i].get(j).copied().unwrap_or_default()
                    } else {
                        Complex64::default()
                    }
                })
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &CMatrix {
        &self.coeffs[j]
    }

    pub fn leading(&self) -> &CMatrix {
        self.coeffs.last().expect("at least one coefficient")
    }

    /// `P(λ)` by Horner's rule.
    pub fn evaluate(&self, lambda: Complex64) -> CMatrix {
        let mut iter = self.coeffs.iter().rev();
        let mut acc = iter.next().expect("at least one coefficient").clone();
        for c in iter {
            acc *= lambda;
            acc += c;
        }
        acc
    }

    /// `P′(λ)` evaluated directly, without forming the derivative polynomial.
    pub fn evaluate_derivative(&self, lambda: Complex64) -> CMatrix {
        let m = self.degree();
        if m == 0 {
            return CMatrix::zeros(self.n, self.n);
        }
        let mut acc = &self.coeffs[m] * Complex64::new(m as f64, 0.0);
        for j in (1..m).rev() {
            acc *= lambda;
            acc += &self.coeffs[j] * Complex64::new(j as f64, 0.0);
        }
        acc
    }

    /// `P′(λ) = Σ j·Pⱼ λ^{j−1}`; a constant polynomial yields the zero
    /// polynomial of degree 0.
    pub fn derivative(&self) -> MatrixPolynomial {
        if self.coeffs.len() == 1 {
            return Self {
                n: self.n,
                coeffs: vec![CMatrix::zeros(self.n, self.n)],
            };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * Complex64::new(j as f64, 0.0))
            .collect();
        Self { n: self.n, coeffs }
    }

    /// `max_j ‖Pⱼ‖` in the spectral norm.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(spectral_norm).fold(0.0, f64::max)
    }

    pub fn coefficient_norms(&self) -> Vec<f64> {
        self.coeffs.iter().map(spectral_norm).collect()
    }

    /// Upper bound `Σ ‖Pⱼ‖ |λ|ʲ` for `‖P(λ)‖`, used to scale tolerances.
    pub fn scale_at(&self, lambda: Complex64) -> f64 {
        let r = lambda.norm();
        self.coefficient_norms()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c)
    }

    /// Threshold below which the leading coefficient is treated as singular.
    pub fn singularity_threshold(&self) -> f64 {
        self.n as f64 * f64::EPSILON * spectral_norm(self.leading())
    }

    /// Fails with [`Error::SingularLeading`] when `P_m` is numerically singular.
    pub fn check_leading_nonsingular(&self) -> Result<f64> {
        let smin = smallest_singular_value(self.leading());
        let threshold = self.singularity_threshold();
        if smin <= threshold {
            return Err(Error::SingularLeading { smin, threshold });
        }
        Ok(smin)
    }

    /// First companion matrix of the monic polynomial `P_m^{-1} P(λ)`.
    pub fn companion(&self) -> Result<CMatrix> {
        self.check_leading_nonsingular()?;
        let n = self.n;
        let m = self.degree();
        let lu = self.leading().clone().lu();
        let mut c = CMatrix::zeros(n * m, n * m);
        for j in 0..m {
            let a = lu.solve(&self.coeffs[j]).ok_or(Error::SingularLeading {
                smin: 0.0,
                threshold: self.singularity_threshold(),
            })?;
            // Block column m-1-j of the first block row holds -A_j.
            let col = (m - 1 - j) * n;
            c.view_mut((0, col), (n, n)).copy_from(&(-a));
        }
        for i in 1..m {
            for k in 0..n {
                c[(i * n + k, (i - 1) * n + k)] = Complex64::new(1.0, 0.0);
            }
        }
        Ok(c)
    }

    /// All `nm` eigenvalues, clustered into distinct values with algebraic
    /// multiplicities. `cluster_radius` defaults to `1e-6·(1 + max|λᵢ|)`.
    pub fn eigenvalues(&self, cluster_radius: Option<f64>) -> Result<EigenReport> {
        if self.degree() == 0 {
            self.check_leading_nonsingular()?;
            return Ok(EigenReport {
                eigenvalues: Vec::new(),
                multiplicities: Vec::new(),
                cluster_radius: cluster_radius.unwrap_or(1e-6),
                raw: Vec::new(),
            });
        }
        let c = self.companion()?;
        let raw: Vec<Complex64> = if c.nrows() == 1 {
            vec![c[(0, 0)]]
        } else {
            let schur = Schur::new(c);
            let (_, t) = schur.unpack();
            t.diagonal().iter().copied().collect()
        };
        let max_abs = raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let radius = cluster_radius.unwrap_or(1e-6 * (1.0 + max_abs));
        Ok(EigenReport::cluster(raw, radius))
    }

    /// Number of singular values of `P(λ₀)` at or below `tau·scale_at(λ₀)`.
    pub fn geometric_multiplicity(&self, lambda0: Complex64, tau: f64) -> usize {
        let threshold = tau * self.scale_at(lambda0).max(f64::MIN_POSITIVE);
        self.evaluate(lambda0)
            .singular_values()
            .iter()
            .filter(|&&s| s <= threshold)
            .count()
    }
}

/// Real weights `w₀ … w_m` with `w₀ > 0` and `wⱼ ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightPolynomial {
    weights: Vec<f64>,
}

impl WeightPolynomial {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        match weights.first() {
            None => return Err(Error::InvalidWeight("no weights".into())),
            Some(&w0) if !(w0 > 0.0) || !w0.is_finite() => {
                return Err(Error::InvalidWeight(format!(
                    "constant weight must be positive, got {w0}"
                )))
            }
            _ => {}
        }
        if let Some((j, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w >= 0.0) || !w.is_finite())
        {
            return Err(Error::InvalidWeight(format!(
                "weight {j} must be non-negative and finite, got {w}"
            )));
        }
        Ok(Self { weights })
    }

    /// `w(x) = 1`.
    pub fn unit() -> Self {
        Self { weights: vec![1.0] }
    }

    /// `w(x) = w₀`.
    pub fn constant(w0: f64) -> Result<Self> {
        Self::new(vec![w0])
    }

    /// `wⱼ = ‖Pⱼ‖`, the relative perturbation model.
    pub fn coefficient_norms(p: &MatrixPolynomial) -> Result<Self> {
        Self::new(p.coefficient_norms())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight `j`, zero beyond the stored degree.
    pub fn weight(&self, j: usize) -> f64 {
        self.weights.get(j).copied().unwrap_or(0.0)
    }

    pub fn w0(&self) -> f64 {
        self.weights[0]
    }

    /// True when all non-constant weights vanish.
    pub fn is_constant(&self) -> bool {
        self.weights.iter().skip(1).all(|&w| w == 0.0)
    }

    /// Same polynomial without its non-constant part.
    pub fn constant_part(&self) -> Self {
        Self {
            weights: vec![self.weights[0]],
        }
    }

    /// `Σ wⱼ rʲ` for `r ≥ 0`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if r < 0.0 || r.is_nan() {
            return Err(Error::NegativeRadius(r));
        }
        Ok(self.eval_unchecked(r))
    }

    pub(crate) fn eval_unchecked(&self, r: f64) -> f64 {
        self.weights.iter().rev().fold(0.0, |acc, w| acc * r + w)
    }

    /// `w′(r)`.
    pub fn derivative_at(&self, r: f64) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (j, w)| acc * r + j as f64 * w)
    }
}

/// Distinct eigenvalues with algebraic multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenReport {
    pub eigenvalues: Vec<Complex64>,
    pub multiplicities: Vec<usize>,
    pub cluster_radius: f64,
    /// Unclustered eigenvalues of the companion matrix.
    pub raw: Vec<Complex64>,
}

impl EigenReport {
    /// Single-linkage clustering at distance `2·radius`; each cluster is
    /// represented by its mean. Repeats until representatives are separated.
    pub fn cluster(raw: Vec<Complex64>, radius: f64) -> Self {
        let mut groups: Vec<(Complex64, usize)> = raw.iter().map(|&z| (z, 1)).collect();
        loop {
            let mut merged = false;
            'outer: for i in 0..groups.len() {
                for k in (i + 1)..groups.len() {
                    if (groups[i].0 - groups[k].0).norm() <= 2.0 * radius {
                        let (zi, mi) = groups[i];
                        let (zk, mk) = groups.remove(k);
                        let total = mi + mk;
                        groups[i] = ((zi * mi as f64 + zk * mk as f64) / total as f64, total);
                        merged = true;
                        break 'outer;
                    }
                }
            }
            if !merged {
                break;
            }
        }
        groups.sort_by(|a, b| {
            a.0.re
                .partial_cmp(&b.0.re)
                .unwrap()
                .then(a.0.im.partial_cmp(&b.0.im).unwrap())
        });
        Self {
            eigenvalues: groups.iter().map(|g| g.0).collect(),
            multiplicities: groups.iter().map(|g| g.1).collect(),
            cluster_radius: radius,
            raw,
        }
    }

    pub fn distinct_count(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn all_simple(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Complex64, usize)> + '_ {
        self.eigenvalues
            .iter()
            .copied()
            .zip(self.multiplicities.iter().copied())
    }
}
