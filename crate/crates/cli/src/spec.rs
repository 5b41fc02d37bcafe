//! The JSON problem description:
//!
//! ```json
//! {
//!   "n": 2,
//!   "m": 1,
//!   "coefficients": [{"re": [[0.0, 1.0], [1.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}, …],
//!   "weight": {"mode": "unit"},
//!   "window": {"x_min": -2.0, "x_max": 2.0, "y_min": -2.0, "y_max": 2.0},
//!   "epsilons": [0.01, 0.1]
//! }
//! ```
//!
//! Coefficients are listed in ascending powers. `im` may be omitted for real
//! matrices. Weight modes are `constant` (`value`), `unit`,
//! `coefficient_norms` and `custom` (`weights`).

use polyspectra_core::{CMatrix, Complex64, MatrixPolynomial, WeightPolynomial};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub n: usize,
    pub m: usize,
    pub coefficients: Vec<MatrixEntry>,
    pub weight: WeightMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightMode {
    Constant { value: f64 },
    Unit,
    CoefficientNorms,
    Custom { weights: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowEntry {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

/// A validated problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub polynomial: MatrixPolynomial,
    pub weight: WeightPolynomial,
    pub weight_mode: WeightMode,
    pub window: Option<WindowEntry>,
    pub epsilons: Vec<f64>,
}

pub fn parse_spec_file(text: &str) -> CliResult<SpecFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Parse(format!("field `{path}`: {inner}"))
    })
}

/// Canonical text form: pretty-printed JSON with a trailing newline.
pub fn to_canonical(file: &SpecFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("spec serializes");
    s.push('\n');
    s
}

fn check_matrix(rows: &[Vec<f64>], n: usize, field: &str) -> CliResult<()> {
    if rows.len() != n {
        return Err(CliError::Parse(format!("field `{field}`: expected {n} rows, got {}", rows.len())));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::Parse(format!(
                "field `{field}[{r}]`: expected {n} columns, got {}",
                row.len()
            )));
        }
        if let Some(c) = row.iter().position(|x| !x.is_finite()) {
            return Err(CliError::Parse(format!("field `{field}[{r}][{c}]`: not finite")));
        }
    }
    Ok(())
}

impl SpecFile {
    pub fn validate(&self) -> CliResult<ProblemSpec> {
        if self.n == 0 {
            return Err(CliError::Parse("field `n`: must be at least 1".into()));
        }
        if self.coefficients.len() != self.m + 1 {
            return Err(CliError::Parse(format!(
                "field `coefficients`: expected m + 1 = {} matrices, got {}",
                self.m + 1,
                self.coefficients.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(self.m + 1);
        for (j, entry) in self.coefficients.iter().enumerate() {
            check_matrix(&entry.re, self.n, &format!("coefficients[{j}].re"))?;
            if let Some(im) = &entry.im {
                check_matrix(im, self.n, &format!("coefficients[{j}].im"))?;
            }
            coeffs.push(CMatrix::from_fn(self.n, self.n, |r, c| {
                let im = entry.im.as_ref().map_or(0.0, |im| im[r][c]);
                Complex64::new(entry.re[r][c], im)
            }));
        }
        let polynomial = MatrixPolynomial::new(coeffs)?;
        let weight = match &self.weight {
            WeightMode::Constant { value } => WeightPolynomial::constant(*value),
            WeightMode::Unit => Ok(WeightPolynomial::unit()),
            WeightMode::CoefficientNorms => WeightPolynomial::coefficient_norms(&polynomial),
            WeightMode::Custom { weights } => WeightPolynomial::new(weights.clone()),
        }
        .map_err(|e| CliError::Parse(format!("field `weight`: {e}")))?;
        if let Some(w) = &self.window {
            if !(w.x_min < w.x_max && w.y_min < w.y_max) {
                return Err(CliError::Parse("field `window`: empty or inverted bounds".into()));
            }
        }
        let epsilons = self.epsilons.clone().unwrap_or_default();
        if let Some(k) = epsilons.iter().position(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(CliError::Parse(format!("field `epsilons[{k}]`: must be positive")));
        }
        Ok(ProblemSpec {
            polynomial,
            weight,
            weight_mode: self.weight.clone(),
            window: self.window,
            epsilons,
        })
    }
}

pub fn parse_problem(text: &str) -> CliResult<ProblemSpec> {
    parse_spec_file(text)?.validate()
}
