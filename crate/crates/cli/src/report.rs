//! Serializable report types. Field order is fixed, so identical runs give
//! identical bytes; wall time is printed to stderr rather than stored.

use polyspectra_core::perturbations::{MultiplicityCertificate, PerturbationSet};
use polyspectra_core::pseudospectrum::GridSpec;
use polyspectra_core::{CMatrix, Complex64};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for C {
    fn from(z: Complex64) -> Self {
        C { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matrix {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&CMatrix> for Matrix {
    fn from(m: &CMatrix) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        Matrix {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl From<GridSpec> for Window {
    fn from(g: GridSpec) -> Self {
        Window {
            x_min: g.x_min,
            x_max: g.x_max,
            y_min: g.y_min,
            y_max: g.y_max,
            nx: g.nx,
            ny: g.ny,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input_sha256: String,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub value: C,
    pub algebraic: usize,
    pub geometric: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigsReport {
    pub run: RunReport,
    pub n: usize,
    pub m: usize,
    pub leading_smin: f64,
    pub eigenvalues: Vec<Eigenvalue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub epsilon: f64,
    /// Grid components of `{ s_n/w ≤ ε }`.
    pub components: usize,
    pub contours: usize,
    /// `Λε` is bounded (`ε·w_m < s_min(P_m)`).
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldReport {
    pub run: RunReport,
    pub window: Window,
    pub field_min: f64,
    pub field_max: f64,
    pub levels: Vec<Level>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault_points: Option<Vec<C>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub id: usize,
    pub epsilon: f64,
    pub origin: C,
    pub closed: bool,
    pub termination: &'static str,
    pub points: usize,
    pub min_gradient_norm: f64,
    pub min_gradient_point: C,
    pub interior_level_curve: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    pub run: RunReport,
    pub window: Window,
    pub curves: Vec<Curve>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeldEigenvalue {
    pub value: C,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub label: u32,
    pub bounded: bool,
    pub multiplicity: usize,
    pub eigenvalues: Vec<HeldEigenvalue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentLevel {
    pub epsilon: f64,
    pub count: usize,
    pub all_bounded: bool,
    pub empty_components: usize,
    pub pseudospectrum_bounded: bool,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentsReport {
    pub run: RunReport,
    pub window: Window,
    pub levels: Vec<ComponentLevel>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceMap {
    pub representative: Vec<usize>,
    pub c1: usize,
    pub c2: Option<usize>,
    pub multiplicities: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaultsReport {
    pub run: RunReport,
    pub window: Window,
    pub surface_map: SurfaceMap,
    pub candidate_cells: usize,
    pub empty: bool,
    pub refined_points: Vec<C>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub mu: C,
    pub delta: f64,
    pub k: usize,
    pub geometric_multiplicity_qhat: usize,
    pub criterion: Option<C>,
    pub defective: bool,
    pub multiple: bool,
    pub residual_hat: f64,
    pub residual_tilde: f64,
    pub origin_substitution: bool,
    pub delta_hat: Vec<Matrix>,
    pub delta_tilde: Vec<Matrix>,
    pub q_hat: Vec<Matrix>,
    pub q_tilde: Vec<Matrix>,
}

fn matrices(ms: &[CMatrix]) -> Vec<Matrix> {
    ms.iter().map(Matrix::from).collect()
}

fn perturbed(set: &PerturbationSet) -> Vec<Matrix> {
    matrices(set.perturbed().coeffs())
}

impl From<&MultiplicityCertificate> for Certificate {
    fn from(c: &MultiplicityCertificate) -> Self {
        Certificate {
            mu: c.mu.into(),
            delta: c.delta,
            k: c.geometric_mult,
            geometric_multiplicity_qhat: c.geometric_mult_qhat,
            criterion: c.criterion.map(C::from),
            defective: c.defective,
            multiple: c.multiple,
            residual_hat: c.residual_hat,
            residual_tilde: c.residual_tilde,
            origin_substitution: c.q_hat.origin_substitution,
            delta_hat: matrices(&c.q_hat.deltas),
            delta_tilde: matrices(&c.q_tilde.deltas),
            q_hat: perturbed(&c.q_hat),
            q_tilde: perturbed(&c.q_tilde),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub run: RunReport,
    pub r: f64,
    pub bracket: [f64; 2],
    pub refined: bool,
    pub saddle_kind: Option<&'static str>,
    pub initial_components: usize,
    pub connected_bracket: Option<[f64; 2]>,
    pub origin_case: bool,
    pub bounded: bool,
    pub window: Window,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbReport {
    pub run: RunReport,
    pub certificate: Certificate,
}
