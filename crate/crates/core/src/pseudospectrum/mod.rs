//! Sampling, labelling and tracing of `Λε(P) = { λ : s_n(λ) ≤ ε·w(|λ|) }`.

pub mod components;
pub mod contour;
pub mod grid;
pub mod trace;

pub use components::{components, label_sublevel, merge_epsilon, merge_node, ComponentReport};
pub use contour::{contour_polylines, Polyline};
pub use grid::{
    boundedness_check, compute_field, compute_field_with, default_window, field_value, GridSpec,
    ScalarField,
};
pub use trace::{
    find_boundary_seed, tau_on_curve, trace_boundary, BoundaryCurve, Termination, TraceOptions,
    TAU_SADDLE,
};
