//! Curve generators: helices, the three-dimensional example, cylinder eels,
//! the stacked infinite eel, gradient-descent trajectories, and the constants
//! and certificates they rely on.

mod certify;
mod eel;
mod gradient;
mod helix;
mod norm;
mod params;
mod pieces;

pub use certify::{certify_lemma, certify_lemma_with, Certification, LemmaName};
pub use eel::{
    cylinder_eel, cylinder_eel_length, cylinder_eel_samples, eel_plan, infinite_eel, infinite_eel_with,
    unit_length_crossings, CrossingPolicy, EelPlan, GapCheck, InfiniteEelOptions, StagePlan, DEFAULT_SAMPLE_BUDGET,
};
pub use gradient::{gradient_descent_trajectory, spd_lambda_max};
pub use helix::{example_curve_3d, helix, helix_point, EXAMPLE_3D_RANGE};
pub use norm::lambda_from_norm_equivalence;
pub use params::{
    derive_m, derive_mu, derive_n, inv_sqrt5, small_cylinder_ratio, sup_neg_sinc, CylinderSpec, EelParams,
};
