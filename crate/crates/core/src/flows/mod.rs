//! Model conformal flows for contact, symplectic and volume forms, and pullback checks of
//! their conformal factors.
//!
//! | flow        | space         | tensor                    | factor `f_t`          |
//! |-------------|---------------|---------------------------|-----------------------|
//! | `H`         | `R^{2n+1}`    | `dz - sum y_i dx_i`       | `t`                   |
//! | `F`         | `R^{2n+1}`    | `dz - sum y_i dx_i`       | `2t`                  |
//! | `liouville` | `T*R^n`       | `sum dp_i ^ dq_i`         | `t`                   |
//! | `volume`    | `R^n`         | `dx_1 ^ ... ^ dx_n`       | integrated, `f_t(0)=t`|
//! | `reeb`      | `T^3`         | `cos 2piz dx + sin 2piz dy` | `0`                 |

mod contact;
mod cutoff;
mod models;
pub mod ode;
mod pullback;
mod tensor;

pub use contact::{contact_vector_field, GradientField, HamiltonianSpec, ScalarField};
pub use cutoff::{bump_cutoff, RealFn, ScalarProfile};
pub use models::{
    flow_f, flow_h, liouville_flow_cotangent, volume_flow, ConformalFlowSpec, FactorFn,
    JacobianFn, JacobianMode, PointMap, TensorField, VectorField,
};
pub use pullback::{
    central_jacobian, flow_jacobian, measured_factor, pullback_form, sample_points,
    verify_conformal_factor, PullbackReport, ANALYTIC_TOL, DEFAULT_FD_STEP,
    FINITE_DIFFERENCE_TOL, SINGULAR_DET,
};
pub use tensor::{
    contact_volume_density_3d, standard_contact_form, standard_symplectic_form,
    standard_volume_form, TensorKind, TensorValue, ANTISYMMETRY_TOL,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("expected a point of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cutoff radii must satisfy 0 < inner < outer, got ({r_inner}, {r_outer})")]
    BadRadii { r_inner: f64, r_outer: f64 },
    #[error("{steps} steps is below the floor of {required} for step size 1e-3")]
    StepTooLarge { steps: usize, required: usize },
    #[error("Jacobian determinant {det:e} is numerically singular")]
    SingularJacobian { det: f64 },
    #[error("flow {0} has no expected conformal factor")]
    MissingExpectedFactor(String),
    #[error("pullback is not a positive multiple of the tensor (ratio {ratio})")]
    NotConformal { ratio: f64 },
    #[error("{0}")]
    InvalidArgument(String),
}
