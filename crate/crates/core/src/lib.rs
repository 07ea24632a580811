//! Kinematics toolkit for the 3-PPPS six-degree-of-freedom parallel robot
//! with an equilateral (delta-shaped) base.
//!
//! The toolkit provides:
//! - the fixed geometry, quaternion orientation algebra and the six
//!   constraint-equation residuals ([`model`]);
//! - closed-form inverse kinematics, direct kinematics by analytic
//!   candidate enumeration polished with damped multistart Newton, and the
//!   planar quadratic special case ([`kinematics`]);
//! - detection of the Cardanic self-motion condition and generation of the
//!   induced one-parameter pose family ([`selfmotion`]);
//! - the velocity model `A t + B rho_dot = 0`, the factorized
//!   parallel-singularity condition in quaternion coordinates and surface
//!   sampling for export ([`singularity`]);
//! - a deterministic command-line front end ([`cli`]).
//!
//! All operations are pure functions of their inputs and safe to call
//! concurrently.

pub mod cli;
pub mod error;
pub mod kinematics;
pub mod model;
pub mod selfmotion;
pub mod singularity;
pub mod textfmt;

pub use error::Error;
pub use kinematics::{
    direct_kinematics, inverse_kinematics, planar_direct_kinematics,
    planar_quadratic_coefficients, DkKind, DkOutcome, PlanarQuadratic, PlanarSolution,
    SolverOptions,
};
pub use model::{
    constraint_residuals, leg_local_coordinates, max_constraint_residual, ActuatedJoints,
    FullJointState, Leg, Pose, RobotGeometry, UnitQuaternion,
};
pub use selfmotion::{
    cardanic_family, self_motion_axes_check, self_motion_condition, AxesConcurrency,
    CardanicFamily, SelfMotionCheck,
};
pub use singularity::{
    eliminated_equivalence_check, sample_singularity_surfaces, selfmotion_locus_residuals,
    singularity_report, velocity_consistency_check, velocity_model, SingularityReport, SurfaceId,
    SurfacePoint, VelocityCheckReport, VelocityModel,
};
