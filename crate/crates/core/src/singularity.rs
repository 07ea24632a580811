//! Velocity model, parallel-singularity evaluation and surface sampling.
//!
//! The velocity relation is `A t + B rho_dot = 0` with the twist
//! `t = (v_P, omega)` expressed in the world frame: linear velocity of the
//! platform reference point followed by the angular velocity. `A` comes from
//! differentiating the constraint residuals along platform motion, with
//! quaternion rates mapped from `omega` by `q_dot = (0, omega) * q / 2`;
//! `B` is the constant diagonal of the actuated-joint coefficients. The
//! choice of twist convention rescales `A` by a constant invertible right
//! factor and leaves the zero set of `det A` unchanged.

use nalgebra::{Matrix4x3, Matrix6, Matrix6x4, SMatrix, Vector6};
use serde::Serialize;

use crate::error::Error;
use crate::model::{Pose, UnitQuaternion};

const SQRT3: f64 = 1.732_050_807_568_877_3;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Absolute threshold on the factored determinant value.
pub const SINGULARITY_TOL: f64 = 1e-10;

/// Jacobian pair of the velocity relation `A t + B rho_dot = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityModel {
    pub a: Matrix6<f64>,
    pub b: Matrix6<f64>,
}

/// Singularity diagnostics at one orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularityReport {
    pub det_a: f64,
    /// Product of the three determinant factors.
    pub factored_value: f64,
    /// `(q1^2 - q2^2 - q3^2 + q4^2, q1 - q4, q1 + q4)`.
    pub factor_values: [f64; 3],
    /// After eliminating q1: `(q2^2 + q3^2 + 2 q4^2 - 1, 2 q2^2 + 2 q3^2 - 1)`,
    /// an ellipsoid and a cylinder.
    pub eliminated_factors: [f64; 2],
    pub is_singular: bool,
    /// The six self-motion locus polynomials, see
    /// [`selfmotion_locus_residuals`].
    pub self_motion_locus_residuals: [f64; 6],
}

/// Assembles `A` and `B` at a pose.
pub fn velocity_model(pose: &Pose) -> VelocityModel {
    let q = &pose.orientation;
    let (q1, q2, q3, q4) = (q.q1, q.q2, q.q3, q.q4);

    // residual partials w.r.t. platform position (columns x, y, z)
    #[rustfmt::skip]
    let d_pos = SMatrix::<f64, 6, 3>::from_row_slice(&[
         0.0,    1.0, 0.0,
         0.0,    0.0, 1.0,
        -SQRT3, -1.0, 0.0,
         0.0,    0.0, 1.0,
         SQRT3, -1.0, 0.0,
         0.0,    0.0, 1.0,
    ]);

    // residual partials w.r.t. quaternion components
    #[rustfmt::skip]
    let d_quat = Matrix6x4::from_row_slice(&[
        0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0,
        2.0 * SQRT3 * q4 + 4.0 * q1,  6.0 * q2, -2.0 * q3, 2.0 * SQRT3 * q1,
        SQRT3 * q3 + q2, -SQRT3 * q4 + q1, SQRT3 * q1 + q4, -SQRT3 * q2 + q3,
        2.0 * SQRT3 * q4 - 4.0 * q1, -6.0 * q2,  2.0 * q3, 2.0 * SQRT3 * q1,
        SQRT3 * q3 - q2, -SQRT3 * q4 - q1, SQRT3 * q1 - q4, -SQRT3 * q2 - q3,
    ]);

    // quaternion rate from world angular velocity: q_dot = (0, omega) * q / 2
    #[rustfmt::skip]
    let rate_map = Matrix4x3::from_row_slice(&[
        -q2, -q3, -q4,
         q1,  q4, -q3,
        -q4,  q1,  q2,
         q3, -q2,  q1,
    ]) * 0.5;

    let mut a = Matrix6::zeros();
    a.fixed_view_mut::<6, 3>(0, 0).copy_from(&d_pos);
    a.fixed_view_mut::<6, 3>(0, 3).copy_from(&(d_quat * rate_map));

    VelocityModel { a, b: b_matrix() }
}

/// The constant serial Jacobian: each actuated joint enters exactly one
/// residual row, with coefficient -1 or -2. `det B = 4`, so there is no
/// serial singularity.
pub fn b_matrix() -> Matrix6<f64> {
    Matrix6::from_diagonal(&Vector6::new(-1.0, -1.0, -2.0, -1.0, -2.0, -1.0))
}

/// The three factors of the parallel-singularity determinant condition.
pub fn determinant_factors(q: &UnitQuaternion) -> [f64; 3] {
    [
        q.q1 * q.q1 - q.q2 * q.q2 - q.q3 * q.q3 + q.q4 * q.q4,
        q.q1 - q.q4,
        q.q1 + q.q4,
    ]
}

/// The two q1-eliminated surface factors (ellipsoid, cylinder).
pub fn eliminated_factors(q: &UnitQuaternion) -> [f64; 2] {
    [
        q.q2 * q.q2 + q.q3 * q.q3 + 2.0 * q.q4 * q.q4 - 1.0,
        2.0 * q.q2 * q.q2 + 2.0 * q.q3 * q.q3 - 1.0,
    ]
}

/// Both singularity products: the factored determinant form and its
/// q1-eliminated form. On the unit sphere the two are identical: each
/// factor maps to the negative of an eliminated factor
/// (`q1^2 - q2^2 - q3^2 + q4^2 = -(2 q2^2 + 2 q3^2 - 1)` and
/// `(q1 - q4)(q1 + q4) = -(q2^2 + q3^2 + 2 q4^2 - 1)`), so the signs cancel
/// in the product.
pub fn eliminated_equivalence_check(q: &UnitQuaternion) -> (f64, f64) {
    let f = determinant_factors(q);
    let e = eliminated_factors(q);
    (f[0] * f[1] * f[2], e[0] * e[1])
}

/// The six polynomials of the self-motion orientation locus. All vanish on
/// the circle `q4 = 0, q2^2 + q3^2 = 1` -- and also at the isolated point
/// `q2 = q3 = q4 = 0`, which the singularity condition excludes; the locus
/// proper is the intersection with the eliminated singularity product.
pub fn selfmotion_locus_residuals(q: &UnitQuaternion) -> [f64; 6] {
    let (q2, q3, q4) = (q.q2, q.q3, q.q4);
    let circle = q2 * q2 + q3 * q3 - 1.0;
    [
        q2 * q4,
        q3 * q4,
        q2 * circle,
        q3 * circle,
        q4 * q4 * q4 - q4,
        q2 * q2 * q2 * q2 + (q3 * q3 + q4 * q4 - 1.0) * q2 * q2 + q3 * q3 * q4 * q4,
    ]
}

/// Full singularity diagnostics at a pose. Depends only on the orientation.
pub fn singularity_report(pose: &Pose) -> SingularityReport {
    let q = &pose.orientation;
    let factor_values = determinant_factors(q);
    let factored_value = factor_values[0] * factor_values[1] * factor_values[2];
    SingularityReport {
        det_a: velocity_model(pose).a.determinant(),
        factored_value,
        factor_values,
        eliminated_factors: eliminated_factors(q),
        is_singular: factored_value.abs() <= SINGULARITY_TOL,
        self_motion_locus_residuals: selfmotion_locus_residuals(q),
    }
}

/// Result of the finite-difference validation of the velocity relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VelocityCheckReport {
    pub samples: usize,
    /// Largest infinity-norm of `A t + B rho_dot` over all sampled motions.
    pub max_residual: f64,
    pub det_a: f64,
    pub det_b: f64,
}

/// Validates `A t + B rho_dot = 0` at a pose against finite differences of
/// the closed-form inverse kinematics along `samples` deterministic
/// translation/rotation curves.
pub fn velocity_consistency_check(pose: &Pose, samples: usize) -> VelocityCheckReport {
    let model = velocity_model(pose);
    let h = 1e-6;
    let mut max_residual: f64 = 0.0;

    for k in 0..samples {
        let (v, w) = sample_directions(k);
        let moved = |s: f64| displace_pose(pose, &v, &w, s);
        let jp = crate::kinematics::inverse_kinematics(&moved(h)).actuated.as_array();
        let jm = crate::kinematics::inverse_kinematics(&moved(-h)).actuated.as_array();
        let rho_dot =
            Vector6::from_iterator(jp.iter().zip(jm).map(|(p, m)| (p - m) / (2.0 * h)));
        let twist = Vector6::new(v.x, v.y, v.z, w.x, w.y, w.z);
        let residual = (model.a * twist + model.b * rho_dot).amax();
        max_residual = max_residual.max(residual);
    }

    VelocityCheckReport {
        samples,
        max_residual,
        det_a: model.a.determinant(),
        det_b: model.b.determinant(),
    }
}

/// Deterministic unit translation/rotation direction pair for sample `k`
/// (golden-angle spiral on the sphere, no RNG).
fn sample_directions(k: usize) -> (nalgebra::Vector3<f64>, nalgebra::Vector3<f64>) {
    let spiral = |i: f64, n_offset: f64| {
        let golden = 2.399_963_229_728_653;
        let z = (2.0 * (i + n_offset).rem_euclid(37.0) / 37.0 - 1.0).clamp(-0.99, 0.99);
        let r = (1.0 - z * z).sqrt();
        let t = golden * (i + n_offset);
        nalgebra::Vector3::new(r * t.cos(), r * t.sin(), z)
    };
    (spiral(k as f64, 0.25), spiral(k as f64, 11.75))
}

/// Pose displaced along a feasible curve with twist `(v, w)` at parameter
/// `s`: position translates, orientation follows the first-order quaternion
/// update `q + s/2 (0, w) * q` renormalized.
fn displace_pose(
    pose: &Pose,
    v: &nalgebra::Vector3<f64>,
    w: &nalgebra::Vector3<f64>,
    s: f64,
) -> Pose {
    let q = &pose.orientation;
    let (q1, q2, q3, q4) = (q.q1, q.q2, q.q3, q.q4);
    let half = w * (0.5 * s);
    let moved = UnitQuaternion::new(
        q1 - half.x * q2 - half.y * q3 - half.z * q4,
        q2 + half.x * q1 + half.y * q4 - half.z * q3,
        q3 - half.x * q4 + half.y * q1 + half.z * q2,
        q4 + half.x * q3 - half.y * q2 + half.z * q1,
    )
    .expect("first-order update stays near unit norm");
    Pose::new(pose.x + s * v.x, pose.y + s * v.y, pose.z + s * v.z, moved)
        .expect("finite displacement")
}

/// Which implicit surface a sampled point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurfaceId {
    Cylinder,
    Ellipsoid,
    SelfMotionCircle,
}

impl SurfaceId {
    pub fn csv_name(self) -> &'static str {
        match self {
            SurfaceId::Cylinder => "cylinder",
            SurfaceId::Ellipsoid => "ellipsoid",
            SurfaceId::SelfMotionCircle => "selfmotion_circle",
        }
    }
}

/// A point of the singularity point cloud in `(q2, q3, q4)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub surface: SurfaceId,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
}

/// Samples the two singularity surfaces inside the closed unit ball plus
/// the self-motion circle, using the analytic charts of the quadrics.
///
/// Order is deterministic: cylinder (angle-major), then ellipsoid
/// (polar-major), then the circle. `resolution` is the grid knob in each
/// chart direction; the circle gets `4 * resolution` samples.
pub fn sample_singularity_surfaces(resolution: u32) -> Result<Vec<SurfacePoint>, Error> {
    if resolution < 8 {
        return Err(Error::ResolutionTooSmall(resolution));
    }
    let res = resolution as usize;
    let tau = 2.0 * std::f64::consts::PI;
    let mut points = Vec::with_capacity(2 * res * res + 4 * res);

    // cylinder 2 q2^2 + 2 q3^2 = 1, clipped by the unit ball: |q4| <= 1/sqrt(2)
    for i in 0..res {
        let t = tau * i as f64 / res as f64;
        let (q2, q3) = (FRAC_1_SQRT_2 * t.cos(), FRAC_1_SQRT_2 * t.sin());
        for j in 0..res {
            let q4 = -FRAC_1_SQRT_2 + 2.0 * FRAC_1_SQRT_2 * j as f64 / (res - 1) as f64;
            points.push(SurfacePoint { surface: SurfaceId::Cylinder, q2, q3, q4 });
        }
    }

    // ellipsoid q2^2 + q3^2 + 2 q4^2 = 1 (entirely inside the unit ball)
    for i in 0..res {
        let phi = std::f64::consts::PI * i as f64 / (res - 1) as f64;
        for j in 0..res {
            let theta = tau * j as f64 / res as f64;
            points.push(SurfacePoint {
                surface: SurfaceId::Ellipsoid,
                q2: phi.sin() * theta.cos(),
                q3: phi.sin() * theta.sin(),
                q4: phi.cos() * FRAC_1_SQRT_2,
            });
        }
    }

    // self-motion circle q2^2 + q3^2 = 1, q4 = 0
    for k in 0..4 * res {
        let t = tau * k as f64 / (4 * res) as f64;
        points.push(SurfacePoint {
            surface: SurfaceId::SelfMotionCircle,
            q2: t.cos(),
            q3: t.sin(),
            q4: 0.0,
        });
    }

    Ok(points)
}
