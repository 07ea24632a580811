//! Detection of the Cardanic self-motion condition in joint space and
//! generation of the one-parameter pose family it induces.
//!
//! The self-motion orientations are pi-rotations (flipped platform) lying on
//! the unit circle `q1 = 0, q4 = 0, q2^2 + q3^2 = 1`. The family is
//! parametrized by the angle theta on that quaternion circle.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::Error;
use crate::model::{ActuatedJoints, Leg, Pose, UnitQuaternion};

const SQRT3: f64 = 1.732_050_807_568_877_3;

/// Tolerance on the three joint-space self-motion residuals.
pub const SELF_MOTION_TOL: f64 = 1e-10;

/// Self-motion flag plus the three condition residuals
/// `(rho1y + rho2y + rho3y, rho1z - rho2z, rho2z - rho3z)` for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelfMotionCheck {
    pub is_self_motion: bool,
    pub residuals: [f64; 3],
}

/// True iff all three self-motion conditions hold within
/// [`SELF_MOTION_TOL`]. Invariant under uniform shifts of the `rho_iz`
/// values, which enter only as differences.
pub fn self_motion_condition(joints: &ActuatedJoints) -> SelfMotionCheck {
    let residuals = [
        joints.rho1y + joints.rho2y + joints.rho3y,
        joints.rho1z - joints.rho2z,
        joints.rho2z - joints.rho3z,
    ];
    SelfMotionCheck {
        is_self_motion: residuals.iter().all(|r| r.abs() <= SELF_MOTION_TOL),
        residuals,
    }
}

/// One-parameter Cardanic pose family at a fixed self-motion joint anchor.
///
/// `theta` maps to the orientation `(0, cos theta, sin theta, 0)`
/// (canonicalized); `y` and `z` come straight from the leg-1 joints and `x`
/// is recovered by a linear solve of the leg-2 y-row at that orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CardanicFamily {
    pub joint_anchor: ActuatedJoints,
}

impl CardanicFamily {
    pub fn new(joint_anchor: ActuatedJoints) -> Self {
        Self { joint_anchor }
    }

    /// Family member at angle `theta` on the quaternion circle.
    pub fn pose_at(&self, theta: f64) -> Pose {
        let orientation = UnitQuaternion::new(0.0, theta.cos(), theta.sin(), 0.0)
            .expect("circle point is unit norm");
        let y = self.joint_anchor.rho1y;
        let z = self.joint_anchor.rho1z;
        // leg-2 y-row is linear in x:
        // sqrt(3)(2 q1 q4 - x) + 2 q1^2 + 3 q2^2 - q3^2 - y - 1 - 2 rho2y = 0
        let (q1, q2, q3, q4) = {
            let q = &orientation;
            (q.q1, q.q2, q.q3, q.q4)
        };
        let x = 2.0 * q1 * q4
            + (2.0 * q1 * q1 + 3.0 * q2 * q2 - q3 * q3
                - y
                - 1.0
                - 2.0 * self.joint_anchor.rho2y)
                / SQRT3;
        Pose { x, y, z, orientation }
    }

    /// `n` family members at equally spaced angles in `[0, 2*pi)`,
    /// in increasing theta order.
    pub fn sample(&self, n: usize) -> Vec<(f64, Pose)> {
        (0..n)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                (theta, self.pose_at(theta))
            })
            .collect()
    }
}

/// Builds the Cardanic family, rejecting joints that do not satisfy the
/// self-motion condition.
pub fn cardanic_family(joints: &ActuatedJoints) -> Result<CardanicFamily, Error> {
    let check = self_motion_condition(joints);
    if !check.is_self_motion {
        return Err(Error::NotSelfMotion { residuals: check.residuals });
    }
    Ok(CardanicFamily::new(*joints))
}

/// Geometric self-motion characterization at a pose: the three passive
/// prismatic axis lines concur at a single point and form pairwise angles
/// of `2*pi/3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxesConcurrency {
    /// Least-squares point closest to the three axis lines.
    pub intersection_point: [f64; 3],
    /// Sum of squared distances from that point to the lines.
    pub intersection_residual: f64,
    pub pairwise_angles: [f64; 3],
    pub concurrent: bool,
    pub angles_ok: bool,
    pub passes: bool,
}

/// Checks the geometric self-motion condition at `pose`.
///
/// Each passive axis is the line through the platform vertex `Ci` along the
/// leg-local x direction in the world frame. Concurrency is tested by
/// minimizing the sum of squared point-to-line distances (a linear least
/// squares problem) and accepting a residual of at most 1e-8; angles must
/// match `2*pi/3` within 1e-8 rad.
pub fn self_motion_axes_check(pose: &Pose) -> AxesConcurrency {
    let points = pose.platform_points();
    let dirs: Vec<Vector3<f64>> = Leg::ALL.iter().map(|l| l.passive_axis_direction()).collect();

    // normal equations of min_p sum_i |(I - d d^T)(p - C_i)|^2
    let mut m = Matrix3::zeros();
    let mut rhs = Vector3::zeros();
    for (c, d) in points.iter().zip(&dirs) {
        let proj = Matrix3::identity() - d * d.transpose();
        m += proj;
        rhs += proj * c;
    }
    let point = m.lu().solve(&rhs).expect("projector sum is positive definite");

    let mut residual = 0.0;
    for (c, d) in points.iter().zip(&dirs) {
        let proj = Matrix3::identity() - d * d.transpose();
        residual += (proj * (point - c)).norm_squared();
    }

    let angle = |a: &Vector3<f64>, b: &Vector3<f64>| a.dot(b).clamp(-1.0, 1.0).acos();
    let pairwise_angles = [
        angle(&dirs[0], &dirs[1]),
        angle(&dirs[0], &dirs[2]),
        angle(&dirs[1], &dirs[2]),
    ];
    let target = 2.0 * std::f64::consts::FRAC_PI_3;

    let concurrent = residual <= 1e-8;
    let angles_ok = pairwise_angles.iter().all(|a| (a - target).abs() <= 1e-8);
    AxesConcurrency {
        intersection_point: [point.x, point.y, point.z],
        intersection_residual: residual,
        pairwise_angles,
        concurrent,
        angles_ok,
        passes: concurrent && angles_ok,
    }
}
