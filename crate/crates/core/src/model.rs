//! Fixed robot geometry, orientation algebra and constraint residuals.
//!
//! All lengths are dimensionless: the mobile platform is an equilateral
//! triangle with edge length 1 and the base anchors sit on a circle of
//! radius 2. The three legs carry two actuated prismatic joints
//! (`rho_iy`, `rho_iz`), one passive prismatic joint (`rho_ix`) and a
//! spherical joint at the platform vertex.

use nalgebra::{Matrix3, Vector3, Vector6};
use serde::Serialize;

use crate::error::Error;

/// Post-construction unit-norm tolerance for quaternions.
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Inputs further than this from unit norm are rejected instead of
/// silently normalized, to surface caller bugs.
pub const UNIT_NORM_REJECT: f64 = 1e-6;

const SQRT3: f64 = 1.732_050_807_568_877_3;

/// Orientation quaternion `(q1, q2, q3, q4)` with `q1` the scalar part.
///
/// Always stored canonicalized: `q1 > 0`, and when `q1 = 0` the first
/// nonzero of `(q2, q3, q4)` is positive. `q` and `-q` describe the same
/// rotation and map to the same representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitQuaternion {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
}

impl UnitQuaternion {
    /// Builds a canonicalized unit quaternion.
    ///
    /// Rejects non-finite components and norms further than
    /// [`UNIT_NORM_REJECT`] from 1; otherwise renormalizes so the stored
    /// norm is within [`UNIT_NORM_TOL`] of 1.
    pub fn new(q1: f64, q2: f64, q3: f64, q4: f64) -> Result<Self, Error> {
        if !(q1.is_finite() && q2.is_finite() && q3.is_finite() && q4.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = (q1 * q1 + q2 * q2 + q3 * q3 + q4 * q4).sqrt();
        if (norm - 1.0).abs() > UNIT_NORM_REJECT {
            return Err(Error::NotUnitNorm { norm });
        }
        // Skip the division when already unit to the last few bits: repeated
        // renormalization is not idempotent at the ULP level and would make
        // canonical forms of the same rotation compare unequal.
        let mut q = if (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
            Self { q1, q2, q3, q4 }
        } else {
            Self {
                q1: q1 / norm,
                q2: q2 / norm,
                q3: q3 / norm,
                q4: q4 / norm,
            }
        };
        q.canonicalize();
        Ok(q)
    }

    pub fn identity() -> Self {
        Self { q1: 1.0, q2: 0.0, q3: 0.0, q4: 0.0 }
    }

    /// Flips the overall sign so that `q1 > 0`, or when `|q1| <= 1e-12`
    /// so that the first nonzero of `(q2, q3, q4)` is positive.
    fn canonicalize(&mut self) {
        let lead = if self.q1.abs() > UNIT_NORM_TOL {
            self.q1
        } else if self.q2.abs() > UNIT_NORM_TOL {
            self.q2
        } else if self.q3.abs() > UNIT_NORM_TOL {
            self.q3
        } else {
            self.q4
        };
        if lead < 0.0 {
            self.q1 = -self.q1;
            self.q2 = -self.q2;
            self.q3 = -self.q3;
            self.q4 = -self.q4;
        }
        // -0.0 in a zeroed leading slot would make canonical forms compare unequal
        if self.q1 == 0.0 {
            self.q1 = 0.0;
        }
        if self.q2 == 0.0 {
            self.q2 = 0.0;
        }
        if self.q3 == 0.0 {
            self.q3 = 0.0;
        }
        if self.q4 == 0.0 {
            self.q4 = 0.0;
        }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.q1, self.q2, self.q3, self.q4]
    }

    /// Rotation matrix of this quaternion (body to world).
    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        let (q1, q2, q3, q4) = (self.q1, self.q2, self.q3, self.q4);
        Matrix3::new(
            2.0 * q1 * q1 + 2.0 * q2 * q2 - 1.0,
            -2.0 * q1 * q4 + 2.0 * q2 * q3,
            2.0 * q1 * q3 + 2.0 * q2 * q4,
            2.0 * q1 * q4 + 2.0 * q2 * q3,
            2.0 * q1 * q1 + 2.0 * q3 * q3 - 1.0,
            -2.0 * q1 * q2 + 2.0 * q3 * q4,
            -2.0 * q1 * q3 + 2.0 * q2 * q4,
            2.0 * q1 * q2 + 2.0 * q3 * q4,
            2.0 * q1 * q1 + 2.0 * q4 * q4 - 1.0,
        )
    }

    /// Geodesic distance on SO(3): `2 acos(|<p, q>|)`.
    pub fn geodesic_distance(&self, other: &Self) -> f64 {
        let dot = self.q1 * other.q1
            + self.q2 * other.q2
            + self.q3 * other.q3
            + self.q4 * other.q4;
        2.0 * dot.abs().clamp(0.0, 1.0).acos()
    }

    /// Chordal distance `min(|p - q|, |p + q|)`, invariant under the sign
    /// ambiguity. Unlike the acos-based geodesic this stays accurate down to
    /// machine precision for nearly identical rotations (the geodesic has a
    /// resolution floor near 1e-8 because the dot product saturates at 1).
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        let diff = [
            self.q1 - other.q1,
            self.q2 - other.q2,
            self.q3 - other.q3,
            self.q4 - other.q4,
        ];
        let sum = [
            self.q1 + other.q1,
            self.q2 + other.q2,
            self.q3 + other.q3,
            self.q4 + other.q4,
        ];
        let nsq = |v: [f64; 4]| v.iter().map(|x| x * x).sum::<f64>();
        nsq(diff).min(nsq(sum)).sqrt()
    }
}

/// Platform pose: position of the reference point `P` (which coincides
/// with platform vertex `C1`) plus orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub orientation: UnitQuaternion,
}

impl Pose {
    pub fn new(x: f64, y: f64, z: f64, orientation: UnitQuaternion) -> Result<Self, Error> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { x, y, z, orientation })
    }

    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    /// World coordinates of the three platform vertices `C1, C2, C3`.
    ///
    /// `Ci = R Vi + P`; pairwise distances stay 1 for any pose.
    pub fn platform_points(&self) -> [Vector3<f64>; 3] {
        let r = self.orientation.rotation_matrix();
        let p = self.position();
        let geom = RobotGeometry::standard();
        [
            r * geom.platform_vertices[0] + p,
            r * geom.platform_vertices[1] + p,
            r * geom.platform_vertices[2] + p,
        ]
    }

    /// Position distance plus orientation chordal distance, used for
    /// solution dedup and roundtrip checks.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.position() - other.position()).norm()
            + self.orientation.chordal_distance(&other.orientation)
    }

    /// Reference "home" pose: `x = 1/sqrt(3)`, identity orientation.
    /// All actuated joints are zero there.
    pub fn home() -> Self {
        Self {
            x: 1.0 / SQRT3,
            y: 0.0,
            z: 0.0,
            orientation: UnitQuaternion::identity(),
        }
    }
}

/// Leg identifier. Leg frames are planar rotations of the world frame
/// about z by 0, `2*pi/3` and `-2*pi/3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Leg {
    One,
    Two,
    Three,
}

impl Leg {
    pub const ALL: [Leg; 3] = [Leg::One, Leg::Two, Leg::Three];

    pub fn index(self) -> usize {
        match self {
            Leg::One => 0,
            Leg::Two => 1,
            Leg::Three => 2,
        }
    }

    /// (cos, sin) of the leg frame angle about z.
    fn frame(self) -> (f64, f64) {
        match self {
            Leg::One => (1.0, 0.0),
            Leg::Two => (-0.5, 0.5 * SQRT3),
            Leg::Three => (-0.5, -0.5 * SQRT3),
        }
    }

    /// Direction of the passive prismatic axis (leg-local x) in the world frame.
    pub fn passive_axis_direction(self) -> Vector3<f64> {
        let (c, s) = self.frame();
        Vector3::new(c, s, 0.0)
    }

    /// Maps leg-local prismatic values `(rho_x, rho_y, rho_z)` to the world
    /// position of the platform vertex `Ci`.
    pub fn point_from_local(self, local: Vector3<f64>) -> Vector3<f64> {
        let (c, s) = self.frame();
        Vector3::new(
            c * local.x - s * local.y,
            s * local.x + c * local.y,
            local.z,
        )
    }

    /// Inverse of [`Leg::point_from_local`]: recovers the prismatic values
    /// from a world-frame vertex position.
    pub fn point_to_local(self, world: Vector3<f64>) -> Vector3<f64> {
        let (c, s) = self.frame();
        Vector3::new(
            c * world.x + s * world.y,
            -s * world.x + c * world.y,
            world.z,
        )
    }
}

/// Leg-local prismatic coordinates `(rho_ix, rho_iy, rho_iz)` of a platform
/// vertex position.
pub fn leg_local_coordinates(point: Vector3<f64>, leg: Leg) -> Vector3<f64> {
    leg.point_to_local(point)
}

/// The fixed geometry the analysis is carried out for. Not a configuration
/// knob: edge length 1 and base circumradius 2 are baked into the
/// constraint equations.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotGeometry {
    pub base_anchors: [Vector3<f64>; 3],
    pub platform_vertices: [Vector3<f64>; 3],
}

impl RobotGeometry {
    pub fn standard() -> Self {
        Self {
            base_anchors: [
                Vector3::new(2.0, 0.0, 0.0),
                Vector3::new(-1.0, SQRT3, 0.0),
                Vector3::new(-1.0, -SQRT3, 0.0),
            ],
            platform_vertices: [
                Vector3::new(0.0, 0.0, 0.0),
                Vector3::new(-0.5 * SQRT3, 0.5, 0.0),
                Vector3::new(-0.5 * SQRT3, -0.5, 0.0),
            ],
        }
    }
}

/// The six actuated prismatic joint values, in constraint-equation order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActuatedJoints {
    pub rho1y: f64,
    pub rho1z: f64,
    pub rho2y: f64,
    pub rho2z: f64,
    pub rho3y: f64,
    pub rho3z: f64,
}

impl ActuatedJoints {
    pub fn new(rho1y: f64, rho1z: f64, rho2y: f64, rho2z: f64, rho3y: f64, rho3z: f64) -> Self {
        Self { rho1y, rho1z, rho2y, rho2z, rho3y, rho3z }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.rho1y, self.rho1z, self.rho2y, self.rho2z, self.rho3y, self.rho3z]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }
}

/// Actuated joints plus the three passive prismatic values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FullJointState {
    pub actuated: ActuatedJoints,
    pub rho1x: f64,
    pub rho2x: f64,
    pub rho3x: f64,
}

impl FullJointState {
    pub fn passive(&self) -> [f64; 3] {
        [self.rho1x, self.rho2x, self.rho3x]
    }

    /// Platform vertices rebuilt from the joint values alone.
    pub fn platform_points(&self) -> [Vector3<f64>; 3] {
        let a = &self.actuated;
        [
            Leg::One.point_from_local(Vector3::new(self.rho1x, a.rho1y, a.rho1z)),
            Leg::Two.point_from_local(Vector3::new(self.rho2x, a.rho2y, a.rho2z)),
            Leg::Three.point_from_local(Vector3::new(self.rho3x, a.rho3y, a.rho3z)),
        ]
    }

    /// Checks the rigid-platform distance constraints `|Ci - Cj| = 1`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let c = self.platform_points();
        ((c[0] - c[1]).norm() - 1.0).abs() <= tol
            && ((c[0] - c[2]).norm() - 1.0).abs() <= tol
            && ((c[1] - c[2]).norm() - 1.0).abs() <= tol
    }
}

/// Residuals of the six constraint equations, ordered as the y/z rows of
/// legs 1, 2, 3. Each actuated joint enters exactly one residual, linearly,
/// with coefficient -1 (y and z rows of leg 1, z rows of legs 2 and 3) or
/// -2 (y rows of legs 2 and 3). All six vanish iff `(pose, joints)` is
/// kinematically consistent.
pub fn constraint_residuals(pose: &Pose, joints: &ActuatedJoints) -> Vector6<f64> {
    let q = &pose.orientation;
    let (q1, q2, q3, q4) = (q.q1, q.q2, q.q3, q.q4);
    let (x, y, z) = (pose.x, pose.y, pose.z);

    let r1 = y - joints.rho1y;
    let r2 = z - joints.rho1z;
    let r3 = SQRT3 * (2.0 * q1 * q4 - x) + 2.0 * q1 * q1 + 3.0 * q2 * q2 - q3 * q3
        - y
        - 1.0
        - 2.0 * joints.rho2y;
    let r4 = z + SQRT3 * q1 * q3 - SQRT3 * q2 * q4 + q1 * q2 + q3 * q4 - joints.rho2z;
    let r5 = SQRT3 * (2.0 * q1 * q4 + x) - 2.0 * q1 * q1 - 3.0 * q2 * q2 + q3 * q3 - y
        + 1.0
        - 2.0 * joints.rho3y;
    let r6 = z + SQRT3 * q1 * q3 - SQRT3 * q2 * q4 - q1 * q2 - q3 * q4 - joints.rho3z;

    Vector6::new(r1, r2, r3, r4, r5, r6)
}

/// Largest constraint residual magnitude.
pub fn max_constraint_residual(pose: &Pose, joints: &ActuatedJoints) -> f64 {
    constraint_residuals(pose, joints).amax()
}
