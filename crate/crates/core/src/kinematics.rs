//! Inverse kinematics in closed form, general direct kinematics by
//! closed-form candidate enumeration polished with damped Newton (plus a
//! deterministic multistart fallback with root deflation), and the planar
//! quadratic special case.
//!
//! The direct problem fixes `y = rho1y` and `z = rho1z` immediately from the
//! leg-1 rows, leaving five unknowns `(x, q1, q2, q3, q4)` constrained by the
//! four remaining residual rows plus the quaternion unit norm.

use nalgebra::{Matrix5, SVector};
use serde::Serialize;

use crate::error::Error;
use crate::model::{
    leg_local_coordinates, max_constraint_residual, ActuatedJoints,
    FullJointState, Leg, Pose, UnitQuaternion,
};
use crate::selfmotion::{self, CardanicFamily};

const SQRT3: f64 = 1.732_050_807_568_877_3;

type State5 = SVector<f64, 5>;

/// Options for the multistart Newton direct-kinematics solver.
#[derive(Debug, Clone, Serialize)]
pub struct SolverOptions {
    /// Newton iteration cap per seed.
    pub max_iterations: usize,
    /// Convergence: residual infinity-norm at or below this value.
    pub residual_tol: f64,
    /// Divergence: residual 2-norm at or above this value aborts the seed.
    pub divergence_threshold: f64,
    /// Verified solutions must have max constraint residual at or below this.
    pub verify_tol: f64,
    /// Poses closer than this (position + quaternion chordal) are duplicates.
    pub distinct_tol: f64,
    /// Seed-grid density; 1 is the base grid, higher values add seeds.
    pub seed_density: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            residual_tol: 1e-12,
            divergence_threshold: 1e6,
            verify_tol: 1e-9,
            distinct_tol: 1e-6,
            seed_density: 1,
        }
    }
}

/// Outcome classification of the direct kinematic problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DkKind {
    FiniteSolutions,
    SelfMotion,
    NoSolution,
}

/// Result of [`direct_kinematics`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DkOutcome {
    pub kind: DkKind,
    /// Distinct verified poses, sorted by `(x, q1)`. Empty unless
    /// `kind == FiniteSolutions`.
    pub solutions: Vec<Pose>,
    /// The Cardanic family descriptor, present iff `kind == SelfMotion`.
    pub self_motion_family: Option<CardanicFamily>,
    /// At self-motion joints, Newton roots whose orientation is off the
    /// family circle. Completeness is not asserted.
    pub isolated_solutions: Vec<Pose>,
    /// Set when the self-motion residuals are all at or below 1e-6 but the
    /// strict condition does not hold; the problem is badly conditioned.
    pub near_self_motion: bool,
}

/// Coefficients of the planar direct-kinematics quadratic
/// `a*rho1x^2 + b*rho1x + c = 0`, after removing the common factor
/// `(rho1y + rho2y + rho3y)^2`. When that divisor vanishes every term of
/// the full equation cancels and the flag is set.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PlanarQuadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub degenerate: bool,
    /// The divisor `rho1y + rho2y + rho3y`.
    pub divisor: f64,
}

/// One planar direct-kinematics solution: the passive value `rho1x` and the
/// reconstructed pose.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PlanarSolution {
    pub rho1x: f64,
    pub pose: Pose,
}

/// Closed-form inverse kinematics; total for this robot.
///
/// The actuated joints are read off the constraint equations, the passive
/// `rho_ix` values recovered through the leg-frame inverse map.
pub fn inverse_kinematics(pose: &Pose) -> FullJointState {
    let q = &pose.orientation;
    let (q1, q2, q3, q4) = (q.q1, q.q2, q.q3, q.q4);
    let (x, y, z) = (pose.x, pose.y, pose.z);

    let actuated = ActuatedJoints {
        rho1y: y,
        rho1z: z,
        rho2y: 0.5
            * (SQRT3 * (2.0 * q1 * q4 - x) + 2.0 * q1 * q1 + 3.0 * q2 * q2 - q3 * q3 - y - 1.0),
        rho2z: z + SQRT3 * q1 * q3 - SQRT3 * q2 * q4 + q1 * q2 + q3 * q4,
        rho3y: 0.5
            * (SQRT3 * (2.0 * q1 * q4 + x) - 2.0 * q1 * q1 - 3.0 * q2 * q2 + q3 * q3 - y + 1.0),
        rho3z: z + SQRT3 * q1 * q3 - SQRT3 * q2 * q4 - q1 * q2 - q3 * q4,
    };

    let points = pose.platform_points();
    let passive: Vec<f64> = Leg::ALL
        .iter()
        .map(|&leg| leg_local_coordinates(points[leg.index()], leg).x)
        .collect();

    FullJointState {
        actuated,
        rho1x: passive[0],
        rho2x: passive[1],
        rho3x: passive[2],
    }
}

/// Numerical direct kinematics.
///
/// Detects the self-motion condition first and returns the Cardanic family
/// descriptor in that case (plus any isolated Newton roots found off the
/// family). Otherwise runs the deterministic multistart Newton and returns
/// all distinct verified solutions; an empty multistart is reported as
/// `NoSolution`, never as a silently empty list.
pub fn direct_kinematics(joints: &ActuatedJoints, opts: &SolverOptions) -> Result<DkOutcome, Error> {
    if !joints.is_finite() {
        return Err(Error::NonFinite);
    }

    let check = selfmotion::self_motion_condition(joints);
    let near_self_motion =
        !check.is_self_motion && check.residuals.iter().all(|r| r.abs() <= 1e-6);

    let solutions = multistart_newton(joints, opts);

    if check.is_self_motion {
        let family = CardanicFamily::new(*joints);
        let isolated = solutions
            .into_iter()
            .filter(|p| !on_family_circle(&p.orientation))
            .collect();
        return Ok(DkOutcome {
            kind: DkKind::SelfMotion,
            solutions: Vec::new(),
            self_motion_family: Some(family),
            isolated_solutions: isolated,
            near_self_motion: false,
        });
    }

    if solutions.is_empty() {
        return Ok(DkOutcome {
            kind: DkKind::NoSolution,
            solutions,
            self_motion_family: None,
            isolated_solutions: Vec::new(),
            near_self_motion,
        });
    }

    Ok(DkOutcome {
        kind: DkKind::FiniteSolutions,
        solutions,
        self_motion_family: None,
        isolated_solutions: Vec::new(),
        near_self_motion,
    })
}

fn on_family_circle(q: &UnitQuaternion) -> bool {
    q.q1.abs() <= 1e-6 && q.q4.abs() <= 1e-6
}

/// Planar quadratic coefficients of the direct problem restricted to
/// `rho_iz = 0`: `a = 9`, `b = 6*sqrt(3)*(rho2y - rho3y)` and the printed
/// constant term, after dividing out `(rho1y + rho2y + rho3y)^2`.
pub fn planar_quadratic_coefficients(joints: &ActuatedJoints) -> Result<PlanarQuadratic, Error> {
    if !joints.is_finite() {
        return Err(Error::NonFinite);
    }
    let zs = [joints.rho1z, joints.rho2z, joints.rho3z];
    if zs.iter().any(|z| z.abs() > 1e-12) {
        return Err(Error::NotPlanar(zs));
    }
    let (y1, y2, y3) = (joints.rho1y, joints.rho2y, joints.rho3y);
    let divisor = y1 + y2 + y3;
    Ok(PlanarQuadratic {
        a: 9.0,
        b: 6.0 * SQRT3 * (y2 - y3),
        c: y1 * y1 + 2.0 * y1 * y2 + 2.0 * y1 * y3 + 4.0 * y2 * y2 - 4.0 * y2 * y3 + 4.0 * y3 * y3
            - 3.0,
        degenerate: divisor.abs() <= 1e-10,
        divisor,
    })
}

/// Solves the planar quadratic and lifts each real root `rho1x = x` to a
/// full pose.
///
/// The planar orientation is a rotation about z by an angle `phi` recovered
/// by back-substitution into the leg y-rows: summing them gives
/// `sin(phi) = (rho1y + rho2y + rho3y)/sqrt(3)`, differencing gives
/// `cos(phi) = sqrt(3)*x + rho2y - rho3y`; the quadratic is exactly the
/// Pythagorean identity between the two. Every reconstructed pose is
/// verified against the full constraint residuals.
pub fn planar_direct_kinematics(joints: &ActuatedJoints) -> Result<Vec<PlanarSolution>, Error> {
    let quad = planar_quadratic_coefficients(joints)?;
    if quad.degenerate {
        return Err(Error::Degenerate { sum: quad.divisor });
    }

    let disc = quad.b * quad.b - 4.0 * quad.a * quad.c;
    let roots: Vec<f64> = if disc < -1e-12 {
        Vec::new()
    } else if disc.abs() <= 1e-12 {
        vec![-quad.b / (2.0 * quad.a)]
    } else {
        let sq = disc.sqrt();
        let mut r = [(-quad.b - sq) / (2.0 * quad.a), (-quad.b + sq) / (2.0 * quad.a)];
        r.sort_by(f64::total_cmp);
        r.to_vec()
    };

    let sin_phi = quad.divisor / SQRT3;
    let mut out = Vec::with_capacity(roots.len());
    for x in roots {
        let cos_phi = SQRT3 * x + joints.rho2y - joints.rho3y;
        let phi = sin_phi.atan2(cos_phi);
        let orientation =
            UnitQuaternion::new((0.5 * phi).cos(), 0.0, 0.0, (0.5 * phi).sin())?;
        let pose = Pose::new(x, joints.rho1y, 0.0, orientation)?;
        let max_residual = max_constraint_residual(&pose, joints);
        if max_residual > 1e-9 {
            return Err(Error::VerificationFailed { max_residual });
        }
        out.push(PlanarSolution { rho1x: x, pose });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Multistart Newton on the reduced 5x5 system
// ---------------------------------------------------------------------------

/// Residual of the reduced system: leg-2/3 rows of the constraint equations
/// plus the quaternion unit norm, with `y`, `z` already substituted.
fn residual5(u: &State5, joints: &ActuatedJoints) -> State5 {
    let (x, q1, q2, q3, q4) = (u[0], u[1], u[2], u[3], u[4]);
    let (y, z) = (joints.rho1y, joints.rho1z);
    SVector::from([
        SQRT3 * (2.0 * q1 * q4 - x) + 2.0 * q1 * q1 + 3.0 * q2 * q2 - q3 * q3
            - y
            - 1.0
            - 2.0 * joints.rho2y,
        z + SQRT3 * q1 * q3 - SQRT3 * q2 * q4 + q1 * q2 + q3 * q4 - joints.rho2z,
        SQRT3 * (2.0 * q1 * q4 + x) - 2.0 * q1 * q1 - 3.0 * q2 * q2 + q3 * q3 - y + 1.0
            - 2.0 * joints.rho3y,
        z + SQRT3 * q1 * q3 - SQRT3 * q2 * q4 - q1 * q2 - q3 * q4 - joints.rho3z,
        q1 * q1 + q2 * q2 + q3 * q3 + q4 * q4 - 1.0,
    ])
}

fn jacobian5(u: &State5) -> Matrix5<f64> {
    let (_, q1, q2, q3, q4) = (u[0], u[1], u[2], u[3], u[4]);
    Matrix5::new(
        -SQRT3, 2.0 * SQRT3 * q4 + 4.0 * q1, 6.0 * q2, -2.0 * q3, 2.0 * SQRT3 * q1, //
        0.0, SQRT3 * q3 + q2, -SQRT3 * q4 + q1, SQRT3 * q1 + q4, -SQRT3 * q2 + q3, //
        SQRT3, 2.0 * SQRT3 * q4 - 4.0 * q1, -6.0 * q2, 2.0 * q3, 2.0 * SQRT3 * q1, //
        0.0, SQRT3 * q3 - q2, -SQRT3 * q4 - q1, SQRT3 * q1 - q4, -SQRT3 * q2 - q3, //
        0.0, 2.0 * q1, 2.0 * q2, 2.0 * q3, 2.0 * q4,
    )
}

/// Deterministic seed set: quaternion sign patterns crossed with an x grid,
/// plus the home pose. Density 1 uses all 16 sign patterns of each cyclic
/// shift of the component magnitudes `(4, 3, 2, 1)/sqrt(30)` and
/// `x in {-2, 0, 2}`; higher densities add axis-aligned and
/// paired-component quaternion seeds and refine the x grid.
///
/// The magnitudes are deliberately unequal: at `|q1| = |q4|, |q2| = |q3|`
/// the leg z-rows and the norm row of the Jacobian become linearly
/// dependent, so equal-magnitude patterns would start Newton exactly on
/// singular points.
fn seed_grid(density: u32) -> Vec<State5> {
    let mut quats: Vec<[f64; 4]> = Vec::new();
    let base = [4.0, 3.0, 2.0, 1.0].map(|v: f64| v / 30f64.sqrt());
    for shift in 0..4 {
        let m: Vec<f64> = (0..4).map(|i| base[(i + shift) % 4]).collect();
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                for s3 in [1.0, -1.0] {
                    for s4 in [1.0, -1.0] {
                        quats.push([s1 * m[0], s2 * m[1], s3 * m[2], s4 * m[3]]);
                    }
                }
            }
        }
    }
    if density >= 2 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..4 {
            let mut q = [0.0; 4];
            q[i] = 1.0;
            quats.push(q);
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                for (si, sj) in [(h, h), (h, -h), (-h, h), (-h, -h)] {
                    let mut q = [0.0; 4];
                    q[i] = si;
                    q[j] = sj;
                    quats.push(q);
                }
            }
        }
    }
    let xs: Vec<f64> = if density >= 2 {
        vec![-2.0, -1.0, 0.0, 1.0, 2.0]
    } else {
        vec![-2.0, 0.0, 2.0]
    };

    let mut seeds = Vec::with_capacity(quats.len() * xs.len() + 1);
    for q in &quats {
        for &x in &xs {
            seeds.push(SVector::from([x, q[0], q[1], q[2], q[3]]));
        }
    }
    seeds.push(SVector::from([1.0 / SQRT3, 1.0, 0.0, 0.0, 0.0]));
    seeds
}

/// Closed-form candidate states of the reduced system, used as the primary
/// Newton seeds.
///
/// Summing and differencing the leg-2/3 rows isolates three bilinear
/// invariants fixed by the joints alone:
///
/// ```text
/// q1*q4           = (rho1y + rho2y + rho3y) / (2*sqrt(3))   =: c1
/// q1*q2 + q3*q4   = (rho2z - rho3z) / 2                     =: c2
/// q1*q3 - q2*q4   = (rho2z + rho3z - 2*rho1z) / (2*sqrt(3)) =: c3
/// ```
///
/// With `s = q1^2 + q4^2`, the pair `(q2, q3)` solves a 2x2 linear system
/// with determinant `s`, and the unit norm collapses to the scalar quadratic
/// `s^2 - s + (c2^2 + c3^2) = 0`. For each root `s`, `q1^2` and `q4^2` are
/// the roots of `t^2 - s*t + c1^2 = 0`, and `x` follows linearly from the
/// difference of the leg y-rows. Discriminants are clamped from slightly
/// negative values so tangent configurations still emit a candidate; wrong
/// sign combinations are cheap and rejected downstream by verification.
fn analytic_candidates(joints: &ActuatedJoints) -> Vec<State5> {
    let clamp = |d: f64| if d < 0.0 && d > -1e-6 { 0.0 } else { d };

    let c1 = (joints.rho1y + joints.rho2y + joints.rho3y) / (2.0 * SQRT3);
    let c2 = 0.5 * (joints.rho2z - joints.rho3z);
    let c3 = (joints.rho2z + joints.rho3z - 2.0 * joints.rho1z) / (2.0 * SQRT3);
    let k = c2 * c2 + c3 * c3;

    let mut candidates = Vec::new();
    let disc_s = clamp(1.0 - 4.0 * k);
    if disc_s < 0.0 {
        return candidates;
    }
    let sq_s = disc_s.sqrt();
    for s in [0.5 * (1.0 + sq_s), 0.5 * (1.0 - sq_s)] {
        if s <= 1e-12 {
            // q1 = q4 = 0 is the self-motion circle, handled separately.
            continue;
        }
        let disc_t = clamp(s * s - 4.0 * c1 * c1);
        if disc_t < 0.0 {
            continue;
        }
        let sq_t = disc_t.sqrt();
        for (t1, t4) in [
            (0.5 * (s + sq_t), 0.5 * (s - sq_t)),
            (0.5 * (s - sq_t), 0.5 * (s + sq_t)),
        ] {
            let q1 = t1.max(0.0).sqrt();
            let q4_mag = t4.max(0.0).sqrt();
            for q4 in [q4_mag, -q4_mag] {
                let q2 = (c2 * q1 - c3 * q4) / s;
                let q3 = (c3 * q1 + c2 * q4) / s;
                let x = (4.0 * q1 * q1 + 6.0 * q2 * q2 - 2.0 * q3 * q3 - 2.0
                    - 2.0 * (joints.rho2y - joints.rho3y))
                    / (2.0 * SQRT3);
                candidates.push(SVector::from([x, q1, q2, q3, q4]));
            }
        }
    }
    candidates
}

/// Squared deflation distance between a state and a found root, taking the
/// quaternion sign ambiguity into account.
fn deflation_dist_sq(u: &State5, root: &State5) -> f64 {
    let mut flipped = *root;
    for k in 1..5 {
        flipped[k] = -flipped[k];
    }
    (u - root).norm_squared().min((u - flipped).norm_squared())
}

fn deflated_merit(u: &State5, residual_norm_sq: f64, found: &[State5]) -> f64 {
    let mut m = residual_norm_sq;
    for root in found {
        m /= deflation_dist_sq(u, root) + 1e-12;
    }
    m
}

fn newton_from(
    seed: State5,
    joints: &ActuatedJoints,
    found: &[State5],
    opts: &SolverOptions,
) -> Option<State5> {
    let mut u = seed;
    for _ in 0..opts.max_iterations {
        let f = residual5(&u, joints);
        if f.amax() <= opts.residual_tol {
            return Some(u);
        }
        if !f.iter().all(|v| v.is_finite()) || f.norm() >= opts.divergence_threshold {
            return None;
        }
        let step = jacobian5(&u).lu().solve(&(-f))?;
        let m0 = deflated_merit(&u, f.norm_squared(), found);

        // backtracking line search on the deflated squared residual norm
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let cand = u + step * t;
            let fc = residual5(&cand, joints);
            if fc.iter().all(|v| v.is_finite())
                && deflated_merit(&cand, fc.norm_squared(), found) <= (1.0 - 1e-4 * t) * m0
            {
                u = cand;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    let f = residual5(&u, joints);
    (f.amax() <= opts.residual_tol).then_some(u)
}

fn multistart_newton(joints: &ActuatedJoints, opts: &SolverOptions) -> Vec<Pose> {
    let (y, z) = (joints.rho1y, joints.rho1z);
    let mut found: Vec<State5> = Vec::new();
    let mut poses: Vec<Pose> = Vec::new();

    let run = |seeds: Vec<State5>, found: &mut Vec<State5>, poses: &mut Vec<Pose>| {
        for seed in seeds {
            let Some(u) = newton_from(seed, joints, found, opts) else {
                continue;
            };
            let Ok(orientation) = UnitQuaternion::new(u[1], u[2], u[3], u[4]) else {
                continue;
            };
            let Ok(pose) = Pose::new(u[0], y, z, orientation) else {
                continue;
            };
            if max_constraint_residual(&pose, joints) > opts.verify_tol {
                continue;
            }
            if poses.iter().any(|p| p.distance(&pose) <= opts.distinct_tol) {
                continue;
            }
            let [q1, q2, q3, q4] = orientation.components();
            found.push(SVector::from([pose.x, q1, q2, q3, q4]));
            poses.push(pose);
        }
    };

    // The analytic enumeration covers the whole solution variety away from
    // degeneracies; the seed grid is only a fallback for the cases where the
    // closed-form chain lost a candidate to conditioning.
    run(analytic_candidates(joints), &mut found, &mut poses);
    if poses.is_empty() {
        run(seed_grid(opts.seed_density), &mut found, &mut poses);
    }

    poses.sort_by(|a, b| {
        a.x.total_cmp(&b.x)
            .then(a.orientation.q1.total_cmp(&b.orientation.q1))
    });
    poses
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const FRAC_1_SQRT_3: f64 = 0.577_350_269_189_625_7;
    const FRAC_SQRT_2_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn unit(q1: f64, q2: f64, q3: f64, q4: f64) -> UnitQuaternion {
        let n = (q1 * q1 + q2 * q2 + q3 * q3 + q4 * q4).sqrt();
        UnitQuaternion::new(q1 / n, q2 / n, q3 / n, q4 / n).unwrap()
    }

    #[test]
    fn ik_home_pose_all_zero() {
        let state = inverse_kinematics(&Pose::home());
        for v in state.actuated.as_array() {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(state.rho1x, FRAC_1_SQRT_3, epsilon = 1e-15);
        assert!(state.is_consistent(1e-12));
    }

    #[test]
    fn ik_translated_home_orientation() {
        let pose = Pose::new(FRAC_1_SQRT_3, 0.2, 0.3, UnitQuaternion::identity()).unwrap();
        let state = inverse_kinematics(&pose);
        let expected = [0.2, 0.3, -0.1, 0.3, -0.1, 0.3];
        for (got, want) in state.actuated.as_array().iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(
            max_constraint_residual(&pose, &state.actuated),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ik_self_motion_family_member_all_zero() {
        let q = UnitQuaternion::new(0.0, FRAC_SQRT_2_2, FRAC_SQRT_2_2, 0.0).unwrap();
        let pose = Pose::new(0.0, 0.0, 0.0, q).unwrap();
        let state = inverse_kinematics(&pose);
        for v in state.actuated.as_array() {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn planar_coefficients_equal_shift() {
        let joints = ActuatedJoints::new(0.1, 0.0, 0.1, 0.0, 0.1, 0.0);
        let quad = planar_quadratic_coefficients(&joints).unwrap();
        assert!(!quad.degenerate);
        assert_eq!(quad.a, 9.0);
        assert_abs_diff_eq!(quad.b, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(quad.c, -2.91, epsilon = 1e-15);
    }

    #[test]
    fn planar_coefficients_asymmetric() {
        let joints = ActuatedJoints::new(0.2, 0.0, 0.1, 0.0, -0.1, 0.0);
        let quad = planar_quadratic_coefficients(&joints).unwrap();
        assert_eq!(quad.a, 9.0);
        assert_abs_diff_eq!(quad.b, 6.0 * SQRT3 * 0.2, epsilon = 1e-15);
        // 0.04 + 0.04 - 0.04 + 0.04 + 0.04 + 0.04 - 3
        assert_abs_diff_eq!(quad.c, -2.84, epsilon = 1e-15);
    }

    #[test]
    fn planar_coefficients_degenerate_flag() {
        let quad = planar_quadratic_coefficients(&ActuatedJoints::zero()).unwrap();
        assert!(quad.degenerate);
    }

    #[test]
    fn planar_rejects_nonzero_z_rows() {
        let joints = ActuatedJoints::new(0.1, 0.2, 0.1, 0.2, 0.1, 0.2);
        assert!(matches!(
            planar_quadratic_coefficients(&joints),
            Err(Error::NotPlanar(_))
        ));
    }

    #[test]
    fn planar_dk_symmetric_roots() {
        let joints = ActuatedJoints::new(0.1, 0.0, 0.1, 0.0, 0.1, 0.0);
        let sols = planar_direct_kinematics(&joints).unwrap();
        assert_eq!(sols.len(), 2);
        let root = (2.91f64 / 9.0).sqrt();
        assert_abs_diff_eq!(sols[0].rho1x, -root, epsilon = 1e-12);
        assert_abs_diff_eq!(sols[1].rho1x, root, epsilon = 1e-12);
        for s in &sols {
            assert!(max_constraint_residual(&s.pose, &joints) <= 1e-9);
        }
    }

    #[test]
    fn planar_dk_degenerate_errors() {
        assert!(matches!(
            planar_direct_kinematics(&ActuatedJoints::zero()),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn planar_dk_negative_discriminant_empty() {
        // sum of rho_iy beyond sqrt(3) puts sin(phi) out of range
        let joints = ActuatedJoints::new(0.6, 0.0, 0.6, 0.0, 0.6, 0.0);
        let quad = planar_quadratic_coefficients(&joints).unwrap();
        assert!(quad.b * quad.b - 4.0 * quad.a * quad.c < 0.0);
        assert!(planar_direct_kinematics(&joints).unwrap().is_empty());
    }

    #[test]
    fn dk_all_zero_joints_is_self_motion() {
        let outcome = direct_kinematics(&ActuatedJoints::zero(), &SolverOptions::default()).unwrap();
        assert_eq!(outcome.kind, DkKind::SelfMotion);
        assert!(outcome.self_motion_family.is_some());
        assert!(outcome.solutions.is_empty());
    }

    #[test]
    fn dk_rejects_non_finite() {
        let joints = ActuatedJoints::new(f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(
            direct_kinematics(&joints, &SolverOptions::default()),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn dk_contains_planar_roots() {
        let joints = ActuatedJoints::new(0.1, 0.0, 0.1, 0.0, 0.1, 0.0);
        let outcome = direct_kinematics(&joints, &SolverOptions::default()).unwrap();
        assert_eq!(outcome.kind, DkKind::FiniteSolutions);
        for s in &outcome.solutions {
            assert!(max_constraint_residual(s, &joints) <= 1e-9);
        }
        for planar in planar_direct_kinematics(&joints).unwrap() {
            assert!(
                outcome.solutions.iter().any(|s| s.distance(&planar.pose) <= 1e-8),
                "planar root rho1x = {} missing from general DK",
                planar.rho1x
            );
        }
    }

    #[test]
    fn dk_roundtrip_recovers_pose() {
        let q = unit(0.9, 0.2, -0.3, 0.1);
        let pose = Pose::new(0.4, -0.2, 0.3, q).unwrap();
        let joints = inverse_kinematics(&pose).actuated;
        let outcome = direct_kinematics(&joints, &SolverOptions::default()).unwrap();
        assert_eq!(outcome.kind, DkKind::FiniteSolutions);
        assert!(outcome.solutions.iter().any(|s| s.distance(&pose) <= 1e-8));
    }

    #[test]
    fn dk_deterministic() {
        let joints = ActuatedJoints::new(0.15, -0.05, 0.02, 0.1, -0.08, 0.03);
        let opts = SolverOptions::default();
        let a = direct_kinematics(&joints, &opts).unwrap();
        let b = direct_kinematics(&joints, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dk_near_self_motion_flag() {
        let joints = ActuatedJoints::new(1e-8, 0.0, 0.0, 0.0, 0.0, 0.0);
        let outcome = direct_kinematics(&joints, &SolverOptions::default()).unwrap();
        assert_ne!(outcome.kind, DkKind::SelfMotion);
        assert!(outcome.near_self_motion);
    }
}
