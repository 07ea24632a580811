//! Brute-force oracle for direct-kinematics exhaustiveness.
//!
//! An independent plain Newton iteration (finite-difference Jacobian, no
//! deflation, no line search) is started from a dense grid; the deduplicated
//! set of converged verified poses must coincide with what
//! [`direct_kinematics`] returns.

use nalgebra::{DMatrix, DVector};

use pppps::{
    constraint_residuals, direct_kinematics, inverse_kinematics, max_constraint_residual,
    ActuatedJoints, DkKind, Pose, SolverOptions, UnitQuaternion,
};

/// Residual of the reduced problem evaluated purely through the public API:
/// the pose is assembled from the state and the full six-row residual vector
/// is returned (rows 1 and 2 vanish identically by construction).
fn residual(u: &[f64; 5], joints: &ActuatedJoints) -> Option<DVector<f64>> {
    let n = (u[1] * u[1] + u[2] * u[2] + u[3] * u[3] + u[4] * u[4]).sqrt();
    if !(0.5..2.0).contains(&n) {
        return None;
    }
    let q = UnitQuaternion::new(u[1] / n, u[2] / n, u[3] / n, u[4] / n).ok()?;
    let pose = Pose::new(u[0], joints.rho1y, joints.rho1z, q).ok()?;
    let r = constraint_residuals(&pose, joints);
    let mut out = DVector::zeros(5);
    out[0] = r[2];
    out[1] = r[3];
    out[2] = r[4];
    out[3] = r[5];
    out[4] = n * n - 1.0;
    Some(out)
}

fn newton(mut u: [f64; 5], joints: &ActuatedJoints) -> Option<[f64; 5]> {
    const H: f64 = 1e-7;
    for _ in 0..100 {
        let f = residual(&u, joints)?;
        if f.amax() <= 1e-11 {
            return Some(u);
        }
        if f.norm() > 1e6 {
            return None;
        }
        let mut jac = DMatrix::zeros(5, 5);
        for col in 0..5 {
            let mut up = u;
            let mut um = u;
            up[col] += H;
            um[col] -= H;
            let d = (residual(&up, joints)? - residual(&um, joints)?) / (2.0 * H);
            jac.set_column(col, &d);
        }
        let step = jac.lu().solve(&(-f))?;
        for k in 0..5 {
            u[k] += step[k];
        }
    }
    None
}

fn brute_force(joints: &ActuatedJoints) -> Vec<Pose> {
    let mut poses: Vec<Pose> = Vec::new();
    let vals = [-0.9, -0.5, -0.15, 0.15, 0.5, 0.9];
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                for &d in &vals {
                    for x in [-2.0, 0.0, 2.0] {
                        let Some(u) = newton([x, a, b, c, d], joints) else {
                            continue;
                        };
                        let n = (u[1] * u[1] + u[2] * u[2] + u[3] * u[3] + u[4] * u[4]).sqrt();
                        let q =
                            UnitQuaternion::new(u[1] / n, u[2] / n, u[3] / n, u[4] / n).unwrap();
                        let pose = Pose::new(u[0], joints.rho1y, joints.rho1z, q).unwrap();
                        if max_constraint_residual(&pose, joints) > 1e-9 {
                            continue;
                        }
                        if poses.iter().all(|p| p.distance(&pose) > 1e-6) {
                            poses.push(pose);
                        }
                    }
                }
            }
        }
    }
    poses
}

fn assert_same_solution_set(joints: &ActuatedJoints) {
    let oracle = brute_force(joints);
    let outcome = direct_kinematics(joints, &SolverOptions::default()).unwrap();
    assert_eq!(outcome.kind, DkKind::FiniteSolutions);
    assert_eq!(
        outcome.solutions.len(),
        oracle.len(),
        "solver found {} poses, oracle found {}",
        outcome.solutions.len(),
        oracle.len()
    );
    for want in &oracle {
        assert!(
            outcome.solutions.iter().any(|s| s.distance(want) <= 1e-8),
            "oracle pose at x = {} missing from solver output",
            want.x
        );
    }
}

#[test]
fn solver_matches_brute_force_on_generic_joints() {
    assert_same_solution_set(&ActuatedJoints::new(0.15, -0.05, 0.02, 0.1, -0.08, 0.03));
}

#[test]
fn solver_matches_brute_force_on_roundtrip_joints() {
    let n = (0.9f64 * 0.9 + 0.2 * 0.2 + 0.3 * 0.3 + 0.1 * 0.1).sqrt();
    let q = UnitQuaternion::new(0.9 / n, 0.2 / n, -0.3 / n, 0.1 / n).unwrap();
    let pose = Pose::new(0.4, -0.2, 0.3, q).unwrap();
    assert_same_solution_set(&inverse_kinematics(&pose).actuated);
}

#[test]
fn solver_matches_brute_force_on_planar_joints() {
    assert_same_solution_set(&ActuatedJoints::new(0.1, 0.0, 0.1, 0.0, 0.1, 0.0));
}
