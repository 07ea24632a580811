//! C ABI for the 3-PPPS kinematics toolkit.
//!
//! Conventions:
//! - a pose is seven doubles `[x, y, z, q1, q2, q3, q4]` with `q1` the
//!   scalar quaternion component;
//! - actuated joints are six doubles
//!   `[rho1y, rho1z, rho2y, rho2z, rho3y, rho3z]`;
//! - every function returns a [`PpppsStatus`]; outputs are written only on
//!   `Ok`;
//! - direct kinematics hands out an opaque `PpppsDkOutcome` that must be
//!   released with [`pppps_dk_free`].
//!
//! The generated header lands in `include/pppps.h`.

use std::os::raw::c_char;

use pppps::{
    cardanic_family, constraint_residuals, direct_kinematics, inverse_kinematics,
    self_motion_condition, singularity_report, ActuatedJoints, DkKind, DkOutcome, Error, Pose,
    SolverOptions, UnitQuaternion,
};

/// Status code of every FFI call.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpppsStatus {
    Ok = 0,
    NullPointer = 1,
    NonFinite = 2,
    NotUnitNorm = 3,
    NotSelfMotion = 4,
    InvalidArgument = 5,
    IndexOutOfRange = 6,
}

/// Direct-kinematics outcome classification.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpppsDkKind {
    FiniteSolutions = 0,
    SelfMotion = 1,
    NoSolution = 2,
}

/// Singularity diagnostics at one orientation (depends only on the
/// orientation, not on the position).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PpppsSingularityReport {
    pub det_a: f64,
    pub factored_value: f64,
    pub factor_values: [f64; 3],
    pub eliminated_factors: [f64; 2],
    pub is_singular: bool,
    pub self_motion_locus_residuals: [f64; 6],
}

/// Opaque direct-kinematics result; create with
/// [`pppps_direct_kinematics`], release with [`pppps_dk_free`].
pub struct PpppsDkOutcome {
    inner: DkOutcome,
}

fn status_of(err: &Error) -> PpppsStatus {
    match err {
        Error::NonFinite => PpppsStatus::NonFinite,
        Error::NotUnitNorm { .. } => PpppsStatus::NotUnitNorm,
        Error::NotSelfMotion { .. } => PpppsStatus::NotSelfMotion,
        _ => PpppsStatus::InvalidArgument,
    }
}

unsafe fn read_pose(pose: *const f64) -> Result<Pose, PpppsStatus> {
    if pose.is_null() {
        return Err(PpppsStatus::NullPointer);
    }
    let v = std::slice::from_raw_parts(pose, 7);
    let q = UnitQuaternion::new(v[3], v[4], v[5], v[6]).map_err(|e| status_of(&e))?;
    Pose::new(v[0], v[1], v[2], q).map_err(|e| status_of(&e))
}

unsafe fn read_joints(joints: *const f64) -> Result<ActuatedJoints, PpppsStatus> {
    if joints.is_null() {
        return Err(PpppsStatus::NullPointer);
    }
    let v = std::slice::from_raw_parts(joints, 6);
    Ok(ActuatedJoints::from_array([v[0], v[1], v[2], v[3], v[4], v[5]]))
}

unsafe fn write_pose(out: *mut f64, pose: &Pose) {
    let [q1, q2, q3, q4] = pose.orientation.components();
    let v = std::slice::from_raw_parts_mut(out, 7);
    v.copy_from_slice(&[pose.x, pose.y, pose.z, q1, q2, q3, q4]);
}

/// Library version as a NUL-terminated static string.
#[no_mangle]
pub extern "C" fn pppps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Closed-form inverse kinematics.
///
/// Writes the six actuated joints to `out_actuated` and, when
/// `out_passive` is non-NULL, the three passive `rho_ix` values.
///
/// # Safety
/// `pose` must point to 7 readable doubles, `out_actuated` to 6 writable
/// doubles, and `out_passive` to 3 writable doubles or be NULL.
#[no_mangle]
pub unsafe extern "C" fn pppps_inverse_kinematics(
    pose: *const f64,
    out_actuated: *mut f64,
    out_passive: *mut f64,
) -> PpppsStatus {
    if out_actuated.is_null() {
        return PpppsStatus::NullPointer;
    }
    let pose = match read_pose(pose) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let state = inverse_kinematics(&pose);
    std::slice::from_raw_parts_mut(out_actuated, 6).copy_from_slice(&state.actuated.as_array());
    if !out_passive.is_null() {
        std::slice::from_raw_parts_mut(out_passive, 3)
            .copy_from_slice(&[state.rho1x, state.rho2x, state.rho3x]);
    }
    PpppsStatus::Ok
}

/// The six constraint-equation residuals at a pose/joint pair.
///
/// # Safety
/// `pose` must point to 7 readable doubles, `joints` to 6 readable doubles
/// and `out_residuals` to 6 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pppps_constraint_residuals(
    pose: *const f64,
    joints: *const f64,
    out_residuals: *mut f64,
) -> PpppsStatus {
    if out_residuals.is_null() {
        return PpppsStatus::NullPointer;
    }
    let pose = match read_pose(pose) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let joints = match read_joints(joints) {
        Ok(j) => j,
        Err(s) => return s,
    };
    let r = constraint_residuals(&pose, &joints);
    std::slice::from_raw_parts_mut(out_residuals, 6).copy_from_slice(r.as_slice());
    PpppsStatus::Ok
}

/// Numerical direct kinematics with default solver options. On `Ok` the
/// opaque outcome handle is stored in `out_outcome`.
///
/// # Safety
/// `joints` must point to 6 readable doubles and `out_outcome` to a
/// writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn pppps_direct_kinematics(
    joints: *const f64,
    out_outcome: *mut *mut PpppsDkOutcome,
) -> PpppsStatus {
    if out_outcome.is_null() {
        return PpppsStatus::NullPointer;
    }
    let joints = match read_joints(joints) {
        Ok(j) => j,
        Err(s) => return s,
    };
    match direct_kinematics(&joints, &SolverOptions::default()) {
        Ok(inner) => {
            *out_outcome = Box::into_raw(Box::new(PpppsDkOutcome { inner }));
            PpppsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Outcome classification of a direct-kinematics handle.
///
/// # Safety
/// `outcome` must be a live handle from [`pppps_direct_kinematics`].
#[no_mangle]
pub unsafe extern "C" fn pppps_dk_kind(outcome: *const PpppsDkOutcome) -> PpppsDkKind {
    match (*outcome).inner.kind {
        DkKind::FiniteSolutions => PpppsDkKind::FiniteSolutions,
        DkKind::SelfMotion => PpppsDkKind::SelfMotion,
        DkKind::NoSolution => PpppsDkKind::NoSolution,
    }
}

/// Number of distinct finite solutions (0 unless the kind is
/// `FiniteSolutions`).
///
/// # Safety
/// `outcome` must be a live handle from [`pppps_direct_kinematics`].
#[no_mangle]
pub unsafe extern "C" fn pppps_dk_solution_count(outcome: *const PpppsDkOutcome) -> usize {
    (*outcome).inner.solutions.len()
}

/// Copies solution `index` (sorted by `(x, q1)`) into `out_pose`.
///
/// # Safety
/// `outcome` must be a live handle and `out_pose` point to 7 writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn pppps_dk_solution(
    outcome: *const PpppsDkOutcome,
    index: usize,
    out_pose: *mut f64,
) -> PpppsStatus {
    if outcome.is_null() || out_pose.is_null() {
        return PpppsStatus::NullPointer;
    }
    match (&(*outcome).inner.solutions).get(index) {
        Some(pose) => {
            write_pose(out_pose, pose);
            PpppsStatus::Ok
        }
        None => PpppsStatus::IndexOutOfRange,
    }
}

/// True when the joints were flagged as nearly self-moving (badly
/// conditioned but not exactly on the condition).
///
/// # Safety
/// `outcome` must be a live handle from [`pppps_direct_kinematics`].
#[no_mangle]
pub unsafe extern "C" fn pppps_dk_near_self_motion(outcome: *const PpppsDkOutcome) -> bool {
    (*outcome).inner.near_self_motion
}

/// For a `SelfMotion` outcome, the family member at angle `theta`.
///
/// # Safety
/// `outcome` must be a live handle and `out_pose` point to 7 writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn pppps_dk_family_pose(
    outcome: *const PpppsDkOutcome,
    theta: f64,
    out_pose: *mut f64,
) -> PpppsStatus {
    if outcome.is_null() || out_pose.is_null() {
        return PpppsStatus::NullPointer;
    }
    match &(*outcome).inner.self_motion_family {
        Some(family) => {
            write_pose(out_pose, &family.pose_at(theta));
            PpppsStatus::Ok
        }
        None => PpppsStatus::NotSelfMotion,
    }
}

/// Releases a direct-kinematics handle. NULL is a no-op.
///
/// # Safety
/// `outcome` must be NULL or a live handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pppps_dk_free(outcome: *mut PpppsDkOutcome) {
    if !outcome.is_null() {
        drop(Box::from_raw(outcome));
    }
}

/// Self-motion condition on a joint vector. Writes the three condition
/// residuals and the boolean verdict.
///
/// # Safety
/// `joints` must point to 6 readable doubles, `out_residuals` to 3 writable
/// doubles or NULL, and `out_is_self_motion` to a writable bool.
#[no_mangle]
pub unsafe extern "C" fn pppps_self_motion_condition(
    joints: *const f64,
    out_residuals: *mut f64,
    out_is_self_motion: *mut bool,
) -> PpppsStatus {
    if out_is_self_motion.is_null() {
        return PpppsStatus::NullPointer;
    }
    let joints = match read_joints(joints) {
        Ok(j) => j,
        Err(s) => return s,
    };
    let check = self_motion_condition(&joints);
    if !out_residuals.is_null() {
        std::slice::from_raw_parts_mut(out_residuals, 3).copy_from_slice(&check.residuals);
    }
    *out_is_self_motion = check.is_self_motion;
    PpppsStatus::Ok
}

/// Pose of the Cardanic self-motion family at angle `theta`, for a joint
/// vector satisfying the self-motion condition.
///
/// # Safety
/// `joints` must point to 6 readable doubles and `out_pose` to 7 writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn pppps_cardanic_pose(
    joints: *const f64,
    theta: f64,
    out_pose: *mut f64,
) -> PpppsStatus {
    if out_pose.is_null() {
        return PpppsStatus::NullPointer;
    }
    let joints = match read_joints(joints) {
        Ok(j) => j,
        Err(s) => return s,
    };
    match cardanic_family(&joints) {
        Ok(family) => {
            write_pose(out_pose, &family.pose_at(theta));
            PpppsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Singularity diagnostics at a pose.
///
/// # Safety
/// `pose` must point to 7 readable doubles and `out_report` to a writable
/// report struct.
#[no_mangle]
pub unsafe extern "C" fn pppps_singularity_report(
    pose: *const f64,
    out_report: *mut PpppsSingularityReport,
) -> PpppsStatus {
    if out_report.is_null() {
        return PpppsStatus::NullPointer;
    }
    let pose = match read_pose(pose) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let r = singularity_report(&pose);
    *out_report = PpppsSingularityReport {
        det_a: r.det_a,
        factored_value: r.factored_value,
        factor_values: r.factor_values,
        eliminated_factors: r.eliminated_factors,
        is_singular: r.is_singular,
        self_motion_locus_residuals: r.self_motion_locus_residuals,
    };
    PpppsStatus::Ok
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOME: [f64; 7] = [0.5773502691896257, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0];

    #[test]
    fn version_is_nul_terminated() {
        let v = unsafe { std::ffi::CStr::from_ptr(pppps_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn inverse_kinematics_home() {
        let mut joints = [f64::NAN; 6];
        let mut passive = [f64::NAN; 3];
        let status = unsafe {
            pppps_inverse_kinematics(HOME.as_ptr(), joints.as_mut_ptr(), passive.as_mut_ptr())
        };
        assert_eq!(status, PpppsStatus::Ok);
        for v in joints {
            assert!(v.abs() <= 1e-12);
        }
        assert!((passive[0] - HOME[0]).abs() <= 1e-12);
    }

    #[test]
    fn null_pointers_are_rejected() {
        let status = unsafe {
            pppps_inverse_kinematics(std::ptr::null(), std::ptr::null_mut(), std::ptr::null_mut())
        };
        assert_eq!(status, PpppsStatus::NullPointer);
    }

    #[test]
    fn non_unit_quaternion_is_rejected() {
        let pose = [0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0];
        let mut joints = [0.0; 6];
        let status = unsafe {
            pppps_inverse_kinematics(pose.as_ptr(), joints.as_mut_ptr(), std::ptr::null_mut())
        };
        assert_eq!(status, PpppsStatus::NotUnitNorm);
    }

    #[test]
    fn constraint_residuals_vanish_on_ik_joints() {
        let mut joints = [0.0; 6];
        let status = unsafe {
            pppps_inverse_kinematics(HOME.as_ptr(), joints.as_mut_ptr(), std::ptr::null_mut())
        };
        assert_eq!(status, PpppsStatus::Ok);
        let mut residuals = [f64::NAN; 6];
        let status = unsafe {
            pppps_constraint_residuals(HOME.as_ptr(), joints.as_ptr(), residuals.as_mut_ptr())
        };
        assert_eq!(status, PpppsStatus::Ok);
        for r in residuals {
            assert!(r.abs() <= 1e-12);
        }
    }

    #[test]
    fn direct_kinematics_roundtrip_through_handle() {
        let n: f64 = (0.81f64 + 0.04 + 0.09 + 0.01).sqrt();
        let pose = [0.4, -0.2, 0.3, 0.9 / n, 0.2 / n, -0.3 / n, 0.1 / n];
        let mut joints = [0.0; 6];
        unsafe {
            assert_eq!(
                pppps_inverse_kinematics(pose.as_ptr(), joints.as_mut_ptr(), std::ptr::null_mut()),
                PpppsStatus::Ok
            );
        }

        let mut handle: *mut PpppsDkOutcome = std::ptr::null_mut();
        unsafe {
            assert_eq!(
                pppps_direct_kinematics(joints.as_ptr(), &mut handle),
                PpppsStatus::Ok
            );
            assert_eq!(pppps_dk_kind(handle), PpppsDkKind::FiniteSolutions);
            let count = pppps_dk_solution_count(handle);
            assert!(count >= 1);

            let mut recovered = false;
            let mut sol = [0.0; 7];
            for i in 0..count {
                assert_eq!(pppps_dk_solution(handle, i, sol.as_mut_ptr()), PpppsStatus::Ok);
                let gap = pose
                    .iter()
                    .zip(sol)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                recovered |= gap <= 1e-8;
            }
            assert!(recovered, "input pose missing from {count} solutions");

            assert_eq!(
                pppps_dk_solution(handle, count, sol.as_mut_ptr()),
                PpppsStatus::IndexOutOfRange
            );
            pppps_dk_free(handle);
        }
    }

    #[test]
    fn self_motion_through_handle() {
        let joints = [0.0; 6];
        let mut handle: *mut PpppsDkOutcome = std::ptr::null_mut();
        unsafe {
            assert_eq!(
                pppps_direct_kinematics(joints.as_ptr(), &mut handle),
                PpppsStatus::Ok
            );
            assert_eq!(pppps_dk_kind(handle), PpppsDkKind::SelfMotion);
            assert_eq!(pppps_dk_solution_count(handle), 0);

            let mut pose = [0.0; 7];
            assert_eq!(
                pppps_dk_family_pose(handle, std::f64::consts::FRAC_PI_2, pose.as_mut_ptr()),
                PpppsStatus::Ok
            );
            // theta = pi/2 maps to q = (0, 0, 1, 0) and x = -2/sqrt(3)
            assert!((pose[0] + 2.0 / 3.0f64.sqrt()).abs() <= 1e-12);
            assert!((pose[5] - 1.0).abs() <= 1e-12);
            pppps_dk_free(handle);
        }

        let mut residuals = [f64::NAN; 3];
        let mut flag = false;
        unsafe {
            assert_eq!(
                pppps_self_motion_condition(joints.as_ptr(), residuals.as_mut_ptr(), &mut flag),
                PpppsStatus::Ok
            );
        }
        assert!(flag);
        assert_eq!(residuals, [0.0; 3]);

        let mut pose = [0.0; 7];
        unsafe {
            assert_eq!(
                pppps_cardanic_pose(joints.as_ptr(), 0.0, pose.as_mut_ptr()),
                PpppsStatus::Ok
            );
        }
        assert!((pose[0] - 2.0 / 3.0f64.sqrt()).abs() <= 1e-12);

        let not_self_motion = [0.1, 0.0, 0.0, 0.0, 0.0, 0.0];
        unsafe {
            assert_eq!(
                pppps_cardanic_pose(not_self_motion.as_ptr(), 0.0, pose.as_mut_ptr()),
                PpppsStatus::NotSelfMotion
            );
        }
    }

    #[test]
    fn singularity_report_fields() {
        let mut report = std::mem::MaybeUninit::<PpppsSingularityReport>::uninit();
        let status = unsafe { pppps_singularity_report(HOME.as_ptr(), report.as_mut_ptr()) };
        assert_eq!(status, PpppsStatus::Ok);
        let report = unsafe { report.assume_init() };
        assert!((report.factored_value - 1.0).abs() <= 1e-12);
        assert!(!report.is_singular);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let singular = [0.0, 0.0, 0.0, h, 0.0, 0.0, h];
        let mut out = std::mem::MaybeUninit::<PpppsSingularityReport>::uninit();
        unsafe {
            assert_eq!(
                pppps_singularity_report(singular.as_ptr(), out.as_mut_ptr()),
                PpppsStatus::Ok
            );
            assert!(out.assume_init().is_singular);
        }
    }
}
