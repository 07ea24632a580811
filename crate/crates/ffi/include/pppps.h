#ifndef PPPPS_H
#define PPPPS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every FFI call.
 */
enum PpppsStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  PpppsStatus_Ok = 0,
  PpppsStatus_NullPointer = 1,
  PpppsStatus_NonFinite = 2,
  PpppsStatus_NotUnitNorm = 3,
  PpppsStatus_NotSelfMotion = 4,
  PpppsStatus_InvalidArgument = 5,
  PpppsStatus_IndexOutOfRange = 6,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum PpppsStatus PpppsStatus;
#else
typedef int32_t PpppsStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Direct-kinematics outcome classification.
 */
enum PpppsDkKind
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  PpppsDkKind_FiniteSolutions = 0,
  PpppsDkKind_SelfMotion = 1,
  PpppsDkKind_NoSolution = 2,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum PpppsDkKind PpppsDkKind;
#else
typedef int32_t PpppsDkKind;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque direct-kinematics result; create with
 * [`pppps_direct_kinematics`], release with [`pppps_dk_free`].
 */
typedef struct PpppsDkOutcome PpppsDkOutcome;

/**
 * Singularity diagnostics at one orientation (depends only on the
 * orientation, not on the position).
 */
typedef struct {
  double det_a;
  double factored_value;
  double factor_values[3];
  double eliminated_factors[2];
  bool is_singular;
  double self_motion_locus_residuals[6];
} PpppsSingularityReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a NUL-terminated static string.
 */
const char *pppps_version(void);

/**
 * Closed-form inverse kinematics.
 *
 * Writes the six actuated joints to `out_actuated` and, when
 * `out_passive` is non-NULL, the three passive `rho_ix` values.
 *
 * # Safety
 * `pose` must point to 7 readable doubles, `out_actuated` to 6 writable
 * doubles, and `out_passive` to 3 writable doubles or be NULL.
 */
PpppsStatus pppps_inverse_kinematics(const double *pose, double *out_actuated, double *out_passive);

/**
 * The six constraint-equation residuals at a pose/joint pair.
 *
 * # Safety
 * `pose` must point to 7 readable doubles, `joints` to 6 readable doubles
 * and `out_residuals` to 6 writable doubles.
 */
PpppsStatus pppps_constraint_residuals(const double *pose,
                                       const double *joints,
                                       double *out_residuals);

/**
 * Numerical direct kinematics with default solver options. On `Ok` the
 * opaque outcome handle is stored in `out_outcome`.
 *
 * # Safety
 * `joints` must point to 6 readable doubles and `out_outcome` to a
 * writable pointer slot.
 */
PpppsStatus pppps_direct_kinematics(const double *joints, PpppsDkOutcome **out_outcome);

/**
 * Outcome classification of a direct-kinematics handle.
 *
 * # Safety
 * `outcome` must be a live handle from [`pppps_direct_kinematics`].
 */
PpppsDkKind pppps_dk_kind(const PpppsDkOutcome *outcome);

/**
 * Number of distinct finite solutions (0 unless the kind is
 * `FiniteSolutions`).
 *
 * # Safety
 * `outcome` must be a live handle from [`pppps_direct_kinematics`].
 */
uintptr_t pppps_dk_solution_count(const PpppsDkOutcome *outcome);

/**
 * Copies solution `index` (sorted by `(x, q1)`) into `out_pose`.
 *
 * # Safety
 * `outcome` must be a live handle and `out_pose` point to 7 writable
 * doubles.
 */
PpppsStatus pppps_dk_solution(const PpppsDkOutcome *outcome, uintptr_t index, double *out_pose);

/**
 * True when the joints were flagged as nearly self-moving (badly
 * conditioned but not exactly on the condition).
 *
 * # Safety
 * `outcome` must be a live handle from [`pppps_direct_kinematics`].
 */
bool pppps_dk_near_self_motion(const PpppsDkOutcome *outcome);

/**
 * For a `SelfMotion` outcome, the family member at angle `theta`.
 *
 * # Safety
 * `outcome` must be a live handle and `out_pose` point to 7 writable
 * doubles.
 */
PpppsStatus pppps_dk_family_pose(const PpppsDkOutcome *outcome, double theta, double *out_pose);

/**
 * Releases a direct-kinematics handle. NULL is a no-op.
 *
 * # Safety
 * `outcome` must be NULL or a live handle; it must not be used afterwards.
 */
void pppps_dk_free(PpppsDkOutcome *outcome);

/**
 * Self-motion condition on a joint vector. Writes the three condition
 * residuals and the boolean verdict.
 *
 * # Safety
 * `joints` must point to 6 readable doubles, `out_residuals` to 3 writable
 * doubles or NULL, and `out_is_self_motion` to a writable bool.
 */
PpppsStatus pppps_self_motion_condition(const double *joints,
                                        double *out_residuals,
                                        bool *out_is_self_motion);

/**
 * Pose of the Cardanic self-motion family at angle `theta`, for a joint
 * vector satisfying the self-motion condition.
 *
 * # Safety
 * `joints` must point to 6 readable doubles and `out_pose` to 7 writable
 * doubles.
 */
PpppsStatus pppps_cardanic_pose(const double *joints, double theta, double *out_pose);

/**
 * Singularity diagnostics at a pose.
 *
 * # Safety
 * `pose` must point to 7 readable doubles and `out_report` to a writable
 * report struct.
 */
PpppsStatus pppps_singularity_report(const double *pose, PpppsSingularityReport *out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PPPPS_H */
