use thiserror::Error;

/// Domain errors shared by the solvers and samplers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite numeric input")]
    NonFinite,
    #[error("quaternion norm {norm} deviates from 1 by more than 1e-6")]
    NotUnitNorm { norm: f64 },
    #[error("joints are not planar: rho_iz values {0:?} are not all zero")]
    NotPlanar([f64; 3]),
    #[error("planar quadratic degenerates (self-motion): rho1y+rho2y+rho3y = {sum}")]
    Degenerate { sum: f64 },
    #[error("joints do not satisfy the self-motion condition, residuals {residuals:?}")]
    NotSelfMotion { residuals: [f64; 3] },
    #[error("surface sampling resolution {0} is below the minimum of 8")]
    ResolutionTooSmall(u32),
    #[error("solver produced a pose failing verification, max residual {max_residual}")]
    VerificationFailed { max_residual: f64 },
}
