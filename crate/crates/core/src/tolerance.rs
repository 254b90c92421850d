//! Numeric tolerance policy shared by rank decisions and identity checks.

use crate::error::{Error, Result};

/// Tolerances for the two kinds of numeric decision the crate makes:
/// spectral rank cutoffs and residual checks against the identity.
///
/// An eigenvalue counts toward a rank iff it exceeds
/// `rel_rank_tol * max(lambda_max, 1)`; the absolute floor keeps near-zero
/// Gram matrices from acquiring spurious rank.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerancePolicy {
    rel_rank_tol: f64,
    abs_check_tol: f64,
}

impl TolerancePolicy {
    pub const DEFAULT_REL_RANK_TOL: f64 = 1e-9;
    pub const DEFAULT_ABS_CHECK_TOL: f64 = 1e-9;

    pub fn new(rel_rank_tol: f64, abs_check_tol: f64) -> Result<Self> {
        for value in [rel_rank_tol, abs_check_tol] {
            if !(value > 0.0 && value < 1.0) || !value.is_finite() {
                return Err(Error::ToleranceRange { value });
            }
        }
        Ok(Self {
            rel_rank_tol,
            abs_check_tol,
        })
    }

    pub fn rel_rank_tol(&self) -> f64 {
        self.rel_rank_tol
    }

    pub fn abs_check_tol(&self) -> f64 {
        self.abs_check_tol
    }

    /// Eigenvalue cutoff for a spectrum whose largest eigenvalue is
    /// `lambda_max`.
    pub fn rank_cutoff(&self, lambda_max: f64) -> f64 {
        self.rel_rank_tol * lambda_max.max(1.0)
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rel_rank_tol: Self::DEFAULT_REL_RANK_TOL,
            abs_check_tol: Self::DEFAULT_ABS_CHECK_TOL,
        }
    }
}
