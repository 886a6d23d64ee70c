//! Two-sided identity evaluations.

use crate::qcore::SeriesResult;
use crate::scalar::Real;

/// Both sides of an identity together with the truncation bookkeeping of
/// whichever side needed an infinite sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Check<T> {
    pub lhs: T,
    pub rhs: T,
    pub est_error: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl<T: Real> Check<T> {
    pub fn exact(lhs: T, rhs: T) -> Self {
        Self {
            lhs,
            rhs,
            est_error: 0.0,
            terms_used: 0,
            converged: true,
        }
    }

    pub fn against_sum(lhs: T, rhs: SeriesResult<T>) -> Self {
        Self {
            lhs,
            rhs: rhs.value,
            est_error: rhs.est_error,
            terms_used: rhs.terms_used,
            converged: rhs.converged,
        }
    }

    pub fn sums(lhs: SeriesResult<T>, rhs: SeriesResult<T>) -> Self {
        Self {
            lhs: lhs.value,
            rhs: rhs.value,
            est_error: lhs.est_error + rhs.est_error,
            terms_used: lhs.terms_used + rhs.terms_used,
            converged: lhs.converged && rhs.converged,
        }
    }

    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs().f64()
    }
}
