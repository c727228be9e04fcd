//! Floating-point scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar type the simulator is generic over (`f32` or `f64`).
///
/// Every comparison threshold in the crate is read from here, so the
/// same code path runs at single precision with looser tolerances.
pub trait Scalar:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Hermiticity, trace, positivity and completeness checks.
    fn structural_tol() -> Self;
    /// Eigendecomposition reconstruction and orthonormality residuals.
    fn reconstruction_tol() -> Self;
    /// Relative off-diagonal norm at which Jacobi sweeps stop.
    fn convergence_tol() -> Self;
    /// Bloch-norm excess and unit-axis slack.
    fn norm_tol() -> Self;
    /// Eigenvalue-pair cutoff in the SLD sum.
    fn sld_cutoff() -> Self;
    /// Default central-difference step in radians.
    fn default_step() -> Self;

    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn structural_tol() -> Self {
        1e-10
    }
    fn reconstruction_tol() -> Self {
        1e-11
    }
    fn convergence_tol() -> Self {
        1e-13
    }
    fn norm_tol() -> Self {
        1e-12
    }
    fn sld_cutoff() -> Self {
        1e-10
    }
    fn default_step() -> Self {
        1e-5
    }
}

impl Scalar for f32 {
    fn structural_tol() -> Self {
        1e-4
    }
    fn reconstruction_tol() -> Self {
        1e-5
    }
    fn convergence_tol() -> Self {
        1e-6
    }
    fn norm_tol() -> Self {
        1e-6
    }
    fn sld_cutoff() -> Self {
        1e-5
    }
    fn default_step() -> Self {
        1e-2
    }
}
