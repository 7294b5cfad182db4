//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::{Fft, FftNum, FftPlanner};

/// Real floating-point type the solver and estimators are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate
/// assume `f64`; `f32` is supported for throughput-oriented runs.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FftNum
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count or index.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    /// Lossy conversion back to `f64` for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[doc(hidden)]
    fn planner() -> &'static Mutex<FftPlanner<Self>>;

    /// Forward and inverse plans of length `n`, cached process-wide.
    fn plans(n: usize) -> (Arc<dyn Fft<Self>>, Arc<dyn Fft<Self>>) {
        let mut planner = Self::planner().lock().unwrap_or_else(|e| e.into_inner());
        (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
    }
}

impl Scalar for f64 {
    fn planner() -> &'static Mutex<FftPlanner<f64>> {
        static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
        PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
    }
}

impl Scalar for f32 {
    fn planner() -> &'static Mutex<FftPlanner<f32>> {
        static PLANNER: OnceLock<Mutex<FftPlanner<f32>>> = OnceLock::new();
        PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
    }
}
