//! Periodic grids, transforms and exact spectral operators.

mod field;
mod grid;
mod trajectory;

pub use field::{RealField, SpectralField};
pub use grid::GridSpec;
pub use trajectory::Trajectory;

use crate::error::Result;
use crate::Scalar;

pub fn fft_forward<T: Scalar>(u: &RealField<T>) -> SpectralField<T> {
    u.spectrum()
}

pub fn fft_inverse<T: Scalar>(u_hat: &SpectralField<T>) -> RealField<T> {
    u_hat.to_real()
}

pub fn derivative<T: Scalar>(u: &RealField<T>, m: u32) -> RealField<T> {
    u.derivative(m)
}

pub fn halfwave<T: Scalar>(u: &RealField<T>, alpha: T) -> Result<RealField<T>> {
    u.halfwave(alpha)
}

pub fn shift<T: Scalar>(u: &RealField<T>, h: T) -> RealField<T> {
    u.shift(h)
}

pub fn finite_diff<T: Scalar>(u: &RealField<T>, h: T) -> RealField<T> {
    u.finite_diff(h)
}

pub fn integrate_x<T: Scalar>(u: &RealField<T>) -> T {
    u.integrate()
}

pub fn mean<T: Scalar>(u: &RealField<T>) -> T {
    u.mean()
}

pub fn project_zero_mean<T: Scalar>(u: &RealField<T>) -> RealField<T> {
    u.project_zero_mean()
}

/// `x ↦ ∫_0^x u(y) dy` at the collocation points, exact for band-limited `u`
/// (the mean contributes `ū x`).
pub fn cumulative_integral<T: Scalar>(u: &RealField<T>) -> RealField<T> {
    let spec = u.spectrum();
    let mean = spec.modes()[0].re;
    // Antiderivative of the oscillating part, anchored to vanish at x = 0.
    let anti = spec
        .map_modes(|m, xi| {
            if m == 0 {
                num_complex::Complex::new(T::zero(), T::zero())
            } else {
                num_complex::Complex::new(T::zero(), -T::one() / xi)
            }
        });
    let mut modes = anti.modes().to_vec();
    let k = u.grid().nyquist_index();
    modes[k] = num_complex::Complex::new(T::zero(), T::zero());
    let anti = SpectralField::new(u.grid().clone(), modes).expect("same grid");
    let f = anti.to_real();
    let f0 = f.samples()[0];
    let grid = u.grid();
    RealField::from_fn(grid, |x| x * mean).zip_with(&f, |a, b| a + b - f0).expect("same grid")
}
