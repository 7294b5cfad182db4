use std::fmt;
use std::sync::Arc;

use rustfft::Fft;

use crate::error::{config, Result};
use crate::Scalar;

/// Uniform periodic grid on `[0, L)` with `N` collocation points.
///
/// Carries cached FFT plans, so cloning is cheap and every field built on
/// the grid transforms without re-planning.
#[derive(Clone)]
pub struct GridSpec<T: Scalar> {
    length: T,
    n: usize,
    pub(crate) forward: Arc<dyn Fft<T>>,
    pub(crate) inverse: Arc<dyn Fft<T>>,
}

impl<T: Scalar> GridSpec<T> {
    /// `n` must be even and at least 8, `length` positive and finite.
    pub fn new(length: T, n: usize) -> Result<Self> {
        if !(length > T::zero()) || !length.is_finite() {
            return Err(config(format!("grid length must be > 0, got {length}")));
        }
        if n < 8 || !n.is_multiple_of(2) {
            return Err(config(format!("sample count must be even and >= 8, got {n}")));
        }
        let (forward, inverse) = T::plans(n);
        Ok(Self {
            length,
            n,
            forward,
            inverse,
        })
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> T {
        self.length / T::from_usize_lossy(self.n)
    }

    /// Collocation point `x_j = j L / N`.
    pub fn point(&self, j: usize) -> T {
        T::from_usize_lossy(j) * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).map(|j| self.point(j))
    }

    /// Signed mode number stored at FFT index `i` (`-N/2..N/2-1`).
    pub fn mode_number(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// FFT index holding mode `m`, or `None` if it is not resolved.
    pub fn index_of_mode(&self, m: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if m >= -half && m < half {
            Some(if m >= 0 { m as usize } else { (m + self.n as i64) as usize })
        } else {
            None
        }
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Fundamental wavenumber `2π / L`.
    pub fn base_wavenumber(&self) -> T {
        T::TAU() / self.length
    }

    /// Wavenumber `ξ = 2π m / L` at FFT index `i`.
    pub fn wavenumber(&self, i: usize) -> T {
        T::from_i64(self.mode_number(i)).unwrap() * self.base_wavenumber()
    }

    /// Largest resolved `|ξ|` (the Nyquist wavenumber).
    pub fn max_wavenumber(&self) -> T {
        T::from_usize_lossy(self.n / 2) * self.base_wavenumber()
    }

    /// Same length, different resolution.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.length, n)
    }

    pub(crate) fn same_as(&self, other: &Self) -> bool {
        self == other
    }
}

impl<T: Scalar> PartialEq for GridSpec<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

impl<T: Scalar> fmt::Debug for GridSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridSpec")
            .field("length", &self.length)
            .field("n", &self.n)
            .finish()
    }
}
