use num_complex::Complex;

use super::GridSpec;
use crate::error::{domain, structure, Result};
use crate::sum;
use crate::Scalar;

/// Samples of a real periodic function at the grid's collocation points.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField<T: Scalar> {
    grid: GridSpec<T>,
    samples: Vec<T>,
}

/// Fourier coefficients `û_m = (1/N) Σ_j e^{-iξ_m x_j} u(x_j)`, stored in FFT
/// order (index `i` holds mode `grid.mode_number(i)`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T: Scalar> {
    grid: GridSpec<T>,
    modes: Vec<Complex<T>>,
}

impl<T: Scalar> RealField<T> {
    /// Fails if the sample count does not match the grid or a sample is not finite.
    pub fn new(grid: GridSpec<T>, samples: Vec<T>) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(structure(format!(
                "expected {} samples, got {}",
                grid.n(),
                samples.len()
            )));
        }
        if let Some(j) = samples.iter().position(|v| !v.is_finite()) {
            return Err(domain(format!("non-finite sample at index {j}")));
        }
        Ok(Self { grid, samples })
    }

    pub(crate) fn from_vec_unchecked(grid: GridSpec<T>, samples: Vec<T>) -> Self {
        debug_assert_eq!(samples.len(), grid.n());
        Self { grid, samples }
    }

    pub fn zeros(grid: &GridSpec<T>) -> Self {
        Self::from_vec_unchecked(grid.clone(), vec![T::zero(); grid.n()])
    }

    pub fn constant(grid: &GridSpec<T>, value: T) -> Self {
        Self::from_vec_unchecked(grid.clone(), vec![value; grid.n()])
    }

    /// Samples `f(x_j)`.
    pub fn from_fn(grid: &GridSpec<T>, f: impl Fn(T) -> T) -> Self {
        let samples = grid.points().map(f).collect();
        Self::from_vec_unchecked(grid.clone(), samples)
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn check_grid(&self, other: &GridSpec<T>) -> Result<()> {
        if self.grid.same_as(other) {
            Ok(())
        } else {
            Err(structure(format!(
                "grid mismatch: {:?} vs {:?}",
                self.grid, other
            )))
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        other.check_grid(&self.grid)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_vec_unchecked(self.grid.clone(), samples))
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_vec_unchecked(self.grid.clone(), self.samples.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, a: T) -> Self {
        self.map(|v| a * v)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn spectrum(&self) -> SpectralField<T> {
        let n = self.grid.n();
        let mut buf: Vec<Complex<T>> = self
            .samples
            .iter()
            .map(|&v| Complex::new(v, T::zero()))
            .collect();
        self.grid.forward.process(&mut buf);
        let inv_n = T::one() / T::from_usize_lossy(n);
        for c in &mut buf {
            *c = *c * inv_n;
        }
        // The complex FFT leaves roundoff-level anti-Hermitian parts. Left in
        // place they never reach a real nonlinearity and grow unchecked under
        // an unstable linear symbol, so project them out.
        let half = T::lit(0.5);
        buf[0].im = T::zero();
        buf[n / 2].im = T::zero();
        for i in 1..n / 2 {
            let (a, b) = (buf[i], buf[n - i].conj());
            let m = (a + b) * half;
            buf[i] = m;
            buf[n - i] = m.conj();
        }
        SpectralField {
            grid: self.grid.clone(),
            modes: buf,
        }
    }

    /// Rectangle rule `(L/N) Σ_j u(x_j)`, exact for band-limited periodic integrands.
    pub fn integrate(&self) -> T {
        self.grid.dx() * sum::sum(self.samples.iter().copied())
    }

    pub fn mean(&self) -> T {
        sum::sum(self.samples.iter().copied()) / T::from_usize_lossy(self.grid.n())
    }

    pub fn project_zero_mean(&self) -> Self {
        let m = self.mean();
        self.map(|v| v - m)
    }

    /// `∂_x^m u` via the multiplier `(iξ)^m`.
    pub fn derivative(&self, m: u32) -> Self {
        self.spectrum().derivative(m).to_real()
    }

    /// `|∂_x|^α u` via the multiplier `|ξ|^α`.
    pub fn halfwave(&self, alpha: T) -> Result<Self> {
        Ok(self.spectrum().halfwave(alpha)?.to_real())
    }

    /// `u(· + h)` as an exact spectral phase shift.
    pub fn shift(&self, h: T) -> Self {
        let r = reduce_offset(h, self.grid.length());
        if r == T::zero() {
            return self.clone();
        }
        self.spectrum().shift(r).to_real()
    }

    /// `D^h u = u(· + h) − u`.
    pub fn finite_diff(&self, h: T) -> Self {
        self.spectrum().finite_diff(h).to_real()
    }

    /// `∫_0^L u²`.
    pub fn energy(&self) -> T {
        self.grid.dx() * sum::sum(self.samples.iter().map(|&v| v * v))
    }

    /// Band-limited interpolation onto `n_fine` points of the same period.
    pub fn resample(&self, n_fine: usize) -> Result<Self> {
        self.spectrum().to_real_on(n_fine)
    }
}

/// `h mod L`, in `[0, L)`.
fn reduce_offset<T: Scalar>(h: T, length: T) -> T {
    let mut r = h % length;
    if r < T::zero() {
        r = r + length;
    }
    if r >= length {
        r = r - length;
    }
    r
}

impl<T: Scalar> SpectralField<T> {
    pub fn new(grid: GridSpec<T>, modes: Vec<Complex<T>>) -> Result<Self> {
        if modes.len() != grid.n() {
            return Err(structure(format!(
                "expected {} modes, got {}",
                grid.n(),
                modes.len()
            )));
        }
        Ok(Self { grid, modes })
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    /// Coefficients in FFT order.
    pub fn modes(&self) -> &[Complex<T>] {
        &self.modes
    }

    pub fn modes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.modes
    }

    /// Coefficient of signed mode `m`; zero when `m` is not resolved.
    pub fn mode(&self, m: i64) -> Complex<T> {
        self.grid
            .index_of_mode(m)
            .map_or(Complex::new(T::zero(), T::zero()), |i| self.modes[i])
    }

    /// Applies a multiplier given as a function of `(mode number, ξ)`.
    pub fn map_modes(&self, f: impl Fn(i64, T) -> Complex<T>) -> Self {
        let modes = self
            .modes
            .iter()
            .enumerate()
            .map(|(i, &c)| c * f(self.grid.mode_number(i), self.grid.wavenumber(i)))
            .collect();
        Self {
            grid: self.grid.clone(),
            modes,
        }
    }

    /// Inverse transform; the imaginary part (roundoff for Hermitian data) is dropped.
    pub fn to_real(&self) -> RealField<T> {
        let mut buf = self.modes.clone();
        self.grid.inverse.process(&mut buf);
        RealField::from_vec_unchecked(self.grid.clone(), buf.into_iter().map(|c| c.re).collect())
    }

    /// Inverse transform onto a finer (or equal) grid of the same period.
    pub fn to_real_on(&self, n_fine: usize) -> Result<RealField<T>> {
        let n = self.grid.n();
        if n_fine < n {
            return Err(structure(format!("cannot resample {n} modes onto {n_fine} points")));
        }
        if n_fine == n {
            return Ok(self.to_real());
        }
        let fine = self.grid.with_n(n_fine)?;
        let mut buf = vec![Complex::new(T::zero(), T::zero()); n_fine];
        let half = n / 2;
        for (i, &c) in self.modes.iter().enumerate() {
            let m = self.grid.mode_number(i);
            if i == half {
                // The Nyquist cosine splits evenly between ±N/2.
                let c2 = c * T::lit(0.5);
                buf[half] = buf[half] + c2;
                buf[n_fine - half] = buf[n_fine - half] + c2;
            } else {
                let j = fine.index_of_mode(m).expect("coarse mode resolved on fine grid");
                buf[j] = c;
            }
        }
        fine.inverse.process(&mut buf);
        Ok(RealField::from_vec_unchecked(fine, buf.into_iter().map(|c| c.re).collect()))
    }

    fn zero_nyquist(mut self) -> Self {
        let k = self.grid.nyquist_index();
        self.modes[k] = Complex::new(T::zero(), T::zero());
        self
    }

    /// Multiplier `(iξ)^m`; odd orders zero the Nyquist mode.
    pub fn derivative(&self, m: u32) -> Self {
        let out = self.map_modes(|_, xi| Complex::new(T::zero(), xi).powu(m));
        if m % 2 == 1 {
            out.zero_nyquist()
        } else {
            out
        }
    }

    /// Multiplier `|ξ|^α`. Mode 0 maps to 0 for `α ≠ 0`; negative `α`
    /// requires a zero-mean input.
    pub fn halfwave(&self, alpha: T) -> Result<Self> {
        if alpha < -T::one() {
            return Err(domain(format!("|∂x|^α needs α ≥ −1, got {alpha}")));
        }
        if alpha < T::zero() {
            let scale = self.modes.iter().fold(T::one(), |m, c| m.max(c.norm()));
            if self.modes[0].norm() > T::lit(1e-12) * scale {
                return Err(domain("|∂x|^α undefined on the mean"));
            }
        }
        let zero = T::zero();
        Ok(self.map_modes(|m, xi| {
            if m == 0 {
                if alpha == zero {
                    Complex::new(T::one(), zero)
                } else {
                    Complex::new(zero, zero)
                }
            } else {
                Complex::new(xi.abs().powf(alpha), zero)
            }
        }))
    }

    /// Phase `e^{iξh}`; the Nyquist mode is zeroed unless `h` is a multiple of `L`.
    pub fn shift(&self, h: T) -> Self {
        let frac = reduce_offset(h, self.grid.length()) / self.grid.length();
        if frac == T::zero() {
            return self.clone();
        }
        self.map_modes(|m, _| {
            let angle = T::TAU() * (T::from_i64(m).unwrap() * frac);
            Complex::new(angle.cos(), angle.sin())
        })
        .zero_nyquist()
    }

    /// Multiplier `e^{iξh} − 1`, consistent with [`SpectralField::shift`]:
    /// identically zero when `h` is a multiple of `L`.
    pub fn finite_diff(&self, h: T) -> Self {
        let frac = reduce_offset(h, self.grid.length()) / self.grid.length();
        if frac == T::zero() {
            return self.map_modes(|_, _| Complex::new(T::zero(), T::zero()));
        }
        let nyq = -(self.grid.n() as i64 / 2);
        self.map_modes(|m, _| {
            if m == nyq {
                return Complex::new(-T::one(), T::zero());
            }
            let angle = T::TAU() * (T::from_i64(m).unwrap() * frac);
            Complex::new(angle.cos() - T::one(), angle.sin())
        })
    }

    /// `Σ_m |û_m|²`, equal to `(1/L) ∫ u²` by Parseval.
    pub fn power(&self) -> T {
        sum::sum(self.modes.iter().map(|c| c.norm_sqr()))
    }

    /// `∫_0^L u v` evaluated in mode space: `L Σ_m û_m conj(v̂_m)`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        if !self.grid.same_as(&other.grid) {
            return Err(structure("grid mismatch in spectral inner product"));
        }
        Ok(self.grid.length()
            * sum::sum(
                self.modes
                    .iter()
                    .zip(&other.modes)
                    .map(|(a, b)| (a * b.conj()).re),
            ))
    }
}
