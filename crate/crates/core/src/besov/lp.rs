use num_complex::Complex;

use super::params::{BesovParams, NormEstimate};
use crate::error::{structure, Result};
use crate::spectral::{GridSpec, RealField, Trajectory};
use crate::sum::NeumaierSum;
use crate::Scalar;

/// Smooth step on `[0, 1]`: 0 below, 1 above, `s(t) + s(1 − t) = 1`.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        1.0 / (1.0 + (1.0 / t - 1.0 / (1.0 - t)).exp())
    }
}

/// Profile of `F(φ_0)` in `t = log₂|ξ|`: supported in `(−1, 1)`, and
/// `Σ_k ψ(t − k) = 1`.
pub fn band_profile(t: f64) -> f64 {
    if t <= -1.0 || t >= 1.0 {
        0.0
    } else if t <= 0.0 {
        smooth_step(t + 1.0)
    } else {
        smooth_step(1.0 - t)
    }
}

/// Dyadic Littlewood-Paley filters `F(φ_k)(ξ) = F(φ_0)(2^{−k} ξ)` on a grid.
#[derive(Debug, Clone)]
pub struct LPFamily<T: Scalar> {
    grid: GridSpec<T>,
    k_min: i32,
    k_max: i32,
    /// `filters[k - k_min][i]` at FFT index `i`.
    filters: Vec<Vec<f64>>,
}

impl<T: Scalar> LPFamily<T> {
    /// Every band that meets a resolved nonzero wavenumber.
    pub fn new(grid: &GridSpec<T>) -> Self {
        let xi_min = grid.base_wavenumber().as_f64();
        let xi_max = grid.max_wavenumber().as_f64();
        let k_min = (xi_min.log2() - 1.0).floor() as i32 + 1;
        let k_max = (xi_max.log2() + 1.0).ceil() as i32 - 1;
        let filters = (k_min..=k_max)
            .map(|k| {
                (0..grid.n())
                    .map(|i| {
                        let xi = grid.wavenumber(i).as_f64().abs();
                        if xi == 0.0 {
                            0.0
                        } else {
                            band_profile(xi.log2() - k as f64)
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            grid: grid.clone(),
            k_min,
            k_max,
            filters,
        }
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn k_range(&self) -> std::ops::RangeInclusive<i32> {
        self.k_min..=self.k_max
    }

    /// `F(φ_k)(ξ_i)` at FFT index `i`.
    pub fn filter(&self, k: i32) -> &[f64] {
        &self.filters[(k - self.k_min) as usize]
    }

    /// Bands whose support reaches past the Nyquist wavenumber.
    pub fn is_truncated(&self, k: i32) -> bool {
        2f64.powi(k + 1) > self.grid.max_wavenumber().as_f64()
    }

    fn check(&self, grid: &GridSpec<T>) -> Result<()> {
        if grid != &self.grid {
            return Err(structure("Littlewood-Paley family built on a different grid"));
        }
        Ok(())
    }
}

/// `u_k = φ_k * u` for every band, in order of `k`.
pub fn lp_decompose<T: Scalar>(u: &RealField<T>, fam: &LPFamily<T>) -> Result<Vec<RealField<T>>> {
    fam.check(u.grid())?;
    let spec = u.spectrum();
    Ok(fam
        .k_range()
        .map(|k| {
            let f = fam.filter(k);
            let mut s = spec.clone();
            for (c, &w) in s.modes_mut().iter_mut().zip(f) {
                *c = *c * T::lit(w);
            }
            s.to_real()
        })
        .collect())
}

/// Time-space `L^p` norms of each band of a trajectory.
pub(crate) fn band_norms<T: Scalar>(traj: &Trajectory<T>, fam: &LPFamily<T>, p: f64) -> Result<Vec<f64>> {
    fam.check(traj.grid())?;
    let cell = traj.grid().dx().as_f64() * traj.dt_rec().as_f64();
    let spectra = traj.spectra();
    let mut out = Vec::new();
    for k in fam.k_range() {
        let f = fam.filter(k);
        let mut acc = NeumaierSum::new();
        let mut max = 0.0f64;
        for s in &spectra {
            let mut band = s.clone();
            for (c, &w) in band.modes_mut().iter_mut().zip(f) {
                *c = *c * T::lit(w);
            }
            if p == 2.0 {
                // Parseval: ∫|u_k|² = L Σ |û_k|².
                let e: f64 = band.modes().iter().map(|c: &Complex<T>| c.norm_sqr().as_f64()).sum();
                acc.add(e * traj.grid().length().as_f64() / traj.grid().dx().as_f64());
                continue;
            }
            let real = band.to_real();
            if p.is_infinite() {
                max = max.max(real.max_abs().as_f64());
            } else {
                let mut inner = NeumaierSum::new();
                real.samples().iter().for_each(|v| inner.add(v.as_f64().abs().powf(p)));
                acc.add(inner.value());
            }
        }
        out.push(if p.is_infinite() {
            max
        } else {
            (acc.value() * cell).powf(1.0 / p)
        });
    }
    Ok(out)
}

/// `(Σ_k 2^{rsk} ‖u_k‖^r_{L^p})^{1/r}` (or the sup for `r = ∞`) over resolved bands.
///
/// `tail_fraction` is the share carried by bands cut off by the Nyquist wavenumber.
pub fn besov_norm_lp<T: Scalar>(
    traj: &Trajectory<T>,
    bp: &BesovParams,
    fam: &LPFamily<T>,
) -> Result<NormEstimate> {
    let norms = band_norms(traj, fam, bp.p)?;
    Ok(combine_bands(&norms, fam, bp))
}

pub(crate) fn combine_bands<T: Scalar>(norms: &[f64], fam: &LPFamily<T>, bp: &BesovParams) -> NormEstimate {
    let terms: Vec<(i32, f64)> = fam
        .k_range()
        .zip(norms)
        .map(|(k, &n)| (k, 2f64.powf(bp.s * k as f64) * n))
        .collect();
    if bp.r.is_infinite() {
        let (mut best, mut best_k) = (0.0, None);
        for &(k, v) in &terms {
            if v > best {
                best = v;
                best_k = Some(k);
            }
        }
        let tail = match best_k {
            Some(k) if fam.is_truncated(k) => 1.0,
            _ => 0.0,
        };
        return NormEstimate {
            value: best,
            h_argmax: None,
            tail_fraction: tail,
        };
    }
    let mut total = NeumaierSum::new();
    let mut tail = NeumaierSum::new();
    for &(k, v) in &terms {
        let t = v.powf(bp.r);
        total.add(t);
        if fam.is_truncated(k) {
            tail.add(t);
        }
    }
    let total = total.value();
    NormEstimate {
        value: total.powf(1.0 / bp.r),
        h_argmax: None,
        tail_fraction: if total > 0.0 { tail.value() / total } else { 0.0 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_support_and_partition() {
        assert_eq!(band_profile(-1.0), 0.0);
        assert_eq!(band_profile(1.0), 0.0);
        assert_eq!(band_profile(0.0), 1.0);
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            assert!((band_profile(t) + band_profile(t - 1.0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn filters_sum_to_one_on_resolved_modes() {
        let g = GridSpec::<f64>::new(37.0, 256).unwrap();
        let fam = LPFamily::new(&g);
        for i in 0..g.n() {
            let total: f64 = fam.k_range().map(|k| fam.filter(k)[i]).sum();
            let want = if i == 0 { 0.0 } else { 1.0 };
            assert!((total - want).abs() < 1e-12, "index {i}: {total}");
        }
    }
}
