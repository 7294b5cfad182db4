use super::fd::besov_norm_fd;
use super::hgrid::HGrid;
use super::lp::{band_norms, combine_bands, LPFamily};
use super::params::{BesovParams, NormEstimate};
use crate::error::{domain, Result};
use crate::spectral::{RealField, Trajectory};
use crate::Scalar;

/// Norms entering `‖u‖_{B^s_{p,r}} ≤ ‖u‖^θ_{B^{s1}_{p1,r1}} ‖u‖^{1−θ}_{B^{s2}_{p2,r2}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationReport {
    pub params: BesovParams,
    pub theta: f64,
    pub norm: NormEstimate,
    pub norm_a: NormEstimate,
    pub norm_b: NormEstimate,
}

impl InterpolationReport {
    pub fn bound(&self) -> f64 {
        self.norm_a.value.powf(self.theta) * self.norm_b.value.powf(1.0 - self.theta)
    }

    /// `bound − norm`; nonnegative when the inequality holds.
    pub fn slack(&self) -> f64 {
        self.bound() - self.norm.value
    }

    pub fn holds(&self) -> bool {
        self.slack() >= -1e-8
    }
}

/// Littlewood-Paley norms at both endpoints and at the interpolated triple,
/// all from one family.
pub fn interpolation_check<T: Scalar>(
    traj: &Trajectory<T>,
    a: &BesovParams,
    b: &BesovParams,
    theta: f64,
    fam: &LPFamily<T>,
) -> Result<InterpolationReport> {
    let params = BesovParams::interpolate(a, b, theta)?;
    let norm_of = |bp: &BesovParams| -> Result<NormEstimate> {
        Ok(combine_bands(&band_norms(traj, fam, bp.p)?, fam, bp))
    };
    Ok(InterpolationReport {
        params,
        theta,
        norm: norm_of(&params)?,
        norm_a: norm_of(a)?,
        norm_b: norm_of(b)?,
    })
}

/// `‖ |∂x|^{−1} ∂x^m u ‖_{B^s}` against `‖u‖_{B^{s+m−1}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferReport {
    pub m: u32,
    pub transformed: NormEstimate,
    pub original: NormEstimate,
}

impl TransferReport {
    pub fn ratio(&self) -> f64 {
        if self.original.value > 0.0 {
            self.transformed.value / self.original.value
        } else {
            0.0
        }
    }
}

/// Measures the constant in `‖ |∂x|^{−1} ∂x^m u ‖_{B^s_{p,r}} ≤ c ‖u‖_{B^{s+m−1}_{p,r}}`
/// for one field, treated as a single frame of unit duration.
pub fn derivative_transfer_check<T: Scalar>(
    u: &RealField<T>,
    m: u32,
    bp: &BesovParams,
    fam: &LPFamily<T>,
) -> Result<TransferReport> {
    if !(1..=4).contains(&m) {
        return Err(domain(format!("derivative order must be 1..=4, got {m}")));
    }
    let h = u.derivative(m).halfwave(-T::one())?;
    let frame = |f: RealField<T>| Trajectory::new(u.grid().clone(), T::zero(), T::one(), vec![f]);
    let shifted = BesovParams::new(bp.s + m as f64 - 1.0, bp.p, bp.r)?;
    let t_h = frame(h)?;
    let t_u = frame(u.clone())?;
    Ok(TransferReport {
        m,
        transformed: combine_bands(&band_norms(&t_h, fam, bp.p)?, fam, bp),
        original: combine_bands(&band_norms(&t_u, fam, shifted.p)?, fam, &shifted),
    })
}

/// `‖ |D^Δ u| ‖_{B^s_{p,r}} / ‖u‖_{B^s_{p,r}}` by finite differences, for one
/// field treated as a single frame of unit duration.
pub fn abs_increment_ratio<T: Scalar>(u: &RealField<T>, delta: f64, bp: &BesovParams, hg: &HGrid) -> Result<f64> {
    let v = u.finite_diff(T::lit(delta)).map(|x| x.abs());
    let frame = |f: RealField<T>| Trajectory::new(u.grid().clone(), T::zero(), T::one(), vec![f]);
    let top = besov_norm_fd(&frame(v)?, bp, hg)?.value;
    let bottom = besov_norm_fd(&frame(u.clone())?, bp, hg)?.value;
    Ok(if bottom > 0.0 { top / bottom } else { 0.0 })
}
