use rayon::prelude::*;

use super::fd::besov_norm_fd;
use super::hgrid::HGrid;
use super::params::{BesovParams, NormEstimate, TAIL_FLAG_THRESHOLD};
use crate::error::{domain, Result};
use crate::special::{sine_integral, trapezoid_weights, trigamma};
use crate::spectral::{RealField, Trajectory};
use crate::sum::NeumaierSum;
use crate::Scalar;

/// Both sides of `∫ φ |∂x| g = (1/π) ∫_0^∞ ∫ D^h φ D^h g dx dh/h²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityPairing {
    /// Spectral evaluation of `∫ φ |∂x| g`.
    pub lhs: f64,
    /// Offset quadrature of the right side.
    pub rhs: f64,
    /// Share of `rhs` from the outermost offset cells and the sub-`h_1` tail.
    pub tail_fraction: f64,
}

impl DualityPairing {
    pub fn relative_gap(&self) -> f64 {
        let d = (self.lhs - self.rhs).abs();
        if self.lhs != 0.0 {
            d / self.lhs.abs()
        } else {
            d
        }
    }

    pub fn flagged(&self) -> bool {
        !(self.tail_fraction < TAIL_FLAG_THRESHOLD)
    }
}

/// `L Σ_n |ξ_n| Re(φ̂_n conj ĝ_n)`.
fn spectral_pairing<T: Scalar>(phi: &RealField<T>, g: &RealField<T>) -> f64 {
    let grid = phi.grid();
    let (a, b) = (phi.spectrum(), g.spectrum());
    let mut acc = NeumaierSum::new();
    for (i, (x, y)) in a.modes().iter().zip(b.modes()).enumerate() {
        let xi = grid.wavenumber(i).as_f64().abs();
        acc.add(xi * (x * y.conj()).re.as_f64());
    }
    acc.value() * grid.length().as_f64()
}

/// Evaluates both sides of the Fourier duality identity for one pair.
///
/// The right side integrates `P(h) = ∫ D^h φ D^h g dx`, computed in physical
/// space, as `∫ P(h)/h d(ln h)` with the trapezoid rule on `hg`. Below `h_1`
/// the exact per-mode integral `2|ξ| Si(|ξ| h_1) − 4 sin²(ξ h_1/2)/h_1` is
/// added; beyond `h_M = n_p L` the tail is folded onto one period with the
/// weight `ψ₁(n_p + τ/L)/L²`.
pub fn duality_pairing<T: Scalar>(phi: &RealField<T>, g: &RealField<T>, hg: &HGrid) -> Result<DualityPairing> {
    phi.check_grid(g.grid())?;
    hg.check_against(phi.grid())?;
    let grid = phi.grid();
    let n = grid.n();
    let l = grid.length().as_f64();
    let lhs = spectral_pairing(phi, g);

    let (sa, sb) = (phi.spectrum(), g.spectrum());
    for s in [&sa, &sb] {
        // D^h sends the Nyquist mode to −1 times itself for every h, which
        // makes the dh/h² integral diverge.
        let top = s.modes()[grid.nyquist_index()].norm().as_f64();
        let scale = s.modes().iter().fold(0.0f64, |a, c| a.max(c.norm().as_f64()));
        if top > 1e-12 * scale {
            return Err(domain("duality pairing needs fields without Nyquist content"));
        }
    }
    let p_of = |h: f64| -> f64 {
        let da = sa.finite_diff(T::lit(h)).to_real();
        let db = sb.finite_diff(T::lit(h)).to_real();
        let mut acc = NeumaierSum::new();
        for (x, y) in da.samples().iter().zip(db.samples()) {
            acc.add(x.as_f64() * y.as_f64());
        }
        acc.value() * grid.dx().as_f64()
    };

    // Cross-spectral weights c_n = L Re(φ̂_n conj ĝ_n) for the exact sub-h1 part.
    let h1 = hg.h_min();
    if grid.max_wavenumber().as_f64() * h1 > 8.0 {
        return Err(crate::error::config("duality pairing needs h1 ≤ 8/ξ_max"));
    }
    let mut below = NeumaierSum::new();
    for (i, (x, y)) in sa.modes().iter().zip(sb.modes()).enumerate() {
        let xi = grid.wavenumber(i).as_f64();
        if xi == 0.0 {
            continue;
        }
        let c: f64 = l * (x * y.conj()).re.as_f64();
        let s = (xi * h1 / 2.0).sin();
        below.add(c * (2.0 * xi.abs() * sine_integral(xi.abs() * h1) - 4.0 * s * s / h1));
    }
    let below = below.value();

    let hs = hg.offsets();
    let vals: Vec<f64> = hs.par_iter().map(|&h| p_of(h) / h).collect();
    let mut interior = NeumaierSum::new();
    for (w, v) in hg.weights().iter().zip(&vals) {
        interior.add(w * v);
    }
    let d = hg.log_step();
    let g1 = vals[0];
    let em = d * d / 12.0 * g1 - d.powi(4) / 720.0 * g1;

    let m = n.max(256);
    let taus: Vec<f64> = (0..=m).map(|i| l * i as f64 / m as f64).collect();
    let pv: Vec<f64> = taus.par_iter().map(|&t| p_of(t)).collect();
    let w = trapezoid_weights(m + 1, l / m as f64);
    let np = hg.periods() as f64;
    let mut beyond = NeumaierSum::new();
    for ((&t, &p), &wi) in taus.iter().zip(&pv).zip(&w) {
        beyond.add(wi * p * trigamma(np + t / l) / (l * l));
    }

    let total = interior.value() + em + below + beyond.value();
    let outer = (hg.weights()[0] * g1).abs() + (hg.weights()[hs.len() - 1] * vals[hs.len() - 1]).abs() + below.abs();
    let rhs = total / std::f64::consts::PI;
    Ok(DualityPairing {
        lhs,
        rhs,
        tail_fraction: if total != 0.0 { outer / total.abs() } else { 0.0 },
    })
}

/// Both sides of `∬ φ |∂x| g ≤ (1/π) ‖φ‖_{B^s_{p,r}} ‖g‖_{B^{1−s}_{p',r'}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityBound {
    pub pairing: f64,
    pub norm_phi: NormEstimate,
    pub norm_g: NormEstimate,
    pub bound: f64,
}

impl DualityBound {
    /// `pairing / bound`, or 0 when both vanish.
    pub fn ratio(&self) -> f64 {
        if self.bound > 0.0 {
            self.pairing / self.bound
        } else if self.pairing == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// The inequality with relative slack `1e-6`.
    pub fn holds(&self) -> bool {
        self.pairing <= self.bound * (1.0 + 1e-6) + 1e-300
    }

    pub fn flagged(&self) -> bool {
        self.norm_phi.flagged() || self.norm_g.flagged()
    }
}

/// Evaluates both sides of the Besov duality bound on a pair of trajectories,
/// with finite-difference norms on the shared offset grid.
pub fn duality_bound_check<T: Scalar>(
    phi: &Trajectory<T>,
    g: &Trajectory<T>,
    bp: &BesovParams,
    hg: &HGrid,
) -> Result<DualityBound> {
    if !(bp.s > 0.0 && bp.s < 1.0) {
        return Err(domain(format!("duality bound needs s in (0, 1), got {}", bp.s)));
    }
    if phi.len() != g.len() || !phi.grid().same_as(g.grid()) {
        return Err(crate::error::structure("duality bound needs trajectories on one grid and time axis"));
    }
    let mut acc = NeumaierSum::new();
    for (a, b) in phi.frames().iter().zip(g.frames()) {
        acc.add(spectral_pairing(a, b));
    }
    let pairing = acc.value() * phi.dt_rec().as_f64();
    let norm_phi = besov_norm_fd(phi, bp, hg)?;
    let norm_g = besov_norm_fd(g, &bp.dual(), hg)?;
    Ok(DualityBound {
        pairing,
        norm_phi,
        norm_g,
        bound: norm_phi.value * norm_g.value / std::f64::consts::PI,
    })
}
