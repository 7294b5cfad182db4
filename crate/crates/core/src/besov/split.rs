use rayon::prelude::*;

use super::engine::{Moment, StructureEngine};
use super::fd::fd_with_engine;
use super::hgrid::HGrid;
use super::params::{BesovParams, TAIL_FLAG_THRESHOLD};
use crate::error::{domain, Result};
use crate::special::{gauss_legendre, trapezoid_weights, trigamma};
use crate::spectral::Trajectory;
use crate::sum::NeumaierSum;
use crate::Scalar;

/// Gauss-Legendre order on each panel.
const PANEL_ORDER: usize = 8;
/// Widest panel in `ln h`.
const PANEL_LOG_WIDTH: f64 = 0.05;
/// Widest panel in `h`, in units of `dx`.
const PANEL_DX_WIDTH: f64 = 8.0;

/// The parts of `∫_0^∞ Φ(h) dh/h²`, `Φ(h) = ∬ |D^h u|³ dx dt`, cut at `ℓ` and `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeScale {
    pub ell: f64,
    /// `∫_0^ℓ`.
    pub a: f64,
    /// `∫_ℓ^L`.
    pub b: f64,
    /// `∫_L^∞`.
    pub c: f64,
    /// The whole integral from the `(1/3, 3, 3)` finite-difference norm.
    pub full: f64,
    /// `sup_h Φ(h)/h`, the cube of the `(1/3, 3, ∞)` norm.
    pub sup_ratio: f64,
    /// Set when `ℓ < 4 dx`, where the sub-`h_1` model dominates `A`.
    pub flagged: bool,
}

impl ThreeScale {
    pub fn reconstruction_error(&self) -> f64 {
        let d = (self.a + self.b + self.c - self.full).abs();
        if self.full > 0.0 {
            d / self.full
        } else {
            d
        }
    }

    /// `C ≤ (π²/6)(A + B)`.
    pub fn far_bound_holds(&self) -> bool {
        self.c <= std::f64::consts::PI.powi(2) / 6.0 * (self.a + self.b) * (1.0 + 1e-12)
    }

    /// `B(ℓ) ≤ ln(L/ℓ) sup_h Φ(h)/h`.
    pub fn middle_bound(&self, length: f64) -> f64 {
        (length / self.ell).ln() * self.sup_ratio
    }
}

/// Gauss-Legendre panels covering `[ln a, ln b]` with `h`-width ≤ `max_h`.
fn log_panels(a: f64, b: f64, max_h: f64) -> (Vec<f64>, Vec<f64>) {
    let (ya, yb) = (a.ln(), b.ln());
    let (x, w) = gauss_legendre(PANEL_ORDER);
    let mut hs = Vec::new();
    let mut ws = Vec::new();
    let mut y = ya;
    while y < yb - 1e-15 {
        let h = y.exp();
        // Width in ln h so that the panel spans at most max_h in h.
        let by_h = (1.0 + max_h / h).ln();
        let y_next = (y + PANEL_LOG_WIDTH.min(by_h)).min(yb);
        let (mid, half) = ((y + y_next) / 2.0, (y_next - y) / 2.0);
        for (xi, wi) in x.iter().zip(&w) {
            hs.push((mid + half * xi).exp());
            ws.push(half * wi);
        }
        y = y_next;
    }
    (hs, ws)
}

/// Splits `∫_0^∞ Φ(h)/h² dh` into `A(ℓ)`, `B(ℓ)` and `C`.
///
/// `A` and `B` use Gauss-Legendre panels in `ln h`, with the power-law tail
/// `Φ ∝ h³` below `h_1` added in closed form. `C` folds every period onto
/// `[0, L]` with the exact weight `Σ_{n≥1} (nL + τ)^{−2} = ψ₁(1 + τ/L)/L²`.
/// `full` is the `(1/3, 3, 3)` finite-difference estimate on `hg`.
pub fn three_scale_split<T: Scalar>(traj: &Trajectory<T>, ell: f64, hg: &HGrid) -> Result<ThreeScale> {
    let grid = traj.grid();
    let l = grid.length().as_f64();
    let dx = grid.dx().as_f64();
    if !(ell > 0.0 && ell < l) {
        return Err(domain(format!("need 0 < ℓ < L, got ℓ = {ell}")));
    }
    hg.check_against(grid)?;
    let engine = StructureEngine::new(traj);
    let phi = |hs: &[f64]| -> Vec<f64> {
        engine
            .moments_many(hs, &[Moment::Power(3.0)])
            .into_iter()
            .map(|v| v[0])
            .collect()
    };
    let integrate = |hs: &[f64], ws: &[f64]| -> f64 {
        let vals = phi(hs);
        let mut acc = NeumaierSum::new();
        for ((h, w), v) in hs.iter().zip(ws).zip(&vals) {
            acc.add(w * v / h);
        }
        acc.value()
    };

    let h1 = hg.h_min().min(ell / 2.0);
    let (ha, wa) = log_panels(h1, ell, PANEL_DX_WIDTH * dx);
    // Φ(h)/h ≈ K h² below h1, so ∫_0^{h1} Φ/h d(ln h) = Φ(h1)/(2 h1).
    let below = phi(&[h1])[0] / (2.0 * h1);
    let a = integrate(&ha, &wa) + below;
    let (hb, wb) = log_panels(ell, l, PANEL_DX_WIDTH * dx);
    let b = integrate(&hb, &wb);

    let m = grid.n().max(256);
    let taus: Vec<f64> = (0..=m).map(|i| l * i as f64 / m as f64).collect();
    let pv = phi(&taus);
    let w = trapezoid_weights(m + 1, l / m as f64);
    let c: f64 = taus
        .par_iter()
        .zip(&pv)
        .zip(&w)
        .map(|((&t, &p), &wi)| wi * p * trigamma(1.0 + t / l) / (l * l))
        .collect::<Vec<f64>>()
        .iter()
        .sum();

    let n = grid.n();
    let full = fd_with_engine(&engine, n, &BesovParams { s: 1.0 / 3.0, p: 3.0, r: 3.0 }, hg);
    let sup = fd_with_engine(
        &engine,
        n,
        &BesovParams {
            s: 1.0 / 3.0,
            p: 3.0,
            r: f64::INFINITY,
        },
        hg,
    );
    Ok(ThreeScale {
        ell,
        a,
        b,
        c,
        full: full.value.powi(3),
        sup_ratio: sup.value.powi(3),
        flagged: ell < 4.0 * dx || full.tail_fraction >= TAIL_FLAG_THRESHOLD,
    })
}
