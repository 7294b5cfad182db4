use super::engine::StructureEngine;
use super::hgrid::HGrid;
use super::lp::{besov_norm_lp, LPFamily};
use super::params::{BesovParams, NormEstimate};
use crate::error::Result;
use crate::special::{hurwitz_zeta, trapezoid_weights};
use crate::spectral::Trajectory;
use crate::sum::NeumaierSum;
use crate::Scalar;

/// Uniform samples per period used for the folded tail beyond `h_M`.
pub(crate) fn fold_samples(n: usize) -> usize {
    (n / 2).clamp(64, 512)
}

/// Golden-section refinement steps for the `r = ∞` supremum.
const GOLDEN_STEPS: usize = 60;

/// `‖ ‖D^h u‖_{L^p} / h^s ‖_{L^r(dh/h)}` over time-space.
///
/// For `r < ∞` the integral is the trapezoid rule in `ln h` on `hg`, plus
/// the analytic power-law tail below `h_1` (where `‖D^h u‖_p ∝ h`) with its
/// Euler-Maclaurin endpoint correction, plus the tail beyond `h_M` folded
/// back onto one period. For `r = ∞` it is the maximum over the offsets in
/// `(0, L]` refined by golden-section search.
pub fn besov_norm_fd<T: Scalar>(
    traj: &Trajectory<T>,
    bp: &BesovParams,
    hg: &HGrid,
) -> Result<NormEstimate> {
    bp.check_fd()?;
    hg.check_against(traj.grid())?;
    let engine = StructureEngine::new(traj);
    Ok(fd_with_engine(&engine, traj.grid().n(), bp, hg))
}

pub(crate) fn fd_with_engine<T: Scalar>(
    engine: &StructureEngine<T>,
    n: usize,
    bp: &BesovParams,
    hg: &HGrid,
) -> NormEstimate {
    if bp.r.is_infinite() {
        return sup_norm(engine, bp, hg);
    }
    let norms = engine.norms(hg.offsets(), bp.p);
    if norms.iter().all(|&v| v == 0.0) {
        return NormEstimate {
            value: 0.0,
            h_argmax: None,
            tail_fraction: 0.0,
        };
    }
    let (s, r) = (bp.s, bp.r);
    let g: Vec<f64> = hg
        .offsets()
        .iter()
        .zip(&norms)
        .map(|(&h, &v)| v.powf(r) * h.powf(-s * r))
        .collect();
    let mut interior = NeumaierSum::new();
    for (w, v) in hg.weights().iter().zip(&g) {
        interior.add(w * v);
    }
    // Below h_1 the integrand in ln h behaves like e^{a y}.
    let a = (1.0 - s) * r;
    if a <= 0.0 {
        // s = 1: ∫_0 ‖D^h u‖²/h² dh/h diverges logarithmically for any
        // non-constant field.
        return NormEstimate {
            value: f64::INFINITY,
            h_argmax: None,
            tail_fraction: 1.0,
        };
    }
    let d = hg.log_step();
    let g1 = g[0];
    let below = g1 / a;
    let em = d * d / 12.0 * a * g1 - d.powi(4) / 720.0 * a.powi(3) * g1;
    let beyond = folded_tail(engine, n, bp, hg);
    let total = interior.value() + below + em + beyond;
    let outer = hg.weights()[0] * g1 + hg.weights()[g.len() - 1] * g[g.len() - 1] + below;
    NormEstimate {
        value: total.max(0.0).powf(1.0 / r),
        h_argmax: None,
        tail_fraction: if total > 0.0 { outer / total } else { 0.0 },
    }
}

/// `∫_{h_M}^∞ ‖D^h u‖^r h^{−sr−1} dh` with `h_M = n_p L`, folded onto `[0, L]`:
/// `∫_0^L ‖D^τ u‖^r L^{−sr−1} ζ(sr + 1, n_p + τ/L) dτ`.
fn folded_tail<T: Scalar>(engine: &StructureEngine<T>, n: usize, bp: &BesovParams, hg: &HGrid) -> f64 {
    let l = hg.period();
    let m = fold_samples(n);
    let taus: Vec<f64> = (0..=m).map(|i| l * i as f64 / m as f64).collect();
    let norms = engine.norms(&taus, bp.p);
    let expo = bp.s * bp.r + 1.0;
    let np = hg.periods() as f64;
    let w = trapezoid_weights(m + 1, l / m as f64);
    let mut acc = NeumaierSum::new();
    for ((&tau, &v), &wi) in taus.iter().zip(&norms).zip(&w) {
        if v > 0.0 {
            acc.add(wi * v.powf(bp.r) * l.powf(-expo) * hurwitz_zeta(expo, np + tau / l));
        }
    }
    acc.value()
}

fn sup_norm<T: Scalar>(engine: &StructureEngine<T>, bp: &BesovParams, hg: &HGrid) -> NormEstimate {
    let l = hg.period();
    let hs: Vec<f64> = hg.offsets().iter().copied().filter(|&h| h <= l).collect();
    let norms = engine.norms(&hs, bp.p);
    let f = |h: f64, v: f64| v * h.powf(-bp.s);
    let vals: Vec<f64> = hs.iter().zip(&norms).map(|(&h, &v)| f(h, v)).collect();
    let (mut best_i, mut best) = (0usize, 0.0f64);
    for (i, &v) in vals.iter().enumerate() {
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best == 0.0 {
        return NormEstimate {
            value: 0.0,
            h_argmax: None,
            tail_fraction: 0.0,
        };
    }
    let lo = if best_i == 0 { hs[0] } else { hs[best_i - 1] };
    let hi = if best_i + 1 < hs.len() { hs[best_i + 1] } else { l };
    let eval = |h: f64| f(h, engine.norms(&[h], bp.p)[0]);
    let (h_star, v_star) = golden_max(eval, lo, hi);
    let (h_best, v_best) = if v_star > best { (h_star, v_star) } else { (hs[best_i], best) };
    NormEstimate {
        value: v_best,
        h_argmax: Some(h_best),
        // Below h_1 the ratio is at most its value there, since D^h u is
        // linear in h; only a peak on the first offset leaves it unresolved.
        tail_fraction: if best_i == 0 { vals[0] / v_best } else { 0.0 },
    }
}

/// Maximizes a unimodal `f` on `[a, b]` (searched in `ln h`).
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a.ln(), b.ln());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c.exp());
    let mut fd = f(d.exp());
    for _ in 0..GOLDEN_STEPS {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d.exp());
        }
        if (b - a).abs() < 1e-13 {
            break;
        }
    }
    if fc > fd {
        (c.exp(), fc)
    } else {
        (d.exp(), fd)
    }
}

/// Which estimator a rescaled norm uses.
#[derive(Debug, Clone)]
pub enum Method<'a, T: Scalar> {
    FiniteDifference(&'a HGrid),
    LittlewoodPaley(&'a LPFamily<T>),
}

/// `(L T)^{−1/p} ‖u‖_{B^s_{p,r}}` with `T = frames · dt_rec`.
pub fn rescaled_norm<T: Scalar>(
    traj: &Trajectory<T>,
    bp: &BesovParams,
    method: &Method<'_, T>,
) -> Result<NormEstimate> {
    let raw = match method {
        Method::FiniteDifference(hg) => besov_norm_fd(traj, bp, hg)?,
        Method::LittlewoodPaley(fam) => besov_norm_lp(traj, bp, fam)?,
    };
    Ok(raw.scaled(rescale_factor(traj, bp.p)))
}

pub fn rescale_factor<T: Scalar>(traj: &Trajectory<T>, p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        (traj.grid().length().as_f64() * traj.duration().as_f64()).powf(-1.0 / p)
    }
}

/// Rescaled norms over the two halves of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stationarity {
    pub first_half: f64,
    pub second_half: f64,
    /// `|a − b| / max(a, b)`.
    pub relative_change: f64,
}

impl Stationarity {
    /// Halves within 10% of each other.
    pub fn is_stationary(&self) -> bool {
        self.relative_change < 0.1
    }
}

pub fn stationarity<T: Scalar>(
    traj: &Trajectory<T>,
    bp: &BesovParams,
    method: &Method<'_, T>,
) -> Result<Stationarity> {
    let n = traj.len();
    let mid = n / 2;
    let a = rescaled_norm(&traj.window(0..mid.max(1))?, bp, method)?.value;
    let b = rescaled_norm(&traj.window(mid.min(n - 1)..n)?, bp, method)?.value;
    let big = a.max(b);
    Ok(Stationarity {
        first_half: a,
        second_half: b,
        relative_change: if big > 0.0 { (a - b).abs() / big } else { 0.0 },
    })
}

/// Several finite-difference norms of one trajectory sharing one pass over
/// the offset grid.
pub fn besov_norms_fd<T: Scalar>(
    traj: &Trajectory<T>,
    params: &[BesovParams],
    hg: &HGrid,
) -> Result<Vec<NormEstimate>> {
    for bp in params {
        bp.check_fd()?;
    }
    hg.check_against(traj.grid())?;
    let engine = StructureEngine::new(traj);
    Ok(params
        .iter()
        .map(|bp| fd_with_engine(&engine, traj.grid().n(), bp, hg))
        .collect())
}
