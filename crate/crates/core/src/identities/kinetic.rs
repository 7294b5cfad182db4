use rayon::prelude::*;

use super::khm::{check_pair, integrated_terms, time_weights, IntegratedOptions};
use super::report::{IdentityReport, Resolution};
use crate::error::{domain, Result};
use crate::spectral::{RealField, Trajectory};
use crate::sum::NeumaierSum;
use crate::Scalar;

/// Uniform velocity lattice `v_i = lo + i Δv`, `i = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VGrid {
    pub lo: f64,
    pub dv: f64,
    pub count: usize,
}

impl VGrid {
    /// Covers `[min − 3Δv, max + 3Δv]`. A degenerate range gets a 3-cell grid
    /// around the value.
    pub fn spanning(min: f64, max: f64, dv: f64) -> Result<Self> {
        if !(min <= max) || !min.is_finite() || !max.is_finite() {
            return Err(domain(format!("bad velocity range [{min}, {max}]")));
        }
        if max == min {
            let dv = if dv > 0.0 { dv } else { 1.0 };
            return Ok(Self {
                lo: min - 1.5 * dv,
                dv,
                count: 3,
            });
        }
        if !(dv > 0.0) {
            return Err(domain(format!("Δv must be positive, got {dv}")));
        }
        let cells = ((max - min) / dv).ceil() as usize + 6;
        Ok(Self {
            lo: min - 3.0 * dv,
            dv,
            count: cells + 1,
        })
    }

    pub fn v(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.dv
    }

    /// `#{i : v_i ≤ u}`.
    pub fn threshold(&self, u: f64) -> usize {
        let k = ((u - self.lo) / self.dv).floor() + 1.0;
        k.clamp(0.0, self.count as f64) as usize
    }
}

/// The indicator `f(x_j, v_i) = 1_{v_i ≤ u(x_j)}` of one field.
///
/// Because `f` is nonincreasing in `v`, each column is stored as the index
/// of its last 1 rather than as bits.
#[derive(Debug, Clone)]
pub struct KineticProfile<T: Scalar> {
    vgrid: VGrid,
    thresholds: Vec<usize>,
    u_ref: RealField<T>,
}

impl<T: Scalar> KineticProfile<T> {
    pub fn on(u: &RealField<T>, vgrid: VGrid) -> Self {
        Self {
            vgrid,
            thresholds: u.samples().iter().map(|v| vgrid.threshold(v.as_f64())).collect(),
            u_ref: u.clone(),
        }
    }

    pub fn vgrid(&self) -> &VGrid {
        &self.vgrid
    }

    pub fn u_ref(&self) -> &RealField<T> {
        &self.u_ref
    }

    pub fn value(&self, j: usize, i: usize) -> bool {
        i < self.thresholds[j]
    }

    pub fn threshold(&self, j: usize) -> usize {
        self.thresholds[j]
    }

    /// `Δv Σ_i f(x_j, v_i)`, which is `u(x_j) − v_0` up to `Δv`.
    pub fn reconstruct(&self, j: usize) -> f64 {
        self.vgrid.dv * self.thresholds[j] as f64
    }
}

/// Profile of `u` on a lattice spanning its own range.
pub fn kinetic_profile<T: Scalar>(u: &RealField<T>, dv: f64) -> Result<KineticProfile<T>> {
    let (lo, hi) = u
        .samples()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v.as_f64()), b.max(v.as_f64())));
    Ok(KineticProfile::on(u, VGrid::spanning(lo, hi, dv)?))
}

/// `max u − min u` over every sample of a trajectory, with the extremes.
pub fn trajectory_range<T: Scalar>(u: &Trajectory<T>) -> (f64, f64) {
    u.frames()
        .iter()
        .flat_map(|f| f.samples().iter().map(|v| v.as_f64()))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
}

/// Profiles of every frame on one shared lattice.
#[derive(Debug, Clone)]
pub struct KineticTrajectory<T: Scalar> {
    pub vgrid: VGrid,
    pub profiles: Vec<KineticProfile<T>>,
    pub dt_rec: f64,
}

pub fn kinetic_trajectory<T: Scalar>(u: &Trajectory<T>, dv: f64) -> Result<KineticTrajectory<T>> {
    let (lo, hi) = trajectory_range(u);
    let vgrid = VGrid::spanning(lo, hi, dv)?;
    Ok(KineticTrajectory {
        vgrid,
        profiles: u.frames().iter().map(|f| KineticProfile::on(f, vgrid)).collect(),
        dt_rec: u.dt_rec().as_f64(),
    })
}

/// Smooth bump supported in `(c − w, c + w)` and its derivative.
fn bump(v: f64, c: f64, w: f64) -> (f64, f64) {
    let s = (v - c) / w;
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - s * s;
    let val = (1.0 - 1.0 / q).exp();
    // d/ds exp(1 − 1/q) = exp(·) · (−2s/q²)
    (val, val * (-2.0 * s / (q * q)) / w)
}

/// Test functions `ψ(v) e(x)` used by [`kinetic_residual`].
struct TestFn {
    center: f64,
    width: f64,
    mode: usize,
    sine: bool,
}

fn test_set(vg: &VGrid) -> Vec<TestFn> {
    let span = vg.dv * (vg.count - 1) as f64;
    let mut out = Vec::new();
    for frac in [0.3, 0.5, 0.7] {
        for mode in 0..=2 {
            for sine in [false, true] {
                if mode == 0 && sine {
                    continue;
                }
                out.push(TestFn {
                    center: vg.lo + frac * span,
                    width: 0.25 * span,
                    mode,
                    sine,
                });
            }
        }
    }
    out
}

/// Weak residual of `∂t f + v ∂x f = −∂v f η`, integrated over the whole
/// trajectory:
/// `[∬ f φ]_0^T − ∫_0^T ∬ f (v ∂x φ + η ∂v φ)` for `φ = ψ(v) e(x)`, with
/// smooth bumps `ψ` inside the lattice and `e ∈ {1, cos, sin}` of the first
/// two modes. The reported residual is the largest over the test set.
pub fn kinetic_residual<T: Scalar>(kin: &KineticTrajectory<T>, eta: &Trajectory<T>) -> Result<IdentityReport> {
    if kin.profiles.len() != eta.len() || kin.profiles.len() < 2 {
        return Err(crate::error::structure("kinetic profiles and η must have the same (≥ 2) frames"));
    }
    kin.profiles[0].u_ref().check_grid(eta.grid())?;
    let vg = kin.vgrid;
    let grid = eta.grid();
    let n = grid.n();
    let dx = grid.dx().as_f64();
    let l = grid.length().as_f64();
    let tests = test_set(&vg);
    let tw = crate::special::trapezoid_weights(kin.profiles.len(), kin.dt_rec);
    let rows: Vec<(f64, f64)> = tests
        .par_iter()
        .map(|t| {
            // Prefix sums over the lattice of ψ, vψ and ψ'.
            let mut p0 = vec![0.0; vg.count + 1];
            let mut p1 = vec![0.0; vg.count + 1];
            let mut p2 = vec![0.0; vg.count + 1];
            for i in 0..vg.count {
                let v = vg.v(i);
                let (psi, dpsi) = bump(v, t.center, t.width);
                p0[i + 1] = p0[i] + psi * vg.dv;
                p1[i + 1] = p1[i] + v * psi * vg.dv;
                p2[i + 1] = p2[i] + dpsi * vg.dv;
            }
            let k = std::f64::consts::TAU * t.mode as f64 / l;
            let (e, de): (Vec<f64>, Vec<f64>) = (0..n)
                .map(|j| {
                    let x = j as f64 * dx;
                    if t.sine {
                        ((k * x).sin(), k * (k * x).cos())
                    } else {
                        ((k * x).cos(), -k * (k * x).sin())
                    }
                })
                .unzip();
            let mass = |p: &KineticProfile<T>| {
                let mut acc = NeumaierSum::new();
                for j in 0..n {
                    acc.add(e[j] * p0[p.threshold(j)]);
                }
                acc.value() * dx
            };
            let mut flux = NeumaierSum::new();
            for ((p, et), w) in kin.profiles.iter().zip(eta.frames()).zip(&tw) {
                let mut acc = NeumaierSum::new();
                for j in 0..n {
                    let kj = p.threshold(j);
                    acc.add(de[j] * p1[kj] + et.samples()[j].as_f64() * e[j] * p2[kj]);
                }
                flux.add(w * acc.value() * dx);
            }
            let boundary = mass(&kin.profiles[kin.profiles.len() - 1]) - mass(&kin.profiles[0]);
            (boundary, flux.value())
        })
        .collect();
    let mut worst = 0.0f64;
    let (mut bmax, mut fmax) = (0.0f64, 0.0f64);
    for (b, f) in &rows {
        worst = worst.max((b - f).abs());
        bmax = bmax.max(b.abs());
        fmax = fmax.max(f.abs());
    }
    Ok(IdentityReport::new(
        "kinetic",
        vec![("boundary", bmax), ("flux", fmax)],
        worst,
        Resolution {
            n,
            dt: Some(kin.dt_rec),
            dv: Some(vg.dv),
            m: Some(tests.len()),
            ..Default::default()
        },
    ))
}

/// `Σ_{i>j} (v_i − v_j) a_i a_j` for a lattice block, by prefix sums.
fn ordered_pair_sum(a: impl Iterator<Item = (f64, f64)>) -> f64 {
    // Items are (v_i, a_i) in increasing v.
    let (mut s, mut w) = (0.0, 0.0);
    let mut acc = NeumaierSum::new();
    for (v, ai) in a {
        if ai != 0.0 {
            acc.add(ai * (v * s - w));
            s += ai;
            w += ai * v;
        }
    }
    acc.value()
}

/// `(1/6)|u − ū|³` and the lattice value of
/// `∬ 1_{v>w} (v − w)(M_u − M_ū)(v)(M_u − M_ū)(w) dv dw`
/// on `v_i = (i + ½)Δv`.
pub fn cube_identity(u: f64, ubar: f64, dv: f64) -> Result<(f64, f64)> {
    if !(dv > 0.0) {
        return Err(domain(format!("Δv must be positive, got {dv}")));
    }
    let lhs = (u - ubar).abs().powi(3) / 6.0;
    let (lo, hi) = (u.min(ubar), u.max(ubar));
    let sign = if u >= ubar { 1.0 } else { -1.0 };
    // M_u − M_ū = ±1 on (lo, hi]: lattice points with lo < (i+½)Δv ≤ hi.
    let first = (lo / dv - 0.5).floor() as i64 + 1;
    let last = (hi / dv - 0.5).floor() as i64;
    let rhs = ordered_pair_sum((first..=last).map(|i| ((i as f64 + 0.5) * dv, sign))) * dv * dv;
    Ok((lhs, rhs))
}

/// `∫_{a∧b}^b (a − v) dv = −½((a − b)∧0)²`.
pub fn lower_wedge_integral(a: f64, b: f64) -> f64 {
    -0.5 * (a - b).min(0.0).powi(2)
}

/// The parts of `Q(h)` and the two identities they satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QDecomposition {
    /// `∫∫∬ 1_{v>w}(v − w) D^h f(v) D^h f(w)` on the lattice.
    pub q: f64,
    /// `Q1 + Q2 = ∫∫∫_0^h D^Δη |D^Δu|`.
    pub q12: f64,
    /// `Q3 = −[½∫_0^h∫|D^Δu|D^Δu]_0^T`.
    pub q3: f64,
    /// `(1/6)∬|D^h u|³`.
    pub cubic: f64,
    pub dv: f64,
}

impl QDecomposition {
    /// `|Q − (Q1 + Q2 + Q3)| / |Q|`.
    pub fn decomposition_residual(&self) -> f64 {
        rel(self.q - self.q12 - self.q3, self.q)
    }

    /// `|Q − (1/6)∬|D^h u|³| / |Q|`.
    pub fn cube_residual(&self) -> f64 {
        rel(self.q - self.cubic, self.q)
    }

    pub fn report(&self, n: usize, dt: f64) -> IdentityReport {
        IdentityReport::new(
            "q-decomposition",
            vec![("Q", self.q), ("Q1+Q2", self.q12), ("Q3", self.q3), ("cubic", self.cubic)],
            (self.q - self.q12 - self.q3).abs().max((self.q - self.cubic).abs()),
            Resolution {
                n,
                dt: Some(dt),
                dv: Some(self.dv),
                ..Default::default()
            },
        )
    }
}

fn rel(d: f64, scale: f64) -> f64 {
    if scale != 0.0 {
        (d / scale).abs()
    } else {
        d.abs()
    }
}

/// Lattice value of `Q(h)` over a trajectory, time integrated with
/// Simpson's rule.
pub fn q_lattice<T: Scalar>(u: &Trajectory<T>, h: f64, dv: f64) -> Result<f64> {
    let kin = kinetic_trajectory(u, dv)?;
    let vg = kin.vgrid;
    let dx = u.grid().dx().as_f64();
    let per_frame: Vec<f64> = u
        .frames()
        .par_iter()
        .zip(&kin.profiles)
        .map(|(f, p)| {
            let shifted = KineticProfile::on(&f.shift(T::lit(h)), vg);
            let mut acc = NeumaierSum::new();
            for j in 0..f.samples().len() {
                let (k1, k2) = (p.threshold(j), shifted.threshold(j));
                // D^h f = 1_{v ≤ u^h} − 1_{v ≤ u}: ±1 between the thresholds.
                let (a, b, s) = if k2 >= k1 { (k1, k2, 1.0) } else { (k2, k1, -1.0) };
                acc.add(ordered_pair_sum((a..b).map(|i| (vg.v(i), s))));
            }
            acc.value() * dx * vg.dv * vg.dv
        })
        .collect();
    let w = time_weights(per_frame.len(), u.dt_rec().as_f64());
    Ok(per_frame.iter().zip(&w).map(|(q, w)| q * w).sum())
}

/// `Q(h)` on the lattice against `Q1 + Q2` and `Q3` from the integrated
/// identity's source and boundary terms.
pub fn q_decomposition<T: Scalar>(
    u: &Trajectory<T>,
    eta: &Trajectory<T>,
    h: f64,
    dv: f64,
    opts: &IntegratedOptions,
) -> Result<QDecomposition> {
    check_pair(u, eta, 2)?;
    let q = q_lattice(u, h, dv)?;
    let t = integrated_terms(u, eta, h, opts)?;
    Ok(QDecomposition {
        q,
        q12: t.source,
        q3: -t.boundary,
        cubic: t.cubic,
        dv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_sum_matches_closed_form() {
        let dv = 0.1;
        for n in 0..20usize {
            let got = ordered_pair_sum((0..n).map(|i| (i as f64 * dv, 1.0)));
            let want = dv * ((n * n * n) as f64 - n as f64) / 6.0;
            assert!((got - want).abs() < 1e-12, "{n}");
        }
    }

    #[test]
    fn wedge_helper() {
        // ∫_{a∧b}^b (a − v) dv by quadrature.
        for (a, b) in [(0.3, 1.0), (1.0, 0.3), (-2.0, 0.5), (0.5, 0.5)] {
            let lo = f64::min(a, b);
            let m = 100_000;
            let h = (b - lo) / m as f64;
            let q: f64 = (0..m).map(|i| a - (lo + (i as f64 + 0.5) * h)).sum::<f64>() * h;
            assert!((lower_wedge_integral(a, b) - q).abs() < 1e-9, "{a} {b}");
        }
    }
}
