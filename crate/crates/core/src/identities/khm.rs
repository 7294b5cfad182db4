use std::sync::Arc;

use rayon::prelude::*;

use super::exact::{plain_integral, product, signed_integral, spectra64, Fine, SignPattern};
use super::report::{FrameResiduals, IdentityReport, Resolution};
use crate::error::{structure, Result};
use crate::special::{gauss_legendre_on, simpson_weights};
use crate::spectral::{SpectralField, Trajectory};
use crate::sum::NeumaierSum;
use crate::Scalar;

/// Discretization of the `h`-derivative and of the `x` integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KhmOptions {
    /// Step `δh` of the centered difference in `h`.
    pub dh: f64,
    /// Fine-grid factor for the products; 4 resolves cubic products exactly.
    pub oversample: usize,
}

impl KhmOptions {
    /// `δh = 1e-4 L`.
    pub fn for_length(length: f64) -> Self {
        Self {
            dh: 1e-4 * length,
            oversample: 4,
        }
    }
}

pub(crate) fn check_pair<T: Scalar>(u: &Trajectory<T>, eta: &Trajectory<T>, min_frames: usize) -> Result<()> {
    if u.grid() != eta.grid() {
        return Err(structure("u and η trajectories live on different grids"));
    }
    if u.len() != eta.len() || u.dt_rec() != eta.dt_rec() {
        return Err(structure("u and η trajectories have different time axes"));
    }
    if u.len() < min_frames {
        return Err(structure(format!("need at least {min_frames} frames, got {}", u.len())));
    }
    Ok(())
}

/// `D^h` of a frame on the fine grid, with its sign pattern.
struct Increment {
    fine: crate::spectral::RealField<f64>,
    pattern: SignPattern,
}

impl Increment {
    fn new(s: &SpectralField<f64>, h: f64, fine: &Fine) -> Self {
        let d = s.finite_diff(h);
        Self {
            fine: fine.real(&d),
            pattern: SignPattern::of(&d, fine),
        }
    }

    /// `∫ sign(D^h u) (D^h u)^k`: `|f| f` for `k = 2`, `|f|³` for `k = 3`.
    fn abs_moment(&self, k: usize) -> f64 {
        let parts: Vec<&_> = std::iter::repeat_n(&self.fine, k).collect();
        signed_integral(&self.pattern, &product(&parts))
    }

    fn abs_weighted(&self, other: &crate::spectral::RealField<f64>) -> f64 {
        signed_integral(&self.pattern, &product(&[&self.fine, other]))
    }
}

/// Which form of the identity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Form {
    Modified,
    Signed,
}

struct FrameTerms {
    energy: f64,
    flux_plus: f64,
    flux_minus: f64,
    source: f64,
}

fn frame_terms(u: &SpectralField<f64>, eta: &SpectralField<f64>, h: f64, opts: &KhmOptions, form: Form) -> FrameTerms {
    let fine = Fine::new(u.grid().n(), opts.oversample);
    let deta = fine.real(&eta.finite_diff(h));
    match form {
        Form::Modified => {
            let d = Increment::new(u, h, &fine);
            let plus = Increment::new(u, h + opts.dh, &fine);
            let minus = Increment::new(u, h - opts.dh, &fine);
            FrameTerms {
                energy: 0.5 * d.abs_moment(2),
                flux_plus: plus.abs_moment(3) / 6.0,
                flux_minus: minus.abs_moment(3) / 6.0,
                source: d.abs_weighted(&deta),
            }
        }
        Form::Signed => {
            let inc = |h: f64| fine.real(&u.finite_diff(h));
            let d = inc(h);
            let (p, m) = (inc(h + opts.dh), inc(h - opts.dh));
            FrameTerms {
                energy: 0.5 * plain_integral(&product(&[&d, &d])),
                flux_plus: plain_integral(&product(&[&p, &p, &p])) / 6.0,
                flux_minus: plain_integral(&product(&[&m, &m, &m])) / 6.0,
                source: plain_integral(&product(&[&deta, &d])),
            }
        }
    }
}

fn khm_residual<T: Scalar>(
    u: &Trajectory<T>,
    eta: &Trajectory<T>,
    h: f64,
    opts: &KhmOptions,
    form: Form,
) -> Result<IdentityReport> {
    check_pair(u, eta, 3)?;
    let us = spectra64(u)?;
    let es = spectra64(eta)?;
    let terms: Vec<FrameTerms> = us
        .par_iter()
        .zip(&es)
        .map(|(a, b)| frame_terms(a, b, h, opts, form))
        .collect();
    let dt = u.dt_rec().as_f64();
    let mut acc = FrameResiduals::new(&["time_derivative", "h_derivative", "source"]);
    for i in 1..terms.len() - 1 {
        let d_t = (terms[i + 1].energy - terms[i - 1].energy) / (2.0 * dt);
        let d_h = (terms[i].flux_plus - terms[i].flux_minus) / (2.0 * opts.dh);
        let src = terms[i].source;
        acc.push(&[d_t, d_h, src], d_t + d_h - src);
    }
    let name = match form {
        Form::Modified => "khm-modified",
        Form::Signed => "khm-signed",
    };
    Ok(acc.finish(
        name,
        Resolution {
            n: u.grid().n(),
            dt: Some(dt),
            dh: Some(opts.dh),
            ..Default::default()
        },
    ))
}

/// `∂t(½∫|D^h u| D^h u) + ∂h (1/6)∫|D^h u|³ = ∫ D^h η |D^h u|` at every
/// interior frame.
///
/// `∂t` and `∂h` are centered differences (frames and `h ± δh`); the `x`
/// integrals are exact for band-limited frames: the integrands are
/// `sign(D^h u)` times polynomials in the fields, integrated between the
/// zeros of `D^h u`.
pub fn khm_modified_residual<T: Scalar>(
    u: &Trajectory<T>,
    eta: &Trajectory<T>,
    h: f64,
    opts: &KhmOptions,
) -> Result<IdentityReport> {
    khm_residual(u, eta, h, opts, Form::Modified)
}

/// The classical form `∂t(½∫(D^h u)²) + ∂h (1/6)∫(D^h u)³ = ∫ D^h η D^h u`.
pub fn khm_signed_residual<T: Scalar>(
    u: &Trajectory<T>,
    eta: &Trajectory<T>,
    h: f64,
    opts: &KhmOptions,
) -> Result<IdentityReport> {
    khm_residual(u, eta, h, opts, Form::Signed)
}

/// Max over `x` of
/// `½∂t(|D^h u| D^h u) + (1/6)∂h|D^h u|³ + ½∂x(u|D^h u|D^h u + ⅓|D^h u|³) − D^h η |D^h u|`
/// at interior frame `i`.
///
/// `∂t` is the centered difference over frames `i ± 1`; the `h` and `x`
/// derivatives are taken analytically from spectral derivatives of `u`.
pub fn khm_pointwise_residual<T: Scalar>(u: &Trajectory<T>, eta: &Trajectory<T>, i: usize, h: f64) -> Result<f64> {
    check_pair(u, eta, 3)?;
    if i == 0 || i + 1 >= u.len() {
        return Err(structure(format!("frame {i} has no neighbours on both sides")));
    }
    let us = spectra64(&u.window(i - 1..i + 2)?)?;
    let es = spectra64(&eta.window(i..i + 1)?)?;
    let dt = u.dt_rec().as_f64();
    let q = |s: &SpectralField<f64>| {
        let d = s.finite_diff(h).to_real();
        d.map(|v| v.abs() * v)
    };
    let (q0, q2) = (q(&us[0]), q(&us[2]));
    let s = &us[1];
    let uu = s.to_real();
    let ux = s.derivative(1).to_real();
    let d = s.finite_diff(h).to_real();
    let dx_d = s.finite_diff(h).derivative(1).to_real();
    let ux_h = s.derivative(1).shift(h).to_real();
    let deta = es[0].finite_diff(h).to_real();
    let mut worst = 0.0f64;
    for j in 0..uu.samples().len() {
        let f = d.samples()[j];
        let af = f.abs();
        let dt_term = 0.5 * (q2.samples()[j] - q0.samples()[j]) / (2.0 * dt);
        // ∂h |f|³ = 3|f| f ∂x u(x + h).
        let dh_term = 0.5 * af * f * ux_h.samples()[j];
        // ∂x(u|f|f + |f|³/3) = u_x|f|f + 2u|f|f_x + |f| f f_x.
        let fx = dx_d.samples()[j];
        let flux = 0.5 * (ux.samples()[j] * af * f + 2.0 * uu.samples()[j] * af * fx + af * f * fx);
        let r = dt_term + dh_term + flux - deta.samples()[j] * af;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Options for the integrated identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratedOptions {
    /// Gauss-Legendre panels on `[0, h]`, 8 nodes each.
    pub panels: usize,
    pub oversample: usize,
}

impl Default for IntegratedOptions {
    fn default() -> Self {
        Self {
            panels: 8,
            oversample: 4,
        }
    }
}

/// The three terms of the integrated identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratedTerms {
    /// `[½∫_0^h∫|D^Δu|D^Δu dx dΔ]_0^T`.
    pub boundary: f64,
    /// `(1/6)∫_0^T∫|D^h u|³`.
    pub cubic: f64,
    /// `∫_0^T∫∫_0^h D^Δη |D^Δu|`.
    pub source: f64,
}

/// Time weights over frames: Simpson when the frame count is odd.
pub(crate) fn time_weights(frames: usize, dt: f64) -> Vec<f64> {
    simpson_weights(frames, dt)
}

pub(crate) fn delta_nodes(h: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for p in 0..panels {
        let a = h * p as f64 / panels as f64;
        let b = h * (p + 1) as f64 / panels as f64;
        let (x, w) = gauss_legendre_on(8, a, b);
        xs.extend(x);
        ws.extend(w);
    }
    (xs, ws)
}

pub fn integrated_terms<T: Scalar>(
    u: &Trajectory<T>,
    eta: &Trajectory<T>,
    h: f64,
    opts: &IntegratedOptions,
) -> Result<IntegratedTerms> {
    check_pair(u, eta, 2)?;
    let us = spectra64(u)?;
    let es = spectra64(eta)?;
    let fine = Fine::new(u.grid().n(), opts.oversample);
    let (nodes, weights) = delta_nodes(h, opts.panels);
    let half_energy = |s: &SpectralField<f64>| -> f64 {
        let mut acc = NeumaierSum::new();
        for (&d, &w) in nodes.iter().zip(&weights) {
            acc.add(w * 0.5 * Increment::new(s, d, &fine).abs_moment(2));
        }
        acc.value()
    };
    let boundary = half_energy(&us[us.len() - 1]) - half_energy(&us[0]);
    let per_frame: Vec<(f64, f64)> = us
        .par_iter()
        .zip(&es)
        .map(|(s, e)| {
            let cubic = Increment::new(s, h, &fine).abs_moment(3) / 6.0;
            let mut src = NeumaierSum::new();
            for (&d, &w) in nodes.iter().zip(&weights) {
                let inc = Increment::new(s, d, &fine);
                src.add(w * inc.abs_weighted(&fine.real(&e.finite_diff(d))));
            }
            (cubic, src.value())
        })
        .collect();
    let tw = time_weights(us.len(), u.dt_rec().as_f64());
    let mut cubic = NeumaierSum::new();
    let mut source = NeumaierSum::new();
    for ((c, s), w) in per_frame.iter().zip(&tw) {
        cubic.add(w * c);
        source.add(w * s);
    }
    Ok(IntegratedTerms {
        boundary,
        cubic: cubic.value(),
        source: source.value(),
    })
}

/// `[½∫_0^h∫|D^Δu|D^Δu]_0^T + (1/6)∫_0^T∫|D^h u|³ = ∫_0^T∫∫_0^h D^Δη|D^Δu|`
/// over the whole trajectory, with Gauss-Legendre panels in `Δ` and
/// Simpson's rule in `t`.
pub fn khm_integrated_residual<T: Scalar>(
    u: &Trajectory<T>,
    eta: &Trajectory<T>,
    h: f64,
    opts: &IntegratedOptions,
) -> Result<IdentityReport> {
    let t = integrated_terms(u, eta, h, opts)?;
    Ok(IdentityReport::new(
        "khm-integrated",
        vec![("boundary", t.boundary), ("cubic", t.cubic), ("source", t.source)],
        t.boundary + t.cubic - t.source,
        Resolution {
            n: u.grid().n(),
            dt: Some(u.dt_rec().as_f64()),
            m: Some(opts.panels * 8),
            ..Default::default()
        },
    ))
}

/// A flux `a(u)` with an antiderivative `A`, `A' = a`.
#[derive(Clone)]
pub struct Flux {
    a: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    big_a: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Fine-grid factor resolving the products built from `a` and `A`.
    oversample: usize,
}

impl std::fmt::Debug for Flux {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Flux").field("oversample", &self.oversample).finish()
    }
}

impl Flux {
    pub fn new(
        a: impl Fn(f64) -> f64 + Send + Sync + 'static,
        antiderivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
        oversample: usize,
    ) -> Self {
        Self {
            a: Arc::new(a),
            big_a: Arc::new(antiderivative),
            oversample: oversample.max(1),
        }
    }

    /// `A(u) = ∫_0^u a` by 16-point Gauss-Legendre quadrature.
    pub fn numeric(a: impl Fn(f64) -> f64 + Send + Sync + 'static, oversample: usize) -> Self {
        let a = Arc::new(a);
        let inner = a.clone();
        let big_a = move |u: f64| {
            let (x, w) = gauss_legendre_on(16, 0.0, u);
            x.iter().zip(&w).map(|(&v, &wt)| wt * inner(v)).sum::<f64>()
        };
        Self {
            a,
            big_a: Arc::new(big_a),
            oversample: oversample.max(1),
        }
    }

    /// `a(u) = u²/2`.
    pub fn burgers() -> Self {
        Self::new(|u| 0.5 * u * u, |u| u * u * u / 6.0, 4)
    }

    /// `a(u) = u^k / k`, `A(u) = u^{k+1} / (k (k+1))`.
    pub fn power(k: i32) -> Self {
        let kf = k as f64;
        let os = (k as usize + 2).next_power_of_two();
        Self::new(
            move |u| u.powi(k) / kf,
            move |u| u.powi(k + 1) / (kf * (kf + 1.0)),
            os,
        )
    }

    /// `a(u) = c u`.
    pub fn linear(c: f64) -> Self {
        Self::new(move |u| c * u, move |u| 0.5 * c * u * u, 4)
    }

    pub fn a(&self, u: f64) -> f64 {
        (self.a)(u)
    }

    pub fn antiderivative(&self, u: f64) -> f64 {
        (self.big_a)(u)
    }
}

/// `∫ |D^h u|(a(u) + a(u^h)) − 2|A(u^h) − A(u)| dx`, the flux term of the
/// conservation-law form.
pub fn conservation_flux_term(u: &SpectralField<f64>, flux: &Flux, h: f64) -> f64 {
    let fine = Fine::new(u.grid().n(), flux.oversample);
    let uf = fine.real(u);
    let uh = fine.real(&u.shift(h));
    let d = Increment::new(u, h, &fine);
    let a_sum = uf.zip_with(&uh, |x, y| flux.a(x) + flux.a(y)).expect("same grid");
    let first = d.abs_weighted(&a_sum);
    let jump = uh.zip_with(&uf, |y, x| flux.antiderivative(y) - flux.antiderivative(x)).expect("same grid");
    let js = jump.spectrum();
    let pattern = SignPattern::of(&js, &Fine::new(js.grid().n(), 1));
    first - 2.0 * signed_integral(&pattern, &jump)
}

/// `∂t(½∫|D^h u|D^h u) + ∂h ∫|D^h u|(a(u)+a(u^h)) − 2|A(u^h)−A(u)| = ∫D^hη|D^h u|`
/// for `∂t u + ∂x a(u) = η`.
pub fn conservation_khm_residual<T: Scalar>(
    u: &Trajectory<T>,
    eta: &Trajectory<T>,
    flux: &Flux,
    h: f64,
    opts: &KhmOptions,
) -> Result<IdentityReport> {
    check_pair(u, eta, 3)?;
    let us = spectra64(u)?;
    let es = spectra64(eta)?;
    let rows: Vec<(f64, f64, f64, f64)> = us
        .par_iter()
        .zip(&es)
        .map(|(s, e)| {
            let fine = Fine::new(s.grid().n(), opts.oversample.max(flux.oversample));
            let d = Increment::new(s, h, &fine);
            let energy = 0.5 * d.abs_moment(2);
            let src = d.abs_weighted(&fine.real(&e.finite_diff(h)));
            let fp = conservation_flux_term(s, flux, h + opts.dh);
            let fm = conservation_flux_term(s, flux, h - opts.dh);
            (energy, fp, fm, src)
        })
        .collect();
    let dt = u.dt_rec().as_f64();
    let mut acc = FrameResiduals::new(&["time_derivative", "h_derivative", "source"]);
    for i in 1..rows.len() - 1 {
        let d_t = (rows[i + 1].0 - rows[i - 1].0) / (2.0 * dt);
        let d_h = (rows[i].1 - rows[i].2) / (2.0 * opts.dh);
        acc.push(&[d_t, d_h, rows[i].3], d_t + d_h - rows[i].3);
    }
    Ok(acc.finish(
        "conservation-khm",
        Resolution {
            n: u.grid().n(),
            dt: Some(dt),
            dh: Some(opts.dh),
            ..Default::default()
        },
    ))
}
