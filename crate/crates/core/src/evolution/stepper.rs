use num_complex::Complex;

use super::equation::{linear_symbol, EquationSpec};
use crate::error::{config, Error, Result};
use crate::spectral::{GridSpec, RealField, SpectralField, Trajectory};
use crate::Scalar;

/// Largest admissible `dt · max|λ|` for the exponential integrator.
pub const MAX_STIFFNESS: f64 = 500.0;

/// `max|u|` above which a run is declared divergent.
pub const BLOWUP_THRESHOLD: f64 = 1e8;

/// Points on the contour used to evaluate the φ-functions.
const CONTOUR_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Fourth-order exponential time differencing (Cox-Matthews, contour-evaluated).
    Etdrk4,
    /// Crank-Nicolson on the linear part, Adams-Bashforth 2 on the rest.
    Imex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig<T> {
    pub scheme: Scheme,
    pub dt: T,
    /// Zero every mode with `|m| ≥ N/3` in the state and in the quadratic term.
    pub dealias: bool,
    pub record_every: usize,
    /// Remove the spatial mean of the initial condition (on by default).
    pub project_mean: bool,
}

impl<T: Scalar> StepperConfig<T> {
    pub fn new(scheme: Scheme, dt: T, record_every: usize) -> Self {
        Self {
            scheme,
            dt,
            dealias: true,
            record_every,
            project_mean: true,
        }
    }

    pub fn etdrk4(dt: T, record_every: usize) -> Self {
        Self::new(Scheme::Etdrk4, dt, record_every)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(config(format!("time step must be > 0, got {}", self.dt)));
        }
        if self.record_every == 0 {
            return Err(config("record_every must be ≥ 1"));
        }
        Ok(())
    }

    pub fn recording_interval(&self) -> T {
        self.dt * T::from_usize_lossy(self.record_every)
    }
}

/// Resolution monitor: how much amplitude sits in the top of the retained band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionDiagnostics<T> {
    /// Max over recorded frames of `max |û_m|` for modes in the top tenth of the band.
    pub tail_amplitude: T,
    /// `tail_amplitude` over the largest `|û_m|` seen at any mode.
    pub tail_ratio: T,
}

#[derive(Debug, Clone)]
pub struct RunResult<T: Scalar> {
    pub trajectory: Trajectory<T>,
    /// `∫u²` per recorded frame.
    pub energy_series: Vec<T>,
    pub diagnostics: ResolutionDiagnostics<T>,
}

/// Highest mode number kept by the 2/3 rule (`|m| < N/3`).
pub fn dealias_cutoff(n: usize) -> i64 {
    let third = n as i64;
    // Largest m with 3m < N.
    (third - 1) / 3
}

struct Rhs<'a, T: Scalar> {
    spec: &'a EquationSpec<T>,
    grid: &'a GridSpec<T>,
    keep: Vec<bool>,
    /// `-iξ/2`, with the Nyquist entry zeroed.
    flux_factor: Vec<Complex<T>>,
}

impl<T: Scalar> Rhs<'_, T> {
    /// Nonlinear plus forcing part: `−∂x(u²/2) + |∂x|(g + ξ)`.
    fn eval(&self, v: &[Complex<T>], t: T) -> Result<Vec<Complex<T>>> {
        let field = SpectralField::new(self.grid.clone(), v.to_vec())?;
        let u = field.to_real();
        let max_abs = u.max_abs();
        if !(max_abs.as_f64() <= BLOWUP_THRESHOLD) {
            return Err(Error::Divergence {
                time: t.as_f64(),
                max_abs: max_abs.as_f64(),
            });
        }
        let sq = u.map(|x| x * x).spectrum();
        let mut out: Vec<Complex<T>> = sq
            .modes()
            .iter()
            .zip(&self.flux_factor)
            .zip(&self.keep)
            .map(|((&w, &f), &k)| if k { w * f } else { Complex::new(T::zero(), T::zero()) })
            .collect();
        if let Some(src) = self.spec.source(t, self.grid) {
            for ((o, s), &k) in out.iter_mut().zip(src.modes()).zip(&self.keep) {
                if k {
                    *o = *o + *s;
                }
            }
        }
        Ok(out)
    }
}

/// φ-function coefficients of ETDRK4 for one step size, per mode.
struct EtdCoefficients<T> {
    e: Vec<Complex<T>>,
    e2: Vec<Complex<T>>,
    q: Vec<Complex<T>>,
    f1: Vec<Complex<T>>,
    f2: Vec<Complex<T>>,
    f3: Vec<Complex<T>>,
}

impl<T: Scalar> EtdCoefficients<T> {
    fn new(symbol: &[Complex<T>], dt: T) -> Self {
        let m = CONTOUR_POINTS;
        let roots: Vec<Complex<f64>> = (0..m)
            .map(|j| {
                let th = std::f64::consts::PI * (2.0 * j as f64 + 1.0) / m as f64;
                Complex::new(th.cos(), th.sin())
            })
            .collect();
        let mut out = Self {
            e: Vec::with_capacity(symbol.len()),
            e2: Vec::with_capacity(symbol.len()),
            q: Vec::with_capacity(symbol.len()),
            f1: Vec::with_capacity(symbol.len()),
            f2: Vec::with_capacity(symbol.len()),
            f3: Vec::with_capacity(symbol.len()),
        };
        let h = dt.as_f64();
        let lift = |x: f64| Complex::new(T::lit(x), T::zero());
        for lam in symbol {
            let c = lam.re.as_f64() * h;
            let (mut q, mut f1, mut f2, mut f3) = (0.0, 0.0, 0.0, 0.0);
            for r0 in &roots {
                let r = Complex::new(c, 0.0) + r0;
                let er = r.exp();
                let r3 = r * r * r;
                q += (((r / 2.0).exp() - 1.0) / r).re;
                f1 += ((-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3).re;
                f2 += ((2.0 + r + er * (r - 2.0)) / r3).re;
                f3 += ((-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3).re;
            }
            let mf = m as f64;
            out.e.push(lift(c.exp()));
            out.e2.push(lift((c / 2.0).exp()));
            out.q.push(lift(h * q / mf));
            out.f1.push(lift(h * f1 / mf));
            out.f2.push(lift(h * f2 / mf));
            out.f3.push(lift(h * f3 / mf));
        }
        out
    }
}

/// Integrates `spec` from `u0` up to `t_end`, recording every `record_every` steps.
///
/// The initial frame is recorded at `t = 0`; the last frame is the final
/// step at or after `t_end`.
pub fn integrate<T: Scalar>(
    spec: &EquationSpec<T>,
    u0: &RealField<T>,
    cfg: &StepperConfig<T>,
    t_end: T,
) -> Result<RunResult<T>> {
    cfg.validate()?;
    if !(t_end > T::zero()) {
        return Err(config(format!("t_end must be > 0, got {t_end}")));
    }
    let grid = u0.grid().clone();
    let n = grid.n();
    let cutoff = if cfg.dealias { dealias_cutoff(n) } else { (n / 2) as i64 };
    let keep: Vec<bool> = (0..n)
        .map(|i| {
            let m = grid.mode_number(i);
            m.abs() <= cutoff && i != grid.nyquist_index()
        })
        .collect();
    let symbol = linear_symbol(spec, &grid);
    if cfg.scheme == Scheme::Etdrk4 {
        let stiff = symbol
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .fold(T::zero(), |m, (s, _)| m.max(s.re.abs()));
        let product = (cfg.dt * stiff).as_f64();
        if product > MAX_STIFFNESS {
            return Err(config(format!(
                "dt·max|λ| = {product:.1} exceeds {MAX_STIFFNESS}; reduce dt"
            )));
        }
    }
    let half = T::lit(0.5);
    let flux_factor: Vec<Complex<T>> = (0..n)
        .map(|i| {
            if i == grid.nyquist_index() {
                Complex::new(T::zero(), T::zero())
            } else {
                Complex::new(T::zero(), -grid.wavenumber(i) * half)
            }
        })
        .collect();
    let rhs = Rhs {
        spec,
        grid: &grid,
        keep: keep.clone(),
        flux_factor,
    };

    let start = if cfg.project_mean { u0.project_zero_mean() } else { u0.clone() };
    let mut v: Vec<Complex<T>> = start.spectrum().modes().to_vec();
    if cfg.dealias {
        for (x, &k) in v.iter_mut().zip(&keep) {
            if !k {
                *x = Complex::new(T::zero(), T::zero());
            }
        }
    }
    let steps = (t_end / cfg.dt).ceil().to_usize().unwrap_or(0).max(1);
    let mut frames = Vec::with_capacity(steps / cfg.record_every + 2);
    let record = |v: &[Complex<T>], frames: &mut Vec<RealField<T>>| -> Result<()> {
        let f = SpectralField::new(grid.clone(), v.to_vec())?.to_real();
        frames.push(f);
        Ok(())
    };
    record(&v, &mut frames)?;

    match cfg.scheme {
        Scheme::Etdrk4 => {
            let co = EtdCoefficients::new(&symbol, cfg.dt);
            let dt_half = cfg.dt * half;
            let two = T::lit(2.0);
            let mut a = vec![Complex::new(T::zero(), T::zero()); n];
            let mut b = a.clone();
            let mut c = a.clone();
            for step in 0..steps {
                let t = T::from_usize_lossy(step) * cfg.dt;
                let nv = rhs.eval(&v, t)?;
                for i in 0..n {
                    a[i] = co.e2[i] * v[i] + co.q[i] * nv[i];
                }
                let na = rhs.eval(&a, t + dt_half)?;
                for i in 0..n {
                    b[i] = co.e2[i] * v[i] + co.q[i] * na[i];
                }
                let nb = rhs.eval(&b, t + dt_half)?;
                for i in 0..n {
                    c[i] = co.e2[i] * a[i] + co.q[i] * (nb[i] * two - nv[i]);
                }
                let nc = rhs.eval(&c, t + cfg.dt)?;
                for i in 0..n {
                    v[i] = co.e[i] * v[i]
                        + nv[i] * co.f1[i]
                        + (na[i] + nb[i]) * co.f2[i] * two
                        + nc[i] * co.f3[i];
                }
                if (step + 1) % cfg.record_every == 0 {
                    record(&v, &mut frames)?;
                }
            }
        }
        Scheme::Imex => {
            let dt = cfg.dt;
            let lhs: Vec<Complex<T>> = symbol.iter().map(|s| Complex::new(T::one(), T::zero()) - *s * dt * half).collect();
            let exp: Vec<Complex<T>> = symbol.iter().map(|s| Complex::new(T::one(), T::zero()) + *s * dt * half).collect();
            let mut prev: Option<Vec<Complex<T>>> = None;
            let (c1, c0) = (T::lit(1.5), T::lit(0.5));
            for step in 0..steps {
                let t = T::from_usize_lossy(step) * dt;
                let nv = rhs.eval(&v, t)?;
                for i in 0..n {
                    let explicit = match &prev {
                        Some(p) => nv[i] * c1 - p[i] * c0,
                        None => nv[i],
                    };
                    v[i] = (exp[i] * v[i] + explicit * dt) / lhs[i];
                }
                prev = Some(nv);
                if (step + 1) % cfg.record_every == 0 {
                    record(&v, &mut frames)?;
                }
            }
        }
    }
    // The last evaluation only checked the penultimate state.
    let last_max = frames.last().map_or(T::zero(), RealField::max_abs);
    if !(last_max.as_f64() <= BLOWUP_THRESHOLD) {
        return Err(Error::Divergence {
            time: (T::from_usize_lossy(steps) * cfg.dt).as_f64(),
            max_abs: last_max.as_f64(),
        });
    }

    let diagnostics = diagnose(&frames, cutoff);
    let energy_series = frames.iter().map(RealField::energy).collect();
    let trajectory = Trajectory::new(grid, T::zero(), cfg.recording_interval(), frames)?;
    Ok(RunResult {
        trajectory,
        energy_series,
        diagnostics,
    })
}

fn diagnose<T: Scalar>(frames: &[RealField<T>], cutoff: i64) -> ResolutionDiagnostics<T> {
    let band_start = cutoff - (cutoff / 10).max(1) + 1;
    let mut tail = T::zero();
    let mut peak = T::zero();
    for f in frames {
        let s = f.spectrum();
        for m in 1..=cutoff {
            let a = s.mode(m).norm();
            peak = peak.max(a);
            if m >= band_start {
                tail = tail.max(a);
            }
        }
    }
    let tail_ratio = if peak > T::zero() { tail / peak } else { T::zero() };
    ResolutionDiagnostics {
        tail_amplitude: tail,
        tail_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_is_strictly_below_a_third() {
        assert_eq!(dealias_cutoff(12), 3);
        assert_eq!(dealias_cutoff(16), 5);
        assert_eq!(dealias_cutoff(1024), 341);
    }

    #[test]
    fn contour_coefficients_match_series_near_zero() {
        // At c → 0: Q = dt/2, f1 = f2·... = dt/6, dt/6·..., reference limits of Cox-Matthews.
        let dt = 0.1;
        let co = EtdCoefficients::<f64>::new(&[Complex::new(0.0, 0.0)], dt);
        assert!((co.q[0].re - dt / 2.0).abs() < 1e-14);
        assert!((co.f1[0].re - dt / 6.0).abs() < 1e-14);
        assert!((co.f2[0].re - dt / 6.0).abs() < 1e-14);
        assert!((co.f3[0].re - dt / 6.0).abs() < 1e-14);
    }

    #[test]
    fn contour_coefficients_match_closed_form_when_stiff() {
        let dt = 0.5;
        let lam = -20.0;
        let co = EtdCoefficients::<f64>::new(&[Complex::new(lam, 0.0)], dt);
        let c: f64 = lam * dt;
        let q = dt * ((c / 2.0).exp() - 1.0) / c;
        let f1 = dt * (-4.0 - c + c.exp() * (4.0 - 3.0 * c + c * c)) / c.powi(3);
        assert!((co.q[0].re - q).abs() < 1e-13);
        assert!((co.f1[0].re - f1).abs() < 1e-13);
    }
}
