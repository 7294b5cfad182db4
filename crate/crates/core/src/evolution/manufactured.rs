use std::sync::Arc;

use super::equation::{EquationKind, EquationSpec, Forcing};
use crate::error::{config, Result};
use crate::spectral::{GridSpec, RealField, Trajectory};
use crate::Scalar;

/// A closed-form space-time field used to manufacture forcings.
pub trait ManufacturedSolution<T: Scalar>: Send + Sync {
    fn value(&self, t: T, x: T) -> T;
    fn time_derivative(&self, t: T, x: T) -> T;

    fn field(&self, grid: &GridSpec<T>, t: T) -> RealField<T> {
        RealField::from_fn(grid, |x| self.value(t, x))
    }
}

/// `a · sin(2π m x / L) · cos(ω t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandingWave<T> {
    pub amplitude: T,
    pub mode: u32,
    pub length: T,
    pub omega: T,
}

impl<T: Scalar> StandingWave<T> {
    /// The default test field `0.1 sin(2πx/L) cos t`.
    pub fn default_on(length: T) -> Self {
        Self {
            amplitude: T::lit(0.1),
            mode: 1,
            length,
            omega: T::one(),
        }
    }

    fn k(&self) -> T {
        T::TAU() * T::from_u32(self.mode).unwrap() / self.length
    }
}

impl<T: Scalar> ManufacturedSolution<T> for StandingWave<T> {
    fn value(&self, t: T, x: T) -> T {
        self.amplitude * (self.k() * x).sin() * (self.omega * t).cos()
    }

    fn time_derivative(&self, t: T, x: T) -> T {
        -self.amplitude * self.omega * (self.k() * x).sin() * (self.omega * t).sin()
    }
}

/// Builds a solution from two closures.
pub struct FnSolution<F, G> {
    pub value: F,
    pub time_derivative: G,
}

impl<T, F, G> ManufacturedSolution<T> for FnSolution<F, G>
where
    T: Scalar,
    F: Fn(T, T) -> T + Send + Sync,
    G: Fn(T, T) -> T + Send + Sync,
{
    fn value(&self, t: T, x: T) -> T {
        (self.value)(t, x)
    }

    fn time_derivative(&self, t: T, x: T) -> T {
        (self.time_derivative)(t, x)
    }
}

/// `η(t) = ∂t u* + u* ∂x u* − λ(D) u*`, where `λ` is the linear symbol of `spec`
/// (so `+∂x⁴u*` for capillary Burgers, `−ε∂x²u*` for forced Burgers).
/// The spatial terms are evaluated spectrally.
pub fn manufactured_forcing<T: Scalar>(
    u_star: Arc<dyn ManufacturedSolution<T>>,
    spec: &EquationSpec<T>,
    grid: &GridSpec<T>,
) -> Forcing<T> {
    let grid = grid.clone();
    let lin = spec.clone();
    Arc::new(move |t: T| {
        let u = u_star.field(&grid, t);
        let dt = RealField::from_fn(&grid, |x| u_star.time_derivative(t, x));
        let flux = u.map(|v| v * v * T::lit(0.5)).derivative(1);
        let linear = u
            .spectrum()
            .map_modes(|_, xi| num_complex::Complex::new(lin.symbol(xi), T::zero()))
            .to_real();
        let samples = dt
            .samples()
            .iter()
            .zip(flux.samples())
            .zip(linear.samples())
            .map(|((&a, &b), &c)| a + b - c)
            .collect();
        RealField::new(grid.clone(), samples).expect("finite forcing")
    })
}

/// A forced-Burgers (or capillary) equation whose exact solution is `u_star`.
///
/// The forcing enters through `ξ = |∂x|^{-1} η` (capillary: `g`), so `u_star`
/// must have zero spatial mean.
pub fn manufactured_equation<T: Scalar>(
    kind: EquationKind,
    viscosity: T,
    u_star: Arc<dyn ManufacturedSolution<T>>,
    grid: &GridSpec<T>,
) -> Result<EquationSpec<T>> {
    let base = match kind {
        EquationKind::KuramotoSivashinsky => {
            return Err(config("the Kuramoto-Sivashinsky equation carries no forcing"))
        }
        EquationKind::CapillaryBurgers => EquationSpec::capillary_burgers(None),
        EquationKind::ForcedBurgers => EquationSpec::forced_burgers(viscosity, None, None)?,
    };
    let eta = manufactured_forcing(u_star, &base, grid);
    let lifted: Forcing<T> = Arc::new(move |t: T| {
        let e = eta(t);
        e.project_zero_mean()
            .halfwave(-T::one())
            .expect("zero-mean forcing")
    });
    Ok(match kind {
        EquationKind::CapillaryBurgers => EquationSpec::capillary_burgers(Some(lifted)),
        _ => EquationSpec::forced_burgers(viscosity, None, Some(lifted))?,
    })
}

/// `η = ∂t u + u ∂x u` implied by `spec` along a solution trajectory:
/// `λ(D) u + |∂x|(g + ξ)` evaluated frame by frame.
pub fn effective_forcing<T: Scalar>(
    spec: &EquationSpec<T>,
    traj: &Trajectory<T>,
) -> Result<Trajectory<T>> {
    let grid = traj.grid().clone();
    let frames = traj
        .frames()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut lin = f
                .spectrum()
                .map_modes(|_, xi| num_complex::Complex::new(spec.symbol(xi), T::zero()));
            if let Some(src) = spec.source(traj.time(i), &grid) {
                for (a, b) in lin.modes_mut().iter_mut().zip(src.modes()) {
                    *a = *a + *b;
                }
            }
            lin.to_real()
        })
        .collect();
    Trajectory::new(grid, traj.t0(), traj.dt_rec(), frames)
}

/// Samples `u_star` and its manufactured `η` into a pair of trajectories.
pub fn sample_manufactured<T: Scalar>(
    u_star: Arc<dyn ManufacturedSolution<T>>,
    spec: &EquationSpec<T>,
    grid: &GridSpec<T>,
    t0: T,
    dt_rec: T,
    count: usize,
) -> Result<(Trajectory<T>, Trajectory<T>)> {
    let eta = manufactured_forcing(u_star.clone(), spec, grid);
    let times: Vec<T> = (0..count).map(|i| t0 + T::from_usize_lossy(i) * dt_rec).collect();
    let u = times.iter().map(|&t| u_star.field(grid, t)).collect();
    let e = times.iter().map(|&t| eta(t)).collect();
    Ok((
        Trajectory::new(grid.clone(), t0, dt_rec, u)?,
        Trajectory::new(grid.clone(), t0, dt_rec, e)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn burgers() -> EquationSpec<f64> {
        EquationSpec::forced_burgers(0.0, None, None).unwrap()
    }

    #[test]
    fn zero_solution_has_zero_forcing() {
        let g = GridSpec::new(3.0, 32).unwrap();
        let zero = FnSolution {
            value: |_: f64, _: f64| 0.0,
            time_derivative: |_: f64, _: f64| 0.0,
        };
        let eta = manufactured_forcing(Arc::new(zero), &burgers(), &g);
        assert_eq!(eta(0.7).max_abs(), 0.0);
    }

    #[test]
    fn steady_sine_forcing() {
        let (a, l) = (0.3, 4.0);
        let k = 2.0 * PI / l;
        let g = GridSpec::new(l, 64).unwrap();
        let steady = FnSolution {
            value: move |_: f64, x: f64| a * (k * x).sin(),
            time_derivative: |_: f64, _: f64| 0.0,
        };
        let eta = manufactured_forcing(Arc::new(steady), &burgers(), &g)(1.0);
        let want = RealField::from_fn(&g, |x| a * a * k / 2.0 * (2.0 * k * x).sin());
        let err = eta.sub(&want).unwrap().max_abs();
        assert!(err < 1e-14);
    }

    #[test]
    fn standing_wave_matches_symbolic_forcing() {
        let l = 10.0;
        let k = 2.0 * PI / l;
        let g = GridSpec::new(l, 64).unwrap();
        let w = StandingWave::default_on(l);
        let eta = manufactured_forcing(Arc::new(w), &burgers(), &g);
        for t in [0.0, 0.4, 2.5] {
            let got = eta(t);
            let want = RealField::from_fn(&g, |x| {
                -0.1 * (k * x).sin() * t.sin()
                    + 0.01 * t.cos().powi(2) * k * (k * x).sin() * (k * x).cos()
            });
            assert!(got.sub(&want).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn capillary_forcing_adds_fourth_derivative() {
        let l = 5.0;
        let k = 2.0 * PI / l;
        let g = GridSpec::new(l, 64).unwrap();
        let w = StandingWave::default_on(l);
        let cap = EquationSpec::capillary_burgers(None);
        let diff = manufactured_forcing(Arc::new(w), &cap, &g)(0.3)
            .sub(&manufactured_forcing(Arc::new(w), &burgers(), &g)(0.3))
            .unwrap();
        let want = RealField::from_fn(&g, |x| k.powi(4) * w.value(0.3, x));
        // Roundoff in empty modes is amplified by ξ_max⁴ ≈ 2.6e6.
        assert!(diff.sub(&want).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn ks_cannot_be_manufactured() {
        let g = GridSpec::new(5.0, 32).unwrap();
        let w = StandingWave::default_on(5.0);
        assert!(manufactured_equation(EquationKind::KuramotoSivashinsky, 0.0, Arc::new(w), &g).is_err());
    }
}
