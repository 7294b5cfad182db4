use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{config, Result};
use crate::spectral::{GridSpec, RealField, SpectralField};
use crate::Scalar;

/// A forcing term as a function of time.
pub type Forcing<T> = Arc<dyn Fn(T) -> RealField<T> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationKind {
    /// `∂t u + u ∂x u + ∂x²u + ∂x⁴u = 0`.
    KuramotoSivashinsky,
    /// `∂t u + u ∂x u + ∂x⁴u = |∂x| g`.
    CapillaryBurgers,
    /// `∂t u + u ∂x u − ε ∂x²u = |∂x| g + |∂x| ξ`.
    ForcedBurgers,
}

/// Which equation to integrate and its forcing.
#[derive(Clone)]
pub struct EquationSpec<T: Scalar> {
    kind: EquationKind,
    viscosity: T,
    forcing_g: Option<Forcing<T>>,
    forcing_xi: Option<Forcing<T>>,
}

impl<T: Scalar> fmt::Debug for EquationSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EquationSpec")
            .field("kind", &self.kind)
            .field("viscosity", &self.viscosity)
            .field("forcing_g", &self.forcing_g.is_some())
            .field("forcing_xi", &self.forcing_xi.is_some())
            .finish()
    }
}

impl<T: Scalar> EquationSpec<T> {
    pub fn kuramoto_sivashinsky() -> Self {
        Self {
            kind: EquationKind::KuramotoSivashinsky,
            viscosity: T::zero(),
            forcing_g: None,
            forcing_xi: None,
        }
    }

    pub fn capillary_burgers(g: Option<Forcing<T>>) -> Self {
        Self {
            kind: EquationKind::CapillaryBurgers,
            viscosity: T::zero(),
            forcing_g: g,
            forcing_xi: None,
        }
    }

    pub fn forced_burgers(
        viscosity: T,
        g: Option<Forcing<T>>,
        xi: Option<Forcing<T>>,
    ) -> Result<Self> {
        if !(viscosity >= T::zero()) || !viscosity.is_finite() {
            return Err(config(format!("viscosity must be ≥ 0, got {viscosity}")));
        }
        Ok(Self {
            kind: EquationKind::ForcedBurgers,
            viscosity,
            forcing_g: g,
            forcing_xi: xi,
        })
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn viscosity(&self) -> T {
        self.viscosity
    }

    pub fn is_forced(&self) -> bool {
        self.forcing_g.is_some() || self.forcing_xi.is_some()
    }

    /// Linear growth rate of a mode with wavenumber `xi`.
    pub fn symbol(&self, xi: T) -> T {
        let xi2 = xi * xi;
        match self.kind {
            EquationKind::KuramotoSivashinsky => xi2 - xi2 * xi2,
            EquationKind::CapillaryBurgers => -(xi2 * xi2),
            EquationKind::ForcedBurgers => -self.viscosity * xi2,
        }
    }

    /// `|∂x|(g + ξ)` at time `t` in mode space, or `None` when unforced.
    pub fn source(&self, t: T, grid: &GridSpec<T>) -> Option<SpectralField<T>> {
        let mut acc: Option<Vec<Complex<T>>> = None;
        for f in [&self.forcing_g, &self.forcing_xi].into_iter().flatten() {
            let field = f(t);
            debug_assert!(field.grid() == grid, "forcing lives on the run grid");
            let spec = field.spectrum();
            match acc.as_mut() {
                None => acc = Some(spec.modes().to_vec()),
                Some(a) => {
                    for (x, y) in a.iter_mut().zip(spec.modes()) {
                        *x = *x + *y;
                    }
                }
            }
        }
        let modes = acc?;
        let summed = SpectralField::new(grid.clone(), modes).expect("grid sized forcing");
        Some(summed.map_modes(|_, xi| Complex::new(xi.abs(), T::zero())))
    }
}

/// Per-mode linear multipliers in FFT order.
pub fn linear_symbol<T: Scalar>(spec: &EquationSpec<T>, grid: &GridSpec<T>) -> Vec<Complex<T>> {
    (0..grid.n())
        .map(|i| Complex::new(spec.symbol(grid.wavenumber(i)), T::zero()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_symbol_values() {
        let ks = EquationSpec::<f64>::kuramoto_sivashinsky();
        assert_eq!(ks.symbol(1.0), 0.0);
        assert!((ks.symbol(0.5f64.sqrt()) - 0.25).abs() < 1e-15);
        assert_eq!(ks.symbol(2.0), -12.0);
    }

    #[test]
    fn burgers_symbols() {
        let cap = EquationSpec::<f64>::capillary_burgers(None);
        assert_eq!(cap.symbol(2.0), -16.0);
        let fb = EquationSpec::<f64>::forced_burgers(0.1, None, None).unwrap();
        assert!((fb.symbol(3.0) + 0.9).abs() < 1e-15);
        assert!(EquationSpec::<f64>::forced_burgers(-1.0, None, None).is_err());
    }

    #[test]
    fn symbol_vector_follows_fft_order() {
        let g = GridSpec::<f64>::new(2.0 * std::f64::consts::PI, 16).unwrap();
        let s = linear_symbol(&EquationSpec::kuramoto_sivashinsky(), &g);
        assert_eq!(s[1].re, 0.0);
        assert_eq!(s[2].re, -12.0);
        assert_eq!(s[15].re, 0.0);
    }
}
