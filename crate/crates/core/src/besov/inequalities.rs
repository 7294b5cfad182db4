use crate::error::Result;
use crate::spectral::RealField;
use crate::Scalar;

/// Oversampling used to approximate `sup |u|` between collocation points.
const SUP_OVERSAMPLE: usize = 8;

/// Left and right sides of an inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack() >= -tol
    }
}

/// `sup|u| ≤ √2 (∫u²)^{1/4} (∫(∂x u)²)^{1/4}` for zero-mean `u`, with the
/// supremum taken over the trigonometric interpolant on an 8× finer grid.
pub fn agmon_check<T: Scalar>(u: &RealField<T>) -> Result<Inequality> {
    let fine = u.resample(u.grid().n() * SUP_OVERSAMPLE)?;
    let lhs = fine.max_abs().as_f64();
    let e0 = u.energy().as_f64();
    let e1 = u.derivative(1).energy().as_f64();
    Ok(Inequality {
        lhs,
        rhs: 2f64.sqrt() * e0.powf(0.25) * e1.powf(0.25),
    })
}

/// `∫(∂x u)² ≤ (∫u²)^{1/2} (∫(∂x² u)²)^{1/2}`, evaluated mode by mode.
pub fn sobolev_check<T: Scalar>(u: &RealField<T>) -> Inequality {
    let s = u.spectrum();
    let grid = u.grid();
    let (mut e0, mut e1, mut e2) = (0.0, 0.0, 0.0);
    for (i, c) in s.modes().iter().enumerate() {
        let a = c.norm_sqr().as_f64();
        let xi2 = grid.wavenumber(i).as_f64().powi(2);
        e0 += a;
        e1 += xi2 * a;
        e2 += xi2 * xi2 * a;
    }
    let l = grid.length().as_f64();
    Inequality {
        lhs: l * e1,
        rhs: l * (e0 * e2).sqrt(),
    }
}
