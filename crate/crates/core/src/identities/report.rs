use std::fmt;

/// Discretization parameters an identity was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Resolution {
    pub n: usize,
    pub dt: Option<f64>,
    pub dh: Option<f64>,
    pub dv: Option<f64>,
    /// Quadrature nodes in the auxiliary variable (offsets, `Δ`, test functions).
    pub m: Option<usize>,
}

/// Residual of one identity with the magnitudes of its terms.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: &'static str,
    /// Each term with its largest magnitude over the evaluation set.
    pub terms: Vec<(&'static str, f64)>,
    pub residual_abs: f64,
    /// `residual_abs` over the largest term; `residual_abs` itself when every term is zero.
    pub residual_rel: f64,
    pub resolution: Resolution,
}

impl IdentityReport {
    pub fn new(name: &'static str, terms: Vec<(&'static str, f64)>, residual_abs: f64, resolution: Resolution) -> Self {
        let scale = terms.iter().fold(0.0f64, |m, (_, v)| m.max(v.abs()));
        let residual_abs = residual_abs.abs();
        let residual_rel = if scale > 0.0 { residual_abs / scale } else { residual_abs };
        Self {
            name,
            terms,
            residual_abs,
            residual_rel,
            resolution,
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    pub fn within(&self, tol: f64) -> bool {
        self.residual_rel <= tol
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: residual {:.3e} (rel {:.3e})",
            self.name, self.residual_abs, self.residual_rel
        )?;
        for (n, v) in &self.terms {
            write!(f, ", {n} = {v:.6e}")?;
        }
        Ok(())
    }
}

/// Largest per-frame residual and the largest magnitude of each term.
pub(crate) struct FrameResiduals {
    names: Vec<&'static str>,
    maxima: Vec<f64>,
    worst: f64,
}

impl FrameResiduals {
    pub fn new(names: &[&'static str]) -> Self {
        Self {
            names: names.to_vec(),
            maxima: vec![0.0; names.len()],
            worst: 0.0,
        }
    }

    pub fn push(&mut self, terms: &[f64], residual: f64) {
        for (m, t) in self.maxima.iter_mut().zip(terms) {
            *m = m.max(t.abs());
        }
        self.worst = self.worst.max(residual.abs());
    }

    pub fn finish(self, name: &'static str, resolution: Resolution) -> IdentityReport {
        IdentityReport::new(name, self.names.into_iter().zip(self.maxima).collect(), self.worst, resolution)
    }
}
