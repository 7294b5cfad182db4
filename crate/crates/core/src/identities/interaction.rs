use super::exact::spectra64;
use super::khm::time_weights;
use super::report::{IdentityReport, Resolution};
use crate::error::{domain, structure, Result};
use crate::spectral::{SpectralField, Trajectory};
use crate::sum::NeumaierSum;
use crate::Scalar;

/// Two balance laws `∂t A + ∂x B = C` and `∂t D + ∂x E = F` sampled on one
/// grid and time axis. `C` and `F` are usually computed as residuals.
#[derive(Debug, Clone)]
pub struct InteractionFields<T: Scalar> {
    pub a: Trajectory<T>,
    pub b: Trajectory<T>,
    pub c: Trajectory<T>,
    pub d: Trajectory<T>,
    pub e: Trajectory<T>,
    pub f: Trajectory<T>,
}

impl<T: Scalar> InteractionFields<T> {
    fn check(&self) -> Result<()> {
        let all = [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f];
        for t in &all[1..] {
            if t.grid() != self.a.grid() || t.len() != self.a.len() || t.dt_rec() != self.a.dt_rec() {
                return Err(structure("interaction fields must share grid and time axis"));
            }
        }
        for (name, t) in [("A", &self.a), ("D", &self.d)] {
            for (i, fr) in t.frames().iter().enumerate() {
                let scale = fr.max_abs().as_f64().max(1.0);
                if fr.mean().as_f64().abs() > 1e-10 * scale {
                    return Err(domain(format!("{name} has nonzero spatial mean at frame {i}")));
                }
            }
        }
        Ok(())
    }
}

/// `∫_0^L a(x) b(x) dx` from the Fourier coefficients (exact for band-limited fields).
fn pairing(a: &SpectralField<f64>, b: &SpectralField<f64>) -> f64 {
    let mut acc = NeumaierSum::new();
    for (x, y) in a.modes().iter().zip(b.modes()) {
        acc.add((x * y.conj()).re);
    }
    acc.value() * a.grid().length()
}

/// `∫_0^L a(x) (∫_0^x f(y) dy) dx`, exact for band-limited `a`, `f`.
///
/// With `f = f̂_0 + Σ f̂_m e^{iξ_m y}`, the inner integral is
/// `f̂_0 x + Σ f̂_m (e^{iξ_m x} − 1)/(iξ_m)`; the ramp `x` pairs with `a`
/// through `∫_0^L x e^{iξx} dx = L/(iξ)`.
pub(crate) fn cumulative_pairing(a: &SpectralField<f64>, f: &SpectralField<f64>) -> f64 {
    let g = a.grid();
    let l = g.length();
    let (am, fm) = (a.modes(), f.modes());
    let mut acc = NeumaierSum::new();
    // Ramp part: f̂_0 ∫ x a(x) dx.
    let mut ramp = NeumaierSum::new();
    ramp.add(am[0].re * l * l / 2.0);
    // Periodic part minus the constant −Σ f̂_m/(iξ_m), paired with a.
    let mut constant = num_complex::Complex::new(0.0, 0.0);
    for i in 0..g.n() {
        let xi = g.wavenumber(i);
        if xi == 0.0 || i == g.nyquist_index() {
            continue;
        }
        let i_xi = num_complex::Complex::new(0.0, xi);
        // a(x) conj pairs: ∫ a(x) e^{iξx} dx = L â_{−m}.
        let a_neg = am[(g.n() - i) % g.n()];
        ramp.add((am[i] * l / i_xi).re);
        acc.add((fm[i] / i_xi * a_neg).re * l);
        constant += fm[i] / i_xi;
    }
    acc.add(-(constant.re) * am[0].re * l);
    acc.add(fm[0].re * ramp.value());
    acc.value()
}

/// `∬(AE − BD) = ∬ A ∫_0^x F + ∬ C ∫_0^x D − [∫ A ∫_0^x D]_0^T`.
///
/// Space integrals of products and cumulative integrals are evaluated from
/// Fourier coefficients; time integrals use Simpson's rule over frames.
pub fn interaction_identity_residual<T: Scalar>(fields: &InteractionFields<T>) -> Result<IdentityReport> {
    fields.check()?;
    let [a, b, c, d, e, f] = [&fields.a, &fields.b, &fields.c, &fields.d, &fields.e, &fields.f].map(|t| spectra64(t));
    let (a, b, c, d, e, f) = (a?, b?, c?, d?, e?, f?);
    let n = a.len();
    let w = time_weights(n, fields.a.dt_rec().as_f64());
    let mut lhs = NeumaierSum::new();
    let mut af = NeumaierSum::new();
    let mut cd = NeumaierSum::new();
    for i in 0..n {
        lhs.add(w[i] * (pairing(&a[i], &e[i]) - pairing(&b[i], &d[i])));
        af.add(w[i] * cumulative_pairing(&a[i], &f[i]));
        cd.add(w[i] * cumulative_pairing(&c[i], &d[i]));
    }
    let bracket = cumulative_pairing(&a[n - 1], &d[n - 1]) - cumulative_pairing(&a[0], &d[0]);
    let (lhs, af, cd) = (lhs.value(), af.value(), cd.value());
    let rhs = af + cd - bracket;
    Ok(IdentityReport::new(
        "interaction",
        vec![("lhs", lhs), ("a_cum_f", af), ("c_cum_d", cd), ("bracket", bracket)],
        lhs - rhs,
        Resolution {
            n: fields.a.grid().n(),
            dt: Some(fields.a.dt_rec().as_f64()),
            ..Default::default()
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{GridSpec, RealField};
    use std::f64::consts::PI;

    #[test]
    fn cumulative_pairing_matches_closed_form() {
        let l = 4.0;
        let g = GridSpec::<f64>::new(l, 32).unwrap();
        let k = 2.0 * PI / l;
        // a = sin(kx), f = 1 + cos(kx): ∫_0^x f = x + sin(kx)/k.
        let a = RealField::from_fn(&g, |x| (k * x).sin()).spectrum();
        let f = RealField::from_fn(&g, |x| 1.0 + (k * x).cos()).spectrum();
        // ∫ sin(kx)(x + sin(kx)/k) dx = −L/k + L/(2k).
        let want = -l / k + l / (2.0 * k);
        let got = cumulative_pairing(&a, &f);
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
    }
}
