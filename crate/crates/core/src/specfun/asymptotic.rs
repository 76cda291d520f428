use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::bessel::{gamma, BesselOrder, NormalizedBessel};
use crate::error::{domain, range, Result};

/// Largest supported number of expansion terms.
pub const N_MAX: usize = 8;

/// Smallest argument at which the truncated expansion is offered.
pub fn asymptotic_switch_point(order: BesselOrder) -> f64 {
    let l = order.value();
    f64::max(12.0, 2.0 * l * l)
}

/// `N`-term two-phase expansion of `𝒥_λ`:
/// `e^{it} Σ a_ℓ t^{-λ-1/2-ℓ} + e^{-it} Σ a'_ℓ t^{-λ-1/2-ℓ} + R_N(t)`.
#[derive(Debug, Clone)]
pub struct AsymptoticExpansion {
    pub order: BesselOrder,
    pub coeffs: Vec<Complex64>,
    pub conj_coeffs: Vec<Complex64>,
    /// Fitted `c_N` with `|R_N(t)| ≤ c_N t^{-N-λ-1/2}`; zero until calibrated.
    pub remainder_constant: f64,
}

impl AsymptoticExpansion {
    pub fn new(order: BesselOrder, terms: usize) -> Result<Self> {
        if terms == 0 || terms > N_MAX {
            return domain(format!("expansion order {terms} outside 1..={N_MAX}"));
        }
        let nu = order.value();
        let four_nu_sq = 4.0 * nu * nu;
        // Hankel: H^(1) ~ √(2/πz) e^{i(z-νπ/2-π/4)} Σ i^k a_k z^{-k}; J = (H^(1)+H^(2))/2.
        let base = 0.5 * (2.0 / PI).sqrt() * gamma(nu + 1.0) * 2f64.powf(nu);
        let phase = Complex64::from_polar(1.0, -(nu * FRAC_PI_2 + FRAC_PI_4));
        let mut coeffs = Vec::with_capacity(terms);
        let mut a = 1.0;
        let mut ik = Complex64::new(1.0, 0.0);
        for k in 0..terms {
            if k > 0 {
                let odd = 2.0 * k as f64 - 1.0;
                a *= (four_nu_sq - odd * odd) / (8.0 * k as f64);
                ik *= Complex64::i();
            }
            coeffs.push(phase * ik * (base * a));
        }
        let conj_coeffs = coeffs.iter().map(|c| c.conj()).collect();
        Ok(Self {
            order,
            coeffs,
            conj_coeffs,
            remainder_constant: 0.0,
        })
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Exponent `N + λ + 1/2` of the remainder bound.
    pub fn remainder_exponent(&self) -> f64 {
        self.terms() as f64 + self.order.value() + 0.5
    }

    /// The `e^{+it}` branch `Σ a_ℓ t^{-λ-1/2-ℓ}` without the phase.
    pub fn branch_sum(&self, t: f64) -> Complex64 {
        let lead = t.powf(-self.order.value() - 0.5);
        let inv = 1.0 / t;
        let mut pow = lead;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &self.coeffs {
            acc += c * pow;
            pow *= inv;
        }
        acc
    }

    /// The truncated sum; real because the branches are conjugate.
    pub fn eval(&self, t: f64) -> f64 {
        2.0 * (Complex64::from_polar(1.0, t) * self.branch_sum(t)).re
    }

    /// `R_N(t) = 𝒥_λ(t) − truncated sum`, using the full evaluator.
    pub fn remainder(&self, bessel: &NormalizedBessel, t: f64) -> f64 {
        bessel.eval(t) - self.eval(t)
    }

    /// Fits `c_N` as the largest scaled remainder on a log grid over `[lo, hi]`.
    pub fn calibrate(&mut self, lo: f64, hi: f64, samples: usize) -> f64 {
        let b = NormalizedBessel::new(self.order);
        let e = self.remainder_exponent();
        let mut c = 0.0f64;
        for i in 0..samples {
            let t = lo * (hi / lo).powf(i as f64 / (samples.max(2) - 1) as f64);
            c = c.max(self.remainder(&b, t).abs() * t.powf(e));
        }
        self.remainder_constant = c;
        c
    }

    pub fn remainder_bound(&self, t: f64) -> f64 {
        self.remainder_constant * t.powf(-self.remainder_exponent())
    }

    /// True when the Hankel series terminates before term `N`, so that the
    /// truncated sum is exact (half-integer orders) and `R_N ≡ 0`.
    pub fn is_exact(&self) -> bool {
        let nu = self.order.value();
        let j = nu - 0.5;
        j >= 0.0 && j.fract() == 0.0 && (j as usize) < self.terms() || nu == -0.5
    }

    /// Envelope of `|R_N|`: its maximum over one period centred at each of
    /// `windows` log-spaced abscissae in `[lo, hi]`. A log–log line through
    /// these points estimates the decay exponent of the remainder.
    pub fn remainder_envelope(&self, lo: f64, hi: f64, windows: usize) -> Vec<(f64, f64)> {
        let b = NormalizedBessel::new(self.order);
        let per = 2.0 * PI;
        let sub = 64;
        (0..windows)
            .map(|i| {
                let c = lo * (hi / lo).powf(i as f64 / (windows.max(2) - 1) as f64);
                let a = (c - 0.5 * per).max(lo);
                let m = (0..=sub)
                    .map(|j| self.remainder(&b, a + per * j as f64 / sub as f64).abs())
                    .fold(0.0, f64::max);
                (c, m)
            })
            .collect()
    }
}

/// Truncated expansion value at `t`, refusing arguments below the validated range.
pub fn bessel_asymptotic(
    order: BesselOrder,
    t: f64,
    terms: usize,
) -> Result<(f64, AsymptoticExpansion)> {
    let tmin = asymptotic_switch_point(order);
    if !(t >= tmin) {
        return range(format!(
            "argument {t} below the asymptotic switch point {tmin}; use the series"
        ));
    }
    let exp = AsymptoticExpansion::new(order, terms)?;
    Ok((exp.eval(t), exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_leading_term() {
        let o = BesselOrder::new(0.5).unwrap();
        let (v, exp) = bessel_asymptotic(o, 100.0, 1).unwrap();
        assert!((v - 100f64.sin() / 100.0).abs() < 1e-15);
        assert!(exp.coeffs[0].norm() > 0.0);
    }

    #[test]
    fn below_switch_point_is_range_error() {
        let o = BesselOrder::new(3.0).unwrap();
        assert!(matches!(
            bessel_asymptotic(o, 15.0, 2),
            Err(crate::Error::Range(_))
        ));
        assert!(bessel_asymptotic(o, 18.0, 2).is_ok());
        assert!(bessel_asymptotic(o, 18.0, 9).is_err());
    }

    #[test]
    fn cosine_expansion_is_exact() {
        let o = BesselOrder::new(-0.5).unwrap();
        let exp = AsymptoticExpansion::new(o, 3).unwrap();
        assert!((exp.coeffs[0] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(exp.coeffs[1].norm() < 1e-15);
        assert!((exp.eval(40.0) - 40f64.cos()).abs() < 1e-15);
    }
}
