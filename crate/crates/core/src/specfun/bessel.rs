use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{domain, Result};
use crate::quadrature::CompensatedSum;

/// Below this argument the power series is used.
const SERIES_MAX: f64 = 8.0;
/// Complex arguments use the series up to this modulus.
const COMPLEX_SERIES_MAX: f64 = 17.0;

/// Order `λ ≥ −1/2` of a normalized Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < -0.5 {
            return domain(format!("Bessel order {lambda} is below -1/2"));
        }
        Ok(Self(lambda))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Cosine,
    Sinc,
    General,
}

/// Evaluator of `𝒥_λ(t) = Γ(λ+1) (2/t)^λ J_λ(t)` for a fixed order.
///
/// Small arguments use the power series, intermediate ones Miller's backward
/// recurrence normalized by the Neumann sum, and large ones the Hankel
/// expansion truncated at its smallest term.
#[derive(Debug, Clone)]
pub struct NormalizedBessel {
    order: f64,
    shape: Shape,
    /// `Γ(λ+1) 2^λ √(2/π)`, the prefactor of the large-argument form.
    asym_scale: f64,
    four_nu_sq: f64,
    phase_shift: f64,
    asym_min: f64,
}

impl NormalizedBessel {
    pub fn new(order: BesselOrder) -> Self {
        let nu = order.0;
        let shape = if nu == -0.5 {
            Shape::Cosine
        } else if nu == 0.5 {
            Shape::Sinc
        } else {
            Shape::General
        };
        Self {
            order: nu,
            shape,
            asym_scale: gamma(nu + 1.0) * 2f64.powf(nu) * (2.0 / PI).sqrt(),
            four_nu_sq: 4.0 * nu * nu,
            phase_shift: nu * FRAC_PI_2 + FRAC_PI_4,
            asym_min: f64::max(20.0, nu * nu),
        }
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    /// Evaluates at `|t|`; the function is even.
    pub fn eval(&self, t: f64) -> f64 {
        let z = t.abs();
        match self.shape {
            Shape::Cosine => z.cos(),
            Shape::Sinc => {
                if z < 1e-4 {
                    1.0 - z * z / 6.0
                } else {
                    z.sin() / z
                }
            }
            Shape::General => {
                if z <= SERIES_MAX {
                    self.series(z)
                } else if z < self.asym_min {
                    self.miller(z)
                } else {
                    self.hankel(z)
                }
            }
        }
    }

    pub(crate) fn series(&self, z: f64) -> f64 {
        let q = -0.25 * z * z;
        let mut term = 1.0;
        let mut acc = CompensatedSum::default();
        acc.add(1.0);
        let mut m = 1.0;
        loop {
            term *= q / (m * (self.order + m));
            acc.add(term);
            if term.abs() < 1e-18 * acc.value().abs().max(1e-300) && m > 0.5 * z {
                break;
            }
            m += 1.0;
            if m > 500.0 {
                break;
            }
        }
        acc.value()
    }

    pub(crate) fn miller(&self, z: f64) -> f64 {
        let nu = self.order;
        let mut top = (z + 40.0 + 4.0 * z.cbrt()).ceil() as usize;
        if top % 2 == 1 {
            top += 1;
        }
        // u_k = (ν+2k) Π_{j=1}^{k-1}(ν+j) / k!
        let kmax = top / 2;
        let mut u = Vec::with_capacity(kmax + 1);
        u.push(1.0);
        let mut prod = 1.0;
        for k in 1..=kmax {
            let kf = k as f64;
            if k > 1 {
                prod *= (nu + kf - 1.0) / kf;
            } else {
                prod = 1.0;
            }
            u.push((nu + 2.0 * kf) * prod);
        }
        let mut j_next = 0.0;
        let mut j_cur = 1e-30;
        let mut norm = u[kmax] * j_cur;
        let mut m = top;
        while m > 0 {
            let j_prev = 2.0 * (nu + m as f64) / z * j_cur - j_next;
            j_next = j_cur;
            j_cur = j_prev;
            m -= 1;
            if m.is_multiple_of(2) {
                norm += u[m / 2] * j_cur;
            }
            if j_cur.abs() > 1e200 {
                j_cur *= 1e-200;
                j_next *= 1e-200;
                norm *= 1e-200;
            }
        }
        j_cur / norm
    }

    pub(crate) fn hankel(&self, z: f64) -> f64 {
        let (p, q) = hankel_pq(self.four_nu_sq, z, usize::MAX);
        let w = z - self.phase_shift;
        let (s, c) = w.sin_cos();
        self.asym_scale * z.powf(-self.order - 0.5) * (p * c - q * s)
    }
}

/// Hankel `P`, `Q` sums, truncated at `max_terms` or at the smallest term.
pub(crate) fn hankel_pq(four_nu_sq: f64, z: f64, max_terms: usize) -> (f64, f64) {
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    let mut k = 1usize;
    while k < max_terms {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (four_nu_sq - odd * odd) / (8.0 * kf * z);
        let mag = a.abs();
        if mag == 0.0 || (max_terms == usize::MAX && mag > last) {
            break;
        }
        let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        if k.is_multiple_of(2) {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if max_terms == usize::MAX && mag < 1e-17 {
            break;
        }
        last = mag;
        k += 1;
        if k > 200 {
            break;
        }
    }
    (p, q)
}

/// `𝒥_λ(t)` for real `t ≥ 0`.
pub fn normalized_bessel(order: BesselOrder, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!(
            "normalized Bessel argument {t} must be finite and non-negative"
        ));
    }
    Ok(NormalizedBessel::new(order).eval(t))
}

/// `𝒥_λ(z)` for complex `z`, an even entire function.
pub fn normalized_bessel_complex(order: BesselOrder, z: Complex64) -> Complex64 {
    let nu = order.0;
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    if z.im.abs() <= 1e-15 * r {
        return Complex64::new(NormalizedBessel::new(order).eval(z.re), 0.0);
    }
    if z.re.abs() <= 1e-15 * r {
        return Complex64::new(modified_normalized(nu, z.im.abs()), 0.0);
    }
    if r <= COMPLEX_SERIES_MAX {
        let q = -0.25 * z * z;
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        let mut m = 1.0;
        while m < 400.0 {
            term *= q / (m * (nu + m));
            acc += term;
            if term.norm() < 1e-18 * acc.norm() && m > 0.5 * r {
                break;
            }
            m += 1.0;
        }
        return acc;
    }
    let z = if z.re < 0.0 { -z } else { z };
    let four_nu_sq = 4.0 * nu * nu;
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut a = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..200usize {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (four_nu_sq - odd * odd) / (8.0 * kf * z);
        let mag = a.norm();
        if mag == 0.0 || mag > last {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += a * sign;
        } else {
            q += a * sign;
        }
        if mag < 1e-17 {
            break;
        }
        last = mag;
    }
    let w = z - (nu * FRAC_PI_2 + FRAC_PI_4);
    let scale = gamma(nu + 1.0) * 2f64.powf(nu) * (2.0 / PI).sqrt();
    (p * w.cos() - q * w.sin()) * z.powf(-nu - 0.5) * scale
}

/// `𝒥_λ(i s)` for real `s ≥ 0`: positive series, no cancellation.
fn modified_normalized(nu: f64, s: f64) -> f64 {
    let q = 0.25 * s * s;
    let mut term = 1.0;
    let mut acc = 1.0;
    let mut m = 1.0;
    loop {
        term *= q / (m * (nu + m));
        acc += term;
        if term < 1e-18 * acc && m > 0.5 * s {
            break;
        }
        m += 1.0;
        if !acc.is_finite() || m > 5000.0 {
            break;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(l: f64, t: f64) -> f64 {
        normalized_bessel(BesselOrder::new(l).unwrap(), t).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(eval(0.7, 0.0), 1.0);
        assert!(eval(0.5, PI).abs() < 1e-15);
        assert!((eval(-0.5, PI) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(BesselOrder::new(-0.6).is_err());
        assert!(normalized_bessel(BesselOrder::new(1.0).unwrap(), -1.0).is_err());
    }

    #[test]
    fn general_path_matches_closed_forms_near_half_integers() {
        // λ = 0.5 + tiny goes through the general code paths.
        for &t in &[0.3, 5.0, 9.0, 15.0, 19.5, 25.0, 300.0] {
            let g = eval(0.5 + 1e-13, t);
            let exact = t.sin() / t;
            assert!((g - exact).abs() < 1e-12, "t={t}: {g} vs {exact}");
            let g = eval(-0.5 + 1e-13, t);
            assert!((g - t.cos()).abs() < 1e-11, "t={t}: {g} vs {}", t.cos());
        }
    }

    #[test]
    fn paths_agree_at_switch_points() {
        for &l in &[0.0, 0.2, 1.3, 2.5, 4.0] {
            let b = NormalizedBessel::new(BesselOrder::new(l).unwrap());
            let z = SERIES_MAX;
            assert!((b.series(z) - b.miller(z)).abs() < 1e-13, "λ={l}");
            let z = b.asym_min;
            assert!((b.miller(z) - b.hankel(z)).abs() < 1e-14, "λ={l}");
        }
    }

    #[test]
    fn complex_argument_matches_exponential() {
        // 𝒥_{-1/2}(z) = cos z, 𝒥_{1/2}(z) = sin z / z.
        let o = BesselOrder::new(-0.5 + 1e-14).unwrap();
        for &z in &[
            Complex64::new(1.0, 2.0),
            Complex64::new(20.0, 3.0),
            Complex64::new(-4.0, 0.5),
        ] {
            let v = normalized_bessel_complex(o, z);
            assert!((v - z.cos()).norm() < 1e-10 * z.cos().norm(), "{z}");
        }
        let o = BesselOrder::new(0.5).unwrap();
        let z = Complex64::new(0.0, 0.6);
        let v = normalized_bessel_complex(o, z);
        assert!((v.re - 0.6f64.sinh() / 0.6).abs() < 1e-15);
    }
}
