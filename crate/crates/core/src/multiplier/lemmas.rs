use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::kernel::regime_window;
use super::Sign;
use crate::dunkl::DunklParams;
use crate::error::{domain, Result};
use crate::quadrature::GaussLegendre;
use crate::specfun::{gamma, lp_bump};

/// The two bounded functions of the kernel decay argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma22 {
    /// `G(t) = ∫_0^t s^μ e^{±is} ds` with `μ = −α + γ_k + (n−1)/2`.
    pub g: Complex64,
    /// `H(t) = t^{μ+1} ∫_1^2 ψ(s) s^μ e^{±its} ds`.
    pub h: Complex64,
    /// The bare integral `∫_1^2 ψ(s) s^μ e^{±its} ds`, which is `O(1/t)`.
    pub inner: Complex64,
}

/// `∫_0^t s^μ e^{is} ds` for `μ > −1`: power series for small `t`, otherwise
/// the complete integral minus a rotated-contour tail.
fn g_plus(mu: f64, t: f64) -> Complex64 {
    if t <= 4.0 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for m in 0..80 {
            if m > 0 {
                term *= Complex64::new(0.0, t / m as f64);
            }
            let c = term * (t.powf(mu + 1.0) / (mu + m as f64 + 1.0));
            acc += c;
            if m > 10 && c.norm() < 1e-18 * acc.norm() {
                break;
            }
        }
        return acc;
    }
    let full = Complex64::from_polar(gamma(mu + 1.0), PI * (mu + 1.0) / 2.0);
    // ∫_t^∞ s^μ e^{is} ds = i e^{it} ∫_0^∞ (t + iu)^μ e^{−u} du
    let rule = GaussLegendre::new(16);
    let mut u = 0.0;
    let mut tail = Complex64::new(0.0, 0.0);
    while u < 60.0 {
        let hi = (u + 0.5 * t.max(u)).min(60.0);
        tail += rule.integrate_complex(u, hi, |v| Complex64::new(t, v).powf(mu) * (-v).exp());
        u = hi;
    }
    full - Complex64::i() * Complex64::from_polar(1.0, t) * tail
}

fn inner_plus(mu: f64, t: f64) -> Complex64 {
    let rule = GaussLegendre::new(8);
    let panels = ((2.0 * t / PI).ceil() as usize).max(32);
    crate::quadrature::composite_complex(&rule, 1.0, 2.0, 1.0 / panels as f64, |s| {
        Complex64::from_polar(lp_bump(s) * s.powf(mu), t * s)
    })
}

pub fn lemma22_functions(t: f64, alpha: f64, params: DunklParams, sign: Sign) -> Result<Lemma22> {
    if !(t > 0.0) {
        return domain(format!("t must be positive, got {t}"));
    }
    let (a, b) = regime_window(params);
    if !(alpha > a && alpha < b) {
        return domain(format!(
            "α = {alpha} outside the convergence window ({a}, {b})"
        ));
    }
    let mu = -alpha + params.lambda() + 0.5;
    let g = g_plus(mu, t);
    let inner = inner_plus(mu, t);
    let h = inner * t.powf(mu + 1.0);
    let fix = |v: Complex64| if sign == Sign::Plus { v } else { v.conj() };
    Ok(Lemma22 {
        g: fix(g),
        h: fix(h),
        inner: fix(inner),
    })
}
