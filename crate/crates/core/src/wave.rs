//! The sine propagator `u = F_k⁻¹(sin(t|ξ|)/|ξ| · F_k f)` for the Cauchy
//! problem with zero initial position, and its three-way symbol split.

use num_complex::Complex64;
use serde::Serialize;

use crate::dunkl::{
    lp_norm, radial_inverse_at, DunklParams, GuardReport, RadialSymbol, SpectralProfile,
};
use crate::error::{domain, Result};
use crate::multiplier::sinc;
use crate::specfun::cutoff_phi;

/// Solution at time `t` with the velocity and the datum it came from.
#[derive(Debug, Clone)]
pub struct WaveState<P> {
    pub u: P,
    pub ut: P,
    pub t: f64,
    pub initial_f: P,
    pub guard: GuardReport,
    pub warnings: Vec<String>,
}

/// `sin(t s)/s`, equal to `t` at `s = 0`.
pub fn sine_symbol(t: f64, s: f64) -> f64 {
    t * sinc(t * s)
}

/// Evolves `f` to time `t`. Negative `t` is accepted; `u` is odd in `t`.
pub fn wave_propagate<P: SpectralProfile>(f: &P, t: f64) -> Result<WaveState<P>> {
    if !t.is_finite() {
        return domain(format!("time must be finite, got {t}"));
    }
    let sine = |xi: f64| Complex64::new(sine_symbol(t, xi), 0.0);
    let cosine = |xi: f64| Complex64::new((t * xi).cos(), 0.0);
    let u = f.multiply(&sine)?;
    let ut = f.multiply(&cosine)?;
    let mut guard = u.guard;
    guard.merge(&ut.guard);
    let mut warnings = u.warnings;
    for w in ut.warnings {
        if !warnings.contains(&w) {
            warnings.push(w);
        }
    }
    Ok(WaveState {
        u: u.profile,
        ut: ut.profile,
        t,
        initial_f: f.clone(),
        guard,
        warnings,
    })
}

/// `‖F ut‖² + ‖|ξ| F u‖²`, from fresh forward transforms of the state.
pub fn energy<P: SpectralProfile>(state: &WaveState<P>) -> Result<f64> {
    let a = state.ut.forward()?.profile;
    let b = state.u.forward()?.profile;
    let b = b.with_values(
        b.nodes()
            .iter()
            .zip(b.samples())
            .map(|(&xi, &v)| v * xi.abs())
            .collect(),
    )?;
    Ok(lp_norm(&a, 2.0)?.powi(2) + lp_norm(&b, 2.0)?.powi(2))
}

/// `(a1, a2, a3)` with `a1 + a2 + a3 = sin(s)/s`: the two oscillating halves
/// cut off by `φ`, and the low-frequency remainder.
pub fn propagator_split(xi: f64) -> (Complex64, Complex64, Complex64) {
    let s = xi.abs();
    let phi = cutoff_phi(s);
    let low = Complex64::new(sinc(s) * (1.0 - phi), 0.0);
    if phi == 0.0 {
        return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), low);
    }
    let d = Complex64::new(0.0, 2.0 * s);
    (
        Complex64::from_polar(phi, s) / d,
        -Complex64::from_polar(phi, -s) / d,
        low,
    )
}

/// One summand of the split, dilated to time `t > 0`: `t·a_j(t|ξ|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SplitPart {
    Plus,
    Minus,
    Low,
}

struct Piece {
    part: SplitPart,
    t: f64,
}

impl RadialSymbol for Piece {
    fn eval(&self, xi: f64) -> Complex64 {
        let (a1, a2, a3) = propagator_split(self.t * xi);
        self.t
            * match self.part {
                SplitPart::Plus => a1,
                SplitPart::Minus => a2,
                SplitPart::Low => a3,
            }
    }
}

/// `F_k⁻¹(t·a_j(t|ξ|) F_k f)`.
pub fn propagate_part<P: SpectralProfile>(f: &P, t: f64, part: SplitPart) -> Result<P> {
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("split propagation needs t > 0, got {t}"));
    }
    Ok(f.multiply(&Piece { part, t })?.profile)
}

/// `F_k⁻¹(a3)(x) = d ∫₀¹ a3(s) 𝒥_λ(xs) s^{2λ+1} ds`; `a3` vanishes beyond 1.
pub fn low_freq_kernel(params: DunklParams, xs: &[f64]) -> Result<Vec<f64>> {
    let v = radial_inverse_at(params, (0.0, 1.0), |s| propagator_split(s).2, xs)?;
    Ok(v.into_iter().map(|z| z.re).collect())
}
