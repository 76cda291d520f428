use serde::{Deserialize, Serialize};

use super::Theorem;
use crate::dunkl::DunklParams;

/// Threshold lines over a `1/p` grid, all in the `(1/p, α)` plane.
/// With `D = 2γ_k + n − 1` and `u = 1/p`:
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremLines {
    pub inv_p: Vec<f64>,
    /// `D|1/2 − u|`.
    pub multiplier: Vec<f64>,
    /// `D|u − 1/2| + u`.
    pub maximal: Vec<f64>,
    /// `M_α` as stated: `1 − (D+1) + (D+1)u` for `p ≥ 2`, `(1 − D)u` for `p ≤ 2`.
    pub spherical_statement: Vec<f64>,
    /// `M_α` as derived from the `A_α` line: the same two branches with the `p`-ranges swapped.
    pub spherical_proof: Vec<f64>,
    /// `|1/2 − u| < 1/D`, and the closed version; everything when `D = 0`.
    pub wave_strict: Vec<bool>,
    pub wave_closed: Vec<bool>,
    /// `p = (D+1)/D`: the spherical-mean line at `α = 0`, when `D > 0`.
    pub critical_p: Option<f64>,
}

impl TheoremLines {
    pub fn new(params: DunklParams, inv_p: &[f64]) -> Self {
        let d = 2.0 * params.gamma_k() + params.n() as f64 - 1.0;
        let q = d + 1.0;
        let hi = |u: f64| 1.0 - q + q * u;
        let lo = |u: f64| (2.0 - q) * u;
        let wave = |u: f64, strict: bool| {
            d == 0.0
                || if strict {
                    (0.5 - u).abs() * d < 1.0
                } else {
                    (0.5 - u).abs() * d <= 1.0
                }
        };
        Self {
            inv_p: inv_p.to_vec(),
            multiplier: inv_p.iter().map(|u| d * (0.5 - u).abs()).collect(),
            maximal: inv_p.iter().map(|u| d * (u - 0.5).abs() + u).collect(),
            spherical_statement: inv_p
                .iter()
                .map(|&u| if u <= 0.5 { hi(u) } else { lo(u) })
                .collect(),
            spherical_proof: inv_p
                .iter()
                .map(|&u| if u >= 0.5 { hi(u) } else { lo(u) })
                .collect(),
            wave_strict: inv_p.iter().map(|&u| wave(u, true)).collect(),
            wave_closed: inv_p.iter().map(|&u| wave(u, false)).collect(),
            critical_p: (d > 0.0).then(|| q / d),
        }
    }

    /// The primary and alternative α-thresholds at grid index `i`.
    pub fn at(&self, theorem: Theorem, i: usize) -> (Option<f64>, Option<f64>) {
        match theorem {
            Theorem::Multiplier => (Some(self.multiplier[i]), None),
            Theorem::Wave => (None, None),
            Theorem::MaximalA => (Some(self.maximal[i]), None),
            Theorem::MaximalM | Theorem::SphericalMean => (
                Some(self.spherical_proof[i]),
                Some(self.spherical_statement[i]),
            ),
        }
    }

    /// The dyadic exponent the proofs give for the pieces at `α`.
    pub fn exponent(&self, theorem: Theorem, i: usize, alpha: f64) -> Option<f64> {
        match theorem {
            Theorem::Multiplier => Some(self.multiplier[i] - alpha),
            Theorem::Wave => Some(self.multiplier[i] - 1.0),
            Theorem::MaximalA => Some(self.maximal[i] - alpha),
            Theorem::MaximalM | Theorem::SphericalMean => Some(self.spherical_proof[i] - alpha),
        }
    }

    pub fn wave_region(&self, i: usize, strict: bool) -> bool {
        if strict {
            self.wave_strict[i]
        } else {
            self.wave_closed[i]
        }
    }
}

/// Riesz–Thorin bookkeeping at `1/p = u`, in the limit of the proofs' free parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interpolation {
    pub theta: f64,
    pub q: f64,
    pub alpha0: f64,
}

/// `θ` for the multiplier (`1/p = 1 − θ/2`, dual side by symmetry) and for
/// the maximal operators below `p = 2` (`1/p = 1/2 + θ(1/q − 1/2)`, `q → 1`).
/// Above `p = 2` the maximal estimates are direct and carry no `θ`.
pub fn interpolation(theorem: Theorem, params: DunklParams, u: f64) -> Option<Interpolation> {
    let d = 2.0 * params.gamma_k() + params.n() as f64 - 1.0;
    match theorem {
        Theorem::Multiplier | Theorem::Wave => {
            let v = u.max(1.0 - u);
            Some(Interpolation {
                theta: 2.0 * (1.0 - v),
                q: 1.0,
                alpha0: d / 2.0,
            })
        }
        Theorem::MaximalA | Theorem::MaximalM | Theorem::SphericalMean if u > 0.5 => {
            Some(Interpolation {
                theta: 2.0 * u - 1.0,
                q: 1.0,
                alpha0: d / 2.0 + 1.0,
            })
        }
        _ => None,
    }
}
