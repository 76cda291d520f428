//! Dunkl parameters, weighted grids and profiles, the radial and
//! one-dimensional transforms, norms, spectral convolution and translation.

mod grid;
mod line;
mod norm;
mod radial;
mod spectral;

pub use grid::{GridSpec, LineGrid, LineProfile, RadialGrid, RadialProfile};
pub use line::{
    dunkl_kernel_1d, dunkl_transform_1d, inverse_dunkl_transform_1d, line_normalization,
    line_spectral_apply, spectral_translate_1d, spectral_translate_at,
};
pub use norm::{lp_norm, sphere_area, Normed};
pub use radial::{
    band_l2, radial_dunkl_transform, radial_inverse_at, radial_inverse_transform,
    spectral_convolve, transform_constant, BandSampler, GuardReport, RadialSymbol, Transformed,
};
pub use spectral::SpectralProfile;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun::BesselOrder;

/// Weight exponent `γ_k` and ambient dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DunklParams {
    gamma_k: f64,
    n: u32,
}

impl DunklParams {
    pub fn new(gamma_k: f64, n: u32) -> Result<Self> {
        if !(gamma_k >= 0.0) || !gamma_k.is_finite() {
            return domain(format!("gamma_k must be finite and ≥ 0, got {gamma_k}"));
        }
        if n == 0 {
            return domain("dimension n must be ≥ 1");
        }
        Ok(Self { gamma_k, n })
    }

    /// Rank-one parameters with multiplicity `k`.
    pub fn rank_one(k: f64) -> Result<Self> {
        Self::new(k, 1)
    }

    pub fn gamma_k(&self) -> f64 {
        self.gamma_k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Hankel order `λ = γ_k + n/2 − 1`.
    pub fn lambda(&self) -> f64 {
        self.gamma_k + self.n as f64 / 2.0 - 1.0
    }

    /// Homogeneous dimension `2γ_k + n`.
    pub fn homdim(&self) -> f64 {
        2.0 * self.gamma_k + self.n as f64
    }

    /// Exponent `2γ_k + n − 1` of the radial measure `r^{2γ_k+n−1} dr`.
    pub fn radial_exponent(&self) -> f64 {
        self.homdim() - 1.0
    }

    pub fn order(&self) -> BesselOrder {
        BesselOrder::new(self.lambda()).expect("λ ≥ −1/2 whenever γ_k ≥ 0 and n ≥ 1")
    }
}

/// Rank-one weight `|x|^{2γ_k}`. Radial usage folds the angular factor into
/// grid weights instead.
pub fn weight_w(params: DunklParams, x: f64) -> f64 {
    if params.gamma_k == 0.0 {
        1.0
    } else {
        x.abs().powf(2.0 * params.gamma_k)
    }
}
