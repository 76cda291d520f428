use num_complex::Complex64;

use super::line::{dunkl_transform_1d, inverse_dunkl_transform_1d, line_spectral_apply};
use super::radial::{
    guard_for, guard_from_density, radial_dunkl_transform, radial_inverse_transform,
    spectral_convolve, GuardReport, RadialSymbol, Transformed,
};
use super::{DunklParams, LineProfile, Normed, RadialProfile};
use crate::error::Result;

/// A profile that can be taken to the spectral side and multiplied by a
/// radial symbol; the transform lives on the profile's own grid.
pub trait SpectralProfile: Normed + Clone + Send + Sync + Sized {
    /// Parameters of the radial reduction; `(k, 1)` on the line.
    fn params(&self) -> DunklParams;
    /// Grid abscissae, signed on the line.
    fn nodes(&self) -> &[f64];
    fn with_values(&self, values: Vec<Complex64>) -> Result<Self>;
    fn forward(&self) -> Result<Transformed<Self>>;
    /// Treats `self` as spectral data and transforms back.
    fn inverse(&self) -> Result<Transformed<Self>>;
    /// Guard report for `self` read as spectral content.
    fn spectral_guard(&self) -> GuardReport;
    fn multiply(&self, symbol: &dyn RadialSymbol) -> Result<Transformed<Self>>;
}

impl SpectralProfile for RadialProfile {
    fn params(&self) -> DunklParams {
        self.grid().params()
    }

    fn nodes(&self) -> &[f64] {
        self.grid().points()
    }

    fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        RadialProfile::new(self.grid().clone(), values)
    }

    fn forward(&self) -> Result<Transformed<Self>> {
        radial_dunkl_transform(self, self.grid())
    }

    fn inverse(&self) -> Result<Transformed<Self>> {
        radial_inverse_transform(self, self.grid())
    }

    fn spectral_guard(&self) -> GuardReport {
        guard_for(self.grid(), self.grid(), self.values())
    }

    fn multiply(&self, symbol: &dyn RadialSymbol) -> Result<Transformed<Self>> {
        spectral_convolve(self, symbol)
    }
}

impl SpectralProfile for LineProfile {
    fn params(&self) -> DunklParams {
        DunklParams::rank_one(self.grid().k()).expect("line grids carry k ≥ 0")
    }

    fn nodes(&self) -> &[f64] {
        self.grid().points()
    }

    fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        LineProfile::new(self.grid().clone(), values)
    }

    fn forward(&self) -> Result<Transformed<Self>> {
        dunkl_transform_1d(self, self.grid().k(), self.grid())
    }

    fn inverse(&self) -> Result<Transformed<Self>> {
        inverse_dunkl_transform_1d(self, self.grid().k(), self.grid())
    }

    fn spectral_guard(&self) -> GuardReport {
        guard_from_density(self.grid().density(), self.grid().points(), self.values())
    }

    fn multiply(&self, symbol: &dyn RadialSymbol) -> Result<Transformed<Self>> {
        line_spectral_apply(self, symbol)
    }
}
