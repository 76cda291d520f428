//! Special functions: normalized Bessel functions with series, recurrence and
//! asymptotic paths, and the dyadic bump/cutoff pair.

mod asymptotic;
mod bessel;
mod bump;

pub use asymptotic::{asymptotic_switch_point, bessel_asymptotic, AsymptoticExpansion, N_MAX};
pub use bessel::{
    gamma, normalized_bessel, normalized_bessel_complex, BesselOrder, NormalizedBessel,
};
pub use bump::{cutoff_phi, lp_bump, partial_cutoff, plateau, BumpPair};
