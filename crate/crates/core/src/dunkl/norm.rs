use num_complex::Complex64;

use super::{LineProfile, RadialProfile};
use crate::error::{domain, Result};
use crate::specfun::gamma;

/// `|S^{n−1}| = 2π^{n/2}/Γ(n/2)`; equals 2 for `n = 1`.
pub fn sphere_area(n: u32) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / gamma(h)
}

/// Profiles with a weighted quadrature measure.
pub trait Normed {
    fn samples(&self) -> &[Complex64];
    /// Quadrature weights of the full measure, angular factor included.
    fn measure(&self) -> Vec<f64>;
}

impl Normed for RadialProfile {
    fn samples(&self) -> &[Complex64] {
        self.values()
    }

    fn measure(&self) -> Vec<f64> {
        let a = sphere_area(self.grid().params().n());
        self.grid().weights().iter().map(|w| a * w).collect()
    }
}

impl Normed for LineProfile {
    fn samples(&self) -> &[Complex64] {
        self.values()
    }

    fn measure(&self) -> Vec<f64> {
        self.grid().weights().to_vec()
    }
}

/// `‖f‖_{p,k}`; the maximum sample modulus for `p = ∞`.
pub fn lp_norm<P: Normed + ?Sized>(f: &P, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return domain(format!("L^p exponent must be ≥ 1, got {p}"));
    }
    let v = f.samples();
    if p.is_infinite() {
        return Ok(v.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let sup = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if sup == 0.0 {
        return Ok(0.0);
    }
    // Factor out the sup so large p neither overflows nor underflows.
    let s: f64 = v
        .iter()
        .zip(f.measure())
        .map(|(z, w)| w * (z.norm() / sup).powf(p))
        .sum();
    Ok(sup * s.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dunkl::{DunklParams, LineGrid, RadialGrid};

    #[test]
    fn gaussian_l2() {
        let grid = RadialGrid::default_for(DunklParams::new(0.0, 1).unwrap());
        let g = RadialProfile::from_real_fn(&grid, |r| (-r * r / 2.0).exp());
        assert!((lp_norm(&g, 2.0).unwrap() - std::f64::consts::PI.powf(0.25)).abs() < 1e-12);
        let g3 = g.scale(Complex64::new(0.0, -3.0));
        assert!((lp_norm(&g3, 1.5).unwrap() - 3.0 * lp_norm(&g, 1.5).unwrap()).abs() < 1e-12);
        assert_eq!(lp_norm(&g, f64::INFINITY).unwrap(), g.sup());
        assert!(lp_norm(&g, 0.5).is_err());
    }

    #[test]
    fn line_and_radial_agree_on_even() {
        let spec = crate::dunkl::GridSpec {
            r_max: 12.0,
            count: 384,
            panel: 0.5,
        };
        let lg = LineGrid::new(0.7, spec).unwrap();
        let rg = RadialGrid::new(DunklParams::new(0.7, 1).unwrap(), spec).unwrap();
        let f = |x: f64| (-x * x).exp() * (1.0 + x * x);
        let a = lp_norm(&LineProfile::from_real_fn(&lg, f), 3.0).unwrap();
        let b = lp_norm(&RadialProfile::from_real_fn(&rg, f), 3.0).unwrap();
        assert!((a - b).abs() < 1e-13 * a);
        assert!((sphere_area(3) - 4.0 * std::f64::consts::PI).abs() < 1e-13);
    }
}
