use num_complex::Complex64;
use rayon::prelude::*;

use super::radial::{guard_from_density, tail_ratio, RadialSymbol, Transformed, TAIL_TOLERANCE};
use super::{LineGrid, LineProfile};
use crate::error::{domain, usage, Result};
use crate::specfun::{gamma, normalized_bessel_complex, BesselOrder, NormalizedBessel};

/// `E_k(x, y) = 𝒥_{k−1/2}(ixy) + xy/(2k+1)·𝒥_{k+1/2}(ixy)`.
pub fn dunkl_kernel_1d(k: f64, x: f64, y: Complex64) -> Complex64 {
    let lo = BesselOrder::new(k - 0.5).expect("k ≥ 0");
    let hi = BesselOrder::new(k + 0.5).expect("k ≥ 0");
    let z = Complex64::i() * x * y;
    normalized_bessel_complex(lo, z) + x * y / (2.0 * k + 1.0) * normalized_bessel_complex(hi, z)
}

/// `1/(2^{k+1/2} Γ(k+1/2))`, the reciprocal Gaussian integral against `|x|^{2k}`.
pub fn line_normalization(k: f64) -> f64 {
    1.0 / (2f64.powf(k + 0.5) * gamma(k + 0.5))
}

/// Even and odd parts of the real-argument kernel: with `u = xξ`,
/// `E_k(x, ±iξ) = e(u) ± i·o(u)`.
struct LineKernel {
    even: NormalizedBessel,
    odd: NormalizedBessel,
    k: f64,
}

impl LineKernel {
    fn new(k: f64) -> Self {
        Self {
            even: NormalizedBessel::new(BesselOrder::new(k - 0.5).expect("k ≥ 0")),
            odd: NormalizedBessel::new(BesselOrder::new(k + 0.5).expect("k ≥ 0")),
            k,
        }
    }

    fn parts(&self, u: f64) -> (f64, f64) {
        let a = u.abs();
        (
            self.even.eval(a),
            u / (2.0 * self.k + 1.0) * self.odd.eval(a),
        )
    }
}

fn check_k(grid: &LineGrid, k: f64) -> Result<()> {
    if !(k >= 0.0) {
        return domain("multiplicity k must be ≥ 0");
    }
    if grid.k() != k {
        return usage(format!("grid carries k = {}, requested k = {k}", grid.k()));
    }
    Ok(())
}

/// `c ∫ f(x) E_k(x, sign·iξ) |x|^{2k} dx` at each `ξ` in `out`, folding the
/// symmetric grid into even and odd parts.
fn line_sum(f: &LineProfile, k: f64, out: &[f64], sign: f64) -> Vec<Complex64> {
    let grid = f.grid();
    let kern = LineKernel::new(k);
    let h = grid.len() / 2;
    let c = line_normalization(k);
    let half: Vec<(f64, Complex64, Complex64)> = (0..h)
        .map(|j| {
            let (p, m) = (f.values()[h + j], f.values()[h - 1 - j]);
            let w = grid.weights()[h + j];
            (grid.points()[h + j], 0.5 * (p + m) * w, 0.5 * (p - m) * w)
        })
        .collect();
    out.par_iter()
        .map(|&xi| {
            let mut a = Complex64::new(0.0, 0.0);
            let mut b = Complex64::new(0.0, 0.0);
            for &(x, fe, fo) in &half {
                let (e, o) = kern.parts(x * xi);
                a += fe * e;
                b += fo * o;
            }
            2.0 * c * (a + Complex64::new(0.0, sign) * b)
        })
        .collect()
}

fn line_quadrature(
    f: &LineProfile,
    k: f64,
    out: &LineGrid,
    sign: f64,
) -> Result<Transformed<LineProfile>> {
    let grid = f.grid();
    check_k(grid, k)?;
    check_k(out, k)?;
    let xs = out.points();
    let values = line_sum(f, k, xs, sign);
    let guard = guard_from_density(grid.density(), xs, &values);
    let tail = tail_ratio(f.values(), true);
    let mut warnings = Vec::new();
    if tail > TAIL_TOLERANCE {
        warnings.push(format!(
            "input not decayed at |x| = {}: edge/sup = {tail:.3e}",
            grid.x_max()
        ));
    }
    Ok(Transformed {
        profile: LineProfile::new(out.clone(), values)?,
        guard,
        tail_estimate: tail,
        warnings,
    })
}

/// `F_k f(ξ) = c ∫ f(x) E_k(x, −iξ) |x|^{2k} dx`.
pub fn dunkl_transform_1d(
    f: &LineProfile,
    k: f64,
    out_grid: &LineGrid,
) -> Result<Transformed<LineProfile>> {
    line_quadrature(f, k, out_grid, -1.0)
}

/// `F_k⁻¹ g(x) = c ∫ g(ξ) E_k(x, iξ) |ξ|^{2k} dξ`.
pub fn inverse_dunkl_transform_1d(
    g: &LineProfile,
    k: f64,
    out_grid: &LineGrid,
) -> Result<Transformed<LineProfile>> {
    line_quadrature(g, k, out_grid, 1.0)
}

/// `τ_{x0} f = F_k⁻¹(E_k(x0, iξ) F_k f)`; at `k = 0` this is `f(· + x0)`.
pub fn spectral_translate_1d(f: &LineProfile, x0: f64, k: f64) -> Result<Transformed<LineProfile>> {
    let grid = f.grid();
    let mut fwd = dunkl_transform_1d(f, k, grid)?;
    let kern = LineKernel::new(k);
    let shifted: Vec<Complex64> = grid
        .points()
        .iter()
        .zip(fwd.profile.values())
        .map(|(&xi, &v)| {
            let (e, o) = kern.parts(x0 * xi);
            v * Complex64::new(e, o)
        })
        .collect();
    let shifted = LineProfile::new(grid.clone(), shifted)?;
    let mut back = inverse_dunkl_transform_1d(&shifted, k, grid)?;
    let g = guard_from_density(grid.density(), grid.points(), shifted.values());
    fwd.guard.merge(&g);
    fwd.guard.merge(&back.guard);
    back.guard = fwd.guard;
    back.warnings.splice(0..0, fwd.warnings);
    Ok(back)
}

/// `F_k⁻¹(m(|ξ|) F_k f)` on the grid of `f`.
pub fn line_spectral_apply(
    f: &LineProfile,
    symbol: &dyn RadialSymbol,
) -> Result<Transformed<LineProfile>> {
    let grid = f.grid();
    let k = grid.k();
    let fwd = dunkl_transform_1d(f, k, grid)?;
    let filtered: Vec<Complex64> = grid
        .points()
        .iter()
        .zip(fwd.profile.values())
        .map(|(&xi, &v)| v * symbol.eval(xi.abs()))
        .collect();
    let guard = guard_from_density(grid.density(), grid.points(), &filtered);
    let filtered = LineProfile::new(grid.clone(), filtered)?;
    let mut back = inverse_dunkl_transform_1d(&filtered, k, grid)?;
    let mut g = guard;
    g.merge(&back.guard);
    back.guard = g;
    back.warnings.splice(0..0, fwd.warnings);
    Ok(back)
}

/// `τ_{x0} f` evaluated at arbitrary points rather than on the grid.
pub fn spectral_translate_at(
    f: &LineProfile,
    x0: f64,
    k: f64,
    points: &[f64],
) -> Result<Vec<Complex64>> {
    let grid = f.grid();
    let fwd = dunkl_transform_1d(f, k, grid)?;
    let kern = LineKernel::new(k);
    let shifted: Vec<Complex64> = grid
        .points()
        .iter()
        .zip(fwd.profile.values())
        .map(|(&xi, &v)| {
            let (e, o) = kern.parts(x0 * xi);
            v * Complex64::new(e, o)
        })
        .collect();
    Ok(line_sum(
        &LineProfile::new(grid.clone(), shifted)?,
        k,
        points,
        1.0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dunkl::GridSpec;

    #[test]
    fn kernel_anchors() {
        assert!((dunkl_kernel_1d(0.8, 0.0, Complex64::new(3.0, -2.0)) - 1.0).norm() < 1e-15);
        let e = dunkl_kernel_1d(0.0, 1.2, Complex64::new(0.5, 0.0));
        assert!((e - 0.6f64.exp()).norm() < 1e-14);
        let y = Complex64::new(0.0, 3.0);
        let a = dunkl_kernel_1d(0.8, 2.0, y);
        // E_k(x, y) depends on (x, y) only through xy; swap the factors of i.
        let b = dunkl_kernel_1d(0.8, 3.0, Complex64::new(0.0, 2.0));
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn real_parts_match_complex_kernel() {
        let kern = LineKernel::new(1.3);
        for &u in &[-7.0, -0.3, 0.0, 0.9, 12.0] {
            let (e, o) = kern.parts(u);
            let z = dunkl_kernel_1d(1.3, u, Complex64::new(0.0, 1.0));
            assert!((Complex64::new(e, o) - z).norm() < 1e-12, "u={u}");
        }
    }

    #[test]
    fn gaussian_fixed_point() {
        for &k in &[0.0, 0.5, 1.5] {
            let g = LineGrid::new(
                k,
                GridSpec {
                    r_max: 16.0,
                    count: 512,
                    panel: 0.5,
                },
            )
            .unwrap();
            let f = LineProfile::from_real_fn(&g, |x| (-x * x / 2.0).exp());
            let out = dunkl_transform_1d(&f, k, &g).unwrap();
            assert!(out.profile.rel_sup_diff(&f) < 1e-12, "k={k}");
        }
    }
}
