use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::norm::sphere_area;
use super::{DunklParams, RadialGrid, RadialProfile};
use crate::error::{domain, usage, Result};
use crate::quadrature::{GaussJacobi, GaussLegendre};
use crate::specfun::{gamma, NormalizedBessel};

/// Minimum number of grid nodes per period of `𝒥_λ(ρr)` in `r`.
pub const NODES_PER_PERIOD: f64 = 8.0;
/// Flagged outputs below this fraction of the output sup are not significant.
pub const SIGNIFICANCE: f64 = 1e-10;
/// Largest edge-to-sup ratio of the input accepted without a tail warning.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// Scalar normalization `1/(2^λ Γ(λ+1))` fixed by the Gaussian fixed point.
pub fn transform_constant(params: DunklParams) -> f64 {
    let l = params.lambda();
    1.0 / (2f64.powf(l) * gamma(l + 1.0))
}

/// A radial Fourier-side multiplier.
pub trait RadialSymbol: Sync {
    fn eval(&self, xi: f64) -> Complex64;
}

impl<F: Fn(f64) -> Complex64 + Sync> RadialSymbol for F {
    fn eval(&self, xi: f64) -> Complex64 {
        self(xi)
    }
}

/// Outputs whose frequency is under-resolved by the input grid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GuardReport {
    /// Largest output frequency that keeps `NODES_PER_PERIOD` nodes per period.
    pub rho_guard: f64,
    /// Output indices beyond the guard.
    pub flagged: Vec<usize>,
    /// Flagged indices whose value exceeds `SIGNIFICANCE` times the output sup.
    pub significant: Vec<usize>,
}

impl GuardReport {
    pub fn is_clean(&self) -> bool {
        self.significant.is_empty()
    }

    pub fn merge(&mut self, other: &GuardReport) {
        self.rho_guard = self.rho_guard.min(other.rho_guard);
        for (dst, src) in [
            (&mut self.flagged, &other.flagged),
            (&mut self.significant, &other.significant),
        ] {
            dst.extend_from_slice(src);
            dst.sort_unstable();
            dst.dedup();
        }
    }
}

/// A transform output with its guard and tail diagnostics.
#[derive(Debug, Clone)]
pub struct Transformed<P = RadialProfile> {
    pub profile: P,
    pub guard: GuardReport,
    /// `max |f|` over the outer 2% of the input grid, relative to `sup |f|`.
    pub tail_estimate: f64,
    pub warnings: Vec<String>,
}

fn kernel_matrix(input: &RadialGrid, out: &RadialGrid) -> std::sync::Arc<Vec<f64>> {
    input.cached_matrix(out, || {
        let b = NormalizedBessel::new(input.params().order());
        let r = input.points();
        let rho = out.points();
        let n = r.len();
        let mut m = vec![0.0; rho.len() * n];
        if input.same_as(out) {
            m.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
                for j in 0..=i {
                    row[j] = b.eval(rho[i] * r[j]);
                }
            });
            for i in 0..n {
                for j in i + 1..n {
                    m[i * n + j] = m[j * n + i];
                }
            }
        } else {
            m.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
                for (v, &rj) in row.iter_mut().zip(r) {
                    *v = b.eval(rho[i] * rj);
                }
            });
        }
        m
    })
}

pub(crate) fn guard_for(input: &RadialGrid, out: &RadialGrid, values: &[Complex64]) -> GuardReport {
    guard_from_density(input.min_density(), out.points(), values)
}

pub(crate) fn guard_from_density(density: f64, out: &[f64], values: &[Complex64]) -> GuardReport {
    let rho_guard = 2.0 * std::f64::consts::PI * density / NODES_PER_PERIOD;
    let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let flagged: Vec<usize> = out
        .iter()
        .enumerate()
        .filter(|(_, &p)| p.abs() > rho_guard)
        .map(|(i, _)| i)
        .collect();
    let significant = flagged
        .iter()
        .copied()
        .filter(|&i| values[i].norm() > SIGNIFICANCE * sup)
        .collect();
    GuardReport {
        rho_guard,
        flagged,
        significant,
    }
}

/// Edge-to-sup ratio over the outer 2% of samples at either end.
pub(crate) fn tail_ratio(values: &[Complex64], both_ends: bool) -> f64 {
    let n = values.len();
    let m = (n / 50).max(1);
    let mut edge = values[n - m..].iter().map(|v| v.norm()).fold(0.0, f64::max);
    if both_ends {
        edge = values[..m].iter().map(|v| v.norm()).fold(edge, f64::max);
    }
    let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if sup == 0.0 {
        0.0
    } else {
        edge / sup
    }
}

/// `d ∫ f(s) 𝒥_λ(sρ) s^{2λ+1} ds` sampled on `out_grid`.
pub fn radial_dunkl_transform(f: &RadialProfile, out_grid: &RadialGrid) -> Result<Transformed> {
    let input = f.grid();
    if input.params() != out_grid.params() {
        return usage("profile and output grid carry different Dunkl parameters");
    }
    let m = kernel_matrix(input, out_grid);
    let d = transform_constant(input.params());
    let n = input.len();
    let wf: Vec<(usize, Complex64)> = f
        .values()
        .iter()
        .zip(input.weights())
        .enumerate()
        .filter(|(_, (v, _))| **v != Complex64::new(0.0, 0.0))
        .map(|(j, (v, w))| (j, v * (w * d)))
        .collect();
    let values: Vec<Complex64> = m
        .par_chunks(n)
        .map(|row| {
            let (mut re, mut im) = (0.0, 0.0);
            for &(j, c) in &wf {
                re += row[j] * c.re;
                im += row[j] * c.im;
            }
            Complex64::new(re, im)
        })
        .collect();
    let guard = guard_for(input, out_grid, &values);
    let tail = tail_ratio(f.values(), false);
    let mut warnings = Vec::new();
    if tail > TAIL_TOLERANCE {
        warnings.push(format!(
            "input not decayed at r_max = {}: edge/sup = {tail:.3e}",
            input.r_max()
        ));
    }
    if !guard.is_clean() {
        warnings.push(format!(
            "{} significant outputs beyond the oscillation guard ρ = {:.3}",
            guard.significant.len(),
            guard.rho_guard
        ));
    }
    Ok(Transformed {
        profile: RadialProfile::new(out_grid.clone(), values)?,
        guard,
        tail_estimate: tail,
        warnings,
    })
}

/// The inverse transform; on radial functions it is the same kernel.
pub fn radial_inverse_transform(g: &RadialProfile, out_grid: &RadialGrid) -> Result<Transformed> {
    radial_dunkl_transform(g, out_grid)
}

/// `F⁻¹(symbol · F f)` on the grid of `f`.
pub fn spectral_convolve(f: &RadialProfile, symbol: &dyn RadialSymbol) -> Result<Transformed> {
    let grid = f.grid();
    let fwd = radial_dunkl_transform(f, grid)?;
    let filtered = fwd.profile.map(|xi, v| v * symbol.eval(xi));
    let mut back = radial_inverse_transform(&filtered, grid)?;
    // Forward flags mark under-resolved spectral content that survived the symbol.
    let mut guard = guard_for(grid, grid, filtered.values());
    guard.merge(&back.guard);
    back.guard = guard;
    back.warnings.splice(
        0..0,
        fwd.warnings.into_iter().filter(|w| w.starts_with("input")),
    );
    Ok(back)
}

/// Composite 16-point nodes on `[a, b]` with the weight `s^{2λ+1}` folded in,
/// Gauss–Jacobi on a first panel that starts at a fractional-power branch point.
pub(crate) fn band_nodes(params: DunklParams, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let e = params.radial_exponent();
    let h = (b - a) / panels as f64;
    let gl = GaussLegendre::new(16);
    let mut nodes: Vec<(f64, f64)> = if a == 0.0 && e.fract() != 0.0 {
        GaussJacobi::new(16, e).mapped(0.0, h).collect()
    } else {
        gl.mapped(a, a + h)
            .map(|(s, w)| (s, w * s.powf(e)))
            .collect()
    };
    for p in 1..panels {
        let lo = a + p as f64 * h;
        nodes.extend(gl.mapped(lo, lo + h).map(|(s, w)| (s, w * s.powf(e))));
    }
    nodes
}

fn check_support(a: f64, b: f64) -> Result<()> {
    if !(0.0 <= a && a < b && b.is_finite()) {
        return domain(format!(
            "support must satisfy 0 ≤ a < b < ∞, got [{a}, {b}]"
        ));
    }
    Ok(())
}

/// `‖F⁻¹g‖_{2,k}` for `g` supported in `support`, by Plancherel. `|g|²` is
/// assumed smooth on the scale of `(b − a)/panels`.
pub fn band_l2(
    params: DunklParams,
    support: (f64, f64),
    panels: usize,
    g: impl Fn(f64) -> Complex64,
) -> Result<f64> {
    check_support(support.0, support.1)?;
    let nodes = band_nodes(params, support.0, support.1, panels.max(1));
    Ok(
        (sphere_area(params.n()) * nodes.iter().map(|&(s, w)| w * g(s).norm_sqr()).sum::<f64>())
            .sqrt(),
    )
}

/// `d ∫_a^b g(s) 𝒥_λ(|x|s) s^{2λ+1} ds` at each `x`, for a symbol supported
/// in `[a, b]`. Panels resolve the fastest oscillation `max|x|·b`.
pub fn radial_inverse_at(
    params: DunklParams,
    support: (f64, f64),
    g: impl Fn(f64) -> Complex64 + Sync,
    xs: &[f64],
) -> Result<Vec<Complex64>> {
    let (a, b) = support;
    check_support(a, b)?;
    if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
        return domain(format!("abscissa must be finite, got {x}"));
    }
    let x_max = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    // Four panels of 16 nodes per unit of phase advance over π, at least 32.
    let panels = ((x_max * (b - a) / std::f64::consts::PI).ceil() as usize * 4).max(32);
    let weighted: Vec<(f64, Complex64)> = band_nodes(params, a, b, panels)
        .into_iter()
        .map(|(s, w)| (s, w * g(s)))
        .filter(|n| n.1 != Complex64::new(0.0, 0.0))
        .collect();
    let bes = NormalizedBessel::new(params.order());
    let d = transform_constant(params);
    Ok(xs
        .par_iter()
        .map(|&x| {
            d * weighted
                .iter()
                .map(|&(s, w)| w * bes.eval(x.abs() * s))
                .sum::<Complex64>()
        })
        .collect())
}

/// Radial profiles `F⁻¹g` with `g` supported in a band `[a, b]`, synthesized
/// at uniform points `x_i = i·h` on `[0, x_max]`. Holds bands far beyond what
/// a self-dual grid of the same extent can represent. The Bessel matrix is
/// built once, so each symbol costs one matrix–vector product.
#[derive(Debug, Clone)]
pub struct BandSampler {
    params: DunklParams,
    xs: Vec<f64>,
    step: f64,
    nodes: Vec<(f64, f64)>,
    matrix: Vec<f64>,
}

impl BandSampler {
    /// `phase` bounds the extra oscillation `e^{iτs}` a symbol may carry,
    /// `|τ| ≤ phase`, so that the `s`-nodes resolve `(x_max + phase)·s`.
    pub fn new(
        params: DunklParams,
        support: (f64, f64),
        x_max: f64,
        step: f64,
        phase: f64,
    ) -> Result<Self> {
        let (a, b) = support;
        check_support(a, b)?;
        if !(x_max > 0.0
            && step > 0.0
            && step <= x_max
            && phase >= 0.0
            && x_max.is_finite()
            && phase.is_finite())
        {
            return domain(format!(
                "bad sampling window: x_max = {x_max}, step = {step}, phase = {phase}"
            ));
        }
        let count = (x_max / step).round() as usize + 1;
        let xs: Vec<f64> = (0..count).map(|i| i as f64 * step).collect();
        // One 16-node panel per period of the fastest phase.
        let panels =
            (((x_max + phase) * (b - a) / (2.0 * std::f64::consts::PI)).ceil() as usize).max(64);
        let nodes = band_nodes(params, a, b, panels);
        let bes = NormalizedBessel::new(params.order());
        let m = nodes.len();
        let mut matrix = vec![0.0; count * m];
        matrix
            .par_chunks_mut(m)
            .zip(xs.par_iter())
            .for_each(|(row, &x)| {
                for (v, &(s, _)) in row.iter_mut().zip(&nodes) {
                    *v = bes.eval(x * s);
                }
            });
        Ok(Self {
            params,
            xs,
            step,
            nodes,
            matrix,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.xs
    }

    /// `F⁻¹g` at every sample point.
    pub fn synthesize(&self, g: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        let d = transform_constant(self.params);
        let c: Vec<Complex64> = self.nodes.iter().map(|&(s, w)| d * w * g(s)).collect();
        let m = c.len();
        self.matrix
            .par_chunks(m)
            .map(|row| {
                let (mut re, mut im) = (0.0, 0.0);
                for (k, v) in row.iter().zip(&c) {
                    re += k * v.re;
                    im += k * v.im;
                }
                Complex64::new(re, im)
            })
            .collect()
    }

    /// `F⁻¹g_j` for `j < cols` as one matrix product, with `g(j, s)` the
    /// spectrum of column `j`. Returns the columns at every sample point.
    pub fn synthesize_columns(
        &self,
        cols: usize,
        g: impl Fn(usize, f64) -> Complex64,
    ) -> Vec<Vec<Complex64>> {
        let d = transform_constant(self.params);
        let (m, count, w) = (self.nodes.len(), self.xs.len(), 2 * cols);
        let mut b = vec![0.0; m * w];
        for (row, &(s, wt)) in b.chunks_mut(w).zip(&self.nodes) {
            for j in 0..cols {
                let c = d * wt * g(j, s);
                row[2 * j] = c.re;
                row[2 * j + 1] = c.im;
            }
        }
        let mut c = vec![0.0; count * w];
        // SAFETY: all three buffers are dense row-major with the dimensions and strides given.
        unsafe {
            matrixmultiply::dgemm(
                count,
                m,
                w,
                1.0,
                self.matrix.as_ptr(),
                m as isize,
                1,
                b.as_ptr(),
                w as isize,
                1,
                0.0,
                c.as_mut_ptr(),
                w as isize,
                1,
            );
        }
        (0..cols)
            .map(|j| {
                c.chunks(w)
                    .map(|r| Complex64::new(r[2 * j], r[2 * j + 1]))
                    .collect()
            })
            .collect()
    }

    /// `‖F⁻¹g‖_{2,k}`, by Plancherel from the band nodes.
    pub fn spectral_l2(&self, g: impl Fn(f64) -> Complex64) -> f64 {
        let a = sphere_area(self.params.n());
        (a * self
            .nodes
            .iter()
            .map(|&(s, w)| w * g(s).norm_sqr())
            .sum::<f64>())
        .sqrt()
    }

    /// `‖v‖_{p,k}` over the sample points by the trapezoid rule; the sup for `p = ∞`.
    pub fn lp(&self, v: &[Complex64], p: f64) -> f64 {
        let sup = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if p.is_infinite() || sup == 0.0 {
            return sup;
        }
        let e = self.params.radial_exponent();
        let n = v.len();
        let s: f64 = v
            .iter()
            .zip(&self.xs)
            .enumerate()
            .map(|(i, (v, x))| {
                let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
                w * (v.norm() / sup).powf(p) * x.powf(e)
            })
            .sum();
        sup * (sphere_area(self.params.n()) * s * self.step).powf(1.0 / p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dunkl::GridSpec;

    #[test]
    fn gaussian_fixed_point_small_grid() {
        let p = DunklParams::new(0.5, 1).unwrap();
        let grid = RadialGrid::new(
            p,
            GridSpec {
                r_max: 16.0,
                count: 512,
                panel: 0.5,
            },
        )
        .unwrap();
        let g = RadialProfile::from_real_fn(&grid, |r| (-r * r / 2.0).exp());
        let out = radial_dunkl_transform(&g, &grid).unwrap();
        assert!(out.profile.rel_sup_diff(&g) < 1e-12);
        assert!(out.guard.is_clean());
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn mismatched_params_rejected() {
        let a = RadialGrid::new(
            DunklParams::new(0.0, 1).unwrap(),
            GridSpec {
                r_max: 4.0,
                count: 64,
                panel: 0.25,
            },
        )
        .unwrap();
        let b = RadialGrid::new(
            DunklParams::new(0.5, 1).unwrap(),
            GridSpec {
                r_max: 4.0,
                count: 64,
                panel: 0.25,
            },
        )
        .unwrap();
        let f = RadialProfile::from_real_fn(&a, |r| (-r * r).exp());
        assert!(matches!(
            radial_dunkl_transform(&f, &b),
            Err(crate::Error::Usage(_))
        ));
    }

    #[test]
    fn slow_decay_warns() {
        let p = DunklParams::new(0.0, 3).unwrap();
        let grid = RadialGrid::new(
            p,
            GridSpec {
                r_max: 8.0,
                count: 256,
                panel: 0.5,
            },
        )
        .unwrap();
        let f = RadialProfile::from_real_fn(&grid, |r| 1.0 / (1.0 + r * r));
        let out = radial_dunkl_transform(&f, &grid).unwrap();
        assert!(out.tail_estimate > 1e-3);
        assert!(!out.warnings.is_empty());
    }
}
