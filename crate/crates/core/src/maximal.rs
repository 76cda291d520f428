//! Time-dilated operator fields `A_α(f)(x, t)`, `M_α(f)(x, t)`, their
//! suprema over a time grid, and the sup bound for `C¹` functions on an interval.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dunkl::{BandSampler, DunklParams, GuardReport, SpectralProfile};
use crate::error::{domain, usage, Result};
use crate::multiplier::{eval_symbol, Sign, SymbolSpec};
use crate::specfun::lp_bump;

/// Default half-width, in octaves, of the time range `[2^{−J}, 2^J]`.
pub const OCTAVES: i32 = 6;
/// Largest `t·(spectral node gap)` before the dilated symbol is under-resolved.
pub const SYMBOL_RESOLUTION: f64 = 0.1;

/// Log-spaced times on `[2^{j_lo}, 2^{j_hi}]`, `per_octave` steps per octave.
pub fn octave_grid(j_lo: i32, j_hi: i32, per_octave: usize) -> Result<Vec<f64>> {
    if j_hi < j_lo || per_octave == 0 {
        return usage(format!(
            "empty octave range [{j_lo}, {j_hi}] with {per_octave} steps"
        ));
    }
    let steps = (j_hi - j_lo) as usize * per_octave;
    Ok((0..=steps)
        .map(|i| 2f64.powf(j_lo as f64 + i as f64 / per_octave as f64))
        .collect())
}

/// Uniform times on `[a, b]`, `count ≥ 2` points.
pub fn linear_grid(a: f64, b: f64, count: usize) -> Result<Vec<f64>> {
    if !(0.0 < a && a <= b) || count < 2 {
        return usage(format!("bad time range [{a}, {b}] with {count} points"));
    }
    Ok((0..count)
        .map(|i| a + (b - a) * i as f64 / (count - 1) as f64)
        .collect())
}

/// One operator slice per time, with the spectrum it was computed from.
#[derive(Debug, Clone)]
pub struct TimeField<P> {
    pub t_points: Vec<f64>,
    pub slices: Vec<P>,
    pub guards: Vec<GuardReport>,
    pub source: SymbolSpec,
    pub warnings: Vec<String>,
    spectrum: P,
}

impl<P: SpectralProfile> TimeField<P> {
    pub fn value(&self, x: usize, t: usize) -> Complex64 {
        self.slices[t].samples()[x]
    }

    /// Indices of slices with significant content past the guard.
    pub fn flagged_slices(&self) -> Vec<usize> {
        self.guards
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_clean())
            .map(|(i, _)| i)
            .collect()
    }

    /// Inserts the geometric midpoint between each pair of adjacent times.
    pub fn refine(&mut self) -> Result<()> {
        let mids: Vec<f64> = self
            .t_points
            .windows(2)
            .map(|w| (w[0] * w[1]).sqrt())
            .collect();
        let (slices, guards) = slices_at(&self.spectrum, &self.source, &mids)?;
        let mut merged: Vec<(f64, P, GuardReport)> =
            Vec::with_capacity(self.t_points.len() + mids.len());
        let old = self
            .t_points
            .iter()
            .copied()
            .zip(self.slices.drain(..))
            .zip(self.guards.drain(..))
            .map(|((t, s), g)| (t, s, g));
        merged.extend(old);
        merged.extend(
            mids.into_iter()
                .zip(slices)
                .zip(guards)
                .map(|((t, s), g)| (t, s, g)),
        );
        merged.sort_by(|a, b| a.0.total_cmp(&b.0));
        self.t_points = merged.iter().map(|m| m.0).collect();
        self.guards = merged.iter().map(|m| m.2.clone()).collect();
        self.slices = merged.into_iter().map(|m| m.1).collect();
        Ok(())
    }
}

fn check_times(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return usage("time grid is empty");
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return domain(format!("times must be positive and finite, got {t}"));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return usage("time grid must be strictly increasing");
    }
    Ok(())
}

fn slices_at<P: SpectralProfile>(
    spectrum: &P,
    spec: &SymbolSpec,
    ts: &[f64],
) -> Result<(Vec<P>, Vec<GuardReport>)> {
    let out: Result<Vec<(P, GuardReport)>> = ts
        .par_iter()
        .map(|&t| {
            let st = spec.clone().with_time(t)?;
            let filtered = spectrum.with_values(
                spectrum
                    .nodes()
                    .iter()
                    .zip(spectrum.samples())
                    .map(|(&xi, &v)| v * eval_symbol(&st, xi.abs()))
                    .collect(),
            )?;
            let mut guard = filtered.spectral_guard();
            let back = filtered.inverse()?;
            guard.merge(&back.guard);
            Ok((back.profile, guard))
        })
        .collect();
    Ok(out?.into_iter().unzip())
}

/// The field of `F_k⁻¹(m(t|ξ|) F_k f)` over `t_grid` for any symbol.
pub fn field<P: SpectralProfile>(f: &P, spec: &SymbolSpec, t_grid: &[f64]) -> Result<TimeField<P>> {
    check_times(t_grid)?;
    let fwd = f.forward()?;
    let (slices, guards) = slices_at(&fwd.profile, spec, t_grid)?;
    let mut warnings = fwd.warnings;
    let gap = max_gap(fwd.profile.nodes());
    if let Some(t) = t_grid.iter().find(|&&t| t * gap > SYMBOL_RESOLUTION) {
        warnings.push(format!(
            "symbol under-resolved for t ≥ {t}: spectral node gap {gap:.3e}"
        ));
    }
    Ok(TimeField {
        t_points: t_grid.to_vec(),
        slices,
        guards,
        source: spec.clone(),
        warnings,
        spectrum: fwd.profile,
    })
}

fn max_gap(nodes: &[f64]) -> f64 {
    nodes
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max)
}

/// `A_α(f)(x, t)`, or the dyadic piece `A_α^ν` with symbol `ψ(2^{−ν}t|ξ|)|tξ|^{−α}e^{±it|ξ|}`.
pub fn field_a<P: SpectralProfile>(
    f: &P,
    alpha: f64,
    sign: Sign,
    t_grid: &[f64],
    nu: Option<u32>,
) -> Result<TimeField<P>> {
    let mut spec = SymbolSpec::oscillating(alpha, sign)?;
    if let Some(nu) = nu {
        spec = spec.with_nu(nu);
    }
    field(f, &spec, t_grid)
}

/// `M_α(f)(x, t)` with symbol `𝒥_{α+λ}(t|ξ|)`; the spherical mean at `α = 0`.
pub fn field_m<P: SpectralProfile>(f: &P, alpha: f64, t_grid: &[f64]) -> Result<TimeField<P>> {
    let spec = SymbolSpec::spherical(alpha, f.params().lambda())?;
    field(f, &spec, t_grid)
}

/// Pointwise supremum over the time grid, with refinement diagnostics.
#[derive(Debug, Clone)]
pub struct MaximalSup<P> {
    pub profile: P,
    pub rounds: usize,
    pub converged: bool,
    /// Relative sup-norm change at the last refinement.
    pub last_change: f64,
    /// The iterate before `profile`, kept when refinement did not converge.
    pub previous: Option<P>,
}

/// `max_t |field(x, t)|` over the current grid.
pub fn maximal_sup<P: SpectralProfile>(field: &TimeField<P>) -> Result<P> {
    let n = field.slices[0].samples().len();
    let mut best = vec![0.0f64; n];
    for s in &field.slices {
        for (b, v) in best.iter_mut().zip(s.samples()) {
            *b = b.max(v.norm());
        }
    }
    field.slices[0].with_values(best.into_iter().map(|b| Complex64::new(b, 0.0)).collect())
}

/// Doubles the time resolution until the supremum moves by less than `tol`
/// relative, at most `max_rounds` times.
pub fn maximal_sup_refined<P: SpectralProfile>(
    field: &mut TimeField<P>,
    tol: f64,
    max_rounds: usize,
) -> Result<MaximalSup<P>> {
    let mut current = maximal_sup(field)?;
    let mut change = f64::INFINITY;
    for round in 1..=max_rounds {
        field.refine()?;
        let next = maximal_sup(field)?;
        change = rel_change(&current, &next);
        let prev = std::mem::replace(&mut current, next);
        if change < tol {
            return Ok(MaximalSup {
                profile: current,
                rounds: round,
                converged: true,
                last_change: change,
                previous: None,
            });
        }
        if round == max_rounds {
            return Ok(MaximalSup {
                profile: current,
                rounds: round,
                converged: false,
                last_change: change,
                previous: Some(prev),
            });
        }
    }
    Ok(MaximalSup {
        profile: current,
        rounds: 0,
        converged: false,
        last_change: change,
        previous: None,
    })
}

fn rel_change<P: SpectralProfile>(a: &P, b: &P) -> f64 {
    let sup = b.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let d = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    if sup == 0.0 {
        d
    } else {
        d / sup
    }
}

/// Time slices synthesized per matrix product.
const TIME_BLOCK: usize = 128;

/// `max_{t ∈ t_grid} |F⁻¹(m(t·)g)|` on the sampler's points, for data whose
/// spectrum `g` lives in the sampler's band. Slices are reduced block by block.
pub fn band_maximal(
    sampler: &BandSampler,
    spec: &SymbolSpec,
    g: impl Fn(f64) -> Complex64 + Sync,
    t_grid: &[f64],
) -> Result<Vec<f64>> {
    check_times(t_grid)?;
    let specs: Vec<SymbolSpec> = t_grid
        .iter()
        .map(|&t| spec.clone().with_time(t))
        .collect::<Result<_>>()?;
    let mut best = vec![0.0f64; sampler.points().len()];
    for chunk in specs.chunks(TIME_BLOCK) {
        for slice in
            sampler.synthesize_columns(chunk.len(), |j, s| eval_symbol(&chunk[j], s) * g(s))
        {
            for (b, v) in best.iter_mut().zip(&slice) {
                *b = b.max(v.norm());
            }
        }
    }
    Ok(best)
}

/// Sampling window for dyadic pieces at scale `2^ν`: the band `[2^{ν−1}, 2^{ν+1}]`
/// on `x ∈ [0, 9/4 + 24·2^{−ν}]` at four samples per `2^{−ν}`. Data may carry a
/// phase `e^{−iτ|ξ|}` with `|τ| ≤ 2 + 16·2^{−ν}` on top of the operator's `t ≤ 2`.
pub fn dyadic_sampler(params: DunklParams, nu: u32) -> Result<BandSampler> {
    let scale = 2f64.powi(nu as i32);
    BandSampler::new(
        params,
        (scale / 2.0, 2.0 * scale),
        2.25 + 24.0 / scale,
        0.25 / scale,
        4.0 + 16.0 / scale,
    )
}

/// `t ∈ [1, 2]` at four samples per `2^{−ν}`.
pub fn dyadic_times(nu: u32) -> Vec<f64> {
    let n = 4 * (1usize << nu);
    (0..=n).map(|i| 1.0 + i as f64 / n as f64).collect()
}

/// `‖sup_{1≤t≤2}|F⁻¹(m(t·)g)|‖_p / ‖F⁻¹g‖_p` on a dyadic window. At `p = 2`
/// the denominator comes from Plancherel.
pub fn band_maximal_ratio(
    sampler: &BandSampler,
    spec: &SymbolSpec,
    g: impl Fn(f64) -> Complex64 + Sync,
    t_grid: &[f64],
    p: f64,
) -> Result<f64> {
    if !(p >= 1.0) {
        return domain(format!("L^p exponent must be ≥ 1, got {p}"));
    }
    let sup: Vec<Complex64> = band_maximal(sampler, spec, &g, t_grid)?
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    let den = if p == 2.0 {
        sampler.spectral_l2(&g)
    } else {
        sampler.lp(&sampler.synthesize(&g), p)
    };
    if den == 0.0 {
        return domain("test profile has zero norm");
    }
    Ok(sampler.lp(&sup, p) / den)
}

/// `‖sup_{1≤t≤2}|A_α^ν f|‖_p / ‖f‖_p` for data with `F_k f(ξ) = ψ(2^{−ν}|ξ|)·shape(2^{−ν}|ξ|)`.
pub fn dyadic_maximal_ratio(
    params: DunklParams,
    alpha: f64,
    sign: Sign,
    nu: u32,
    shape: impl Fn(f64) -> Complex64 + Sync,
    p: f64,
) -> Result<f64> {
    let scale = 2f64.powi(nu as i32);
    let sampler = dyadic_sampler(params, nu)?;
    let g = |s: f64| {
        let w = lp_bump(s / scale);
        if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            w * shape(s / scale)
        }
    };
    let spec = SymbolSpec::oscillating(alpha, sign)?.with_nu(nu);
    band_maximal_ratio(&sampler, &spec, g, &dyadic_times(nu), p)
}

/// Both sides of `sup_I|F| ≤ λ^{−1/p}‖F‖_{L^p(I)} + λ^{1/p'}‖F'‖_{L^p(I)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupBound {
    pub lhs: f64,
    pub rhs: f64,
}

impl SupBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// Evaluates the sup bound from samples of `F` and `F'` on a uniform grid
/// of `interval` (endpoints included).
pub fn sup_bound_check(
    interval: (f64, f64),
    f: &[f64],
    df: &[f64],
    lambda: f64,
    p: f64,
) -> Result<SupBound> {
    let (a, b) = interval;
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("sup bound needs 1 < p < ∞, got {p}"));
    }
    if !(a < b) {
        return domain(format!(
            "interval must have positive length, got [{a}, {b}]"
        ));
    }
    if !(lambda > 0.0 && lambda <= b - a) {
        return domain(format!(
            "λ must lie in (0, |I|] = (0, {}], got {lambda}",
            b - a
        ));
    }
    if f.len() != df.len() || f.len() < 2 {
        return usage(format!(
            "need matching samples of F and F', got {} and {}",
            f.len(),
            df.len()
        ));
    }
    let h = (b - a) / (f.len() - 1) as f64;
    let norm = |v: &[f64]| {
        integrate_uniform(&v.iter().map(|x| x.abs().powf(p)).collect::<Vec<_>>(), h).powf(1.0 / p)
    };
    let lhs = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let rhs = lambda.powf(-1.0 / p) * norm(f) + lambda.powf(1.0 - 1.0 / p) * norm(df);
    Ok(SupBound { lhs, rhs })
}

/// Outcome of a randomized sup-bound campaign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Campaign {
    pub seed: u64,
    pub instances: usize,
    pub violations: usize,
    /// Largest `lhs/rhs` seen.
    pub worst_ratio: f64,
}

/// Checks the sup bound on random trigonometric sums `F` with random
/// intervals, `λ ∈ (0, |I|]` and `p ∈ (1, 7)`, sampled at 4001 points.
pub fn sup_bound_campaign(seed: u64, instances: usize) -> Result<Campaign> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Campaign {
        seed,
        instances,
        violations: 0,
        worst_ratio: 0.0,
    };
    let n = 4001;
    for _ in 0..instances {
        let (a, len) = (rng.gen_range(-5.0..5.0), rng.gen_range(0.1..4.0));
        let terms: Vec<(f64, f64, f64)> = (0..rng.gen_range(1..8))
            .map(|_| {
                (
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.0..30.0),
                )
            })
            .collect();
        let ts = (0..n).map(|i| a + len * i as f64 / (n - 1) as f64);
        let (f, df): (Vec<f64>, Vec<f64>) = ts
            .map(|t| {
                terms.iter().fold((0.0, 0.0), |(v, d), &(c, s, w)| {
                    let (sn, cs) = (w * t).sin_cos();
                    (v + c * cs + s * sn, d + w * (s * cs - c * sn))
                })
            })
            .unzip();
        let lambda = rng.gen_range(0.0..1.0f64).max(1e-3) * len;
        let p = 1.0 + rng.gen_range(0.01..6.0f64);
        let b = sup_bound_check((a, a + len), &f, &df, lambda, p)?;
        if !b.holds() {
            out.violations += 1;
        }
        out.worst_ratio = out.worst_ratio.max(b.lhs / b.rhs);
    }
    Ok(out)
}

/// Composite Simpson for an odd sample count, trapezoid otherwise.
fn integrate_uniform(v: &[f64], h: f64) -> f64 {
    let n = v.len();
    if n >= 3 && n % 2 == 1 {
        let inner: f64 = v[1..n - 1]
            .iter()
            .enumerate()
            .map(|(i, x)| if i % 2 == 0 { 4.0 * x } else { 2.0 * x })
            .sum();
        h / 3.0 * (v[0] + v[n - 1] + inner)
    } else {
        h * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[n - 1]))
    }
}

/// `sup |Φ(x)|(1+|x|)^{2γ_k+n+1}` over the samples: the constant in the
/// decay hypothesis for maximal convolution bounds.
pub fn majorant_constant(homdim: f64, xs: &[f64], phi: &[f64]) -> f64 {
    xs.iter()
        .zip(phi)
        .map(|(x, v)| v.abs() * (1.0 + x.abs()).powf(homdim + 1.0))
        .fold(0.0, f64::max)
}
