use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::Sign;
use crate::dunkl::{transform_constant, DunklParams};
use crate::error::{domain, range, Result};
use crate::quadrature::GaussLegendre;
use crate::specfun::{cutoff_phi, lp_bump, AsymptoticExpansion, NormalizedBessel, N_MAX};

/// Half-width of the excluded collar around `|x| = 1` for the quadrature path.
pub const COLLAR: f64 = 1e-3;
pub const NU_MAX_DEFAULT: u32 = 14;
pub const N_DEFAULT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    Quadrature,
    Asymptotic,
}

/// The open interval `(γ_k + (n−1)/2, γ_k + (n+1)/2)` of α where the kernel
/// machinery is proven to apply.
pub fn regime_window(params: DunklParams) -> (f64, f64) {
    let l = params.lambda();
    (l + 0.5, l + 1.5)
}

fn in_regime(alpha: f64, params: DunklParams) -> bool {
    let (a, b) = regime_window(params);
    alpha > a && alpha < b
}

fn regime_warning(alpha: f64, params: DunklParams) -> Option<String> {
    let (a, b) = regime_window(params);
    (!in_regime(alpha, params)).then(|| format!("α = {alpha} outside the kernel regime ({a}, {b})"))
}

/// One kernel value with its diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Complex64,
    /// Bound on the neglected part: dyadic tail (quadrature) or truncated remainder (asymptotic).
    pub tail_bound: f64,
    /// Dyadic blocks `K^ν(x)` (quadrature path only).
    pub blocks: Vec<Complex64>,
    /// Largest Richardson discrepancy among accepted blocks, relative to the
    /// block's absolute integral.
    pub richardson: f64,
    pub warnings: Vec<String>,
}

fn conj_if(v: Complex64, sign: Sign) -> Complex64 {
    match sign {
        Sign::Plus => v,
        Sign::Minus => v.conj(),
    }
}

/// Composite Gauss–Legendre over `[a, b]` with `panels` equal panels, plus the
/// sum of absolute contributions for error scaling.
fn panel_sum(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    panels: usize,
    f: &(dyn Fn(f64) -> Complex64 + Sync),
) -> (Complex64, f64) {
    let h = (b - a) / panels as f64;
    let parts: Vec<(Complex64, f64)> = (0..panels)
        .into_par_iter()
        .with_min_len(256)
        .map(|p| {
            let lo = a + p as f64 * h;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut mag = 0.0;
            for (x, w) in rule.mapped(lo, lo + h) {
                let v = f(x) * w;
                acc += v;
                mag += v.norm();
            }
            (acc, mag)
        })
        .collect();
    // Ordered reduction keeps results independent of scheduling.
    parts
        .into_iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(s, m), (a, b)| {
            (s + a, m + b)
        })
}

/// Integrates with panels of at most `max_panel`, halving until two successive
/// results agree. Returns the value and the accepted discrepancy relative to
/// `∫|f|`.
fn richardson(
    a: f64,
    b: f64,
    max_panel: f64,
    f: &(dyn Fn(f64) -> Complex64 + Sync),
) -> (Complex64, f64) {
    let rule = GaussLegendre::new(6);
    let mut panels = ((b - a) / max_panel).ceil().max(1.0) as usize;
    let (mut prev, _) = panel_sum(&rule, a, b, panels, f);
    let mut disc = f64::INFINITY;
    for _ in 0..5 {
        panels *= 2;
        let (cur, mag) = panel_sum(&rule, a, b, panels, f);
        let diff = (cur - prev).norm();
        disc = if mag > 0.0 { diff / mag } else { 0.0 };
        prev = cur;
        if diff <= 1e-13 * mag + 1e-11 * cur.norm() {
            break;
        }
    }
    (prev, disc)
}

/// Dyadic block `K^ν(x) = d ∫ ψ(2^{−ν}s) s^{−α+2λ+1} e^{is} 𝒥_λ(xs) ds` for the `+` sign.
pub fn kernel_block(alpha: f64, x: f64, params: DunklParams, nu: u32) -> (Complex64, f64) {
    let x = x.abs();
    let b = NormalizedBessel::new(params.order());
    let e = -alpha + 2.0 * params.lambda() + 1.0;
    let scale = 2f64.powi(nu as i32);
    let f = move |s: f64| Complex64::from_polar(lp_bump(s / scale) * s.powf(e) * b.eval(x * s), s);
    let period = 2.0 * PI / (1.0 + x);
    let (v, disc) = richardson(0.5 * scale, 2.0 * scale, period / 4.0, &f);
    (v * transform_constant(params), disc)
}

/// `K_α(x)` as the sum of dyadic blocks `ν = 0..=nu_max`.
pub fn kernel_quadrature(
    alpha: f64,
    x: f64,
    params: DunklParams,
    nu_max: u32,
) -> Result<KernelValue> {
    kernel_quadrature_signed(alpha, x, params, nu_max, Sign::Plus)
}

pub fn kernel_quadrature_signed(
    alpha: f64,
    x: f64,
    params: DunklParams,
    nu_max: u32,
    sign: Sign,
) -> Result<KernelValue> {
    let x = x.abs();
    if (x - 1.0).abs() < COLLAR {
        return range(format!(
            "|x| = {x} lies in the light-cone collar |x−1| < {COLLAR}; use kernel_asymptotic"
        ));
    }
    if !(alpha > 0.0) {
        return domain(format!("α must be positive, got {alpha}"));
    }
    let mut blocks = Vec::with_capacity(nu_max as usize + 1);
    let mut worst = 0f64;
    for nu in 0..=nu_max {
        let (v, disc) = kernel_block(alpha, x, params, nu);
        worst = worst.max(disc);
        blocks.push(v);
    }
    let value: Complex64 = blocks.iter().sum();
    let mut warnings: Vec<String> = regime_warning(alpha, params).into_iter().collect();
    // Geometric envelope C·r^ν with r = 2^{λ+1/2−α}, anchored on the last three blocks.
    let r = 2f64.powf(params.lambda() + 0.5 - alpha);
    let from = blocks.len().saturating_sub(3);
    let c = blocks
        .iter()
        .enumerate()
        .skip(from)
        .map(|(nu, b)| b.norm() / r.powi(nu as i32))
        .fold(0.0, f64::max);
    let tail_bound = if r < 1.0 {
        c * r.powi(nu_max as i32 + 1) / (1.0 - r)
    } else {
        f64::INFINITY
    };
    if !tail_bound.is_finite() {
        warnings.push("dyadic tail bound diverges outside the regime".into());
    }
    if worst > 1e-10 {
        warnings.push(format!("block Richardson discrepancy {worst:.2e}"));
    }
    Ok(KernelValue {
        value: conj_if(value, sign),
        tail_bound,
        blocks: blocks.into_iter().map(|b| conj_if(b, sign)).collect(),
        richardson: worst,
        warnings,
    })
}

/// `I_μ(τ) = ∫_{1/2}^∞ φ(s) s^μ e^{iτs} ds`, using quadrature on the cutoff's
/// transition `[1/2, 1]` and a rotated contour for `∫_1^∞`.
pub fn profile_integral(mu: f64, tau: f64) -> Result<Complex64> {
    if tau == 0.0 && mu >= -1.0 {
        return domain(format!("profile integral diverges at τ = 0 for μ = {mu}"));
    }
    let rule = GaussLegendre::new(16);
    let panels = ((2.0 * tau.abs() / PI).ceil() as usize).max(16);
    let h = 0.5 / panels as f64;
    let mut near = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = 0.5 + p as f64 * h;
        near += rule.integrate_complex(lo, lo + h, |s| {
            Complex64::from_polar(cutoff_phi(s) * s.powf(mu), tau * s)
        });
    }
    let far = if tau == 0.0 {
        Complex64::new(-1.0 / (mu + 1.0), 0.0)
    } else {
        half_line_tail(mu, tau, 1.0)
    };
    Ok(near + far)
}

/// `∫_a^∞ s^μ e^{iτs} ds` (Abel sense for `μ ≥ −1`) by `s = a + iu/τ`:
/// `(i/τ) e^{iτa} ∫_0^∞ (a + iu/τ)^μ e^{−u} du`.
fn half_line_tail(mu: f64, tau: f64, a: f64) -> Complex64 {
    let rule = GaussLegendre::new(16);
    let dist = a * tau.abs();
    let mut u = 0.0;
    let mut acc = Complex64::new(0.0, 0.0);
    while u < 60.0 {
        let step = 0.5 * dist.max(u).max(1e-12).min(u.max(2.0));
        let hi = (u + step).min(60.0);
        acc += rule.integrate_complex(u, hi, |v| {
            (Complex64::new(a, v / tau)).powf(mu) * (-v).exp()
        });
        u = hi;
    }
    Complex64::new(0.0, 1.0 / tau) * Complex64::from_polar(1.0, tau * a) * acc
}

/// `K_α(x)` from the `N`-term expansion: the profile integrals at `1 ± x`
/// plus the remainder integral, truncated where the fitted remainder bound is negligible.
pub fn kernel_asymptotic(
    alpha: f64,
    x: f64,
    n_terms: usize,
    params: DunklParams,
) -> Result<KernelValue> {
    kernel_asymptotic_signed(alpha, x, n_terms, params, Sign::Plus)
}

pub fn kernel_asymptotic_signed(
    alpha: f64,
    x: f64,
    n_terms: usize,
    params: DunklParams,
    sign: Sign,
) -> Result<KernelValue> {
    if !(x > 0.0) {
        return domain(format!("kernel_asymptotic needs x > 0, got {x}"));
    }
    if x == 1.0 {
        return domain("x = 1 is the singular point of the kernel");
    }
    if n_terms == 0 || n_terms > N_MAX {
        return domain(format!("expansion order {n_terms} outside 1..={N_MAX}"));
    }
    let l = params.lambda();
    let beta = l + 0.5 - alpha;
    let order = params.order();
    let mut exp = AsymptoticExpansion::new(order, n_terms)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (ell, (a, ap)) in exp.coeffs.iter().zip(&exp.conj_coeffs).enumerate() {
        let mu = beta - ell as f64;
        let w = x.powf(-l - 0.5 - ell as f64);
        sum += w * (a * profile_integral(mu, 1.0 + x)? + ap * profile_integral(mu, 1.0 - x)?);
    }
    // Remainder integral ∫ φ(s) s^{2λ+1−α} R_N(xs) e^{is} ds.
    let b = NormalizedBessel::new(order);
    let e = 2.0 * l + 1.0 - alpha;
    let s_max = f64::max(200.0, 200.0 / x);
    let period = 2.0 * PI / (1.0 + x);
    let exp_ref = &exp;
    let b_ref = &b;
    let f = move |s: f64| {
        Complex64::from_polar(
            cutoff_phi(s) * s.powf(e) * exp_ref.remainder(b_ref, x * s),
            s,
        )
    };
    let (rem, _) = richardson(0.5, s_max, period / 4.0, &f);
    let d = transform_constant(params);
    // Bound on ∫_{s_max}^∞ with c_N fitted over the arguments actually used.
    let c_n = exp.calibrate(x * s_max, 4.0 * x * s_max, 64);
    let p = n_terms as f64 + l + 0.5;
    let decay = p - e - 1.0;
    let tail_bound = if decay > 0.0 {
        d * c_n * x.powf(-p) * s_max.powf(-decay) / decay
    } else {
        f64::INFINITY
    };
    let warnings = regime_warning(alpha, params).into_iter().collect();
    Ok(KernelValue {
        value: conj_if(d * (sum + rem), sign),
        tail_bound,
        blocks: Vec::new(),
        richardson: 0.0,
        warnings,
    })
}

/// Blow-up fit near the light cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupFit {
    pub exponent: f64,
    /// `|1 − x|` window of the fit.
    pub window: (f64, f64),
    /// Relative RMS residual of the model.
    pub residual: f64,
    /// Plain log–log slope of |K| over the same window, for reference.
    pub loglog_slope: f64,
}

/// Kernel profile on a set of points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelEvalResult {
    pub x_points: Vec<f64>,
    pub values: Vec<Complex64>,
    pub method: KernelMethod,
    pub n_terms: usize,
    pub blowup_fit: Option<BlowupFit>,
    pub warnings: Vec<String>,
}

/// Evaluates `K_α` on `xs` by one method; quadrature points inside the collar
/// fall back to the asymptotic path with a warning.
pub fn kernel_profile(
    alpha: f64,
    xs: &[f64],
    params: DunklParams,
    method: KernelMethod,
    n_terms: usize,
    nu_max: u32,
) -> Result<KernelEvalResult> {
    let mut values = Vec::with_capacity(xs.len());
    let mut warnings: Vec<String> = regime_warning(alpha, params).into_iter().collect();
    for &x in xs {
        let v = match method {
            KernelMethod::Quadrature if (x.abs() - 1.0).abs() >= COLLAR => {
                kernel_quadrature(alpha, x, params, nu_max)?
            }
            KernelMethod::Quadrature => {
                warnings.push(format!("x = {x} inside the collar: asymptotic path used"));
                kernel_asymptotic(alpha, x.abs(), n_terms, params)?
            }
            KernelMethod::Asymptotic => kernel_asymptotic(alpha, x.abs(), n_terms, params)?,
        };
        warnings.extend(v.warnings.into_iter().filter(|w| !w.starts_with("α =")));
        values.push(v.value);
    }
    Ok(KernelEvalResult {
        x_points: xs.to_vec(),
        values,
        method,
        n_terms,
        blowup_fit: None,
        warnings,
    })
}

/// Fits `K(1 − δ) ≈ c₁δ^e + c₂ + c₃δ` over `δ ∈ window` by variable projection
/// in `e`; complex coefficients enter linearly. A `δ^{e+1}` correction is left
/// out because it makes `e` and `e − 1` indistinguishable.
pub fn blowup_fit(
    alpha: f64,
    params: DunklParams,
    window: (f64, f64),
    samples: usize,
    n_terms: usize,
) -> Result<BlowupFit> {
    let (lo, hi) = window;
    if !(lo >= COLLAR * 0.999 && hi > lo && hi < 1.0) {
        return domain(format!(
            "fit window {window:?} must satisfy {COLLAR} ≤ lo < hi < 1"
        ));
    }
    let deltas: Vec<f64> = (0..samples)
        .map(|i| lo * (hi / lo).powf(i as f64 / (samples - 1) as f64))
        .collect();
    let vals: Vec<Complex64> = deltas
        .iter()
        .map(|&d| kernel_asymptotic(alpha, 1.0 - d, n_terms, params).map(|k| k.value))
        .collect::<Result<_>>()?;
    let rss = |e: f64| -> f64 {
        let design: Vec<Vec<f64>> = deltas.iter().map(|&d| vec![d.powf(e), 1.0, d]).collect();
        let mut total = 0.0;
        for part in [0, 1] {
            let rhs: Vec<f64> = vals
                .iter()
                .map(|v| if part == 0 { v.re } else { v.im })
                .collect();
            total += crate::fit::least_squares(&design, &rhs)
                .map(|r| r.1)
                .unwrap_or(f64::INFINITY);
        }
        total
    };
    // Coarse scan then golden refinement; integer exponents alias the smooth terms.
    let grid: Vec<f64> = (0..=120)
        .map(|i| -2.0 + i as f64 * 0.02)
        .filter(|e: &f64| (e.fract()).abs() > 1e-9)
        .collect();
    let best = grid
        .iter()
        .copied()
        .min_by(|a, b| rss(*a).total_cmp(&rss(*b)))
        .unwrap();
    let e = crate::fit::golden_min(best - 0.02, best + 0.02, 1e-6, rss);
    let norm: f64 = vals.iter().map(|v| v.norm_sqr()).sum();
    let mags: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
    let ll = crate::fit::loglog_fit(&deltas, &mags)?;
    Ok(BlowupFit {
        exponent: e,
        window,
        residual: (rss(e) / norm).sqrt(),
        loglog_slope: ll.slope,
    })
}

/// `∫_{2^{ν−1}}^{2^{ν+1}} s^{−α+2λ+1−N} ds`, the right side of the block bound.
pub fn block_bound(alpha: f64, params: DunklParams, nu: u32, n: usize) -> f64 {
    let q = -alpha + 2.0 * params.lambda() + 2.0 - n as f64;
    let (a, b) = (2f64.powi(nu as i32 - 1), 2f64.powi(nu as i32 + 1));
    if q.abs() < 1e-12 {
        (b / a).ln()
    } else {
        (b.powf(q) - a.powf(q)) / q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g: f64, n: u32) -> DunklParams {
        DunklParams::new(g, n).unwrap()
    }

    #[test]
    fn half_line_tail_closed_form() {
        // ∫_1^∞ s^{-2} e^{iτs} ds against direct quadrature of the truncated tail.
        let tau = 3.0;
        let got = half_line_tail(-2.0, tau, 1.0);
        let rule = GaussLegendre::new(16);
        let direct = crate::quadrature::composite_complex(&rule, 1.0, 4000.0, 0.25, |s| {
            Complex64::from_polar(s.powi(-2), tau * s)
        });
        // Remaining tail beyond 4000 is below 1/(τ·4000²) in modulus.
        assert!((got - direct).norm() < 1e-7, "{got} vs {direct}");
    }

    #[test]
    fn collar_and_singular_point() {
        assert!(matches!(
            kernel_quadrature(0.7, 1.0005, p(0.0, 1), 4),
            Err(crate::Error::Range(_))
        ));
        assert!(kernel_asymptotic(0.7, 1.0, 4, p(0.0, 1)).is_err());
        assert!(kernel_asymptotic(0.7, 1.0005, 4, p(0.0, 1)).is_ok());
    }

    #[test]
    fn sign_conjugates() {
        let a = kernel_quadrature_signed(0.7, 0.5, p(0.0, 1), 8, Sign::Plus)
            .unwrap()
            .value;
        let b = kernel_quadrature_signed(0.7, 0.5, p(0.0, 1), 8, Sign::Minus)
            .unwrap()
            .value;
        assert_eq!(a.conj(), b);
    }
}
