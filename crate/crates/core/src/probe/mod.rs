//! Empirical operator-norm lower bounds, dyadic slope regressions and
//! threshold maps in the `(1/p, α)` plane.
//!
//! Every estimate here is a lower bound: a maximum of `‖Tf‖_p/‖f‖_p` over a
//! finite family. Reports only say whether the trends are consistent with a
//! theorem, never that an operator is bounded.

mod family;
mod lines;

pub use family::{Generator, Member, TestFamily};
pub use lines::{interpolation, Interpolation, TheoremLines};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dunkl::{band_l2, lp_norm, BandSampler, DunklParams, Normed};
use crate::error::{domain, usage, Result};
use crate::fit::{linear_fit, LineFit};
use crate::maximal::{band_maximal, dyadic_sampler, dyadic_times};
use crate::multiplier::{eval_symbol, Sign, SymbolSpec};

/// Which statement a map is drawn against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// `T_{m_α}` on `L^p`.
    Multiplier,
    /// The fixed-time wave operator `f ↦ u(·, 1)`.
    Wave,
    /// The maximal operator `A_α`.
    MaximalA,
    /// The maximal operator `M_α`.
    MaximalM,
    /// `M_0`, Stein's spherical maximal function.
    SphericalMean,
}

impl Theorem {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "1.1" | "multiplier" => Ok(Theorem::Multiplier),
            "1.2" | "wave" => Ok(Theorem::Wave),
            "1.4" | "maximal_a" => Ok(Theorem::MaximalA),
            "1.5" | "maximal_m" => Ok(Theorem::MaximalM),
            "1.6" | "spherical_mean" => Ok(Theorem::SphericalMean),
            other => domain(format!(
                "unknown theorem {other:?}; expected 1.1, 1.2, 1.4, 1.5 or 1.6"
            )),
        }
    }

    /// The dyadic piece at level `ν` for exponent `α` (ignored where fixed).
    pub fn piece(self, alpha: f64, lambda: f64, nu: u32) -> Result<PieceOperator> {
        Ok(match self {
            Theorem::Multiplier => {
                PieceOperator::fixed(SymbolSpec::oscillating(alpha, Sign::Plus)?.with_nu(nu))
            }
            Theorem::Wave => PieceOperator::fixed(SymbolSpec::wave().with_nu(nu)),
            Theorem::MaximalA => {
                PieceOperator::maximal(SymbolSpec::oscillating(alpha, Sign::Plus)?.with_nu(nu), nu)
            }
            Theorem::MaximalM => {
                PieceOperator::maximal(SymbolSpec::spherical(alpha, lambda)?.with_nu(nu), nu)
            }
            Theorem::SphericalMean => {
                PieceOperator::maximal(SymbolSpec::spherical(0.0, lambda)?.with_nu(nu), nu)
            }
        })
    }

    /// Maps over `α` are meaningless for operators with a fixed symbol.
    pub fn fixed_alpha(self) -> Option<f64> {
        match self {
            Theorem::Wave => Some(1.0),
            Theorem::SphericalMean => Some(0.0),
            _ => None,
        }
    }
}

/// A dyadic piece: a single multiplier, or the sup over `t ∈ [1, 2]` of its dilates.
#[derive(Debug, Clone)]
pub struct PieceOperator {
    pub symbol: SymbolSpec,
    pub times: Option<Vec<f64>>,
}

impl PieceOperator {
    pub fn fixed(symbol: SymbolSpec) -> Self {
        Self {
            symbol,
            times: None,
        }
    }

    pub fn maximal(symbol: SymbolSpec, nu: u32) -> Self {
        Self {
            symbol,
            times: Some(dyadic_times(nu)),
        }
    }
}

/// A lower bound with the member that attains it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub best: Option<String>,
    /// Members skipped for zero norm.
    pub skipped: Vec<String>,
}

/// `max ‖op f‖_p / ‖f‖_p` over labeled profiles.
pub fn op_norm_lower_bound<P: Normed>(
    op: impl Fn(&P) -> Result<P>,
    p: f64,
    members: &[(String, P)],
) -> Result<NormEstimate> {
    let mut est = NormEstimate {
        value: 0.0,
        best: None,
        skipped: Vec::new(),
    };
    for (label, f) in members {
        let den = lp_norm(f, p)?;
        if den == 0.0 {
            est.skipped.push(label.clone());
            continue;
        }
        let r = lp_norm(&op(f)?, p)? / den;
        if r > est.value || est.best.is_none() {
            est.value = r;
            est.best = Some(label.clone());
        }
    }
    Ok(est)
}

/// Lower bounds for one piece at every `p`, on a dyadic window at scale `2^ν`.
///
/// `L²` ratios of plain multipliers come from Plancherel over every member.
/// Other ratios are measured on the window, over members that fit it.
pub fn band_norms(
    sampler: &BandSampler,
    nu: u32,
    op: &PieceOperator,
    ps: &[f64],
    members: &[Member],
) -> Result<Vec<NormEstimate>> {
    if let Some(p) = ps.iter().find(|p| !(**p >= 1.0)) {
        return domain(format!("L^p exponent must be ≥ 1, got {p}"));
    }
    let scale = 2f64.powi(nu as i32);
    let mut out: Vec<NormEstimate> = ps
        .iter()
        .map(|_| NormEstimate {
            value: 0.0,
            best: None,
            skipped: Vec::new(),
        })
        .collect();
    let offer = |out: &mut Vec<NormEstimate>, i: usize, r: f64, label: &str| {
        if r > out[i].value || out[i].best.is_none() {
            out[i].value = r;
            out[i].best = Some(label.to_string());
        }
    };
    for m in members {
        let g = |s: f64| m.spectrum(s, scale);
        let l2 = sampler.spectral_l2(g);
        if l2 == 0.0 {
            for e in out.iter_mut() {
                e.skipped.push(m.label.clone());
            }
            continue;
        }
        match &op.times {
            None => {
                let mg = |s: f64| eval_symbol(&op.symbol, s) * g(s);
                let physical = m.fits_window() && ps.iter().any(|&p| p != 2.0);
                let (tf, f) = if physical {
                    (sampler.synthesize(mg), sampler.synthesize(g))
                } else {
                    (Vec::new(), Vec::new())
                };
                for (i, &p) in ps.iter().enumerate() {
                    if p == 2.0 {
                        offer(&mut out, i, sampler.spectral_l2(mg) / l2, &m.label);
                    } else if physical {
                        offer(
                            &mut out,
                            i,
                            sampler.lp(&tf, p) / sampler.lp(&f, p),
                            &m.label,
                        );
                    }
                }
            }
            Some(times) => {
                if !m.fits_window() {
                    continue;
                }
                let sup: Vec<Complex64> = band_maximal(sampler, &op.symbol, g, times)?
                    .into_iter()
                    .map(|v| Complex64::new(v, 0.0))
                    .collect();
                let f = if ps.iter().any(|&p| p != 2.0) {
                    sampler.synthesize(g)
                } else {
                    Vec::new()
                };
                for (i, &p) in ps.iter().enumerate() {
                    let den = if p == 2.0 { l2 } else { sampler.lp(&f, p) };
                    offer(&mut out, i, sampler.lp(&sup, p) / den, &m.label);
                }
            }
        }
    }
    Ok(out)
}

/// `max ‖T_m f‖₂/‖f‖₂` for a plain multiplier piece at scale `2^ν`, by
/// Plancherel over every member. Needs no sampling window, so any `ν` is cheap.
pub fn plancherel_norm(
    params: DunklParams,
    nu: u32,
    symbol: &SymbolSpec,
    members: &[Member],
) -> Result<NormEstimate> {
    let scale = 2f64.powi(nu as i32);
    let band = (scale / 2.0, 2.0 * scale);
    let mut est = NormEstimate {
        value: 0.0,
        best: None,
        skipped: Vec::new(),
    };
    for m in members {
        let den = band_l2(params, band, PLANCHEREL_PANELS, |s| m.spectrum(s, scale))?;
        if den == 0.0 {
            est.skipped.push(m.label.clone());
            continue;
        }
        let r = band_l2(params, band, PLANCHEREL_PANELS, |s| {
            eval_symbol(symbol, s) * m.spectrum(s, scale)
        })? / den;
        if r > est.value || est.best.is_none() {
            est.value = r;
            est.best = Some(m.label.clone());
        }
    }
    Ok(est)
}

const PLANCHEREL_PANELS: usize = 512;

/// Fitted slope of `log₂` of the per-`ν` lower bounds.
pub fn slope_of(nus: &[u32], norms: &[f64]) -> Result<LineFit> {
    if nus.len() != norms.len() {
        return usage("one norm per ν is needed");
    }
    if let Some(v) = norms.iter().find(|v| !(**v > 0.0)) {
        return domain(format!("cannot fit log₂ of a non-positive norm {v}"));
    }
    let x: Vec<f64> = nus.iter().map(|&n| n as f64).collect();
    let y: Vec<f64> = norms.iter().map(|v| v.log2()).collect();
    linear_fit(&x, &y)
}

/// `(slope, stderr)` of `log₂‖piece_ν‖_p` over `nus` (at least five levels).
pub fn dyadic_slope(
    params: DunklParams,
    theorem: Theorem,
    alpha: f64,
    p: f64,
    nus: &[u32],
    family: &TestFamily,
) -> Result<(f64, f64, Vec<f64>)> {
    if nus.len() < 5 {
        return usage(format!(
            "dyadic slope needs at least 5 levels, got {}",
            nus.len()
        ));
    }
    let members = family.members()?;
    let mut norms = Vec::with_capacity(nus.len());
    for &nu in nus {
        let sampler = dyadic_sampler(params, nu)?;
        let op = theorem.piece(alpha, params.lambda(), nu)?;
        norms.push(band_norms(&sampler, nu, &op, &[p], &members)?[0].value);
    }
    let fit = slope_of(nus, &norms)?;
    Ok((fit.slope, fit.stderr, norms))
}

/// Per-point outcome of a threshold map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Above the line, and a majorant of the dyadic sum has stabilized.
    Consistent,
    /// Below the line, with lower bounds growing geometrically.
    DivergentTrend,
    /// A lower bound grows faster than the theorem's dyadic exponent allows.
    Violation,
    Inconclusive,
}

/// Slack on the dyadic exponent before a trend counts as a violation.
pub const SLOPE_TOLERANCE: f64 = 0.1;
/// Relative change of the majorant total accepted as stable.
pub const CAUCHY_TOLERANCE: f64 = 1e-2;
/// Levels in the trailing window that sets the local rate.
pub const TRAILING: usize = 4;

/// `S_V = Σ_{ν ≤ V} N_ν`, with two totals for the whole series.
///
/// `majorant` uses the least `C_V` with `N_ν ≤ C_V·2^{νe}` for all measured
/// `ν ≤ V`, at the theorem's exponent `e`; its total `C_V·Σ_ν 2^{νe}` bounds
/// every partial sum. `extrapolated` continues `S_V` past `V` at the slower
/// of the last two local slopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicSums {
    pub partial: Vec<f64>,
    /// Local slope over the last `TRAILING` levels and its error.
    pub local_slope: f64,
    pub local_stderr: f64,
    /// Majorant totals at `V` and `V − 1`; `None` unless `e < 0`.
    pub majorant: Option<(f64, f64)>,
    /// Extrapolated totals at `V` and `V − 1`; `None` without decay.
    pub extrapolated: Option<(f64, f64)>,
}

impl DyadicSums {
    pub fn new(nus: &[u32], norms: &[f64], exponent: Option<f64>) -> Result<Self> {
        if nus.len() < TRAILING + 1 {
            return usage(format!("dyadic sums need at least {} levels", TRAILING + 1));
        }
        let partial: Vec<f64> = norms
            .iter()
            .scan(0.0, |s, v| {
                *s += v;
                Some(*s)
            })
            .collect();
        let n = nus.len();
        let window = |end: usize| slope_of(&nus[end - TRAILING..end], &norms[end - TRAILING..end]);
        let last = window(n)?;
        let prev = window(n - 1)?;
        let majorant = exponent.filter(|e| *e < 0.0).map(|e| {
            // C_V·2^{ν₀e} = max_ν N_ν·2^{−(ν−ν₀)e}
            let total = |end: usize| {
                let c = (0..end)
                    .map(|j| norms[j] * 2f64.powf(-e * (nus[j] - nus[0]) as f64))
                    .fold(0.0, f64::max);
                c / (1.0 - 2f64.powf(e))
            };
            (total(n), total(n - 1))
        });
        let s = last.slope.max(prev.slope);
        let extrapolated = (s < 0.0).then(|| {
            let r = 2f64.powf(s);
            let total = |end: usize| partial[end - 1] + norms[end - 1] * r / (1.0 - r);
            (total(n), total(n - 1))
        });
        Ok(Self {
            partial,
            local_slope: last.slope,
            local_stderr: last.stderr,
            majorant,
            extrapolated,
        })
    }

    /// True when the majorant total moved by at most `CAUCHY_TOLERANCE`
    /// relative over the last level.
    pub fn stabilized(&self) -> bool {
        self.majorant
            .is_some_and(|(a, b)| (a - b).abs() <= CAUCHY_TOLERANCE * a)
    }
}

/// Classifies one point from its dyadic sums, the fitted slope and the theorem's exponent.
pub fn classify(above: bool, exponent: Option<f64>, fit: &LineFit, sums: &DyadicSums) -> Verdict {
    if let Some(e) = exponent {
        if sums.local_slope > e + SLOPE_TOLERANCE + 2.0 * sums.local_stderr
            && fit.slope > e + SLOPE_TOLERANCE + 2.0 * fit.stderr
        {
            return Verdict::Violation;
        }
    }
    if above {
        if sums.stabilized() {
            Verdict::Consistent
        } else {
            Verdict::Inconclusive
        }
    } else if sums.local_slope > 0.0 && fit.slope > 0.0 {
        Verdict::DivergentTrend
    } else {
        Verdict::Inconclusive
    }
}

/// One `(1/p, α)` sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub inv_p: f64,
    pub alpha: f64,
    /// The theorem's threshold at this `1/p`, or `None` where it states no α-line.
    pub line: Option<f64>,
    /// The dyadic exponent implied by the proof, `line − α`.
    pub exponent: Option<f64>,
    pub theta: Option<f64>,
    pub norms: Vec<f64>,
    pub best: Vec<Option<String>>,
    pub fit: LineFit,
    pub sums: DyadicSums,
    pub verdict: Verdict,
    /// Against the alternative reading: the other labeling for `M_α`, the
    /// non-strict inequality for the wave operator.
    pub alternative: Option<Verdict>,
}

/// `L¹` norms of kernel blocks `‖K_α^ν‖_{1,k}`, the `p = 1` surrogate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSurrogate {
    pub alpha: f64,
    pub norms: Vec<f64>,
    pub fit: LineFit,
    /// Slope over the last `TRAILING` levels.
    pub local_slope: f64,
    /// `γ_k + (n−1)/2 − α`, the growth rate of the blocks.
    pub predicted: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub theorem: Theorem,
    pub gamma_k: f64,
    pub n: u32,
    pub inv_p_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub nus: Vec<u32>,
    pub family: TestFamily,
    pub lines: TheoremLines,
    pub points: Vec<GridPoint>,
    pub surrogate: Vec<KernelSurrogate>,
}

impl ProbeReport {
    pub fn count(&self, v: Verdict) -> usize {
        self.points.iter().filter(|p| p.verdict == v).count()
    }
}

/// Runs a threshold map. `inv_p_grid` holds `1/p ∈ [0, 1]`.
pub fn threshold_map(
    theorem: Theorem,
    inv_p_grid: &[f64],
    alpha_grid: &[f64],
    params: DunklParams,
    family: &TestFamily,
    nus: &[u32],
) -> Result<ProbeReport> {
    if let Some(u) = inv_p_grid.iter().find(|u| !(0.0..=1.0).contains(*u)) {
        return domain(format!("1/p must lie in [0, 1], got {u}"));
    }
    if nus.len() < TRAILING + 1 || nus.windows(2).any(|w| w[1] != w[0] + 1) {
        return usage(format!(
            "threshold maps need at least {} consecutive levels",
            TRAILING + 1
        ));
    }
    let alphas: Vec<f64> = match theorem.fixed_alpha() {
        Some(a) => vec![a],
        None => alpha_grid.to_vec(),
    };
    if alphas.is_empty() {
        return usage("empty α grid");
    }
    let ps: Vec<f64> = inv_p_grid
        .iter()
        .map(|&u| if u == 0.0 { f64::INFINITY } else { 1.0 / u })
        .collect();
    let members = family.members()?;
    let lines = TheoremLines::new(params, inv_p_grid);
    // norms[a][i][ν]
    let mut norms = vec![vec![Vec::with_capacity(nus.len()); ps.len()]; alphas.len()];
    let mut best = norms
        .iter()
        .map(|r| {
            r.iter()
                .map(|_| Vec::new())
                .collect::<Vec<Vec<Option<String>>>>()
        })
        .collect::<Vec<_>>();
    for &nu in nus {
        let sampler = dyadic_sampler(params, nu)?;
        for (ai, &alpha) in alphas.iter().enumerate() {
            let op = theorem.piece(alpha, params.lambda(), nu)?;
            for (i, est) in band_norms(&sampler, nu, &op, &ps, &members)?
                .into_iter()
                .enumerate()
            {
                norms[ai][i].push(est.value);
                best[ai][i].push(est.best);
            }
        }
    }
    let mut points = Vec::with_capacity(alphas.len() * ps.len());
    for (ai, &alpha) in alphas.iter().enumerate() {
        for (i, &u) in inv_p_grid.iter().enumerate() {
            let fit = slope_of(nus, &norms[ai][i])?;
            let exponent = lines.exponent(theorem, i, alpha);
            let sums = DyadicSums::new(nus, &norms[ai][i], exponent)?;
            let (line, alt_line) = lines.at(theorem, i);
            let above = |l: Option<f64>, strict: bool| match (theorem, l) {
                (Theorem::Wave, _) => lines.wave_region(i, strict),
                (_, Some(l)) => alpha > l,
                (_, None) => false,
            };
            let verdict = classify(above(line, true), exponent, &fit, &sums);
            let alternative = match theorem {
                Theorem::Wave => Some(classify(above(None, false), exponent, &fit, &sums)),
                Theorem::MaximalM | Theorem::SphericalMean => {
                    Some(classify(above(alt_line, true), exponent, &fit, &sums))
                }
                _ => None,
            };
            points.push(GridPoint {
                inv_p: u,
                alpha,
                line,
                exponent,
                theta: interpolation(theorem, params, u).map(|t| t.theta),
                norms: norms[ai][i].clone(),
                best: best[ai][i].clone(),
                fit,
                sums,
                verdict,
                alternative,
            });
        }
    }
    let surrogate = if matches!(theorem, Theorem::Multiplier | Theorem::MaximalA) {
        kernel_surrogate(params, &alphas, nus)?
    } else {
        Vec::new()
    };
    Ok(ProbeReport {
        theorem,
        gamma_k: params.gamma_k(),
        n: params.n(),
        inv_p_grid: inv_p_grid.to_vec(),
        alpha_grid: alphas,
        nus: nus.to_vec(),
        family: family.clone(),
        lines,
        points,
        surrogate,
    })
}

/// `‖K_α^ν‖_{1,k}` per level, with `K_α^ν = F⁻¹(m_α^ν)`, and its growth verdict.
/// Blocks grow geometrically exactly when `α < γ_k + (n−1)/2`.
pub fn kernel_surrogate(
    params: DunklParams,
    alphas: &[f64],
    nus: &[u32],
) -> Result<Vec<KernelSurrogate>> {
    let mut norms = vec![Vec::with_capacity(nus.len()); alphas.len()];
    for &nu in nus {
        let sampler = dyadic_sampler(params, nu)?;
        for (ai, &alpha) in alphas.iter().enumerate() {
            let spec = SymbolSpec::oscillating(alpha, Sign::Plus)?.with_nu(nu);
            let k = sampler.synthesize(|s| eval_symbol(&spec, s));
            norms[ai].push(sampler.lp(&k, 1.0));
        }
    }
    let a0 = params.gamma_k() + (params.n() as f64 - 1.0) / 2.0;
    alphas
        .iter()
        .zip(norms)
        .map(|(&alpha, norms)| {
            let fit = slope_of(nus, &norms)?;
            let predicted = a0 - alpha;
            let sums = DyadicSums::new(nus, &norms, Some(predicted))?;
            // Block norms are exact, not lower bounds, so growth below the
            // critical α is read off the trailing levels, past the start-up.
            let verdict = if alpha < a0 && sums.local_slope > 2.0 * sums.local_stderr {
                Verdict::DivergentTrend
            } else {
                classify(alpha > a0, Some(predicted), &fit, &sums)
            };
            Ok(KernelSurrogate {
                alpha,
                norms,
                fit,
                local_slope: sums.local_slope,
                predicted,
                verdict,
            })
        })
        .collect()
}
