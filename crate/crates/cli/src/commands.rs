use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use dunkl_spectral::dunkl::*;
use dunkl_spectral::io::*;
use dunkl_spectral::maximal::{field_a, field_m, maximal_sup_refined, sup_bound_campaign};
use dunkl_spectral::multiplier::{
    blowup_fit, kernel_profile, regime_window, KernelEvalResult, KernelMethod, Sign,
};
use dunkl_spectral::probe::{threshold_map, Theorem, Verdict};
use dunkl_spectral::quadrature::GaussLegendre;
use dunkl_spectral::wave::{energy, wave_propagate};
use serde::Serialize;

use crate::config::{Builtin, Command, Direction, MaximalOperator, RunConfig};

/// Files written (relative to the output directory) and guard flags raised.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub flags: Vec<String>,
    pub summary: Vec<String>,
}

struct Out<'a> {
    dir: &'a Path,
    outcome: Outcome,
}

impl<'a> Out<'a> {
    fn file(
        &mut self,
        name: &str,
        write: impl FnOnce(BufWriter<File>) -> dunkl_spectral::Result<()>,
    ) -> Result<()> {
        let path = self.dir.join(name);
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write(BufWriter::new(f)).with_context(|| format!("writing {}", path.display()))?;
        self.outcome.files.push(PathBuf::from(name));
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.file(name, |w| write_json(w, value))
    }

    fn guard(&mut self, what: &str, g: &GuardReport) {
        if !g.is_clean() {
            self.outcome.flags.push(format!(
                "{what}: {} outputs with significant content past the frequency guard {:.4e}",
                g.significant.len(),
                g.rho_guard
            ));
        }
    }
}

pub fn run(cmd: Command, cfg: &RunConfig, dir: &Path) -> Result<Outcome> {
    let mut out = Out {
        dir,
        outcome: Outcome::default(),
    };
    match cmd {
        Command::Transform => transform(cfg, &mut out)?,
        Command::Kernel => kernel(cfg, &mut out)?,
        Command::Wave => wave(cfg, &mut out)?,
        Command::Maximal => maximal(cfg, &mut out)?,
        Command::Probe => probe(cfg, &mut out)?,
    }
    Ok(out.outcome)
}

fn params(cfg: &RunConfig) -> Result<DunklParams> {
    cfg.dunkl_params().map_err(|e| anyhow::anyhow!("{e}"))
}

#[derive(Serialize)]
struct TransformReport {
    direction: Direction,
    line: bool,
    guard: GuardReport,
    tail_estimate: f64,
    /// `sup|out − in| / sup|in|`; zero for the fixed point.
    rel_sup_diff_to_input: f64,
    warnings: Vec<String>,
}

fn transform(cfg: &RunConfig, out: &mut Out) -> Result<()> {
    let p = params(cfg)?;
    let t = &cfg.transform;
    let spec = cfg.grid.spec();
    let report = if t.line {
        let k = p.gamma_k();
        let grid = LineGrid::new(k, spec)?;
        let f = LineProfile::from_real_fn(&grid, |x| t.profile.eval(x));
        let r = match t.direction {
            Direction::Forward => dunkl_transform_1d(&f, k, &grid)?,
            Direction::Inverse => inverse_dunkl_transform_1d(&f, k, &grid)?,
        };
        out.file("input.csv", |w| write_line_profile_csv(w, &f))?;
        out.file("output.csv", |w| write_line_profile_csv(w, &r.profile))?;
        TransformReport {
            direction: t.direction,
            line: true,
            rel_sup_diff_to_input: r.profile.rel_sup_diff(&f),
            guard: r.guard,
            tail_estimate: r.tail_estimate,
            warnings: r.warnings,
        }
    } else {
        let grid = RadialGrid::new(p, spec)?;
        let f = RadialProfile::from_real_fn(&grid, |x| t.profile.eval(x));
        let r = match t.direction {
            Direction::Forward => radial_dunkl_transform(&f, &grid)?,
            Direction::Inverse => radial_inverse_transform(&f, &grid)?,
        };
        out.file("input.csv", |w| write_profile_csv(w, &f))?;
        out.file("output.csv", |w| write_profile_csv(w, &r.profile))?;
        out.json("envelope.json", &ProfileEnvelope::new(p, spec))?;
        TransformReport {
            direction: t.direction,
            line: false,
            rel_sup_diff_to_input: r.profile.rel_sup_diff(&f),
            guard: r.guard,
            tail_estimate: r.tail_estimate,
            warnings: r.warnings,
        }
    };
    out.guard("transform", &report.guard);
    out.outcome.summary.push(format!(
        "sup|F f − f|/sup|f| = {:.3e}",
        report.rel_sup_diff_to_input
    ));
    out.json("transform.json", &report)
}

#[derive(Serialize)]
struct KernelReport {
    alpha: f64,
    sign: Sign,
    /// `α − γ_k − (n−1)/2 − 1`.
    predicted_exponent: f64,
    exponent: f64,
    window: (f64, f64),
    residual: f64,
    loglog_slope: f64,
    regime_window: (f64, f64),
    /// Largest relative gap between the two evaluation paths.
    max_method_gap: f64,
    warnings: Vec<String>,
}

fn kernel(cfg: &RunConfig, out: &mut Out) -> Result<()> {
    let p = params(cfg)?;
    let k = &cfg.kernel;
    let xs = k.x.points();
    let signed = |mut r: KernelEvalResult| {
        if k.sign == Sign::Minus {
            r.values.iter_mut().for_each(|v| *v = v.conj());
        }
        r
    };
    let quad = signed(kernel_profile(
        k.alpha,
        &xs,
        p,
        KernelMethod::Quadrature,
        k.n_terms,
        k.nu_max,
    )?);
    let asym = signed(kernel_profile(
        k.alpha,
        &xs,
        p,
        KernelMethod::Asymptotic,
        k.n_terms,
        k.nu_max,
    )?);
    let fit = blowup_fit(k.alpha, p, k.fit_window, k.fit_samples, k.n_terms)?;
    let gap = quad
        .values
        .iter()
        .zip(&asym.values)
        .map(|(a, b)| (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    out.file("kernel_quadrature.csv", |w| write_kernel_csv(w, &quad))?;
    out.file("kernel_asymptotic.csv", |w| write_kernel_csv(w, &asym))?;
    let mut warnings = quad.warnings.clone();
    warnings.extend(
        asym.warnings
            .iter()
            .filter(|w| !quad.warnings.contains(w))
            .cloned(),
    );
    let report = KernelReport {
        alpha: k.alpha,
        sign: k.sign,
        predicted_exponent: k.alpha - p.lambda() - 1.5,
        exponent: fit.exponent,
        window: fit.window,
        residual: fit.residual,
        loglog_slope: fit.loglog_slope,
        regime_window: regime_window(p),
        max_method_gap: gap,
        warnings,
    };
    out.outcome.summary.push(format!(
        "blow-up exponent {:.4} (predicted {:.4}); method gap {:.2e}",
        report.exponent, report.predicted_exponent, gap
    ));
    out.json("kernel_fit.json", &report)
}

#[derive(Serialize)]
struct EnergyLedger {
    initial: f64,
    points: Vec<EnergyPoint>,
    max_rel_drift: f64,
}

#[derive(Serialize)]
struct DalembertPoint {
    t: f64,
    max_abs_error: f64,
}

/// `½ ∫_{x−t}^{x+t} f`, by composite Gauss–Legendre.
fn dalembert(profile: &Builtin, x: f64, t: f64) -> f64 {
    let (mut a, mut b) = (x - t.abs(), x + t.abs());
    if let Some((lo, hi)) = profile.support() {
        a = a.max(lo);
        b = b.min(hi);
    }
    if a >= b {
        return 0.0;
    }
    let rule = GaussLegendre::new(20);
    let m = ((b - a) / 0.05).ceil() as usize;
    let h = (b - a) / m as f64;
    0.5 * t.signum()
        * (0..m)
            .map(|i| {
                rule.integrate(a + i as f64 * h, a + (i + 1) as f64 * h, |s| {
                    profile.eval(s)
                })
            })
            .sum::<f64>()
}

fn wave(cfg: &RunConfig, out: &mut Out) -> Result<()> {
    let p = params(cfg)?;
    let w = &cfg.wave;
    let grid = RadialGrid::new(p, cfg.grid.spec())?;
    let f = RadialProfile::from_real_fn(&grid, |x| w.profile.eval(x));
    let states = w
        .times
        .iter()
        .map(|&t| wave_propagate(&f, t))
        .collect::<dunkl_spectral::Result<Vec<_>>>()?;
    for s in &states {
        out.guard(&format!("wave t = {}", s.t), &s.guard);
    }
    out.file("wave.csv", |wr| write_wave_csv(wr, &states))?;

    let initial = lp_norm(&f.forward()?.profile, 2.0)?.powi(2);
    let points = w
        .energy_times
        .points()
        .into_iter()
        .map(|t| {
            Ok(EnergyPoint {
                t,
                energy: energy(&wave_propagate(&f, t)?)?,
            })
        })
        .collect::<dunkl_spectral::Result<Vec<_>>>()?;
    let max_rel_drift = points
        .iter()
        .map(|e| (e.energy - initial).abs() / initial)
        .fold(0.0, f64::max);
    out.outcome
        .summary
        .push(format!("energy drift {max_rel_drift:.2e}"));
    out.json(
        "energy.json",
        &EnergyLedger {
            initial,
            points,
            max_rel_drift,
        },
    )?;

    if p.gamma_k() == 0.0 && p.n() == 1 {
        let cmp: Vec<DalembertPoint> = states
            .iter()
            .map(|s| DalembertPoint {
                t: s.t,
                max_abs_error: grid
                    .points()
                    .iter()
                    .zip(s.u.values())
                    .filter(|(r, _)| **r < w.compare_radius)
                    .map(|(&r, v)| (v - dalembert(&w.profile, r, s.t)).norm())
                    .fold(0.0, f64::max),
            })
            .collect();
        let worst = cmp.iter().map(|c| c.max_abs_error).fold(0.0, f64::max);
        out.outcome
            .summary
            .push(format!("d'Alembert sup error {worst:.2e}"));
        out.json("dalembert.json", &cmp)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct MaximalReport {
    operator: MaximalOperator,
    alpha: f64,
    times: usize,
    rounds: usize,
    converged: bool,
    last_change: f64,
    flagged_slices: Vec<f64>,
    warnings: Vec<String>,
}

fn maximal(cfg: &RunConfig, out: &mut Out) -> Result<()> {
    let p = params(cfg)?;
    let m = &cfg.maximal;
    let grid = RadialGrid::new(p, cfg.grid.spec())?;
    let f = RadialProfile::from_real_fn(&grid, |x| m.profile.eval(x));
    let times = m.times.points();
    let mut field = match m.operator {
        MaximalOperator::A => field_a(&f, m.alpha, m.sign, &times, m.nu)?,
        MaximalOperator::M => field_m(&f, m.alpha, &times)?,
    };
    let sup = maximal_sup_refined(&mut field, m.refine_tol, m.max_rounds)?;
    let flagged: Vec<f64> = field
        .flagged_slices()
        .into_iter()
        .map(|i| field.t_points[i])
        .collect();
    if !flagged.is_empty() {
        out.outcome.flags.push(format!(
            "maximal: {} time slices past the frequency guard",
            flagged.len()
        ));
    }
    out.file("field.csv", |w| write_field_csv(w, &field))?;
    out.file("maximal.csv", |w| write_sup_csv(w, &sup.profile))?;
    out.json(
        "maximal.json",
        &MaximalReport {
            operator: m.operator,
            alpha: m.alpha,
            times: field.t_points.len(),
            rounds: sup.rounds,
            converged: sup.converged,
            last_change: sup.last_change,
            flagged_slices: flagged,
            warnings: field.warnings.clone(),
        },
    )?;
    out.outcome.summary.push(format!(
        "sup over {} times, last refinement change {:.2e}",
        field.t_points.len(),
        sup.last_change
    ));
    if m.campaign > 0 {
        let c = sup_bound_campaign(cfg.seed, m.campaign)?;
        out.outcome.summary.push(format!(
            "sup-bound campaign: {} violations in {}",
            c.violations, c.instances
        ));
        out.json("campaign.json", &c)?;
    }
    Ok(())
}

fn probe(cfg: &RunConfig, out: &mut Out) -> Result<()> {
    let p = params(cfg)?;
    let pc = &cfg.probe;
    let theorem = Theorem::parse(&pc.theorem)?;
    let nus: Vec<u32> = (pc.nu_lo..=pc.nu_hi).collect();
    let report = threshold_map(theorem, &pc.inv_p, &pc.alpha, p, &pc.family(cfg.seed), &nus)?;
    out.file("probe.json", |w| write_json(w, &report))?;
    out.file("probe.csv", |w| write_probe_csv(w, &report))?;
    out.outcome.summary.push(format!(
        "{} points: {} consistent, {} divergent, {} violations, {} inconclusive",
        report.points.len(),
        report.count(Verdict::Consistent),
        report.count(Verdict::DivergentTrend),
        report.count(Verdict::Violation),
        report.count(Verdict::Inconclusive)
    ));
    if let Some(pc) = report.lines.critical_p {
        out.outcome
            .summary
            .push(format!("spherical-mean critical p = {pc}"));
    }
    Ok(())
}
