//! The recorded run configuration. Every block and field has a default, so a
//! config holds only what differs; the resolved config is written back out
//! with every field present.

use std::fmt;

use dunkl_spectral::dunkl::{DunklParams, GridSpec};
use dunkl_spectral::multiplier::Sign;
use dunkl_spectral::probe::{TestFamily, Theorem};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: String,
    #[serde(default)]
    pub transform: TransformConfig,
    #[serde(default)]
    pub kernel: KernelConfig,
    #[serde(default)]
    pub wave: WaveConfig,
    #[serde(default)]
    pub maximal: MaximalConfig,
    #[serde(default)]
    pub probe: ProbeConfig,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_output() -> String {
    "out".into()
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ParamsConfig::default(),
            grid: GridConfig::default(),
            seed: DEFAULT_SEED,
            output: default_output(),
            transform: TransformConfig::default(),
            kernel: KernelConfig::default(),
            wave: WaveConfig::default(),
            maximal: MaximalConfig::default(),
            probe: ProbeConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub gamma_k: f64,
    pub n: u32,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self { gamma_k: 0.5, n: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub r_max: f64,
    pub count: usize,
    pub panel: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = GridSpec::default();
        Self {
            r_max: g.r_max,
            count: g.count,
            panel: g.panel,
        }
    }
}

impl GridConfig {
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            r_max: self.r_max,
            count: self.count,
            panel: self.panel,
        }
    }
}

/// Built-in data, evaluated at `|x|` on radial grids and at signed `x` on the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Builtin {
    /// `e^{−x²/(2w²)}`; the transform's fixed point at `w = 1`.
    Gaussian { width: f64 },
    /// `exp(−1/(1 − (x/R)²))` on `|x| < R`.
    Bump { radius: f64 },
    /// A bump of radius `R` centred at `c`.
    ShiftedBump { center: f64, radius: f64 },
}

impl Builtin {
    pub fn eval(&self, x: f64) -> f64 {
        let bump = |u: f64| {
            if u.abs() < 1.0 {
                (-1.0 / (1.0 - u * u)).exp()
            } else {
                0.0
            }
        };
        match *self {
            Builtin::Gaussian { width } => (-0.5 * (x / width).powi(2)).exp(),
            Builtin::Bump { radius } => bump(x / radius),
            Builtin::ShiftedBump { center, radius } => bump((x - center) / radius),
        }
    }

    /// `[a, b]` outside which the datum vanishes, for bumps.
    pub fn support(&self) -> Option<(f64, f64)> {
        match *self {
            Builtin::Gaussian { .. } => None,
            Builtin::Bump { radius } => Some((-radius, radius)),
            Builtin::ShiftedBump { center, radius } => Some((center - radius, center + radius)),
        }
    }

    fn check(&self, field: &str, errors: &mut Vec<FieldError>) {
        let (name, v) = match *self {
            Builtin::Gaussian { width } => ("width", width),
            Builtin::Bump { radius } | Builtin::ShiftedBump { radius, .. } => ("radius", radius),
        };
        if !(v > 0.0 && v.is_finite()) {
            errors.push(FieldError::new(
                format!("{field}.{name}"),
                "must be positive and finite",
            ));
        }
        if let Builtin::ShiftedBump { center, .. } = *self {
            if !center.is_finite() {
                errors.push(FieldError::new(format!("{field}.center"), "must be finite"));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransformConfig {
    pub profile: Builtin,
    pub direction: Direction,
    /// The one-dimensional transform with `k = γ_k`; needs `n = 1`.
    pub line: bool,
}

impl Default for TransformConfig {
    fn default() -> Self {
        Self {
            profile: Builtin::Gaussian { width: 1.0 },
            direction: Direction::Forward,
            line: false,
        }
    }
}

/// `count` evenly spaced points from `lo` to `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        (0..self.count)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64)
            .collect()
    }

    fn check(&self, field: &str, positive: bool, errors: &mut Vec<FieldError>) {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi) {
            errors.push(FieldError::new(field, "needs finite lo ≤ hi"));
        }
        if self.count == 0 || (self.count == 1 && self.lo != self.hi) {
            errors.push(FieldError::new(
                format!("{field}.count"),
                "must be ≥ 1, and 1 only when lo = hi",
            ));
        }
        if positive && !(self.lo > 0.0) {
            errors.push(FieldError::new(format!("{field}.lo"), "must be positive"));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelConfig {
    pub alpha: f64,
    pub sign: Sign,
    pub x: Range,
    pub n_terms: usize,
    pub nu_max: u32,
    /// `|1 − x|` window of the blow-up fit.
    pub fit_window: (f64, f64),
    pub fit_samples: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            alpha: 1.5,
            sign: Sign::Plus,
            x: Range {
                lo: 0.05,
                hi: 4.0,
                count: 64,
            },
            n_terms: 8,
            nu_max: 14,
            fit_window: (1e-3, 1e-1),
            fit_samples: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WaveConfig {
    pub profile: Builtin,
    pub times: Vec<f64>,
    /// Times of the energy ledger.
    pub energy_times: Range,
    /// Radius of the d'Alembert comparison, used at `γ_k = 0, n = 1`.
    pub compare_radius: f64,
}

impl Default for WaveConfig {
    fn default() -> Self {
        Self {
            profile: Builtin::Gaussian { width: 0.5 },
            times: vec![0.5, 1.0, 2.0],
            energy_times: Range {
                lo: 0.0,
                hi: 10.0,
                count: 21,
            },
            compare_radius: 8.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaximalOperator {
    /// `A_α`, oscillating symbols.
    A,
    /// `M_α`, Bessel symbols; the spherical mean at `α = 0`.
    M,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaximalConfig {
    pub operator: MaximalOperator,
    pub alpha: f64,
    pub sign: Sign,
    /// Restrict `A_α` to the dyadic piece at this level.
    pub nu: Option<u32>,
    pub profile: Builtin,
    pub times: Range,
    pub refine_tol: f64,
    pub max_rounds: usize,
    /// Instances of the randomized sup-bound campaign; 0 skips it.
    pub campaign: usize,
}

impl Default for MaximalConfig {
    fn default() -> Self {
        Self {
            operator: MaximalOperator::M,
            alpha: 0.0,
            sign: Sign::Plus,
            nu: None,
            profile: Builtin::Gaussian { width: 0.5 },
            times: Range {
                lo: 0.5,
                hi: 2.0,
                count: 16,
            },
            refine_tol: 1e-3,
            max_rounds: 3,
            campaign: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeConfig {
    /// `multiplier`, `wave`, `maximal_a`, `maximal_m` or `spherical_mean`.
    pub theorem: String,
    pub inv_p: Vec<f64>,
    pub alpha: Vec<f64>,
    pub nu_lo: u32,
    pub nu_hi: u32,
    /// The default family, seeded from the run seed, when absent.
    pub family: Option<TestFamily>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            theorem: "multiplier".into(),
            inv_p: (0..12).map(|i| i as f64 / 11.0).collect(),
            alpha: (0..12).map(|i| 0.1 + 0.2 * i as f64).collect(),
            nu_lo: 0,
            nu_hi: 8,
            family: None,
        }
    }
}

impl ProbeConfig {
    pub fn family(&self, seed: u64) -> TestFamily {
        self.family.clone().unwrap_or_else(|| TestFamily {
            seeds: vec![seed],
            ..TestFamily::default()
        })
    }
}

/// A config problem tied to a dotted field path.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Transform,
    Kernel,
    Wave,
    Maximal,
    Probe,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, Vec<FieldError>> {
        toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let at = e.span().map(|s| {
                let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
                format!("line {line}")
            });
            vec![FieldError::new(at.unwrap_or_else(|| "config".into()), msg)]
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configs serialize")
    }

    pub fn dunkl_params(&self) -> Result<DunklParams, FieldError> {
        DunklParams::new(self.params.gamma_k, self.params.n)
            .map_err(|e| FieldError::new("params", e.to_string()))
    }

    /// Checks the shared blocks and the one `cmd` reads.
    pub fn validate(&self, cmd: Command) -> Vec<FieldError> {
        let mut errs = Vec::new();
        if !(self.params.gamma_k >= 0.0 && self.params.gamma_k.is_finite()) {
            errs.push(FieldError::new("params.gamma_k", "must be finite and ≥ 0"));
        }
        if self.params.n == 0 {
            errs.push(FieldError::new("params.n", "must be ≥ 1"));
        }
        if let Err(e) = self.grid.spec().validate() {
            errs.push(FieldError::new("grid", e.to_string()));
        }
        if self.output.is_empty() {
            errs.push(FieldError::new("output", "must name a directory"));
        }
        match cmd {
            Command::Transform => {
                self.transform.profile.check("transform.profile", &mut errs);
                if self.transform.line && self.params.n != 1 {
                    errs.push(FieldError::new(
                        "transform.line",
                        "the line transform needs params.n = 1",
                    ));
                }
            }
            Command::Kernel => {
                let k = &self.kernel;
                if !(k.alpha > 0.0 && k.alpha.is_finite()) {
                    errs.push(FieldError::new(
                        "kernel.alpha",
                        "must be positive and finite",
                    ));
                }
                k.x.check("kernel.x", false, &mut errs);
                if k.x.points().iter().any(|x| (x - 1.0).abs() < 1e-9) {
                    errs.push(FieldError::new(
                        "kernel.x",
                        "contains the singular point x = 1",
                    ));
                }
                if k.n_terms == 0 {
                    errs.push(FieldError::new("kernel.n_terms", "must be ≥ 1"));
                }
                let (lo, hi) = k.fit_window;
                if !(lo > 0.0 && lo < hi && hi < 1.0) {
                    errs.push(FieldError::new(
                        "kernel.fit_window",
                        "needs 0 < lo < hi < 1",
                    ));
                }
                if k.fit_samples < 4 {
                    errs.push(FieldError::new("kernel.fit_samples", "must be ≥ 4"));
                }
            }
            Command::Wave => {
                let w = &self.wave;
                w.profile.check("wave.profile", &mut errs);
                if w.times.is_empty() || w.times.iter().any(|t| !t.is_finite()) {
                    errs.push(FieldError::new(
                        "wave.times",
                        "needs at least one finite time",
                    ));
                }
                w.energy_times.check("wave.energy_times", false, &mut errs);
                if !(w.compare_radius > 0.0) {
                    errs.push(FieldError::new("wave.compare_radius", "must be positive"));
                }
            }
            Command::Maximal => {
                let m = &self.maximal;
                if !(m.alpha >= 0.0 && m.alpha.is_finite()) {
                    errs.push(FieldError::new("maximal.alpha", "must be finite and ≥ 0"));
                }
                if m.operator == MaximalOperator::A && m.alpha == 0.0 {
                    errs.push(FieldError::new("maximal.alpha", "A_α needs α > 0"));
                }
                if m.operator == MaximalOperator::M && m.nu.is_some() {
                    errs.push(FieldError::new(
                        "maximal.nu",
                        "dyadic pieces apply to operator = \"a\" only",
                    ));
                }
                m.profile.check("maximal.profile", &mut errs);
                m.times.check("maximal.times", true, &mut errs);
                if !(m.refine_tol > 0.0) {
                    errs.push(FieldError::new("maximal.refine_tol", "must be positive"));
                }
            }
            Command::Probe => {
                let p = &self.probe;
                if let Err(e) = Theorem::parse(&p.theorem) {
                    errs.push(FieldError::new("probe.theorem", e.to_string()));
                }
                if p.inv_p.is_empty() || p.inv_p.iter().any(|u| !(0.0..=1.0).contains(u)) {
                    errs.push(FieldError::new("probe.inv_p", "needs values in [0, 1]"));
                }
                let fixed = Theorem::parse(&p.theorem)
                    .ok()
                    .and_then(|t| t.fixed_alpha())
                    .is_some();
                if !fixed && (p.alpha.is_empty() || p.alpha.iter().any(|a| !a.is_finite())) {
                    errs.push(FieldError::new(
                        "probe.alpha",
                        "needs at least one finite α",
                    ));
                }
                if p.nu_hi < p.nu_lo + 4 {
                    errs.push(FieldError::new(
                        "probe.nu_hi",
                        "needs at least 5 levels from nu_lo",
                    ));
                }
                if p.nu_hi > 12 {
                    errs.push(FieldError::new(
                        "probe.nu_hi",
                        "levels above 12 exceed the sampling budget",
                    ));
                }
                if let Some(f) = &p.family {
                    if let Err(e) = f.members() {
                        errs.push(FieldError::new("probe.family", e.to_string()));
                    }
                }
            }
        }
        errs
    }
}
