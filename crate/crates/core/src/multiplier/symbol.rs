use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dunkl::{spectral_convolve, RadialProfile, RadialSymbol, Transformed};
use crate::error::{domain, Result};
use crate::specfun::{cutoff_phi, lp_bump, BesselOrder, NormalizedBessel};

/// Phase direction of `e^{±i|ξ|}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "+1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            other => domain(format!("sign must be + or -, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolKind {
    /// `|ξ|^{−α} e^{±i|ξ|} φ(ξ)`.
    Oscillating,
    /// `sin(|ξ|)/|ξ|`.
    WavePropagator,
    /// `𝒥_order(|ξ|)`.
    Spherical { order: f64 },
    /// Tabulated `(ξ, value)` samples, linearly interpolated and zero outside.
    Custom { samples: Vec<(f64, Complex64)> },
}

/// A radial symbol, optionally restricted to the dyadic piece `ψ(2^{−ν} t|ξ|)`
/// and dilated by `t`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub alpha: f64,
    pub sign: Sign,
    pub dyadic_nu: Option<u32>,
    pub t: f64,
    #[serde(flatten)]
    pub kind: SymbolKind,
    #[serde(skip)]
    bessel: Option<NormalizedBessel>,
}

impl PartialEq for SymbolSpec {
    fn eq(&self, o: &Self) -> bool {
        self.alpha == o.alpha
            && self.sign == o.sign
            && self.dyadic_nu == o.dyadic_nu
            && self.t == o.t
            && self.kind == o.kind
    }
}

impl SymbolSpec {
    fn build(alpha: f64, sign: Sign, kind: SymbolKind) -> Self {
        let bessel = match &kind {
            SymbolKind::Spherical { order } => {
                BesselOrder::new(*order).ok().map(NormalizedBessel::new)
            }
            _ => None,
        };
        Self {
            alpha,
            sign,
            dyadic_nu: None,
            t: 1.0,
            kind,
            bessel,
        }
    }

    pub fn oscillating(alpha: f64, sign: Sign) -> Result<Self> {
        if !(alpha > 0.0) {
            return domain(format!("oscillating symbols need α > 0, got {alpha}"));
        }
        Ok(Self::build(alpha, sign, SymbolKind::Oscillating))
    }

    pub fn wave() -> Self {
        Self::build(0.0, Sign::Plus, SymbolKind::WavePropagator)
    }

    /// `𝒥_{α+λ}(t|ξ|)` for the spherical-mean family.
    pub fn spherical(alpha: f64, lambda: f64) -> Result<Self> {
        if !(alpha >= 0.0) {
            return domain(format!("spherical symbols need α ≥ 0, got {alpha}"));
        }
        BesselOrder::new(alpha + lambda)?;
        Ok(Self::build(
            alpha,
            Sign::Plus,
            SymbolKind::Spherical {
                order: alpha + lambda,
            },
        ))
    }

    pub fn custom(samples: Vec<(f64, Complex64)>) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return domain("custom symbol samples must have increasing abscissae");
        }
        Ok(Self::build(0.0, Sign::Plus, SymbolKind::Custom { samples }))
    }

    pub fn with_nu(mut self, nu: u32) -> Self {
        self.dyadic_nu = Some(nu);
        self
    }

    pub fn with_time(mut self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return domain(format!("time dilation must be positive, got {t}"));
        }
        self.t = t;
        Ok(self)
    }

    /// Restores the evaluator cache after deserialization.
    pub fn rehydrate(self) -> Result<Self> {
        let mut s = Self::build(self.alpha, self.sign, self.kind);
        s.dyadic_nu = self.dyadic_nu;
        s.with_time(self.t)
    }

    fn base(&self, s: f64) -> Complex64 {
        match &self.kind {
            SymbolKind::Oscillating => {
                let c = cutoff_phi(s);
                if c == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::from_polar(c * s.powf(-self.alpha), self.sign.value() * s)
                }
            }
            SymbolKind::WavePropagator => Complex64::new(sinc(s), 0.0),
            SymbolKind::Spherical { order } => {
                let v = match &self.bessel {
                    Some(b) => b.eval(s),
                    None => {
                        NormalizedBessel::new(BesselOrder::new(*order).expect("validated order"))
                            .eval(s)
                    }
                };
                Complex64::new(v, 0.0)
            }
            SymbolKind::Custom { samples } => interpolate(samples, s),
        }
    }
}

/// `sin(s)/s` with the series near 0.
pub fn sinc(s: f64) -> f64 {
    if s.abs() < 1e-4 {
        1.0 - s * s / 6.0
    } else {
        s.sin() / s
    }
}

fn interpolate(samples: &[(f64, Complex64)], x: f64) -> Complex64 {
    let i = samples.partition_point(|e| e.0 < x);
    if i == 0 {
        return if samples.first().is_some_and(|e| e.0 == x) {
            samples[0].1
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    if i == samples.len() {
        return Complex64::new(0.0, 0.0);
    }
    let (x0, y0) = samples[i - 1];
    let (x1, y1) = samples[i];
    y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
}

/// Symbol value at `|ξ| = xi`. Non-oscillating kinds are dilated as `m(t|ξ|)`,
/// except the wave propagator, which is `sin(t|ξ|)/|ξ|`.
pub fn eval_symbol(spec: &SymbolSpec, xi: f64) -> Complex64 {
    let s = spec.t * xi.abs();
    if let (SymbolKind::Oscillating, Some(nu)) = (&spec.kind, spec.dyadic_nu) {
        // The pieces carry no φ, so they telescope to it.
        let w = lp_bump(s / 2f64.powi(nu as i32));
        return if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(w * s.powf(-spec.alpha), spec.sign.value() * s)
        };
    }
    let mut v = spec.base(s);
    if spec.kind == SymbolKind::WavePropagator {
        v *= spec.t;
    }
    if let Some(nu) = spec.dyadic_nu {
        v *= lp_bump(s / 2f64.powi(nu as i32));
    }
    v
}

impl RadialSymbol for SymbolSpec {
    fn eval(&self, xi: f64) -> Complex64 {
        eval_symbol(self, xi)
    }
}

/// `T_m f = F⁻¹(m · F f)`.
pub fn apply_t(f: &RadialProfile, spec: &SymbolSpec) -> Result<Transformed> {
    spectral_convolve(f, spec)
}

/// `sup |m|` over a dense sample of `[lo, hi]`, refined around the maximum.
pub fn symbol_sup(spec: &SymbolSpec, lo: f64, hi: f64) -> f64 {
    let n = 20_000;
    let h = (hi - lo) / n as f64;
    let (mut best, mut at) = (0.0f64, lo);
    for i in 0..=n {
        let x = lo + i as f64 * h;
        let v = eval_symbol(spec, x).norm();
        if v > best {
            best = v;
            at = x;
        }
    }
    let a = (at - h).max(lo);
    let b = (at + h).min(hi);
    let x = crate::fit::golden_min(a, b, 1e-12 * (1.0 + at.abs()), |x| {
        -eval_symbol(spec, x).norm()
    });
    best.max(eval_symbol(spec, x).norm())
}
