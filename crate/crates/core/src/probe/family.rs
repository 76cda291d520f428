use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dunkl::{radial_inverse_transform, RadialGrid, RadialProfile};
use crate::error::{domain, Result};
use crate::specfun::lp_bump;

/// A profile constructor. Every member is ψ-filtered at the probed scale: its
/// spectrum is `ψ(2^{−ℓ}|ξ|)·shape(2^{−ℓ}|ξ|)` with `shape` given below in `η = 2^{−ℓ}|ξ|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `e^{−(wη)²/2}`: a Gaussian of width `w·2^{−ℓ}` restricted to the band.
    Gaussian { width: f64 },
    /// `e^{−(η−c)²/(2w²)}`, the radial counterpart of modulating a Gaussian to frequency `c`.
    ModulatedGaussian { center: f64, width: f64 },
    /// A random trigonometric polynomial of the given degree on the band.
    FilteredNoise { degree: usize },
    /// `e^{−iτ2^ℓη}`: concentrated near `|x| = |τ|`, and focused by `e^{it|ξ|}` at `t = τ`.
    LightCone { tau: f64 },
}

impl Generator {
    fn name(&self) -> String {
        match self {
            Generator::Gaussian { width } => format!("gaussian(w={width})"),
            Generator::ModulatedGaussian { center, width } => {
                format!("modulated(c={center},w={width})")
            }
            Generator::FilteredNoise { degree } => format!("noise(d={degree})"),
            Generator::LightCone { tau } => format!("light_cone(tau={tau})"),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            Generator::Gaussian { width } => *width > 0.0 && width.is_finite(),
            Generator::ModulatedGaussian { center, width } => {
                *width > 0.0 && center.is_finite() && width.is_finite()
            }
            Generator::FilteredNoise { degree } => *degree <= 3,
            Generator::LightCone { tau } => tau.abs() <= 2.0,
        };
        if ok {
            Ok(())
        } else {
            domain(format!("generator out of range: {self:?}"))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Gaussian(f64),
    Modulated(f64, f64),
    Trig(Vec<Complex64>),
    Cone(f64),
}

/// One realized test profile, described by its band shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub label: String,
    shape: Shape,
}

impl Member {
    /// `shape(η)` at scale `2^ℓ = scale`.
    pub fn shape(&self, eta: f64, scale: f64) -> Complex64 {
        match &self.shape {
            Shape::Gaussian(w) => Complex64::new((-0.5 * (w * eta).powi(2)).exp(), 0.0),
            Shape::Modulated(c, w) => Complex64::new((-0.5 * ((eta - c) / w).powi(2)).exp(), 0.0),
            Shape::Trig(c) => {
                let u = 2.0 * std::f64::consts::PI * (eta - 0.5) / 1.5;
                c.iter()
                    .enumerate()
                    .map(|(j, a)| a * Complex64::from_polar(1.0, j as f64 * u))
                    .sum()
            }
            Shape::Cone(tau) => Complex64::from_polar(1.0, -tau * scale * eta),
        }
    }

    /// The full spectrum `ψ(ξ/scale)·shape(ξ/scale)`.
    pub fn spectrum(&self, xi: f64, scale: f64) -> Complex64 {
        let w = lp_bump(xi / scale);
        if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            w * self.shape(xi / scale, scale)
        }
    }

    /// True when the physical profile fits the dyadic sampling window, so its
    /// `L^p` norms can be measured there and not only by Plancherel.
    pub fn fits_window(&self) -> bool {
        match &self.shape {
            Shape::Gaussian(w) => *w <= 4.0,
            Shape::Modulated(_, w) => *w >= 0.2,
            Shape::Trig(_) | Shape::Cone(_) => true,
        }
    }

    /// `f_ℓ` on a grid, by inverse transform of the spectrum at scale `2^ℓ`.
    pub fn profile(&self, grid: &RadialGrid, ell: i32) -> Result<RadialProfile> {
        let scale = 2f64.powi(ell);
        let g = RadialProfile::from_fn(grid, |xi| self.spectrum(xi, scale));
        Ok(radial_inverse_transform(&g, grid)?.profile)
    }
}

/// Named generators, seeds and a count per generator. Member 0 of a
/// deterministic generator uses its parameters as given; later members jitter them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFamily {
    pub generators: Vec<Generator>,
    pub seeds: Vec<u64>,
    pub count: usize,
}

impl Default for TestFamily {
    fn default() -> Self {
        Self {
            generators: vec![
                Generator::Gaussian { width: 1.0 },
                Generator::ModulatedGaussian {
                    center: 1.0,
                    width: 0.25,
                },
                Generator::FilteredNoise { degree: 3 },
                Generator::LightCone { tau: 1.0 },
                Generator::LightCone { tau: 1.5 },
                Generator::LightCone { tau: -1.0 },
            ],
            seeds: vec![0x5eed],
            count: 1,
        }
    }
}

impl TestFamily {
    /// Narrow spectral Gaussians tiling `[1/2, 2]`, which push `L²` ratios to the symbol sup.
    pub fn spectral_concentrated(centers: usize, width: f64) -> Self {
        let generators = (0..centers)
            .map(|i| Generator::ModulatedGaussian {
                center: 0.5 + 1.5 * (i as f64 + 0.5) / centers as f64,
                width,
            })
            .collect();
        Self {
            generators,
            seeds: vec![0],
            count: 1,
        }
    }

    /// Union of two families; norm estimates over it dominate both.
    pub fn union(&self, other: &TestFamily) -> TestFamily {
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        let mut seeds = self.seeds.clone();
        seeds.extend(other.seeds.iter().filter(|s| !self.seeds.contains(s)));
        TestFamily {
            generators,
            seeds,
            count: self.count.max(other.count),
        }
    }

    pub fn members(&self) -> Result<Vec<Member>> {
        if self.count == 0 || self.seeds.is_empty() {
            return domain("test family needs at least one seed and count ≥ 1");
        }
        let mut out = Vec::new();
        for (gi, g) in self.generators.iter().enumerate() {
            g.validate()?;
            for &seed in &self.seeds {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((gi as u64 + 1) << 32));
                for i in 0..self.count {
                    let label = format!("{}#{seed}.{i}", g.name());
                    let shape = match g {
                        Generator::Gaussian { width } => {
                            Shape::Gaussian(jitter(&mut rng, i, *width))
                        }
                        Generator::ModulatedGaussian { center, width } => {
                            let c = if i == 0 {
                                *center
                            } else {
                                (center + rng.gen_range(-0.25..0.25)).clamp(0.55, 1.95)
                            };
                            Shape::Modulated(c, jitter(&mut rng, i, *width))
                        }
                        Generator::FilteredNoise { degree } => Shape::Trig(
                            (0..=*degree)
                                .map(|_| {
                                    Complex64::new(
                                        rng.gen_range(-1.0..1.0),
                                        rng.gen_range(-1.0..1.0),
                                    )
                                })
                                .collect(),
                        ),
                        Generator::LightCone { tau } => {
                            let t = if i == 0 {
                                *tau
                            } else {
                                (tau + rng.gen_range(-0.1..0.1)).clamp(-2.0, 2.0)
                            };
                            Shape::Cone(t)
                        }
                    };
                    out.push(Member { label, shape });
                }
            }
        }
        // Identical seeds across generators would otherwise duplicate members.
        out.dedup_by(|a, b| a.shape == b.shape);
        Ok(out)
    }
}

fn jitter(rng: &mut ChaCha8Rng, i: usize, v: f64) -> f64 {
    if i == 0 {
        v
    } else {
        v * 2f64.powf(rng.gen_range(-0.5..0.5))
    }
}
