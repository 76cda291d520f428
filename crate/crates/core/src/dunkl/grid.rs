use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use super::DunklParams;
use crate::error::{domain, usage, Result};
use crate::quadrature::{GaussJacobi, GaussLegendre};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);
const CACHE_SLOTS: usize = 6;

/// Layout of a composite Gauss–Legendre grid on `[0, r_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_max: f64,
    pub count: usize,
    pub panel: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            r_max: 64.0,
            count: 4096,
            panel: 0.25,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(usize, usize)> {
        if !(self.r_max > 0.0 && self.panel > 0.0) || !self.r_max.is_finite() {
            return domain("grid r_max and panel must be positive and finite");
        }
        let panels = (self.r_max / self.panel).round();
        if (panels * self.panel - self.r_max).abs() > 1e-9 * self.r_max || panels < 1.0 {
            return usage(format!(
                "r_max {} is not a whole number of panels of size {}",
                self.r_max, self.panel
            ));
        }
        let panels = panels as usize;
        if self.count == 0 || !self.count.is_multiple_of(panels) {
            return usage(format!(
                "count {} is not a multiple of the {panels} panels",
                self.count
            ));
        }
        Ok((panels, self.count / panels))
    }
}

type Matrix = Arc<Vec<f64>>;

#[derive(Debug)]
struct GridInner {
    id: u64,
    params: DunklParams,
    points: Vec<f64>,
    weights: Vec<f64>,
    intervals: Vec<(f64, f64)>,
    min_density: f64,
    cache: Mutex<Vec<(u64, Matrix)>>,
}

/// Radial nodes with weights for `∫ g(r) r^{2γ_k+n−1} dr`. Cloning shares the
/// underlying storage and kernel cache.
#[derive(Debug, Clone)]
pub struct RadialGrid(Arc<GridInner>);

/// Composite nodes with weights for `∫ g(x) x^e dx`. A panel starting at the
/// origin uses a Gauss–Jacobi rule when `e` is not an integer, so the weight's
/// branch point does not limit the order.
fn composite_nodes(
    intervals: &[(f64, f64)],
    panel: f64,
    nodes: usize,
    e: f64,
) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    if nodes == 0 || !(panel > 0.0) {
        return domain("panel size and nodes per panel must be positive");
    }
    let rule = GaussLegendre::new(nodes);
    let singular = e.fract() != 0.0;
    let jacobi = singular.then(|| GaussJacobi::new(nodes, e));
    let mut pts = Vec::new();
    let mut wts = Vec::new();
    let mut density = f64::INFINITY;
    let mut last = f64::NEG_INFINITY;
    for &(a, b) in intervals {
        if !(b > a) || a < last {
            return usage("grid intervals must be increasing and non-overlapping");
        }
        last = b;
        let m = ((b - a) / panel).ceil().max(1.0) as usize;
        let h = (b - a) / m as f64;
        density = density.min(nodes as f64 / h);
        for p in 0..m {
            let lo = a + p as f64 * h;
            match &jacobi {
                Some(j) if lo == 0.0 => {
                    for (x, w) in j.mapped(lo, lo + h) {
                        pts.push(x);
                        wts.push(w);
                    }
                }
                _ => {
                    for (x, w) in rule.mapped(lo, lo + h) {
                        pts.push(x);
                        wts.push(if e == 0.0 { w } else { w * x.powf(e) });
                    }
                }
            }
        }
    }
    Ok((pts, wts, density))
}

impl RadialGrid {
    pub fn new(params: DunklParams, spec: GridSpec) -> Result<Self> {
        let (_, nodes) = spec.validate()?;
        Self::composite(params, &[(0.0, spec.r_max)], spec.panel, nodes)
    }

    pub fn default_for(params: DunklParams) -> Self {
        Self::new(params, GridSpec::default()).expect("default grid is valid")
    }

    /// Composite grid over disjoint increasing intervals of `[0, ∞)`.
    pub fn composite(
        params: DunklParams,
        intervals: &[(f64, f64)],
        panel: f64,
        nodes: usize,
    ) -> Result<Self> {
        if intervals.first().is_none_or(|&(a, _)| a < 0.0) {
            return domain("radial grid intervals must lie in [0, ∞)");
        }
        let (points, weights, min_density) =
            composite_nodes(intervals, panel, nodes, params.radial_exponent())?;
        Ok(Self(Arc::new(GridInner {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            params,
            points,
            weights,
            intervals: intervals.to_vec(),
            min_density,
            cache: Mutex::new(Vec::new()),
        })))
    }

    pub fn params(&self) -> DunklParams {
        self.0.params
    }

    pub fn points(&self) -> &[f64] {
        &self.0.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.0.weights
    }

    pub fn len(&self) -> usize {
        self.0.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.points.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.0.intervals.last().map_or(0.0, |i| i.1)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.0.intervals
    }

    /// Smallest number of nodes per unit length over the grid.
    pub fn min_density(&self) -> f64 {
        self.0.min_density
    }

    pub fn same_as(&self, other: &RadialGrid) -> bool {
        self.0.id == other.0.id
    }

    /// `Σ w_j g(r_j)`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.points()
            .iter()
            .zip(self.weights())
            .map(|(&r, &w)| w * g(r))
            .sum()
    }

    /// Cached matrix `M[i·len + j] = build(out_i, self_j)` for a given output grid.
    pub(crate) fn cached_matrix(
        &self,
        out: &RadialGrid,
        build: impl FnOnce() -> Vec<f64>,
    ) -> Matrix {
        let key = out.0.id;
        if let Some(m) = self.0.cache.lock().unwrap().iter().find(|e| e.0 == key) {
            return m.1.clone();
        }
        let m = Arc::new(build());
        let mut cache = self.0.cache.lock().unwrap();
        if cache.len() >= CACHE_SLOTS {
            cache.remove(0);
        }
        cache.push((key, m.clone()));
        m
    }
}

/// Complex samples of a radial function on a grid.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    grid: RadialGrid,
    values: Vec<Complex64>,
}

fn check_finite(values: &[Complex64]) -> Result<()> {
    match values
        .iter()
        .position(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        Some(i) => domain(format!("profile value at index {i} is not finite")),
        None => Ok(()),
    }
}

impl RadialProfile {
    pub fn new(grid: RadialGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return usage(format!(
                "profile has {} values for a grid of {} points",
                values.len(),
                grid.len()
            ));
        }
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: &RadialGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().iter().map(|&r| f(r)).collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn from_real_fn(grid: &RadialGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |r| Complex64::new(f(r), 0.0))
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self
            .grid
            .points()
            .iter()
            .zip(&self.values)
            .map(|(&r, &v)| f(r, v))
            .collect();
        Self {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|_, v| c * v)
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `sup|self − other| / sup|other|` on a shared grid.
    pub fn rel_sup_diff(&self, other: &RadialProfile) -> f64 {
        let d = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        d / other.sup()
    }

    pub fn zip_with(
        &self,
        other: &RadialProfile,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return usage("profiles live on different grids");
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            values,
        })
    }
}

#[derive(Debug)]
struct LineInner {
    k: f64,
    x_max: f64,
    points: Vec<f64>,
    weights: Vec<f64>,
    density: f64,
}

/// Symmetric nodes on `[−X, X]` with weights for `∫ g(x) |x|^{2k} dx`.
#[derive(Debug, Clone)]
pub struct LineGrid(Arc<LineInner>);

impl LineGrid {
    /// Mirrors a composite Gauss–Legendre rule on `[0, X]`; `spec.count` is the
    /// number of nodes on the half line.
    pub fn new(k: f64, spec: GridSpec) -> Result<Self> {
        if !(k >= 0.0) {
            return domain(format!("multiplicity k must be ≥ 0, got {k}"));
        }
        let (_, nodes) = spec.validate()?;
        let (half, hw, density) =
            composite_nodes(&[(0.0, spec.r_max)], spec.panel, nodes, 2.0 * k)?;
        let mut points: Vec<f64> = half.iter().rev().map(|x| -x).collect();
        points.extend_from_slice(&half);
        let mut weights: Vec<f64> = hw.iter().rev().copied().collect();
        weights.extend_from_slice(&hw);
        Ok(Self(Arc::new(LineInner {
            k,
            x_max: spec.r_max,
            points,
            weights,
            density,
        })))
    }

    pub fn k(&self) -> f64 {
        self.0.k
    }

    pub fn x_max(&self) -> f64 {
        self.0.x_max
    }

    pub fn points(&self) -> &[f64] {
        &self.0.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.0.weights
    }

    pub fn len(&self) -> usize {
        self.0.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.points.is_empty()
    }

    pub fn density(&self) -> f64 {
        self.0.density
    }

    pub fn same_as(&self, other: &LineGrid) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

/// Complex samples of a function on a symmetric line grid.
#[derive(Debug, Clone)]
pub struct LineProfile {
    grid: LineGrid,
    values: Vec<Complex64>,
}

impl LineProfile {
    pub fn new(grid: LineGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return usage(format!(
                "profile has {} values for a grid of {} points",
                values.len(),
                grid.len()
            ));
        }
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: &LineGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().iter().map(|&x| f(x)).collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn from_real_fn(grid: &LineGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn rel_sup_diff(&self, other: &LineProfile) -> f64 {
        let d = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        d / other.sup()
    }
}
