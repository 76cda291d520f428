//! Small least-squares helpers shared by the fits and probes.

use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

/// Ordinary least squares `y ≈ intercept + slope·x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return usage(format!(
            "linear fit needs ≥ 2 paired samples, got {} and {}",
            x.len(),
            y.len()
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return usage("linear fit with constant abscissa");
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let stderr = if x.len() > 2 {
        (ss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LineFit {
        slope,
        intercept,
        stderr,
        residual: (ss / n).sqrt(),
    })
}

/// Slope of `log y` against `log x`.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly)
}

/// Real least squares for a small dense system via normal equations with
/// Gaussian elimination and partial pivoting. Returns the coefficients and the
/// residual sum of squares.
pub fn least_squares(design: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let m = design.first().map_or(0, |r| r.len());
    if design.len() != rhs.len() || m == 0 || design.len() < m {
        return usage("least squares needs at least as many rows as unknowns");
    }
    let mut a = vec![vec![0.0; m + 1]; m];
    for (row, &b) in design.iter().zip(rhs) {
        for i in 0..m {
            for j in 0..m {
                a[i][j] += row[i] * row[j];
            }
            a[i][m] += row[i] * b;
        }
    }
    for c in 0..m {
        let p = (c..m)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        a.swap(c, p);
        let d = a[c][c];
        if d == 0.0 {
            return usage("singular least-squares system");
        }
        for r in c + 1..m {
            let f = a[r][c] / d;
            let (top, rest) = a.split_at_mut(r);
            for (x, &y) in rest[0][c..=m].iter_mut().zip(&top[c][c..=m]) {
                *x -= f * y;
            }
        }
    }
    let mut coef = vec![0.0; m];
    for c in (0..m).rev() {
        let s: f64 = (c + 1..m).map(|k| a[c][k] * coef[k]).sum();
        coef[c] = (a[c][m] - s) / a[c][c];
    }
    let rss = design
        .iter()
        .zip(rhs)
        .map(|(row, b)| (b - row.iter().zip(&coef).map(|(x, c)| x * c).sum::<f64>()).powi(2))
        .sum();
    Ok((coef, rss))
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub fn golden_min(mut a: f64, mut b: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
