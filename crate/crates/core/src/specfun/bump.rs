/// `exp(-1/x)` for `x > 0`, zero otherwise.
fn mollifier(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth plateau: 1 on `|t| ≤ 1`, 0 on `|t| ≥ 2`.
pub fn plateau(t: f64) -> f64 {
    let a = t.abs();
    if a <= 1.0 {
        1.0
    } else if a >= 2.0 {
        0.0
    } else {
        let up = mollifier(2.0 - a);
        up / (up + mollifier(a - 1.0))
    }
}

/// Littlewood–Paley bump `ψ(t) = η(t) − η(2t)`, supported in `1/2 ≤ |t| ≤ 2`.
pub fn lp_bump(t: f64) -> f64 {
    plateau(t) - plateau(2.0 * t)
}

/// `φ(t) = Σ_{ν≥0} ψ(2^{-ν}|t|)`, which telescopes to `1 − η(2t)`.
pub fn cutoff_phi(t: f64) -> f64 {
    1.0 - plateau(2.0 * t)
}

/// `Ψ_ν(s) = Σ_{j=0}^{ν} ψ(2^{-j}s) = η(2^{-ν}s) − η(2s)`.
pub fn partial_cutoff(nu: u32, s: f64) -> f64 {
    plateau(s / 2f64.powi(nu as i32)) - plateau(2.0 * s)
}

/// The `(ψ, φ)` pair with its support interval.
#[derive(Debug, Clone, Copy)]
pub struct BumpPair {
    pub psi_support: (f64, f64),
}

impl Default for BumpPair {
    fn default() -> Self {
        Self {
            psi_support: (0.5, 2.0),
        }
    }
}

impl BumpPair {
    pub fn psi(&self, t: f64) -> f64 {
        lp_bump(t)
    }

    pub fn phi(&self, t: f64) -> f64 {
        cutoff_phi(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_values() {
        assert_eq!(cutoff_phi(0.4), 0.0);
        assert_eq!(cutoff_phi(1.5), 1.0);
        assert_eq!(cutoff_phi(0.5), 0.0);
        assert_eq!(cutoff_phi(1.0), 1.0);
    }

    #[test]
    fn telescoping_sum() {
        let s: f64 = (-20..=20).map(|v| lp_bump(3.7 * 2f64.powi(-v))).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cutoff_equals_dyadic_sum() {
        for i in 0..200 {
            let t = 0.3 + i as f64 * 0.05;
            let s: f64 = (0..40).map(|v| lp_bump(t * 2f64.powi(-v))).sum();
            assert!((s - cutoff_phi(t)).abs() < 1e-14, "t={t}");
            assert!(
                (partial_cutoff(5, t) - (0..=5).map(|v| lp_bump(t * 2f64.powi(-v))).sum::<f64>())
                    .abs()
                    < 1e-14
            );
        }
    }

    #[test]
    fn support_and_range() {
        let eps = f64::EPSILON;
        assert_eq!(lp_bump(0.5 - eps), 0.0);
        assert_eq!(lp_bump(2.0 + 2.0 * eps), 0.0);
        assert_eq!(lp_bump(-1.0), 1.0);
        for i in 0..=4000 {
            let v = lp_bump(i as f64 * 1e-3);
            assert!((0.0..=1.0).contains(&v));
        }
    }
}
