//! Oracles shared by several test targets.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// `𝒥_λ(t)` for `λ = lp/lq`, `t = ta/tb` by summing the power series in
/// fixed point with enough guard bits to absorb the cancellation.
pub fn series_oracle(lp: i64, lq: i64, ta: i64, tb: i64) -> f64 {
    let t = ta as f64 / tb as f64;
    let bits = 192 + (t * std::f64::consts::LOG2_E * 1.05) as usize;
    let one = BigInt::from(1) << bits;
    let num = BigInt::from(ta) * BigInt::from(ta) * BigInt::from(lq);
    let mut term = one.clone();
    let mut sum = one;
    let mut m: i64 = 1;
    loop {
        let den = BigInt::from(4 * tb * tb) * BigInt::from(m) * BigInt::from(lq * m + lp);
        term = -(term * &num) / den;
        if term.is_zero() {
            break;
        }
        sum += &term;
        m += 1;
        if m as f64 > 2.0 * t + 50.0 && term.bits() < 8 {
            break;
        }
    }
    let shift = bits - 120;
    (sum >> shift).to_f64().unwrap() / 2f64.powi(120)
}
