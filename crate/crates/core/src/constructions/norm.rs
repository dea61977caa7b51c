//! λ for curves that are self-expanded in a norm equivalent to the
//! Euclidean one.

use super::params::golden_max;
use crate::error::{domain, Result};

/// `(√(1 + 2ρt + t²) − 1)/t`, written without the cancellation near `t = 0`.
fn ratio(rho: f64, t: f64) -> f64 {
    (2.0 * rho + t) / ((1.0 + 2.0 * rho * t + t * t).sqrt() + 1.0)
}

/// Given `δ‖x‖ ≤ |x| ≤ ‖x‖`, every `|·|`-self-expanded curve is a Euclidean
/// λ-curve for the returned λ, the supremum of the ratio above over
/// `t ∈ (0, 2/δ]` with `ρ = 1 − δ⁴/2`.
pub fn lambda_from_norm_equivalence(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(domain(format!("delta = {delta} must lie in (0, 1]")));
    }
    let rho = 1.0 - delta.powi(4) / 2.0;
    let hi = 2.0 / delta;
    const SCAN: usize = 2048;
    let (mut best_k, mut best) = (SCAN, ratio(rho, hi));
    for k in 1..SCAN {
        let v = ratio(rho, hi * k as f64 / SCAN as f64);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let lo_t = hi * (best_k - 1) as f64 / SCAN as f64;
    let hi_t = (hi * (best_k + 1) as f64 / SCAN as f64).min(hi);
    let (_, refined) = golden_max(|t| ratio(rho, t), lo_t.max(f64::MIN_POSITIVE), hi_t, 200);
    Ok(best.max(refined))
}
