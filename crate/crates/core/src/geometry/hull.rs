//! Whether a finite set of unit vectors lies in an open half-space, i.e.
//! whether `0 ∉ conv(Σ)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{dot, nnls, UnitVector};
use crate::error::{domain, EelError, Result};

/// Largest set decided by exhaustive Carathéodory enumeration.
const ENUMERATION_LIMIT: usize = 12;
const FEAS_TOL: f64 = 1e-9;

/// The worst pair breaking `⟨x, x′⟩ ≥ −λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecondViolation {
    pub pair: (usize, usize),
    pub inner: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pointedness {
    /// `0 ∉ conv(Σ)`.
    pub pointed: bool,
    /// Present when some pair violates the pairwise bound; the half-sphere
    /// guarantee does not apply then, but `pointed` is still decided.
    pub precondition: Option<PrecondViolation>,
}

/// Decides `0 ∉ conv(Σ)` for unit vectors with pairwise products `≥ −λ`,
/// `λ < 1/d`. Under that hypothesis Σ lies in an open half-sphere, so the
/// answer should be `true`.
///
/// Sets of up to twelve vectors are decided by enumerating every subset of
/// at most `d + 1` vectors and solving for barycentric weights. Larger sets
/// use Gordan's alternative: `0 ∈ conv(Σ)` iff `−x ∈ cone(Σ)` for some
/// `x ∈ Σ`, tested by nonnegative least squares.
pub fn pointedness_test(sigma: &[UnitVector], lambda: f64, d: usize) -> Result<Pointedness> {
    if d == 0 {
        return Err(domain("dimension must be positive"));
    }
    if lambda >= 1.0 / d as f64 {
        return Err(EelError::Precondition(format!(
            "the half-sphere bound needs lambda < 1/d = {}, got {lambda}",
            1.0 / d as f64
        )));
    }
    if sigma.iter().any(|x| x.dim() != d) {
        return Err(domain("vector dimension differs from d"));
    }
    let mut precondition: Option<PrecondViolation> = None;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            let inner = dot(sigma[i].coords(), sigma[j].coords());
            if inner < -lambda - 1e-12 && precondition.is_none_or(|p| inner < p.inner) {
                precondition = Some(PrecondViolation { pair: (i, j), inner });
            }
        }
    }
    let contains_zero =
        if sigma.len() <= ENUMERATION_LIMIT { zero_in_hull_enumerate(sigma, d) } else { zero_in_hull_gordan(sigma) };
    Ok(Pointedness { pointed: !contains_zero, precondition })
}

fn zero_in_hull_enumerate(sigma: &[UnitVector], d: usize) -> bool {
    let n = sigma.len();
    let max_size = (d + 1).min(n);
    let mut subset = Vec::with_capacity(max_size);
    for size in 2..=max_size {
        if any_subset(sigma, size, 0, &mut subset) {
            return true;
        }
    }
    false
}

fn any_subset(sigma: &[UnitVector], size: usize, start: usize, subset: &mut Vec<usize>) -> bool {
    if subset.len() == size {
        return barycentric_zero(sigma, subset);
    }
    for i in start..sigma.len() {
        subset.push(i);
        let hit = any_subset(sigma, size, i + 1, subset);
        subset.pop();
        if hit {
            return true;
        }
    }
    false
}

/// Solves `[X; 1ᵀ] α = [0; 1]` in the least-squares sense and accepts a
/// consistent nonnegative solution.
fn barycentric_zero(sigma: &[UnitVector], subset: &[usize]) -> bool {
    let d = sigma[0].dim();
    let a = DMatrix::from_fn(d + 1, subset.len(), |r, c| if r < d { sigma[subset[c]].coords()[r] } else { 1.0 });
    let mut rhs = DVector::zeros(d + 1);
    rhs[d] = 1.0;
    let Ok(alpha) = a.clone().svd(true, true).solve(&rhs, 1e-13) else {
        return false;
    };
    let residual = (&a * &alpha - &rhs).norm();
    residual < FEAS_TOL && alpha.iter().all(|&w| w >= -FEAS_TOL)
}

fn zero_in_hull_gordan(sigma: &[UnitVector]) -> bool {
    let cols: Vec<&[f64]> = sigma.iter().map(|x| x.coords()).collect();
    sigma.iter().any(|x| {
        let target: Vec<f64> = x.coords().iter().map(|v| -v).collect();
        let sol = nnls(&cols, &target, 100 * cols.len(), 1e-12);
        sol.residual_norm < FEAS_TOL
    })
}
