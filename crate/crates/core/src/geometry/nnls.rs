//! Lawson–Hanson nonnegative least squares and the conic projection built on
//! it.

use nalgebra::{DMatrix, DVector};

use super::{dot, norm, GeneratedCone, UnitVector};
use crate::error::{domain, Result};

/// Stopping tolerance on the dual vector `Aᵀ(b − Ax)`.
pub const NNLS_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `‖A x − b‖` subject to `x ≥ 0`, where `A` is given by its
/// columns.
pub fn nnls(columns: &[&[f64]], b: &[f64], max_iter: usize, tol: f64) -> NnlsSolution {
    let n = columns.len();
    let d = b.len();
    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];
    // Columns just rejected by a degenerate first solve; cleared as soon as x
    // moves, which prevents the classic add/drop cycle.
    let mut tabu = vec![false; n];
    let mut iterations = 0usize;
    let mut resid = b.to_vec();

    let solve_passive = |passive: &[bool]| -> Vec<f64> {
        let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
        let mut z = vec![0.0; n];
        if idx.is_empty() {
            return z;
        }
        let a = DMatrix::from_fn(d, idx.len(), |r, c| columns[idx[c]][r]);
        let rhs = DVector::from_column_slice(b);
        let svd = a.svd(true, true);
        let sol = svd.solve(&rhs, 1e-13).unwrap_or_else(|_| DVector::zeros(idx.len()));
        for (k, &j) in idx.iter().enumerate() {
            z[j] = sol[k];
        }
        z
    };

    loop {
        let w: Vec<f64> = columns.iter().map(|c| dot(c, &resid)).collect();
        let pick = (0..n).filter(|&j| !passive[j] && !tabu[j]).max_by(|&a, &b| w[a].total_cmp(&w[b]).then(b.cmp(&a)));
        let j = match pick {
            Some(j) if w[j] > tol => j,
            _ => return NnlsSolution { residual_norm: norm(&resid), x, iterations, converged: true },
        };
        passive[j] = true;
        let mut first = true;
        loop {
            iterations += 1;
            if iterations > max_iter {
                return NnlsSolution { residual_norm: norm(&resid), x, iterations, converged: false };
            }
            let z = solve_passive(&passive);
            if first && z[j] <= 0.0 {
                passive[j] = false;
                tabu[j] = true;
                break;
            }
            first = false;
            if (0..n).filter(|&k| passive[k]).all(|k| z[k] > 0.0) {
                x = z;
                tabu.iter_mut().for_each(|t| *t = false);
                break;
            }
            let mut alpha = f64::INFINITY;
            let mut blocking = None;
            for k in 0..n {
                if passive[k] && z[k] <= 0.0 {
                    let denom = x[k] - z[k];
                    let a = if denom > 0.0 { x[k] / denom } else { 0.0 };
                    if a < alpha {
                        alpha = a;
                        blocking = Some(k);
                    }
                }
            }
            for k in 0..n {
                if passive[k] {
                    x[k] += alpha * (z[k] - x[k]);
                    if Some(k) == blocking || x[k] <= 0.0 {
                        passive[k] = false;
                        x[k] = 0.0;
                    }
                }
            }
            tabu.iter_mut().for_each(|t| *t = false);
        }
        resid = b.to_vec();
        for (k, c) in columns.iter().enumerate() {
            if x[k] != 0.0 {
                resid.iter_mut().zip(c.iter()).for_each(|(r, a)| *r -= x[k] * a);
            }
        }
    }
}

/// Result of projecting a unit vector onto a generated cone.
#[derive(Debug, Clone)]
pub struct ConeProjection {
    /// `max ⟨q, u⟩` over unit `u` in the cone.
    pub cos: f64,
    /// `P_K(q)`.
    pub projection: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub iterations: usize,
    /// False when NNLS hit its iteration cap; `cos` then falls back to the
    /// best generator, which is only a lower bound.
    pub converged: bool,
}

/// Projects `q` onto `K` and returns `max_{u ∈ K, ‖u‖ = 1} ⟨q, u⟩`.
///
/// When `P_K(q) ≠ 0` the maximum is `⟨q, P⟩/‖P‖ = ‖P‖`. When `P_K(q) = 0`,
/// `q` is in the polar cone, the objective `⟨q, Ac⟩/‖Ac‖` over the simplex is
/// quasi-convex and the maximum sits at a generator.
pub fn cone_projection(k: &GeneratedCone, q: &UnitVector) -> Result<ConeProjection> {
    if k.is_trivial() {
        return Err(domain("projection onto the trivial cone"));
    }
    if q.dim() != k.dim() {
        return Err(domain("vector and cone dimensions differ"));
    }
    let cols: Vec<&[f64]> = k.generators().iter().map(|g| g.coords()).collect();
    let best_generator = cols.iter().map(|g| dot(g, q.coords())).fold(f64::NEG_INFINITY, f64::max);
    let sol = nnls(&cols, q.coords(), 100 * cols.len(), NNLS_TOL);
    let mut p = vec![0.0; k.dim()];
    for (c, g) in sol.x.iter().zip(&cols) {
        p.iter_mut().zip(g.iter()).for_each(|(pi, gi)| *pi += c * gi);
    }
    let pn = norm(&p);
    let cos = if !sol.converged {
        best_generator
    } else if pn > 1e-12 {
        (dot(q.coords(), &p) / pn).max(best_generator)
    } else {
        best_generator
    };
    Ok(ConeProjection {
        cos: cos.clamp(-1.0, 1.0),
        projection: p,
        coefficients: sol.x,
        iterations: sol.iterations,
        converged: sol.converged,
    })
}

/// `max ⟨q, u⟩` over the unit vectors of `K`.
pub fn cone_projection_cos(k: &GeneratedCone, q: &UnitVector) -> Result<f64> {
    Ok(cone_projection(k, q)?.cos)
}
