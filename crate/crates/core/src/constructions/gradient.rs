//! Gradient-descent trajectories of convex quadratics, a ready source of
//! self-contracted polylines.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::curve::{CurveMeta, SampledCurve};
use crate::error::{domain, Result};
use crate::geometry::Point;

/// Largest eigenvalue of a symmetric positive-definite `q`, or a domain
/// error when `q` is not square, symmetric and positive definite.
pub fn spd_lambda_max(q: &DMatrix<f64>) -> Result<f64> {
    if !q.is_square() || q.nrows() < 2 {
        return Err(domain("Q must be square of size at least 2"));
    }
    let scale = q.amax().max(1.0);
    if (q - q.transpose()).amax() > 1e-12 * scale {
        return Err(domain("Q is not symmetric"));
    }
    if Cholesky::new(q.clone()).is_none() {
        return Err(domain("Q is not positive definite"));
    }
    Ok(SymmetricEigen::new(q.clone()).eigenvalues.max())
}

/// Iterates `xₖ₊₁ = xₖ − s·2Qxₖ` of `f(x) = xᵀQx` for `k = 0..=iters`,
/// parametrized by `k`.
pub fn gradient_descent_trajectory(q: &DMatrix<f64>, x0: &Point, step_size: f64, iters: usize) -> Result<SampledCurve> {
    let lmax = spd_lambda_max(q)?;
    if x0.dim() != q.nrows() {
        return Err(domain(format!("x0 has dimension {}, Q has size {}", x0.dim(), q.nrows())));
    }
    if !(step_size > 0.0 && step_size < 1.0 / lmax) {
        return Err(domain(format!("step size {step_size} must lie in (0, 1/lambda_max = {})", 1.0 / lmax)));
    }
    if iters < 2 {
        return Err(domain("need at least 2 iterations"));
    }
    let d = x0.dim();
    let mut x = DVector::from_column_slice(x0.coords());
    let mut coords = Vec::with_capacity((iters + 1) * d);
    coords.extend_from_slice(x.as_slice());
    for _ in 0..iters {
        x = &x - (q * &x) * (2.0 * step_size);
        coords.extend_from_slice(x.as_slice());
    }
    let params = (0..=iters).map(|k| k as f64).collect();
    let mut meta = CurveMeta { kind: "gradient_descent".into(), ..Default::default() };
    meta.values.insert("step_size".into(), step_size);
    meta.values.insert("lambda_max".into(), lmax);
    Ok(SampledCurve::from_flat(params, coords, d)?.with_meta(meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        let x0 = Point::new(vec![1.0, 1.0]).unwrap();
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(gradient_descent_trajectory(&bad, &x0, 0.1, 5).is_err());
        let q = DMatrix::<f64>::identity(2, 2);
        assert!(gradient_descent_trajectory(&q, &x0, 1.0, 5).is_err());
        assert!(gradient_descent_trajectory(&q, &x0, 0.1, 1).is_err());
    }

    #[test]
    fn identity_iterates_shrink_geometrically() {
        let q = DMatrix::<f64>::identity(2, 2);
        let c = gradient_descent_trajectory(&q, &Point::new(vec![1.0, 2.0]).unwrap(), 0.25, 4).unwrap();
        assert_eq!(c.len(), 5);
        assert!((c.point(1)[1] - 1.0).abs() < 1e-15);
        assert!((c.point(4)[0] - 0.0625).abs() < 1e-15);
    }
}
