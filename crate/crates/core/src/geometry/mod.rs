//! Vector, cone and spherical-net primitives.
//!
//! Vectors are plain `f64` slices; [`Point`] and [`UnitVector`] are thin
//! validated wrappers used at API boundaries.

mod cone;
mod hull;
mod net;
mod nnls;

pub use cone::{
    aperture_set, axis_cone_contains, axis_cone_margin, cone_aperture, enlarge_cone, polar_contains, AxisCone,
    GeneratedCone,
};
pub use hull::{pointedness_test, Pointedness, PrecondViolation};
pub use net::{build_sphere_net, validate_coverage, CoverageCheck, SphereNet};
pub use nnls::{cone_projection, cone_projection_cos, nnls, ConeProjection, NnlsSolution};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Default tolerance on `| ‖u‖ − 1 |` for unit vectors.
pub const UNIT_TOL: f64 = 1e-12;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Returns `v / ‖v‖`, or `None` for the zero vector.
pub fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let n = norm(v);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    Some(v.iter().map(|x| x / n).collect())
}

/// A point of ℝᵈ with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(domain("a point needs at least one coordinate"));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(domain("point coordinates must be finite"));
        }
        Ok(Point(coords))
    }

    pub fn origin(d: usize) -> Self {
        Point(vec![0.0; d.max(1)])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// A vector on the unit sphere 𝕊^{d−1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Accepts `coords` as-is when its norm is within `tol` of one.
    pub fn new(coords: Vec<f64>, tol: f64) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|x| !x.is_finite()) {
            return Err(domain("unit vector needs finite coordinates"));
        }
        let n = norm(&coords);
        if (n - 1.0).abs() > tol {
            return Err(domain(format!("vector has norm {n}, not 1")));
        }
        Ok(UnitVector(coords))
    }

    /// Normalizes a nonzero vector.
    pub fn normalize(v: &[f64]) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(domain("cannot normalize a non-finite vector"));
        }
        normalized(v).map(UnitVector).ok_or_else(|| domain("cannot normalize the zero vector"))
    }

    /// The `i`-th standard basis vector of ℝᵈ.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        UnitVector(v)
    }

    pub(crate) fn from_raw(v: Vec<f64>) -> Self {
        UnitVector(v)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn neg(&self) -> Self {
        UnitVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// An orthonormal basis of the hyperplane orthogonal to the unit vector `g`.
pub(crate) fn orthonormal_complement(g: &[f64]) -> Vec<Vec<f64>> {
    let d = g.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d.saturating_sub(1));
    // Start from the standard basis, least aligned with g first, so the
    // Gram-Schmidt steps stay well conditioned.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| g[a].abs().total_cmp(&g[b].abs()));
    for &i in &order {
        if basis.len() + 1 == d {
            break;
        }
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        for _ in 0..2 {
            let c = dot(&v, g);
            v.iter_mut().zip(g).for_each(|(x, y)| *x -= c * y);
            for b in &basis {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        if let Some(u) = normalized(&v) {
            if norm(&v) > 1e-8 {
                basis.push(u);
            }
        }
    }
    basis
}
