//! Axis cones C_x(v, α), finitely generated cones, apertures, polars and the
//! δ-enlargement.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{dot, norm, normalized, orthonormal_complement, sub, Point, UnitVector};
use crate::error::{domain, Result};

/// The open cone `apex + {u : ⟨u, axis⟩ > ‖u‖ cos α} ∪ {apex}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisCone {
    apex: Point,
    axis: UnitVector,
    half_angle: f64,
}

impl AxisCone {
    pub fn new(apex: Point, axis: UnitVector, half_angle: f64) -> Result<Self> {
        if apex.dim() != axis.dim() {
            return Err(domain("apex and axis dimensions differ"));
        }
        if !(half_angle > 0.0 && half_angle < PI) {
            return Err(domain(format!("half angle {half_angle} not in (0, π)")));
        }
        Ok(AxisCone { apex, axis, half_angle })
    }

    pub fn apex(&self) -> &Point {
        &self.apex
    }

    pub fn axis(&self) -> &UnitVector {
        &self.axis
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }
}

/// Normalized membership margin `⟨u, axis⟩/‖u‖ − cos α` of `p` with
/// `u = p − apex`; positive inside the open cone. `None` when `p` is the apex.
pub fn axis_cone_margin(c: &AxisCone, p: &[f64]) -> Option<f64> {
    let u = sub(p, c.apex.coords());
    let n = norm(&u);
    if n == 0.0 {
        return None;
    }
    Some(dot(&u, c.axis.coords()) / n - c.half_angle.cos())
}

/// Membership in the open cone. The strict inequality is relaxed by `tol`
/// (relative to `‖p − apex‖`), and points within `tol` of the apex count as
/// the apex itself.
pub fn axis_cone_contains(c: &AxisCone, p: &[f64], tol: f64) -> bool {
    if p.len() != c.apex.dim() {
        return false;
    }
    let u = sub(p, c.apex.coords());
    if norm(&u) <= tol {
        return true;
    }
    match axis_cone_margin(c, p) {
        None => true,
        Some(m) => m > -tol,
    }
}

/// The closed convex cone generated by finitely many unit vectors; an empty
/// generator list stands for `{0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedCone {
    dim: usize,
    generators: Vec<UnitVector>,
}

impl GeneratedCone {
    pub fn new(dim: usize, generators: Vec<UnitVector>) -> Result<Self> {
        if dim == 0 {
            return Err(domain("cone dimension must be positive"));
        }
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(domain("generator dimension mismatch"));
        }
        Ok(GeneratedCone { dim, generators })
    }

    /// The trivial cone `{0}` in ℝᵈ.
    pub fn trivial(dim: usize) -> Self {
        GeneratedCone { dim, generators: Vec::new() }
    }

    pub(crate) fn from_raw(dim: usize, generators: Vec<UnitVector>) -> Self {
        GeneratedCone { dim, generators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[UnitVector] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

/// The aperture `A(S) = inf ⟨u₁, u₂⟩` over ordered pairs of `S`, self-pairs
/// included.
pub fn aperture_set(s: &[UnitVector]) -> Result<f64> {
    if s.is_empty() {
        return Err(domain("aperture of an empty set"));
    }
    let mut best = 1.0f64;
    for (i, u) in s.iter().enumerate() {
        for w in &s[i..] {
            best = best.min(dot(u.coords(), w.coords()));
        }
    }
    Ok(best.clamp(-1.0, 1.0))
}

/// `arccos A(generators)`. For d ≥ 3 the aperture of the full cone can be
/// larger than that of its generator set; this reports the latter.
pub fn cone_aperture(k: &GeneratedCone) -> Result<f64> {
    if k.is_trivial() {
        return Err(domain("aperture of the trivial cone"));
    }
    Ok(aperture_set(k.generators())?.acos())
}

/// `v ∈ K°` up to `tol`: `⟨v, g⟩ ≤ tol` for every generator.
pub fn polar_contains(k: &GeneratedCone, v: &[f64], tol: f64) -> bool {
    k.generators().iter().all(|g| dot(v, g.coords()) <= tol)
}

/// A generated cone containing the δ-enlargement `cone((K ∩ 𝕊) + B_δ)`.
///
/// The enlargement equals the cone over the spherical caps of angular radius
/// `arcsin δ` around the generators, and each cap is covered from outside by
/// a small polyhedral cone: two rays in the plane, a circumscribed polygon
/// (adjacent rays closer than δ/2) in ℝ³ and a circumscribed cross-polytope
/// beyond. `delta = 0` returns `K`.
pub fn enlarge_cone(k: &GeneratedCone, delta: f64) -> Result<GeneratedCone> {
    if !(0.0..1.0).contains(&delta) {
        return Err(domain(format!("delta {delta} not in [0, 1)")));
    }
    if k.is_trivial() {
        return Err(domain("cannot enlarge the trivial cone"));
    }
    if delta == 0.0 || k.dim() == 1 {
        return Ok(k.clone());
    }
    let theta = delta.asin();
    let d = k.dim();
    let mut out = Vec::new();
    for g in k.generators() {
        let g = g.coords();
        let basis = orthonormal_complement(g);
        match d {
            2 => {
                let e = &basis[0];
                for s in [-1.0, 1.0] {
                    out.push(ray(g, &[(s * theta.tan(), e)]));
                }
            }
            3 => {
                let sides = ((4.0 * PI * theta.sin() / delta).ceil() as usize).max(4);
                let tan_outer = theta.tan() / (PI / sides as f64).cos();
                for j in 0..sides {
                    let phi = 2.0 * PI * j as f64 / sides as f64;
                    out.push(ray(g, &[(tan_outer * phi.cos(), &basis[0]), (tan_outer * phi.sin(), &basis[1])]));
                }
            }
            _ => {
                let reach = ((d - 1) as f64).sqrt() * theta.tan();
                for e in &basis {
                    for s in [-1.0, 1.0] {
                        out.push(ray(g, &[(s * reach, e)]));
                    }
                }
            }
        }
    }
    Ok(GeneratedCone::from_raw(d, out))
}

fn ray(g: &[f64], offsets: &[(f64, &Vec<f64>)]) -> UnitVector {
    let mut v = g.to_vec();
    for (c, e) in offsets {
        v.iter_mut().zip(e.iter()).for_each(|(x, y)| *x += c * y);
    }
    UnitVector::from_raw(normalized(&v).expect("offset rays are nonzero"))
}
