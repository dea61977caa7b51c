//! The discrete curve model: a strictly increasing parameter grid with one
//! point of ℝᵈ per parameter.
//!
//! Constructions may attach the unit right and left tangents of the analytic
//! curve at every sample. Checkers then use the exact forward direction
//! instead of the one-step chord, whose curvature bias is of the order of
//! the sampling step.

mod io;

pub use io::{read_csv, read_tangents_csv, write_csv, write_tangents_csv};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, EelError, Result};
use crate::geometry::{dist, dot, normalized, GeneratedCone, UnitVector};

/// Unit right/left tangents per sample, stored flat like the points.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangents {
    right: Vec<f64>,
    left: Vec<f64>,
}

/// Construction metadata carried alongside the samples.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CurveMeta {
    pub kind: String,
    pub values: BTreeMap<String, f64>,
    /// Sample indices where two construction pieces meet.
    pub junctions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    params: Vec<f64>,
    coords: Vec<f64>,
    dim: usize,
    tangents: Option<Tangents>,
    meta: CurveMeta,
}

impl SampledCurve {
    /// Builds a curve from parameters and points.
    pub fn new(params: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(domain("all points must have the same dimension"));
        }
        let coords = points.into_iter().flatten().collect();
        Self::from_flat(params, coords, dim)
    }

    /// Builds a curve from row-major coordinates.
    pub fn from_flat(params: Vec<f64>, coords: Vec<f64>, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(domain(format!("curves live in dimension >= 2, got {dim}")));
        }
        if params.is_empty() {
            return Err(domain("a curve needs at least one sample"));
        }
        if coords.len() != params.len() * dim {
            return Err(domain("coordinate count does not match params × dim"));
        }
        if params.iter().chain(&coords).any(|x| !x.is_finite()) {
            return Err(domain("params and coordinates must be finite"));
        }
        if let Some(i) = params.windows(2).position(|w| w[1] <= w[0]) {
            return Err(domain(format!(
                "params must increase strictly (t[{i}] = {}, t[{}] = {})",
                params[i],
                i + 1,
                params[i + 1]
            )));
        }
        Ok(SampledCurve { params, coords, dim, tangents: None, meta: CurveMeta::default() })
    }

    /// Attaches unit tangents (flat, `len × dim` each).
    pub fn with_tangents(mut self, right: Vec<f64>, left: Vec<f64>) -> Result<Self> {
        let n = self.coords.len();
        if right.len() != n || left.len() != n {
            return Err(domain("tangent arrays must match the coordinate array"));
        }
        for (k, t) in right.chunks(self.dim).chain(left.chunks(self.dim)).enumerate() {
            let norm = dot(t, t).sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(domain(format!("tangent {} has norm {norm}", k % self.params.len())));
            }
        }
        self.tangents = Some(Tangents { right, left });
        Ok(self)
    }

    pub fn without_tangents(mut self) -> Self {
        self.tangents = None;
        self
    }

    pub fn with_meta(mut self, meta: CurveMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Number of samples, `m + 1`.
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn param(&self, i: usize) -> f64 {
        self.params[i]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.dim)
    }

    pub fn has_tangents(&self) -> bool {
        self.tangents.is_some()
    }

    pub fn right_tangent(&self, i: usize) -> Option<&[f64]> {
        self.tangents.as_ref().map(|t| &t.right[i * self.dim..(i + 1) * self.dim])
    }

    pub fn left_tangent(&self, i: usize) -> Option<&[f64]> {
        self.tangents.as_ref().map(|t| &t.left[i * self.dim..(i + 1) * self.dim])
    }

    pub fn meta(&self) -> &CurveMeta {
        &self.meta
    }

    /// The samples with indices in `range`, keeping parameters, tangents and
    /// the junctions that fall inside.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        if range.start >= range.end || range.end > self.len() {
            return Err(EelError::IndexOutOfRange { index: range.end, len: self.len() });
        }
        let (a, b) = (range.start * self.dim, range.end * self.dim);
        let mut out = SampledCurve {
            params: self.params[range.clone()].to_vec(),
            coords: self.coords[a..b].to_vec(),
            dim: self.dim,
            tangents: self
                .tangents
                .as_ref()
                .map(|t| Tangents { right: t.right[a..b].to_vec(), left: t.left[a..b].to_vec() }),
            meta: self.meta.clone(),
        };
        out.meta.junctions =
            self.meta.junctions.iter().filter(|&&j| range.contains(&j)).map(|&j| j - range.start).collect();
        Ok(out)
    }

    /// Applies `f` to every point (and the linear part `g` to tangents).
    pub fn map_points(&self, f: impl Fn(&[f64]) -> Vec<f64>, g: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let coords: Vec<f64> = self.points().flat_map(&f).collect();
        let dim = coords.len() / self.len();
        let mut c = SampledCurve::from_flat(self.params.clone(), coords, dim)?;
        if let Some(t) = &self.tangents {
            let fix = |v: &[f64]| normalized(&g(v)).unwrap_or_else(|| vec![0.0; dim]);
            let right = t.right.chunks(self.dim).flat_map(fix).collect();
            let left = t.left.chunks(self.dim).flat_map(fix).collect();
            c = c.with_tangents(right, left)?;
        }
        Ok(c.with_meta(self.meta.clone()))
    }
}

/// Forward and backward unit secants at one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SecantSet {
    pub index: usize,
    pub forward: Vec<UnitVector>,
    pub backward: Vec<UnitVector>,
}

fn check_index(c: &SampledCurve, i: usize) -> Result<()> {
    if i >= c.len() {
        return Err(EelError::IndexOutOfRange { index: i, len: c.len() });
    }
    Ok(())
}

/// Sum of segment lengths between samples `from` and `to`.
pub fn polyline_length(c: &SampledCurve, from: usize, to: usize) -> Result<f64> {
    check_index(c, to)?;
    if from > to {
        return Err(domain(format!("from index {from} exceeds to index {to}")));
    }
    Ok((from..to).map(|i| dist(c.point(i), c.point(i + 1))).sum())
}

/// Total polyline length.
pub fn total_length(c: &SampledCurve) -> f64 {
    (0..c.len().saturating_sub(1)).map(|i| dist(c.point(i), c.point(i + 1))).sum()
}

/// Cumulative lengths `L[i] = polyline_length(c, 0, i)`.
pub fn cumulative_length(c: &SampledCurve) -> Vec<f64> {
    let mut out = Vec::with_capacity(c.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..c.len() {
        acc += dist(c.point(i - 1), c.point(i));
        out.push(acc);
    }
    out
}

/// The normalized chord from sample `i` to sample `i + 1`.
pub fn forward_secant(c: &SampledCurve, i: usize) -> Result<UnitVector> {
    if i + 1 >= c.len() {
        return Err(EelError::IndexOutOfRange { index: i + 1, len: c.len() });
    }
    let v: Vec<f64> = c.point(i + 1).iter().zip(c.point(i)).map(|(a, b)| a - b).collect();
    normalized(&v).map(UnitVector::from_raw).ok_or(EelError::DegenerateSample { index: i })
}

/// The normalized chord from sample `i` to sample `i − 1`.
pub fn backward_secant(c: &SampledCurve, i: usize) -> Result<UnitVector> {
    check_index(c, i)?;
    if i == 0 {
        return Err(EelError::IndexOutOfRange { index: 0, len: c.len() });
    }
    let v: Vec<f64> = c.point(i - 1).iter().zip(c.point(i)).map(|(a, b)| a - b).collect();
    normalized(&v).map(UnitVector::from_raw).ok_or(EelError::DegenerateSample { index: i - 1 })
}

/// Discrete `sec⁺` and `sec⁻` at sample `i`: the one-step chords.
pub fn secant_set(c: &SampledCurve, i: usize) -> Result<SecantSet> {
    check_index(c, i)?;
    let forward = if i + 1 < c.len() { vec![forward_secant(c, i)?] } else { Vec::new() };
    let backward = if i > 0 { vec![backward_secant(c, i)?] } else { Vec::new() };
    Ok(SecantSet { index: i, forward, backward })
}

/// The discrete `K(tᵢ)`: the cone generated by the directions from sample
/// `i` to every distinct earlier point. Empty at `i = 0`.
pub fn initial_cone(c: &SampledCurve, i: usize) -> Result<GeneratedCone> {
    check_index(c, i)?;
    let p = c.point(i);
    let mut seen: Vec<&[f64]> = Vec::new();
    let mut gens = Vec::with_capacity(i);
    for j in 0..i {
        let q = c.point(j);
        if q == p {
            continue;
        }
        let v: Vec<f64> = q.iter().zip(p).map(|(a, b)| a - b).collect();
        if let Some(u) = normalized(&v) {
            seen.push(q);
            gens.push(UnitVector::from_raw(u));
        }
    }
    // Drop exact repeats of earlier points so each distinct point contributes
    // one generator.
    let mut order: Vec<usize> = (0..seen.len()).collect();
    order.sort_by(|&a, &b| {
        seen[a]
            .iter()
            .zip(seen[b])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut keep = vec![true; seen.len()];
    for w in order.windows(2) {
        if seen[w[0]] == seen[w[1]] {
            keep[w[1]] = false;
        }
    }
    let gens = gens.into_iter().zip(keep).filter_map(|(g, k)| k.then_some(g)).collect();
    GeneratedCone::new(c.dim(), gens)
}

/// Time reversal `t ↦ −t`: parameters negated, order reversed. Right and
/// left tangents swap roles and change sign.
pub fn reverse(c: &SampledCurve) -> SampledCurve {
    let n = c.len();
    let d = c.dim;
    let params = c.params.iter().rev().map(|t| -t).collect();
    let mut coords = Vec::with_capacity(c.coords.len());
    for i in (0..n).rev() {
        coords.extend_from_slice(c.point(i));
    }
    let tangents = c.tangents.as_ref().map(|t| {
        let flip = |src: &[f64]| -> Vec<f64> {
            let mut out = Vec::with_capacity(src.len());
            for i in (0..n).rev() {
                out.extend(src[i * d..(i + 1) * d].iter().map(|x| -x));
            }
            out
        };
        Tangents { right: flip(&t.left), left: flip(&t.right) }
    });
    let mut meta = c.meta.clone();
    meta.junctions = c.meta.junctions.iter().rev().map(|&j| n - 1 - j).collect();
    SampledCurve { params, coords, dim: d, tangents, meta }
}

/// Largest distance between two samples.
pub fn diameter(c: &SampledCurve) -> f64 {
    let mut best = 0.0f64;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            best = best.max(dist(c.point(i), c.point(j)));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg() -> SampledCurve {
        SampledCurve::new(vec![0.0, 1.0, 2.0], vec![vec![0.0, 0.0], vec![1.5, 2.0], vec![3.0, 4.0]]).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(SampledCurve::new(vec![0.0, 0.0], vec![vec![0.0, 0.0], vec![1.0, 0.0]]).is_err());
        assert!(SampledCurve::new(vec![0.0], vec![vec![0.0]]).is_err());
        assert!(SampledCurve::new(vec![0.0, 1.0], vec![vec![0.0, 0.0], vec![1.0]]).is_err());
        assert!(SampledCurve::new(vec![0.0], vec![vec![f64::NAN, 0.0]]).is_err());
    }

    #[test]
    fn length_examples() {
        let c = SampledCurve::new(vec![0.0, 1.0], vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(polyline_length(&c, 0, 1).unwrap(), 5.0);
        assert_eq!(polyline_length(&c, 1, 1).unwrap(), 0.0);
        assert!(polyline_length(&c, 0, 2).is_err());
        assert!(polyline_length(&c, 1, 0).is_err());
    }

    #[test]
    fn secants_on_a_segment() {
        let c = seg();
        let f0 = forward_secant(&c, 0).unwrap();
        let f1 = forward_secant(&c, 1).unwrap();
        assert!((f0.coords()[0] - 0.6).abs() < 1e-15);
        assert!((f0.coords()[0] - f1.coords()[0]).abs() < 1e-15);
        assert!(forward_secant(&c, 2).is_err());
        let s = secant_set(&c, 0).unwrap();
        assert!(s.backward.is_empty() && s.forward.len() == 1);
        let s = secant_set(&c, 2).unwrap();
        assert!(s.forward.is_empty() && s.backward.len() == 1);
    }

    #[test]
    fn degenerate_forward_secant() {
        let c = SampledCurve::new(vec![0.0, 1.0], vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(matches!(forward_secant(&c, 0), Err(EelError::DegenerateSample { index: 0 })));
    }

    #[test]
    fn initial_cone_examples() {
        let c = seg();
        assert!(initial_cone(&c, 0).unwrap().is_trivial());
        let k1 = initial_cone(&c, 1).unwrap();
        assert_eq!(k1.generators().len(), 1);
        assert!((k1.generators()[0].coords()[1] + 0.8).abs() < 1e-15);
        let k2 = initial_cone(&c, 2).unwrap();
        assert_eq!(k2.generators().len(), 2);
        // repeated earlier point counts once
        let c = SampledCurve::new(
            vec![0.0, 1.0, 2.0, 3.0],
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert_eq!(initial_cone(&c, 3).unwrap().generators().len(), 2);
    }

    #[test]
    fn reverse_is_an_involution() {
        let c = seg().with_tangents([0.6, 0.8].repeat(3), [0.6, 0.8].repeat(3)).unwrap();
        let r = reverse(&c);
        assert_eq!(r.params(), &[-2.0, -1.0, 0.0]);
        assert_eq!(r.point(0), c.point(2));
        assert_eq!(r.right_tangent(0).unwrap(), &[-0.6, -0.8]);
        assert_eq!(reverse(&r), c);
    }

    #[test]
    fn slicing_keeps_tangents() {
        let c = seg().with_tangents([0.6, 0.8].repeat(3), [0.6, 0.8].repeat(3)).unwrap();
        let s = c.slice(1..3).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.point(0), c.point(1));
        assert!(s.has_tangents());
        assert!(c.slice(2..2).is_err());
    }

    #[test]
    fn diameter_of_segment() {
        assert!((diameter(&seg()) - 5.0).abs() < 1e-15);
    }
}
