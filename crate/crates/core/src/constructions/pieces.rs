//! Concatenation of parametrized pieces into one sampled curve with a
//! strictly increasing global parameter.

use crate::curve::{CurveMeta, SampledCurve};
use crate::error::Result;
use crate::geometry::{dist, normalized};

/// Point and unit tangent at a local parameter.
pub(crate) type PieceFn<'a> = dyn Fn(f64) -> (Vec<f64>, Vec<f64>) + 'a;

pub(crate) struct PieceBuilder {
    dim: usize,
    params: Vec<f64>,
    coords: Vec<f64>,
    right: Vec<f64>,
    left: Vec<f64>,
    junctions: Vec<usize>,
    /// Largest distance between the end of one piece and the start of the
    /// next, before the shared sample is merged.
    pub max_junction_mismatch: f64,
}

/// Uniform grid on `[t0, t1]` with spacing at most `step`, both ends
/// included.
pub(crate) fn grid(t0: f64, t1: f64, step: f64) -> Vec<f64> {
    let span = t1 - t0;
    if span <= 0.0 {
        return vec![t0];
    }
    let n = ((span / step) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (0..=n).map(|k| if k == n { t1 } else { t0 + span * k as f64 / n as f64 }).collect()
}

impl PieceBuilder {
    pub fn new(dim: usize) -> Self {
        PieceBuilder {
            dim,
            params: Vec::new(),
            coords: Vec::new(),
            right: Vec::new(),
            left: Vec::new(),
            junctions: Vec::new(),
            max_junction_mismatch: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn junctions(&self) -> &[usize] {
        &self.junctions
    }

    pub fn last_point(&self) -> Option<&[f64]> {
        let n = self.len();
        (n > 0).then(|| &self.coords[(n - 1) * self.dim..n * self.dim])
    }

    /// Appends `f` sampled on `[t0, t1]`. The first piece keeps its own
    /// parameters; later pieces are shifted so their start coincides with
    /// the current end, and their first sample merges with the last one.
    pub fn push(&mut self, t0: f64, t1: f64, step: f64, f: &PieceFn<'_>) {
        let ts = grid(t0, t1, step);
        let offset = match self.params.last() {
            None => 0.0,
            Some(&end) => end - t0,
        };
        for (k, &t) in ts.iter().enumerate() {
            let (p, tan) = f(t);
            if k == 0 && !self.params.is_empty() {
                let n = self.len();
                let last = &self.coords[(n - 1) * self.dim..];
                self.max_junction_mismatch = self.max_junction_mismatch.max(dist(last, &p));
                self.right[(n - 1) * self.dim..].copy_from_slice(&tan);
                self.junctions.push(n - 1);
                continue;
            }
            self.params.push(t + offset);
            self.coords.extend_from_slice(&p);
            self.right.extend_from_slice(&tan);
            self.left.extend_from_slice(&tan);
        }
    }

    /// Appends the straight segment from the current end to `to`.
    pub fn push_segment_to(&mut self, to: &[f64], step: f64) {
        let from = self.last_point().expect("segment needs a start").to_vec();
        let dir: Vec<f64> = to.iter().zip(&from).map(|(a, b)| a - b).collect();
        let u = normalized(&dir).expect("segment endpoints differ");
        let to = to.to_vec();
        let f = move |t: f64| {
            let p = if t >= 1.0 { to.clone() } else { from.iter().zip(&dir).map(|(a, d)| a + t * d).collect() };
            (p, u.clone())
        };
        self.push(0.0, 1.0, step, &f);
    }

    /// Overwrites a sample with its exact value.
    pub fn set_point(&mut self, index: usize, p: &[f64]) {
        self.coords[index * self.dim..(index + 1) * self.dim].copy_from_slice(p);
    }

    pub fn finish(self, kind: &str, values: &[(&str, f64)]) -> Result<SampledCurve> {
        let mut meta = CurveMeta { kind: kind.to_string(), junctions: self.junctions, ..Default::default() };
        for (k, v) in values {
            meta.values.insert((*k).to_string(), *v);
        }
        meta.values.insert("max_junction_mismatch".into(), self.max_junction_mismatch);
        Ok(SampledCurve::from_flat(self.params, self.coords, self.dim)?
            .with_tangents(self.right, self.left)?
            .with_meta(meta))
    }
}
