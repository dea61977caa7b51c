//! The universal length bound for λ-curves with `λ < 1/d`, and the width
//! profiles its proof is built on.
//!
//! For a net `ξ₁, …, ξ_N` the width `Wᵢ(t)` is the length of the projection
//! of the initial part `Γ(t)` on `ξᵢ`, and `W_F = Σ Wᵢ`. On a λ-curve every
//! step increases `W_F` by at least `η` times the chord, while `W_F` never
//! exceeds `N · diam`, which bounds the length by `N η⁻¹ diam`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::checks::Checker;
use crate::curve::{diameter, total_length, SampledCurve};
use crate::error::{domain, EelError, Result};
use crate::geometry::{build_sphere_net, dist, dot, SphereNet};
use crate::par::{map_collect, map_reduce, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepulsionConstants {
    pub delta: f64,
    pub rho: f64,
    pub eta: f64,
    pub lambda: f64,
    pub d: usize,
}

impl RepulsionConstants {
    /// `δ = √(2(1−λ))`, `ρ = δ/2`, `η = ρ/3`, for `−1 ≤ λ < 1/d`.
    pub fn new(lambda: f64, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(domain("dimension must be at least 2"));
        }
        if !(lambda >= -1.0 && lambda < 1.0 / d as f64) {
            return Err(domain(format!(
                "lambda = {lambda} must lie in [-1, 1/d) = [-1, {}); the length bound needs lambda < 1/d",
                1.0 / d as f64
            )));
        }
        let delta = (2.0 * (1.0 - lambda)).sqrt();
        let rho = delta / 2.0;
        Ok(RepulsionConstants { delta, rho, eta: rho / 3.0, lambda, d })
    }

    pub fn net(&self) -> Result<SphereNet> {
        build_sphere_net(self.d, self.eta)
    }
}

/// `(#net) · η⁻¹ · diam` for the net built at the repulsion η.
pub fn length_bound(lambda: f64, d: usize, diam: f64) -> Result<f64> {
    if !(diam > 0.0 && diam.is_finite()) {
        return Err(domain("diameter must be positive and finite"));
    }
    let k = RepulsionConstants::new(lambda, d)?;
    Ok(k.net()?.len() as f64 / k.eta * diam)
}

/// Prefix widths of a sampled curve along every net direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthProfile {
    pub net: SphereNet,
    pub params: Vec<f64>,
    /// Row `j` holds `W₁(tⱼ), …, W_N(tⱼ)`.
    pub widths: Vec<Vec<f64>>,
    pub total: Vec<f64>,
}

impl WidthProfile {
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// CSV with header `t,W_1,…,W_N,W_F`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        let mut header = vec!["t".to_string()];
        header.extend((1..=self.net.len()).map(|i| format!("W_{i}")));
        header.push("W_F".into());
        out.write_record(&header).map_err(csv_err)?;
        for (j, row) in self.widths.iter().enumerate() {
            let mut rec = vec![format!("{:.16e}", self.params[j])];
            rec.extend(row.iter().map(|v| format!("{v:.16e}")));
            rec.push(format!("{:.16e}", self.total[j]));
            out.write_record(&rec).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Smallest `W_F(t_k) − W_F(t_j) − η‖p_k − p_j‖` over `j < k`, with the
    /// pair realizing it.
    pub fn increment_margin(&self, c: &SampledCurve, eta: f64, exec: Execution) -> (f64, (usize, usize)) {
        let pick = |a: (f64, (usize, usize)), b: (f64, (usize, usize))| {
            if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        };
        let none = (f64::INFINITY, (usize::MAX, usize::MAX));
        map_reduce(
            exec,
            1..c.len(),
            none,
            |k| {
                (0..k)
                    .map(|j| (self.total[k] - self.total[j] - eta * dist(c.point(k), c.point(j)), (j, k)))
                    .fold(none, pick)
            },
            pick,
        )
    }
}

fn csv_err(e: csv::Error) -> EelError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => EelError::Io(io),
        other => domain(format!("csv: {other:?}")),
    }
}

/// `Wᵢ(tⱼ) = max − min of ⟨ξᵢ, p_k⟩` over `k ≤ j`: the interval hull of the
/// projected initial part.
pub fn width_profile(c: &SampledCurve, net: &SphereNet) -> Result<WidthProfile> {
    width_profile_with(c, net, Execution::Parallel)
}

pub fn width_profile_with(c: &SampledCurve, net: &SphereNet, exec: Execution) -> Result<WidthProfile> {
    if net.dim() != c.dim() {
        return Err(domain(format!("net has dimension {}, curve has {}", net.dim(), c.dim())));
    }
    let columns: Vec<Vec<f64>> = map_collect(exec, 0..net.len(), |i| {
        let xi = net.directions()[i].coords();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        c.points()
            .map(|p| {
                let s = dot(xi, p);
                lo = lo.min(s);
                hi = hi.max(s);
                hi - lo
            })
            .collect()
    });
    let widths: Vec<Vec<f64>> = (0..c.len()).map(|j| columns.iter().map(|col| col[j]).collect()).collect();
    let total = widths.iter().map(|row| row.iter().sum()).collect();
    Ok(WidthProfile { net: net.clone(), params: c.params().to_vec(), widths, total })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthBoundReport {
    pub lambda: f64,
    pub d: usize,
    pub eta: f64,
    pub net_size: usize,
    pub length: f64,
    pub diameter: f64,
    pub bound: f64,
    /// `bound − length`.
    pub slack: f64,
    pub holds: bool,
}

/// Compares the polyline length of `c` with [`length_bound`] at its measured
/// diameter. Refuses curves that fail the λ-curve check at `lambda`.
pub fn verify_length_bound(c: &SampledCurve, lambda: f64, d: usize) -> Result<LengthBoundReport> {
    verify_length_bound_with(c, lambda, d, &Checker::default())
}

pub fn verify_length_bound_with(
    c: &SampledCurve,
    lambda: f64,
    d: usize,
    checker: &Checker,
) -> Result<LengthBoundReport> {
    if d != c.dim() {
        return Err(domain(format!("d = {d} but the curve lives in dimension {}", c.dim())));
    }
    let k = RepulsionConstants::new(lambda, d)?;
    let report = checker.lambda_curve(c, lambda)?;
    if !report.passed {
        return Err(EelError::Precondition(format!(
            "curve is not a {lambda}-curve: margin {:.3e} at samples {:?}",
            report.worst_margin, report.witness
        )));
    }
    let net = k.net()?;
    let length = total_length(c);
    let diam = diameter(c);
    let bound = net.len() as f64 / k.eta * diam;
    Ok(LengthBoundReport {
        lambda,
        d,
        eta: k.eta,
        net_size: net.len(),
        length,
        diameter: diam,
        bound,
        slack: bound - length,
        holds: length <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_at_zero_and_minus_one() {
        let k = RepulsionConstants::new(0.0, 3).unwrap();
        assert!((k.eta - 2f64.sqrt() / 6.0).abs() < 1e-15);
        let k = RepulsionConstants::new(-1.0, 2).unwrap();
        assert!((k.delta - 2.0).abs() < 1e-15 && (k.eta - 1.0 / 3.0).abs() < 1e-15);
        assert!(RepulsionConstants::new(0.5, 2).is_err());
        assert!(RepulsionConstants::new(1.0 / 3.0, 3).is_err());
    }

    #[test]
    fn planar_bound_value() {
        let b = length_bound(0.0, 2, 1.0).unwrap();
        assert!((b - 3.0 / (2f64.sqrt() / 6.0)).abs() < 1e-12);
        assert!((length_bound(0.0, 2, 2.5).unwrap() - 2.5 * b).abs() < 1e-9);
        assert!(length_bound(-0.5, 2, 1.0).unwrap() <= b);
    }

    #[test]
    fn segment_widths() {
        let c = SampledCurve::new(vec![0.0, 1.0, 2.0], vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![3.0, 0.0]]).unwrap();
        let net = build_sphere_net(2, 0.2).unwrap();
        let w = width_profile(&c, &net).unwrap();
        let first = net.directions()[0].coords()[0].abs();
        assert!((w.widths[2][0] - 3.0 * first).abs() < 1e-12);
        assert_eq!(w.total[0], 0.0);
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,W_1,"));
        assert_eq!(text.lines().count(), 4);
        let r = verify_length_bound(&c, 0.0, 2).unwrap();
        assert!(r.holds && (r.length - 3.0).abs() < 1e-12);
    }
}
