//! The self-expanded helix `γ(t) = (r cos t, r sin t, μrt)` and the
//! five-piece C¹ curve with the cone property that is not a λ-curve.

use std::f64::consts::PI;

use super::pieces::PieceBuilder;
use crate::curve::SampledCurve;
use crate::error::{domain, Result};

/// Point and unit tangent of the helix at `t`.
pub fn helix_point(r: f64, mu: f64, t: f64) -> (Vec<f64>, Vec<f64>) {
    let (s, c) = t.sin_cos();
    let speed = (1.0 + mu * mu).sqrt();
    (vec![r * c, r * s, mu * r * t], vec![-s / speed, c / speed, mu / speed])
}

/// Samples the helix on `[t_lo, t_hi]` at uniform parameter spacing of at
/// most `step`. A degenerate range gives the single point `γ(t_lo)`.
pub fn helix(r: f64, mu: f64, t_lo: f64, t_hi: f64, step: f64) -> Result<SampledCurve> {
    if !(r > 0.0) || !(step > 0.0) || !mu.is_finite() {
        return Err(domain("helix needs r > 0, step > 0 and finite mu"));
    }
    if !(t_lo <= t_hi) {
        return Err(domain(format!("empty parameter range [{t_lo}, {t_hi}]")));
    }
    let mut b = PieceBuilder::new(3);
    b.push(t_lo, t_hi, step, &|t| helix_point(r, mu, t));
    b.finish("helix", &[("r", r), ("mu", mu), ("t_lo", t_lo), ("t_hi", t_hi), ("step", step)])
}

/// Parameter range of the five-piece curve.
pub const EXAMPLE_3D_RANGE: (f64, f64) = (-1.5 * PI, 1.0 + PI);

/// The five-piece curve on `[−3π/2, 1+π]`. Its end `(0,0,0)` is the
/// midpoint of `γ(−3π/2) = (0,−1,0)` and `γ(−π/2) = (0,1,0)`, so it is not
/// a λ-curve for any λ < 1, while every tangent line meets it only once.
/// Junction samples are set to their exact values.
pub fn example_curve_3d(step: f64) -> Result<SampledCurve> {
    if !(step > 0.0) {
        return Err(domain("step must be positive"));
    }
    let mut b = PieceBuilder::new(3);
    b.push(-1.5 * PI, -0.5 * PI, step, &|t: f64| (vec![0.0, -t.sin(), -t.cos()], vec![0.0, -t.cos(), t.sin()]));
    b.push(-0.5 * PI, 0.0, step, &|t: f64| {
        (vec![-0.5 * (1.0 + (2.0 * t).cos()), 1.0, 0.5 * (2.0 * t).sin()], vec![(2.0 * t).sin(), 0.0, (2.0 * t).cos()])
    });
    b.push(0.0, 1.0, step, &|t: f64| (vec![-1.0, 1.0, t], vec![0.0, 0.0, 1.0]));
    b.push(1.0, 1.0 + 0.5 * PI, step, &|t: f64| {
        let s = 2.0 * (t - 1.0);
        (vec![-1.0, 0.5 * (1.0 + s.cos()), 1.0 + 0.5 * s.sin()], vec![0.0, -s.sin(), s.cos()])
    });
    b.push(1.0 + 0.5 * PI, 1.0 + PI, step, &|t: f64| {
        let s = t - 1.0;
        (vec![-s.sin(), 0.0, 1.0 + s.cos()], vec![-s.cos(), 0.0, -s.sin()])
    });
    let exact: [[f64; 3]; 4] = [[0.0, 1.0, 0.0], [-1.0, 1.0, 0.0], [-1.0, 1.0, 1.0], [-1.0, 0.0, 1.0]];
    let junctions = b.junctions().to_vec();
    for (j, p) in junctions.into_iter().zip(exact) {
        b.set_point(j, &p);
    }
    let last = b.len() - 1;
    b.set_point(0, &[0.0, -1.0, 0.0]);
    b.set_point(last, &[0.0, 0.0, 0.0]);
    b.finish("example3d", &[("step", step)])
}
