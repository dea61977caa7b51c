//! Grid certification of the inequalities behind the helicoidal
//! construction, paired with their closed-form suprema where available.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::params::{golden_max, small_cylinder_ratio, sup_neg_sinc, EelParams};
use crate::error::{domain, EelError, Result};
use crate::par::{map_reduce, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaName {
    /// Backward chords of the helix point against the tangent.
    HelixSelfExpanded,
    /// The z-axis is outside every forward cone of the helix.
    ZAxis,
    /// The forward cones miss the inner cylinder of radius `r/N`.
    SmallCylinder,
    /// The forward cones miss the radial segment joining two spirals.
    RadialSegment,
    /// A small cylinder does not see a remote bigger one.
    BigCylinder,
}

impl LemmaName {
    pub const ALL: [LemmaName; 5] = [
        LemmaName::HelixSelfExpanded,
        LemmaName::ZAxis,
        LemmaName::SmallCylinder,
        LemmaName::RadialSegment,
        LemmaName::BigCylinder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaName::HelixSelfExpanded => "helix_self_expanded",
            LemmaName::ZAxis => "z_axis",
            LemmaName::SmallCylinder => "small_cylinder",
            LemmaName::RadialSegment => "radial_segment",
            LemmaName::BigCylinder => "big_cylinder",
        }
    }
}

impl std::fmt::Display for LemmaName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for LemmaName {
    type Err = EelError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        LemmaName::ALL.into_iter().find(|l| l.name() == key).ok_or_else(|| domain(format!("unknown lemma {s:?}")))
    }
}

/// Outcome of [`certify_lemma`]. A lemma is certified when the largest
/// violation, grid and closed form combined, is not positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub mu: f64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: f64,
    pub lambda: f64,
    pub lemma: LemmaName,
    pub max_violation: f64,
    /// Grid point of the largest grid violation, in `coordinates` order.
    pub argmax: Vec<f64>,
    /// Points per axis.
    pub grid: usize,
    pub coordinates: Vec<String>,
    /// Violation computed from the analytic supremum, when one is known.
    pub closed_form: Option<f64>,
    pub certified: bool,
}

/// Largest `f(i, j)` over an `n1 × n2` grid, ties going to the smallest
/// `(i, j)`.
fn grid_max(
    exec: Execution,
    n1: usize,
    n2: usize,
    f: impl Fn(usize, usize) -> f64 + Sync + Send,
) -> (f64, usize, usize) {
    let pick = |a: (f64, usize, usize), b: (f64, usize, usize)| {
        if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
            b
        } else {
            a
        }
    };
    map_reduce(
        exec,
        0..n1,
        (f64::NEG_INFINITY, usize::MAX, usize::MAX),
        |i| (0..n2).map(|j| (f(i, j), i, j)).fold((f64::NEG_INFINITY, usize::MAX, usize::MAX), pick),
        pick,
    )
}

fn lin(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
    if k + 1 == n {
        hi
    } else {
        lo + (hi - lo) * k as f64 / (n - 1) as f64
    }
}

/// Evaluates `name` on a grid of `grid` points per axis with the default
/// parallel execution.
pub fn certify_lemma(name: LemmaName, params: &EelParams, grid: usize) -> Result<Certification> {
    certify_lemma_with(name, params, grid, Execution::Parallel)
}

pub fn certify_lemma_with(name: LemmaName, params: &EelParams, grid: usize, exec: Execution) -> Result<Certification> {
    // Only ranges: certifying constants that fail is the point.
    params.check_ranges()?;
    if grid < 2 {
        return Err(domain("grid needs at least 2 points per axis"));
    }
    let mu = params.mu;
    let lambda = params.lambda;
    let speed = (1.0 + mu * mu).sqrt();
    let coords: &[&str];
    let (grid_violation, argmax, closed_form) = match name {
        LemmaName::HelixSelfExpanded => {
            coords = &["t"];
            // For t < −1/μ² the ratio is below 1/|t| < μ², so the range is complete.
            let lo = -1.0 / (mu * mu);
            let hi = -1e-9;
            let f = |t: f64| -t.sin() / t - mu * mu;
            let (v, i, _) = grid_max(exec, grid, 1, |i, _| f(lin(lo, hi, grid, i)));
            let t = lin(lo, hi, grid, i);
            let h = (hi - lo) / (grid - 1) as f64;
            let (rt, rv) = golden_max(f, (t - h).max(lo), (t + h).min(hi), 200);
            let (v, t) = if rv > v { (rv, rt) } else { (v, t) };
            (v, vec![t], Some(sup_neg_sinc().0 - mu * mu))
        }
        LemmaName::ZAxis => {
            coords = &["phi"];
            let rhs = lambda * speed / mu;
            let (v, i, _) = grid_max(exec, grid, 1, |i, _| lin(0.0, FRAC_PI_2, grid, i).sin() - rhs);
            (v, vec![lin(0.0, FRAC_PI_2, grid, i)], Some(1.0 - rhs))
        }
        LemmaName::SmallCylinder => {
            coords = &["theta", "phi"];
            let nm1 = (params.n - 1) as f64;
            let big_n = params.n as f64;
            let rows: Vec<(f64, f64)> = (0..grid).map(|i| lin(0.0, 2.0 * PI, grid, i).sin_cos()).collect();
            let cols: Vec<f64> = (0..grid).map(|j| lin(0.0, FRAC_PI_2, grid, j)).collect();
            let f = |i: usize, j: usize| {
                let (s, c) = rows[i];
                let phi = cols[j];
                let ratio = if j + 1 == grid {
                    mu
                } else {
                    let u = nm1 * phi.tan();
                    (s + mu * u) / (nm1 * nm1 + 2.0 * big_n * (1.0 - c) + u * u).sqrt()
                };
                ratio / speed - lambda
            };
            let (v, i, j) = grid_max(exec, grid, grid, f);
            (v, vec![lin(0.0, 2.0 * PI, grid, i), cols[j]], Some(small_cylinder_ratio(mu, params.n) - lambda))
        }
        LemmaName::RadialSegment => {
            coords = &["x", "tau"];
            // Beyond τ = 1/μ² the left side is below 1 − μ²τ < 0.
            let tmax = 1.0 / (mu * mu);
            let rows: Vec<f64> = (0..grid).map(|i| lin(0.0, 1.0, grid, i)).collect();
            let cols: Vec<(f64, f64, f64)> = (0..grid)
                .map(|j| {
                    let tau = lin(0.0, tmax, grid, j);
                    let (s, c) = tau.sin_cos();
                    (tau, s, c)
                })
                .collect();
            let f = |i: usize, j: usize| {
                let x = rows[i];
                let (tau, s, c) = cols[j];
                let lhs = -x * s - mu * mu * tau;
                let rhs = lambda * speed * ((x - c).powi(2) + s * s + mu * mu * tau * tau).sqrt();
                lhs - rhs
            };
            let (v, i, j) = grid_max(exec, grid, grid, f);
            // The reduction used for (dev): sin τ + μ²τ ≥ 0 on the same τ grid.
            let (red, _, _) = grid_max(exec, grid, 1, |k, _| {
                let (tau, s, _) = cols[k];
                -(s + mu * mu * tau)
            });
            (v.max(red), vec![rows[i], cols[j].0], None)
        }
        LemmaName::BigCylinder => {
            coords = &["u", "z"];
            let m = params.m;
            let f = |i: usize, j: usize| {
                let u = lin(0.0, 1.0, grid, i);
                let z = lin(m, 100.0 * m, grid, j);
                (u + mu * z) / z - lambda * speed
            };
            let (v, i, j) = grid_max(exec, grid, grid, f);
            (v, vec![lin(0.0, 1.0, grid, i), lin(m, 100.0 * m, grid, j)], Some(1.0 / m + mu - lambda * speed))
        }
    };
    let max_violation = closed_form.map_or(grid_violation, |c| grid_violation.max(c));
    Ok(Certification {
        mu,
        n: params.n,
        m: params.m,
        lambda,
        lemma: name,
        max_violation,
        argmax,
        grid,
        coordinates: coords.iter().map(|s| s.to_string()).collect(),
        closed_form,
        certified: max_violation <= 0.0,
    })
}
