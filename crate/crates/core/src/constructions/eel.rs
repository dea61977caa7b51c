//! λ-eels built from nested helices: the bounded-cylinder eel and the
//! stacked-cylinder eel of infinite length inside the unit ball.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::params::{CylinderSpec, EelParams};
use super::pieces::PieceBuilder;
use crate::curve::SampledCurve;
use crate::error::{domain, EelError, Result};

/// Default cap on the number of samples a construction may emit.
pub const DEFAULT_SAMPLE_BUDGET: usize = 10_000_000;

/// How many crossings (spirals) each stage cylinder gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingPolicy {
    /// Smallest odd `n` with `2πμrₙn > 1`, which gives every stage length
    /// greater than one.
    UnitLength,
    /// The same odd count at every stage. Each stage is still an exact
    /// λ-eel, only shorter.
    Fixed(u32),
}

impl std::str::FromStr for CrossingPolicy {
    type Err = EelError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "unit-length" || s == "unit_length" {
            return Ok(CrossingPolicy::UnitLength);
        }
        s.strip_prefix("fixed:")
            .and_then(|n| n.parse().ok())
            .filter(|n: &u32| n % 2 == 1)
            .map(CrossingPolicy::Fixed)
            .ok_or_else(|| domain(format!("crossing policy {s:?}: use unit-length or fixed:<odd n>")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfiniteEelOptions {
    pub crossings: CrossingPolicy,
    pub sample_budget: usize,
}

impl Default for InfiniteEelOptions {
    fn default() -> Self {
        InfiniteEelOptions { crossings: CrossingPolicy::UnitLength, sample_budget: DEFAULT_SAMPLE_BUDGET }
    }
}

/// Intervals `grid` uses on a span, computed without allocating.
fn intervals(span: f64, step: f64) -> f64 {
    ((span / step) * (1.0 - 1e-12)).ceil().max(1.0)
}

/// Samples emitted by [`cylinder_eel`] with `n` crossings.
pub fn cylinder_eel_samples(n: u32, big_n: u32, step: f64) -> f64 {
    let spirals: f64 = (1..=n).map(|k| intervals(2.0 * PI * (big_n as f64).powi((n - k) as i32), step)).sum();
    spirals + (n - 1) as f64 * intervals(1.0, step) + 1.0
}

/// Closed-form length of a cylinder eel: `n` spirals of length
/// `2πr√(1+μ²)` each plus radial junctions summing to `r(1 − N^{1−n})`.
pub fn cylinder_eel_length(r: f64, n: u32, params: &EelParams) -> f64 {
    let big_n = params.n as f64;
    n as f64 * 2.0 * PI * r * (1.0 + params.mu * params.mu).sqrt() + r * (1.0 - big_n.powi(1 - n as i32))
}

/// First point of a cylinder eel: the top of its innermost spiral.
fn cylinder_eel_start(r: f64, a: f64, n: u32, params: &EelParams) -> Vec<f64> {
    let loops = (params.n as f64).powi(n as i32 - 1);
    let rk = r / loops;
    vec![rk, 0.0, a + params.mu * rk * 2.0 * PI * loops]
}

fn append_cylinder_eel(b: &mut PieceBuilder, r: f64, a: f64, n: u32, params: &EelParams, step: f64) {
    let mu = params.mu;
    let big_n = params.n as f64;
    let speed = (1.0 + mu * mu).sqrt();
    for k in 1..=n {
        let loops = big_n.powi((n - k) as i32);
        let rk = r / loops;
        let top = 2.0 * PI * loops;
        if k % 2 == 1 {
            b.push(0.0, top, step, &|t: f64| {
                let (s, c) = t.sin_cos();
                (vec![rk * c, rk * s, a + mu * rk * (top - t)], vec![-s / speed, c / speed, -mu / speed])
            });
        } else {
            b.push(0.0, top, step, &|t: f64| {
                let (s, c) = t.sin_cos();
                (vec![rk * c, rk * s, a + mu * rk * t], vec![-s / speed, c / speed, mu / speed])
            });
        }
        if k < n {
            let z = if k % 2 == 1 { a } else { a + 2.0 * PI * mu * r };
            b.push(0.0, 1.0, step, &|t: f64| (vec![rk * (1.0 + t * (big_n - 1.0)), 0.0, z], vec![1.0, 0.0, 0.0]));
        }
    }
}

/// An eel of `n` (odd) crossings in `Cyl(r, [a, a + 2πμr])`: alternating
/// downward and upward spirals of radii `r/N^{n−k}`, each spanning the full
/// height, joined by radial segments. Starts at the top of the innermost
/// spiral and ends on the floor of the outermost one.
pub fn cylinder_eel(r: f64, a: f64, n: u32, params: &EelParams, step: f64) -> Result<SampledCurve> {
    params.validate()?;
    if !(r > 0.0 && step > 0.0 && a.is_finite()) {
        return Err(domain("cylinder eel needs r > 0, step > 0 and finite a"));
    }
    if n.is_multiple_of(2) {
        return Err(EelError::Precondition(format!("crossing count {n} must be odd")));
    }
    if 2.0 * PI * params.mu * r * n as f64 <= 1.0 {
        return Err(EelError::Precondition(format!(
            "2*pi*mu*r*n = {} must exceed 1",
            2.0 * PI * params.mu * r * n as f64
        )));
    }
    build_cylinder_eel(r, a, n, params, step, DEFAULT_SAMPLE_BUDGET)
}

fn build_cylinder_eel(r: f64, a: f64, n: u32, params: &EelParams, step: f64, budget: usize) -> Result<SampledCurve> {
    let required = cylinder_eel_samples(n, params.n, step);
    if required > budget as f64 {
        return Err(EelError::SampleBudget { required, budget });
    }
    let mut b = PieceBuilder::new(3);
    append_cylinder_eel(&mut b, r, a, n, params, step);
    b.finish(
        "cylinder_eel",
        &[
            ("r", r),
            ("a", a),
            ("n", n as f64),
            ("mu", params.mu),
            ("N", params.n as f64),
            ("step", step),
            ("length", cylinder_eel_length(r, n, params)),
        ],
    )
}

/// The gap between consecutive stage cylinders against `M rₙ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapCheck {
    /// `ℓₙ = aₙ − (aₙ₊₁ + 2πμrₙ₊₁)`.
    pub gap: f64,
    pub m_r: f64,
    /// `(ℓₙ − M rₙ) / (M rₙ)`; zero for the exact schedule.
    pub relative_slack: f64,
    /// `ℓₙ ≥ M rₙ` up to a relative rounding allowance of 10⁻¹².
    pub holds: bool,
    /// Angle between the connecting segment and the z-axis, radians.
    pub angle_to_z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StagePlan {
    pub stage: u32,
    pub cylinder: CylinderSpec,
    pub crossings: u32,
    /// `N^{n−1}`, loops of the innermost spiral.
    pub innermost_loops: f64,
    /// `r/N^{n−1}`.
    pub innermost_radius: f64,
    pub samples: f64,
    pub length: f64,
    /// Present for every stage that has a successor.
    pub gap: Option<GapCheck>,
}

/// Everything about an infinite-eel construction that can be known without
/// sampling it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EelPlan {
    pub params: EelParams,
    pub step: f64,
    pub crossings: CrossingPolicy,
    pub stages: Vec<StagePlan>,
    pub total_samples: f64,
    /// Closed-form length, connecting segments included.
    pub total_length: f64,
    /// Norm of the highest point of the first cylinder's rim.
    pub max_norm: f64,
}

/// Smallest odd `n` with `2πμrn > 1`.
pub fn unit_length_crossings(r: f64, mu: f64) -> Result<u32> {
    let per = 2.0 * PI * mu * r;
    if !(per > 0.0 && per.is_finite()) {
        return Err(domain("need r > 0 and mu > 0"));
    }
    let mut n = (1.0 / per).floor() as u64 + 1;
    if n.is_multiple_of(2) {
        n += 1;
    }
    while per * n as f64 <= 1.0 {
        n += 2;
    }
    u32::try_from(n).map_err(|_| domain("crossing count overflows"))
}

fn crossings_for(policy: CrossingPolicy, r: f64, mu: f64) -> Result<u32> {
    match policy {
        CrossingPolicy::Fixed(n) if n % 2 == 1 => Ok(n),
        CrossingPolicy::Fixed(n) => Err(domain(format!("fixed crossing count {n} must be odd"))),
        CrossingPolicy::UnitLength => unit_length_crossings(r, mu),
    }
}

/// Plans `stages` stages of the stacked construction with `aₙ = 2⁻ⁿ`,
/// `rₙ = 1/(2ⁿ⁺¹(πμ + M))`.
pub fn eel_plan(stages: u32, params: &EelParams, step: f64, policy: CrossingPolicy) -> Result<EelPlan> {
    params.validate()?;
    if stages == 0 || !(step > 0.0) {
        return Err(domain("need stages >= 1 and step > 0"));
    }
    let seg = intervals(1.0, step);
    let mut out = Vec::new();
    for s in 1..=stages {
        let cyl = params.stage_cylinder(s);
        let n = crossings_for(policy, cyl.r, params.mu)?;
        let loops = (params.n as f64).powi(n as i32 - 1);
        // Later stages share their first sample with the connecting segment.
        let mut samples = cylinder_eel_samples(n, params.n, step) - if s > 1 { 1.0 } else { 0.0 };
        let mut length = cylinder_eel_length(cyl.r, n, params);
        let gap = if s < stages {
            let next = params.stage_cylinder(s + 1);
            let n_next = crossings_for(policy, next.r, params.mu)?;
            let start = cylinder_eel_start(next.r, next.a, n_next, params);
            let gap = cyl.a - (next.a + params.cylinder_height(next.r));
            let m_r = params.m * cyl.r;
            let dx = cyl.r - start[0];
            let dz = cyl.a - start[2];
            samples += seg;
            length += (dx * dx + dz * dz).sqrt();
            Some(GapCheck {
                gap,
                m_r,
                relative_slack: (gap - m_r) / m_r,
                holds: gap - m_r >= -1e-12 * m_r,
                angle_to_z: dx.abs().atan2(dz.abs()),
            })
        } else {
            None
        };
        out.push(StagePlan {
            stage: s,
            cylinder: cyl,
            crossings: n,
            innermost_loops: loops,
            innermost_radius: cyl.r / loops,
            samples,
            length,
            gap,
        });
    }
    let first = out[0].cylinder;
    Ok(EelPlan {
        params: *params,
        step,
        crossings: policy,
        total_samples: out.iter().map(|s| s.samples).sum(),
        total_length: out.iter().map(|s| s.length).sum(),
        max_norm: (first.r * first.r + first.b * first.b).sqrt(),
        stages: out,
    })
}

/// The infinite-length eel truncated after `stages` stages, with the
/// unit-length crossing policy and the default sample budget.
pub fn infinite_eel(stages: u32, params: &EelParams, step: f64) -> Result<SampledCurve> {
    infinite_eel_with(stages, params, step, &InfiniteEelOptions::default())
}

/// The stacked construction: cylinder eels in `C₁, …, C_stages` joined by
/// segments from the floor of `Cₙ` to the top of `Cₙ₊₁`. Refuses with
/// [`EelError::SampleBudget`] when the plan needs more samples than allowed.
pub fn infinite_eel_with(
    stages: u32,
    params: &EelParams,
    step: f64,
    opts: &InfiniteEelOptions,
) -> Result<SampledCurve> {
    let plan = eel_plan(stages, params, step, opts.crossings)?;
    if plan.total_samples > opts.sample_budget as f64 {
        return Err(EelError::SampleBudget { required: plan.total_samples, budget: opts.sample_budget });
    }
    let mut b = PieceBuilder::new(3);
    for st in &plan.stages {
        let c = st.cylinder;
        if b.len() > 0 {
            let start = cylinder_eel_start(c.r, c.a, st.crossings, params);
            b.push_segment_to(&start, step);
        }
        append_cylinder_eel(&mut b, c.r, c.a, st.crossings, params, step);
    }
    b.finish(
        "infinite_eel",
        &[
            ("stages", stages as f64),
            ("mu", params.mu),
            ("N", params.n as f64),
            ("M", params.m),
            ("lambda", params.lambda),
            ("step", step),
            ("planned_length", plan.total_length),
        ],
    )
}
