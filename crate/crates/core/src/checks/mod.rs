//! Verdict engines for the curve properties: λ-curve, λ-cone, self-expanded,
//! self-contracted, uniform non-collinearity, conical split and the
//! Lyapunov monotonicity of `‖γ(t) − γ(t₁)‖ + λ ℓ(γ|[t₁, t])`.
//!
//! Every check evaluates a signed margin on each constraint (negative means
//! violated) and reports the minimum together with the indices realizing it.
//! Margins are dimensionless and measured in units of λ: for a triple the
//! λ-curve margin is `(d₁₃ + λd₂₃ − d₁₂)/d₂₃`, the distance from λ to the
//! smallest value the triple admits, just as the cone margins are `λ` minus
//! a cosine. Verdicts are therefore invariant under scaling, and the witness
//! of a failing λ-curve check is the triple that demands the largest λ.
//! Ties are broken towards the lexicographically smallest witness, so the
//! report does not depend on how the work was split across threads.
//! Verdicts hold at the sampled resolution only.

mod kernels;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::SampledCurve;
use crate::error::{domain, EelError, Result};
use crate::geometry::normalized;
use crate::par::Execution;

/// Default absolute tolerance on unit-normalized margins.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    LambdaCurve,
    LambdaCone,
    SelfContracted,
    SelfExpanded,
    Noncollinear,
    ConicalSplit,
    Lyapunov,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::LambdaCurve,
        Property::LambdaCone,
        Property::SelfContracted,
        Property::SelfExpanded,
        Property::Noncollinear,
        Property::ConicalSplit,
        Property::Lyapunov,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::LambdaCurve => "lambda_curve",
            Property::LambdaCone => "lambda_cone",
            Property::SelfContracted => "self_contracted",
            Property::SelfExpanded => "self_expanded",
            Property::Noncollinear => "noncollinear",
            Property::ConicalSplit => "conical_split",
            Property::Lyapunov => "lyapunov",
        }
    }

    /// Whether passing at λ implies passing at every larger λ.
    pub fn is_monotone_in_lambda(self) -> bool {
        matches!(self, Property::LambdaCurve | Property::LambdaCone | Property::Noncollinear | Property::ConicalSplit)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = EelError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        Property::ALL.into_iter().find(|p| p.name() == key).ok_or_else(|| domain(format!("unknown property {s:?}")))
    }
}

mod margin_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    // JSON has no infinity; an unconstrained check (too few samples) has
    // margin +∞ and is written as null.
    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Uniform result envelope for every check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub property: Property,
    pub lambda: f64,
    pub passed: bool,
    /// Minimum signed margin over all constraints; `+∞` when there were none.
    #[serde(with = "margin_serde")]
    pub worst_margin: f64,
    pub witness: Vec<usize>,
    pub samples_checked: usize,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CheckReport {
    fn new(property: Property, lambda: f64, tol: f64, worst: kernels::Worst, n: usize) -> Self {
        let witness = if worst.margin.is_finite() { worst.witness() } else { Vec::new() };
        CheckReport {
            property,
            lambda,
            passed: worst.margin >= -tol,
            worst_margin: worst.margin,
            witness,
            samples_checked: n,
            tol,
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

/// Where the forward direction at a sample comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionSource {
    /// The attached right tangent when the curve has tangents, the one-step
    /// chord otherwise (the exact right derivative of the polyline).
    #[default]
    Auto,
    /// Always the one-step chord to the next sample (right derivative of
    /// the polyline).
    Chord,
    /// The chord from the previous sample (left derivative of the
    /// polyline); the forward chord at the first sample. A sampled λ-curve
    /// check implies the λ-cone inequality exactly for these directions.
    Incoming,
    /// Normalized sum of the next `k` unit chords.
    Window(usize),
}

impl FromStr for DirectionSource {
    type Err = EelError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(DirectionSource::Auto),
            "chord" => Ok(DirectionSource::Chord),
            "incoming" => Ok(DirectionSource::Incoming),
            _ => s
                .strip_prefix("window:")
                .and_then(|k| k.parse().ok())
                .filter(|&k: &usize| k >= 1)
                .map(DirectionSource::Window)
                .ok_or_else(|| domain(format!("direction source {s:?}: use auto, chord, incoming or window:<k>"))),
        }
    }
}

/// Checker configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checker {
    pub tol: f64,
    pub execution: Execution,
    pub directions: DirectionSource,
}

impl Default for Checker {
    fn default() -> Self {
        Checker { tol: DEFAULT_TOL, execution: Execution::default(), directions: DirectionSource::Auto }
    }
}

fn check_lambda_range(lambda: f64) -> Result<()> {
    if !(-1.0..1.0).contains(&lambda) {
        return Err(domain(format!("lambda {lambda} not in [-1, 1)")));
    }
    Ok(())
}

/// Rejects coincident consecutive samples.
fn ensure_nondegenerate(c: &SampledCurve) -> Result<()> {
    for i in 0..c.len().saturating_sub(1) {
        if c.point(i) == c.point(i + 1) {
            return Err(EelError::DegenerateSample { index: i });
        }
    }
    Ok(())
}

/// Rejects curves visiting the same point twice.
fn ensure_injective(c: &SampledCurve) -> Result<()> {
    let mut order: Vec<usize> = (0..c.len()).collect();
    let cmp = |a: &usize, b: &usize| {
        c.point(*a)
            .iter()
            .zip(c.point(*b))
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    };
    order.sort_by(cmp);
    for w in order.windows(2) {
        if c.point(w[0]) == c.point(w[1]) {
            return Err(EelError::NonInjective { first: w[0].min(w[1]), second: w[0].max(w[1]) });
        }
    }
    Ok(())
}

impl Checker {
    pub fn with_tol(tol: f64) -> Self {
        Checker { tol, ..Checker::default() }
    }

    pub fn sequential(mut self) -> Self {
        self.execution = Execution::Sequential;
        self
    }

    /// Unit forward directions for samples `0..len−1`, flat.
    pub fn forward_directions(&self, c: &SampledCurve) -> Result<Vec<f64>> {
        ensure_nondegenerate(c)?;
        let n = c.len();
        let d = c.dim();
        let mut out = Vec::with_capacity(n.saturating_sub(1) * d);
        let chord = |i: usize| -> Vec<f64> {
            let v: Vec<f64> = c.point(i + 1).iter().zip(c.point(i)).map(|(a, b)| a - b).collect();
            normalized(&v).expect("consecutive samples are distinct")
        };
        for i in 0..n.saturating_sub(1) {
            match (self.directions, c.right_tangent(i)) {
                (DirectionSource::Auto, Some(t)) => out.extend_from_slice(t),
                (DirectionSource::Auto, None) | (DirectionSource::Chord, _) => out.extend(chord(i)),
                (DirectionSource::Incoming, _) => out.extend(chord(i.saturating_sub(1))),
                (DirectionSource::Window(k), _) => {
                    let mut acc = vec![0.0; d];
                    for s in i..(i + k).min(n - 1) {
                        acc.iter_mut().zip(chord(s)).for_each(|(a, b)| *a += b);
                    }
                    out.extend(normalized(&acc).unwrap_or_else(|| chord(i)));
                }
            }
        }
        Ok(out)
    }

    /// `d(i,j) ≤ d(i,k) + (λ + tol) d(j,k)` for all `i < j < k`.
    pub fn lambda_curve(&self, c: &SampledCurve, lambda: f64) -> Result<CheckReport> {
        check_lambda_range(lambda)?;
        ensure_injective(c)?;
        let w = kernels::lambda_curve(c, lambda, self.execution);
        Ok(CheckReport::new(Property::LambdaCurve, lambda, self.tol, w, c.len()))
    }

    /// `d(i,j) ≤ d(i,k)` for all `i < j < k`: the λ-curve check at λ = 0.
    pub fn self_expanded(&self, c: &SampledCurve) -> Result<CheckReport> {
        ensure_injective(c)?;
        let w = kernels::lambda_curve(c, 0.0, self.execution);
        Ok(CheckReport::new(Property::SelfExpanded, 0.0, self.tol, w, c.len()))
    }

    /// `d(j,k) ≤ d(i,k)` for all `i < j < k`.
    pub fn self_contracted(&self, c: &SampledCurve) -> Result<CheckReport> {
        ensure_injective(c)?;
        let w = kernels::self_contracted(c, self.execution);
        Ok(CheckReport::new(Property::SelfContracted, 0.0, self.tol, w, c.len()))
    }

    /// `⟨qᵢ, (p_j − p_i)/‖·‖⟩ ≤ λ` for every `i < m` and `j < i`.
    pub fn lambda_cone(&self, c: &SampledCurve, lambda: f64) -> Result<CheckReport> {
        check_lambda_range(lambda)?;
        let dirs = self.forward_directions(c)?;
        let w = kernels::lambda_cone(c, &dirs, lambda, self.execution);
        Ok(CheckReport::new(Property::LambdaCone, lambda, self.tol, w, c.len()))
    }

    /// `⟨(p_u − p_t)/‖·‖, (p_s − p_t)/‖·‖⟩ > −λ` for all `s, u < t`.
    pub fn noncollinear(&self, c: &SampledCurve, lambda: f64) -> Result<CheckReport> {
        if !lambda.is_finite() {
            return Err(domain("lambda must be finite"));
        }
        ensure_injective(c)?;
        let w = kernels::noncollinear(c, lambda, self.execution);
        let mut r = CheckReport::new(Property::Noncollinear, lambda, self.tol, w, c.len());
        if r.passed && r.worst_margin <= self.tol {
            r.warnings.push(format!("strict inequality holds only up to tolerance: worst margin {:e}", r.worst_margin));
        }
        Ok(r)
    }

    /// `max_{u ∈ K(tᵢ) ∩ 𝕊} ⟨qᵢ, u⟩ ≤ λ` at every sample `i < m`.
    pub fn conical_split(&self, c: &SampledCurve, lambda: f64) -> Result<CheckReport> {
        check_lambda_range(lambda)?;
        let dirs = self.forward_directions(c)?;
        let (w, unconverged) = kernels::conical_split(c, &dirs, lambda, self.execution);
        let mut r = CheckReport::new(Property::ConicalSplit, lambda, self.tol, w, c.len());
        if !unconverged.is_empty() {
            r.warnings.push(format!(
                "NNLS hit its iteration cap at {} samples (first {}); the best generator was used there",
                unconverged.len(),
                unconverged[0]
            ));
        }
        Ok(r)
    }

    /// `V(i) = ‖pᵢ − p_s‖ + λ ℓ(s, i)` non-decreasing for `i ≥ s`.
    pub fn lyapunov(&self, c: &SampledCurve, lambda: f64, start: usize) -> Result<CheckReport> {
        if !lambda.is_finite() {
            return Err(domain("lambda must be finite"));
        }
        if start + 1 >= c.len() {
            return Err(EelError::IndexOutOfRange { index: start, len: c.len() });
        }
        let w = kernels::lyapunov(c, lambda, start);
        Ok(CheckReport::new(Property::Lyapunov, lambda, self.tol, w, c.len()))
    }

    /// Runs `property` at `lambda`; Lyapunov is anchored at the first sample
    /// and the λ-free properties ignore `lambda`.
    pub fn check(&self, property: Property, c: &SampledCurve, lambda: f64) -> Result<CheckReport> {
        match property {
            Property::LambdaCurve => self.lambda_curve(c, lambda),
            Property::LambdaCone => self.lambda_cone(c, lambda),
            Property::SelfContracted => self.self_contracted(c),
            Property::SelfExpanded => self.self_expanded(c),
            Property::Noncollinear => self.noncollinear(c, lambda),
            Property::ConicalSplit => self.conical_split(c, lambda),
            Property::Lyapunov => self.lyapunov(c, lambda, 0),
        }
    }

    /// Smallest λ ∈ [−1, 1) at which a λ-monotone check passes, to within
    /// `bisect_tol`; `+∞` when it still fails at `1 − bisect_tol`.
    /// Meaningless for predicates that are not monotone in λ, which are
    /// rejected.
    pub fn find_min_lambda(&self, c: &SampledCurve, property: Property, bisect_tol: f64) -> Result<f64> {
        if !property.is_monotone_in_lambda() {
            return Err(domain(format!("{property} is not a λ-monotone check")));
        }
        if !(bisect_tol > 0.0 && bisect_tol < 1.0) {
            return Err(domain("bisect_tol must lie in (0, 1)"));
        }
        let passes = |l: f64| self.check(property, c, l).map(|r| r.passed);
        if passes(-1.0)? {
            return Ok(-1.0);
        }
        let mut hi = 1.0 - bisect_tol;
        if !passes(hi)? {
            return Ok(f64::INFINITY);
        }
        let mut lo = -1.0;
        while hi - lo > bisect_tol {
            let mid = 0.5 * (lo + hi);
            if passes(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

pub fn check_lambda_curve(c: &SampledCurve, lambda: f64, tol: f64) -> Result<CheckReport> {
    Checker::with_tol(tol).lambda_curve(c, lambda)
}

pub fn check_self_expanded(c: &SampledCurve, tol: f64) -> Result<CheckReport> {
    Checker::with_tol(tol).self_expanded(c)
}

pub fn check_self_contracted(c: &SampledCurve, tol: f64) -> Result<CheckReport> {
    Checker::with_tol(tol).self_contracted(c)
}

pub fn check_lambda_cone(c: &SampledCurve, lambda: f64, tol: f64) -> Result<CheckReport> {
    Checker::with_tol(tol).lambda_cone(c, lambda)
}

pub fn check_noncollinear(c: &SampledCurve, lambda: f64, tol: f64) -> Result<CheckReport> {
    Checker::with_tol(tol).noncollinear(c, lambda)
}

pub fn check_conical_split(c: &SampledCurve, lambda: f64, tol: f64) -> Result<CheckReport> {
    Checker::with_tol(tol).conical_split(c, lambda)
}

pub fn check_lyapunov(c: &SampledCurve, lambda: f64, start: usize, tol: f64) -> Result<CheckReport> {
    Checker::with_tol(tol).lyapunov(c, lambda, start)
}

pub fn find_min_lambda(c: &SampledCurve, property: Property, tol: f64, bisect_tol: f64) -> Result<f64> {
    Checker::with_tol(tol).find_min_lambda(c, property, bisect_tol)
}

#[cfg(test)]
mod tests;
