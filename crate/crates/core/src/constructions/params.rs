//! The constant bundle (μ, N, M, λ) behind the helicoidal constructions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// `1/√5`, the cone parameter of the construction.
pub fn inv_sqrt5() -> f64 {
    1.0 / 5f64.sqrt()
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `sup_{t<0} −sin(t)/t` and its maximizer, by a grid scan of (−20, 0)
/// refined with golden-section search. The maximizer is near −4.4934.
pub fn sup_neg_sinc() -> (f64, f64) {
    let f = |t: f64| -t.sin() / t;
    let steps = 200_000;
    let h = 20.0 / steps as f64;
    let (mut bt, mut bv) = (-20.0, f(-20.0));
    for i in 1..steps {
        let t = -20.0 + i as f64 * h;
        let v = f(t);
        if v > bv {
            bt = t;
            bv = v;
        }
    }
    let (t, v) = golden_max(f, bt - h, (bt + h).min(-1e-9), 200);
    if v > bv {
        (v, t)
    } else {
        (bv, bt)
    }
}

/// Smallest μ on the 10⁻⁴ grid with `μ² ≥ sup_{t<0}(−sin t / t) + 10⁻⁶`.
pub fn derive_mu() -> f64 {
    let (s, _) = sup_neg_sinc();
    let target = s + 1e-6;
    let mut k = (target.sqrt() * 1e4).ceil() as i64;
    while ((k as f64) / 1e4).powi(2) < target {
        k += 1;
    }
    while k > 1 && (((k - 1) as f64) / 1e4).powi(2) >= target {
        k -= 1;
    }
    k as f64 / 1e4
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu < 0.5) {
        return Err(domain(format!("mu {mu} not in (0, 1/2)")));
    }
    Ok(())
}

/// The small-cylinder ratio `√(1 + μ²(N−1)²) / ((N−1)√(1+μ²))`.
pub fn small_cylinder_ratio(mu: f64, n: u32) -> f64 {
    let x = (n - 1) as f64;
    (1.0 + mu * mu * x * x).sqrt() / (x * (1.0 + mu * mu).sqrt())
}

/// Smallest integer `N ≥ 2` with `small_cylinder_ratio(μ, N) < 1/√5`.
pub fn derive_n(mu: f64) -> Result<u32> {
    check_mu(mu)?;
    let mut n = 2u32;
    while small_cylinder_ratio(mu, n) >= inv_sqrt5() {
        n += 1;
    }
    Ok(n)
}

/// `M = ⌈1 / (√((1+μ²)/5) − μ)⌉ + 1`, which makes
/// `√(1+μ²) > (μ + 1/M)√5` with room to spare.
pub fn derive_m(mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let gap = ((1.0 + mu * mu) / 5.0).sqrt() - mu;
    if gap <= 0.0 {
        return Err(domain(format!("no M exists for mu {mu}")));
    }
    Ok((1.0 / gap).ceil() + 1.0)
}

/// Constants of the construction: μ (helix pitch), N (radius ratio of
/// nested spirals), M (height-to-radius separation of stacked cylinders),
/// λ and α = arccos λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EelParams {
    pub mu: f64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: f64,
    pub lambda: f64,
    pub alpha: f64,
}

impl EelParams {
    /// μ from [`derive_mu`], N and M derived from it, λ = 1/√5.
    pub fn derived() -> Self {
        Self::from_mu(derive_mu()).expect("derived mu lies in (0, 1/2)")
    }

    /// Derives N and M from μ without checking μ against the helix
    /// condition, so that bad values of μ can be certified and rejected.
    pub fn from_mu(mu: f64) -> Result<Self> {
        let n = derive_n(mu)?;
        let m = derive_m(mu)?;
        let lambda = inv_sqrt5();
        Ok(EelParams { mu, n, m, lambda, alpha: lambda.acos() })
    }

    /// Explicit constants, validated.
    pub fn new(mu: f64, n: u32, m: f64, lambda: f64) -> Result<Self> {
        let p = EelParams { mu, n, m, lambda, alpha: lambda.acos() };
        p.validate()?;
        Ok(p)
    }

    /// Range checks only: μ ∈ (0, 1/2), N ≥ 2, M > 0, λ ∈ [−1, 1).
    pub fn check_ranges(&self) -> Result<()> {
        check_mu(self.mu)?;
        if !(-1.0..1.0).contains(&self.lambda) {
            return Err(domain("lambda must lie in [-1, 1)"));
        }
        if self.n < 2 || !(self.m > 0.0) {
            return Err(domain(format!("need N >= 2 and M > 0, got N = {}, M = {}", self.n, self.m)));
        }
        Ok(())
    }

    /// Checks every inequality the constants must satisfy.
    pub fn validate(&self) -> Result<()> {
        self.check_ranges()?;
        let (s, _) = sup_neg_sinc();
        if self.mu * self.mu < s {
            return Err(domain(format!(
                "mu^2 = {} is below sup(-sin t/t) = {s}; the helix is not self-expanded",
                self.mu * self.mu
            )));
        }
        if !(-1.0..1.0).contains(&self.lambda) {
            return Err(domain("lambda must lie in [-1, 1)"));
        }
        if self.n < 2 || small_cylinder_ratio(self.mu, self.n) >= self.lambda {
            return Err(domain(format!("N = {} fails the small-cylinder inequality", self.n)));
        }
        if !(self.m > 1.0) || self.mu + 1.0 / self.m >= self.lambda * (1.0 + self.mu * self.mu).sqrt() {
            return Err(domain(format!("M = {} fails the big-cylinder inequality", self.m)));
        }
        Ok(())
    }

    /// Height of a construction cylinder of radius `r`: `2πμr`.
    pub fn cylinder_height(&self, r: f64) -> f64 {
        2.0 * PI * self.mu * r
    }

    /// The n-th cylinder of the unit-ball schedule: `aₙ = 2⁻ⁿ`,
    /// `rₙ = 1/(2ⁿ⁺¹(πμ + M))`.
    pub fn stage_cylinder(&self, stage: u32) -> CylinderSpec {
        let a = 0.5f64.powi(stage as i32);
        let r = 1.0 / (2f64.powi(stage as i32 + 1) * (PI * self.mu + self.m));
        CylinderSpec { r, a, b: a + self.cylinder_height(r) }
    }
}

/// `Cyl(r, [a, b])`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderSpec {
    pub r: f64,
    pub a: f64,
    pub b: f64,
}

impl CylinderSpec {
    /// The construction cylinder `Cyl(r, [a, a + 2πμr])`.
    pub fn construction(r: f64, a: f64, mu: f64) -> Self {
        CylinderSpec { r, a, b: a + 2.0 * PI * mu * r }
    }

    /// Whether `p` lies in the solid cylinder up to `tol`.
    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        p[0] * p[0] + p[1] * p[1] <= self.r * self.r + tol && p[2] >= self.a - tol && p[2] <= self.b + tol
    }
}
