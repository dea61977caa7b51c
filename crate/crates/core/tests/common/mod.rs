//! Test corpus and brute-force reference implementations shared by the
//! integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use eelkit::constructions::{derive_mu, gradient_descent_trajectory, helix};
use eelkit::curve::{reverse, CurveMeta};
use eelkit::geometry::Point;
use eelkit::SampledCurve;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Segment,
    Helix,
    GradientDescent,
    GradientReversed,
    Perturbed,
    LogSpiral,
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub name: String,
    pub family: Family,
    pub curve: SampledCurve,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_unit(r: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| r.sample(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Samples an analytic curve `t ↦ (point, unit tangent)` at `params`.
pub fn analytic(params: Vec<f64>, f: impl Fn(f64) -> (Vec<f64>, Vec<f64>), kind: &str) -> SampledCurve {
    let d = f(params[0]).0.len();
    let mut coords = Vec::with_capacity(params.len() * d);
    let mut tangents = Vec::with_capacity(params.len() * d);
    for &t in &params {
        let (p, q) = f(t);
        coords.extend(p);
        tangents.extend(q);
    }
    SampledCurve::from_flat(params, coords, d)
        .unwrap()
        .with_tangents(tangents.clone(), tangents)
        .unwrap()
        .with_meta(CurveMeta { kind: kind.into(), ..Default::default() })
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

pub fn segment(r: &mut ChaCha8Rng, d: usize, n: usize) -> SampledCurve {
    let dir = gaussian_unit(r, d);
    let origin: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
    let mut params = vec![0.0];
    for _ in 1..n {
        let last = *params.last().unwrap();
        params.push(last + r.random_range(0.05..0.3));
    }
    analytic(params, move |t| (origin.iter().zip(&dir).map(|(o, u)| o + t * u).collect(), dir.clone()), "segment")
}

pub fn random_spd(r: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(d, d, |_, _| r.sample::<f64, _>(StandardNormal));
    &a * a.transpose() + DMatrix::identity(d, d) * 0.2
}

pub fn gd(r: &mut ChaCha8Rng, d: usize, iters: usize, step_factor: f64) -> SampledCurve {
    let q = random_spd(r, d);
    let lmax = q.symmetric_eigenvalues().max();
    let x0 = Point::new(gaussian_unit(r, d)).unwrap();
    gradient_descent_trajectory(&q, &x0, step_factor / lmax, iters).unwrap()
}

/// `t ↦ t v + ε sin(ωt) a` with a unit `a ⊥ v`.
pub fn perturbed(r: &mut ChaCha8Rng, d: usize, n: usize) -> SampledCurve {
    let v = gaussian_unit(r, d);
    let w = gaussian_unit(r, d);
    let dot: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
    let a = unit(w.iter().zip(&v).map(|(x, y)| x - dot * y).collect());
    let eps = r.random_range(0.01..0.15);
    let omega = r.random_range(0.5..3.0);
    let params = (0..n).map(|k| 3.0 * k as f64 / (n - 1) as f64).collect();
    analytic(
        params,
        move |t| {
            let p = v.iter().zip(&a).map(|(x, y)| t * x + eps * (omega * t).sin() * y).collect();
            let q = unit(v.iter().zip(&a).map(|(x, y)| x + eps * omega * (omega * t).cos() * y).collect());
            (p, q)
        },
        "perturbed",
    )
}

/// A helix with random radius and pitch in `[mu*, 1.2]`, `n` samples.
pub fn helix_like(r: &mut ChaCha8Rng, n: usize) -> SampledCurve {
    let radius = r.random_range(0.3..2.0);
    let mu = r.random_range(derive_mu()..1.2);
    let span = r.random_range(PI..5.0 * PI);
    helix(radius, mu, 0.0, span, span / (n - 1) as f64).unwrap()
}

/// `θ ↦ e^{bθ}(cos θ, sin θ)`.
pub fn log_spiral(b: f64, theta_max: f64, n: usize) -> SampledCurve {
    let params = (0..n).map(|k| theta_max * k as f64 / (n - 1) as f64).collect();
    analytic(
        params,
        move |t| {
            let (s, c) = t.sin_cos();
            let e = (b * t).exp();
            (vec![e * c, e * s], unit(vec![b * c - s, b * s + c]))
        },
        "log_spiral",
    )
}

/// 105 deterministic curves across six families.
pub fn corpus() -> Vec<Sample> {
    let mut r = rng(20_240_601);
    let mut out = Vec::new();
    let mut push = |name: String, family, curve| out.push(Sample { name, family, curve });
    for k in 0..15 {
        let d = 2 + k % 3;
        let n = r.random_range(8..60);
        push(format!("segment_{k}"), Family::Segment, segment(&mut r, d, n));
    }
    let mu0 = derive_mu();
    for k in 0..20 {
        let radius = r.random_range(0.5..2.0);
        let mu = if k < 5 { mu0 } else { r.random_range(mu0..1.2) };
        let turns = r.random_range(1.0..3.0);
        let n = if k % 2 == 0 { 45 } else { 140 };
        let span = 2.0 * PI * turns;
        push(format!("helix_{k}"), Family::Helix, helix(radius, mu, 0.0, span, span / (n - 1) as f64).unwrap());
    }
    for k in 0..20 {
        let d = 2 + k % 2;
        let iters = r.random_range(15..48);
        let factor = r.random_range(0.1..0.4);
        let c = gd(&mut r, d, iters, factor);
        push(format!("gd_{k}"), Family::GradientDescent, c.clone());
        push(format!("gd_rev_{k}"), Family::GradientReversed, reverse(&c));
    }
    for k in 0..15 {
        let d = 2 + k % 2;
        let n = if k % 3 == 0 { 120 } else { 40 };
        push(format!("perturbed_{k}"), Family::Perturbed, perturbed(&mut r, d, n));
    }
    for k in 0..15 {
        let b = 0.2 + 0.06 * k as f64;
        let n = if k % 2 == 0 { 48 } else { 150 };
        push(format!("log_spiral_{k}"), Family::LogSpiral, log_spiral(b, 3.0 * PI, n));
    }
    out
}

fn d(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn ip(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn pts(c: &SampledCurve) -> Vec<Vec<f64>> {
    c.points().map(|p| p.to_vec()).collect()
}

/// The right tangent when present, otherwise the chord to the next sample.
pub fn forward_dirs(c: &SampledCurve) -> Vec<Vec<f64>> {
    (0..c.len() - 1)
        .map(|i| match c.right_tangent(i) {
            Some(t) => t.to_vec(),
            None => unit(c.point(i + 1).iter().zip(c.point(i)).map(|(a, b)| a - b).collect()),
        })
        .collect()
}

/// `‖γ(t₂) − γ(t₁)‖ ≤ ‖γ(t₃) − γ(t₁)‖ + λ‖γ(t₃) − γ(t₂)‖` for `t₁ < t₂ < t₃`,
/// with the tolerance added to λ.
pub fn brute_lambda_curve(c: &SampledCurve, lambda: f64, tol: f64) -> bool {
    let p = pts(c);
    let n = p.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if d(&p[j], &p[i]) > d(&p[k], &p[i]) + (lambda + tol) * d(&p[k], &p[j]) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn brute_self_expanded(c: &SampledCurve, tol: f64) -> bool {
    brute_lambda_curve(c, 0.0, tol)
}

/// `‖γ(t₃) − γ(t₂)‖ ≤ ‖γ(t₃) − γ(t₁)‖` for `t₁ < t₂ < t₃`.
pub fn brute_self_contracted(c: &SampledCurve, tol: f64) -> bool {
    let p = pts(c);
    let n = p.len();
    (0..n).all(|i| (i + 1..n).all(|j| (j + 1..n).all(|k| d(&p[k], &p[j]) <= d(&p[k], &p[i]) + tol * d(&p[j], &p[i]))))
}

/// Every earlier sample lies outside the open cone of half-angle arccos λ
/// around the forward direction.
pub fn brute_lambda_cone(c: &SampledCurve, lambda: f64, tol: f64) -> bool {
    let p = pts(c);
    let q = forward_dirs(c);
    (1..p.len() - 1).all(|i| {
        (0..i).all(|j| {
            let v: Vec<f64> = p[j].iter().zip(&p[i]).map(|(a, b)| a - b).collect();
            ip(&q[i], &v) <= (lambda + tol) * d(&p[j], &p[i])
        })
    })
}

/// Directions from `γ(t)` to any two earlier samples are never closer to
/// opposite than `−λ`.
pub fn brute_noncollinear(c: &SampledCurve, lambda: f64, tol: f64) -> bool {
    let p = pts(c);
    (1..p.len()).all(|t| {
        (0..t).all(|s| {
            (0..t).all(|u| {
                let a: Vec<f64> = p[s].iter().zip(&p[t]).map(|(x, y)| x - y).collect();
                let b: Vec<f64> = p[u].iter().zip(&p[t]).map(|(x, y)| x - y).collect();
                ip(&a, &b) / (d(&p[s], &p[t]) * d(&p[u], &p[t])) >= -lambda - tol
            })
        })
    })
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        out(cur);
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// `max ⟨q, u⟩` over unit `u` in the cone generated by `gens`: the norm of
/// the projection of `q` when it is nonzero, the best generator otherwise.
/// The projection is found by trying every face spanned by at most `d`
/// generators.
pub fn brute_cone_cos(gens: &[Vec<f64>], q: &[f64]) -> f64 {
    let dim = q.len();
    let mut uniq: Vec<Vec<f64>> = Vec::new();
    for g in gens {
        if !uniq.iter().any(|h| d(h, g) < 1e-12) {
            uniq.push(g.clone());
        }
    }
    let best_gen = uniq.iter().map(|g| ip(g, q)).fold(f64::NEG_INFINITY, f64::max);
    let qv = DVector::from_column_slice(q);
    let mut best_res = qv.norm();
    let mut best_proj = 0.0;
    for k in 1..=dim.min(uniq.len()) {
        subsets(uniq.len(), k, 0, &mut Vec::new(), &mut |idx| {
            let a = DMatrix::from_fn(dim, idx.len(), |r, c| uniq[idx[c]][r]);
            let svd = a.clone().svd(true, true);
            let Ok(x) = svd.solve(&qv, 1e-12) else { return };
            if x.iter().any(|&v| v < -1e-12) {
                return;
            }
            let proj = &a * x.map(|v| v.max(0.0));
            let res = (&qv - &proj).norm();
            if res < best_res - 1e-14 {
                best_res = res;
                best_proj = proj.norm();
            }
        });
    }
    if best_proj > 1e-12 {
        best_proj.max(best_gen)
    } else {
        best_gen
    }
}

/// At every sample the forward direction makes an angle of at least
/// arccos λ with the cone spanned by the directions to earlier samples.
pub fn brute_conical_split(c: &SampledCurve, lambda: f64, tol: f64) -> bool {
    let p = pts(c);
    let q = forward_dirs(c);
    (1..p.len() - 1).all(|i| {
        let gens: Vec<Vec<f64>> = (0..i).map(|j| unit(p[j].iter().zip(&p[i]).map(|(a, b)| a - b).collect())).collect();
        brute_cone_cos(&gens, &q[i]) <= lambda + tol
    })
}

/// `‖γ(t) − γ(t_s)‖ + λ ℓ(t_s, t)` never decreases after `t_s`.
pub fn brute_lyapunov(c: &SampledCurve, lambda: f64, start: usize, tol: f64) -> bool {
    let p = pts(c);
    let mut v = vec![0.0];
    let mut len = 0.0;
    for k in start + 1..p.len() {
        len += d(&p[k], &p[k - 1]);
        v.push(d(&p[k], &p[start]) + lambda * len);
    }
    (0..v.len()).all(|i| (i + 1..v.len()).all(|k| v[k] >= v[i] - tol))
}
