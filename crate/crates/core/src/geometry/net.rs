//! η-nets on the unit sphere: finite direction sets such that every unit
//! vector has inner product greater than η with one of them.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{dot, normalized, UnitVector};
use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereNet {
    dim: usize,
    eta: f64,
    directions: Vec<UnitVector>,
    /// A proven lower bound on `min_v max_i ⟨v, ξᵢ⟩`; always above `eta`.
    covering_cos: f64,
}

impl SphereNet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn directions(&self) -> &[UnitVector] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn covering_cos(&self) -> f64 {
        self.covering_cos
    }

    /// `max_i ⟨v, ξᵢ⟩` for a unit vector `v`.
    pub fn best_cos(&self, v: &[f64]) -> f64 {
        self.directions.iter().map(|x| dot(x.coords(), v)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn covers(&self, v: &[f64]) -> bool {
        self.best_cos(v) > self.eta
    }
}

/// Builds an η-net in ℝᵈ.
///
/// The plane uses `⌊π / arccos η⌋ + 1` equally spaced directions. Space uses
/// the vertices of the icosahedron subdivided at the smallest frequency whose
/// largest triangle circumradius is below `arccos η`. Higher dimensions use
/// a grid on the surface of the cube `[−1, 1]ᵈ`.
pub fn build_sphere_net(d: usize, eta: f64) -> Result<SphereNet> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(domain(format!("eta {eta} not in (0, 1)")));
    }
    if d == 0 {
        return Err(domain("dimension must be positive"));
    }
    let (directions, covering_cos) = match d {
        1 => (vec![vec![1.0], vec![-1.0]], 1.0),
        2 => circle_net(eta),
        3 => icosphere_net(eta),
        _ => cube_net(d, eta),
    };
    debug_assert!(covering_cos > eta);
    Ok(SphereNet { dim: d, eta, directions: directions.into_iter().map(UnitVector::from_raw).collect(), covering_cos })
}

fn circle_net(eta: f64) -> (Vec<Vec<f64>>, f64) {
    let k = (PI / eta.acos()).floor() as usize + 1;
    let k = k.max(2);
    let dirs = (0..k)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / k as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    (dirs, (PI / k as f64).cos())
}

fn icosahedron() -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v = Vec::new();
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            v.push([0.0, s1, s2 * phi]);
            v.push([s1, s2 * phi, 0.0]);
            v.push([s2 * phi, 0.0, s1]);
        }
    }
    let edge2 = 4.0;
    let d2 = |a: &[f64; 3], b: &[f64; 3]| (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>();
    let adjacent = |a: usize, b: usize| (d2(&v[a], &v[b]) - edge2).abs() < 1e-9;
    let mut faces = Vec::new();
    for a in 0..12 {
        for b in a + 1..12 {
            for c in b + 1..12 {
                if adjacent(a, b) && adjacent(b, c) && adjacent(a, c) {
                    faces.push([a, b, c]);
                }
            }
        }
    }
    let v = v
        .into_iter()
        .map(|p| {
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            [p[0] / n, p[1] / n, p[2] / n]
        })
        .collect();
    (v, faces)
}

fn unit3(p: [f64; 3]) -> [f64; 3] {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / n, p[1] / n, p[2] / n]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Subdivided icosahedron at frequency `f`: deduplicated vertices and the
/// cosine of the largest triangle circumradius.
fn icosphere(f: usize) -> (Vec<Vec<f64>>, f64) {
    let (v, faces) = icosahedron();
    let mut keys = BTreeSet::new();
    let mut dirs = Vec::new();
    let mut worst = 1.0f64;
    for face in faces {
        let [a, b, c] = face.map(|i| v[i]);
        let at = |i: usize, j: usize| {
            let (s, t) = (i as f64 / f as f64, j as f64 / f as f64);
            unit3([
                a[0] + s * (b[0] - a[0]) + t * (c[0] - a[0]),
                a[1] + s * (b[1] - a[1]) + t * (c[1] - a[1]),
                a[2] + s * (b[2] - a[2]) + t * (c[2] - a[2]),
            ])
        };
        for i in 0..=f {
            for j in 0..=f - i {
                let p = at(i, j);
                let key = p.map(|x| (x * 1e9).round() as i64);
                if keys.insert(key) {
                    dirs.push(p.to_vec());
                }
                let mut tris = Vec::new();
                if i + j < f {
                    tris.push([p, at(i + 1, j), at(i, j + 1)]);
                }
                if i + j + 1 < f {
                    tris.push([at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)]);
                }
                for [p0, p1, p2] in tris {
                    let e1 = [p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]];
                    let e2 = [p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]];
                    let n = unit3(cross(e1, e2));
                    let c = (n[0] * p0[0] + n[1] * p0[1] + n[2] * p0[2]).abs();
                    worst = worst.min(c);
                }
            }
        }
    }
    (dirs, worst)
}

fn icosphere_net(eta: f64) -> (Vec<Vec<f64>>, f64) {
    let mut f = 1;
    loop {
        let (dirs, cos) = icosphere(f);
        if cos > eta {
            return (dirs, cos);
        }
        f += 1;
    }
}

fn cube_net(d: usize, eta: f64) -> (Vec<Vec<f64>>, f64) {
    // Any unit v, pushed out to the cube surface, is within (s/2)√(d−1) of a
    // grid point on the same face, so the angle to it is at most
    // arcsin((s/2)√(d−1)).
    let sin_needed = (1.0 - eta * eta).sqrt();
    let spread = ((d - 1) as f64).sqrt();
    let mut intervals = 1usize;
    while (1.0 / intervals as f64) * spread >= sin_needed {
        intervals += 1;
    }
    let s = 2.0 / intervals as f64;
    let half = s / 2.0 * spread;
    let covering_cos = (1.0 - half * half).sqrt();
    let mut keys = BTreeSet::new();
    let mut dirs = Vec::new();
    let per_face = (intervals + 1).pow((d - 1) as u32);
    for axis in 0..d {
        for sign in [-1.0, 1.0] {
            for mut code in 0..per_face {
                let mut p = vec![0.0; d];
                for (k, x) in p.iter_mut().enumerate() {
                    if k == axis {
                        *x = sign;
                    } else {
                        *x = -1.0 + s * (code % (intervals + 1)) as f64;
                        code /= intervals + 1;
                    }
                }
                let u = normalized(&p).expect("cube points are nonzero");
                let key: Vec<i64> = u.iter().map(|x| (x * 1e9).round() as i64).collect();
                if keys.insert(key) {
                    dirs.push(u);
                }
            }
        }
    }
    (dirs, covering_cos)
}

/// Outcome of probing a net with random directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageCheck {
    pub samples: usize,
    pub seed: u64,
    /// Smallest `max_i ⟨v, ξᵢ⟩` seen over the probes.
    pub worst_cos: f64,
    pub covered: bool,
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(u) = normalized(&v) {
            return u;
        }
    }
}

/// Draws `samples` uniform unit vectors from a ChaCha8 stream seeded with
/// `seed` and checks that each one is covered.
pub fn validate_coverage(net: &SphereNet, samples: usize, seed: u64) -> CoverageCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let worst_cos = (0..samples).map(|_| net.best_cos(&random_unit(&mut rng, net.dim))).fold(1.0, f64::min);
    CoverageCheck { samples, seed, worst_cos, covered: worst_cos > net.eta }
}
