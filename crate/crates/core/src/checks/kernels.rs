//! Constraint enumeration kernels. Each returns the worst (smallest) margin
//! and its witness.

use std::cmp::Ordering;

use crate::curve::{initial_cone, SampledCurve};
use crate::geometry::{cone_projection, dist, UnitVector};
use crate::par::{map_collect, map_reduce, Execution};

/// Largest curve for which the λ-curve kernel keeps a full distance matrix
/// (128 MiB); longer curves recompute rows on the fly.
const MATRIX_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy)]
pub(super) struct Worst {
    pub margin: f64,
    w: [usize; 3],
    arity: u8,
}

impl Worst {
    pub fn none() -> Self {
        Worst { margin: f64::INFINITY, w: [usize::MAX; 3], arity: 0 }
    }

    pub fn new(margin: f64, witness: &[usize]) -> Self {
        let mut w = [usize::MAX; 3];
        w[..witness.len()].copy_from_slice(witness);
        Worst { margin, w, arity: witness.len() as u8 }
    }

    pub fn witness(&self) -> Vec<usize> {
        self.w[..self.arity as usize].to_vec()
    }

    /// The smaller margin; equal margins go to the lexicographically
    /// smaller witness. Associative and commutative.
    pub fn min(self, other: Worst) -> Worst {
        match self.margin.total_cmp(&other.margin) {
            Ordering::Less => self,
            Ordering::Greater => other,
            Ordering::Equal => {
                if other.w < self.w {
                    other
                } else {
                    self
                }
            }
        }
    }
}

fn distance_row(c: &SampledCurve, i: usize, from: usize, out: &mut Vec<f64>) {
    out.clear();
    out.extend((from..c.len()).map(|k| dist(c.point(i), c.point(k))));
}

/// Smallest `f(d(i,j), d(i,k), d(j,k))` over all triples `i < j < k`.
fn triples<F>(c: &SampledCurve, exec: Execution, f: F) -> Worst
where
    F: Fn(f64, f64, f64) -> f64 + Sync + Send,
{
    let n = c.len();
    if n < 3 {
        return Worst::none();
    }
    // For fixed (i, j) rows i and j are scanned contiguously over k.
    let scan = |ri: &[f64], rj: &[f64], i: usize, j: usize, dij: f64| {
        let mut m = f64::INFINITY;
        let mut kk = j + 1;
        for (off, (&a, &b)) in ri.iter().zip(rj).enumerate() {
            let v = f(dij, a, b);
            if v < m {
                m = v;
                kk = j + 1 + off;
            }
        }
        Worst::new(m, &[i, j, kk])
    };
    if n <= MATRIX_LIMIT {
        let rows = map_collect(exec, 0..n, |i| {
            let mut r = Vec::new();
            distance_row(c, i, 0, &mut r);
            r
        });
        map_reduce(
            exec,
            0..n - 2,
            Worst::none(),
            |i| {
                let ri = &rows[i];
                let mut best = Worst::none();
                for j in i + 1..n - 1 {
                    best = best.min(scan(&ri[j + 1..], &rows[j][j + 1..], i, j, ri[j]));
                }
                best
            },
            Worst::min,
        )
    } else {
        map_reduce(
            exec,
            0..n - 2,
            Worst::none(),
            |i| {
                let mut ri = Vec::new();
                let mut rj = Vec::new();
                distance_row(c, i, 0, &mut ri);
                let mut best = Worst::none();
                for j in i + 1..n - 1 {
                    distance_row(c, j, j + 1, &mut rj);
                    best = best.min(scan(&ri[j + 1..], &rj, i, j, ri[j]));
                }
                best
            },
            Worst::min,
        )
    }
}

/// Margin `(d(i,k) + λ d(j,k) − d(i,j)) / d(j,k)`: how far λ lies above the
/// smallest value the triple admits.
pub(super) fn lambda_curve(c: &SampledCurve, lambda: f64, exec: Execution) -> Worst {
    triples(c, exec, |dij, dik, djk| (dik + lambda * djk - dij) / djk)
}

/// Margin `(d(i,k) − d(j,k)) / d(i,j)`, the self-expanded margin of the
/// reversed triple.
pub(super) fn self_contracted(c: &SampledCurve, exec: Execution) -> Worst {
    triples(c, exec, |dij, dik, djk| (dik - djk) / dij)
}

/// Largest `⟨q, (p_j − p_i)/‖·‖⟩` over `j < i`, with the first maximizer.
fn cone_row_fixed<const D: usize>(coords: &[f64], i: usize, q: &[f64]) -> (f64, usize) {
    let p: [f64; D] = coords[i * D..(i + 1) * D].try_into().unwrap();
    let q: [f64; D] = q.try_into().unwrap();
    let mut best = f64::NEG_INFINITY;
    let mut bj = 0;
    for (j, pj) in coords[..i * D].chunks_exact(D).enumerate() {
        let mut a = 0.0;
        let mut n2 = 0.0;
        for k in 0..D {
            let v = pj[k] - p[k];
            a += q[k] * v;
            n2 += v * v;
        }
        if n2 == 0.0 {
            continue;
        }
        let dot = a / n2.sqrt();
        if dot > best {
            best = dot;
            bj = j;
        }
    }
    (best, bj)
}

fn cone_row_dyn(coords: &[f64], d: usize, i: usize, q: &[f64]) -> (f64, usize) {
    let p = &coords[i * d..(i + 1) * d];
    let mut best = f64::NEG_INFINITY;
    let mut bj = 0;
    for (j, pj) in coords[..i * d].chunks_exact(d).enumerate() {
        let mut a = 0.0;
        let mut n2 = 0.0;
        for k in 0..d {
            let v = pj[k] - p[k];
            a += q[k] * v;
            n2 += v * v;
        }
        if n2 == 0.0 {
            continue;
        }
        let dot = a / n2.sqrt();
        if dot > best {
            best = dot;
            bj = j;
        }
    }
    (best, bj)
}

pub(super) fn lambda_cone(c: &SampledCurve, dirs: &[f64], lambda: f64, exec: Execution) -> Worst {
    let n = c.len();
    let d = c.dim();
    if n < 2 {
        return Worst::none();
    }
    let coords = c.coords();
    map_reduce(
        exec,
        1..n - 1,
        Worst::none(),
        |i| {
            let q = &dirs[i * d..(i + 1) * d];
            let (dot, j) = match d {
                2 => cone_row_fixed::<2>(coords, i, q),
                3 => cone_row_fixed::<3>(coords, i, q),
                _ => cone_row_dyn(coords, d, i, q),
            };
            if dot == f64::NEG_INFINITY {
                Worst::none()
            } else {
                Worst::new(lambda - dot, &[i, j])
            }
        },
        Worst::min,
    )
}

pub(super) fn noncollinear(c: &SampledCurve, lambda: f64, exec: Execution) -> Worst {
    let n = c.len();
    let d = c.dim();
    if n < 2 {
        return Worst::none();
    }
    map_reduce(
        exec,
        1..n,
        Worst::none(),
        |t| {
            let pt = c.point(t);
            let mut units = Vec::with_capacity(t * d);
            for s in 0..t {
                let v: Vec<f64> = c.point(s).iter().zip(pt).map(|(a, b)| a - b).collect();
                let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                units.extend(v.iter().map(|x| x / nv));
            }
            // s = u contributes ⟨x, x⟩ = 1.
            let mut best = Worst::new(lambda + 1.0, &[0, 0, t]);
            for s in 0..t {
                let us = &units[s * d..(s + 1) * d];
                for u in s + 1..t {
                    let uu = &units[u * d..(u + 1) * d];
                    let dot: f64 = us.iter().zip(uu).map(|(a, b)| a * b).sum();
                    best = best.min(Worst::new(lambda + dot, &[s, u, t]));
                }
            }
            best
        },
        Worst::min,
    )
}

pub(super) fn conical_split(c: &SampledCurve, dirs: &[f64], lambda: f64, exec: Execution) -> (Worst, Vec<usize>) {
    let n = c.len();
    let d = c.dim();
    if n < 2 {
        return (Worst::none(), Vec::new());
    }
    let (w, mut bad) = map_reduce(
        exec,
        1..n - 1,
        (Worst::none(), Vec::new()),
        |i| {
            let k = initial_cone(c, i).expect("index in range");
            if k.is_trivial() {
                return (Worst::none(), Vec::new());
            }
            let q = UnitVector::from_raw(dirs[i * d..(i + 1) * d].to_vec());
            let p = cone_projection(&k, &q).expect("dimensions agree");
            let bad = if p.converged { Vec::new() } else { vec![i] };
            (Worst::new(lambda - p.cos, &[i]), bad)
        },
        |(wa, mut ba), (wb, bb)| {
            ba.extend(bb);
            (wa.min(wb), ba)
        },
    );
    bad.sort_unstable();
    (w, bad)
}

pub(super) fn lyapunov(c: &SampledCurve, lambda: f64, start: usize) -> Worst {
    let n = c.len();
    let ps = c.point(start);
    let mut len = 0.0;
    let mut top = 0.0; // V(start)
    let mut jtop = start;
    let mut best = Worst::none();
    for k in start + 1..n {
        len += dist(c.point(k - 1), c.point(k));
        let v = dist(c.point(k), ps) + lambda * len;
        best = best.min(Worst::new(v - top, &[jtop, k]));
        if v > top {
            top = v;
            jtop = k;
        }
    }
    best
}
