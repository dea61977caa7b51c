//! Property tests for the geometric invariants of the checkers, the curve
//! primitives and the width profile.

mod common;

use std::f64::consts::PI;

use common::{gaussian_unit, gd, helix_like, log_spiral, perturbed, rng};
use eelkit::constructions::{derive_mu, helix};
use eelkit::curve::{
    backward_secant, forward_secant, initial_cone, polyline_length, read_csv, read_tangents_csv, reverse, total_length,
    write_csv, write_tangents_csv,
};
use eelkit::geometry::{
    aperture_set, build_sphere_net, cone_projection_cos, dot, pointedness_test, polar_contains, GeneratedCone,
    UnitVector,
};
use eelkit::rectifiability::{width_profile, RepulsionConstants};
use eelkit::{Checker, Execution, Property, SampledCurve};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const LAMBDAS: [f64; 4] = [-0.5, 0.0, 0.3, 0.9];

/// A small curve from one of four families, chosen by `kind`.
fn small_curve(kind: u8, seed: u64) -> SampledCurve {
    let mut r = rng(seed);
    match kind % 4 {
        0 => gd(&mut r, 2 + (seed % 2) as usize, 14, 0.3),
        1 => perturbed(&mut r, 3, 18),
        2 => log_spiral(r.random_range(0.2..1.0), 2.5 * PI, 20),
        _ => helix_like(&mut r, 22),
    }
}

fn random_rotation(r: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(d, d, |_, _| r.random_range(-1.0..1.0));
    a.qr().q()
}

fn apply(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum()).collect()
}

fn rigid_motion(c: &SampledCurve, seed: u64) -> SampledCurve {
    let mut r = rng(seed ^ 0x5eed);
    let q = random_rotation(&mut r, c.dim());
    let shift: Vec<f64> = (0..c.dim()).map(|_| r.random_range(-3.0..3.0)).collect();
    c.map_points(|p| apply(&q, p).into_iter().zip(&shift).map(|(x, s)| x + s).collect(), |v| apply(&q, v)).unwrap()
}

fn scaled(c: &SampledCurve, s: f64) -> SampledCurve {
    c.map_points(|p| p.iter().map(|x| s * x).collect(), |v| v.to_vec()).unwrap()
}

/// Verdicts are only compared away from the pass threshold.
fn same_verdict(a: &eelkit::CheckReport, b: &eelkit::CheckReport, tol: f64) -> bool {
    a.passed == b.passed || (a.worst_margin + tol).abs() < 1e-8
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn margins_are_invariant_under_rigid_motions(kind in 0u8..4, seed in any::<u64>()) {
        let c = small_curve(kind, seed);
        let moved = rigid_motion(&c, seed);
        let ck = Checker::default();
        for p in Property::ALL {
            for lambda in LAMBDAS {
                let a = ck.check(p, &c, lambda).unwrap();
                let b = ck.check(p, &moved, lambda).unwrap();
                let scale = 1.0 + a.worst_margin.abs();
                prop_assert!((a.worst_margin - b.worst_margin).abs() <= 1e-9 * scale,
                    "{} at {lambda}: {} vs {}", p.name(), a.worst_margin, b.worst_margin);
                prop_assert!(same_verdict(&a, &b, ck.tol));
            }
        }
    }

    #[test]
    fn normalized_margins_are_invariant_under_scaling(kind in 0u8..4, seed in any::<u64>(), s in 0.01f64..100.0) {
        let c = small_curve(kind, seed);
        let big = scaled(&c, s);
        let ck = Checker::default();
        for lambda in LAMBDAS {
            for p in [Property::LambdaCone, Property::Noncollinear, Property::ConicalSplit, Property::LambdaCurve] {
                let a = ck.check(p, &c, lambda).unwrap();
                let b = ck.check(p, &big, lambda).unwrap();
                prop_assert!((a.worst_margin - b.worst_margin).abs() <= 1e-9 * (1.0 + a.worst_margin.abs()));
                prop_assert!(same_verdict(&a, &b, ck.tol));
            }
        }
    }

    #[test]
    fn passing_is_monotone_in_lambda(kind in 0u8..4, seed in any::<u64>(), lambda in -1.0f64..0.85) {
        let c = small_curve(kind, seed);
        let ck = Checker::default();
        for p in Property::ALL.into_iter().filter(|p| p.is_monotone_in_lambda()) {
            let lo = ck.check(p, &c, lambda).unwrap();
            let hi = ck.check(p, &c, lambda + 0.1).unwrap();
            prop_assert!(hi.worst_margin >= lo.worst_margin - 1e-12, "{}", p.name());
            if lo.passed {
                prop_assert!(hi.passed, "{} passed at {lambda} but not at {}", p.name(), lambda + 0.1);
            }
        }
    }

    #[test]
    fn reversal_swaps_expanded_and_contracted(kind in 0u8..4, seed in any::<u64>()) {
        let c = small_curve(kind, seed);
        let ck = Checker::default();
        for curve in [c.clone(), reverse(&c)] {
            let e = ck.self_expanded(&curve).unwrap();
            let r = ck.self_contracted(&reverse(&curve)).unwrap();
            prop_assert_eq!(e.passed, r.passed);
            prop_assert!((e.worst_margin - r.worst_margin).abs() <= 1e-12 * (1.0 + e.worst_margin.abs()));
        }
    }

    #[test]
    fn sequential_and_parallel_reports_are_identical(kind in 0u8..4, seed in any::<u64>(), lambda in -1.0f64..0.99) {
        let c = small_curve(kind, seed);
        let par = Checker { execution: Execution::Parallel, ..Checker::default() };
        let seq = par.sequential();
        for p in Property::ALL {
            prop_assert_eq!(par.check(p, &c, lambda).unwrap(), seq.check(p, &c, lambda).unwrap());
        }
    }

    #[test]
    fn csv_round_trip_preserves_reports(kind in 0u8..4, seed in any::<u64>()) {
        let c = small_curve(kind, seed);
        let mut pts = Vec::new();
        let mut tans = Vec::new();
        write_csv(&c, &mut pts).unwrap();
        let mut back = read_csv(pts.as_slice()).unwrap();
        if c.has_tangents() {
            write_tangents_csv(&c, &mut tans).unwrap();
            back = read_tangents_csv(tans.as_slice(), back).unwrap();
        }
        prop_assert_eq!(back.params(), c.params());
        prop_assert_eq!(back.coords(), c.coords());
        let ck = Checker::default();
        for p in Property::ALL {
            let a = ck.check(p, &c, 0.3).unwrap();
            let b = ck.check(p, &back, 0.3).unwrap();
            prop_assert_eq!(a.passed, b.passed);
            prop_assert_eq!(a.worst_margin.to_bits(), b.worst_margin.to_bits());
            prop_assert_eq!(a.witness, b.witness);
        }
    }

    #[test]
    fn polyline_length_is_additive_and_rigid(kind in 0u8..4, seed in any::<u64>(), a in 0usize..6, b in 6usize..12) {
        let c = small_curve(kind, seed);
        let end = c.len() - 1;
        let ab = polyline_length(&c, a, b).unwrap();
        let bc = polyline_length(&c, b, end).unwrap();
        let ac = polyline_length(&c, a, end).unwrap();
        prop_assert!((ab + bc - ac).abs() <= 1e-12 * ac.max(1.0));
        let moved = total_length(&rigid_motion(&c, seed));
        prop_assert!((moved - total_length(&c)).abs() <= 1e-9 * total_length(&c));
    }

    #[test]
    fn reversed_forward_secant_is_the_backward_secant(kind in 0u8..4, seed in any::<u64>()) {
        let c = small_curve(kind, seed).without_tangents();
        let rev = reverse(&c);
        let m = c.len();
        for i in 1..m - 1 {
            let f = forward_secant(&rev, m - 1 - i).unwrap();
            let b = backward_secant(&c, i).unwrap();
            for (x, y) in f.coords().iter().zip(b.coords()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn initial_cone_generators_are_unit(kind in 0u8..4, seed in any::<u64>()) {
        let c = small_curve(kind, seed);
        for i in [0, 1, c.len() / 2, c.len() - 1] {
            let k = initial_cone(&c, i).unwrap();
            prop_assert_eq!(k.generators().len(), i);
            for g in k.generators() {
                prop_assert!((dot(g.coords(), g.coords()).sqrt() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn width_profile_is_monotone_and_bounded(kind in 0u8..4, seed in any::<u64>()) {
        let c = small_curve(kind, seed);
        let net = RepulsionConstants::new(0.1, c.dim()).unwrap().net().unwrap();
        let w = width_profile(&c, &net).unwrap();
        for rows in w.widths.windows(2) {
            for (before, after) in rows[0].iter().zip(&rows[1]) {
                prop_assert!(after >= before);
            }
        }
        for pair in w.total.windows(2) {
            prop_assert!(pair[1] >= pair[0]);
        }
        let diam = eelkit::curve::diameter(&c);
        prop_assert!(*w.total.last().unwrap() <= net.len() as f64 * diam * (1.0 + 1e-12));
    }

    #[test]
    fn aperture_is_permutation_and_rotation_invariant(seed in any::<u64>(), k in 1usize..8) {
        let mut r = rng(seed);
        let s: Vec<UnitVector> = (0..k).map(|_| UnitVector::normalize(&gaussian_unit(&mut r, 3)).unwrap()).collect();
        let base = aperture_set(&s).unwrap();
        let mut shuffled = s.clone();
        shuffled.reverse();
        shuffled.rotate_left(k / 2);
        prop_assert!((aperture_set(&shuffled).unwrap() - base).abs() <= 1e-15);
        let q = random_rotation(&mut r, 3);
        let turned: Vec<UnitVector> = s.iter().map(|u| UnitVector::normalize(&apply(&q, u.coords())).unwrap()).collect();
        prop_assert!((aperture_set(&turned).unwrap() - base).abs() <= 1e-12);
    }

    #[test]
    fn projection_cos_dominates_generator_products(seed in any::<u64>(), k in 1usize..5) {
        let mut r = rng(seed);
        let gens: Vec<UnitVector> = (0..k).map(|_| UnitVector::normalize(&gaussian_unit(&mut r, 3)).unwrap()).collect();
        let q = UnitVector::normalize(&gaussian_unit(&mut r, 3)).unwrap();
        let best = gens.iter().map(|g| dot(g.coords(), q.coords())).fold(f64::NEG_INFINITY, f64::max);
        let cone = GeneratedCone::new(3, gens.clone()).unwrap();
        let cos = cone_projection_cos(&cone, &q).unwrap();
        prop_assert!(cos >= best - 1e-9);
        if k == 1 {
            prop_assert!((cos - best.max(0.0)).abs() <= 1e-9 || (cos - best).abs() <= 1e-9);
        }
    }

    #[test]
    fn polar_vectors_have_nonpositive_products(seed in any::<u64>(), k in 1usize..5) {
        let mut r = rng(seed);
        let gens: Vec<UnitVector> = (0..k).map(|_| UnitVector::normalize(&gaussian_unit(&mut r, 3)).unwrap()).collect();
        let cone = GeneratedCone::new(3, gens.clone()).unwrap();
        for _ in 0..200 {
            let v = gaussian_unit(&mut r, 3);
            if polar_contains(&cone, &v, 1e-12) {
                for g in &gens {
                    prop_assert!(dot(&v, g.coords()) <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn spread_limited_sets_are_pointed(seed in any::<u64>(), d in 2usize..4, frac in 0.0f64..0.95) {
        let mut r = rng(seed);
        let lambda = frac / d as f64;
        let mut sigma: Vec<UnitVector> = Vec::new();
        for _ in 0..400 {
            let v = UnitVector::normalize(&gaussian_unit(&mut r, d)).unwrap();
            if sigma.iter().all(|u| dot(u.coords(), v.coords()) >= -lambda) {
                sigma.push(v);
            }
            if sigma.len() == 16 {
                break;
            }
        }
        let p = pointedness_test(&sigma, lambda, d).unwrap();
        prop_assert!(p.precondition.is_none());
        prop_assert!(p.pointed);
    }

    #[test]
    fn sphere_nets_cover_random_directions(seed in any::<u64>(), d in 2usize..4, eta in 0.05f64..0.4) {
        let net = build_sphere_net(d, eta).unwrap();
        let mut r = rng(seed);
        for _ in 0..2_000 {
            let v = gaussian_unit(&mut r, d);
            prop_assert!(net.covers(&v));
        }
    }
}

#[test]
fn increment_inequality_holds_on_lambda_curves() {
    let mut checked = 0;
    for sample in common::corpus() {
        let c = &sample.curve;
        if c.len() > 60 {
            continue;
        }
        let lambda = 0.9 / c.dim() as f64 - 0.2;
        if !Checker::default().lambda_curve(c, lambda).unwrap().passed {
            continue;
        }
        let k = RepulsionConstants::new(lambda, c.dim()).unwrap();
        let w = width_profile(c, &k.net().unwrap()).unwrap();
        let (margin, pair) = w.increment_margin(c, k.eta, Execution::Parallel);
        assert!(margin >= -1e-9, "{}: margin {margin} at {pair:?}", sample.name);
        let report = eelkit::rectifiability::verify_length_bound(c, lambda, c.dim()).unwrap();
        assert!(report.holds, "{}", sample.name);
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} curves qualified");
}

#[test]
fn self_expanded_helix_stays_self_expanded_after_rigid_motions() {
    let c = helix(1.0, derive_mu(), 0.0, 4.0 * PI, 0.1).unwrap();
    for seed in 0..4 {
        let moved = rigid_motion(&c, seed);
        let r = Checker::default().self_expanded(&moved).unwrap();
        assert!(r.passed, "seed {seed}: {}", r.worst_margin);
    }
}
