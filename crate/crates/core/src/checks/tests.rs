use super::*;
use crate::constructions::{example_curve_3d, helix};

fn segment(n: usize) -> SampledCurve {
    let params: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let pts = (0..n).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
    SampledCurve::new(params, pts).unwrap()
}

fn arc(total: f64, n: usize) -> SampledCurve {
    let params: Vec<f64> = (0..n).map(|i| total * i as f64 / (n - 1) as f64).collect();
    let pts = params.iter().map(|t| vec![t.cos(), t.sin()]).collect();
    SampledCurve::new(params, pts).unwrap()
}

#[test]
fn segment_is_tight_at_minus_one() {
    let r = check_lambda_curve(&segment(12), -1.0, 1e-9).unwrap();
    assert!(r.passed);
    assert!(r.worst_margin.abs() < 1e-12);
    assert_eq!(r.witness.len(), 3);
}

#[test]
fn example_curve_is_not_a_lambda_curve() {
    let c = example_curve_3d(0.05).unwrap();
    assert!(!check_lambda_curve(&c, 0.99, 1e-9).unwrap().passed);
}

#[test]
fn long_arc_is_not_self_contracted() {
    assert!(check_self_contracted(&arc(0.9 * std::f64::consts::PI, 40), 1e-9).unwrap().passed);
    assert!(!check_self_contracted(&arc(1.2 * std::f64::consts::PI, 40), 1e-9).unwrap().passed);
}

#[test]
fn lyapunov_on_a_segment() {
    let c = segment(20);
    assert!(check_lyapunov(&c, 0.0, 0, 1e-9).unwrap().passed);
    assert!(check_lyapunov(&c, 1.0, 3, 1e-9).unwrap().passed);
    assert!(check_lyapunov(&c, 0.0, 19, 1e-9).is_err());
}

#[test]
fn min_lambda_of_a_segment() {
    assert_eq!(find_min_lambda(&segment(8), Property::LambdaCurve, 1e-9, 1e-6).unwrap(), -1.0);
    assert!(find_min_lambda(&segment(8), Property::SelfExpanded, 1e-9, 1e-6).is_err());
}

#[test]
fn sequential_and_parallel_agree() {
    let c = helix(1.0, 0.4661, 0.0, 9.0, 0.05).unwrap();
    for p in Property::ALL {
        let a = Checker::default().check(p, &c, 0.3).unwrap();
        let b = Checker::default().sequential().check(p, &c, 0.3).unwrap();
        assert_eq!(a, b, "{p}");
    }
}

#[test]
fn direction_sources() {
    let c = helix(1.0, 0.4661, 0.0, 9.0, 0.05).unwrap();
    let tangent = Checker::default().lambda_cone(&c, 0.45).unwrap();
    let chord = Checker { directions: DirectionSource::Chord, ..Checker::default() }.lambda_cone(&c, 0.45).unwrap();
    let window =
        Checker { directions: DirectionSource::Window(3), ..Checker::default() }.lambda_cone(&c, 0.45).unwrap();
    assert!(tangent.passed && chord.passed && window.passed);
    assert!(chord.worst_margin != tangent.worst_margin);
    assert_eq!("window:3".parse::<DirectionSource>().unwrap(), DirectionSource::Window(3));
    assert!("window:0".parse::<DirectionSource>().is_err());
}

#[test]
fn property_names_parse() {
    for p in Property::ALL {
        assert_eq!(p.name().parse::<Property>().unwrap(), p);
        assert_eq!(p.name().replace('_', "-").parse::<Property>().unwrap(), p);
    }
}

#[test]
fn report_json_has_core_fields() {
    let r = check_self_expanded(&segment(5), 1e-9).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["property"], "self_expanded");
    assert_eq!(v["passed"], true);
}
