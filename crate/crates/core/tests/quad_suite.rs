use std::f64::consts::{LN_2, PI};

use hypvol::quad::{integrate_finite, integrate_finite_dist, integrate_real_line, QuadConfig, ValueWithError};

type Case = (&'static str, Box<dyn Fn(&QuadConfig) -> ValueWithError>, f64);

fn suite() -> Vec<Case> {
    let sqrt_pi = PI.sqrt();
    vec![
        ("x^2 on [0,1]", Box::new(|c: &QuadConfig| integrate_finite(|x| x * x, 0.0, 1.0, c).unwrap()), 1.0 / 3.0),
        ("exp on [0,1]", Box::new(|c: &QuadConfig| integrate_finite(f64::exp, 0.0, 1.0, c).unwrap()), 1f64.exp() - 1.0),
        ("sin on [0,pi]", Box::new(|c: &QuadConfig| integrate_finite(f64::sin, 0.0, PI, c).unwrap()), 2.0),
        (
            "1/(1+x^2) on [0,1]",
            Box::new(|c: &QuadConfig| integrate_finite(|x| 1.0 / (1.0 + x * x), 0.0, 1.0, c).unwrap()),
            PI / 4.0,
        ),
        ("sqrt on [0,1]", Box::new(|c: &QuadConfig| integrate_finite(f64::sqrt, 0.0, 1.0, c).unwrap()), 2.0 / 3.0),
        (
            "1/sqrt on [0,1]",
            Box::new(|c: &QuadConfig| integrate_finite_dist(|_, a, _| a.sqrt().recip(), 0.0, 1.0, c).unwrap()),
            2.0,
        ),
        ("ln on [0,1]", Box::new(|c: &QuadConfig| integrate_finite_dist(|_, a, _| a.ln(), 0.0, 1.0, c).unwrap()), -1.0),
        (
            "x^-0.9 on [0,1]",
            Box::new(|c: &QuadConfig| integrate_finite_dist(|_, a, _| a.powf(-0.9), 0.0, 1.0, c).unwrap()),
            10.0,
        ),
        (
            "1/sqrt(1-x^2) on [-1,1]",
            Box::new(|c: &QuadConfig| integrate_finite_dist(|_, a, b| (a * b).sqrt().recip(), -1.0, 1.0, c).unwrap()),
            PI,
        ),
        (
            "sqrt(1-x^2) on [-1,1]",
            Box::new(|c: &QuadConfig| integrate_finite_dist(|_, a, b| (a * b).sqrt(), -1.0, 1.0, c).unwrap()),
            PI / 2.0,
        ),
        (
            "ln sin on [0,pi/2]",
            Box::new(|c: &QuadConfig| integrate_finite_dist(|_, a, _| a.sin().ln(), 0.0, PI / 2.0, c).unwrap()),
            -PI * LN_2 / 2.0,
        ),
        (
            "cos^2 on [-pi/2,pi/2]",
            Box::new(|c: &QuadConfig| integrate_finite(|x| x.cos().powi(2), -PI / 2.0, PI / 2.0, c).unwrap()),
            PI / 2.0,
        ),
        (
            "x ln x on [0,1]",
            Box::new(|c: &QuadConfig| integrate_finite_dist(|x, a, _| x * a.ln(), 0.0, 1.0, c).unwrap()),
            -0.25,
        ),
        (
            "x^3 on [-2,3]",
            Box::new(|c: &QuadConfig| integrate_finite(|x| x.powi(3), -2.0, 3.0, c).unwrap()),
            65.0 / 4.0,
        ),
        ("gaussian", Box::new(|c: &QuadConfig| integrate_real_line(|x| (-x * x).exp(), c).unwrap()), sqrt_pi),
        ("sech", Box::new(|c: &QuadConfig| integrate_real_line(|x| 1.0 / x.cosh(), c).unwrap()), PI),
        ("sech^2", Box::new(|c: &QuadConfig| integrate_real_line(|x| x.cosh().powi(-2), c).unwrap()), 2.0),
        ("1/(1+x^2)", Box::new(|c: &QuadConfig| integrate_real_line(|x| 1.0 / (1.0 + x * x), c).unwrap()), PI),
        (
            "x^2 sech",
            Box::new(|c: &QuadConfig| integrate_real_line(|x| x * x / x.cosh(), c).unwrap()),
            PI.powi(3) / 4.0,
        ),
        (
            "t^3/sinh t",
            Box::new(|c: &QuadConfig| {
                integrate_real_line(|x| if x == 0.0 { 0.0 } else { x.powi(3) / x.sinh() }, c).unwrap()
            }),
            PI.powi(4) / 4.0,
        ),
    ]
}

#[test]
fn twenty_known_integrals() {
    let s = suite();
    assert_eq!(s.len(), 20);
    for tol in [1e-6, 1e-8, 1e-10, 1e-12] {
        let c = QuadConfig::default().with_rel_tol(tol);
        for (name, f, exact) in &s {
            let v = f(&c).value;
            assert!((v - exact).abs() <= 1e3 * tol * exact.abs(), "{name} at {tol}: {v} vs {exact}");
        }
    }
}

#[test]
fn estimates_bound_true_error() {
    for tol in [1e-6, 1e-8, 1e-10, 1e-12] {
        let c = QuadConfig::default().with_rel_tol(tol);
        for (name, f, exact) in &suite() {
            let r = f(&c);
            assert!((r.value - exact).abs() <= r.abs_err_est, "{name} at {tol}: {r:?} vs {exact}");
        }
    }
}

#[test]
fn tightening_never_hurts() {
    // Up to a roundoff floor of a few ulps of the result.
    let s = suite();
    for (name, f, exact) in &s {
        let mut prev = f64::INFINITY;
        let mut tol = 1e-6;
        while tol >= 1e-12 {
            let err = (f(&QuadConfig::default().with_rel_tol(tol)).value - exact).abs();
            assert!(err <= prev.max(16.0 * f64::EPSILON * exact.abs()), "{name}: {err} after {prev} at {tol}");
            prev = err;
            tol /= 2.0;
        }
    }
}
