use super::*;
use crate::hyperbolic::{make_henon_system, HenonParams};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn horseshoe() -> CrossedSystem {
    make_henon_system(HenonParams::real(-6.0, 0.1, 4.0)).unwrap()
}

fn solenoid() -> CrossedSystem {
    let mut p = HenonParams::real(0.0, 0.15, 1.2);
    p.rx_inner = Some(0.7);
    make_henon_system(p).unwrap()
}

fn constant(p: Point, half: usize) -> Orbit {
    Orbit::centered(vec![p; 2 * half + 1])
}

/// Period-2 x-values of `x_{k+1} = x_k^2 + c - b x_{k-1}`: roots of
/// `x^2 + (1 + b) x + ((1 + b)^2 + 2c - (1 + b)^2 (1 + b) ... )`, written out via `s = -(1 + b)`.
fn period_two(cc: f64, b: f64) -> (f64, f64) {
    let s = -(1.0 + b);
    let sum_sq = s * (1.0 + b) - 2.0 * cc;
    let p = (s * s - sum_sq) / 2.0;
    let d = (s * s - 4.0 * p).sqrt();
    ((s + d) / 2.0, (s - d) / 2.0)
}

#[test]
fn sigma_substitution() {
    let a = associated_expanding(&solenoid(), c(0.0)).unwrap();
    assert_eq!(a.c_prime(), c(0.0));
    let a = associated_expanding(&horseshoe(), c(1.0)).unwrap();
    assert!((a.c_prime() - c(-6.1)).norm() < 1e-15);
    assert!((a.sigma(c(2.0)) - c(-2.1)).norm() < 1e-15);
    assert!(matches!(
        associated_expanding(&horseshoe(), c(10.0)),
        Err(Error::Input(_))
    ));
}

#[test]
fn classification() {
    assert_eq!(classify_henon(c(-6.0), c(0.1)), HenonClass::Horseshoe);
    assert_eq!(classify_henon(c(0.0), c(0.15)), HenonClass::Solenoid);
    assert_eq!(classify_henon(c(-1.0), c(0.01)), HenonClass::Basilica);
    assert_eq!(classify_henon(c(0.25), c(0.1)), HenonClass::Unclassified);
    assert_eq!(
        classify_henon(c(-2.0 * 1.1f64.powi(2)), c(0.1)),
        HenonClass::Unclassified
    );
    assert_eq!(classify_henon(c(0.0), c(0.25)), HenonClass::Unclassified);
    assert_eq!(HenonClass::Horseshoe.model(), Some("full 2-shift"));
    assert_eq!(
        HenonClass::Solenoid.model(),
        Some("inverse limit of z ↦ z²")
    );
}

#[test]
fn hsc_identities_hold() {
    let a = associated_expanding(&horseshoe(), c(0.3)).unwrap();
    let k = k_hsc(&a);
    k.check_identities(&Point::Complex(c(2.5))).unwrap();
    let h = h_hsc(&a);
    h.check_identities(&Point::Pair(c(3.0), c(-1.0))).unwrap();
    let (x, y) = (c(3.0), c(-1.0));
    let xt = h1_of(&h, x, y);
    assert!((a.sigma(xt) - a.parent.params.forward(x, y).0).norm() < 1e-12);
}

fn h1_of(h: &HomotopySemiConjugacy, x: Complex64, y: Complex64) -> Complex64 {
    (h.h1)(&Point::Pair(x, y)).z()
}

#[test]
fn solenoid_fixed_point_to_henon() {
    let a = associated_expanding(&solenoid(), c(0.0)).unwrap();
    let out = to_henon(&a, &constant(Point::Complex(c(1.0)), 40), 1e-10).unwrap();
    assert!(!out.is_empty());
    // x^2 - (1 + b) x = 0 away from 0.
    for p in &out.points {
        let (x, y) = p.xy();
        assert!(
            (x - 1.15).norm() < 1e-9 && (y - 1.15).norm() < 1e-9,
            "{p:?}"
        );
    }
}

#[test]
fn horseshoe_fixed_point_from_henon() {
    let a = associated_expanding(&horseshoe(), c(0.0)).unwrap();
    let xs = (1.1 + (1.21f64 + 24.0).sqrt()) / 2.0;
    let out = from_henon(&a, &constant(Point::Pair(c(xs), c(xs)), 20), 1e-10).unwrap();
    assert!(!out.is_empty());
    for p in &out.points {
        assert!((p.z() - 3.0).norm() < 1e-9, "{p:?}");
    }
}

#[test]
fn period_two_round_trip() {
    let sys = horseshoe();
    let (p, q) = period_two(-6.0, 0.1);
    let pts: Vec<Point> = (0..121)
        .map(|i| {
            if i % 2 == 0 {
                Point::Pair(c(p), c(q))
            } else {
                Point::Pair(c(q), c(p))
            }
        })
        .collect();
    let orbit = Orbit::centered(pts);
    assert!(sys.system.max_defect(&orbit.points) < 1e-12);
    let a = associated_expanding(&sys, c(0.0)).unwrap();
    let tol = 1e-10;
    let there = from_henon(&a, &orbit, tol).unwrap();
    let back = to_henon(&a, &there, tol).unwrap();
    assert!(!back.is_empty());
    assert!(window_distance(&sys.system.x1, &back, &orbit).unwrap() <= 2.0 * tol);
}

#[test]
fn itineraries_give_periodic_orbits() {
    let a = associated_expanding(&horseshoe(), c(0.0)).unwrap();
    let o = itinerary_orbit(&a, &[0, 1], 12, 1e-10).unwrap();
    assert_eq!((o.start, o.last_index()), (-12, 12));
    assert!(a.system.max_defect(&o.points) < 1e-10);
    for w in o.points.windows(3) {
        assert!((w[0].z() - w[2].z()).norm() < 1e-9);
    }
    // Sign pattern follows the itinerary.
    assert!(o.get(0).unwrap().z().re > 0.0 && o.get(1).unwrap().z().re < 0.0);
}

#[test]
fn y0_independence_fixed_point() {
    let sys = horseshoe();
    let tol = 1e-10;
    let fixed = constant(Point::Complex(c(3.0)), 20);
    assert_eq!(
        y0_independence(&sys, c(0.0), c(0.0), std::slice::from_ref(&fixed), tol).unwrap(),
        0.0
    );
    let dev = y0_independence(&sys, c(0.0), c(0.5), std::slice::from_ref(&fixed), tol).unwrap();
    assert!(dev <= 2.0 * tol, "{dev}");
    // The induced map sends the fixed point to the matching fixed point of sigma_{y1}.
    let a0 = associated_expanding(&sys, c(0.0)).unwrap();
    let a1 = associated_expanding(&sys, c(0.5)).unwrap();
    let hpo = HomotopyPseudoOrbit::from_orbit(&a0.system, &fixed);
    let image = shadow_expanding(
        &a1.system,
        &apply_hsc(&y0_homotopy(&a0, &a1), &hpo).unwrap(),
        tol,
    )
    .unwrap()
    .0;
    let want = (1.0 + (1.0f64 + 4.0 * 6.05).sqrt()) / 2.0;
    for p in &image.points {
        assert!((p.z() - want).norm() < 1e-9);
    }
    assert!(matches!(
        y0_independence(&sys, c(0.0), c(9.0), &[fixed], tol),
        Err(Error::Input(_))
    ));
}
