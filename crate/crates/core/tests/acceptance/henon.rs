//! Hénon criteria: horseshoe, solenoid, stage bounds and base-point independence.

use std::f64::consts::PI;

use hshadow::associated::{
    conjugacy_residual, from_henon, itinerary_orbit, k_hsc, to_henon, window_distance,
};
use hshadow::hyperbolic::hyperbolic_constants;
use hshadow::{
    apply_hsc, associated_expanding, inverse_limit_conjugacy, make_henon_system, shadow_hyperbolic,
    Complex64, CrossedSystem, Direction, HenonParams, HomotopyPseudoOrbit, Orbit, Point, PolyPath,
    Result, ShadowTrace, WindowKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Outcome;

const TOL: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn horseshoe_system() -> Result<CrossedSystem> {
    make_henon_system(HenonParams::real(-6.0, 0.1, 4.0))
}

fn solenoid_system() -> Result<CrossedSystem> {
    let mut p = HenonParams::real(0.0, 0.15, 1.2);
    p.rx_inner = Some(0.7);
    make_henon_system(p)
}

/// Points `(s_{i+1} sqrt 6, s_i sqrt 6)` for random signs, joined by horizontal segments.
fn sign_hpo(sys: &CrossedSystem, rng: &mut ChaCha8Rng, n: usize) -> Result<HomotopyPseudoOrbit> {
    let r = 6f64.sqrt();
    let signs: Vec<f64> = (0..=n)
        .map(|_| if rng.gen::<bool>() { r } else { -r })
        .collect();
    let points: Vec<Point> = (0..n)
        .map(|k| Point::Pair(c(signs[k + 1]), c(signs[k])))
        .collect();
    let paths = points
        .windows(2)
        .map(|w| {
            let (x, y) = w[0].as_pair().expect("pair");
            let (u, v) = sys.params.forward(x, y);
            PolyPath::segment(sys.system.x0.clone(), Point::Pair(u, v), w[1])
        })
        .collect();
    let start = -((n / 2) as i64);
    HomotopyPseudoOrbit::new(&sys.system, WindowKind::BiInfinite, start, points, paths)
}

/// Hyperbolic half of criterion 2: 50 refined reruns and 50 shadows fed back in.
pub fn idempotence() -> Result<Outcome> {
    let sys = horseshoe_system()?;
    let space = &sys.system.x1;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_fixed, mut worst_refined) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let hpo = sign_hpo(&sys, &mut rng, 61)?;
        let (a, _) = shadow_hyperbolic(&sys, &hpo, TOL)?;
        let (b, _) = shadow_hyperbolic(&sys, &hpo.refine(4), TOL)?;
        worst_refined = worst_refined.max(window_distance(space, &a, &b)?);
        let again = HomotopyPseudoOrbit::from_orbit(&sys.system, &a);
        let (c, _) = shadow_hyperbolic(&sys, &again, TOL)?;
        worst_fixed = worst_fixed.max(window_distance(space, &a, &c)? / a.defect_tol);
    }
    Ok(Outcome::new(
        worst_fixed <= 1.0 && worst_refined <= 2.0 * TOL,
        format!(
            "Hénon: orbit moved {worst_fixed:.2e} x defect-tol, refinement moved {worst_refined:.2e}"
        ),
    ))
}

fn matches(found: &[f64], want: &[f64]) -> bool {
    want.iter()
        .all(|w| found.iter().any(|f| (f - w).abs() <= 1e-6))
        && found
            .iter()
            .all(|f| want.iter().any(|w| (f - w).abs() <= 1e-6))
}

pub fn horseshoe() -> Result<Outcome> {
    let sys = horseshoe_system()?;
    let margins_ok = (sys.bcc.0 - 5.6).abs() <= 1e-6
        && (sys.bcc.1 - 56.0).abs() <= 1e-6
        && (sys.occ - 1.6).abs() <= 1e-6;
    let a = associated_expanding(&sys, c(0.0))?;
    let space = &sys.system.x1;
    let mut problems = Vec::new();
    let (mut fixed_x, mut two_x) = (Vec::new(), Vec::new());
    for n in 1..=6usize {
        let mut starts = Vec::with_capacity(1 << n);
        for w in 0..1usize << n {
            let word: Vec<usize> = (0..n).map(|k| (w >> k) & 1).collect();
            let inv = itinerary_orbit(&a, &word, 24, TOL)?;
            let orbit = inverse_limit_conjugacy(&a, Direction::ToHenon, &inv, TOL)?;
            let (Some(p0), Some(pn)) = (orbit.get(0), orbit.get(n as i64)) else {
                problems.push(format!(
                    "window {}..{} misses 0..{n}",
                    orbit.start,
                    orbit.last_index()
                ));
                continue;
            };
            if space.distance(p0, pn) > 1e-8 {
                problems.push(format!("word {word:?} is not {n}-periodic"));
            }
            let x0 = p0.as_pair().expect("pair").0;
            match (n, w) {
                (1, _) => fixed_x.push(x0.re),
                (2, 1 | 2) => two_x.push(x0.re),
                _ => {}
            }
            starts.push(*p0);
        }
        let closest = (0..starts.len())
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| space.distance(&starts[i], &starts[j]))
            .fold(f64::INFINITY, f64::min);
        if closest <= 1e-3 {
            problems.push(format!("period {n}: two orbits within {closest:.2e}"));
        }
    }
    // Roots of x^2 - (1 + b) x + c and of t^2 + (1 + b) t + (1 + b)^2 + c.
    let (b, cc) = (0.1f64, -6.0f64);
    let d1 = ((1.0 + b).powi(2) - 4.0 * cc).sqrt();
    let d2 = ((1.0 + b).powi(2) - 4.0 * ((1.0 + b).powi(2) + cc)).sqrt();
    if !matches(&fixed_x, &[(1.0 + b + d1) / 2.0, (1.0 + b - d1) / 2.0]) {
        problems.push(format!("fixed points {fixed_x:?}"));
    }
    if !matches(&two_x, &[(-(1.0 + b) + d2) / 2.0, (-(1.0 + b) - d2) / 2.0]) {
        problems.push(format!("period-two points {two_x:?}"));
    }
    let detail = format!(
        "bcc = ({:.6}, {:.6}), occ = {:.6}; {}",
        sys.bcc.0,
        sys.bcc.1,
        sys.occ,
        if problems.is_empty() {
            "126 itineraries distinct and periodic".into()
        } else {
            problems.join(", ")
        }
    );
    Ok(Outcome::new(margins_ok && problems.is_empty(), detail))
}

/// Window `[-n, n]` of an inverse-limit orbit of `z -> z^2` on the unit circle.
fn circle_orbit(rng: &mut ChaCha8Rng, n: usize) -> Orbit {
    let mut theta = vec![rng.gen::<f64>()];
    for _ in 0..n {
        let last = *theta.last().expect("nonempty");
        theta.push((last + f64::from(u8::from(rng.gen::<bool>()))) / 2.0);
    }
    theta.reverse();
    for _ in 0..n {
        let last = *theta.last().expect("nonempty");
        theta.push((2.0 * last).fract());
    }
    Orbit::centered(
        theta
            .iter()
            .map(|t| Point::Complex(Complex64::from_polar(1.0, 2.0 * PI * t)))
            .collect(),
    )
}

pub fn solenoid() -> Result<Outcome> {
    let sys = solenoid_system()?;
    let a = associated_expanding(&sys, c(0.0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut residual, mut round_trip) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let orbit = circle_orbit(&mut rng, 40);
        residual = residual.max(conjugacy_residual(
            &sys.system.x1,
            |o| to_henon(&a, o, TOL),
            &orbit,
        )?);
        let back = from_henon(&a, &to_henon(&a, &orbit, TOL)?, TOL)?;
        round_trip = round_trip.max(window_distance(&a.system.x0, &back, &orbit)?);
    }
    Ok(Outcome::new(
        residual <= 2e-9 && round_trip <= 2e-9,
        format!("conjugacy residual {residual:.2e}, round trip {round_trip:.2e}"),
    ))
}

/// Largest `max_length / (2 C1 / lambda^floor(n/2))` over the stages of a trace.
fn stage_ratio(sys: &CrossedSystem, hpo: &HomotopyPseudoOrbit, trace: &ShadowTrace) -> Result<f64> {
    let (_, c1) = hyperbolic_constants(sys.lambda, sys.c, hpo.bound)?;
    Ok(trace
        .stages
        .iter()
        .map(|s| s.max_length / (2.0 * c1 / sys.lambda.powi((s.stage / 2) as i32)))
        .fold(0.0, f64::max))
}

pub fn hyperbolic_decay() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut traces = 0;
    let horseshoe = horseshoe_system()?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let hpo = sign_hpo(&horseshoe, &mut rng, 61)?;
        let (_, trace) = shadow_hyperbolic(&horseshoe, &hpo, TOL)?;
        worst = worst.max(stage_ratio(&horseshoe, &hpo, &trace)?);
        traces += 1;
    }
    let solenoid = solenoid_system()?;
    let a = associated_expanding(&solenoid, c(0.0))?;
    let k = k_hsc(&a);
    for _ in 0..10 {
        let orbit = circle_orbit(&mut rng, 40);
        let hpo = apply_hsc(&k, &HomotopyPseudoOrbit::from_orbit(&a.system, &orbit))?;
        let (_, trace) = shadow_hyperbolic(&solenoid, &hpo, TOL)?;
        worst = worst.max(stage_ratio(&solenoid, &hpo, &trace)?);
        traces += 1;
    }
    Ok(Outcome::new(
        worst <= 1.01,
        format!("{traces} traces, max length/(2 C1/lambda^m) = {worst:.4}"),
    ))
}

pub fn y0_independence() -> Result<Outcome> {
    let sys = horseshoe_system()?;
    let bases = [c(0.0), c(0.5), Complex64::new(-0.5, 0.2)];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for (i, &y0) in bases.iter().enumerate() {
        let a = associated_expanding(&sys, y0)?;
        let samples = (0..10)
            .map(|_| {
                let word: Vec<usize> = (0..97).map(|_| rng.gen_range(0..2)).collect();
                itinerary_orbit(&a, &word, 24, TOL)
            })
            .collect::<Result<Vec<_>>>()?;
        for &y1 in &bases[i + 1..] {
            worst = worst.max(hshadow::y0_independence(&sys, y0, y1, &samples, TOL)?);
        }
    }
    Ok(Outcome::new(
        worst <= 2e-9,
        format!("largest disagreement {worst:.2e} over 3 pairs"),
    ))
}
