//! Circle and symbolic criteria.

use std::f64::consts::PI;
use std::sync::Arc;

use hshadow::expanding::{circle_interpolation_hsc, half_rotation_hsc, orbit_distance};
use hshadow::hsc::HomotopySemiConjugacy;
use hshadow::space::{circle_dist, wrap01};
use hshadow::symbolic::{decode_symbols, MarkovPartition};
use hshadow::{
    code_orbit, compose_hsc, enumerate_periodic, graph_system, induced_map_expanding,
    make_circle_system, shadow_expanding, HomotopyPseudoOrbit, MultivaluedSystem, Orbit,
    Perturbation, Point, PolyPath, Result, WindowKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Outcome;

const TOL: f64 = 1e-10;

fn circle(degree: u32, epsilon: f64) -> Arc<MultivaluedSystem> {
    let pert = if epsilon > 0.0 {
        Perturbation::Sin
    } else {
        Perturbation::None
    };
    Arc::new(make_circle_system(degree, epsilon, pert).expect("certified circle map"))
}

fn image(sys: &MultivaluedSystem, x: f64) -> f64 {
    sys.sigma(&Point::Real(x)).as_real().expect("circle point")
}

/// `n` points with jumps uniform in `[-c, c]`; the middle jump is exactly `c`.
fn random_hpo(
    sys: &MultivaluedSystem,
    rng: &mut ChaCha8Rng,
    n: usize,
    c: f64,
) -> Result<HomotopyPseudoOrbit> {
    let mut x = rng.gen::<f64>();
    let mut points = vec![Point::Real(x)];
    let mut paths = Vec::with_capacity(n - 1);
    for k in 1..n {
        let a = image(sys, x);
        let j = if k == n / 2 { c } else { rng.gen_range(-c..=c) };
        paths.push(PolyPath::segment(
            sys.x0.clone(),
            Point::Real(a),
            Point::Real(a + j),
        ));
        x = wrap01(a + j);
        points.push(Point::Real(x));
    }
    HomotopyPseudoOrbit::new(sys, WindowKind::Forward, 0, points, paths)
}

fn sample_orbit(sys: &MultivaluedSystem, rng: &mut ChaCha8Rng, n: usize) -> Orbit {
    let mut x = rng.gen::<f64>();
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        points.push(Point::Real(x));
        x = wrap01(image(sys, x));
    }
    Orbit::forward(points)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

pub fn geometric_decay() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_bound, mut worst_ratio) = (0.0f64, 0.0f64);
    for case in 0..100 {
        let degree = 2 + case % 2;
        let sys = circle(degree as u32, 0.0);
        let lambda = degree as f64;
        let c = rng.gen_range(0.05..=1.0);
        let hpo = random_hpo(&sys, &mut rng, 50, c)?;
        let (_, _, trace) = shadow_expanding(&sys, &hpo, TOL)?;
        for s in &trace.stages {
            let bound = hpo.bound / lambda.powi(s.stage as i32);
            worst_bound = worst_bound.max(s.max_length / bound);
        }
        let ratios: Vec<f64> = trace
            .stages
            .windows(2)
            .filter(|w| w[1].max_length > 0.0)
            .map(|w| w[0].max_length / w[1].max_length)
            .collect();
        if ratios.is_empty() {
            return Ok(Outcome::new(
                false,
                format!("case {case}: trace has a single stage"),
            ));
        }
        worst_ratio = worst_ratio.max((median(ratios) / lambda - 1.0).abs());
    }
    Ok(Outcome::new(
        worst_bound <= 1.01 && worst_ratio <= 0.05,
        format!("max length/(C/lambda^n) = {worst_bound:.4}, max |ratio/lambda - 1| = {worst_ratio:.2e}"),
    ))
}

fn random_circle(rng: &mut ChaCha8Rng) -> Arc<MultivaluedSystem> {
    match rng.gen_range(0..4) {
        0 => circle(2, 0.0),
        1 => circle(3, 0.0),
        2 => circle(2, 0.3),
        _ => circle(3, 0.5),
    }
}

/// Circle half of criterion 2: 50 genuine orbits and 50 refined reruns.
pub fn idempotence() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_fixed, mut worst_refined) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let sys = random_circle(&mut rng);
        let orbit = sample_orbit(&sys, &mut rng, 50);
        let hpo = HomotopyPseudoOrbit::from_orbit(&sys, &orbit);
        let (out, _, _) = shadow_expanding(&sys, &hpo, TOL)?;
        worst_fixed = worst_fixed.max(orbit_distance(&sys.x1, &out, &orbit) / orbit.defect_tol);
    }
    for _ in 0..50 {
        let sys = random_circle(&mut rng);
        let hpo = random_hpo(&sys, &mut rng, 50, 0.1)?;
        let (a, _, _) = shadow_expanding(&sys, &hpo, TOL)?;
        let (b, _, _) = shadow_expanding(&sys, &hpo.refine(4), TOL)?;
        worst_refined = worst_refined.max(orbit_distance(&sys.x1, &a, &b));
    }
    Ok(Outcome::new(
        worst_fixed <= 1.0 && worst_refined <= 2.0 * TOL,
        format!(
            "circle: orbit moved {worst_fixed:.2e} x defect-tol, refinement moved {worst_refined:.2e}"
        ),
    ))
}

/// Largest distance from `f(x_i)` over the common indices of `x` and its image.
fn deviation(orbit: &Orbit, image: &Orbit, f: impl Fn(f64) -> f64) -> Option<f64> {
    let lo = orbit.start.max(image.start);
    let hi = orbit.last_index().min(image.last_index());
    if hi < lo {
        return None;
    }
    (lo..=hi)
        .map(|i| {
            let x = orbit.get(i)?.as_real()?;
            let y = image.get(i)?.as_real()?;
            Some(circle_dist(f(x), y))
        })
        .try_fold(0.0f64, |m, d| Some(m.max(d?)))
}

pub fn degree_three_self_conjugacies() -> Result<Outcome> {
    let sys = circle(3, 0.0);
    let identity = HomotopySemiConjugacy::identity(sys.clone());
    let half = half_rotation_hsc(sys.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_id, mut worst_half) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let orbit = sample_orbit(&sys, &mut rng, 60);
        let a = induced_map_expanding(&identity, &orbit, TOL)?;
        let b = induced_map_expanding(&half, &orbit, TOL)?;
        match (
            deviation(&orbit, &a, |x| x),
            deviation(&orbit, &b, |x| x + 0.5),
        ) {
            (Some(da), Some(db)) => {
                worst_id = worst_id.max(da);
                worst_half = worst_half.max(db);
            }
            _ => return Ok(Outcome::new(false, "an induced orbit window is empty")),
        }
    }
    Ok(Outcome::new(
        worst_id <= TOL && worst_half <= TOL,
        format!("|h(x) - x| <= {worst_id:.2e}, |h(x) - (x + 1/2)| <= {worst_half:.2e}"),
    ))
}

/// Doubling-map pseudo-orbit through the arc centres `s/2 + 1/4` of `word`.
fn symbol_hpo(sys: &MultivaluedSystem, word: &[usize]) -> Result<HomotopyPseudoOrbit> {
    let points: Vec<Point> = word
        .iter()
        .map(|&s| Point::Real(s as f64 / 2.0 + 0.25))
        .collect();
    let paths = points
        .windows(2)
        .map(|w| {
            let a = image(sys, w[0].as_real().expect("circle point"));
            let d = w[1].as_real().expect("circle point") - a;
            PolyPath::segment(
                sys.x0.clone(),
                Point::Real(a),
                Point::Real(a + d - d.round()),
            )
        })
        .collect();
    HomotopyPseudoOrbit::new(sys, WindowKind::Forward, 0, points, paths)
}

/// Eventually periodic binary word with both symbols in the period.
fn random_word(rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
    let prefix: Vec<usize> = (0..rng.gen_range(0..=3))
        .map(|_| rng.gen_range(0..2))
        .collect();
    loop {
        let period: Vec<usize> = (0..rng.gen_range(2..=8))
            .map(|_| rng.gen_range(0..2))
            .collect();
        if period.contains(&0) && period.contains(&1) {
            return (prefix, period);
        }
    }
}

fn trace_of_power(a: &[Vec<u64>], n: usize) -> u64 {
    let m = a.len();
    let mut p = a.to_vec();
    for _ in 1..n {
        p = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| (0..m).map(|k| p[i][k] * a[k][j]).sum())
                    .collect()
            })
            .collect();
    }
    (0..m).map(|i| p[i][i]).sum()
}

pub fn symbolic_oracle() -> Result<Outcome> {
    let sys = circle(2, 0.0);
    let partition = MarkovPartition::new(2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = 0;
    let mut compared = 0;
    for _ in 0..100 {
        let (prefix, period) = random_word(&mut rng);
        let word: Vec<usize> = prefix
            .iter()
            .copied()
            .chain(period.iter().copied().cycle())
            .take(64)
            .collect();
        let (shadow, _, _) = shadow_expanding(&sys, &symbol_hpo(&sys, &word)?, TOL)?;
        let mut x = decode_symbols(2, &prefix, &period)?;
        let mut exact = Vec::with_capacity(shadow.len());
        for _ in 0..shadow.len() {
            exact.push(Point::Real(x));
            x = wrap01(2.0 * x);
        }
        let coded = code_orbit(&sys, &partition, &shadow)?;
        let decoded = code_orbit(&sys, &partition, &Orbit::forward(exact))?;
        compared += coded.len();
        if shadow.is_empty()
            || shadow.start != 0
            || coded != decoded
            || coded != word[..coded.len()]
        {
            mismatches += 1;
        }
    }
    let mut graph_failures = 0;
    for _ in 0..200 {
        let v = rng.gen_range(1..=6);
        let mut edges = Vec::new();
        for s in 0..v {
            for t in 0..v {
                for _ in 0..[0, 0, 0, 1, 1, 2][rng.gen_range(0..6)] {
                    edges.push((s, t));
                }
            }
        }
        if edges.is_empty() {
            edges.push((0, 0));
        }
        let g = graph_system(v, edges)?;
        for n in 1..=8 {
            if enumerate_periodic(&g, n)?.len() as u64 != trace_of_power(&g.adjacency(), n) {
                graph_failures += 1;
            }
        }
    }
    Ok(Outcome::new(
        mismatches == 0 && graph_failures == 0,
        format!(
            "{mismatches}/100 coding mismatches over {compared} symbols, \
             {graph_failures}/1600 periodic-count mismatches"
        ),
    ))
}

fn bump(p: Point, d: f64) -> Point {
    Point::Real(p.as_real().expect("circle point") + d)
}

/// `h` with `G` and `H` pushed off and back by bumps vanishing at `t = 0, 1`.
fn wiggle(h: &HomotopySemiConjugacy, amp: f64) -> HomotopySemiConjugacy {
    let (g, hh) = (h.g.clone(), h.h.clone());
    HomotopySemiConjugacy::new(
        h.source.clone(),
        h.target.clone(),
        h.h0.clone(),
        h.h1.clone(),
        Arc::new(move |x: &Point, t: f64| bump(g(x, t), amp * (PI * t).sin())),
        Arc::new(move |x: &Point, t: f64| bump(hh(x, t), -0.7 * amp * (2.0 * PI * t).sin())),
    )
}

pub fn functoriality() -> Result<Outcome> {
    let sys = circle(3, 0.0);
    let (mid, end) = (circle(3, 0.3), circle(3, 0.5));
    let half = half_rotation_hsc(sys.clone())?;
    let twice = compose_hsc(&half, &half)?;
    let first = circle_interpolation_hsc(sys.clone(), mid.clone())?;
    let second = circle_interpolation_hsc(mid, end.clone())?;
    let chain = compose_hsc(&second, &first)?;
    let wiggles = [
        (half.clone(), wiggle(&half, 0.3)),
        (first.clone(), wiggle(&first, 0.2)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_compose = [0.0f64; 2];
    let mut worst_wiggle = 0.0f64;
    for _ in 0..50 {
        let orbit = sample_orbit(&sys, &mut rng, 90);
        let pairs = [
            (induced_map_expanding(&twice, &orbit, TOL)?, {
                let once = induced_map_expanding(&half, &orbit, TOL)?;
                induced_map_expanding(&half, &once, TOL)?
            }),
            (induced_map_expanding(&chain, &orbit, TOL)?, {
                let once = induced_map_expanding(&first, &orbit, TOL)?;
                induced_map_expanding(&second, &once, TOL)?
            }),
        ];
        for (k, (a, b)) in pairs.iter().enumerate() {
            if a.is_empty() || b.is_empty() {
                return Ok(Outcome::new(false, "an induced orbit window is empty"));
            }
            worst_compose[k] = worst_compose[k].max(orbit_distance(&end.x1, a, b));
        }
        for (plain, wiggled) in &wiggles {
            let a = induced_map_expanding(plain, &orbit, TOL)?;
            let b = induced_map_expanding(wiggled, &orbit, TOL)?;
            worst_wiggle = worst_wiggle.max(orbit_distance(&sys.x1, &a, &b));
        }
    }
    Ok(Outcome::new(
        worst_compose.iter().all(|&d| d <= 3.0 * TOL) && worst_wiggle <= 2.0 * TOL,
        format!(
            "composite vs composed {:.2e} (half-rotation twice), {:.2e} (interpolation chain), \
             wiggled vs plain {worst_wiggle:.2e}",
            worst_compose[0], worst_compose[1]
        ),
    ))
}
