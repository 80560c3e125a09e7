//! Expanding systems, covering path lifting and one-sided homotopy shadowing.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hsc::{apply_hsc, HomotopySemiConjugacy};
use crate::orbit::{HomotopyPseudoOrbit, Orbit};
use crate::path::{PolyPath, JOIN_TOL};
use crate::space::{circle_dist, Metric, Point, Space};
use crate::system::{
    CertificateMethod, ExpansionCertificate, Family, MultivaluedSystem, Perturbation,
};
use crate::trace::{ShadowTrace, StageRecord};

/// Default shadowing tolerance for circle systems.
pub const CIRCLE_TOL: f64 = 1e-10;
/// Default shadowing tolerance for polynomial systems.
pub const POLYNOMIAL_TOL: f64 = 1e-8;
/// Radius of the hole cut around the critical value of a polynomial system.
pub const CRITICAL_HOLE: f64 = 0.5;
/// Grid used for sampled polynomial certificates.
pub const POLYNOMIAL_GRID: usize = 160;
/// Smallest expansion factor a sampled certificate accepts.
pub const MIN_LAMBDA: f64 = 1.01;

pub fn default_tol(system: &MultivaluedSystem) -> f64 {
    match system.family {
        Family::Circle { .. } => CIRCLE_TOL,
        _ => POLYNOMIAL_TOL,
    }
}

/// `x -> d x + eps g(x)` on the circle with the analytic certificate `lambda = d - eps`.
pub fn make_circle_system(
    degree: u32,
    epsilon: f64,
    perturbation: Perturbation,
) -> Result<MultivaluedSystem> {
    if degree < 2 {
        return Err(Error::Input(format!(
            "degree must be at least 2, got {degree}"
        )));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::Input(format!(
            "perturbation amplitude must be nonnegative, got {epsilon}"
        )));
    }
    let lambda = degree as f64 - epsilon;
    if !(lambda > 1.0) {
        return Err(Error::Certificate(format!(
            "lambda = d - eps = {lambda} is not above 1"
        )));
    }
    Ok(MultivaluedSystem {
        x0: Space::Circle,
        x1: Space::Circle,
        family: Family::Circle {
            degree,
            epsilon,
            perturbation,
        },
        certificate: Some(ExpansionCertificate {
            lambda,
            delta: 0.5,
            method: CertificateMethod::Analytic,
        }),
    })
}

fn poincare_density(z: Complex64, r: f64) -> f64 {
    2.0 * r / (r * r - z.norm_sqr())
}

/// `z -> z^2 + c` from `X1 = p^-1(X0) ∩ X0` to `X0`, where `X0` is the disk of radius `radius`
/// with a hole of radius one half around the critical value.
///
/// The certificate is the least expansion factor of `p` over a grid of X1 in the chosen metric.
pub fn make_polynomial_system(
    c: Complex64,
    radius: f64,
    metric: Metric,
) -> Result<MultivaluedSystem> {
    let escape = 1.0 + (1.0 + c.norm()).sqrt();
    if !(radius >= escape) {
        return Err(Error::Input(format!(
            "radius {radius} is below the escape radius {escape}"
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let x0 = Space::HoledDisk {
        center: zero,
        radius,
        hole_center: c,
        hole_radius: CRITICAL_HOLE,
        metric,
    };
    let mut system = MultivaluedSystem {
        x0: x0.clone(),
        x1: x0,
        family: Family::Quadratic { c },
        certificate: None,
    };
    let g = POLYNOMIAL_GRID;
    let mut lambda = f64::INFINITY;
    let mut min_abs = f64::INFINITY;
    for a in 0..g {
        for b in 0..g {
            let z = Complex64::new(
                radius * (2.0 * (a as f64 + 0.5) / g as f64 - 1.0),
                radius * (2.0 * (b as f64 + 0.5) / g as f64 - 1.0),
            );
            if !system.contains_x1(&Point::Complex(z)) {
                continue;
            }
            let w = z * z + c;
            let factor = match metric {
                Metric::Euclidean => 2.0 * z.norm(),
                Metric::Poincare => {
                    2.0 * z.norm() * poincare_density(w, radius) / poincare_density(z, radius)
                }
            };
            lambda = lambda.min(factor);
            min_abs = min_abs.min(z.norm());
        }
    }
    if !(lambda > MIN_LAMBDA) {
        return Err(Error::Certificate(format!(
            "sampled expansion {lambda} is not above {MIN_LAMBDA}"
        )));
    }
    system.certificate = Some(ExpansionCertificate {
        lambda,
        delta: 0.5 * min_abs,
        method: CertificateMethod::Sampled {
            grid: g,
            margin: lambda - MIN_LAMBDA,
        },
    });
    Ok(system)
}

fn certificate(system: &MultivaluedSystem) -> Result<&ExpansionCertificate> {
    system
        .certificate
        .as_ref()
        .filter(|c| c.lambda > 1.0)
        .ok_or_else(|| Error::Certificate("the system carries no expansion certificate".into()))
}

fn newton_real(f: impl Fn(f64) -> (f64, f64), mut x: f64) -> Option<f64> {
    for _ in 0..100 {
        let (r, d) = f(x);
        if r.abs() <= 1e-15 * (1.0 + x.abs()) {
            return Some(x);
        }
        let step = r / d;
        x -= step;
        if step.abs() <= 4e-16 * (1.0 + x.abs()) {
            return Some(x);
        }
    }
    None
}

fn newton_complex(c: Complex64, w: Complex64, mut z: Complex64) -> Option<Complex64> {
    for _ in 0..100 {
        let r = z * z + c - w;
        if r.norm() <= 1e-15 * (1.0 + w.norm()) {
            return Some(z);
        }
        if z.norm() == 0.0 {
            return None;
        }
        let step = r / (2.0 * z);
        z -= step;
        if step.norm() <= 4e-16 * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    None
}

/// The lift `beta` of `path` through `sigma` with `beta(0) = base`.
pub fn lift_path(system: &MultivaluedSystem, path: &PolyPath, base: &Point) -> Result<PolyPath> {
    let cert = certificate(system)?;
    let step = cert.delta * cert.lambda.min(1e6) / 4.0;
    let s0 = system.sigma(base);
    let gap = system.x0.distance(&s0, &path.start());
    if !(gap <= JOIN_TOL) {
        return Err(Error::EndpointMismatch { index: 0, gap });
    }
    match &system.family {
        Family::Circle {
            degree,
            epsilon,
            perturbation,
        } => {
            let d = *degree as f64;
            let lift = |x: f64| d * x + epsilon * perturbation.value(x);
            let dlift = |x: f64| d + epsilon * perturbation.derivative(x);
            let b = base.re();
            let shift = (lift(b) - path.start().re()).round();
            let mut x = b;
            let mut out = vec![Point::Real(b)];
            for (k, w) in path.vertices.windows(2).enumerate() {
                let (a, e) = (w[0].re() + shift, w[1].re() + shift);
                let pieces = ((e - a).abs() / step).ceil().max(1.0) as usize;
                for j in 1..=pieces {
                    let target = a + (e - a) * j as f64 / pieces as f64;
                    x = newton_real(|t| (lift(t) - target, dlift(t)), x).ok_or_else(|| {
                        Error::Numerical(format!("lift did not converge on segment {k}"))
                    })?;
                    out.push(Point::Real(x));
                }
            }
            Ok(PolyPath {
                space: system.x1.clone(),
                vertices: out,
            })
        }
        Family::Quadratic { c } => {
            let mut z = base.z();
            let mut out = vec![Point::Complex(z)];
            for (k, w) in path.vertices.windows(2).enumerate() {
                let (a, e) = (w[0].z(), w[1].z());
                let pieces = ((e - a).norm() / step).ceil().max(1.0) as usize;
                for j in 1..=pieces {
                    let target = a + (e - a) * (j as f64 / pieces as f64);
                    let next = newton_complex(*c, target, z).ok_or_else(|| {
                        Error::Numerical(format!("lift did not converge on segment {k}"))
                    })?;
                    if (next - z).norm() > 2.0 * step {
                        return Err(Error::Numerical(format!(
                            "lift jumped branches on segment {k}"
                        )));
                    }
                    z = next;
                    out.push(Point::Complex(z));
                }
            }
            Ok(PolyPath {
                space: system.x1.clone(),
                vertices: out,
            })
        }
        Family::Graph(_) => {
            if !path.is_constant() {
                return Err(Error::Input(
                    "paths in a discrete space must be constant".into(),
                ));
            }
            Ok(PolyPath::constant(system.x1.clone(), *base))
        }
        _ => Err(Error::Unsupported("path lifting for this family".into())),
    }
}

/// Shadow a one-sided homotopy pseudo-orbit of a certified expanding system.
///
/// Every stage lifts each path from the point before it, moves that point to the end of the
/// lift and loses the last index of the window. Returns the orbit, the accumulated homotopy
/// from the input points to the orbit points and the per-stage record.
pub fn shadow_expanding(
    system: &MultivaluedSystem,
    hpo: &HomotopyPseudoOrbit,
    tol: f64,
) -> Result<(Orbit, Vec<PolyPath>, ShadowTrace)> {
    let cert = certificate(system)?;
    if hpo.points.is_empty() {
        return Err(Error::Input("empty homotopy pseudo-orbit".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    for (k, p) in hpo.points.iter().enumerate() {
        if !system.x1.accepts_kind(p) || !system.contains_x1(p) {
            return Err(Error::Domain {
                index: hpo.start + k as i64,
            });
        }
    }
    let c = hpo.paths.iter().map(PolyPath::length).fold(0.0, f64::max);
    let budget = if c < tol {
        0
    } else {
        ((c / tol).ln() / cert.lambda.ln()).ceil() as usize + 5
    };

    let mut points = hpo.points.clone();
    let mut paths = hpo.paths.clone();
    let mut homotopy: Vec<PolyPath> = points
        .iter()
        .map(|p| PolyPath::constant(system.x1.clone(), *p))
        .collect();
    let mut trace = ShadowTrace::default();
    let mut max_len = c;
    trace.push(StageRecord {
        stage: 0,
        max_length: max_len,
        max_defect: system.max_defect(&points),
        split: None,
        start: hpo.start,
        points: points.clone(),
    });
    let mut stage = 0;
    while max_len >= tol {
        if stage >= budget {
            return Err(Error::Budget {
                stages: stage,
                max_length: max_len,
            });
        }
        let lifts: Vec<PolyPath> = (0..paths.len())
            .into_par_iter()
            .map(|k| {
                lift_path(system, &paths[k], &points[k]).map_err(|e| match e {
                    Error::EndpointMismatch { gap, .. } => Error::EndpointMismatch {
                        index: hpo.start + k as i64 + 1,
                        gap,
                    },
                    other => other,
                })
            })
            .collect::<Result<_>>()?;
        points = lifts.iter().map(PolyPath::end).collect();
        paths = lifts[1..]
            .iter()
            .map(|b| b.map(system.x0.clone(), |p| system.iota(p)))
            .collect();
        homotopy.truncate(lifts.len());
        for (h, b) in homotopy.iter_mut().zip(&lifts) {
            *h = h.concat(b)?;
        }
        stage += 1;
        if paths.is_empty() {
            return Err(Error::Budget {
                stages: stage,
                max_length: max_len,
            });
        }
        max_len = paths.iter().map(PolyPath::length).fold(0.0, f64::max);
        trace.push(StageRecord {
            stage,
            max_length: max_len,
            max_defect: system.max_defect(&points),
            split: None,
            start: hpo.start,
            points: points.clone(),
        });
    }
    for (k, p) in points.iter().enumerate() {
        if !system.contains_x1(p) {
            return Err(Error::Domain {
                index: hpo.start + k as i64,
            });
        }
    }
    Ok((
        Orbit::new(hpo.kind, hpo.start, points, tol),
        homotopy,
        trace,
    ))
}

/// `lambda (C + C') / (lambda - 1)`.
pub fn uniqueness_radius(lambda: f64, c: f64, c_prime: f64) -> Result<f64> {
    if !(lambda > 1.0) {
        return Err(Error::Input(format!("lambda must exceed 1, got {lambda}")));
    }
    Ok(lambda * (c + c_prime) / (lambda - 1.0))
}

/// `h^inf(x)`: the orbit of the target shadowing the image of `orbit` under `hsc`.
pub fn induced_map_expanding(
    hsc: &HomotopySemiConjugacy,
    orbit: &Orbit,
    tol: f64,
) -> Result<Orbit> {
    certificate(&hsc.target)?;
    let hpo = HomotopyPseudoOrbit::from_orbit(&hsc.source, orbit);
    let image = apply_hsc(hsc, &hpo)?;
    Ok(shadow_expanding(&hsc.target, &image, tol)?.0)
}

fn circle_params(system: &MultivaluedSystem) -> Result<(u32, f64, Perturbation)> {
    match system.family {
        Family::Circle {
            degree,
            epsilon,
            perturbation,
        } => Ok((degree, epsilon, perturbation)),
        _ => Err(Error::Input("a circle system is required".into())),
    }
}

/// `(id, x + 1/2; G, H)` on a linear circle map of odd degree, with `G(x, t) = sigma(x) + t/2`
/// and `H(x, t) = x + t/2`.
pub fn half_rotation_hsc(system: Arc<MultivaluedSystem>) -> Result<HomotopySemiConjugacy> {
    let (degree, epsilon, _) = circle_params(&system)?;
    if degree % 2 == 0 || epsilon != 0.0 {
        return Err(Error::Input(format!(
            "x + 1/2 commutes only with linear maps of odd degree, got degree {degree}, eps {epsilon}"
        )));
    }
    let d = degree as f64;
    Ok(HomotopySemiConjugacy::new(
        system.clone(),
        system,
        Arc::new(|p| *p),
        Arc::new(|p| Point::Real(p.re() + 0.5)),
        Arc::new(move |p, t| Point::Real(d * p.re() + 0.5 * t)),
        Arc::new(|p, t| Point::Real(p.re() + 0.5 * t)),
    ))
}

/// `(id, id; G, id)` between circle maps of equal degree, with `G` the straight-line homotopy
/// between the two lifts.
pub fn circle_interpolation_hsc(
    source: Arc<MultivaluedSystem>,
    target: Arc<MultivaluedSystem>,
) -> Result<HomotopySemiConjugacy> {
    let (d0, _, _) = circle_params(&source)?;
    let (d1, _, _) = circle_params(&target)?;
    if d0 != d1 {
        return Err(Error::Input(format!("degrees {d0} and {d1} differ")));
    }
    let (s, t_sys) = (source.clone(), target.clone());
    Ok(HomotopySemiConjugacy::new(
        source,
        target,
        Arc::new(|p| *p),
        Arc::new(|p| *p),
        Arc::new(move |p, t| {
            let a = s.sigma(p).re();
            let b = t_sys.sigma(p).re();
            Point::Real(a + (b - a) * t)
        }),
        Arc::new(|p, _| *p),
    ))
}

/// Largest circle or planar distance between two orbits on their common indices.
pub fn orbit_distance(space: &Space, a: &Orbit, b: &Orbit) -> f64 {
    let lo = a.start.max(b.start);
    let hi = a.last_index().min(b.last_index());
    (lo..=hi)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(Point::Real(s)), Some(Point::Real(t))) => circle_dist(*s, *t),
            (Some(p), Some(q)) => space.distance(p, q),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}
