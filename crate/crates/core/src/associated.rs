//! Associated expanding systems of Hénon systems, the homotopy equivalence between the two and
//! the resulting identification of orbit spaces.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expanding::shadow_expanding;
use crate::hsc::{apply_hsc, HomotopySemiConjugacy};
use crate::hyperbolic::{shadow_hyperbolic, CrossedSystem, HenonParams};
use crate::orbit::{HomotopyPseudoOrbit, Orbit, WindowKind};
use crate::path::PolyPath;
use crate::space::{Point, Space};
use crate::system::{CertificateMethod, ExpansionCertificate, Family, MultivaluedSystem};

/// A bi-infinite orbit window of an associated expanding system.
pub type InverseLimitOrbit = Orbit;

/// `sigma_{y0}(x) = pi_x f(x, y0) = x^2 + c - b y0` on the x factor.
#[derive(Clone, Debug)]
pub struct AssociatedSystem {
    pub parent: CrossedSystem,
    pub y0: Complex64,
    pub system: MultivaluedSystem,
}

impl AssociatedSystem {
    /// The constant of `sigma_{y0}`.
    pub fn c_prime(&self) -> Complex64 {
        self.parent.params.c - self.parent.params.b * self.y0
    }

    pub fn sigma(&self, x: Complex64) -> Complex64 {
        x * x + self.c_prime()
    }
}

fn shrink(space: &Space, r: f64) -> Space {
    match space.clone() {
        Space::PlanarDisk {
            center,
            radius,
            metric,
        } => Space::PlanarDisk {
            center,
            radius: radius.min(r),
            metric,
        },
        Space::HoledDisk {
            center,
            radius,
            hole_center,
            hole_radius,
            metric,
        } => Space::HoledDisk {
            center,
            radius: radius.min(r),
            hole_center,
            hole_radius,
            metric,
        },
        other => other,
    }
}

pub fn associated_expanding(parent: &CrossedSystem, y0: Complex64) -> Result<AssociatedSystem> {
    let p = parent.params;
    if !p.y_space().contains_planar(y0) {
        return Err(Error::Input(format!(
            "y0 = {y0} lies outside the y factor of radius {}",
            p.ry
        )));
    }
    let c_prime = p.c - p.b * y0;
    let x0 = p.x_space();
    let x1 = shrink(&x0, p.ry);
    let inner = (c_prime.norm() - p.rx)
        .max(0.0)
        .sqrt()
        .max(p.rx_inner.unwrap_or(0.0))
        .max(0.05);
    let system = MultivaluedSystem {
        x0,
        x1,
        family: Family::Quadratic { c: c_prime },
        certificate: Some(ExpansionCertificate {
            lambda: parent.lambda,
            delta: 0.5 * inner,
            method: match &parent.system.certificate {
                Some(c) => c.method.clone(),
                None => CertificateMethod::Analytic,
            },
        }),
    };
    Ok(AssociatedSystem {
        parent: parent.clone(),
        y0,
        system,
    })
}

/// `k = (tau, tau; G', H')` from the associated system to the Hénon system, with
/// `G'_t(x) = (sigma(x), (1 - t) y0 + t x)` and `H'_t(x) = (x, y0)`.
pub fn k_hsc(a: &AssociatedSystem) -> HomotopySemiConjugacy {
    let y0 = a.y0;
    let c = a.c_prime();
    let tau = move |p: &Point| Point::Pair(p.z(), y0);
    HomotopySemiConjugacy::new(
        Arc::new(a.system.clone()),
        Arc::new(a.parent.system.clone()),
        Arc::new(tau),
        Arc::new(tau),
        Arc::new(move |p, t| {
            let x = p.z();
            Point::Pair(x * x + c, y0 * (1.0 - t) + x * t)
        }),
        Arc::new(move |p, _| tau(p)),
    )
}

/// The point `x'` near `x` with `sigma_{y0}(x') = pi_x f(x, y)`.
fn fibre_projection(b: Complex64, y0: Complex64, x: Complex64, y: Complex64) -> Complex64 {
    let r = (x * x - b * y + b * y0).sqrt();
    if (r - x).norm() <= (r + x).norm() {
        r
    } else {
        -r
    }
}

/// `h = (pi_x, h1; G, H)` from the Hénon system to the associated system, where `h1` slides
/// `(x, y)` along the fibre of `pi_x f` to height `y0`, `G` is constant at `pi_x f` and `H` is
/// the segment from `x` to `h1(x, y)`.
pub fn h_hsc(a: &AssociatedSystem) -> HomotopySemiConjugacy {
    let (y0, params) = (a.y0, a.parent.params);
    let h1 = move |p: &Point| {
        let (x, y) = p.xy();
        Point::Complex(fibre_projection(params.b, y0, x, y))
    };
    HomotopySemiConjugacy::new(
        Arc::new(a.parent.system.clone()),
        Arc::new(a.system.clone()),
        Arc::new(|p| Point::Complex(p.xy().0)),
        Arc::new(h1),
        Arc::new(move |p, _| {
            let (x, y) = p.xy();
            Point::Complex(params.forward(x, y).0)
        }),
        Arc::new(move |p, t| {
            let x = p.xy().0;
            let target = h1(p).z();
            Point::Complex(x + (target - x) * t)
        }),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    ToHenon,
    FromHenon,
}

/// `k^inf`: an inverse-limit orbit window to the Hénon orbit shadowing its image.
pub fn to_henon(a: &AssociatedSystem, orbit: &InverseLimitOrbit, tol: f64) -> Result<Orbit> {
    let hpo = HomotopyPseudoOrbit::from_orbit(&a.system, orbit);
    let image = apply_hsc(&k_hsc(a), &hpo)?;
    Ok(shadow_hyperbolic(&a.parent, &image, tol)?.0)
}

/// Most forward iterates of `f` appended to a Hénon window by [`from_henon`].
pub const FORWARD_EXTENSION: usize = 48;

/// Append up to `steps` forward iterates while they stay in X1.
pub fn extend_forward(params: &HenonParams, orbit: &Orbit, steps: usize) -> Orbit {
    let mut out = orbit.clone();
    for _ in 0..steps {
        let Some((x, y)) = out.points.last().and_then(Point::as_pair) else {
            break;
        };
        let (u, v) = params.forward(x, y);
        if !params.in_x1(u, v) {
            break;
        }
        out.points.push(Point::Pair(u, v));
    }
    out
}

/// `h^inf`: a Hénon orbit window to the inverse-limit orbit shadowing its image.
///
/// The window is first extended by forward iterates of `f`, so the forward run consumes those
/// instead of the right end of the input window when the orbit stays in the box.
pub fn from_henon(a: &AssociatedSystem, orbit: &Orbit, tol: f64) -> Result<InverseLimitOrbit> {
    let long = extend_forward(&a.parent.params, orbit, FORWARD_EXTENSION);
    let hpo = HomotopyPseudoOrbit::from_orbit(&a.parent.system, &long);
    let image = apply_hsc(&h_hsc(a), &hpo)?;
    let (out, _, _) = shadow_expanding(&a.system, &image, tol)?;
    let mut out = out.restrict(orbit.start, orbit.last_index());
    out.kind = WindowKind::BiInfinite;
    Ok(out)
}

pub fn inverse_limit_conjugacy(
    a: &AssociatedSystem,
    direction: Direction,
    orbit: &Orbit,
    tol: f64,
) -> Result<Orbit> {
    match direction {
        Direction::ToHenon => to_henon(a, orbit, tol),
        Direction::FromHenon => from_henon(a, orbit, tol),
    }
}

/// Largest distance between two orbit windows on their common indices.
pub fn window_distance(space: &Space, a: &Orbit, b: &Orbit) -> Result<f64> {
    let lo = a.start.max(b.start);
    let hi = a.last_index().min(b.last_index());
    if hi < lo {
        return Err(Error::Input("the orbit windows do not overlap".into()));
    }
    Ok((lo..=hi)
        .map(|i| space.distance(a.get(i).expect("window"), b.get(i).expect("window")))
        .fold(0.0, f64::max))
}

/// Residual of `F(shift x) = shift F(x)` on the common indices of the two sides.
pub fn conjugacy_residual(
    space: &Space,
    map: impl Fn(&Orbit) -> Result<Orbit>,
    orbit: &Orbit,
) -> Result<f64> {
    let lhs = map(&crate::orbit::shift_orbit(orbit)?)?;
    let rhs = crate::orbit::shift_orbit(&map(orbit)?)?;
    window_distance(space, &lhs, &rhs)
}

/// `h_{y0 -> y1} = (id, id; sigma_{y(t)}, id)` along the segment from `y0` to `y1`.
pub fn y0_homotopy(a0: &AssociatedSystem, a1: &AssociatedSystem) -> HomotopySemiConjugacy {
    let (c, b) = (a0.parent.params.c, a0.parent.params.b);
    let (y0, y1) = (a0.y0, a1.y0);
    HomotopySemiConjugacy::new(
        Arc::new(a0.system.clone()),
        Arc::new(a1.system.clone()),
        Arc::new(|p| *p),
        Arc::new(|p| *p),
        Arc::new(move |p, t| {
            let x = p.z();
            let y = y0 * (1.0 - t) + y1 * t;
            Point::Complex(x * x + c - b * y)
        }),
        Arc::new(|p, _| *p),
    )
}

/// Largest distance, over the samples, between the induced map of [`y0_homotopy`] and the
/// identification `h_{y1}^inf k_{y0}^inf` through the Hénon orbit space.
pub fn y0_independence(
    parent: &CrossedSystem,
    y0: Complex64,
    y1: Complex64,
    samples: &[InverseLimitOrbit],
    tol: f64,
) -> Result<f64> {
    let a0 = associated_expanding(parent, y0)?;
    let a1 = associated_expanding(parent, y1)?;
    if y0 == y1 {
        return Ok(0.0);
    }
    let hsc = y0_homotopy(&a0, &a1);
    let devs: Vec<f64> = samples
        .par_iter()
        .map(|orbit| {
            let hpo = HomotopyPseudoOrbit::from_orbit(&a0.system, orbit);
            let direct = shadow_expanding(&a1.system, &apply_hsc(&hsc, &hpo)?, tol)?.0;
            let through = from_henon(&a1, &to_henon(&a0, orbit, tol)?, tol)?;
            window_distance(&a1.system.x0, &direct, &through)
        })
        .collect::<Result<_>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

/// The orbit of the associated system on `[-half_width, half_width]` that follows the periodic
/// itinerary `symbols`, symbol `s` at index `i` choosing the preimage `(-1)^s sqrt(-c')` of 0.
///
/// Requires the two preimages of 0 to be the centres of the two pieces of X1, as for the
/// horseshoe parameters.
pub fn itinerary_orbit(
    a: &AssociatedSystem,
    symbols: &[usize],
    half_width: usize,
    tol: f64,
) -> Result<InverseLimitOrbit> {
    if symbols.is_empty() || symbols.iter().any(|&s| s > 1) {
        return Err(Error::Input(
            "itineraries are nonempty words in {0, 1}".into(),
        ));
    }
    let root = (-a.c_prime()).sqrt();
    let cert = a
        .system
        .certificate
        .as_ref()
        .expect("associated systems are certified");
    let extra = ((2.0 * root.norm() / tol).ln() / cert.lambda.ln()).ceil() as usize + 8;
    let n = 2 * half_width + 1 + extra;
    let start = -(half_width as i64);
    let pick = |i: usize| {
        let s = symbols[(i as i64 + start).rem_euclid(symbols.len() as i64) as usize];
        Point::Complex(if s == 0 { root } else { -root })
    };
    let points: Vec<Point> = (0..n).map(pick).collect();
    let paths = points
        .windows(2)
        .map(|w| PolyPath::segment(a.system.x0.clone(), a.system.sigma(&w[0]), w[1]))
        .collect();
    let hpo = HomotopyPseudoOrbit::new(&a.system, WindowKind::BiInfinite, start, points, paths)?;
    let (orbit, _, _) = shadow_expanding(&a.system, &hpo, tol)?;
    if orbit.last_index() < half_width as i64 {
        return Err(Error::Budget {
            stages: n - orbit.len(),
            max_length: tol,
        });
    }
    Ok(orbit.restrict(start, half_width as i64))
}

/// The cases of the classification of quadratic Hénon maps by parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HenonClass {
    Horseshoe,
    Solenoid,
    Basilica,
    Unclassified,
}

impl HenonClass {
    pub fn name(&self) -> &'static str {
        match self {
            HenonClass::Horseshoe => "horseshoe",
            HenonClass::Solenoid => "solenoid",
            HenonClass::Basilica => "basilica",
            HenonClass::Unclassified => "unclassified",
        }
    }

    /// The model the restriction to the Julia set is conjugate to.
    pub fn model(&self) -> Option<&'static str> {
        match self {
            HenonClass::Horseshoe => Some("full 2-shift"),
            HenonClass::Solenoid => Some("inverse limit of z ↦ z²"),
            HenonClass::Basilica => Some("inverse limit of the basilica"),
            HenonClass::Unclassified => None,
        }
    }
}

/// First matching case among `|c| > 2 (1 + |b|)^2`, `c = 0, |b| < (sqrt 2 - 1) / 2` and
/// `c = -1, |b| < 0.02`.
pub fn classify_henon(c: Complex64, b: Complex64) -> HenonClass {
    let bn = b.norm();
    if c.norm() > 2.0 * (1.0 + bn).powi(2) {
        HenonClass::Horseshoe
    } else if c == Complex64::new(0.0, 0.0) && bn < (2f64.sqrt() - 1.0) / 2.0 {
        HenonClass::Solenoid
    } else if c == Complex64::new(-1.0, 0.0) && bn < 0.02 {
        HenonClass::Basilica
    } else {
        HenonClass::Unclassified
    }
}

#[cfg(test)]
mod tests;
