//! Homotopy semi-conjugacies `(h0, h1; G, H)` and their action on homotopy pseudo-orbits.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::orbit::HomotopyPseudoOrbit;
use crate::path::{PolyPath, JOIN_TOL};
use crate::space::{Point, Space};
use crate::system::{MultivaluedSystem, PointMap};

pub type HomotopyMap = Arc<dyn Fn(&Point, f64) -> Point + Send + Sync>;

/// Default number of polyline pieces used when sampling `G` and `H`.
pub const DEFAULT_SUBDIVISION: usize = 64;

/// Tolerance for the endpoint identities of `G` and `H`.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Clone)]
pub struct HomotopySemiConjugacy {
    pub source: Arc<MultivaluedSystem>,
    pub target: Arc<MultivaluedSystem>,
    pub h0: PointMap,
    pub h1: PointMap,
    /// From `h0(sigma x)` at `t = 0` to `sigma'(h1 x)` at `t = 1`.
    pub g: HomotopyMap,
    /// From `h0(iota x)` at `t = 0` to `iota'(h1 x)` at `t = 1`.
    pub h: HomotopyMap,
    pub subdivision: usize,
}

impl std::fmt::Debug for HomotopySemiConjugacy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomotopySemiConjugacy")
            .field("source", &self.source.family)
            .field("target", &self.target.family)
            .field("subdivision", &self.subdivision)
            .finish()
    }
}

fn magnitude(p: &Point) -> f64 {
    match *p {
        Point::Real(t) => t.abs(),
        Point::Vertex(_) => 0.0,
        Point::Complex(z) => z.norm(),
        Point::Pair(x, y) => x.norm() + y.norm(),
    }
}

impl HomotopySemiConjugacy {
    pub fn new(
        source: Arc<MultivaluedSystem>,
        target: Arc<MultivaluedSystem>,
        h0: PointMap,
        h1: PointMap,
        g: HomotopyMap,
        h: HomotopyMap,
    ) -> HomotopySemiConjugacy {
        HomotopySemiConjugacy {
            source,
            target,
            h0,
            h1,
            g,
            h,
            subdivision: DEFAULT_SUBDIVISION,
        }
    }

    /// `(id, id; sigma, iota)` with constant homotopies.
    pub fn identity(system: Arc<MultivaluedSystem>) -> HomotopySemiConjugacy {
        let s1 = system.clone();
        let s2 = system.clone();
        HomotopySemiConjugacy::new(
            system.clone(),
            system,
            Arc::new(|p| *p),
            Arc::new(|p| *p),
            Arc::new(move |x, _| s1.sigma(x)),
            Arc::new(move |x, _| s2.iota(x)),
        )
    }

    /// Check the four endpoint identities at `x`.
    pub fn check_identities(&self, x: &Point) -> Result<()> {
        let y0 = &self.target.x0;
        let hx = (self.h1)(x);
        let checks = [
            (
                "G(x,0) = h0(sigma x)",
                (self.g)(x, 0.0),
                (self.h0)(&self.source.sigma(x)),
            ),
            (
                "G(x,1) = sigma'(h1 x)",
                (self.g)(x, 1.0),
                self.target.sigma(&hx),
            ),
            (
                "H(x,0) = h0(iota x)",
                (self.h)(x, 0.0),
                (self.h0)(&self.source.iota(x)),
            ),
            (
                "H(x,1) = iota'(h1 x)",
                (self.h)(x, 1.0),
                self.target.iota(&hx),
            ),
        ];
        for (what, a, b) in checks {
            let gap = y0.distance(&a, &b);
            let scale = 1.0 + magnitude(&a).max(magnitude(&b));
            if !(gap <= IDENTITY_TOL * scale) {
                return Err(Error::Certificate(format!("{what} fails by {gap:e}")));
            }
        }
        Ok(())
    }

    fn sample(&self, f: &HomotopyMap, x: &Point) -> PolyPath {
        let k = self.subdivision.max(1);
        let mut vertices: Vec<Point> = (0..=k).map(|j| f(x, j as f64 / k as f64)).collect();
        vertices.dedup();
        PolyPath {
            space: self.target.x0.clone(),
            vertices,
        }
    }

    /// The path `G(x)` sampled at the subdivision resolution.
    pub fn g_path(&self, x: &Point) -> PolyPath {
        self.sample(&self.g, x)
    }

    pub fn h_path(&self, x: &Point) -> PolyPath {
        self.sample(&self.h, x)
    }
}

/// Image `(h1(x), G(x_{i-1})^-1 . h0(alpha_i) . H(x_i))` of a homotopy pseudo-orbit.
pub fn apply_hsc(
    hsc: &HomotopySemiConjugacy,
    input: &HomotopyPseudoOrbit,
) -> Result<HomotopyPseudoOrbit> {
    for p in &input.points {
        hsc.check_identities(p)?;
    }
    let points: Vec<Point> = input.points.iter().map(|p| (hsc.h1)(p)).collect();
    let y0 = hsc.target.x0.clone();
    let mut paths = Vec::with_capacity(input.paths.len());
    for (k, alpha) in input.paths.iter().enumerate() {
        let index = input.start + k as i64 + 1;
        let back = hsc.g_path(&input.points[k]).reversed();
        let mid = alpha.map(y0.clone(), |p| (hsc.h0)(p));
        let fwd = hsc.h_path(&input.points[k + 1]);
        let joined = back
            .concat(&mid)
            .and_then(|p| p.concat(&fwd))
            .map_err(|e| match e {
                Error::EndpointMismatch { gap, .. } => Error::EndpointMismatch { index, gap },
                other => other,
            })?;
        paths.push(joined.dedup());
    }
    let bound = paths.iter().map(PolyPath::length).fold(0.0, f64::max);
    Ok(HomotopyPseudoOrbit {
        kind: input.kind,
        start: input.start,
        points,
        paths,
        bound,
    })
}

fn same_system(a: &MultivaluedSystem, b: &MultivaluedSystem) -> bool {
    a.x0 == b.x0 && a.x1 == b.x1
}

/// Shift the circle point `p` by the integer that moves `anchor` to the lift nearest `a`;
/// other points are returned unchanged.
fn relift(a: &Point, anchor: &Point, p: Point) -> Point {
    match (a, anchor, p) {
        (Point::Real(s), Point::Real(u), Point::Real(t)) => Point::Real(t + (s - u).round()),
        _ => p,
    }
}

/// `kh = (k0 h0, k1 h1; k0 G . G' h1, k0 H . H' h1)`.
pub fn compose_hsc(
    k: &HomotopySemiConjugacy,
    h: &HomotopySemiConjugacy,
) -> Result<HomotopySemiConjugacy> {
    if !same_system(&h.target, &k.source) {
        return Err(Error::Input(
            "space mismatch: target of h is not the source of k".into(),
        ));
    }
    let (k0a, h0a) = (k.h0.clone(), h.h0.clone());
    let (k1a, h1a) = (k.h1.clone(), h.h1.clone());
    let h0: PointMap = Arc::new(move |p| k0a(&h0a(p)));
    let h1: PointMap = Arc::new(move |p| k1a(&h1a(p)));
    let join = |first: HomotopyMap, second: HomotopyMap| -> HomotopyMap {
        let k0 = k.h0.clone();
        let h1 = h.h1.clone();
        Arc::new(move |x, t| {
            let mid = k0(&first(x, 1.0));
            if t <= 0.5 {
                let v = k0(&first(x, 2.0 * t));
                if t == 0.5 {
                    mid
                } else {
                    v
                }
            } else {
                let y = h1(x);
                relift(&mid, &second(&y, 0.0), second(&y, 2.0 * t - 1.0))
            }
        })
    };
    let g = join(h.g.clone(), k.g.clone());
    let hh = join(h.h.clone(), k.h.clone());
    Ok(HomotopySemiConjugacy {
        source: h.source.clone(),
        target: k.target.clone(),
        h0,
        h1,
        g,
        h: hh,
        subdivision: h.subdivision.max(k.subdivision),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum HomotopyCheck {
    Homotopic,
    Violation { index: i64, winding: f64 },
}

/// Total winding of a closed polyline in the plane around `center`.
fn planar_winding(points: &[Complex64], center: Complex64) -> f64 {
    points
        .windows(2)
        .map(|w| ((w[1] - center) / (w[0] - center)).arg())
        .sum::<f64>()
        / (2.0 * PI)
}

fn loop_of(parts: &[PolyPath]) -> Vec<Point> {
    let mut v: Vec<Point> = Vec::new();
    for p in parts {
        v.extend_from_slice(&p.vertices);
    }
    v
}

/// Winding of the closed loop `lhs . rhs^-1` in X0, or `None` when the space is simply connected.
fn loop_winding(space: &Space, lhs: &[PolyPath], rhs: &[PolyPath]) -> Result<Option<f64>> {
    match space {
        Space::Circle => {
            let disp = |ps: &[PolyPath]| -> f64 {
                ps.iter().map(|p| p.displacement().unwrap_or(0.0)).sum()
            };
            Ok(Some(disp(lhs) - disp(rhs)))
        }
        Space::FiniteDiscrete { .. } => {
            for p in lhs.iter().chain(rhs) {
                if !p.is_constant() {
                    return Err(Error::Input("non-constant path in a discrete space".into()));
                }
            }
            Ok(Some(0.0))
        }
        Space::PlanarDisk { .. } => Ok(None),
        Space::HoledDisk { hole_center, .. } => {
            let mut pts: Vec<Complex64> = loop_of(lhs).iter().map(|p| p.z()).collect();
            let back: Vec<PolyPath> = rhs.iter().rev().map(PolyPath::reversed).collect();
            pts.extend(loop_of(&back).iter().map(|p| p.z()));
            Ok(Some(planar_winding(&pts, *hole_center)))
        }
        Space::Product { x, y } => {
            if !x.is_planar() || !y.is_planar() {
                return Err(Error::Unsupported(format!(
                    "homotopy decision in a product of {} and {}",
                    x.kind_name(),
                    y.kind_name()
                )));
            }
            let project =
                |ps: &[PolyPath], f: fn(&Point) -> Complex64, s: &Space| -> Vec<PolyPath> {
                    ps.iter()
                        .map(|p| PolyPath {
                            space: s.clone(),
                            vertices: p.vertices.iter().map(|q| Point::Complex(f(q))).collect(),
                        })
                        .collect()
                };
            let fx: fn(&Point) -> Complex64 = |q| q.xy().0;
            let fy: fn(&Point) -> Complex64 = |q| q.xy().1;
            let wx = loop_winding(x, &project(lhs, fx, x), &project(rhs, fx, x))?;
            let wy = loop_winding(y, &project(lhs, fy, y), &project(rhs, fy, y))?;
            Ok(match (wx, wy) {
                (None, None) => None,
                (a, b) => Some(a.unwrap_or(0.0).abs() + b.unwrap_or(0.0).abs()),
            })
        }
    }
}

/// Decide whether `beta` is a homotopy between the two homotopy pseudo-orbits:
/// `alpha_i . iota(beta_i)` against `sigma(beta_{i-1}) . alpha'_i` for every path index.
pub fn hpo_homotopy_check(
    system: &MultivaluedSystem,
    a: &HomotopyPseudoOrbit,
    b: &HomotopyPseudoOrbit,
    beta: &[PolyPath],
    tol: f64,
) -> Result<HomotopyCheck> {
    if a.start != b.start || a.points.len() != b.points.len() || beta.len() != a.points.len() {
        return Err(Error::Input(
            "windows of the two pseudo-orbits and the homotopy differ".into(),
        ));
    }
    for (k, bk) in beta.iter().enumerate() {
        let ga = system.x1.distance(&bk.start(), &a.points[k]);
        let gb = system.x1.distance(&bk.end(), &b.points[k]);
        if ga.max(gb) > JOIN_TOL {
            return Err(Error::EndpointMismatch {
                index: a.start + k as i64,
                gap: ga.max(gb),
            });
        }
    }
    for k in 0..a.paths.len() {
        let index = a.start + k as i64 + 1;
        let iota_beta = beta[k + 1].map(system.x0.clone(), |p| system.iota(p));
        let sigma_beta = beta[k].map(system.x0.clone(), |p| system.sigma(p));
        let lhs = [a.paths[k].clone(), iota_beta];
        let rhs = [sigma_beta, b.paths[k].clone()];
        if let Some(w) = loop_winding(&system.x0, &lhs, &rhs)? {
            if w.abs() > tol.max(1e-9) {
                return Ok(HomotopyCheck::Violation { index, winding: w });
            }
        }
    }
    Ok(HomotopyCheck::Homotopic)
}
