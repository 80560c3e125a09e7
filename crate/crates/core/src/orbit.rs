use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{PolyPath, JOIN_TOL};
use crate::space::{circle_dist, Point};
use crate::system::MultivaluedSystem;

/// Default tolerance on orbit defects.
pub const DEFAULT_DEFECT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    /// Indices `0, 1, 2, ...` of a one-sided orbit.
    Forward,
    /// A window `[-N, N]` of a bi-infinite orbit.
    BiInfinite,
}

/// Consecutive points `x_start, x_{start+1}, ...` of an orbit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub kind: WindowKind,
    pub start: i64,
    pub points: Vec<Point>,
    pub defect_tol: f64,
}

impl Orbit {
    pub fn new(kind: WindowKind, start: i64, points: Vec<Point>, defect_tol: f64) -> Orbit {
        Orbit {
            kind,
            start,
            points,
            defect_tol,
        }
    }

    pub fn forward(points: Vec<Point>) -> Orbit {
        Orbit::new(WindowKind::Forward, 0, points, DEFAULT_DEFECT_TOL)
    }

    /// Window `[-n, n]` from `2n + 1` points.
    pub fn centered(points: Vec<Point>) -> Orbit {
        let n = (points.len() / 2) as i64;
        Orbit::new(WindowKind::BiInfinite, -n, points, DEFAULT_DEFECT_TOL)
    }

    pub fn last_index(&self) -> i64 {
        self.start + self.points.len() as i64 - 1
    }

    pub fn get(&self, i: i64) -> Option<&Point> {
        if i < self.start {
            return None;
        }
        self.points.get((i - self.start) as usize)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points whose indices lie in `[lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Orbit {
        let lo = lo.max(self.start);
        let hi = hi.min(self.last_index());
        let pts = if hi < lo {
            Vec::new()
        } else {
            self.points[(lo - self.start) as usize..=(hi - self.start) as usize].to_vec()
        };
        Orbit {
            kind: self.kind,
            start: lo,
            points: pts,
            defect_tol: self.defect_tol,
        }
    }
}

/// `y_i = x_{i+1}`; the window loses its last index.
pub fn shift_orbit(orbit: &Orbit) -> Result<Orbit> {
    if orbit.points.len() < 2 {
        return Err(Error::Input(
            "shift needs a window of at least two indices".into(),
        ));
    }
    Ok(Orbit {
        kind: orbit.kind,
        start: orbit.start,
        points: orbit.points[1..].to_vec(),
        defect_tol: orbit.defect_tol,
    })
}

/// Points of X1 joined by paths in X0; `paths[k]` runs from `sigma(points[k])` to `iota(points[k + 1])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyPseudoOrbit {
    pub kind: WindowKind,
    pub start: i64,
    pub points: Vec<Point>,
    pub paths: Vec<PolyPath>,
    pub bound: f64,
}

impl HomotopyPseudoOrbit {
    /// Check path endpoints against the system and record the length bound.
    pub fn new(
        system: &MultivaluedSystem,
        kind: WindowKind,
        start: i64,
        points: Vec<Point>,
        paths: Vec<PolyPath>,
    ) -> Result<HomotopyPseudoOrbit> {
        if points.is_empty() {
            return Err(Error::Input("empty homotopy pseudo-orbit".into()));
        }
        if paths.len() + 1 != points.len() {
            return Err(Error::Input(format!(
                "{} points need {} paths, got {}",
                points.len(),
                points.len() - 1,
                paths.len()
            )));
        }
        for (k, p) in points.iter().enumerate() {
            if !system.x1.accepts_kind(p) {
                return Err(Error::Domain {
                    index: start + k as i64,
                });
            }
        }
        for (k, path) in paths.iter().enumerate() {
            let index = start + k as i64 + 1;
            let a = system.sigma(&points[k]);
            let b = system.iota(&points[k + 1]);
            let g0 = system.x0.distance(&a, &path.start());
            let g1 = system.x0.distance(&b, &path.end());
            let gap = g0.max(g1);
            if gap > JOIN_TOL || !gap.is_finite() {
                return Err(Error::EndpointMismatch { index, gap });
            }
        }
        let bound = paths.iter().map(PolyPath::length).fold(0.0, f64::max);
        Ok(HomotopyPseudoOrbit {
            kind,
            start,
            points,
            paths,
            bound,
        })
    }

    /// An orbit viewed as a homotopy pseudo-orbit; each path is the segment
    /// from `sigma(x_{i-1})` to `iota(x_i)`, constant when they coincide.
    pub fn from_orbit(system: &MultivaluedSystem, orbit: &Orbit) -> HomotopyPseudoOrbit {
        let paths = orbit
            .points
            .windows(2)
            .map(|w| {
                let a = system.sigma(&w[0]);
                let mut b = system.iota(&w[1]);
                if let (Point::Real(s), Point::Real(t)) = (a, b) {
                    b = Point::Real(t + (s - t).round());
                    debug_assert!(circle_dist(s, t) <= 0.5);
                }
                if a == b {
                    PolyPath::constant(system.x0.clone(), a)
                } else {
                    PolyPath::segment(system.x0.clone(), a, b)
                }
            })
            .collect::<Vec<_>>();
        let bound = paths.iter().map(PolyPath::length).fold(0.0, f64::max);
        HomotopyPseudoOrbit {
            kind: orbit.kind,
            start: orbit.start,
            points: orbit.points.clone(),
            paths,
            bound,
        }
    }

    pub fn last_index(&self) -> i64 {
        self.start + self.points.len() as i64 - 1
    }

    /// Path `alpha_i` for `start < i <= last_index`.
    pub fn path(&self, i: i64) -> Option<&PolyPath> {
        if i <= self.start {
            return None;
        }
        self.paths.get((i - self.start - 1) as usize)
    }

    /// Same points, each path subdivided `factor` times.
    pub fn refine(&self, factor: usize) -> HomotopyPseudoOrbit {
        HomotopyPseudoOrbit {
            paths: self.paths.iter().map(|p| p.refine(factor)).collect(),
            ..self.clone()
        }
    }

    pub fn restrict(&self, lo: i64, hi: i64) -> HomotopyPseudoOrbit {
        let lo = lo.max(self.start);
        let hi = hi.min(self.last_index()).max(lo);
        let a = (lo - self.start) as usize;
        let b = (hi - self.start) as usize;
        let paths = self.paths[a..b].to_vec();
        let bound = paths.iter().map(PolyPath::length).fold(0.0, f64::max);
        HomotopyPseudoOrbit {
            kind: self.kind,
            start: lo,
            points: self.points[a..=b].to_vec(),
            paths,
            bound,
        }
    }
}
