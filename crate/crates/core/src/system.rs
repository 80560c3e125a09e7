use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::HenonParams;
use crate::space::{Point, Space};
use crate::symbolic::GraphSystem;

pub type PointMap = Arc<dyn Fn(&Point) -> Point + Send + Sync>;

/// Smooth circle perturbations with `|g'| <= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Perturbation {
    #[default]
    None,
    /// `g(x) = sin(2 pi x) / (2 pi)`.
    Sin,
}

impl Perturbation {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Perturbation::None => 0.0,
            Perturbation::Sin => (2.0 * PI * x).sin() / (2.0 * PI),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Perturbation::None => 0.0,
            Perturbation::Sin => (2.0 * PI * x).cos(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CertificateMethod {
    Analytic,
    Sampled { grid: usize, margin: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCertificate {
    pub lambda: f64,
    pub delta: f64,
    pub method: CertificateMethod,
}

#[derive(Clone)]
pub enum Family {
    /// `x -> d x + eps g(x)` on the circle.
    Circle {
        degree: u32,
        epsilon: f64,
        perturbation: Perturbation,
    },
    /// `z -> z^2 + c` on a planar domain, with `iota` the inclusion.
    Quadratic {
        c: Complex64,
    },
    Graph(GraphSystem),
    Henon(HenonParams),
    Custom {
        iota: PointMap,
        sigma: PointMap,
    },
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Circle {
                degree,
                epsilon,
                perturbation,
            } => f
                .debug_struct("Circle")
                .field("degree", degree)
                .field("epsilon", epsilon)
                .field("perturbation", perturbation)
                .finish(),
            Family::Quadratic { c } => f.debug_struct("Quadratic").field("c", c).finish(),
            Family::Graph(g) => f.debug_tuple("Graph").field(g).finish(),
            Family::Henon(p) => f.debug_tuple("Henon").field(p).finish(),
            Family::Custom { .. } => f.write_str("Custom"),
        }
    }
}

/// The quadruple `(X0, X1; iota, sigma)`.
#[derive(Clone, Debug)]
pub struct MultivaluedSystem {
    pub x0: Space,
    pub x1: Space,
    pub family: Family,
    pub certificate: Option<ExpansionCertificate>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OrbitCheck {
    Ok,
    Defects(Vec<(i64, f64)>),
}

impl MultivaluedSystem {
    pub fn custom(x0: Space, x1: Space, iota: PointMap, sigma: PointMap) -> MultivaluedSystem {
        MultivaluedSystem {
            x0,
            x1,
            family: Family::Custom { iota, sigma },
            certificate: None,
        }
    }

    pub fn sigma(&self, p: &Point) -> Point {
        match &self.family {
            Family::Circle {
                degree,
                epsilon,
                perturbation,
            } => {
                let x = p.re();
                Point::Real(*degree as f64 * x + epsilon * perturbation.value(x))
            }
            Family::Quadratic { c } => {
                let z = p.z();
                Point::Complex(z * z + c)
            }
            Family::Graph(g) => Point::Vertex(g.edges[p.as_vertex().expect("edge")].1),
            Family::Henon(h) => {
                let (x, y) = p.xy();
                let (u, v) = h.forward(x, y);
                Point::Pair(u, v)
            }
            Family::Custom { sigma, .. } => sigma(p),
        }
    }

    pub fn iota(&self, p: &Point) -> Point {
        match &self.family {
            Family::Graph(g) => Point::Vertex(g.edges[p.as_vertex().expect("edge")].0),
            Family::Custom { iota, .. } => iota(p),
            _ => *p,
        }
    }

    /// Membership in X1, including the requirement that sigma lands in X0.
    pub fn contains_x1(&self, p: &Point) -> bool {
        if !self.x1.contains(p) {
            return false;
        }
        match &self.family {
            Family::Quadratic { .. } | Family::Henon(_) => self.x0.contains(&self.sigma(p)),
            _ => true,
        }
    }

    /// Validate that every point lies in X1 and report transitions with defect above `tol`.
    pub fn validate_orbit(&self, start: i64, points: &[Point], tol: f64) -> Result<OrbitCheck> {
        for (k, p) in points.iter().enumerate() {
            if !self.x1.accepts_kind(p) || !self.contains_x1(p) {
                return Err(Error::Domain {
                    index: start + k as i64,
                });
            }
        }
        let defects: Vec<(i64, f64)> = points
            .windows(2)
            .enumerate()
            .map(|(k, w)| (start + k as i64, self.defect(&w[0], &w[1])))
            .filter(|&(_, d)| d > tol)
            .collect();
        Ok(if defects.is_empty() {
            OrbitCheck::Ok
        } else {
            OrbitCheck::Defects(defects)
        })
    }

    /// `d0(sigma(a), iota(b))`.
    pub fn defect(&self, a: &Point, b: &Point) -> f64 {
        self.x0.distance(&self.sigma(a), &self.iota(b))
    }

    pub fn max_defect(&self, points: &[Point]) -> f64 {
        points
            .windows(2)
            .map(|w| self.defect(&w[0], &w[1]))
            .fold(0.0, f64::max)
    }

    pub fn is_circle(&self) -> bool {
        matches!(self.family, Family::Circle { .. })
    }
}

/// Validate an orbit given as consecutive points starting at index `start`.
pub fn validate_orbit(
    system: &MultivaluedSystem,
    start: i64,
    points: &[Point],
    tol: f64,
) -> Result<OrbitCheck> {
    system.validate_orbit(start, points, tol)
}
