//! Spaces and points.
//!
//! Circle points are stored as real lifts; two reals that differ by an integer are the
//! same circle point, and a polyline of reals records how a path winds.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Point {
    Real(f64),
    Vertex(usize),
    Complex(Complex64),
    Pair(Complex64, Complex64),
}

impl Point {
    pub fn as_real(&self) -> Option<f64> {
        match *self {
            Point::Real(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_vertex(&self) -> Option<usize> {
        match *self {
            Point::Vertex(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match *self {
            Point::Complex(z) => Some(z),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(Complex64, Complex64)> {
        match *self {
            Point::Pair(x, y) => Some((x, y)),
            _ => None,
        }
    }

    /// Real lift, panicking on a kind mismatch. Callers validate kinds at entry.
    pub(crate) fn re(&self) -> f64 {
        self.as_real().expect("circle point expected")
    }

    pub(crate) fn z(&self) -> Complex64 {
        self.as_complex().expect("planar point expected")
    }

    pub(crate) fn xy(&self) -> (Complex64, Complex64) {
        self.as_pair().expect("product point expected")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    #[default]
    Euclidean,
    Poincare,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Space {
    /// Reals mod 1 with the arc metric of total length 1.
    Circle,
    /// `size` points at unit distance from each other.
    FiniteDiscrete { size: usize },
    PlanarDisk {
        center: Complex64,
        radius: f64,
        #[serde(default)]
        metric: Metric,
    },
    /// Disk with a closed round hole removed. The poincare choice uses the metric of the
    /// outer disk.
    HoledDisk {
        center: Complex64,
        radius: f64,
        hole_center: Complex64,
        hole_radius: f64,
        #[serde(default)]
        metric: Metric,
    },
    /// Sum-metric product of two planar factors.
    Product { x: Box<Space>, y: Box<Space> },
}

/// Circle distance between two lifts.
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Representative of a circle lift in `[0, 1)`.
pub fn wrap01(t: f64) -> f64 {
    let w = t.rem_euclid(1.0);
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

impl Space {
    pub fn disk(center: Complex64, radius: f64) -> Space {
        Space::PlanarDisk {
            center,
            radius,
            metric: Metric::Euclidean,
        }
    }

    pub fn product(x: Space, y: Space) -> Space {
        Space::Product {
            x: Box::new(x),
            y: Box::new(y),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Space::Circle => "circle",
            Space::FiniteDiscrete { .. } => "finite-discrete",
            Space::PlanarDisk { .. } => "planar-disk",
            Space::HoledDisk { .. } => "holed-disk",
            Space::Product { .. } => "product",
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, Space::PlanarDisk { .. } | Space::HoledDisk { .. })
    }

    /// True for spaces whose every loop is null-homotopic.
    pub fn is_simply_connected(&self) -> bool {
        match self {
            Space::PlanarDisk { .. } => true,
            Space::Product { x, y } => x.is_simply_connected() && y.is_simply_connected(),
            _ => false,
        }
    }

    pub fn contains_planar(&self, z: Complex64) -> bool {
        match *self {
            Space::PlanarDisk { center, radius, .. } => (z - center).norm() < radius,
            Space::HoledDisk {
                center,
                radius,
                hole_center,
                hole_radius,
                ..
            } => (z - center).norm() < radius && (z - hole_center).norm() > hole_radius,
            _ => false,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (Space::Circle, Point::Real(t)) => t.is_finite(),
            (Space::FiniteDiscrete { size }, Point::Vertex(v)) => v < size,
            (Space::PlanarDisk { .. } | Space::HoledDisk { .. }, Point::Complex(z)) => {
                self.contains_planar(*z)
            }
            (Space::Product { x, y }, Point::Pair(a, b)) => {
                x.contains_planar(*a) && y.contains_planar(*b)
            }
            _ => false,
        }
    }

    /// Whether `p` has the right shape for this space, ignoring bounds.
    pub fn accepts_kind(&self, p: &Point) -> bool {
        matches!(
            (self, p),
            (Space::Circle, Point::Real(_))
                | (Space::FiniteDiscrete { .. }, Point::Vertex(_))
                | (
                    Space::PlanarDisk { .. } | Space::HoledDisk { .. },
                    Point::Complex(_)
                )
                | (Space::Product { .. }, Point::Pair(_, _))
        )
    }

    pub(crate) fn planar_distance(&self, a: Complex64, b: Complex64) -> f64 {
        match *self {
            Space::PlanarDisk {
                center,
                radius,
                metric: Metric::Poincare,
            }
            | Space::HoledDisk {
                center,
                radius,
                metric: Metric::Poincare,
                ..
            } => {
                let u = (a - center) / radius;
                let v = (b - center) / radius;
                let r = ((u - v) / (Complex64::new(1.0, 0.0) - u.conj() * v)).norm();
                2.0 * r.min(1.0 - 1e-16).atanh()
            }
            _ => (a - b).norm(),
        }
    }

    pub(crate) fn planar_segment(&self, a: Complex64, b: Complex64) -> f64 {
        match *self {
            Space::PlanarDisk {
                center,
                radius,
                metric: Metric::Poincare,
            }
            | Space::HoledDisk {
                center,
                radius,
                metric: Metric::Poincare,
                ..
            } => {
                let (nodes, weights) = gauss_legendre_32();
                let span = (b - a).norm();
                if span == 0.0 {
                    return 0.0;
                }
                let mut acc = 0.0;
                for (s, w) in nodes.iter().zip(weights.iter()) {
                    let z = a + (b - a) * (0.5 * (s + 1.0));
                    acc +=
                        w * 0.5 * 2.0 * radius * span / (radius * radius - (z - center).norm_sqr());
                }
                acc
            }
            _ => (a - b).norm(),
        }
    }

    /// Distance between two points of this space.
    pub fn distance(&self, a: &Point, b: &Point) -> f64 {
        match (self, a, b) {
            (Space::Circle, Point::Real(s), Point::Real(t)) => circle_dist(*s, *t),
            (Space::FiniteDiscrete { .. }, Point::Vertex(u), Point::Vertex(v)) => {
                if u == v {
                    0.0
                } else {
                    1.0
                }
            }
            (Space::Product { x, y }, Point::Pair(a1, a2), Point::Pair(b1, b2)) => {
                x.planar_distance(*a1, *b1) + y.planar_distance(*a2, *b2)
            }
            (_, Point::Complex(z), Point::Complex(w)) => self.planar_distance(*z, *w),
            _ => f64::INFINITY,
        }
    }

    /// Length of the straight segment between consecutive polyline vertices.
    /// On the circle this is the displacement of the lifts.
    pub fn segment_length(&self, a: &Point, b: &Point) -> f64 {
        match (self, a, b) {
            (Space::Circle, Point::Real(s), Point::Real(t)) => (t - s).abs(),
            (Space::Product { x, y }, Point::Pair(a1, a2), Point::Pair(b1, b2)) => {
                x.planar_segment(*a1, *b1) + y.planar_segment(*a2, *b2)
            }
            (_, Point::Complex(z), Point::Complex(w)) => self.planar_segment(*z, *w),
            _ => self.distance(a, b),
        }
    }
}

/// 32-point Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre_32() -> &'static ([f64; 32], [f64; 32]) {
    static TABLE: OnceLock<([f64; 32], [f64; 32])> = OnceLock::new();
    TABLE.get_or_init(|| {
        const N: usize = 32;
        let mut nodes = [0.0; N];
        let mut weights = [0.0; N];
        for i in 0..N {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=N {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}
