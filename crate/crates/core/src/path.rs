use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Point, Space};

/// Tolerance under which two path endpoints are treated as the same point.
pub const JOIN_TOL: f64 = 1e-9;

/// A finite polyline; the stand-in for paths and homotopy tracks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyPath {
    pub space: Space,
    pub vertices: Vec<Point>,
}

impl PolyPath {
    pub fn new(space: Space, vertices: Vec<Point>) -> Result<PolyPath> {
        if vertices.is_empty() {
            return Err(Error::Input("a path needs at least one vertex".into()));
        }
        if let Some(k) = vertices.iter().position(|p| !space.accepts_kind(p)) {
            return Err(Error::Input(format!(
                "vertex {k} is not a point of a {} space",
                space.kind_name()
            )));
        }
        Ok(PolyPath { space, vertices })
    }

    pub fn constant(space: Space, p: Point) -> PolyPath {
        PolyPath {
            space,
            vertices: vec![p],
        }
    }

    pub fn segment(space: Space, a: Point, b: Point) -> PolyPath {
        PolyPath {
            space,
            vertices: vec![a, b],
        }
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        *self.vertices.last().expect("nonempty path")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| self.space.segment_length(&w[0], &w[1]))
            .sum()
    }

    pub fn is_constant(&self) -> bool {
        self.vertices.windows(2).all(|w| w[0] == w[1])
    }

    pub fn reversed(&self) -> PolyPath {
        let mut v = self.vertices.clone();
        v.reverse();
        PolyPath {
            space: self.space.clone(),
            vertices: v,
        }
    }

    /// Net displacement of a circle path (the winding of a closed one).
    pub fn displacement(&self) -> Option<f64> {
        Some(self.end().as_real()? - self.start().as_real()?)
    }

    /// Shift every circle vertex by an integer so the path starts at the lift nearest `anchor`.
    pub fn relift_near(&self, anchor: f64) -> PolyPath {
        match self.start() {
            Point::Real(s) => {
                let k = (anchor - s).round();
                if k == 0.0 {
                    return self.clone();
                }
                let vertices = self
                    .vertices
                    .iter()
                    .map(|p| Point::Real(p.re() + k))
                    .collect();
                PolyPath {
                    space: self.space.clone(),
                    vertices,
                }
            }
            _ => self.clone(),
        }
    }

    /// Concatenation `self · other`. Circle paths are relifted to join continuously.
    pub fn concat(&self, other: &PolyPath) -> Result<PolyPath> {
        let end = self.end();
        let other = match end {
            Point::Real(e) => other.relift_near(e),
            _ => other.clone(),
        };
        let gap = self.space.distance(&end, &other.start());
        if gap > JOIN_TOL {
            return Err(Error::EndpointMismatch { index: 0, gap });
        }
        let mut v = self.vertices.clone();
        let skip = usize::from(other.start() == end);
        v.extend_from_slice(&other.vertices[skip..]);
        Ok(PolyPath {
            space: self.space.clone(),
            vertices: v,
        })
    }

    /// Split every segment into `factor` equal pieces.
    pub fn refine(&self, factor: usize) -> PolyPath {
        let factor = factor.max(1);
        let mut v = Vec::with_capacity((self.vertices.len() - 1) * factor + 1);
        v.push(self.vertices[0]);
        for w in self.vertices.windows(2) {
            for k in 1..=factor {
                v.push(lerp(&w[0], &w[1], k as f64 / factor as f64));
            }
        }
        PolyPath {
            space: self.space.clone(),
            vertices: v,
        }
    }

    /// Drop consecutive repeated vertices.
    pub fn dedup(mut self) -> PolyPath {
        self.vertices.dedup();
        self
    }

    pub fn map(&self, space: Space, f: impl Fn(&Point) -> Point) -> PolyPath {
        PolyPath {
            space,
            vertices: self.vertices.iter().map(f).collect(),
        }
    }
}

/// Affine interpolation between two points of the same kind; discrete points jump at 1.
pub fn lerp(a: &Point, b: &Point, t: f64) -> Point {
    match (a, b) {
        (Point::Real(x), Point::Real(y)) => Point::Real(x + (y - x) * t),
        (Point::Complex(x), Point::Complex(y)) => Point::Complex(x + (y - x) * t),
        (Point::Pair(x1, y1), Point::Pair(x2, y2)) => {
            Point::Pair(x1 + (x2 - x1) * t, y1 + (y2 - y1) * t)
        }
        _ => {
            if t < 1.0 {
                *a
            } else {
                *b
            }
        }
    }
}
