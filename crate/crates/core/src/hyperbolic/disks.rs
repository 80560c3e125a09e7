//! Degree-one horizontal and vertical disks in the plane and the intersection selector.

use std::sync::Arc;

use num_complex::Complex64;

use super::HenonParams;
use crate::error::{Error, Result};
use crate::path::{PolyPath, JOIN_TOL};
use crate::space::Point;

/// Value and derivative of a graph function.
pub type GraphFn = Arc<dyn Fn(Complex64) -> (Complex64, Complex64) + Send + Sync>;

/// The graph `x -> (x, phi(x))`.
#[derive(Clone)]
pub struct HorizontalDisk {
    pub phi: GraphFn,
}

/// The graph `y -> (psi(y), y)`.
#[derive(Clone)]
pub struct VerticalDisk {
    pub psi: GraphFn,
}

impl HorizontalDisk {
    /// `y = y0`.
    pub fn flat(y0: Complex64) -> HorizontalDisk {
        HorizontalDisk {
            phi: Arc::new(move |_| (y0, Complex64::new(0.0, 0.0))),
        }
    }
}

impl VerticalDisk {
    /// `x = x0`.
    pub fn flat(x0: Complex64) -> VerticalDisk {
        VerticalDisk {
            psi: Arc::new(move |_| (x0, Complex64::new(0.0, 0.0))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Intersection {
    pub zeta: (Complex64, Complex64),
    /// From `f(p_h)` to `zeta` inside `f(H)`.
    pub u: PolyPath,
    /// From `zeta` to `p_v` inside `V`.
    pub s: PolyPath,
}

const MAX_STEP: f64 = 0.25;
const MAX_JUMP: f64 = 0.5;

/// Newton's method for a scalar equation, capped at 100 iterations with step halving.
fn newton(f: &dyn Fn(Complex64) -> (Complex64, Complex64), mut x: Complex64) -> Option<Complex64> {
    let (mut r, mut d) = f(x);
    for _ in 0..super::bvp::MAX_NEWTON {
        if r.norm() <= 1e-14 * (1.0 + x.norm_sqr()) {
            return Some(x);
        }
        if d.norm() == 0.0 {
            return None;
        }
        let delta = -r / d;
        let mut step = 1.0;
        loop {
            let y = x + delta * step;
            let (ry, dy) = f(y);
            if ry.norm() < r.norm() {
                x = y;
                r = ry;
                d = dy;
                break;
            }
            step *= 0.5;
            if step < 1e-10 {
                return if r.norm() <= 1e-11 * (1.0 + x.norm_sqr()) {
                    Some(x)
                } else {
                    None
                };
            }
        }
    }
    None
}

/// Track the root of `eq(x, s)` from `s = 0` to `s = 1`; returns every accepted root.
fn track(
    eq: &dyn Fn(Complex64, f64) -> (Complex64, Complex64),
    x0: Complex64,
    span: f64,
) -> Result<Vec<Complex64>> {
    let mut out = vec![x0];
    let mut x = x0;
    let (mut s, mut h) = (
        0.0f64,
        if span > 0.0 {
            (MAX_STEP / span).min(1.0)
        } else {
            1.0
        },
    );
    while s < 1.0 {
        let t = (s + h).min(1.0);
        match newton(&|z| eq(z, t), x) {
            Some(y) if (y - x).norm() <= MAX_JUMP => {
                x = y;
                out.push(x);
                s = t;
                h = (h * 1.5).min(if span > 0.0 { MAX_STEP / span } else { 1.0 });
            }
            _ => {
                h *= 0.5;
                if h < 1e-12 {
                    return Err(Error::Numerical(format!(
                        "continuation stalled near x = {x}"
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// The point of `f(H) ∩ V` selected by the path `gamma` from `f(p_h)` to `p_v`, with the paths
/// `u` in `f(H)` and `s` in `V` whose concatenation is homotopic to `gamma`.
///
/// `p_h` is the x-coordinate of a point of `H` and `p_v` the y-coordinate of a point of `V`.
pub fn unique_intersection(
    params: &HenonParams,
    h: &HorizontalDisk,
    v: &VerticalDisk,
    p_h: Complex64,
    p_v: Complex64,
    gamma: &PolyPath,
) -> Result<Intersection> {
    let (c, b) = (params.c, params.b);
    let image = |x: Complex64| {
        let (y, dy) = (h.phi)(x);
        (x * x + c - b * y, 2.0 * x - b * dy)
    };
    let start = {
        let (y, _) = (h.phi)(p_h);
        params.forward(p_h, y)
    };
    let end = ((v.psi)(p_v).0, p_v);
    let gap = |a: (Complex64, Complex64), q: Point| {
        let (x, y) = q.xy();
        (a.0 - x).norm() + (a.1 - y).norm()
    };
    let g0 = gap(start, gamma.start());
    let g1 = gap(end, gamma.end());
    if g0.max(g1) > JOIN_TOL {
        return Err(Error::EndpointMismatch {
            index: 0,
            gap: g0.max(g1),
        });
    }

    let mut lifted = vec![p_h];
    let mut x = p_h;
    for w in gamma.vertices.windows(2) {
        let (a, bb) = (w[0].xy().0, w[1].xy().0);
        let eq = |z: Complex64, t: f64| {
            let (g, dg) = image(z);
            (g - (a + (bb - a) * t), dg)
        };
        let steps = track(&eq, x, (bb - a).norm())?;
        x = *steps.last().expect("nonempty");
        lifted.extend_from_slice(&steps[1..]);
    }
    let xv = end.0;
    let slide_eq = |z: Complex64, t: f64| {
        let (g, dg) = image(z);
        let (p, dp) = (v.psi)(z);
        (g - (xv * (1.0 - t) + p * t), dg - dp * t)
    };
    let span = ((v.psi)(x).0 - xv).norm();
    let slide = track(&slide_eq, x, span)?;
    lifted.extend_from_slice(&slide[1..]);
    let xz = *lifted.last().expect("nonempty");
    let zeta = ((v.psi)(xz).0, xz);

    let space = params.space();
    let u_pts = lifted
        .iter()
        .map(|&z| {
            let (y, _) = (h.phi)(z);
            let (p, q) = params.forward(z, y);
            Point::Pair(p, q)
        })
        .collect();
    let pieces = 16;
    let s_pts = (0..=pieces)
        .map(|k| {
            let y = xz + (p_v - xz) * (k as f64 / pieces as f64);
            Point::Pair((v.psi)(y).0, y)
        })
        .collect();
    Ok(Intersection {
        zeta,
        u: PolyPath {
            space: space.clone(),
            vertices: u_pts,
        },
        s: PolyPath {
            space,
            vertices: s_pts,
        },
    })
}

/// All points of `f(H) ∩ V` inside the box, found by Newton's method from a seed grid.
pub fn intersection_points(
    params: &HenonParams,
    h: &HorizontalDisk,
    v: &VerticalDisk,
) -> Vec<(Complex64, Complex64)> {
    let (c, b) = (params.c, params.b);
    let eq = |x: Complex64| {
        let (y, dy) = (h.phi)(x);
        let (p, dp) = (v.psi)(x);
        (x * x + c - b * y - p, 2.0 * x - b * dy - dp)
    };
    let (mx, my) = (params.x_space(), params.y_space());
    let mut found: Vec<(Complex64, Complex64)> = Vec::new();
    let g = 24;
    for a in 0..g {
        for k in 0..g {
            let seed = Complex64::new(
                params.rx * (2.0 * (a as f64 + 0.5) / g as f64 - 1.0),
                params.rx * (2.0 * (k as f64 + 0.5) / g as f64 - 1.0),
            );
            let Some(x) = newton(&eq, seed) else { continue };
            let y = (h.phi)(x).0;
            let p = (v.psi)(x).0;
            let inside = mx.contains_planar(x)
                && my.contains_planar(y)
                && mx.contains_planar(p)
                && my.contains_planar(x);
            if inside && found.iter().all(|q| (q.1 - x).norm() > 1e-8) {
                found.push((p, x));
            }
        }
    }
    found
}
