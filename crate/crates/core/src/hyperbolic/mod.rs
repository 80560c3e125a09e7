//! Crossed mappings on product domains, Hénon certificates and bi-infinite shadowing.

mod bvp;
mod disks;
mod shadow;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Metric, Space};
use crate::system::{CertificateMethod, ExpansionCertificate, Family, MultivaluedSystem};

pub use disks::{
    intersection_points, unique_intersection, HorizontalDisk, Intersection, VerticalDisk,
};
pub use shadow::{
    hyperbolic_constants, induced_map_hyperbolic, shadow_hyperbolic, stage_budget,
    verify_orbit_uniqueness, Uniqueness,
};

/// Grid used by [`make_henon_system`] for the cone certificate.
pub const DEFAULT_LAMBDA_GRID: usize = 64;

/// Smallest expansion factor a sampled certificate accepts.
pub const MIN_LAMBDA: f64 = 1.01;

/// `f(x, y) = (x^2 + c - b y, x)` on `Mx x My`; `Mx` loses the disk of radius
/// `rx_inner` about 0 when that radius is given.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HenonParams {
    pub c: Complex64,
    pub b: Complex64,
    pub rx: f64,
    pub ry: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rx_inner: Option<f64>,
}

impl HenonParams {
    pub fn new(c: Complex64, b: Complex64, rx: f64, ry: f64) -> HenonParams {
        HenonParams {
            c,
            b,
            rx,
            ry,
            rx_inner: None,
        }
    }

    pub fn real(c: f64, b: f64, r: f64) -> HenonParams {
        HenonParams::new(Complex64::new(c, 0.0), Complex64::new(b, 0.0), r, r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.norm() == 0.0 {
            return Err(Error::Input("b = 0 does not give a diffeomorphism".into()));
        }
        if !(self.rx > 0.0 && self.ry > 0.0) {
            return Err(Error::Input("box radii must be positive".into()));
        }
        if let Some(r) = self.rx_inner {
            if !(r > 0.0 && r < self.rx) {
                return Err(Error::Input(format!(
                    "inner radius {r} must lie in (0, {})",
                    self.rx
                )));
            }
        }
        Ok(())
    }

    pub fn forward(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (x * x + self.c - self.b * y, x)
    }

    pub fn inverse(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (y, (y * y + self.c - x) / self.b)
    }

    pub fn x_space(&self) -> Space {
        let zero = Complex64::new(0.0, 0.0);
        match self.rx_inner {
            Some(r) => Space::HoledDisk {
                center: zero,
                radius: self.rx,
                hole_center: zero,
                hole_radius: r,
                metric: Metric::Euclidean,
            },
            None => Space::disk(zero, self.rx),
        }
    }

    pub fn y_space(&self) -> Space {
        Space::disk(Complex64::new(0.0, 0.0), self.ry)
    }

    pub fn space(&self) -> Space {
        Space::product(self.x_space(), self.y_space())
    }

    /// Membership in `X1 = X0 ∩ f^-1(X0)`.
    pub fn in_x1(&self, x: Complex64, y: Complex64) -> bool {
        let (u, v) = self.forward(x, y);
        let (mx, my) = (self.x_space(), self.y_space());
        mx.contains_planar(x)
            && my.contains_planar(y)
            && mx.contains_planar(u)
            && my.contains_planar(v)
    }
}

/// A map on a product box with the data needed for degree and cone certificates.
pub trait CrossedMap {
    fn forward(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64);
    /// Rows of `Df` at `(x, y)`.
    fn jacobian(&self, x: Complex64, y: Complex64) -> [[Complex64; 2]; 2];
    /// Rows of `Df^-1` at `(x, y)`.
    fn inverse_jacobian(&self, x: Complex64, y: Complex64) -> [[Complex64; 2]; 2];
    fn x_space(&self) -> Space;
    fn y_space(&self) -> Space;
    fn rx(&self) -> f64;
    fn ry(&self) -> f64;
    /// Solutions `x` of `pi_x f(x, y0) = x0` without any domain restriction.
    fn x_preimages(&self, x0: Complex64, y0: Complex64) -> Vec<Complex64>;
    fn bcc(&self) -> (f64, f64);

    fn in_x1(&self, x: Complex64, y: Complex64) -> bool {
        let (u, v) = self.forward(x, y);
        let (mx, my) = (self.x_space(), self.y_space());
        mx.contains_planar(x)
            && my.contains_planar(y)
            && mx.contains_planar(u)
            && my.contains_planar(v)
    }
}

impl CrossedMap for HenonParams {
    fn forward(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        HenonParams::forward(self, x, y)
    }
    fn jacobian(&self, x: Complex64, _y: Complex64) -> [[Complex64; 2]; 2] {
        let one = Complex64::new(1.0, 0.0);
        [[2.0 * x, -self.b], [one, Complex64::new(0.0, 0.0)]]
    }
    fn inverse_jacobian(&self, _x: Complex64, y: Complex64) -> [[Complex64; 2]; 2] {
        let one = Complex64::new(1.0, 0.0);
        [
            [Complex64::new(0.0, 0.0), one],
            [-one / self.b, 2.0 * y / self.b],
        ]
    }
    fn x_space(&self) -> Space {
        HenonParams::x_space(self)
    }
    fn y_space(&self) -> Space {
        HenonParams::y_space(self)
    }
    fn rx(&self) -> f64 {
        self.rx
    }
    fn ry(&self) -> f64 {
        self.ry
    }
    fn x_preimages(&self, x0: Complex64, y0: Complex64) -> Vec<Complex64> {
        let r = (x0 - self.c + self.b * y0).sqrt();
        vec![r, -r]
    }
    fn bcc(&self) -> (f64, f64) {
        check_bcc(self)
    }
}

/// `(x, y) -> (ax x, ay y)` on a product of disks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearToy {
    pub ax: Complex64,
    pub ay: Complex64,
    pub rx: f64,
    pub ry: f64,
}

impl CrossedMap for LinearToy {
    fn forward(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (self.ax * x, self.ay * y)
    }
    fn jacobian(&self, _x: Complex64, _y: Complex64) -> [[Complex64; 2]; 2] {
        let zero = Complex64::new(0.0, 0.0);
        [[self.ax, zero], [zero, self.ay]]
    }
    fn inverse_jacobian(&self, _x: Complex64, _y: Complex64) -> [[Complex64; 2]; 2] {
        let zero = Complex64::new(0.0, 0.0);
        [[1.0 / self.ax, zero], [zero, 1.0 / self.ay]]
    }
    fn x_space(&self) -> Space {
        Space::disk(Complex64::new(0.0, 0.0), self.rx)
    }
    fn y_space(&self) -> Space {
        Space::disk(Complex64::new(0.0, 0.0), self.ry)
    }
    fn rx(&self) -> f64 {
        self.rx
    }
    fn ry(&self) -> f64 {
        self.ry
    }
    fn x_preimages(&self, x0: Complex64, _y0: Complex64) -> Vec<Complex64> {
        vec![x0 / self.ax]
    }
    fn bcc(&self) -> (f64, f64) {
        (
            self.ax.norm() * self.rx - self.rx,
            self.ry / self.ay.norm() - self.ry,
        )
    }
}

/// Boundary margins: how far `pi_x f` of the vertical boundary stays outside `Mx`, and how far
/// `pi_y f^-1` of the horizontal boundary stays outside `My`.
pub fn check_bcc(p: &HenonParams) -> (f64, f64) {
    let (c, b) = (p.c.norm(), p.b.norm());
    let mut first = p.rx * p.rx - c - b * p.ry - p.rx;
    if let Some(r) = p.rx_inner {
        first = first.min(r - (r * r + c + b * p.ry));
    }
    let second = (p.ry * p.ry - c - p.rx) / b - p.ry;
    (first, second)
}

/// Distance from `pi_x f` of the critical set `{x = 0}` to `Mx`; infinite when `0` is not in `Mx`.
pub fn check_occ(p: &HenonParams) -> f64 {
    if p.rx_inner.is_some() {
        return f64::INFINITY;
    }
    p.c.norm() - p.b.norm() * p.ry - p.rx
}

/// The constant `diam(pi_y f(X1))`, bounded through `|x| < min(Rx, sqrt(|c| + |b| Ry + Rx))`.
pub fn c_star(p: &HenonParams) -> f64 {
    2.0 * p.rx.min((p.c.norm() + p.b.norm() * p.ry + p.rx).sqrt())
}

fn ring_samples(r: f64, rings: usize, spokes: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    for k in 1..=rings {
        let rho = r * k as f64 / (rings as f64 + 0.5);
        for j in 0..spokes {
            out.push(Complex64::from_polar(
                rho,
                2.0 * PI * (j as f64 + 0.25) / spokes as f64,
            ));
        }
    }
    out
}

/// Number of solutions of `pi_x f(x, y0) = x0` in `Mx`, constant over sampled `(x0, y0)`.
pub fn crossed_degree<M: CrossedMap>(map: &M) -> Result<u32> {
    let (m1, m2) = map.bcc();
    if !(m1 > 0.0 && m2 > 0.0) {
        return Err(Error::Certificate(format!(
            "boundary condition fails: margins ({m1}, {m2})"
        )));
    }
    let mx = map.x_space();
    let mut degree = None;
    for x0 in ring_samples(map.rx(), 6, 12)
        .into_iter()
        .filter(|z| mx.contains_planar(*z))
    {
        for y0 in ring_samples(map.ry(), 3, 6) {
            let count = map
                .x_preimages(x0, y0)
                .into_iter()
                .filter(|z| mx.contains_planar(*z))
                .count() as u32;
            match degree {
                None => degree = Some(count),
                Some(d) if d != count => {
                    return Err(Error::Certificate(format!(
                        "root count {count} at ({x0}, {y0}) differs from {d}: not a crossed mapping"
                    )))
                }
                _ => {}
            }
        }
    }
    degree.ok_or_else(|| Error::Certificate("no sample points in the x factor".into()))
}

fn apply(m: &[[Complex64; 2]; 2], v: (Complex64, Complex64)) -> (Complex64, Complex64) {
    (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1)
}

/// Minimum cone expansion over a `grid x grid` sample of X1, checking cone invariance on the way.
///
/// Horizontal cones `|v_y| <= |v_x|` are pushed by `Df`, vertical cones `|v_x| <= |v_y|` by
/// `Df^-1` from the image point.
pub fn estimate_lambda<M: CrossedMap>(map: &M, grid: usize) -> Result<f64> {
    let grid = grid.max(2);
    let (rx, ry) = (map.rx(), map.ry());
    let mut ys = vec![Complex64::new(0.0, 0.0)];
    for j in 0..8 {
        let th = 2.0 * PI * j as f64 / 8.0;
        ys.push(Complex64::from_polar(0.5 * ry, th));
        ys.push(Complex64::from_polar(0.999 * ry, th + PI / 8.0));
    }
    let dirs: Vec<Complex64> = (0..8)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 8.0))
        .collect();
    let mut lambda = f64::INFINITY;
    for a in 0..grid {
        for bb in 0..grid {
            let x = Complex64::new(
                -rx + 2.0 * rx * (a as f64 + 0.5) / grid as f64,
                -rx + 2.0 * rx * (bb as f64 + 0.5) / grid as f64,
            );
            for &y in &ys {
                if !map.in_x1(x, y) {
                    continue;
                }
                let df = map.jacobian(x, y);
                let (fx, fy) = map.forward(x, y);
                let dfi = map.inverse_jacobian(fx, fy);
                for &e in &dirs {
                    let h = apply(&df, (Complex64::new(1.0, 0.0), e));
                    if !(h.0.norm() > h.1.norm()) {
                        return Err(Error::Certificate(format!(
                            "horizontal cone leaves itself at ({x}, {y}), direction (1, {e})"
                        )));
                    }
                    let v = apply(&dfi, (e, Complex64::new(1.0, 0.0)));
                    if !(v.1.norm() > v.0.norm()) {
                        return Err(Error::Certificate(format!(
                            "vertical cone leaves itself at ({fx}, {fy}), direction ({e}, 1)"
                        )));
                    }
                    lambda = lambda.min(h.0.norm()).min(v.1.norm());
                }
            }
        }
    }
    if !lambda.is_finite() {
        return Err(Error::Certificate("no grid point lies in X1".into()));
    }
    if lambda <= MIN_LAMBDA {
        return Err(Error::Certificate(format!(
            "sampled expansion {lambda} is not above {MIN_LAMBDA}"
        )));
    }
    Ok(lambda)
}

/// A certified Hénon system.
#[derive(Clone, Debug)]
pub struct CrossedSystem {
    pub params: HenonParams,
    pub system: MultivaluedSystem,
    pub degree: u32,
    pub lambda: f64,
    /// `diam(pi_y f(X1))`.
    pub c: f64,
    pub bcc: (f64, f64),
    pub occ: f64,
}

pub fn make_henon_system(params: HenonParams) -> Result<CrossedSystem> {
    params.validate()?;
    let bcc = check_bcc(&params);
    let occ = check_occ(&params);
    if !(bcc.0 > 0.0 && bcc.1 > 0.0 && occ > 0.0) {
        return Err(Error::Certificate(format!(
            "margins bcc = ({}, {}), occ = {occ} are not all positive",
            bcc.0, bcc.1
        )));
    }
    let degree = crossed_degree(&params)?;
    let lambda = estimate_lambda(&params, DEFAULT_LAMBDA_GRID)?;
    let space = params.space();
    let system = MultivaluedSystem {
        x0: space.clone(),
        x1: space,
        family: Family::Henon(params),
        certificate: Some(ExpansionCertificate {
            lambda,
            delta: 0.5,
            method: CertificateMethod::Sampled {
                grid: DEFAULT_LAMBDA_GRID,
                margin: lambda - MIN_LAMBDA,
            },
        }),
    };
    Ok(CrossedSystem {
        params,
        system,
        degree,
        lambda,
        c: c_star(&params),
        bcc,
        occ,
    })
}
