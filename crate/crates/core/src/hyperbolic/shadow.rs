//! Bi-infinite shadowing for Hénon systems.
//!
//! A point of the `n`-th orbit space over index `i` is stored as the x-values of an orbit
//! segment at positions `i-1 ..= i+n`. Its product coordinates are the last value (x) and the
//! first value (y), so horizontal disks fix the first value and vertical disks fix the last one.
//! Stage `n` keeps, for every index, an orbit segment with `n` free values whose end values come
//! from the pseudo-orbit, together with connecting paths in the previous orbit space.

use num_complex::Complex64;
use rayon::prelude::*;

use super::bvp::{Recurrence, Step};
use super::CrossedSystem;
use crate::error::{Error, Result};
use crate::hsc::{apply_hsc, HomotopySemiConjugacy};
use crate::orbit::{HomotopyPseudoOrbit, Orbit, WindowKind};
use crate::path::PolyPath;
use crate::space::Point;
use crate::system::{Family, MultivaluedSystem};
use crate::trace::{ShadowTrace, StageRecord};

type Vector = Vec<Complex64>;

/// `(C0, C1) = (C + 1, 2 C0 / (lambda - 1) + C' + C + 1)`.
pub fn hyperbolic_constants(lambda: f64, c: f64, c_prime: f64) -> Result<(f64, f64)> {
    if !(lambda > 1.0) {
        return Err(Error::Certificate(format!(
            "expansion factor {lambda} is not above 1"
        )));
    }
    let c0 = c + 1.0;
    Ok((c0, 2.0 * c0 / (lambda - 1.0) + c_prime + c + 1.0))
}

/// Smallest `m` with `2 max(C0, C1) / lambda^m < tol`.
pub fn stage_budget(lambda: f64, c: f64, c_prime: f64, tol: f64) -> Result<usize> {
    let (c0, c1) = hyperbolic_constants(lambda, c, c_prime)?;
    if !(tol > 0.0) {
        return Err(Error::Input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let ratio = 2.0 * c0.max(c1) / tol;
    let mut m = (ratio.ln() / lambda.ln()).floor().max(0.0) as usize;
    while 2.0 * c0.max(c1) / lambda.powi(m as i32) >= tol {
        m += 1;
    }
    Ok(m)
}

/// Length of a path of orbit-segment vectors, measured at the plane point `(v[k], v[k-1])`.
fn middle_length(path: &[Vector], k: usize) -> f64 {
    path.windows(2)
        .map(|w| (w[1][k] - w[0][k]).norm() + (w[1][k - 1] - w[0][k - 1]).norm())
        .sum()
}

struct Piece {
    /// New segment for the previous index.
    zeta: Vector,
    /// Path inside the image of the horizontal disk, ending at `zeta`.
    u: Vec<Vector>,
    /// Path inside the vertical disk, from the image of `zeta` to the current segment.
    s: Vec<Vector>,
}

struct Stage<'a> {
    rec: Recurrence,
    n: usize,
    eta: &'a [Complex64],
    xi: &'a [Complex64],
    seg: &'a [Vector],
    alpha: &'a [Vec<Vector>],
}

impl Stage<'_> {
    /// Unique intersection for the pair of disks through `seg[o - 1]` and `seg[o]`.
    fn piece(&self, o: usize) -> Result<Piece> {
        let (rec, n) = (self.rec, self.n);
        let left = self.eta[o - 1];
        let start = (left, self.xi[o + n - 2]);
        let path = &self.alpha[o];
        let t_end = self.seg[o][n - 1];
        let mut targets: Vec<(Complex64, Complex64)> = path
            .iter()
            .skip(1)
            .map(|w| (left, *w.last().expect("vector")))
            .collect();
        match targets.last_mut() {
            Some(last) => last.1 = t_end,
            None => targets.push((left, t_end)),
        }
        let lift = rec.continue_along(&self.seg[o - 1], start, &targets)?;
        let end = lift.last().expect("nonempty");
        let mut u: Vec<Vector> = lift.iter().map(Step::full).collect();

        let mut grown = end.v.clone();
        grown.push(end.right);
        let implied = rec.next(end.v[n - 1], end.right);
        let slide = rec.continue_along(&grown, (left, implied), &[(left, self.xi[o + n - 1])])?;
        for st in slide.iter().skip(1) {
            let mut f = st.full();
            f.pop();
            u.push(f);
        }
        let zeta = slide.last().expect("nonempty").v.clone();

        let right = self.xi[o + n - 1];
        let s_steps = rec.continue_along(&zeta[1..], (zeta[0], right), &[(self.eta[o], right)])?;
        let last = s_steps.last().expect("nonempty");
        let gap = last
            .v
            .iter()
            .zip(&self.seg[o])
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let scale = 1.0 + self.seg[o].iter().map(|z| z.norm()).fold(0.0, f64::max);
        if gap > 1e-7 * scale {
            return Err(Error::Numerical(format!(
                "vertical continuation at offset {o} ends {gap:e} away from the current segment"
            )));
        }
        let s = s_steps.iter().map(Step::full).collect();
        Ok(Piece { zeta, u, s })
    }
}

fn candidate_points(seg: &[Vector], eta: &[Complex64], n: usize) -> Vec<Point> {
    let q = (n - 1) / 2;
    seg.iter()
        .enumerate()
        .map(|(o, v)| {
            let y = if q > 0 { v[q - 1] } else { eta[o] };
            Point::Pair(v[q], y)
        })
        .collect()
}

/// Shadow a homotopy pseudo-orbit of a certified Hénon system by a genuine orbit.
///
/// Stages run until, at an odd stage `2m + 1`, every connecting path is shorter than `tol`.
/// The returned window is the pseudo-orbit window shrunk by `m` at both ends.
pub fn shadow_hyperbolic(
    sys: &CrossedSystem,
    hpo: &HomotopyPseudoOrbit,
    tol: f64,
) -> Result<(Orbit, ShadowTrace)> {
    if !(tol > 0.0) {
        return Err(Error::Input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let params = sys.params;
    let rec = Recurrence {
        c: params.c,
        b: params.b,
    };
    let l = hpo.points.len();
    if l == 0 {
        return Err(Error::Input("empty homotopy pseudo-orbit".into()));
    }
    let mut pts = Vec::with_capacity(l);
    for (k, q) in hpo.points.iter().enumerate() {
        let index = hpo.start + k as i64;
        match q.as_pair() {
            Some((x, y)) if params.in_x1(x, y) => pts.push((x, y)),
            _ => return Err(Error::Domain { index }),
        }
    }
    let mut alpha: Vec<Vec<Vector>> = vec![Vec::new()];
    for (k, path) in hpo.paths.iter().enumerate() {
        let mut verts = Vec::with_capacity(path.len());
        for v in &path.vertices {
            let (x, y) = v.as_pair().ok_or_else(|| {
                Error::Input(format!(
                    "path {} has a vertex that is not a pair",
                    hpo.start + k as i64 + 1
                ))
            })?;
            verts.push(vec![y, x]);
        }
        alpha.push(verts);
    }
    let c_prime = hpo.paths.iter().map(|p| p.length()).fold(0.0, f64::max);
    let required = stage_budget(sys.lambda, sys.c, c_prime, tol)?;
    let half = (l - 1) / 2;

    let eta: Vector = pts.iter().map(|&(_, y)| y).collect();
    let xi: Vector = pts.iter().map(|&(x, y)| params.forward(x, y).0).collect();
    let mut seg: Vec<Vector> = pts.iter().map(|&(x, _)| vec![x]).collect();
    let mut n = 1usize;
    let mut max_len = alpha
        .iter()
        .skip(1)
        .map(|a| middle_length(a, 1))
        .fold(0.0, f64::max);
    let mut trace = ShadowTrace::default();
    trace.push(StageRecord {
        stage: 0,
        max_length: max_len,
        max_defect: sys.system.max_defect(&hpo.points),
        split: None,
        start: hpo.start,
        points: hpo.points.clone(),
    });

    loop {
        if n % 2 == 1 && alpha.len() > 1 && max_len < tol {
            let m = (n - 1) / 2;
            let points = candidate_points(&seg, &eta, n);
            let start = hpo.start + m as i64;
            for (k, q) in points.iter().enumerate() {
                let (x, y) = q.xy();
                if !params.in_x1(x, y) {
                    return Err(Error::Domain {
                        index: start + k as i64,
                    });
                }
            }
            return Ok((
                Orbit::new(WindowKind::BiInfinite, start, points, tol),
                trace,
            ));
        }
        if n >= l {
            if required > half {
                return Err(Error::WindowTooSmall {
                    required,
                    available: half,
                });
            }
            return Err(Error::Budget {
                stages: n - 1,
                max_length: max_len,
            });
        }
        let stage = Stage {
            rec,
            n,
            eta: &eta,
            xi: &xi,
            seg: &seg,
            alpha: &alpha,
        };
        let pieces: Vec<Piece> = (1..=l - n)
            .into_par_iter()
            .map(|o| stage.piece(o))
            .collect::<Result<_>>()?;
        let k = n / 2 + 1;
        let mut new_alpha: Vec<Vec<Vector>> = vec![Vec::new()];
        let (mut max_h, mut max_v) = (0.0f64, 0.0f64);
        for o in 1..l - n {
            let s = &pieces[o - 1].s;
            let u = &pieces[o].u;
            max_h = max_h.max(middle_length(u, k));
            max_v = max_v.max(middle_length(s, k));
            let mut path = s[..s.len() - 1].to_vec();
            path.extend_from_slice(u);
            new_alpha.push(path);
        }
        seg = pieces.into_iter().map(|p| p.zeta).collect();
        alpha = new_alpha;
        n += 1;
        max_len = alpha
            .iter()
            .skip(1)
            .map(|a| middle_length(a, k))
            .fold(0.0, f64::max);
        let points = candidate_points(&seg, &eta, n);
        let max_defect = points
            .windows(2)
            .map(|w| sys.system.defect(&w[0], &w[1]))
            .fold(0.0, f64::max);
        trace.push(StageRecord {
            stage: n - 1,
            max_length: max_len,
            max_defect,
            split: Some((max_h, max_v)),
            start: hpo.start + ((n - 1) / 2) as i64,
            points,
        });
    }
}

/// The orbit `h^inf(x)` of a certified Hénon system for a homotopy semi-conjugacy into it.
pub fn induced_map_hyperbolic(
    hsc: &HomotopySemiConjugacy,
    target: &CrossedSystem,
    orbit: &Orbit,
    tol: f64,
) -> Result<Orbit> {
    match hsc.target.family {
        Family::Henon(p) if p == target.params => {}
        _ => {
            return Err(Error::Certificate(
                "the semi-conjugacy does not land in the certified Hénon system".into(),
            ))
        }
    }
    let hpo = HomotopyPseudoOrbit::from_orbit(&hsc.source, orbit);
    let image = apply_hsc(hsc, &hpo)?;
    Ok(shadow_hyperbolic(target, &image, tol)?.0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Uniqueness {
    Equal,
    Distinct { index: i64, distance: f64 },
}

/// Compare two orbits on their common indices against twice the larger defect tolerance.
pub fn verify_orbit_uniqueness(
    system: &MultivaluedSystem,
    a: &Orbit,
    b: &Orbit,
    beta: &[PolyPath],
) -> Result<Uniqueness> {
    let lo = a.start.max(b.start);
    let hi = a.last_index().min(b.last_index());
    if hi < lo {
        return Err(Error::Input("the two orbit windows do not overlap".into()));
    }
    if !beta.is_empty() {
        if beta.len() as i64 != hi - lo + 1 {
            return Err(Error::Input(
                "the homotopy must have one path per common index".into(),
            ));
        }
        for (k, path) in beta.iter().enumerate() {
            let i = lo + k as i64;
            let gap = system
                .x1
                .distance(&path.start(), a.get(i).expect("in window"))
                .max(
                    system
                        .x1
                        .distance(&path.end(), b.get(i).expect("in window")),
                );
            if gap > crate::path::JOIN_TOL {
                return Err(Error::EndpointMismatch { index: i, gap });
            }
        }
    }
    let limit = 2.0 * a.defect_tol.max(b.defect_tol);
    let mut worst: Option<(i64, f64)> = None;
    for i in lo..=hi {
        let d = system
            .x1
            .distance(a.get(i).expect("in window"), b.get(i).expect("in window"));
        if d > limit && worst.is_none_or(|(_, w)| d > w) {
            worst = Some((i, d));
        }
    }
    Ok(match worst {
        None => Uniqueness::Equal,
        Some((index, distance)) => Uniqueness::Distinct { index, distance },
    })
}
