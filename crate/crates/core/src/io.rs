//! JSON system descriptions, orbit CSV and file helpers.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expanding::{make_circle_system, make_polynomial_system};
use crate::hyperbolic::{make_henon_system, CrossedSystem, HenonParams};
use crate::orbit::{HomotopyPseudoOrbit, Orbit, WindowKind, DEFAULT_DEFECT_TOL};
use crate::path::PolyPath;
use crate::space::{Metric, Point, Space};
use crate::symbolic::graph_system;
use crate::system::{Family, MultivaluedSystem, Perturbation};
use crate::trace::fmt15;

/// A complex number written either as a real number or as `[re, im]`.
pub mod complex_value {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Complex64, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Real(re) => Complex64::new(re, 0.0),
            Repr::Pair([re, im]) => Complex64::new(re, im),
        })
    }
}

/// `{"family": ..., "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum SystemSpec {
    CircleLinear {
        degree: u32,
    },
    CirclePerturbed {
        degree: u32,
        epsilon: f64,
        perturbation: Perturbation,
    },
    Polynomial {
        #[serde(with = "complex_value")]
        c: Complex64,
        radius: f64,
        #[serde(default)]
        metric: Metric,
    },
    Henon {
        #[serde(with = "complex_value")]
        c: Complex64,
        #[serde(with = "complex_value")]
        b: Complex64,
        rx: f64,
        ry: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rx_inner: Option<f64>,
    },
    Graph {
        vertices: usize,
        /// `adjacency[i][j]` edges from `i` to `j`.
        adjacency: Vec<Vec<u64>>,
    },
}

#[derive(Clone, Debug)]
pub enum BuiltSystem {
    Expanding(MultivaluedSystem),
    Henon(CrossedSystem),
}

impl BuiltSystem {
    pub fn system(&self) -> &MultivaluedSystem {
        match self {
            BuiltSystem::Expanding(s) => s,
            BuiltSystem::Henon(h) => &h.system,
        }
    }
}

impl SystemSpec {
    pub fn henon_params(&self) -> Option<HenonParams> {
        match *self {
            SystemSpec::Henon {
                c,
                b,
                rx,
                ry,
                rx_inner,
            } => Some(HenonParams {
                c,
                b,
                rx,
                ry,
                rx_inner,
            }),
            _ => None,
        }
    }

    /// Build and certify the system.
    pub fn build(&self) -> Result<BuiltSystem> {
        Ok(match self {
            SystemSpec::CircleLinear { degree } => {
                BuiltSystem::Expanding(make_circle_system(*degree, 0.0, Perturbation::None)?)
            }
            SystemSpec::CirclePerturbed {
                degree,
                epsilon,
                perturbation,
            } => BuiltSystem::Expanding(make_circle_system(*degree, *epsilon, *perturbation)?),
            SystemSpec::Polynomial { c, radius, metric } => {
                BuiltSystem::Expanding(make_polynomial_system(*c, *radius, *metric)?)
            }
            SystemSpec::Henon { .. } => {
                BuiltSystem::Henon(make_henon_system(self.henon_params().expect("henon"))?)
            }
            SystemSpec::Graph {
                vertices,
                adjacency,
            } => {
                if adjacency.len() != *vertices || adjacency.iter().any(|r| r.len() != *vertices) {
                    return Err(Error::Input(format!(
                        "adjacency must be {vertices} x {vertices}"
                    )));
                }
                let mut edges = Vec::new();
                for (i, row) in adjacency.iter().enumerate() {
                    for (j, &k) in row.iter().enumerate() {
                        edges.extend(std::iter::repeat_n((i, j), k as usize));
                    }
                }
                BuiltSystem::Expanding(graph_system(*vertices, edges)?.to_system())
            }
        })
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Input(e.to_string()))
}

pub fn load_system(path: &Path) -> Result<SystemSpec> {
    from_json(&read_text(path)?)
}

fn coords(p: &Point) -> [f64; 4] {
    match *p {
        Point::Real(t) => [t, 0.0, 0.0, 0.0],
        Point::Vertex(v) => [v as f64, 0.0, 0.0, 0.0],
        Point::Complex(z) => [z.re, z.im, 0.0, 0.0],
        Point::Pair(x, y) => [x.re, x.im, y.re, y.im],
    }
}

fn io_err(e: csv::Error) -> Error {
    Error::Input(format!("CSV: {e}"))
}

/// Rows `index, re_x, im_x, re_y, im_y` with fifteen significant digits.
pub fn orbit_to_csv(orbit: &Orbit) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "re_x", "im_x", "re_y", "im_y"])
        .map_err(io_err)?;
    for (k, p) in orbit.points.iter().enumerate() {
        let mut row = vec![(orbit.start + k as i64).to_string()];
        row.extend(coords(p).iter().map(|v| fmt15(*v)));
        w.write_record(&row).map_err(io_err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Input(e.to_string()))?)
        .map_err(|e| Error::Input(e.to_string()))
}

/// Parse [`orbit_to_csv`] output, reading points of the kind that `space` holds.
pub fn orbit_from_csv(text: &str, space: &Space) -> Result<Orbit> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut start = None;
    let mut points = Vec::new();
    for (k, row) in r.records().enumerate() {
        let row = row.map_err(io_err)?;
        let field = |j: usize| -> Result<f64> {
            row.get(j)
                .ok_or_else(|| Error::Input(format!("row {k} has too few columns")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Input(format!("row {k}: {e}")))
        };
        let index = field(0)? as i64;
        let expected = *start.get_or_insert(index) + k as i64;
        if index != expected {
            return Err(Error::Input(format!(
                "row {k}: index {index}, expected {expected}"
            )));
        }
        let p = match space {
            Space::Circle => Point::Real(field(1)?),
            Space::FiniteDiscrete { .. } => Point::Vertex(field(1)? as usize),
            Space::Product { .. } => Point::Pair(
                Complex64::new(field(1)?, field(2)?),
                Complex64::new(field(3)?, field(4)?),
            ),
            _ => Point::Complex(Complex64::new(field(1)?, field(2)?)),
        };
        points.push(p);
    }
    let start = start.ok_or_else(|| Error::Input("empty orbit file".into()))?;
    let kind = if start < 0 {
        WindowKind::BiInfinite
    } else {
        WindowKind::Forward
    };
    Ok(Orbit::new(kind, start, points, DEFAULT_DEFECT_TOL))
}

/// Round to fifteen significant digits.
fn round15(v: f64) -> f64 {
    fmt15(v).parse().unwrap_or(v)
}

fn complex_json(z: Complex64) -> Value {
    json!([round15(z.re), round15(z.im)])
}

/// Numbers for circle points and vertices, `[re, im]` for planar points and
/// `[[re, im], [re, im]]` for product points.
pub fn point_to_json(p: &Point) -> Value {
    match *p {
        Point::Real(t) => json!(round15(t)),
        Point::Vertex(v) => json!(v),
        Point::Complex(z) => complex_json(z),
        Point::Pair(x, y) => json!([complex_json(x), complex_json(y)]),
    }
}

fn complex_from_json(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(n) => Some(Complex64::new(n.as_f64()?, 0.0)),
        Value::Array(a) if a.len() == 2 => Some(Complex64::new(a[0].as_f64()?, a[1].as_f64()?)),
        _ => None,
    }
}

/// Inverse of [`point_to_json`] for a point of `space`.
pub fn point_from_json(v: &Value, space: &Space) -> Result<Point> {
    let p = match space {
        Space::Circle => v.as_f64().map(Point::Real),
        Space::FiniteDiscrete { .. } => v.as_u64().map(|k| Point::Vertex(k as usize)),
        Space::Product { .. } => match v {
            Value::Array(a) if a.len() == 2 => complex_from_json(&a[0])
                .zip(complex_from_json(&a[1]))
                .map(|(x, y)| Point::Pair(x, y)),
            _ => None,
        },
        _ => complex_from_json(v).map(Point::Complex),
    };
    p.ok_or_else(|| {
        Error::Input(format!(
            "{v} is not a point of a {} space",
            space.kind_name()
        ))
    })
}

/// `{"kind", "start", "points", "paths"}`; without `paths` the file holds an orbit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HpoFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<WindowKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<i64>,
    pub points: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<Vec<Value>>>,
}

/// Orbit JSON in the [`HpoFile`] layout.
pub fn orbit_to_json(orbit: &Orbit) -> Result<String> {
    to_json(&HpoFile {
        kind: Some(orbit.kind),
        start: Some(orbit.start),
        points: orbit.points.iter().map(point_to_json).collect(),
        paths: None,
    })
}

/// Read an [`HpoFile`]. Missing paths become the segments of [`HomotopyPseudoOrbit::from_orbit`];
/// the window defaults to `[0, n)` for expanding systems and is centred for Hénon systems.
pub fn hpo_from_json(text: &str, system: &MultivaluedSystem) -> Result<HomotopyPseudoOrbit> {
    let file: HpoFile = from_json(text)?;
    let n = file.points.len();
    let henon = matches!(system.family, Family::Henon(_));
    let kind = file.kind.unwrap_or(if henon {
        WindowKind::BiInfinite
    } else {
        WindowKind::Forward
    });
    let start = file.start.unwrap_or(match kind {
        WindowKind::Forward => 0,
        WindowKind::BiInfinite => -((n / 2) as i64),
    });
    let points = file
        .points
        .iter()
        .map(|v| point_from_json(v, &system.x1))
        .collect::<Result<Vec<_>>>()?;
    match file.paths {
        None => {
            if points.is_empty() {
                return Err(Error::Input("empty orbit".into()));
            }
            Ok(HomotopyPseudoOrbit::from_orbit(
                system,
                &Orbit::new(kind, start, points, DEFAULT_DEFECT_TOL),
            ))
        }
        Some(raw) => {
            let paths = raw
                .iter()
                .map(|verts| {
                    let vs = verts
                        .iter()
                        .map(|v| point_from_json(v, &system.x0))
                        .collect::<Result<_>>()?;
                    PolyPath::new(system.x0.clone(), vs)
                })
                .collect::<Result<Vec<_>>>()?;
            HomotopyPseudoOrbit::new(system, kind, start, points, paths)
        }
    }
}

/// An orbit or pseudo-orbit file, CSV when the name ends in `.csv` and JSON otherwise.
pub fn load_hpo(path: &Path, system: &MultivaluedSystem) -> Result<HomotopyPseudoOrbit> {
    let text = read_text(path)?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        let orbit = orbit_from_csv(&text, &system.x1)?;
        Ok(HomotopyPseudoOrbit::from_orbit(system, &orbit))
    } else {
        hpo_from_json(&text, system)
    }
}
