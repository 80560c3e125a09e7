//! The four commands.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use hshadow::associated::{from_henon, to_henon};
use hshadow::expanding::{circle_interpolation_hsc, default_tol, half_rotation_hsc};
use hshadow::hsc::HomotopySemiConjugacy;
use hshadow::io::{
    load_hpo, load_system, orbit_to_csv, orbit_to_json, write_text, BuiltSystem, SystemSpec,
};
use hshadow::symbolic::MarkovPartition;
use hshadow::trace::fmt15;
use hshadow::{
    associated_expanding, check_bcc, check_occ, classify_henon, code_orbit, induced_map_expanding,
    make_henon_system, shadow_expanding, shadow_hyperbolic, shift_orbit, Error, Family,
    HomotopyPseudoOrbit, MultivaluedSystem, Orbit, Point, Result, ShadowTrace,
};
use serde_json::{json, Value};

use crate::{Format, Homotopy, Opts};

/// Tolerance for Hénon targets when `--tol` is absent.
const HENON_TOL: f64 = 1e-9;

fn require<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::Input(format!("{flag} is required")))
}

fn tolerance(o: &Opts, fallback: f64) -> Result<f64> {
    match o.tol {
        Some(t) if t.is_nan() || t <= 0.0 => {
            Err(Error::Input(format!("--tol must be positive, got {t}")))
        }
        Some(t) => Ok(t),
        None => Ok(fallback),
    }
}

fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(fmt15(v).parse::<f64>().unwrap_or(v))
    } else {
        Value::Null
    }
}

fn emit(o: &Opts, text: &str) -> Result<()> {
    match &o.out {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn restrict(
    hpo: HomotopyPseudoOrbit,
    window: Option<usize>,
    henon: bool,
) -> Result<HomotopyPseudoOrbit> {
    match window {
        None => Ok(hpo),
        Some(0) => Err(Error::Input("--window must be at least 1".into())),
        Some(n) if henon => Ok(hpo.restrict(-(n as i64), n as i64)),
        Some(n) => {
            let start = hpo.start;
            Ok(hpo.restrict(start, start + n as i64))
        }
    }
}

fn orbit_text(orbit: &Orbit, format: Format) -> Result<String> {
    match format {
        Format::Json => orbit_to_json(orbit),
        Format::Csv => orbit_to_csv(orbit),
    }
}

pub fn shadow(o: &Opts) -> Result<()> {
    let built = load_system(&o.system)?.build()?;
    let hpo = load_hpo(require(&o.input, "--input")?, built.system())?;
    let (orbit, trace): (Orbit, ShadowTrace) = match &built {
        BuiltSystem::Expanding(sys) => {
            let hpo = restrict(hpo, o.window, false)?;
            let (orbit, _, trace) = shadow_expanding(sys, &hpo, tolerance(o, default_tol(sys))?)?;
            (orbit, trace)
        }
        BuiltSystem::Henon(h) => {
            let hpo = restrict(hpo, o.window, true)?;
            shadow_hyperbolic(h, &hpo, tolerance(o, HENON_TOL)?)?
        }
    };
    emit(o, &orbit_text(&orbit, o.format)?)?;
    if let Some(out) = &o.out {
        let mut name = out.clone().into_os_string();
        name.push(".trace.csv");
        write_text(Path::new(&name), &trace.to_csv()?)?;
    }
    Ok(())
}

pub fn check(o: &Opts) -> Result<()> {
    let spec = load_system(&o.system)?;
    let (report, outcome) = match spec.henon_params() {
        Some(p) => {
            p.validate()?;
            let bcc = check_bcc(&p);
            let occ = check_occ(&p);
            let class = classify_henon(p.c, p.b);
            let cert = make_henon_system(p);
            let (degree, lambda) = match &cert {
                Ok(h) => (json!(h.degree), num(h.lambda)),
                Err(_) => (Value::Null, Value::Null),
            };
            let report = json!({
                "bcc": [num(bcc.0), num(bcc.1)],
                "occ": num(occ),
                "degree": degree,
                "lambda": lambda,
                "classification": class.name(),
                "model": class.model(),
            });
            (report, cert.map(|_| ()))
        }
        None => match spec.build() {
            Ok(built) => {
                let cert = built.system().certificate.as_ref();
                let report = json!({
                    "lambda": cert.map(|c| num(c.lambda)),
                    "delta": cert.map(|c| num(c.delta)),
                });
                (report, Ok(()))
            }
            Err(e @ Error::Certificate(_)) => (json!({ "lambda": null, "delta": null }), Err(e)),
            Err(e) => return Err(e),
        },
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Input(e.to_string()))?;
    emit(o, &text)?;
    outcome
}

fn expanding(built: BuiltSystem) -> Result<Arc<MultivaluedSystem>> {
    match built {
        BuiltSystem::Expanding(s) => Ok(Arc::new(s)),
        BuiltSystem::Henon(_) => Err(Error::Input("this homotopy needs expanding systems".into())),
    }
}

/// The Hénon system of the pair and the polynomial description its associated system must match.
fn associated_pair(henon: &SystemSpec, poly: &SystemSpec) -> Result<hshadow::AssociatedSystem> {
    let params = henon
        .henon_params()
        .ok_or_else(|| Error::Input("associated homotopies need a Hénon system".into()))?;
    let a = associated_expanding(
        &make_henon_system(params)?,
        hshadow::Complex64::new(0.0, 0.0),
    )?;
    match poly {
        SystemSpec::Polynomial { c, .. } if *c == a.c_prime() => Ok(a),
        _ => Err(Error::Input(format!(
            "the expanding side must be the polynomial z^2 + {} associated with y0 = 0",
            a.c_prime()
        ))),
    }
}

type Induced = Box<dyn Fn(&Orbit) -> Result<Orbit>>;

/// Source system, target space, tolerance and induced map of the requested semi-conjugacy.
fn induced(o: &Opts) -> Result<(MultivaluedSystem, hshadow::Space, f64, Induced)> {
    let name = o
        .homotopy
        .ok_or_else(|| Error::Input("--homotopy is required".into()))?;
    let src = load_system(&o.system)?;
    let dst = match &o.system2 {
        Some(p) => load_system(p)?,
        None => src.clone(),
    };
    Ok(match name {
        Homotopy::Identity | Homotopy::HalfRotation => {
            let a = expanding(src.build()?)?;
            let b = expanding(dst.build()?)?;
            let hsc = match name {
                Homotopy::HalfRotation if src == dst => half_rotation_hsc(a.clone())?,
                Homotopy::HalfRotation => {
                    return Err(Error::Input(
                        "half-rotation maps a circle system to itself".into(),
                    ))
                }
                _ if src == dst => HomotopySemiConjugacy::identity(a.clone()),
                _ => circle_interpolation_hsc(a.clone(), b.clone())?,
            };
            let tol = tolerance(o, default_tol(&b))?;
            let f: Induced = Box::new(move |x| induced_map_expanding(&hsc, x, tol));
            ((*a).clone(), b.x1.clone(), tol, f)
        }
        Homotopy::AssociatedK => {
            let a = associated_pair(&dst, &src)?;
            let tol = tolerance(o, HENON_TOL)?;
            let (sys, space) = (a.system.clone(), a.parent.system.x1.clone());
            (sys, space, tol, Box::new(move |x| to_henon(&a, x, tol)))
        }
        Homotopy::AssociatedH => {
            let a = associated_pair(&src, &dst)?;
            let tol = tolerance(o, HENON_TOL)?;
            let (sys, space) = (a.parent.system.clone(), a.system.x0.clone());
            (sys, space, tol, Box::new(move |x| from_henon(&a, x, tol)))
        }
    })
}

fn coords(p: &Point) -> [f64; 4] {
    match *p {
        Point::Real(t) => [t, 0.0, 0.0, 0.0],
        Point::Vertex(v) => [v as f64, 0.0, 0.0, 0.0],
        Point::Complex(z) => [z.re, z.im, 0.0, 0.0],
        Point::Pair(x, y) => [x.re, x.im, y.re, y.im],
    }
}

pub fn conjugate(o: &Opts) -> Result<()> {
    let (source, space, tol, map) = induced(o)?;
    let hpo = load_hpo(require(&o.input, "--input")?, &source)?;
    let orbit = Orbit::new(
        hpo.kind,
        hpo.start,
        hpo.points,
        hshadow::orbit::DEFAULT_DEFECT_TOL,
    );
    let image = map(&orbit)?;
    let lhs = map(&shift_orbit(&orbit)?)?;
    let rhs = shift_orbit(&image)?;
    let mut rows = Vec::new();
    for (k, q) in image.points.iter().enumerate() {
        let i = image.start + k as i64;
        if let (Some(p), Some(a), Some(b)) = (orbit.get(i), lhs.get(i), rhs.get(i)) {
            rows.push((i, *p, *q, space.distance(a, b)));
        }
    }
    if rows.is_empty() {
        return Err(Error::Input(
            "the input window is too short for a residual".into(),
        ));
    }
    let max_res = rows.iter().map(|r| r.3).fold(0.0, f64::max);
    let text = match o.format {
        Format::Csv => {
            let mut s = String::from(
                "index,src_re_x,src_im_x,src_re_y,src_im_y,img_re_x,img_im_x,img_re_y,img_im_y,residual\n",
            );
            for (i, p, q, r) in &rows {
                let mut fields = vec![i.to_string()];
                fields.extend(coords(p).iter().chain(&coords(q)).map(|v| fmt15(*v)));
                fields.push(fmt15(*r));
                s.push_str(&fields.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let report = json!({
                "source": serde_json::from_str::<Value>(&orbit_to_json(&orbit)?).expect("valid JSON"),
                "image": serde_json::from_str::<Value>(&orbit_to_json(&image)?).expect("valid JSON"),
                "residual": rows.iter().map(|r| num(r.3)).collect::<Vec<_>>(),
                "max_residual": num(max_res),
            });
            serde_json::to_string_pretty(&report).map_err(|e| Error::Input(e.to_string()))?
        }
    };
    emit(o, &text)?;
    if max_res > 2.0 * tol {
        return Err(Error::Certificate(format!(
            "semi-conjugacy residual {max_res:e} exceeds 2 tol = {:e}",
            2.0 * tol
        )));
    }
    Ok(())
}

pub fn code(o: &Opts) -> Result<()> {
    let sys = expanding(load_system(&o.system)?.build()?)?;
    let hpo = restrict(
        load_hpo(require(&o.input, "--input")?, &sys)?,
        o.window,
        false,
    )?;
    let (orbit, _, _) = shadow_expanding(&sys, &hpo, tolerance(o, default_tol(&sys))?)?;
    let symbols = match sys.family {
        Family::Circle { degree, .. } => code_orbit(&sys, &MarkovPartition::new(degree)?, &orbit)?,
        Family::Graph(_) => orbit.points.iter().filter_map(Point::as_vertex).collect(),
        _ => {
            return Err(Error::Unsupported(
                "coding needs a circle or graph system".into(),
            ))
        }
    };
    let text = match o.format {
        Format::Json => {
            serde_json::to_string_pretty(&json!({ "start": orbit.start, "symbols": symbols }))
                .map_err(|e| Error::Input(e.to_string()))?
        }
        Format::Csv => {
            let mut s = String::from("index,symbol\n");
            for (k, sym) in symbols.iter().enumerate() {
                s.push_str(&format!("{},{sym}\n", orbit.start + k as i64));
            }
            s
        }
    };
    emit(o, &text)
}
