use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hshadow::associated::to_henon;
use hshadow::{
    associated_expanding, make_circle_system, make_henon_system, shadow_expanding,
    shadow_hyperbolic, Complex64, HenonParams, HomotopyPseudoOrbit, Orbit, Perturbation, Point,
    PolyPath, WindowKind,
};

fn doubling_hpo() -> (hshadow::MultivaluedSystem, HomotopyPseudoOrbit) {
    let sys = make_circle_system(2, 0.0, Perturbation::None).unwrap();
    let points = vec![Point::Real(0.1); 50];
    let paths = (0..49)
        .map(|_| PolyPath::segment(sys.x0.clone(), Point::Real(0.2), Point::Real(0.1)))
        .collect();
    let hpo = HomotopyPseudoOrbit::new(&sys, WindowKind::Forward, 0, points, paths).unwrap();
    (sys, hpo)
}

fn expanding(c: &mut Criterion) {
    let (sys, hpo) = doubling_hpo();
    c.bench_function("doubling, 50 points, tol 1e-10", |b| {
        b.iter(|| shadow_expanding(&sys, black_box(&hpo), 1e-10).unwrap())
    });
}

fn hyperbolic(c: &mut Criterion) {
    let params = HenonParams::real(-6.0, 0.1, 4.0);
    let sys = make_henon_system(params).unwrap();
    let r = 6f64.sqrt();
    let sign = |i: usize| if (i * 7 + 3) % 5 < 2 { r } else { -r };
    let points: Vec<Point> = (0..61)
        .map(|k| {
            Point::Pair(
                Complex64::new(sign(k + 1), 0.0),
                Complex64::new(sign(k), 0.0),
            )
        })
        .collect();
    let paths = points
        .windows(2)
        .map(|w| {
            let (x, y) = w[0].as_pair().unwrap();
            let (u, v) = params.forward(x, y);
            PolyPath::segment(sys.system.x0.clone(), Point::Pair(u, v), w[1])
        })
        .collect();
    let hpo =
        HomotopyPseudoOrbit::new(&sys.system, WindowKind::BiInfinite, -30, points, paths).unwrap();
    c.bench_function("horseshoe, 61 points, tol 1e-10", |b| {
        b.iter(|| shadow_hyperbolic(&sys, black_box(&hpo), 1e-10).unwrap())
    });
}

fn solenoid(c: &mut Criterion) {
    let mut params = HenonParams::real(0.0, 0.15, 1.2);
    params.rx_inner = Some(0.7);
    let a = associated_expanding(
        &make_henon_system(params).unwrap(),
        Complex64::new(0.0, 0.0),
    )
    .unwrap();
    let angle = |i: i64| 2f64.powi(i.rem_euclid(3) as i32) / 7.0;
    let orbit = Orbit::centered(
        (-40..=40)
            .map(|i| Point::Complex(Complex64::from_polar(1.0, std::f64::consts::TAU * angle(i))))
            .collect(),
    );
    let mut group = c.benchmark_group("solenoid");
    group.sample_size(10);
    group.bench_function("to_henon, N = 40", |b| {
        b.iter(|| to_henon(&a, black_box(&orbit), 1e-10).unwrap())
    });
    group.finish();
}

criterion_group!(benches, expanding, hyperbolic, solenoid);
criterion_main!(benches);
