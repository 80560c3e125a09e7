//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any criterion fails.

mod circle;
mod henon;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

pub struct Outcome {
    pub ok: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(ok: bool, detail: impl Into<String>) -> Outcome {
        Outcome {
            ok,
            detail: detail.into(),
        }
    }

    pub fn and(self, other: Outcome) -> Outcome {
        Outcome::new(
            self.ok && other.ok,
            format!("{}; {}", self.detail, other.detail),
        )
    }
}

type Criterion = fn() -> hshadow::Result<Outcome>;

fn run(id: usize, budget: Option<u64>, f: Criterion) -> bool {
    let t = Instant::now();
    let out = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => Outcome::new(false, format!("error: {e}")),
        Err(_) => Outcome::new(false, "panicked"),
    };
    let elapsed = t.elapsed();
    let in_time = budget.is_none_or(|s| elapsed <= Duration::from_secs(s));
    let limit = budget
        .map(|s| format!(" (limit {s} s)"))
        .unwrap_or_default();
    let ok = out.ok && in_time;
    println!(
        "{} criterion {id}: {} [{:.2} s{limit}]",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64()
    );
    ok
}

fn main() {
    let criteria: [(usize, Option<u64>, Criterion); 9] = [
        (1, Some(5), circle::geometric_decay),
        (2, Some(30), idempotence_and_uniqueness),
        (3, None, circle::degree_three_self_conjugacies),
        (4, None, circle::symbolic_oracle),
        (5, Some(60), henon::horseshoe),
        (6, Some(120), henon::solenoid),
        (7, None, henon::hyperbolic_decay),
        (8, None, circle::functoriality),
        (9, None, henon::y0_independence),
    ];
    let passed = criteria
        .iter()
        .filter(|&&(id, budget, f)| run(id, budget, f))
        .count();
    println!("{passed} of {} criteria passed", criteria.len());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}

fn idempotence_and_uniqueness() -> hshadow::Result<Outcome> {
    Ok(circle::idempotence()?.and(henon::idempotence()?))
}
