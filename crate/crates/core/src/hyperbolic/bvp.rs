//! Orbit segments of the Hénon recurrence `x_{k+1} = x_k^2 + c - b x_{k-1}` with
//! prescribed end values, solved by Newton's method on the tridiagonal system.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on Newton iterations per solve.
pub(crate) const MAX_NEWTON: usize = 100;

/// Largest change of a boundary value in one continuation step.
const MAX_BOUNDARY_STEP: f64 = 0.25;

/// Largest change of any unknown accepted in one continuation step.
const MAX_JUMP: f64 = 0.5;

/// A solved segment together with its end values.
#[derive(Clone, Debug)]
pub(crate) struct Step {
    pub left: Complex64,
    pub right: Complex64,
    pub v: Vec<Complex64>,
}

impl Step {
    /// `left, v..., right`.
    pub fn full(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.v.len() + 2);
        out.push(self.left);
        out.extend_from_slice(&self.v);
        out.push(self.right);
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Recurrence {
    pub c: Complex64,
    pub b: Complex64,
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl Recurrence {
    /// Value forced at the position after `cur` given the one before it.
    pub fn next(&self, prev: Complex64, cur: Complex64) -> Complex64 {
        cur * cur + self.c - self.b * prev
    }

    fn residual(
        &self,
        left: Complex64,
        v: &[Complex64],
        right: Complex64,
        out: &mut Vec<Complex64>,
    ) {
        out.clear();
        let n = v.len();
        for k in 0..n {
            let prev = if k == 0 { left } else { v[k - 1] };
            let next = if k + 1 == n { right } else { v[k + 1] };
            out.push(next - self.next(prev, v[k]));
        }
    }

    /// Newton's method from `v` with step halving; `v` holds the solution on success.
    pub fn solve(&self, left: Complex64, right: Complex64, v: &mut [Complex64]) -> Result<()> {
        let n = v.len();
        if n == 0 {
            return Ok(());
        }
        let mut f = Vec::with_capacity(n);
        let mut trial = vec![Complex64::new(0.0, 0.0); n];
        let mut ft = Vec::with_capacity(n);
        let mut delta = vec![Complex64::new(0.0, 0.0); n];
        self.residual(left, v, right, &mut f);
        let mut r = max_norm(&f);
        for _ in 0..MAX_NEWTON {
            let scale = 1.0 + max_norm(v).powi(2);
            if r <= 1e-13 * scale {
                // One more step polishes a converged iterate to rounding level.
                if thomas(self.b, v, &f, &mut delta).is_ok() {
                    for k in 0..n {
                        trial[k] = v[k] + delta[k];
                    }
                    self.residual(left, &trial, right, &mut ft);
                    if max_norm(&ft) < r {
                        v.copy_from_slice(&trial);
                    }
                }
                return Ok(());
            }
            thomas(self.b, v, &f, &mut delta)?;
            let mut step = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                for k in 0..n {
                    trial[k] = v[k] + delta[k] * step;
                }
                self.residual(left, &trial, right, &mut ft);
                let rt = max_norm(&ft);
                if rt.is_finite() && rt < r {
                    v.copy_from_slice(&trial);
                    std::mem::swap(&mut f, &mut ft);
                    r = rt;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                return Err(Error::Numerical(format!(
                    "Newton stalled at residual {r:e}"
                )));
            }
        }
        Err(Error::Numerical(format!(
            "Newton did not converge in {MAX_NEWTON} iterations (residual {r:e})"
        )))
    }

    /// Follow the solution while the end values move along straight segments through
    /// `targets`; returns the solution after every accepted substep, starting with `start`.
    pub fn continue_along(
        &self,
        start: &[Complex64],
        from: (Complex64, Complex64),
        targets: &[(Complex64, Complex64)],
    ) -> Result<Vec<Step>> {
        let mut out = vec![Step {
            left: from.0,
            right: from.1,
            v: start.to_vec(),
        }];
        let mut cur = start.to_vec();
        let mut at = from;
        for &goal in targets {
            let mut s = 0.0;
            let mut h = 1.0f64;
            let span = (goal.0 - at.0).norm().max((goal.1 - at.1).norm());
            if span == 0.0 {
                continue;
            }
            h = h.min(MAX_BOUNDARY_STEP / span);
            while s < 1.0 {
                let t = (s + h).min(1.0);
                let l = at.0 + (goal.0 - at.0) * t;
                let r = at.1 + (goal.1 - at.1) * t;
                let mut v = cur.clone();
                let ok = self.solve(l, r, &mut v).is_ok()
                    && v.iter().zip(&cur).all(|(a, b)| (a - b).norm() <= MAX_JUMP);
                if ok {
                    cur = v.clone();
                    out.push(Step {
                        left: l,
                        right: r,
                        v,
                    });
                    s = t;
                    h = (h * 1.5).min(MAX_BOUNDARY_STEP / span);
                } else {
                    h *= 0.5;
                    if h < 1e-12 {
                        return Err(Error::Numerical(format!(
                            "continuation stalled between end values {:?} and {:?}",
                            at, goal
                        )));
                    }
                }
            }
            at = goal;
        }
        Ok(out)
    }
}

/// Solve `J delta = -f` for the tridiagonal Jacobian with sub-diagonal `b`,
/// diagonal `-2 v_k` and super-diagonal `1`.
fn thomas(b: Complex64, v: &[Complex64], f: &[Complex64], delta: &mut [Complex64]) -> Result<()> {
    let n = v.len();
    let one = Complex64::new(1.0, 0.0);
    let mut cp = vec![Complex64::new(0.0, 0.0); n];
    let mut dp = vec![Complex64::new(0.0, 0.0); n];
    let mut denom = -2.0 * v[0];
    for k in 0..n {
        if k > 0 {
            denom = -2.0 * v[k] - b * cp[k - 1];
        }
        if denom.norm() < 1e-300 {
            return Err(Error::Numerical("singular orbit-segment Jacobian".into()));
        }
        cp[k] = one / denom;
        let prev = if k > 0 {
            dp[k - 1]
        } else {
            Complex64::new(0.0, 0.0)
        };
        dp[k] = (-f[k] - b * prev) / denom;
    }
    delta[n - 1] = dp[n - 1];
    for k in (0..n - 1).rev() {
        delta[k] = dp[k] - cp[k] * delta[k + 1];
    }
    Ok(())
}
