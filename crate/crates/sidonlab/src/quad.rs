//! Evaluation of the singular integral
//!
//! I = ∭_D x^{-2/3} y^{-2/3} z^{-2/3} (x+y−z)^{-2/3} dV,
//! D = {0 < x ≤ 1, 0 < y < x, y < z < (x+y)/2},
//!
//! together with its truncated variants I(M) = ∭_D min(f, M) dV.
//!
//! Two independent routes are provided as mutual oracles:
//!
//! * [`integrate_singular`]: the inner z integral reduces analytically to an
//!   incomplete beta, leaving a 2-D integral that the substitution x = u³,
//!   y = v³ renders bounded; integrated by nested adaptive Gauss-Kronrod.
//! * [`integrate_singular_cubature`]: the full 3-D cube substitution
//!   x = u³, y = v³, z = w³ (Jacobian 27u²v²w² cancels three singular
//!   factors), integrated by iterated adaptive Simpson.

use crate::{Error, Result};
use serde::Serialize;
use std::cell::Cell;
use std::collections::BinaryHeap;

pub use crate::special::{beta, gamma, incomplete_beta, ln_gamma};

/// Default integrand-evaluation budget.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const FRAC_1_3: f64 = 1.0 / 3.0;
const FRAC_2_3: f64 = 2.0 / 3.0;

/// Outcome of a quadrature run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Nested-rule difference summed over cells: an estimate, not a bound.
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// Shared evaluation counter enforcing the call budget.
pub struct EvalCounter {
    used: Cell<u64>,
    budget: u64,
}

impl EvalCounter {
    pub fn new(budget: u64) -> Self {
        EvalCounter {
            used: Cell::new(0),
            budget,
        }
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    fn charge(&self, n: u64) -> Result<()> {
        let next = self.used.get() + n;
        if next > self.budget {
            return Err(Error::BudgetExceeded(format!(
                "integrand evaluation budget of {} calls exhausted",
                self.budget
            )));
        }
        self.used.set(next);
        Ok(())
    }
}

fn check_domain(x: f64, y: f64, z: f64) -> Result<()> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::OutsideDomain {
            constraint: format!("0 < x ≤ 1 violated by x = {x}"),
        });
    }
    if !(y > 0.0 && y < x) {
        return Err(Error::OutsideDomain {
            constraint: format!("0 < y < x violated by y = {y}, x = {x}"),
        });
    }
    if !(z > y && z < (x + y) / 2.0) {
        return Err(Error::OutsideDomain {
            constraint: format!("y < z < (x+y)/2 violated by z = {z}"),
        });
    }
    Ok(())
}

/// f(x,y,z) = (x y z (x+y−z))^{-2/3} at a point of D.
pub fn evaluate_f(x: f64, y: f64, z: f64) -> Result<f64> {
    check_domain(x, y, z)?;
    Ok((x * y * z * (x + y - z)).powf(-FRAC_2_3))
}

/// f_M = min(f, M) at a point of D.
pub fn evaluate_f_truncated(x: f64, y: f64, z: f64, m: f64) -> Result<f64> {
    if m <= 0.0 {
        return Err(Error::param("M", "truncation level must be positive"));
    }
    Ok(evaluate_f(x, y, z)?.min(m))
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7-15 pair
// ---------------------------------------------------------------------------

// Abscissae of the 15-point Kronrod rule on [-1, 1]; even entries are
// Kronrod-only, odd entries (and the centre) carry the embedded 7-point
// Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

struct PanelEstimate {
    value: f64,
    error: f64,
}

// One Gauss-Kronrod 7-15 application on [a, b]: 15 integrand calls.
fn gk15(f: &mut dyn FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<PanelEstimate> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre)?;
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    let mut resabs = resk.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let offset = half * XGK[j];
        let f_lo = f(centre - offset)?;
        let f_hi = f(centre + offset)?;
        fv[j] = f_lo;
        fv[14 - j] = f_hi;
        let sum = f_lo + f_hi;
        resk += WGK[j] * sum;
        resabs += WGK[j] * (f_lo.abs() + f_hi.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * sum;
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    let value = resk * half;
    let error = rescale_error((resk - resg) * half, resabs * half.abs(), resasc * half.abs());
    Ok(PanelEstimate { value, error })
}

// QUADPACK-style conversion of the raw rule difference into an error
// estimate that stays meaningful as panels converge.
fn rescale_error(raw: f64, result_abs: f64, result_asc: f64) -> f64 {
    let mut err = raw.abs();
    if result_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / result_asc).powf(1.5);
        err = if scale < 1.0 { result_asc * scale } else { result_asc };
    }
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * result_abs);
    }
    err
}

#[derive(PartialEq)]
struct Segment {
    error: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl Eq for Segment {}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

// Globally adaptive 1-D integration: repeatedly bisect the panel with the
// largest error estimate until the summed estimate meets abs_tol.
fn adaptive_gk15(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    abs_tol: f64,
    counter: &EvalCounter,
) -> Result<(f64, f64)> {
    const MAX_PANELS: usize = 1 << 16;
    if a == b {
        return Ok((0.0, 0.0));
    }
    let first = gk15(f, a, b)?;
    let mut heap = BinaryHeap::new();
    let mut total_value = first.value;
    let mut total_error = first.error;
    heap.push(Segment {
        error: first.error,
        a,
        b,
        value: first.value,
    });
    while total_error > abs_tol && heap.len() < MAX_PANELS {
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; keep its estimate
            total_error = heap.iter().map(|s| s.error).sum::<f64>() + worst.error;
            heap.push(worst);
            break;
        }
        let split = gk15(f, worst.a, mid).and_then(|lo| Ok((lo, gk15(f, mid, worst.b)?)));
        let (lo, hi) = match split {
            Ok(pair) => pair,
            Err(Error::BudgetExceeded(_)) => {
                let partial = total_value;
                return Err(Error::NonConvergence {
                    partial,
                    error_estimate: total_error,
                    evaluations: counter.used(),
                });
            }
            Err(e) => return Err(e),
        };
        total_value += lo.value + hi.value - worst.value;
        total_error += lo.error + hi.error - worst.error;
        heap.push(Segment {
            error: lo.error,
            a: worst.a,
            b: mid,
            value: lo.value,
        });
        heap.push(Segment {
            error: hi.error,
            a: mid,
            b: worst.b,
            value: hi.value,
        });
    }
    if total_error > abs_tol && heap.len() >= MAX_PANELS {
        return Err(Error::NonConvergence {
            partial: total_value,
            error_estimate: total_error,
            evaluations: counter.used(),
        });
    }
    Ok((total_value, total_error.max(0.0)))
}

/// General-purpose adaptive 1-D integration of f over [a, b] to the given
/// absolute tolerance; returns (value, error_estimate). Used for the
/// closed-form cross-checks.
pub fn integrate_1d(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<(f64, f64)> {
    if abs_tol <= 0.0 || abs_tol.is_nan() {
        return Err(Error::param("abs_tol", "tolerance must be positive"));
    }
    let counter = EvalCounter::new(10_000_000);
    let mut counted = |x: f64| -> Result<f64> {
        counter.charge(1)?;
        f(x)
    };
    adaptive_gk15(&mut counted, a, b, abs_tol, &counter)
}

// ---------------------------------------------------------------------------
// Primary route: analytic inner z, 2-D outer
// ---------------------------------------------------------------------------

// After integrating z out analytically and substituting x = u³, y = v³, the
// remaining integrand over {0 < v < u < 1} is
//   g(u,v) = 9 B(1/3,1/3) (u³+v³)^{-1/3} (1/2 − I_{v³/(u³+v³)}(1/3,1/3)),
// bounded on the whole triangle (it vanishes on the diagonal v = u).
fn reduced_integrand(u: f64, v: f64, b13: f64, counter: &EvalCounter) -> Result<f64> {
    counter.charge(1)?;
    let s = u * u * u + v * v * v;
    if s == 0.0 {
        return Ok(0.0);
    }
    let ratio = (v * v * v / s).clamp(0.0, 1.0);
    let tail = 0.5 - incomplete_beta(ratio, FRAC_1_3, FRAC_1_3)?;
    Ok(9.0 * b13 * s.powf(-FRAC_1_3) * tail)
}

/// I by the inner-z analytic reduction (primary method).
pub fn integrate_singular() -> Result<QuadratureResult> {
    integrate_singular_with(1e-9, DEFAULT_BUDGET)
}

/// Primary method with explicit absolute tolerance and evaluation budget.
pub fn integrate_singular_with(abs_tol: f64, budget: u64) -> Result<QuadratureResult> {
    if abs_tol <= 0.0 || abs_tol.is_nan() {
        return Err(Error::param("abs_tol", "tolerance must be positive"));
    }
    let b13 = beta(FRAC_1_3, FRAC_1_3)?;
    let counter = EvalCounter::new(budget);
    let inner_tol = 0.25 * abs_tol;
    let outer_tol = 0.5 * abs_tol;
    let max_inner_error = Cell::new(0.0f64);
    let mut outer = |u: f64| -> Result<f64> {
        let mut inner = |v: f64| reduced_integrand(u, v, b13, &counter);
        let (value, err) = adaptive_gk15(&mut inner, 0.0, u, inner_tol, &counter)?;
        max_inner_error.set(max_inner_error.get().max(err));
        Ok(value)
    };
    let (value, outer_err) = adaptive_gk15(&mut outer, 0.0, 1.0, outer_tol, &counter)?;
    Ok(QuadratureResult {
        value,
        // inner estimates are absolute errors of the outer integrand over a
        // unit-length range, so the max propagates additively
        error_estimate: outer_err + max_inner_error.get(),
        evaluations: counter.used(),
    })
}

// ---------------------------------------------------------------------------
// Secondary route: 3-D cube substitution, iterated adaptive Simpson
// ---------------------------------------------------------------------------

// Adaptive Simpson with Richardson extrapolation; err accumulates the
// per-leaf |S₂ − S₁|/15 terms.
struct SimpsonOutcome {
    value: f64,
    error: f64,
}

fn adaptive_simpson(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<SimpsonOutcome> {
    if a == b {
        return Ok(SimpsonOutcome {
            value: 0.0,
            error: 0.0,
        });
    }
    let m = 0.5 * (a + b);
    let fa = f(a)?;
    let fm = f(m)?;
    let fb = f(b)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    abs_tol: f64,
    depth: u32,
) -> Result<SimpsonOutcome> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * abs_tol {
        return Ok(SimpsonOutcome {
            value: left + right + diff / 15.0,
            error: diff.abs() / 15.0,
        });
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1)?;
    Ok(SimpsonOutcome {
        value: l.value + r.value,
        error: l.error + r.error,
    })
}

/// I by full 3-D cube substitution (secondary method, cross-check).
///
/// With x = u³, y = v³, z = w³ the Jacobian 27u²v²w² cancels the three
/// coordinate singularities, leaving 27(u³+v³−w³)^{-2/3}, and on the
/// transformed domain u³+v³−w³ ≥ (u³+v³)/2, so the integrand is bounded on
/// every cell away from the origin corner.
pub fn integrate_singular_cubature() -> Result<QuadratureResult> {
    integrate_singular_cubature_with(1e-6, DEFAULT_BUDGET)
}

/// Secondary method with explicit tolerance and budget.
pub fn integrate_singular_cubature_with(abs_tol: f64, budget: u64) -> Result<QuadratureResult> {
    if abs_tol <= 0.0 || abs_tol.is_nan() {
        return Err(Error::param("abs_tol", "tolerance must be positive"));
    }
    let counter = EvalCounter::new(budget);
    let depth = 24;
    // absolute tolerances: an error of δ in an inner integrand perturbs the
    // enclosing integral by at most δ × range ≤ δ, so outer + middle + inner
    // budgets sum to abs_tol
    let mut outer = |u: f64| -> Result<f64> {
        if u == 0.0 {
            return Ok(0.0);
        }
        let u3 = u * u * u;
        let mut middle = |v: f64| -> Result<f64> {
            let v3 = v * v * v;
            let top = (0.5 * (u3 + v3)).cbrt();
            if top <= v {
                return Ok(0.0);
            }
            let mut inner = |w: f64| -> Result<f64> {
                counter.charge(1)?;
                let rest = (u3 + v3 - w * w * w).max(0.5 * (u3 + v3));
                Ok(27.0 * rest.powf(-FRAC_2_3))
            };
            Ok(adaptive_simpson(&mut inner, v, top, 0.125 * abs_tol, depth)?.value)
        };
        Ok(adaptive_simpson(&mut middle, 0.0, u, 0.25 * abs_tol, depth)?.value)
    };
    let outcome = adaptive_simpson(&mut outer, 0.0, 1.0, 0.5 * abs_tol, depth)?;
    Ok(QuadratureResult {
        value: outcome.value,
        // nested tolerance budgets dominate the leaf estimate
        error_estimate: outcome.error + 0.5 * abs_tol,
        evaluations: counter.used(),
    })
}

// ---------------------------------------------------------------------------
// Truncated integral
// ---------------------------------------------------------------------------

/// I(M) = ∭_D min(f, M) dV.
pub fn integrate_truncated(m: f64) -> Result<QuadratureResult> {
    integrate_truncated_with(m, 1e-6, DEFAULT_BUDGET)
}

/// Truncated integral with explicit tolerance and budget.
pub fn integrate_truncated_with(m: f64, abs_tol: f64, budget: u64) -> Result<QuadratureResult> {
    if m <= 0.0 {
        return Err(Error::param("M", "truncation level must be positive"));
    }
    if abs_tol <= 0.0 || abs_tol.is_nan() {
        return Err(Error::param("abs_tol", "tolerance must be positive"));
    }
    if m <= 1.0 {
        // f > 1 on all of D (each of x, y, z, x+y−z lies in (0,1)), so the
        // truncation saturates and I(M) = M · Vol(D) = M/12 exactly.
        let probe = evaluate_f_truncated(0.5, 0.25, 0.3, m)?;
        debug_assert_eq!(probe, m);
        return Ok(QuadratureResult {
            value: m / 12.0,
            error_estimate: 0.0,
            evaluations: 1,
        });
    }
    let counter = EvalCounter::new(budget);
    let depth = 22;
    // direct coordinates: min(f, M) is bounded by M, so the boundary values
    // (where the raw product underflows to 0 and f overflows to +inf) are
    // simply capped at M
    let mut outer = |x: f64| -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        let mut middle = |y: f64| -> Result<f64> {
            let top = 0.5 * (x + y);
            if top <= y {
                return Ok(0.0);
            }
            let mut inner = |z: f64| -> Result<f64> {
                counter.charge(1)?;
                Ok((x * y * z * (x + y - z)).powf(-FRAC_2_3).min(m))
            };
            Ok(adaptive_simpson(&mut inner, y, top, 0.02 * abs_tol, depth)?.value)
        };
        Ok(adaptive_simpson(&mut middle, 0.0, x, 0.1 * abs_tol, depth)?.value)
    };
    let outcome = adaptive_simpson(&mut outer, 0.0, 1.0, abs_tol, depth)?;
    Ok(QuadratureResult {
        value: outcome.value,
        error_estimate: outcome.error + 1.5 * abs_tol,
        evaluations: counter.used(),
    })
}

// ---------------------------------------------------------------------------
// Convergence table
// ---------------------------------------------------------------------------

/// One refinement level of the primary method at tolerance 10^{-(level+1)}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvergenceRow {
    pub level: u32,
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// Secondary-method results at successively tighter tolerances. The
/// analytic reduction converges too fast to display a refinement trend, so
/// the table drives the cube-substitution method, where the work visibly
/// grows as the requested tolerance shrinks.
pub fn convergence_table(levels: u32) -> Result<Vec<ConvergenceRow>> {
    if !(1..=8).contains(&levels) {
        return Err(Error::param("levels", "need 1 ≤ levels ≤ 8"));
    }
    (1..=levels)
        .map(|level| {
            let tol = 10f64.powi(-(level as i32));
            let q = integrate_singular_cubature_with(tol, DEFAULT_BUDGET)?;
            Ok(ConvergenceRow {
                level,
                value: q.value,
                error_estimate: q.error_estimate,
                evaluations: q.evaluations,
            })
        })
        .collect()
}
