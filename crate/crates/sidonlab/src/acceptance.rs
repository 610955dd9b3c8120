//! The ten acceptance criteria behind the `reproduce` subcommand.
//!
//! Each criterion is a self-contained pass/fail check with its tolerances
//! pinned as constants here. Statistical criteria use the fixed base seed
//! [`BASE_SEED`], so the whole suite is deterministic.
//!
//! Criterion 7 (Riemann-sum convergence) is expected to fail at the
//! specified lattice sizes: the sum converges like N^{-1/3}·log N, so at
//! N = 2000 it still sits roughly 40% below the integral, far outside the
//! 5% target, which would require N near 10⁷ and an O(N³) sum beyond any
//! desk budget. The criterion is implemented faithfully and reports the
//! measured gaps rather than being weakened.

use crate::model::{
    self, expected_z, generate, riemann_sum, run_campaign, z_statistic, RandomModelParams,
};
use crate::quad::{
    integrate_1d, integrate_singular, integrate_singular_cubature, integrate_truncated_with,
    DEFAULT_BUDGET,
};
use crate::set::{self, rep_count, rep_profile, sumset, IntegerSet};
use crate::{analysis, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// Base seed of every statistical criterion.
pub const BASE_SEED: u64 = 1;

const MODEL_C: f64 = 0.5;
const BIG_N: u64 = 1_000_000;

const INTEGRAL_LO: f64 = 10.7;
const INTEGRAL_HI: f64 = 10.8;
const INTEGRAL_ERROR_CAP: f64 = 5e-3;
const METHOD_AGREEMENT_TOL: f64 = 1e-2;
const TRUNCATION_LEVELS: [f64; 3] = [10.0, 100.0, 10_000.0];
const F_STAR_FLOOR: f64 = 0.064;
const C_STAR_GRID_TOL: f64 = 1e-4;
const BETA_IDENTITY_TOL: f64 = 1e-8;
const GROWTH_TRIALS: u64 = 50;
const GROWTH_REL_TOL: f64 = 0.05;
const Z_TRIALS: u64 = 200;
const Z_EXACT_N: u64 = 10_000;
const Z_SE_MULTIPLE: f64 = 3.0;
const RIEMANN_SIZES: [u64; 4] = [250, 500, 1000, 2000];
const RIEMANN_REL_TOL: f64 = 0.05;
const COVERAGE_TRIALS: u64 = 30;
const COVERAGE_ABS_TOL: f64 = 0.05;
const ORACLE_SETS: u64 = 100;
const CONCENTRATION_TRIALS: u64 = 30;
const CONCENTRATION_RATIO_CAP: f64 = 0.5;

/// Outcome of one criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub index: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the whole suite.
#[derive(Debug, Clone, Serialize)]
pub struct AcceptanceSummary {
    pub all_passed: bool,
    pub results: Vec<CriterionResult>,
}

/// Fault-injection hooks for exercising the reporting pipeline.
#[derive(Debug, Clone, Copy, Default)]
pub struct Hooks {
    /// Overrides the primary singular-integral value in criterion 1 only.
    pub force_integral: Option<f64>,
}

fn run_criterion(
    index: u32,
    name: &'static str,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("errored: {e}")));
    CriterionResult {
        index,
        name,
        passed,
        detail: format!("{detail} [{:.1}s]", start.elapsed().as_secs_f64()),
    }
}

/// Runs all ten criteria and aggregates the verdict.
pub fn reproduce_all(hooks: &Hooks) -> AcceptanceSummary {
    let results = vec![
        criterion_1(hooks),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    AcceptanceSummary {
        all_passed: results.iter().all(|r| r.passed),
        results,
    }
}

/// 1: the singular integral lies in (10.7, 10.8), its error estimate is
/// small, and two independent methods agree.
pub fn criterion_1(hooks: &Hooks) -> CriterionResult {
    run_criterion(1, "singular-integral-bracket", || {
        let mut primary = integrate_singular()?;
        if let Some(v) = hooks.force_integral {
            primary.value = v;
        }
        let secondary = integrate_singular_cubature()?;
        let in_bracket = primary.value > INTEGRAL_LO && primary.value < INTEGRAL_HI;
        let err_ok = primary.error_estimate <= INTEGRAL_ERROR_CAP;
        let agree = (primary.value - secondary.value).abs() <= METHOD_AGREEMENT_TOL;
        Ok((
            in_bracket && err_ok && agree,
            format!(
                "primary {:.9} (err {:.1e}, {} evals), secondary {:.9}, |diff| {:.1e}",
                primary.value,
                primary.error_estimate,
                primary.evaluations,
                secondary.value,
                (primary.value - secondary.value).abs()
            ),
        ))
    })
}

/// 2: I(M) ≤ 27·2^{2/3} + 1/M at M = 10, 10², 10⁴, within quadrature error.
pub fn criterion_2() -> CriterionResult {
    run_criterion(2, "truncation-bound", || {
        let cap = 27.0 * 2f64.powf(2.0 / 3.0);
        let mut parts = Vec::new();
        let mut ok = true;
        for m in TRUNCATION_LEVELS {
            let q = integrate_truncated_with(m, 1e-5, DEFAULT_BUDGET)?;
            let bound = cap + 1.0 / m + q.error_estimate;
            ok &= q.value <= bound;
            parts.push(format!("I({m}) = {:.6} ≤ {:.4}", q.value, bound));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// 3: the maximized density lower bound exceeds 0.064 and the maximizer
/// matches a 10⁻⁵-step grid scan.
pub fn criterion_3() -> CriterionResult {
    run_criterion(3, "density-constant-maximum", || {
        let best = analysis::optimize_bound();
        let mut grid_c = 0.0;
        let mut grid_f = f64::NEG_INFINITY;
        for i in 0..=100_000u32 {
            let c = i as f64 / 100_000.0;
            let f = analysis::density_lower_bound(c);
            if f > grid_f {
                grid_f = f;
                grid_c = c;
            }
        }
        let floor_ok = best.f_star >= F_STAR_FLOOR;
        let grid_ok = (best.c_star - grid_c).abs() <= C_STAR_GRID_TOL;
        Ok((
            floor_ok && grid_ok,
            format!(
                "F* = {:.10} at c* = {:.7} (grid argmax {grid_c:.5})",
                best.f_star, best.c_star
            ),
        ))
    })
}

/// 4: the closed-form beta integral matches direct 1-D quadrature of
/// ∫₀¹ (1 − x^{1/α})^β dx to 10⁻⁸ on four parameter pairs.
pub fn criterion_4() -> CriterionResult {
    run_criterion(4, "beta-integral-identity", || {
        let pairs = [
            (1.0 / 3.0, 1.0 / 3.0),
            (1.0 / 3.0, 2.0 / 3.0),
            (0.5, 0.5),
            (1.0, 1.0),
        ];
        let mut worst = 0.0f64;
        for (alpha, beta) in pairs {
            let closed = analysis::beta_integral(alpha, beta)?;
            let mut f = |x: f64| -> Result<f64> { Ok((1.0 - x.powf(1.0 / alpha)).powf(beta)) };
            let (quad, _) = integrate_1d(&mut f, 0.0, 1.0, 1e-11)?;
            worst = worst.max((closed - quad).abs());
        }
        Ok((
            worst <= BETA_IDENTITY_TOL,
            format!("max |closed − quadrature| = {worst:.2e} over 4 pairs"),
        ))
    })
}

/// 5: mean S(N) over 50 trials at c = 0.5, N = 10⁶ within 5% of the exact
/// expectation, and every pruned sample is Sidon (exhaustive check).
pub fn criterion_5() -> CriterionResult {
    run_criterion(5, "random-set-growth", || {
        let expected = analysis::expected_count_s(MODEL_C, BIG_N)?;
        let outcomes: Vec<(u64, bool)> = (0..GROWTH_TRIALS)
            .into_par_iter()
            .map(|i| -> Result<(u64, bool)> {
                let p = RandomModelParams::new(MODEL_C, BIG_N, BASE_SEED + i)?;
                let s = generate(&p);
                let remainder = s.difference(&model::violation_set(&s));
                Ok((s.len() as u64, set::is_sidon(&remainder)))
            })
            .collect::<Result<Vec<_>>>()?;
        let mean = outcomes.iter().map(|o| o.0 as f64).sum::<f64>() / GROWTH_TRIALS as f64;
        let sidon_count = outcomes.iter().filter(|o| o.1).count() as u64;
        let rel = (mean - expected).abs() / expected;
        Ok((
            rel <= GROWTH_REL_TOL && sidon_count == GROWTH_TRIALS,
            format!(
                "mean S(N) = {mean:.2} vs expected {expected:.2} (rel {rel:.4}); \
                 {sidon_count}/{GROWTH_TRIALS} pruned samples Sidon"
            ),
        ))
    })
}

/// 6: mean Z(N) over 200 trials at c = 0.5, N = 10⁴ within 3 standard
/// errors of the exact expectation.
pub fn criterion_6() -> CriterionResult {
    run_criterion(6, "z-expectation", || {
        let expected = expected_z(MODEL_C, Z_EXACT_N)?.value;
        let zs: Vec<f64> = (0..Z_TRIALS)
            .into_par_iter()
            .map(|i| -> Result<f64> {
                let p = RandomModelParams::new(MODEL_C, Z_EXACT_N, BASE_SEED + i)?;
                Ok(z_statistic(&generate(&p), Z_EXACT_N) as f64)
            })
            .collect::<Result<Vec<_>>>()?;
        let n = Z_TRIALS as f64;
        let mean = zs.iter().sum::<f64>() / n;
        let var = zs.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        let gap = (mean - expected).abs();
        Ok((
            gap <= Z_SE_MULTIPLE * se,
            format!(
                "mean Z = {mean:.4} vs exact E(Z) = {expected:.4}; |gap| {gap:.4}, limit {:.4}",
                Z_SE_MULTIPLE * se
            ),
        ))
    })
}

/// 7: the lattice Riemann sum at N = 2000 is within 5% of the integral and
/// the gap shrinks on at least 2 of 3 doublings.
///
/// Faithfully implemented and expected to fail on the 5% clause; see the
/// module docs for the convergence-rate analysis.
pub fn criterion_7() -> CriterionResult {
    run_criterion(7, "riemann-sum-convergence", || {
        let integral = integrate_singular()?.value;
        let mut gaps = Vec::new();
        for n in RIEMANN_SIZES {
            gaps.push((n, (riemann_sum(n)? - integral).abs()));
        }
        let shrink_count = gaps.windows(2).filter(|w| w[1].1 <= w[0].1).count();
        let last_gap = gaps.last().expect("four lattice sizes").1;
        let within = last_gap <= RIEMANN_REL_TOL * integral;
        let gap_text = gaps
            .iter()
            .map(|(n, g)| format!("N={n}: {g:.3}"))
            .collect::<Vec<_>>()
            .join(", ");
        Ok((
            within && shrink_count >= 2,
            format!(
                "gaps to I = {integral:.4}: {gap_text}; shrinks on {shrink_count}/3 doublings; \
                 need final gap ≤ {:.3}",
                RIEMANN_REL_TOL * integral
            ),
        ))
    })
}

/// 8: mean coverage of [N/2, N] by S+S+S over 30 trials at c = 0.5,
/// N = 10⁶ within ±0.05 of the closed-form density.
pub fn criterion_8() -> CriterionResult {
    run_criterion(8, "three-fold-sumset-density", || {
        let target = analysis::sss_density(MODEL_C);
        let lo = BIG_N / 2;
        let window = (BIG_N - lo + 1) as f64;
        let coverages: Vec<f64> = (0..COVERAGE_TRIALS)
            .into_par_iter()
            .map(|i| -> Result<f64> {
                let p = RandomModelParams::new(MODEL_C, BIG_N, BASE_SEED + i)?;
                let s = generate(&p);
                let bits = set::sumset_bits(&[&s, &s, &s], BIG_N)?;
                Ok(bits.count_range(lo, BIG_N) as f64 / window)
            })
            .collect::<Result<Vec<_>>>()?;
        let mean = coverages.iter().sum::<f64>() / COVERAGE_TRIALS as f64;
        let gap = (mean - target).abs();
        Ok((
            gap <= COVERAGE_ABS_TOL,
            format!("mean coverage {mean:.4} vs density {target:.4} (|gap| {gap:.4})"),
        ))
    })
}

/// 9: the optimized implementations match exhaustive brute-force oracles on
/// 100 deterministic random sets.
pub fn criterion_9() -> CriterionResult {
    run_criterion(9, "oracle-equivalence", || {
        let mismatches: u64 = (0..ORACLE_SETS)
            .into_par_iter()
            .map(oracle_mismatches_for_tag)
            .sum();
        Ok((
            mismatches == 0,
            format!(
                "{mismatches} mismatches across {ORACLE_SETS} sets \
                 (violations, Z, representation counts, sumsets)"
            ),
        ))
    })
}

/// 10: sample standard deviation of Z(N) over 30 trials at N = 10⁶ stays
/// below half the mean.
pub fn criterion_10() -> CriterionResult {
    run_criterion(10, "z-concentration", || {
        let p = RandomModelParams::new(MODEL_C, BIG_N, BASE_SEED)?;
        let report = run_campaign(&p, CONCENTRATION_TRIALS)?;
        let ratio = report.z.std_dev / report.z.mean;
        Ok((
            ratio <= CONCENTRATION_RATIO_CAP,
            format!(
                "Z over {CONCENTRATION_TRIALS} trials: mean {:.2}, std {:.2}, ratio {ratio:.3}",
                report.z.mean, report.z.std_dev
            ),
        ))
    })
}

// ---------------------------------------------------------------------------
// Brute-force oracles (criterion 9)
// ---------------------------------------------------------------------------

// Deterministic test set: each n ≤ 200 kept with a per-tag probability in
// [0.05, 0.6].
fn synth_set(tag: u64) -> IntegerSet {
    let keep = 0.05 + 0.55 * model::unit_uniform(0xACCE55, tag + 1);
    let elems = (1..=200)
        .filter(|&n| model::unit_uniform(tag, n) < keep)
        .collect();
    IntegerSet::from_sorted(elems).expect("ascending scan")
}

fn head(s: &IntegerSet, cap: usize) -> IntegerSet {
    IntegerSet::from_sorted(s.elements()[..s.len().min(cap)].to_vec()).expect("prefix of valid set")
}

fn oracle_mismatches_for_tag(tag: u64) -> u64 {
    let base = synth_set(tag);
    let mut bad = 0;
    // violation set: quartic scan over (s, s′, s″, s‴)
    let v_input = head(&base, 80);
    if model::violation_set(&v_input) != brute_violations(&v_input) {
        bad += 1;
    }
    // Z statistic at two horizons
    let z_input = head(&base, 130);
    for horizon in [120, 200] {
        if z_statistic(&z_input, horizon) != brute_z(&z_input, horizon) {
            bad += 1;
        }
    }
    // representation counts, h = 2, 3, 4, whole profile plus spot values
    let r_input = head(&base, 60);
    for h in 2..=4u32 {
        let brute = brute_rep_histogram(&r_input, h);
        let profile = rep_profile(&r_input, h, 800).expect("valid h");
        for n in 1..=800u64 {
            if profile.count(n) != brute[n as usize] {
                bad += 1;
            }
        }
        for k in 0..4 {
            let n = 1 + model::splitmix_u64(tag ^ (h as u64) << 32, k) % 800;
            if rep_count(&r_input, h, n).expect("valid h") != brute[n as usize] {
                bad += 1;
            }
        }
    }
    // sumsets: double and triple folds against direct loops
    let a = head(&base, 130);
    let b = synth_set(tag.wrapping_add(7_777));
    if sumset(&[&a, &a], 200).expect("two sets") != brute_sumset(&[&a, &a], 200) {
        bad += 1;
    }
    if sumset(&[&a, &b], 200).expect("two sets") != brute_sumset(&[&a, &b], 200) {
        bad += 1;
    }
    if sumset(&[&a, &a, &a], 200).expect("three sets") != brute_sumset(&[&a, &a, &a], 200) {
        bad += 1;
    }
    bad
}

fn brute_violations(s: &IntegerSet) -> IntegerSet {
    let e = s.elements();
    let mut out = Vec::new();
    for (i, &cur) in e.iter().enumerate() {
        let earlier = &e[..i];
        'outer: for &s1 in earlier {
            for &s2 in earlier {
                for &s3 in earlier {
                    if cur + s1 == s2 + s3 {
                        out.push(cur);
                        break 'outer;
                    }
                }
            }
        }
    }
    IntegerSet::from_sorted(out).expect("subsequence of a valid set")
}

fn brute_z(s: &IntegerSet, n: u64) -> u64 {
    let e: Vec<u64> = s.iter().take_while(|&x| x <= n).collect();
    let m = e.len();
    let mut z = 0;
    for i1 in 0..m {
        for i2 in 0..i1 {
            for i3 in 0..i2 {
                if 2 * e[i2] == e[i1] + e[i3] {
                    z += 1;
                }
                for i4 in 0..i3 {
                    if e[i1] + e[i4] == e[i2] + e[i3] {
                        z += 1;
                    }
                }
            }
        }
    }
    z
}

// Histogram of R_{h,A}(n) for n ≤ 800 by plain nested loops.
fn brute_rep_histogram(s: &IntegerSet, h: u32) -> Vec<u64> {
    let e = s.elements();
    let mut hist = vec![0u64; 801];
    let m = e.len();
    match h {
        2 => {
            for i in 0..m {
                for j in i..m {
                    hist[(e[i] + e[j]) as usize] += 1;
                }
            }
        }
        3 => {
            for i in 0..m {
                for j in i..m {
                    for k in j..m {
                        hist[(e[i] + e[j] + e[k]) as usize] += 1;
                    }
                }
            }
        }
        4 => {
            for i in 0..m {
                for j in i..m {
                    for k in j..m {
                        for l in k..m {
                            hist[(e[i] + e[j] + e[k] + e[l]) as usize] += 1;
                        }
                    }
                }
            }
        }
        _ => unreachable!("h is 2, 3 or 4"),
    }
    hist
}

fn brute_sumset(sets: &[&IntegerSet], n: u64) -> IntegerSet {
    let mut marked = vec![false; (n + 1) as usize];
    match sets {
        [a, b] => {
            for x in a.iter() {
                for y in b.iter() {
                    if x + y <= n {
                        marked[(x + y) as usize] = true;
                    }
                }
            }
        }
        [a, b, c] => {
            for x in a.iter() {
                for y in b.iter() {
                    if x + y > n {
                        continue;
                    }
                    for z in c.iter() {
                        if x + y + z <= n {
                            marked[(x + y + z) as usize] = true;
                        }
                    }
                }
            }
        }
        _ => unreachable!("oracle uses 2 or 3 sets"),
    }
    let elems = (1..=n).filter(|&v| marked[v as usize]).collect();
    IntegerSet::from_sorted(elems).expect("ascending scan")
}
