//! The probabilistic construction and its statistics.
//!
//! An integer n ∈ [1, N] enters the random set S independently with
//! probability c·n^(-2/3). The violation set T collects every s ∈ S that
//! closes a coincidence s + s′ = s″ + s‴ with three smaller elements;
//! removing T provably restores the Sidon property. Z(N) counts the
//! nested coincidences (quadruples x₄<x₃<x₂<x₁ with x₁+x₄ = x₂+x₃, plus
//! the degenerate triples with x₁+x₄ = 2x₂) and dominates |T ∩ [1,N]|.
//!
//! Randomness is counter-based ("splitmix64/v1"): the inclusion decision
//! for n is a pure function of (seed, n), so trials are reproducible
//! independent of evaluation order or thread schedule.

use crate::set::{self, IntegerSet};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{HashMap, HashSet};

/// Identifier of the inclusion-decision generator, part of the
/// reproducibility contract.
pub const PRNG_ID: &str = "splitmix64/v1";

/// Largest supported horizon for direct per-integer sampling.
pub const MAX_HORIZON: u64 = 100_000_000;

/// Largest N for which expected_z performs the exact double summation.
pub const EXACT_EXPECTATION_LIMIT: u64 = 10_000;

// N · trials cap for campaigns.
const CAMPAIGN_CELL_BUDGET: u128 = 1_000_000_000;

/// Parameters of the random model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomModelParams {
    pub c: f64,
    pub n: u64,
    pub seed: u64,
}

impl RandomModelParams {
    pub fn new(c: f64, n: u64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::param(
                "c",
                format!("inclusion scale must lie in [0, 1], got {c}"),
            ));
        }
        if n < 1 {
            return Err(Error::param("N", "horizon must be ≥ 1"));
        }
        if n > MAX_HORIZON {
            return Err(Error::param(
                "N",
                format!("horizon {n} exceeds the sampling cap {MAX_HORIZON}"),
            ));
        }
        Ok(RandomModelParams { c, n, seed })
    }
}

// ---------------------------------------------------------------------------
// Counter-based randomness
// ---------------------------------------------------------------------------

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

// splitmix64 output for counter n under the given seed: the n-th element of
// the standard splitmix64 stream started at `seed`.
pub(crate) fn splitmix_u64(seed: u64, n: u64) -> u64 {
    let mut z = seed.wrapping_add(n.wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// Uniform draw in [0, 1) with 53 random bits.
pub(crate) fn unit_uniform(seed: u64, n: u64) -> f64 {
    (splitmix_u64(seed, n) >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

// n^(-2/3), evaluated as exp(-(2/3)·ln n) per the sampling contract.
pub(crate) fn inclusion_weight(n: u64) -> f64 {
    (-(2.0 / 3.0) * (n as f64).ln()).exp()
}

/// P(n ∈ S) = c·n^(-2/3).
pub fn inclusion_probability(c: f64, n: u64) -> f64 {
    c * inclusion_weight(n)
}

// ---------------------------------------------------------------------------
// Sampling, violations, pruning
// ---------------------------------------------------------------------------

/// Draws the random set S ⊆ [1, N]: one Bernoulli decision per integer,
/// a pure function of (c, N, seed).
pub fn generate(params: &RandomModelParams) -> IntegerSet {
    let mut elems = Vec::new();
    for n in 1..=params.n {
        if unit_uniform(params.seed, n) < inclusion_probability(params.c, n) {
            elems.push(n);
        }
    }
    IntegerSet::from_sorted(elems).expect("ascending scan yields a valid set")
}

/// The violation set T = {s ∈ S : ∃ s′,s″,s‴ ∈ S, all < s, s+s′ = s″+s‴}
/// (s″ = s‴ permitted).
///
/// Incremental scan: s is a violation iff s + s′ hits a pair-sum of earlier
/// elements for some earlier s′; afterwards s's own pairs join the sum set.
pub fn violation_set(s: &IntegerSet) -> IntegerSet {
    let elems = s.elements();
    let mut pair_sums: HashSet<u64> = HashSet::new();
    let mut out = Vec::new();
    for (i, &cur) in elems.iter().enumerate() {
        let earlier = &elems[..i];
        if earlier.iter().any(|&e| pair_sums.contains(&(cur + e))) {
            out.push(cur);
        }
        for &e in earlier {
            pair_sums.insert(e + cur);
        }
        pair_sums.insert(2 * cur);
    }
    IntegerSet::from_sorted(out).expect("subsequence of a valid set")
}

/// S ∖ T. The result is always Sidon: in any coincidence a+b = c+d the
/// largest element exceeds the other three, so it belongs to T.
pub fn prune(s: &IntegerSet) -> IntegerSet {
    let remainder = s.difference(&violation_set(s));
    assert!(set::is_sidon(&remainder), "pruned set must be Sidon");
    remainder
}

/// One fully realized sample: S, T, and the Sidon remainder S ∖ T.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratedSequence {
    pub params: RandomModelParams,
    pub s: IntegerSet,
    pub t: IntegerSet,
    pub remainder: IntegerSet,
}

pub fn realize(params: &RandomModelParams) -> GeneratedSequence {
    let s = generate(params);
    let t = violation_set(&s);
    let remainder = s.difference(&t);
    assert!(set::is_sidon(&remainder), "pruned set must be Sidon");
    GeneratedSequence {
        params: *params,
        s,
        t,
        remainder,
    }
}

// ---------------------------------------------------------------------------
// The statistic Z(N)
// ---------------------------------------------------------------------------

/// Z(N): quadruples x₄<x₃<x₂<x₁ ≤ N in S with x₁+x₄ = x₂+x₃ plus triples
/// x₄<x₂<x₁ ≤ N with x₁+x₄ = 2x₂.
///
/// Bucketed by pair-sum value v: two distinct pairs with the same sum are
/// always element-disjoint and nest strictly, so the quadruple count is
/// Σ_v C(pairs(v), 2); a pair (x₁,x₄) yields a degenerate triple iff its
/// sum is even and v/2 ∈ S (v/2 is automatically strictly between).
pub fn z_statistic(s: &IntegerSet, n: u64) -> u64 {
    let elems: Vec<u64> = s.iter().take_while(|&e| e <= n).collect();
    let mut pair_sums: HashMap<u64, u64> = HashMap::new();
    for (i, &hi) in elems.iter().enumerate() {
        for &lo in &elems[..i] {
            *pair_sums.entry(hi + lo).or_insert(0) += 1;
        }
    }
    let mut z = 0;
    for (&v, &pairs) in &pair_sums {
        z += pairs * (pairs - 1) / 2;
        if v % 2 == 0 && elems.binary_search(&(v / 2)).is_ok() {
            z += pairs;
        }
    }
    z
}

// ---------------------------------------------------------------------------
// E(Z(N)) = E₁ + E₂
// ---------------------------------------------------------------------------

/// Expectation of Z(N) split into its degenerate (x₁+x₄ = 2x₂) and strict
/// quadruple parts.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExpectedZ {
    pub value: f64,
    /// E₁: the x₁+x₄ = 2x₂ triples.
    pub degenerate_part: f64,
    /// E₂: the strict quadruples.
    pub quadruple_part: f64,
    /// true when the value comes from the asymptotic estimation path.
    pub approximate: bool,
}

fn check_c(c: f64) -> Result<()> {
    if (0.0..=1.0).contains(&c) {
        Ok(())
    } else {
        Err(Error::param("c", format!("c must lie in [0, 1], got {c}")))
    }
}

// Exact O(N²) summation of both parts, no horizon cap.
fn expected_z_parts(c: f64, n: u64) -> (f64, f64) {
    let t: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).map(inclusion_weight))
        .collect();
    // E₁: x₂ = (x₁+x₄)/2 requires x₄ ≡ x₁ (mod 2); P = c³ (x₁x₂x₄)^{-2/3}
    let mut e1 = 0.0;
    for x1 in 3..=n {
        let start = if x1 % 2 == 0 { 2 } else { 1 };
        let mut inner = 0.0;
        let mut x4 = start;
        while x4 < x1 {
            inner += t[x4 as usize] * t[((x1 + x4) / 2) as usize];
            x4 += 2;
        }
        e1 += t[x1 as usize] * inner;
    }
    e1 *= c * c * c;
    // E₂: bucket strict pairs x₄ < x₁ by sum v; pairs of distinct
    // equal-sum pairs are exactly the admissible quadruples, so
    // E₂ = c⁴ Σ_v (W(v)² − U(v))/2 with W = Σ w, U = Σ w², w = (x₁x₄)^{-2/3}
    let mut e2 = 0.0;
    for v in 3..=(2 * n - 1) {
        let lo = if v > n { v - n } else { 1 };
        let hi = (v - 1) / 2;
        let mut w = 0.0;
        let mut u = 0.0;
        for x4 in lo..=hi {
            let x1 = v - x4;
            let prod = t[x1 as usize] * t[x4 as usize];
            w += prod;
            u += prod * prod;
        }
        e2 += (w * w - u) / 2.0;
    }
    e2 *= c * c * c * c;
    (e1, e2)
}

/// E(Z(N)) by exact summation; N is capped at [`EXACT_EXPECTATION_LIMIT`]
/// (use [`expected_z_estimate`] beyond it).
pub fn expected_z(c: f64, n: u64) -> Result<ExpectedZ> {
    check_c(c)?;
    if n < 2 {
        return Err(Error::param("N", "need N ≥ 2"));
    }
    if n > EXACT_EXPECTATION_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "exact expectation is O(N²) and capped at N = {EXACT_EXPECTATION_LIMIT}; \
             got N = {n} (call expected_z_estimate for the flagged asymptotic path)"
        )));
    }
    let (e1, e2) = expected_z_parts(c, n);
    Ok(ExpectedZ {
        value: e1 + e2,
        degenerate_part: e1,
        quadruple_part: e2,
        approximate: false,
    })
}

/// E(Z(N)) for any N: exact up to the cap, then an asymptotic estimate
/// flagged `approximate`.
///
/// The estimate uses E₂ ≈ c⁴N^{1/3}(I − κ·N^{-1/3}ln N) with κ calibrated
/// against the exact Riemann sum at N = 2000, and continues E₁ from its
/// exact value at the cap with its asymptotic logarithmic slope
/// c³·2^{-1/3}·K, K = 3∫₀¹(1+r³)^{-2/3}dr.
pub fn expected_z_estimate(c: f64, n: u64) -> Result<ExpectedZ> {
    check_c(c)?;
    if n <= EXACT_EXPECTATION_LIMIT {
        return expected_z(c, n);
    }
    let integral = crate::quad::integrate_singular()?.value;
    let n0 = 2000u64;
    let shape = |m: u64| {
        let m = m as f64;
        m.powf(-1.0 / 3.0) * m.ln()
    };
    let kappa = (integral - riemann_sum(n0)?) / shape(n0);
    let nf = n as f64;
    let e2 = c.powi(4) * nf.powf(1.0 / 3.0) * (integral - kappa * shape(n));
    let base = EXACT_EXPECTATION_LIMIT;
    let (e1_base, _) = expected_z_parts(c, base);
    let mut radial = |r: f64| -> Result<f64> { Ok((1.0 + r * r * r).powf(-2.0 / 3.0)) };
    let k = 3.0 * crate::quad::integrate_1d(&mut radial, 0.0, 1.0, 1e-12)?.0;
    let e1 = e1_base + c.powi(3) * 2f64.powf(-1.0 / 3.0) * k * (nf / base as f64).ln();
    Ok(ExpectedZ {
        value: e1 + e2,
        degenerate_part: e1,
        quadruple_part: e2,
        approximate: true,
    })
}

// ---------------------------------------------------------------------------
// Riemann sum of the singular integrand
// ---------------------------------------------------------------------------

/// The normalized lattice sum
/// (1/N³) Σ_{x₁=2}^{N} Σ_{x₄<x₁} Σ_{x₄<x₂<(x₁+x₄)/2} f(x₁/N, x₄/N, x₂/N),
/// which converges to the singular integral I as N → ∞.
///
/// Since f is homogeneous of degree −8/3, this equals
/// N^{-1/3} Σ t(x₁)t(x₄)t(x₂)t(x₁+x₄−x₂) with t(m) = m^{-2/3}.
pub fn riemann_sum(n: u64) -> Result<f64> {
    if !(2..=3000).contains(&n) {
        return Err(Error::param(
            "N",
            format!("need 2 ≤ N ≤ 3000 (cubic cost), got {n}"),
        ));
    }
    let t: Vec<f64> = std::iter::once(0.0)
        .chain((1..=2 * n).map(inclusion_weight))
        .collect();
    // parallel over x₁ with an order-preserving collect, then a sequential
    // reduction, so the float result is schedule-independent
    let per_x1: Vec<f64> = (2..=n)
        .into_par_iter()
        .map(|x1| {
            let mut acc = 0.0;
            for x4 in 1..x1 {
                let hi = (x1 + x4 - 1) / 2;
                let mut inner = 0.0;
                for x2 in (x4 + 1)..=hi {
                    inner += t[x2 as usize] * t[(x1 + x4 - x2) as usize];
                }
                acc += t[x1 as usize] * t[x4 as usize] * inner;
            }
            acc
        })
        .collect();
    Ok(per_x1.iter().sum::<f64>() * (n as f64).powf(-1.0 / 3.0))
}

// ---------------------------------------------------------------------------
// Monte Carlo campaigns
// ---------------------------------------------------------------------------

/// Per-trial observables.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRow {
    pub seed: u64,
    pub s_size: u64,
    pub s_count_at_n: u64,
    pub t_size: u64,
    pub z: u64,
    /// density of (S+S+S) ∩ [1, N] relative to N
    pub density3_s: f64,
    /// same for the pruned set (S∖T)+(S∖T)+(S∖T)
    pub density3_remainder: f64,
}

/// Mean and sample standard deviation of one observable.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SummaryStat {
    pub mean: f64,
    pub std_dev: f64,
}

fn summarize(xs: &[f64]) -> SummaryStat {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() < 2 {
        0.0
    } else {
        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    };
    SummaryStat {
        mean,
        std_dev: var.sqrt(),
    }
}

/// Aggregated campaign outcome: per-trial rows plus summary statistics.
#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub params: RandomModelParams,
    pub trials: u64,
    pub rows: Vec<TrialRow>,
    pub s_count: SummaryStat,
    pub t_count: SummaryStat,
    pub z: SummaryStat,
    pub density3_s: SummaryStat,
    pub density3_remainder: SummaryStat,
}

fn run_trial(params: &RandomModelParams) -> Result<TrialRow> {
    let n = params.n;
    let sample = realize(params);
    if !set::is_sidon(&sample.remainder) {
        return Err(Error::InvariantViolation(format!(
            "pruned sample for seed {} is not Sidon",
            params.seed
        )));
    }
    let z = z_statistic(&sample.s, n);
    let t_size = sample.t.len() as u64;
    if t_size > z {
        return Err(Error::InvariantViolation(format!(
            "T(N) = {t_size} exceeds Z(N) = {z} for seed {}",
            params.seed
        )));
    }
    let density3 = |set: &IntegerSet| -> Result<f64> {
        let bits = set::sumset_bits(&[set, set, set], n)?;
        Ok(bits.count() as f64 / n as f64)
    };
    Ok(TrialRow {
        seed: params.seed,
        s_size: sample.s.len() as u64,
        s_count_at_n: sample.s.counting_function(n),
        t_size,
        z,
        density3_s: density3(&sample.s)?,
        density3_remainder: density3(&sample.remainder)?,
    })
}

/// Runs `trials` independent samples with seeds seed, seed+1, …, in
/// parallel, and aggregates them. Output is deterministic for fixed inputs.
pub fn run_campaign(params: &RandomModelParams, trials: u64) -> Result<CampaignReport> {
    if trials < 1 {
        return Err(Error::param("trials", "need at least one trial"));
    }
    let work = params.n as u128 * trials as u128;
    if work > CAMPAIGN_CELL_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "campaign work N×trials = {work} exceeds the budget {CAMPAIGN_CELL_BUDGET}; \
             lower N or trials"
        )));
    }
    let rows = (0..trials)
        .into_par_iter()
        .map(|i| {
            let p = RandomModelParams {
                seed: params.seed.wrapping_add(i),
                ..*params
            };
            run_trial(&p)
        })
        .collect::<Result<Vec<_>>>()?;
    let col = |f: &dyn Fn(&TrialRow) -> f64| summarize(&rows.iter().map(f).collect::<Vec<_>>());
    Ok(CampaignReport {
        params: *params,
        trials,
        s_count: col(&|r| r.s_count_at_n as f64),
        t_count: col(&|r| r.t_size as f64),
        z: col(&|r| r.z as f64),
        density3_s: col(&|r| r.density3_s),
        density3_remainder: col(&|r| r.density3_remainder),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> IntegerSet {
        IntegerSet::from_sorted(v.to_vec()).unwrap()
    }

    // deterministic small random sets for oracle comparisons
    fn synth_set(seed: u64, max: u64, keep_every: u64) -> IntegerSet {
        let elems = (1..=max)
            .filter(|&n| splitmix_u64(seed, n).is_multiple_of(keep_every))
            .collect();
        IntegerSet::from_sorted(elems).unwrap()
    }

    fn brute_violations(s: &IntegerSet) -> IntegerSet {
        let e = s.elements();
        let mut out = Vec::new();
        for (i, &cur) in e.iter().enumerate() {
            let earlier = &e[..i];
            'search: for &a in earlier {
                for &b in earlier {
                    for &c in earlier {
                        if cur + a == b + c {
                            out.push(cur);
                            break 'search;
                        }
                    }
                }
            }
        }
        IntegerSet::from_sorted(out).unwrap()
    }

    fn brute_z(s: &IntegerSet, n: u64) -> u64 {
        let e: Vec<u64> = s.iter().take_while(|&x| x <= n).collect();
        let m = e.len();
        let mut z = 0;
        for i1 in 0..m {
            for i2 in 0..i1 {
                for i3 in 0..i2 {
                    if 2 * e[i2] == e[i1] + e[i3] {
                        z += 1; // triple (x₁,x₂,x₄) = (e[i1],e[i2],e[i3])
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

    #[test]
    fn splitmix_reference_stream() {
        // first outputs of the standard splitmix64 stream from state 0
        assert_eq!(splitmix_u64(0, 1), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix_u64(0, 2), 0x6E78_9E6A_A1B9_65F4);
        for n in 1..1000 {
            let u = unit_uniform(42, n);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn generate_edge_cases() {
        let empty = generate(&RandomModelParams::new(0.0, 1000, 7).unwrap());
        assert!(empty.is_empty());
        for seed in 0..20 {
            let s = generate(&RandomModelParams::new(1.0, 50, seed).unwrap());
            assert!(s.contains(1), "P(1 ∈ S) = 1 at c = 1, seed {seed}");
        }
        assert!(RandomModelParams::new(1.0001, 10, 0).is_err());
        assert!(RandomModelParams::new(0.5, 0, 0).is_err());
        assert!(RandomModelParams::new(0.5, MAX_HORIZON + 1, 0).is_err());
    }

    #[test]
    fn generate_is_deterministic() {
        let p = RandomModelParams::new(0.5, 20_000, 99).unwrap();
        assert_eq!(generate(&p), generate(&p));
        let q = RandomModelParams { seed: 100, ..p };
        assert_ne!(generate(&p), generate(&q), "distinct seeds should differ");
    }

    #[test]
    fn generate_size_concentrates() {
        // |S| / (3cN^{1/3}) ∈ [0.8, 1.2] for ≥ 95 of 100 seeds at c=0.5, N=10⁶
        let n = 1_000_000;
        let mut hits = 0;
        for seed in 0..100 {
            let s = generate(&RandomModelParams::new(0.5, n, seed).unwrap());
            let ratio = s.len() as f64 / 150.0;
            if (0.8..=1.2).contains(&ratio) {
                hits += 1;
            }
        }
        assert!(hits >= 95, "only {hits}/100 seeds in band");
    }

    #[test]
    fn violation_examples() {
        assert_eq!(violation_set(&set(&[1, 2, 3, 4])), set(&[3, 4]));
        assert_eq!(violation_set(&set(&[1, 2])), IntegerSet::empty());
        assert_eq!(violation_set(&set(&[1, 2, 4, 8, 13])), IntegerSet::empty());
        assert_eq!(violation_set(&IntegerSet::empty()), IntegerSet::empty());
    }

    #[test]
    fn violations_match_brute_force() {
        for seed in 0..30 {
            let s = synth_set(seed, 120, 3);
            assert_eq!(violation_set(&s), brute_violations(&s), "seed {seed}");
        }
    }

    #[test]
    fn violations_are_prefix_consistent() {
        for seed in 0..10 {
            let s = synth_set(seed, 200, 3);
            let full = violation_set(&s);
            for horizon in [20, 75, 140] {
                assert_eq!(
                    violation_set(&s.truncate(horizon)),
                    full.truncate(horizon),
                    "seed {seed}, horizon {horizon}"
                );
            }
        }
    }

    #[test]
    fn prune_examples() {
        assert_eq!(prune(&set(&[1, 2, 3, 4])), set(&[1, 2]));
        assert_eq!(prune(&IntegerSet::empty()), IntegerSet::empty());
        let sidon = set(&[1, 2, 4, 8, 13]);
        assert_eq!(prune(&sidon), sidon);
        for seed in 0..10 {
            let s = synth_set(seed, 300, 4);
            assert!(set::is_sidon(&prune(&s)), "seed {seed}");
        }
    }

    #[test]
    fn z_statistic_examples() {
        assert_eq!(z_statistic(&set(&[1, 2, 3, 4]), 4), 3);
        assert_eq!(z_statistic(&set(&[1, 2, 3]), 3), 1);
        assert_eq!(z_statistic(&set(&[1, 2, 3, 4]), 3), 1);
        assert_eq!(z_statistic(&set(&[1, 2, 4, 8, 13]), 13), 0);
        assert_eq!(z_statistic(&IntegerSet::empty(), 10), 0);
    }

    #[test]
    fn z_statistic_matches_brute_force() {
        for seed in 0..25 {
            let s = synth_set(seed, 100, 3);
            for horizon in [40, 100] {
                assert_eq!(
                    z_statistic(&s, horizon),
                    brute_z(&s, horizon),
                    "seed {seed}, horizon {horizon}"
                );
            }
        }
    }

    #[test]
    fn t_is_dominated_by_z() {
        for seed in 0..20 {
            let p = RandomModelParams::new(0.8, 5000, seed).unwrap();
            let sample = realize(&p);
            let t_n = sample.t.len() as u64;
            let z = z_statistic(&sample.s, p.n);
            assert!(t_n <= z, "seed {seed}: T = {t_n} > Z = {z}");
        }
    }

    #[test]
    fn expected_z_reference_values() {
        let tiny = expected_z(1.0, 4).unwrap();
        assert!((tiny.value - 0.543228360523258).abs() < 1e-13);
        assert!(!tiny.approximate);

        let small = expected_z(0.5, 100).unwrap();
        assert!((small.degenerate_part - 0.576598193069).abs() < 1e-10);
        assert!((small.quadruple_part - 0.879280410425).abs() < 1e-10);

        let big = expected_z(0.5, 10_000).unwrap();
        assert!((big.value - 12.105596271268366).abs() < 1e-8);
        assert!((big.degenerate_part - 1.662645272963005).abs() < 1e-9);
        assert!((big.quadruple_part - 10.442950998305362).abs() < 1e-8);

        assert_eq!(expected_z(0.0, 500).unwrap().value, 0.0);
        assert!(expected_z(0.5, 10_001).is_err());
        assert!(expected_z(1.5, 100).is_err());
        assert!(expected_z(0.5, 1).is_err());
    }

    #[test]
    fn expected_z_tracks_asymptotic_rate() {
        // E(Z)/(c⁴·I·N^{1/3}) lands in [0.7, 1.3] at N = 10⁴, c = 0.5
        let e = expected_z(0.5, 10_000).unwrap();
        let rate = 0.5f64.powi(4) * 10.786 * 10_000f64.powf(1.0 / 3.0);
        let ratio = e.value / rate;
        assert!((0.7..=1.3).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn expected_z_estimate_agrees_near_cap() {
        let exact = expected_z(0.5, 10_000).unwrap();
        let est = expected_z_estimate(0.5, 10_000).unwrap();
        assert_eq!(est.value, exact.value);
        assert!(!est.approximate);

        let (e1, e2) = expected_z_parts(0.5, 20_000);
        let exact_20k = e1 + e2;
        let est_20k = expected_z_estimate(0.5, 20_000).unwrap();
        assert!(est_20k.approximate);
        let rel = (est_20k.value - exact_20k).abs() / exact_20k;
        assert!(rel < 0.03, "estimate off by {rel} at N = 2·10⁴");
    }

    #[test]
    fn riemann_sum_reference_values() {
        assert_eq!(riemann_sum(2).unwrap(), 0.0);
        assert!((riemann_sum(250).unwrap() - 4.159435012438).abs() < 1e-9);
        assert!((riemann_sum(500).unwrap() - 4.973972165).abs() < 1e-7);
        assert!(riemann_sum(1).is_err());
        assert!(riemann_sum(3001).is_err());
    }

    #[test]
    fn campaign_is_deterministic_and_consistent() {
        let p = RandomModelParams::new(0.6, 10_000, 5).unwrap();
        let a = run_campaign(&p, 8).unwrap();
        let b = run_campaign(&p, 8).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.rows.len(), 8);
        // row i reproduces the single-seed pipeline
        let row = &a.rows[3];
        let q = RandomModelParams { seed: 5 + 3, ..p };
        let sample = realize(&q);
        assert_eq!(row.s_size, sample.s.len() as u64);
        assert_eq!(row.t_size, sample.t.len() as u64);
        assert_eq!(row.z, z_statistic(&sample.s, q.n));
        // seeds are seed, seed+1, …
        let seeds: Vec<u64> = a.rows.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![5, 6, 7, 8, 9, 10, 11, 12]);
    }

    #[test]
    fn campaign_zero_c_is_all_zeros() {
        let p = RandomModelParams::new(0.0, 5000, 1).unwrap();
        let r = run_campaign(&p, 3).unwrap();
        assert_eq!(r.s_count.mean, 0.0);
        assert_eq!(r.z.mean, 0.0);
        assert_eq!(r.density3_s.mean, 0.0);
    }

    #[test]
    fn campaign_rejects_oversized_work() {
        let p = RandomModelParams::new(0.5, MAX_HORIZON, 1).unwrap();
        match run_campaign(&p, 1000) {
            Err(Error::BudgetExceeded(_)) => {}
            other => panic!("expected budget rejection, got {other:?}"),
        }
    }

    #[test]
    fn density_chain_inequality() {
        // (S∖T)+(S∖T)+(S∖T) covers at least (S+S+S) minus (S+S+T), as sets
        let p = RandomModelParams::new(0.9, 10_000, 11).unwrap();
        let sample = realize(&p);
        assert!(!sample.t.is_empty(), "want a sample with violations");
        for horizon in [2500, 5000, 10_000] {
            let c3_remainder = set::sumset_bits(
                &[&sample.remainder, &sample.remainder, &sample.remainder],
                horizon,
            )
            .unwrap()
            .count();
            let c3_s = set::sumset_bits(&[&sample.s, &sample.s, &sample.s], horizon)
                .unwrap()
                .count();
            let c_sst = set::sumset_bits(&[&sample.s, &sample.s, &sample.t], horizon)
                .unwrap()
                .count();
            assert!(
                c3_remainder >= c3_s.saturating_sub(c_sst),
                "horizon {horizon}: {c3_remainder} < {c3_s} - {c_sst}"
            );
        }
    }

    #[test]
    fn summarize_basics() {
        let s = summarize(&[2.0, 4.0, 6.0]);
        assert_eq!(s.mean, 4.0);
        assert!((s.std_dev - 2.0).abs() < 1e-15);
        let one = summarize(&[5.0]);
        assert_eq!(one.std_dev, 0.0);
    }
}
