//! Distance of `log_2 m` to the nearest integer, its minimum over a range,
//! and the loop that alternates the m-bound in k with the k-bound from that
//! minimum.
//!
//! For `m` not a power of two with `2^s` the nearest power, `|m - 2^s| >= 1`,
//! so the distance is at least `log_2(1 + 2^{-s})` or `-log_2(1 - 2^{-s})`,
//! attained exactly at `2^s ± 1`. Both decrease in `s`, so the minimum over
//! `3 <= m <= M` is found among the numbers `2^s ± 1 <= M`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baker::{largest_int_below, theorem2_m_bound, KFromMMode, MBoundMode};
use crate::dyadic::Dyadic;
use crate::enclosure::{RealEnclosure, DEFAULT_PRECISION_BITS};
use crate::error::{invalid, Error, Result};
use crate::recurrence::power_of_two_exponent;

/// Largest range accepted by the exhaustive scan.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

/// The hypothesis the loop runs under: no solution with `k >= 159`.
pub const HYPOTHESIS_K: u64 = 159;

const MAX_ITERATIONS: usize = 50;

/// Enclosure of `min({log_2 m}, 1 - {log_2 m})`.
///
/// `log_2 m` is enclosed at the given precision and the nearest integer is
/// subtracted, so resolving distances near `2^{-s}` needs roughly
/// `log_2 s + s` bits.
pub fn frac_dist_log2(m: &BigInt, bits: u32) -> Result<RealEnclosure> {
    if *m < BigInt::from(3) {
        return invalid(format!("m must be at least 3, got {m}"));
    }
    if power_of_two_exponent(m).is_some() {
        return invalid(format!("{m} is a power of two"));
    }
    let l = RealEnclosure::from_bigint(m, bits).with_bits(bits).log2()?;
    let nearest = (&l.mid() + &Dyadic::pow2(-1)).floor();
    let d = (&l - &RealEnclosure::from_bigint(&nearest, bits)).abs();
    if d.contains_zero() || !d.certainly_lt(&RealEnclosure::from_ratio(1, 2, bits)) {
        return Err(Error::PrecisionExhausted {
            bits,
            what: format!("distance of log2({m}) to the nearest integer"),
        });
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FracMinMethod {
    Analytic,
    #[serde(alias = "brute")]
    BruteForce,
}

#[derive(Debug, Clone, Serialize)]
pub struct FracMinResult {
    pub min_value: RealEnclosure,
    #[serde(serialize_with = "crate::recurrence::bigint_strings::serialize")]
    pub argmins: Vec<BigInt>,
    /// Largest integer included in the scan.
    pub search_bound: String,
    pub method: FracMinMethod,
}

impl FracMinResult {
    /// Exponent `s` of the power of two nearest to the first argmin.
    pub fn argmin_exponent(&self) -> u64 {
        nearest_power_exponent(&self.argmins[0])
    }
}

fn nearest_power_exponent(m: &BigInt) -> u64 {
    // Compare against the powers of two on either side of m.
    let b = m.bits();
    let below = BigInt::one() << (b - 1);
    let above = BigInt::one() << b;
    if (m - &below) <= (&above - m) {
        b - 1
    } else {
        b
    }
}

/// Pick the minima from `(m, distance)` pairs; ties are enclosure overlaps.
fn select_min(cands: Vec<(BigInt, RealEnclosure)>) -> (RealEnclosure, Vec<BigInt>) {
    let best = cands
        .iter()
        .min_by(|a, b| a.1.mid().cmp(&b.1.mid()))
        .map(|c| c.1.clone())
        .expect("nonempty candidate set");
    let mut hits: Vec<&(BigInt, RealEnclosure)> =
        cands.iter().filter(|c| c.1.overlaps(&best)).collect();
    hits.sort_by(|a, b| match a.1.mid().cmp(&b.1.mid()) {
        Ordering::Equal => b.0.cmp(&a.0),
        o => o,
    });
    let value = hits
        .iter()
        .skip(1)
        .fold(hits[0].1.clone(), |acc, h| acc.hull(&h.1));
    (value, hits.into_iter().map(|h| h.0.clone()).collect())
}

fn dist_f64(m: u64) -> f64 {
    let l = (m as f64).log2();
    let f = l - l.floor();
    f.min(1.0 - f)
}

/// Minimum of the distance over `3 <= m <= M`, `m` not a power of two.
/// `M` is the upper end of the bound enclosure, rounded down to an integer.
pub fn frac_min_upto(
    bound: &RealEnclosure,
    method: FracMinMethod,
    bits: u32,
) -> Result<FracMinResult> {
    let top = bound.hi().floor();
    if top < BigInt::from(3) {
        return invalid("the search bound must be at least 3");
    }
    let cands = match method {
        FracMinMethod::Analytic => {
            let mut v = Vec::new();
            let mut s = 1u64;
            loop {
                let p = BigInt::one() << s;
                let plus = &p + 1u32;
                let minus = &p - 1u32;
                if minus > top {
                    break;
                }
                if s >= 2 {
                    v.push(minus);
                }
                if plus <= top && s >= 2 {
                    v.push(plus);
                }
                s += 1;
            }
            if v.is_empty() {
                v.push(BigInt::from(3));
            }
            v.into_iter()
                .map(|m| frac_dist_log2(&m, bits).map(|d| (m, d)))
                .collect::<Result<Vec<_>>>()?
        }
        FracMinMethod::BruteForce => {
            let limit = top
                .to_u64()
                .filter(|&t| t <= BRUTE_FORCE_LIMIT)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "exhaustive scan limited to M <= {BRUTE_FORCE_LIMIT}"
                    ))
                })?;
            let ok = |m: &u64| !m.is_power_of_two();
            let fmin = (3..=limit)
                .into_par_iter()
                .filter(ok)
                .map(dist_f64)
                .reduce(|| f64::INFINITY, f64::min);
            let mut survivors: Vec<u64> = (3..=limit)
                .into_par_iter()
                .filter(ok)
                .filter(|&m| dist_f64(m) <= fmin + 1e-9)
                .collect();
            survivors.sort_unstable();
            survivors
                .into_par_iter()
                .map(|m| {
                    let m = BigInt::from(m);
                    frac_dist_log2(&m, bits).map(|d| (m, d))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let (min_value, argmins) = select_min(cands);
    Ok(FracMinResult {
        min_value,
        argmins,
        search_bound: top.to_string(),
        method,
    })
}

/// Largest k still allowed by `2^{-k/2} > fm · log 2` (or `3.6 · 2^{-k/2}`).
pub fn k_from_fracmin(fm: &RealEnclosure, include_3_6_factor: bool) -> Result<u64> {
    if !fm.is_positive() {
        return invalid("the fractional-part minimum must be positive");
    }
    let bits = fm.bits();
    let l2 = RealEnclosure::from_int(2, bits).ln()?;
    // k < -2 log_2(fm · log 2) [+ 2 log_2 3.6]
    let mut y = -&(&RealEnclosure::from_int(2, bits) * &(fm * &l2).log2()?);
    if include_3_6_factor {
        y = &y
            + &(&RealEnclosure::from_int(2, bits)
                * &RealEnclosure::from_decimal("3.6", bits)?.log2()?);
    }
    let k = largest_int_below(&y)?;
    u64::try_from(k).map_err(|_| Error::InvalidArgument(format!("no admissible k ({k})")))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct ReductionConfig {
    pub include_3_6_factor: bool,
    pub k_from_m_mode: KFromMMode,
    pub laurent_c2: f64,
    pub m_bound_mode: MBoundMode,
    pub precision_bits: u32,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            include_3_6_factor: false,
            k_from_m_mode: KFromMMode::Paper,
            laurent_c2: 13.1,
            m_bound_mode: MBoundMode::Paper,
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionStep {
    pub k_in: u64,
    /// Upper end of the m-bound, rounded up.
    pub m_bound: String,
    pub s: u64,
    #[serde(serialize_with = "crate::recurrence::bigint_strings::serialize")]
    pub argmins: Vec<BigInt>,
    pub frac_min: RealEnclosure,
    pub k_out: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionTrace {
    pub iterations: Vec<ReductionStep>,
    pub converged: bool,
    /// Index of the first iteration whose output fell below the hypothesis `k >= 159`.
    pub hypothesis_contradicted_at: Option<usize>,
    pub config: ReductionConfig,
}

impl ReductionTrace {
    pub fn final_k(&self) -> u64 {
        self.iterations.last().map_or(0, |s| s.k_out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

/// Digits used for decimal bounds in traces and reports.
pub const BOUND_DIGITS: usize = 15;

/// Iterate `k ↦ k_from_fracmin(frac_min_upto(m_bound(k)))` to a fixed point.
pub fn run_reduction(k_start: u64, config: &ReductionConfig) -> Result<ReductionTrace> {
    if k_start < HYPOTHESIS_K {
        return invalid(format!(
            "k_start must be at least {HYPOTHESIS_K}, got {k_start}"
        ));
    }
    let bits = config.precision_bits;
    if bits < 64 {
        return invalid("precision must be at least 64 bits");
    }
    let mut iterations = Vec::new();
    let mut contradicted = None;
    let mut k = k_start;
    for i in 0..MAX_ITERATIONS {
        let mb = theorem2_m_bound(k, bits)?;
        let m_bound = mb.select(config.m_bound_mode).clone();
        let fm = frac_min_upto(&m_bound, FracMinMethod::Analytic, bits)?;
        let k_next = k_from_fracmin(&fm.min_value, config.include_3_6_factor)?;
        // Both bounds hold, so the smaller one is the new bound.
        let k_out = k_next.min(k);
        if contradicted.is_none() && k_out < HYPOTHESIS_K {
            contradicted = Some(i);
        }
        iterations.push(ReductionStep {
            k_in: k,
            m_bound: m_bound.hi_decimal(BOUND_DIGITS),
            s: fm.argmin_exponent(),
            argmins: fm.argmins.clone(),
            frac_min: fm.min_value.clone(),
            k_out,
        });
        if k_out == k {
            return Ok(ReductionTrace {
                iterations,
                converged: true,
                hypothesis_contradicted_at: contradicted,
                config: config.clone(),
            });
        }
        k = k_out;
    }
    Err(Error::NoConvergence(format!(
        "reduction did not reach a fixed point in {MAX_ITERATIONS} iterations; last k = {k}; trace: {}",
        serde_json::to_string(&iterations).unwrap_or_default()
    )))
}

/// Whether `m` is certified closer (in `log_2`) to a power of two than `2^s + 1`.
pub fn beats_neighbour_candidates(s: u64, m: &BigInt, bits: u32) -> Result<bool> {
    let best = frac_dist_log2(&((BigInt::one() << s) + 1u32), bits)?;
    Ok(frac_dist_log2(m, bits)?.certainly_lt(&best))
}
