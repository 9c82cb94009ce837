//! Exact enumeration of solutions in bounded boxes.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::poly::IntPolynomial;
use crate::recurrence::{power_of_two_exponent, KBonacci, RecurrenceSpec};

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `F_n^{(k)} = m·2^m + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CullenSolution {
    pub n: u64,
    pub k: u64,
    pub m: u64,
    #[serde(serialize_with = "as_string")]
    pub witness: BigInt,
}

/// `F_n^{(k)} = 2^m + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pow2Plus1Solution {
    pub n: u64,
    pub k: u64,
    pub m: u64,
    #[serde(serialize_with = "as_string")]
    pub witness: BigInt,
}

/// `G_n = m·x^m + T(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralSolution {
    pub n: u64,
    pub m: u64,
    #[serde(serialize_with = "as_string")]
    pub x: BigInt,
    #[serde(serialize_with = "as_string")]
    pub witness: BigInt,
}

/// One JSON object per line.
pub fn to_json_lines<T: Serialize>(items: &[T]) -> String {
    items
        .iter()
        .map(|s| serde_json::to_string(s).expect("solution serializes") + "\n")
        .collect()
}

/// The `m >= 1` with `m·2^m + 1 = N`, if any.
pub fn decompose_cullen(n: &BigInt) -> Option<u64> {
    if *n < BigInt::from(3) {
        return None;
    }
    let v: BigInt = n - 1;
    // The 2-adic valuation of m·2^m is m + v_2(m).
    let tz = v.trailing_zeros()?;
    (1..=tz)
        .filter(|&m| m + m.trailing_zeros() as u64 == tz)
        .find(|&m| BigInt::from(m) << m == v)
}

fn scan_kbonacci<T, F>(k_max: u64, n_max: u64, hit: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, u64, &BigInt) -> Option<T> + Sync,
{
    if k_max < 2 {
        return invalid(format!("k_max must be at least 2, got {k_max}"));
    }
    if n_max < 1 {
        return invalid("n_max must be at least 1");
    }
    let per_k: Vec<Vec<T>> = (2..=k_max)
        .into_par_iter()
        .map(|k| {
            KBonacci::new(k as usize)
                .expect("k >= 2")
                .take(n_max as usize)
                .enumerate()
                .filter_map(|(i, f)| hit(k, i as u64 + 1, &f))
                .collect()
        })
        .collect();
    Ok(per_k.into_iter().flatten().collect())
}

/// All `F_n^{(k)} = m·2^m + 1` with `2 <= k <= k_max`, `1 <= n <= n_max`, sorted by `(k, n)`.
pub fn search_cullen_in_kbonacci(k_max: u64, n_max: u64) -> Result<Vec<CullenSolution>> {
    scan_kbonacci(k_max, n_max, |k, n, f| {
        decompose_cullen(f).map(|m| CullenSolution {
            n,
            k,
            m,
            witness: f.clone(),
        })
    })
}

/// All `F_n^{(k)} = 2^m + 1` with `m >= 1` in the same box, sorted by `(k, n)`.
pub fn search_pow2_plus1_in_kbonacci(k_max: u64, n_max: u64) -> Result<Vec<Pow2Plus1Solution>> {
    scan_kbonacci(k_max, n_max, |k, n, f| {
        let m = power_of_two_exponent(&(f - 1))?;
        (m >= 1).then(|| Pow2Plus1Solution {
            n,
            k,
            m,
            witness: f.clone(),
        })
    })
}

/// All `G_n = m·x^m + T(x)` with `0 <= n <= n_max`, `1 <= m <= m_max`, `x` in
/// the range, sorted by `(n, m, x)`. Every `x` must satisfy `|x| >= 2`.
pub fn search_general(
    spec: &RecurrenceSpec,
    t: &IntPolynomial,
    x_range: RangeInclusive<i64>,
    n_max: u64,
    m_max: u64,
) -> Result<Vec<GeneralSolution>> {
    if m_max < 1 {
        return invalid("m_max must be at least 1");
    }
    if x_range.is_empty() {
        return Ok(Vec::new());
    }
    if x_range.clone().any(|x| x.abs() < 2) {
        return invalid("every x in the range must satisfy |x| >= 2");
    }
    let g: Vec<BigInt> = spec.terms().take(n_max as usize + 1).collect();
    let max_abs = g.iter().map(|v| v.abs()).max().unwrap_or_default();
    let xs: Vec<i64> = x_range.collect();
    let mut out: Vec<GeneralSolution> = xs
        .par_iter()
        .flat_map_iter(|&x| {
            let xb = BigInt::from(x);
            let tx = t.eval(&xb);
            // |m·x^m| grows strictly in m, so stop once it exceeds every |G_n - T(x)|.
            let cap = &max_abs + tx.abs();
            let mut vals: Vec<(u64, BigInt)> = Vec::new();
            let mut pw = BigInt::one();
            for m in 1..=m_max {
                pw *= &xb;
                let v = BigInt::from(m) * &pw;
                if v.abs() > cap {
                    break;
                }
                vals.push((m, v));
            }
            let g = &g;
            g.iter().enumerate().flat_map(move |(n, gn)| {
                let target = gn - &tx;
                vals.iter()
                    .filter(|(_, v)| *v == target)
                    .map(|(m, _)| GeneralSolution {
                        n: n as u64,
                        m: *m,
                        x: BigInt::from(x),
                        witness: gn.clone(),
                    })
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    out.sort_by(|a, b| (a.n, a.m, &a.x).cmp(&(b.n, b.m, &b.x)));
    Ok(out)
}

/// Checks `2·L_{4t} = 2·L_{2t}^2 - 4` for `1 <= t <= t_max`.
pub fn verify_lucas_family(t_max: u64) -> bool {
    let l: Vec<BigInt> = RecurrenceSpec::lucas()
        .terms()
        .take(4 * t_max as usize + 1)
        .collect();
    (1..=t_max as usize).all(|t| {
        let lhs = &l[4 * t] * 2;
        let rhs = &l[2 * t] * &l[2 * t] * 2 - 4;
        lhs == rhs
    })
}
