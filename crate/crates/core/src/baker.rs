//! Lower bounds for linear forms in logarithms and the bound chain built on them.
//!
//! Every evaluator returns an enclosure; downstream code uses the upper end so
//! that each produced bound is a certified over-estimate.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::enclosure::RealEnclosure;
use crate::error::{invalid, Error, Result};

fn dec(s: &str, bits: u32) -> RealEnclosure {
    RealEnclosure::from_decimal(s, bits).expect("valid decimal literal")
}

fn int(v: i64, bits: u32) -> RealEnclosure {
    RealEnclosure::from_int(v, bits)
}

/// Enclosure of a configuration constant given as `f64` (e.g. `13.1`), read
/// through its shortest decimal representation.
pub fn constant_from_f64(v: f64, bits: u32) -> Result<RealEnclosure> {
    if !v.is_finite() {
        return invalid(format!("non-finite constant {v}"));
    }
    RealEnclosure::from_decimal(&format!("{v:e}"), bits)
}

/// A bound on a logarithmic exponent together with the inputs that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct BoundValue {
    pub exponent: RealEnclosure,
    pub provenance: serde_json::Value,
}

#[derive(Debug, Clone)]
pub struct MatveevInput {
    pub t: u32,
    pub d: u64,
    pub a: Vec<RealEnclosure>,
    pub b: RealEnclosure,
}

/// `1.4 · 30^{t+3} · t^{4.5} · D^2 (1 + log D)(1 + log B) A_1 ⋯ A_t`.
pub fn matveev_exponent(input: &MatveevInput) -> Result<BoundValue> {
    let MatveevInput { t, d, a, b } = input;
    if *t == 0 || *d == 0 {
        return invalid("t and D must be positive");
    }
    if a.len() != *t as usize {
        return invalid(format!("expected {t} values A_j, got {}", a.len()));
    }
    let bits = b.bits();
    let floor = dec("0.16", bits);
    if a.iter().any(|x| x.lo() < floor.lo()) {
        return invalid("every A_j must be at least 0.16");
    }
    if b.lo() < int(1, bits).lo() {
        return invalid("B must be at least 1");
    }
    let tt = int(i64::from(*t), bits);
    let t45 = &tt.powi(4) * &tt.sqrt()?;
    let dd = int(*d as i64, bits);
    let one = int(1, bits);
    let mut v = &(&dec("1.4", bits) * &int(30, bits).powi(u64::from(*t) + 3)) * &t45;
    v = &v * &dd.sqr();
    v = &v * &(&one + &dd.ln()?);
    v = &v * &(&one + &b.ln()?);
    for x in a {
        v = &v * x;
    }
    Ok(BoundValue {
        exponent: v,
        provenance: json!({
            "bound": "matveev",
            "t": t,
            "D": d,
            "A": a.iter().map(|x| x.hi_decimal(12)).collect::<Vec<_>>(),
            "B": b.hi_decimal(12),
        }),
    })
}

/// The Matveev input for `γ_1 = g(α,k)/m`, `γ_2 = 2`, `γ_3 = α` in degree `k`.
pub fn theorem2_matveev_input(k: u64, m: &BigInt, bits: u32) -> Result<MatveevInput> {
    if k < 3 {
        return invalid(format!("k must be at least 3, got {k}"));
    }
    if *m < BigInt::from(10) {
        return invalid(format!("m must be at least 10, got {m}"));
    }
    let kk = int(k as i64, bits);
    let mm = RealEnclosure::from_bigint(m, bits);
    let a1 = &kk * &(&int(4 * k as i64 + 4, bits) * &mm).ln()?;
    let a2 = &kk * &int(2, bits).ln()?;
    let b = &(&dec("2.5", bits) * &mm) + &dec("0.8", bits);
    Ok(MatveevInput {
        t: 3,
        d: k,
        a: vec![a1, a2, dec("0.7", bits)],
        b,
    })
}

/// Fully instantiated Matveev exponent for the Cullen equation in k-bonacci numbers.
pub fn theorem2_matveev_coefficient(k: u64, m: &BigInt, bits: u32) -> Result<BoundValue> {
    let mut v = matveev_exponent(&theorem2_matveev_input(k, m, bits)?)?;
    v.provenance["k"] = json!(k);
    v.provenance["m"] = json!(m.to_string());
    Ok(v)
}

/// The simplified closed form `6.7·10^11 · k^4 · log^2 m`.
pub fn theorem2_matveev_simplified(k: u64, m: &BigInt, bits: u32) -> Result<RealEnclosure> {
    let lm = RealEnclosure::from_bigint(m, bits).ln()?;
    Ok(&(&dec("6.7e11", bits) * &int(k as i64, bits).powi(4)) * &lm.sqr())
}

/// Checks `1 + log(2.5m + 0.8) < 1.9 log m`.
pub fn log_b_simplification_holds(m: &BigInt, bits: u32) -> Result<bool> {
    let mm = RealEnclosure::from_bigint(m, bits);
    let lhs = &int(1, bits) + &(&(&dec("2.5", bits) * &mm) + &dec("0.8", bits)).ln()?;
    let rhs = &dec("1.9", bits) * &mm.ln()?;
    Ok(lhs.certainly_lt(&rhs))
}

/// `X = 2A log^2 A`, the bound for any `x` with `x / log^2 x < A` (`A >= 10^7`).
pub fn solve_x_lt_2alogsqa(a: &RealEnclosure) -> Result<RealEnclosure> {
    let bits = a.bits();
    if a.lo() < dec("1e7", bits).lo() {
        return invalid("A must be at least 1e7");
    }
    Ok(&(a * &int(2, bits)) * &a.ln()?.sqr())
}

/// Certifies `X / log^2 X > A` for `X = 2A log^2 A`.
pub fn key_lemma_holds(a: &RealEnclosure) -> Result<bool> {
    let x = solve_x_lt_2alogsqa(a)?;
    let q = x.checked_div(&x.ln()?.sqr())?;
    Ok(q.certainly_gt(a))
}

/// The two available forms of the m-bound in terms of k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MBoundMode {
    /// `5.9·10^13 k^4 log^2 k`.
    #[default]
    Paper,
    /// `2A log^2 A` with `A = 9.7·10^11 k^4 log k`.
    Chain,
}

#[derive(Debug, Clone, Serialize)]
pub struct MBound {
    pub k: u64,
    /// `5.9·10^13 k^4 log^2 k`.
    pub simplified: RealEnclosure,
    /// `A = 9.7·10^11 k^4 log k`.
    pub chain_a: RealEnclosure,
    /// `2A log^2 A`.
    pub chain: RealEnclosure,
    /// Whether `chain <= simplified` is certified.
    pub chain_within_simplified: bool,
}

impl MBound {
    pub fn select(&self, mode: MBoundMode) -> &RealEnclosure {
        match mode {
            MBoundMode::Paper => &self.simplified,
            MBoundMode::Chain => &self.chain,
        }
    }
}

pub fn theorem2_m_bound(k: u64, bits: u32) -> Result<MBound> {
    if k < 3 {
        return invalid(format!("k must be at least 3, got {k}"));
    }
    let kk = int(k as i64, bits);
    let lk = kk.ln()?;
    let k4 = kk.powi(4);
    let simplified = &(&dec("5.9e13", bits) * &k4) * &lk.sqr();
    let chain_a = &(&dec("9.7e11", bits) * &k4) * &lk;
    let chain = solve_x_lt_2alogsqa(&chain_a)?;
    let chain_within_simplified = chain.certainly_le(&simplified);
    Ok(MBound {
        k,
        simplified,
        chain_a,
        chain,
        chain_within_simplified,
    })
}

/// `n < 2.5m + 0.8`.
pub fn n_from_m(m: &RealEnclosure) -> Result<RealEnclosure> {
    let bits = m.bits();
    if m.lo() < int(1, bits).lo() {
        return invalid("m must be at least 1");
    }
    Ok(&(&dec("2.5", bits) * m) + &dec("0.8", bits))
}

#[derive(Debug, Clone)]
pub struct LaurentInput {
    pub d: u64,
    pub log_a1: RealEnclosure,
    pub log_a2: RealEnclosure,
    pub b1: BigInt,
    pub b2: BigInt,
    pub m_param: RealEnclosure,
    pub c2: RealEnclosure,
}

impl LaurentInput {
    /// `b' = b_1 / (D log A_2) + b_2 / (D log A_1)`.
    pub fn b_prime(&self) -> Result<RealEnclosure> {
        let bits = self.c2.bits();
        let d = int(self.d as i64, bits);
        let t1 = RealEnclosure::from_bigint(&self.b1, bits).checked_div(&(&d * &self.log_a2))?;
        let t2 = RealEnclosure::from_bigint(&self.b2, bits).checked_div(&(&d * &self.log_a1))?;
        Ok(&t1 + &t2)
    }
}

/// `C_2 · D^4 · (max{log b' + 0.38, m/D, 1})^2 · log A_1 · log A_2`.
pub fn laurent_exponent(input: &LaurentInput) -> Result<BoundValue> {
    let bits = input.c2.bits();
    if input.d == 0 {
        return invalid("D must be positive");
    }
    let inv_d = RealEnclosure::from_ratio(1, input.d as i64, bits);
    if input.log_a1.lo() < inv_d.lo() || input.log_a2.lo() < inv_d.lo() {
        return invalid("log A_1 and log A_2 must be at least 1/D");
    }
    let zero = BigInt::from(0);
    if input.b1 <= zero || input.b2 <= zero {
        return invalid("b_1 and b_2 must be positive");
    }
    if !input.m_param.is_positive() || !input.c2.is_positive() {
        return invalid("m and C_2 must be positive");
    }
    let d = int(input.d as i64, bits);
    let bp = input.b_prime()?;
    let h = (&bp.ln()? + &dec("0.38", bits))
        .max(&input.m_param.checked_div(&d)?)
        .max(&int(1, bits));
    let v = &(&(&(&input.c2 * &d.powi(4)) * &h.sqr()) * &input.log_a1) * &input.log_a2;
    Ok(BoundValue {
        exponent: v,
        provenance: json!({
            "bound": "laurent",
            "D": input.d,
            "log_A1": input.log_a1.hi_decimal(12),
            "log_A2": input.log_a2.hi_decimal(12),
            "b1": input.b1.to_string(),
            "b2": input.b2.to_string(),
            "b_prime": bp.hi_decimal(12),
            "m": input.m_param.hi_decimal(12),
            "C2": input.c2.hi_decimal(12),
        }),
    })
}

/// How the k-bound is derived from an m-bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum KFromMMode {
    /// The literal `k < 21761 log m`.
    #[default]
    Paper,
    /// `(2 / log 2)(log 3.6 + 576 C_2 log m)`.
    Computed,
}

/// Upper bound on k given an upper bound `m` (at least 10) on the Cullen index.
pub fn k_bound_from_laurent(
    m: &RealEnclosure,
    c2: &RealEnclosure,
    mode: KFromMMode,
) -> Result<RealEnclosure> {
    let bits = m.bits();
    if m.lo() < int(10, bits).lo() {
        return invalid("m must be at least 10");
    }
    let lm = m.ln()?;
    match mode {
        KFromMMode::Paper => Ok(&int(21761, bits) * &lm),
        KFromMMode::Computed => {
            let l2 = int(2, bits).ln()?;
            let inner = &dec("3.6", bits).ln()? + &(&(c2 * &int(576, bits)) * &lm);
            (&int(2, bits) * &inner).checked_div(&l2)
        }
    }
}

/// The Laurent exponent as applied to `Λ = log m - (⌊log m / log 2⌋ + δ - 2) log 2`:
/// `D = 1`, `log A_1 = 1`, `log A_2 = log m`, `m_param = 24`.
pub fn theorem2_laurent_exponent(m: &BigInt, c2: &RealEnclosure) -> Result<BoundValue> {
    let bits = c2.bits();
    if *m < BigInt::from(10) {
        return invalid("m must be at least 10");
    }
    let lm = RealEnclosure::from_bigint(m, bits).ln()?;
    let b2 = BigInt::from(m.bits() + 1);
    laurent_exponent(&LaurentInput {
        d: 1,
        log_a1: int(1, bits),
        log_a2: lm,
        b1: BigInt::from(1),
        b2,
        m_param: int(24, bits),
        c2: c2.clone(),
    })
}

/// Largest integer strictly below every value of the enclosure's upper end, i.e.
/// the largest `k` with `k < x` that remains possible.
pub fn largest_int_below(x: &RealEnclosure) -> Result<i64> {
    use num_traits::ToPrimitive;
    let c: BigInt = x.hi().ceil() - 1;
    c.to_i64()
        .ok_or_else(|| Error::InvalidArgument(format!("bound {} exceeds i64", x.hi())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const B: u32 = 256;

    fn close(e: &RealEnclosure, v: f64, rel: f64) -> bool {
        (e.to_f64() - v).abs() <= v.abs() * rel
    }

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn matveev_trivial_product() {
        let v = matveev_exponent(&MatveevInput {
            t: 1,
            d: 1,
            a: vec![dec("0.16", B)],
            b: int(1, B),
        })
        .unwrap();
        assert!(v.exponent.contains(&crate::Dyadic::from_int(181440)));
    }

    #[test]
    fn matveev_rejects_bad_inputs() {
        let bad = MatveevInput {
            t: 1,
            d: 1,
            a: vec![dec("0.15", B)],
            b: int(1, B),
        };
        assert!(matveev_exponent(&bad).is_err());
        let bad = MatveevInput {
            t: 2,
            d: 1,
            a: vec![dec("0.16", B)],
            b: int(1, B),
        };
        assert!(matveev_exponent(&bad).is_err());
        let bad = MatveevInput {
            t: 1,
            d: 1,
            a: vec![dec("0.16", B)],
            b: dec("0.5", B),
        };
        assert!(matveev_exponent(&bad).is_err());
    }

    #[test]
    fn simplification_factor_product() {
        // 1.4 · 30^6 · 3^4.5 · 2 · 1.9 · 2.5 · log 2 · 0.7
        let v = &(&(&(&dec("1.4", B) * &int(30, B).powi(6))
            * &(&int(3, B).powi(4) * &int(3, B).sqrt().unwrap()))
            * &dec("9.5", B))
            * &(&int(2, B).ln().unwrap() * &dec("0.7", B));
        assert!(close(&v, 6.60006657928686e11, 1e-12));
        assert!(v.certainly_le(&dec("6.7e11", B)));
    }

    #[test]
    fn theorem2_coefficient_examples() {
        let v = theorem2_matveev_coefficient(3, &big("10"), B).unwrap();
        assert!(close(&v.exponent, 2.5475344e14, 1e-7));
        assert!(v
            .exponent
            .certainly_le(&theorem2_matveev_simplified(3, &big("10"), B).unwrap()));
        let m = big("100000000000000000000000");
        let v = theorem2_matveev_coefficient(158, &m, B).unwrap();
        assert!(v
            .exponent
            .certainly_le(&theorem2_matveev_simplified(158, &m, B).unwrap()));
        assert!(log_b_simplification_holds(&big("10"), B).unwrap());
        assert!(theorem2_matveev_coefficient(2, &big("10"), B).is_err());
        assert!(theorem2_matveev_coefficient(3, &big("9"), B).is_err());
    }

    #[test]
    fn simplified_form_misses_a_log_k_factor() {
        // At small m the instantiated exponent exceeds 6.7e11 k^4 log^2 m,
        // but stays below it once the missing log k factor is restored.
        let m = big("10");
        for k in [10u64, 50, 158, 500] {
            let v = theorem2_matveev_coefficient(k, &m, B).unwrap().exponent;
            let s = theorem2_matveev_simplified(k, &m, B).unwrap();
            assert!(v.certainly_gt(&s), "k={k}");
            let lk = int(k as i64, B).ln().unwrap();
            assert!(v.certainly_lt(&(&s * &lk)), "k={k}");
        }
    }

    #[test]
    fn key_lemma_examples() {
        let x = solve_x_lt_2alogsqa(&dec("1e7", B)).unwrap();
        assert!(close(&x, 5195860148.2688, 1e-12));
        assert!(solve_x_lt_2alogsqa(&dec("9.99e6", B)).is_err());
        let k = int(3, B);
        let a = &(&dec("9.7e11", B) * &k.powi(4)) * &k.ln().unwrap();
        assert!(key_lemma_holds(&a).unwrap());
    }

    #[test]
    fn m_bound_examples() {
        let b = theorem2_m_bound(158, B).unwrap();
        assert!(close(&b.simplified, 9.4238e23, 1e-4));
        assert!(b.simplified.certainly_lt(&dec("9.5e23", B)));
        let b = theorem2_m_bound(274, B).unwrap();
        assert!(close(&b.simplified, 1.04777e25, 1e-4));
        assert!(b.simplified.certainly_lt(&dec("1.1e25", B)));
        let b = theorem2_m_bound(2_100_000, B).unwrap();
        assert!(close(&b.simplified, 2.43164e41, 1e-4));
        assert!(b.simplified.certainly_le(&dec("2.5e41", B)));
    }

    #[test]
    fn chain_value_exceeds_simplified_form() {
        for (k, chain) in [(158u64, 1.498e25), (274, 1.6455e26), (166, 1.8586e25)] {
            let b = theorem2_m_bound(k, B).unwrap();
            assert!(close(&b.chain, chain, 1e-3), "k={k}");
            assert!(!b.chain_within_simplified);
            assert_eq!(b.select(MBoundMode::Chain), &b.chain);
        }
    }

    #[test]
    fn n_bounds() {
        assert!(close(
            &n_from_m(&dec("9.42e23", B)).unwrap(),
            2.355e24,
            1e-12
        ));
        assert!(n_from_m(&int(10, B))
            .unwrap()
            .contains_rational(&crate::enclosure::parse_decimal("25.8").unwrap()));
        assert!(close(&n_from_m(&int(1, B)).unwrap(), 3.3, 1e-15));
        assert!(n_from_m(&dec("0.5", B)).is_err());
    }

    #[test]
    fn laurent_examples() {
        let m = big("1000000");
        let c2 = dec("13.1", B);
        let v = theorem2_laurent_exponent(&m, &c2).unwrap();
        let lm = int(1_000_000, B).ln().unwrap();
        assert!(close(&v.exponent, 7545.6 * lm.to_f64(), 1e-12));
        let v = theorem2_laurent_exponent(&m, &dec("18.8", B)).unwrap();
        assert!(close(&v.exponent, 10828.8 * lm.to_f64(), 1e-12));
        let v = laurent_exponent(&LaurentInput {
            d: 1,
            log_a1: int(1, B),
            log_a2: int(1, B),
            b1: 1.into(),
            b2: 1.into(),
            m_param: int(1, B),
            c2: int(1, B),
        })
        .unwrap();
        assert!(close(&v.exponent, 1.1516448711, 1e-9));
    }

    #[test]
    fn k_bounds_from_laurent() {
        let c2 = dec("13.1", B);
        let k = k_bound_from_laurent(&dec("2.5e41", B), &c2, KFromMMode::Paper).unwrap();
        assert!(close(&k, 2074308.125, 1e-9));
        let k = k_bound_from_laurent(&int(10, B), &c2, KFromMMode::Paper).unwrap();
        assert!(close(&k, 50106.554, 1e-7));
        let k = k_bound_from_laurent(&int(10, B), &c2, KFromMMode::Computed).unwrap();
        assert!(close(&k, 50135.577, 1e-7));
        for e in [6, 12, 24, 41] {
            let m = dec(&format!("1e{e}"), B);
            let p = k_bound_from_laurent(&m, &c2, KFromMMode::Paper)
                .unwrap()
                .to_f64();
            let c = k_bound_from_laurent(&m, &c2, KFromMMode::Computed)
                .unwrap()
                .to_f64();
            assert!((c - p).abs() / p < 1e-3);
        }
        assert!(k_bound_from_laurent(&int(9, B), &c2, KFromMMode::Paper).is_err());
    }

    #[test]
    fn constants_from_config_values() {
        let c = constant_from_f64(13.1, 128).unwrap();
        assert!(c.contains_rational(&crate::enclosure::parse_decimal("13.1").unwrap()));
        assert!(constant_from_f64(f64::NAN, 128).is_err());
    }

    proptest! {
        #[test]
        fn key_lemma_over_log_uniform_range(e in 7.0f64..50.0) {
            let a = RealEnclosure::from_f64(10f64.powf(e), 256).unwrap();
            prop_assert!(key_lemma_holds(&a).unwrap());
        }

        #[test]
        fn matveev_is_monotone(a1 in 0.16f64..100.0, da in 0.0f64..10.0, b in 1.0f64..1e6, db in 0.0f64..1e3, d in 1u64..50) {
            let e = |a: f64, b: f64, d: u64, t: u32| {
                let mut v = vec![RealEnclosure::from_f64(a, 128).unwrap()];
                v.extend((1..t).map(|_| dec("0.5", 128)));
                matveev_exponent(&MatveevInput { t, d, a: v, b: RealEnclosure::from_f64(b, 128).unwrap() }).unwrap().exponent
            };
            let base = e(a1, b, d, 1);
            prop_assert!(base.certainly_le(&e(a1 + da, b, d, 1)) || da == 0.0);
            prop_assert!(base.certainly_le(&e(a1, b + db, d, 1)) || db == 0.0);
            prop_assert!(base.certainly_le(&e(a1, b, d + 1, 1)));
            prop_assert!(e(a1, b, d, 2).certainly_le(&e(a1, b, d, 3)));
        }
    }
}
