//! Exact evaluation of integer linear recurrences, k-generalized Fibonacci
//! numbers, Cullen numbers and the right-hand sides `m·x^m + T(x)`.
//!
//! Everything here is exact big-integer arithmetic. Sequence terms are
//! produced by linear iteration over a window of the last `k` values, so the
//! cost of `G_n` grows with `n` times the size of the values involved.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::poly::IntPolynomial;

/// Order-`k` recurrence `G_{n+k} = c_{k-1} G_{n+k-1} + ... + c_0 G_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct RecurrenceSpec {
    coefficients: Vec<BigInt>,
    initial: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    order: usize,
    #[serde(with = "bigint_strings")]
    coefficients: Vec<BigInt>,
    #[serde(with = "bigint_strings")]
    initial: Vec<BigInt>,
}

impl TryFrom<SpecRepr> for RecurrenceSpec {
    type Error = crate::Error;
    fn try_from(r: SpecRepr) -> Result<RecurrenceSpec> {
        if r.order != r.coefficients.len() {
            return invalid(format!(
                "order {} does not match {} coefficients",
                r.order,
                r.coefficients.len()
            ));
        }
        RecurrenceSpec::new(r.coefficients, r.initial)
    }
}

impl From<RecurrenceSpec> for SpecRepr {
    fn from(s: RecurrenceSpec) -> SpecRepr {
        SpecRepr {
            order: s.order(),
            coefficients: s.coefficients,
            initial: s.initial,
        }
    }
}

/// Big integers as JSON decimal strings; plain JSON integers are accepted on
/// input as well.
pub(crate) mod bigint_strings {
    use num_bigint::BigInt;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Either {
        Str(String),
        Int(i64),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Either>::deserialize(d)?
            .into_iter()
            .map(|e| match e {
                Either::Str(s) => s
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| D::Error::custom(format!("bad integer {s:?}"))),
                Either::Int(i) => Ok(BigInt::from(i)),
            })
            .collect()
    }
}

impl RecurrenceSpec {
    /// `coefficients` are `c_0..c_{k-1}`, `initial` are `G_0..G_{k-1}`.
    pub fn new(coefficients: Vec<BigInt>, initial: Vec<BigInt>) -> Result<RecurrenceSpec> {
        if coefficients.is_empty() {
            return invalid("recurrence order must be at least 1");
        }
        if coefficients.len() != initial.len() {
            return invalid(format!(
                "{} coefficients but {} initial values",
                coefficients.len(),
                initial.len()
            ));
        }
        if coefficients[0].is_zero() {
            return invalid("c_0 must be nonzero");
        }
        Ok(RecurrenceSpec {
            coefficients,
            initial,
        })
    }

    pub fn from_i64(coefficients: &[i64], initial: &[i64]) -> Result<RecurrenceSpec> {
        RecurrenceSpec::new(
            coefficients.iter().map(|&c| BigInt::from(c)).collect(),
            initial.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub fn fibonacci() -> RecurrenceSpec {
        RecurrenceSpec::from_i64(&[1, 1], &[0, 1]).unwrap()
    }

    pub fn lucas() -> RecurrenceSpec {
        RecurrenceSpec::from_i64(&[1, 1], &[2, 1]).unwrap()
    }

    /// The k-bonacci recurrence started at `G_0 = F_{-(k-2)}`, i.e. initial
    /// values `0, ..., 0, 1` with the `1` at `G_{k-1} = F_1`.
    pub fn kbonacci(k: usize) -> Result<RecurrenceSpec> {
        if k < 2 {
            return invalid(format!("k-bonacci needs k >= 2, got {k}"));
        }
        let mut init = vec![BigInt::zero(); k];
        init[k - 1] = BigInt::one();
        RecurrenceSpec::new(vec![BigInt::one(); k], init)
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn initial(&self) -> &[BigInt] {
        &self.initial
    }

    /// Same coefficients, initial values multiplied by `factor`.
    pub fn scaled(&self, factor: &BigInt) -> RecurrenceSpec {
        RecurrenceSpec {
            coefficients: self.coefficients.clone(),
            initial: self.initial.iter().map(|v| v * factor).collect(),
        }
    }

    /// `x^k - c_{k-1} x^{k-1} - ... - c_0`.
    pub fn characteristic_polynomial(&self) -> IntPolynomial {
        let mut c: Vec<BigInt> = self.coefficients.iter().map(|v| -v).collect();
        c.push(BigInt::one());
        IntPolynomial::new(c)
    }

    /// Iterator over `G_0, G_1, ...`.
    pub fn terms(&self) -> Terms<'_> {
        Terms {
            spec: self,
            window: self.initial.iter().cloned().collect(),
            index: 0,
        }
    }
}

/// Iterator returned by [`RecurrenceSpec::terms`].
pub struct Terms<'a> {
    spec: &'a RecurrenceSpec,
    window: VecDeque<BigInt>,
    index: usize,
}

impl Iterator for Terms<'_> {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let k = self.spec.order();
        if self.index < k {
            self.index += 1;
            return Some(self.window[self.index - 1].clone());
        }
        let next: BigInt = self
            .spec
            .coefficients
            .iter()
            .zip(self.window.iter())
            .map(|(c, g)| c * g)
            .sum();
        self.window.pop_front();
        self.window.push_back(next.clone());
        self.index += 1;
        Some(next)
    }
}

/// `G_n` by exact iteration from the initial values.
pub fn eval_recurrence(spec: &RecurrenceSpec, n: usize) -> BigInt {
    spec.terms()
        .nth(n)
        .expect("recurrence iterator is infinite")
}

/// Iterator over `F_1^{(k)}, F_2^{(k)}, ...`, using the running-sum identity
/// `F_{n+1} = 2 F_n - F_{n-k}`.
#[derive(Debug, Clone)]
pub struct KBonacci {
    k: usize,
    window: VecDeque<BigInt>,
    sum: BigInt,
}

impl KBonacci {
    pub fn new(k: usize) -> Result<KBonacci> {
        if k < 2 {
            return invalid(format!("k-bonacci needs k >= 2, got {k}"));
        }
        // Window holds F_{n-k+1}..F_n; start with the zeros before F_1.
        let window: VecDeque<BigInt> = std::iter::repeat_n(BigInt::zero(), k).collect();
        Ok(KBonacci {
            k,
            window,
            sum: BigInt::zero(),
        })
    }
}

impl Iterator for KBonacci {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let next = if self.sum.is_zero() {
            BigInt::one()
        } else {
            self.sum.clone()
        };
        let dropped = self.window.pop_front().unwrap();
        self.sum = &self.sum - dropped + &next;
        self.window.push_back(next.clone());
        debug_assert_eq!(self.window.len(), self.k);
        Some(next)
    }
}

/// `F_n^{(k)}` for `n >= -(k-2)`; indices `n <= 0` are the leading zeros.
pub fn kbonacci(k: usize, n: i64) -> Result<BigInt> {
    if k < 2 {
        return invalid(format!("k-bonacci needs k >= 2, got {k}"));
    }
    if n < -(k as i64 - 2) {
        return invalid(format!("index {n} below -(k-2) = {}", -(k as i64 - 2)));
    }
    if n <= 0 {
        return Ok(BigInt::zero());
    }
    Ok(KBonacci::new(k)?.nth(n as usize - 1).unwrap())
}

/// Generalized Cullen number `C_{m,s} = m·s^m + 1` for `m >= 1`, `s >= 2`.
pub fn cullen(m: u64, s: u64) -> Result<BigInt> {
    if m < 1 {
        return invalid("Cullen index m must be >= 1");
    }
    if s < 2 {
        return invalid("Cullen base s must be >= 2");
    }
    Ok(cullen_unchecked(m, s))
}

/// Classical Cullen number `C_m = m·2^m + 1`, defined for every `m >= 0`
/// (`C_0 = 1` heads the usual listing).
pub fn cullen_number(m: u64) -> BigInt {
    cullen_unchecked(m, 2)
}

fn cullen_unchecked(m: u64, s: u64) -> BigInt {
    let e = u32::try_from(m).expect("Cullen index too large");
    BigInt::from(m) * BigInt::from(s).pow(e) + 1
}

/// Number of base-10 digits of `|v|`; zero is rejected.
pub fn decimal_digit_count(v: &BigInt) -> Result<u64> {
    if v.is_zero() {
        return invalid("digit count of zero is undefined");
    }
    let a = v.abs();
    // 2^(b-1) <= a < 2^b, so the digit count is one of two neighbours of
    // b·log10(2); settle it with exact comparisons against powers of ten.
    let b = a.bits();
    let mut d = ((b - 1) as f64 * std::f64::consts::LOG10_2).floor() as u64 + 1;
    let ten = BigInt::from(10);
    loop {
        let low = ten.pow((d - 1) as u32);
        if a < low {
            d -= 1;
            continue;
        }
        if a >= &low * &ten {
            d += 1;
            continue;
        }
        return Ok(d);
    }
}

/// `m·x^m + T(x)` for `m >= 1` and `|x| >= 2`.
pub fn rhs_general(m: u64, x: &BigInt, t: &IntPolynomial) -> Result<BigInt> {
    if m < 1 {
        return invalid("m must be >= 1");
    }
    if x.abs() < BigInt::from(2) {
        return invalid(format!("|x| must be >= 2, got x = {x}"));
    }
    let e = u32::try_from(m).map_err(|_| crate::Error::InvalidArgument("m too large".into()))?;
    Ok(BigInt::from(m) * x.pow(e) + t.eval(x))
}

/// `Some(s)` when `m = 2^s`.
pub fn power_of_two_exponent(m: &BigInt) -> Option<u64> {
    if !m.is_positive() {
        return None;
    }
    let tz = m.trailing_zeros()?;
    (m.bits() == tz + 1).then_some(tz)
}

/// Convenience for machine integers.
pub fn power_of_two_exponent_u64(m: u64) -> Option<u64> {
    power_of_two_exponent(&BigInt::from(m))
}
