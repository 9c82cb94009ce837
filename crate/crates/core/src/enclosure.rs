//! Certified real intervals with outward rounding.
//!
//! A [`RealEnclosure`] `[lo, hi]` is guaranteed to contain the exact real it
//! stands for. Every operation rounds the lower endpoint down and the upper
//! endpoint up, so containment survives arbitrarily long computations.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dyadic::{shr_floor, Dyadic, Round};
use crate::error::{invalid, Error, Result};

/// Precision used when none is configured.
pub const DEFAULT_PRECISION_BITS: u32 = 512;
/// Upper limit for automatic precision escalation.
pub const MAX_PRECISION_BITS: u32 = 16384;

#[derive(Clone, PartialEq, Eq)]
pub struct RealEnclosure {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

impl RealEnclosure {
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> Result<RealEnclosure> {
        if lo > hi {
            return invalid(format!("empty enclosure [{lo}, {hi}]"));
        }
        Ok(RealEnclosure { lo, hi, bits })
    }

    fn from_parts(lo: Dyadic, hi: Dyadic, bits: u32) -> RealEnclosure {
        debug_assert!(lo <= hi);
        RealEnclosure { lo, hi, bits }
    }

    /// Degenerate enclosure of an exact dyadic.
    pub fn point(x: Dyadic, bits: u32) -> RealEnclosure {
        RealEnclosure {
            lo: x.clone(),
            hi: x,
            bits,
        }
    }

    pub fn from_int(v: i64, bits: u32) -> RealEnclosure {
        RealEnclosure::point(Dyadic::from_int(v), bits)
    }

    pub fn from_bigint(v: &BigInt, bits: u32) -> RealEnclosure {
        RealEnclosure::point(Dyadic::from_bigint(v), bits)
    }

    pub fn from_f64(v: f64, bits: u32) -> Result<RealEnclosure> {
        Dyadic::from_f64(v)
            .map(|d| RealEnclosure::point(d, bits))
            .ok_or_else(|| Error::InvalidArgument(format!("non-finite value {v}")))
    }

    pub fn from_rational(r: &BigRational, bits: u32) -> RealEnclosure {
        RealEnclosure::from_parts(
            Dyadic::from_rational(r, bits, Round::Down),
            Dyadic::from_rational(r, bits, Round::Up),
            bits,
        )
    }

    pub fn from_ratio(num: i64, den: i64, bits: u32) -> RealEnclosure {
        RealEnclosure::from_rational(&BigRational::new(num.into(), den.into()), bits)
    }

    /// Enclosure of a decimal literal such as `"9.7e11"` or `"-0.38"`.
    pub fn from_decimal(s: &str, bits: u32) -> Result<RealEnclosure> {
        Ok(RealEnclosure::from_rational(&parse_decimal(s)?, bits))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Same interval re-rounded (outward) to a different precision.
    pub fn with_bits(&self, bits: u32) -> RealEnclosure {
        RealEnclosure::from_parts(
            self.lo.round(bits, Round::Down),
            self.hi.round(bits, Round::Up),
            bits,
        )
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Dyadic {
        (&self.lo + &self.hi).mul_pow2(-1)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `true` when every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &RealEnclosure) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &RealEnclosure) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_gt(&self, other: &RealEnclosure) -> bool {
        other.certainly_lt(self)
    }

    /// Certified ordering, or `None` when the enclosures overlap.
    pub fn certified_cmp(&self, other: &RealEnclosure) -> Option<Ordering> {
        if self.certainly_lt(other) {
            Some(Ordering::Less)
        } else if other.certainly_lt(self) {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn overlaps(&self, other: &RealEnclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &RealEnclosure) -> Option<RealEnclosure> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then(|| RealEnclosure::from_parts(lo, hi, self.bits.max(other.bits)))
    }

    pub fn hull(&self, other: &RealEnclosure) -> RealEnclosure {
        RealEnclosure::from_parts(
            (&self.lo).min(&other.lo).clone(),
            (&self.hi).max(&other.hi).clone(),
            self.bits.max(other.bits),
        )
    }

    fn prec_with(&self, other: &RealEnclosure) -> u32 {
        self.bits.max(other.bits)
    }

    pub fn abs(&self) -> RealEnclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            let m = (&self.hi).max(&self.lo.abs()).clone();
            RealEnclosure::from_parts(Dyadic::zero(), m, self.bits)
        }
    }

    pub fn sqr(&self) -> RealEnclosure {
        let a = self.abs();
        let p = self.bits;
        RealEnclosure::from_parts(
            (&a.lo * &a.lo).round(p, Round::Down),
            (&a.hi * &a.hi).round(p, Round::Up),
            p,
        )
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: u64) -> RealEnclosure {
        if n == 0 {
            return RealEnclosure::from_int(1, self.bits);
        }
        if !self.lo.is_negative() {
            let p = self.bits;
            let lo = pow_dyadic(&self.lo, n, p, Round::Down);
            let hi = pow_dyadic(&self.hi, n, p, Round::Up);
            return RealEnclosure::from_parts(lo, hi, p);
        }
        let mut base = self.clone();
        let mut acc = RealEnclosure::from_int(1, self.bits);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn mul_int(&self, k: i64) -> RealEnclosure {
        self * &RealEnclosure::from_int(k, self.bits)
    }

    pub fn recip(&self) -> Result<RealEnclosure> {
        RealEnclosure::from_int(1, self.bits).checked_div(self)
    }

    /// Interval quotient; fails when the divisor contains zero.
    pub fn checked_div(&self, rhs: &RealEnclosure) -> Result<RealEnclosure> {
        if rhs.contains_zero() {
            return Err(Error::Singular(format!(
                "divisor enclosure [{}, {}] contains zero",
                rhs.lo, rhs.hi
            )));
        }
        let p = self.prec_with(rhs);
        let cands_lo = [
            Dyadic::div(&self.lo, &rhs.lo, p, Round::Down),
            Dyadic::div(&self.lo, &rhs.hi, p, Round::Down),
            Dyadic::div(&self.hi, &rhs.lo, p, Round::Down),
            Dyadic::div(&self.hi, &rhs.hi, p, Round::Down),
        ];
        let cands_hi = [
            Dyadic::div(&self.lo, &rhs.lo, p, Round::Up),
            Dyadic::div(&self.lo, &rhs.hi, p, Round::Up),
            Dyadic::div(&self.hi, &rhs.lo, p, Round::Up),
            Dyadic::div(&self.hi, &rhs.hi, p, Round::Up),
        ];
        let lo = cands_lo.iter().min().unwrap().clone();
        let hi = cands_hi.iter().max().unwrap().clone();
        Ok(RealEnclosure::from_parts(lo, hi, p))
    }

    pub fn sqrt(&self) -> Result<RealEnclosure> {
        if self.lo.is_negative() {
            return invalid(format!(
                "square root of enclosure with lower end {}",
                self.lo
            ));
        }
        Ok(RealEnclosure::from_parts(
            self.lo.sqrt(self.bits, Round::Down),
            self.hi.sqrt(self.bits, Round::Up),
            self.bits,
        ))
    }

    /// Natural logarithm; the enclosure must be strictly positive.
    pub fn ln(&self) -> Result<RealEnclosure> {
        if !self.lo.is_positive() {
            return invalid(format!("logarithm of enclosure with lower end {}", self.lo));
        }
        let lo = ln_dyadic(&self.lo, self.bits).lo;
        let hi = ln_dyadic(&self.hi, self.bits).hi;
        Ok(RealEnclosure::from_parts(lo, hi, self.bits))
    }

    /// Base-2 logarithm.
    pub fn log2(&self) -> Result<RealEnclosure> {
        self.ln()?.checked_div(&ln2(self.bits))
    }

    pub fn max(&self, other: &RealEnclosure) -> RealEnclosure {
        RealEnclosure::from_parts(
            (&self.lo).max(&other.lo).clone(),
            (&self.hi).max(&other.hi).clone(),
            self.prec_with(other),
        )
    }

    pub fn min(&self, other: &RealEnclosure) -> RealEnclosure {
        RealEnclosure::from_parts(
            (&self.lo).min(&other.lo).clone(),
            (&self.hi).min(&other.hi).clone(),
            self.prec_with(other),
        )
    }

    /// Number of decimal digits that faithfully reflects the working precision.
    pub fn decimal_digits(&self) -> usize {
        (f64::from(self.bits) * std::f64::consts::LOG10_2).ceil() as usize + 2
    }

    pub fn lo_decimal(&self, digits: usize) -> String {
        self.lo.to_decimal(digits, Round::Down)
    }

    pub fn hi_decimal(&self, digits: usize) -> String {
        self.hi.to_decimal(digits, Round::Up)
    }
}

fn pow_dyadic(x: &Dyadic, n: u64, p: u32, dir: Round) -> Dyadic {
    // Valid for x >= 0: every intermediate is nonnegative, so rounding each
    // product in `dir` keeps the result on the correct side.
    let mut base = x.clone();
    let mut acc = Dyadic::one();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &base).round(p, dir);
        }
        e >>= 1;
        if e > 0 {
            base = (&base * &base).round(p, dir);
        }
    }
    acc
}

impl<'a> Add<&'a RealEnclosure> for &'a RealEnclosure {
    type Output = RealEnclosure;
    fn add(self, rhs: &RealEnclosure) -> RealEnclosure {
        let p = self.prec_with(rhs);
        RealEnclosure::from_parts(
            (&self.lo + &rhs.lo).round(p, Round::Down),
            (&self.hi + &rhs.hi).round(p, Round::Up),
            p,
        )
    }
}

impl<'a> Sub<&'a RealEnclosure> for &'a RealEnclosure {
    type Output = RealEnclosure;
    fn sub(self, rhs: &RealEnclosure) -> RealEnclosure {
        let p = self.prec_with(rhs);
        RealEnclosure::from_parts(
            (&self.lo - &rhs.hi).round(p, Round::Down),
            (&self.hi - &rhs.lo).round(p, Round::Up),
            p,
        )
    }
}

impl<'a> Mul<&'a RealEnclosure> for &'a RealEnclosure {
    type Output = RealEnclosure;
    fn mul(self, rhs: &RealEnclosure) -> RealEnclosure {
        let p = self.prec_with(rhs);
        let (a, b) = (self, rhs);
        let a_pos = !a.lo.is_negative();
        let a_neg = !a.hi.is_positive();
        let b_pos = !b.lo.is_negative();
        let b_neg = !b.hi.is_positive();
        // Endpoint pairs by sign class; only a doubly straddling product needs all four.
        let (lo, hi) = match (a_pos, a_neg, b_pos, b_neg) {
            (true, _, true, _) => (&a.lo * &b.lo, &a.hi * &b.hi),
            (true, _, _, true) => (&a.hi * &b.lo, &a.lo * &b.hi),
            (true, _, _, _) => (&a.hi * &b.lo, &a.hi * &b.hi),
            (_, true, true, _) => (&a.lo * &b.hi, &a.hi * &b.lo),
            (_, true, _, true) => (&a.hi * &b.hi, &a.lo * &b.lo),
            (_, true, _, _) => (&a.lo * &b.hi, &a.lo * &b.lo),
            (_, _, true, _) => (&a.lo * &b.hi, &a.hi * &b.hi),
            (_, _, _, true) => (&a.hi * &b.lo, &a.lo * &b.lo),
            _ => {
                let x = &a.lo * &b.hi;
                let y = &a.hi * &b.lo;
                let u = &a.lo * &b.lo;
                let v = &a.hi * &b.hi;
                (x.min(y), u.max(v))
            }
        };
        RealEnclosure::from_parts(lo.round(p, Round::Down), hi.round(p, Round::Up), p)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RealEnclosure> for RealEnclosure {
            type Output = RealEnclosure;
            fn $m(self, rhs: RealEnclosure) -> RealEnclosure {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RealEnclosure> for RealEnclosure {
            type Output = RealEnclosure;
            fn $m(self, rhs: &RealEnclosure) -> RealEnclosure {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for &RealEnclosure {
    type Output = RealEnclosure;
    fn neg(self) -> RealEnclosure {
        RealEnclosure::from_parts(-&self.hi, -&self.lo, self.bits)
    }
}

impl Neg for RealEnclosure {
    type Output = RealEnclosure;
    fn neg(self) -> RealEnclosure {
        -&self
    }
}

impl fmt::Debug for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]@{}",
            self.lo.to_decimal(20, Round::Down),
            self.hi.to_decimal(20, Round::Up),
            self.bits
        )
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(
            f,
            "[{}, {}]",
            self.lo.to_decimal(digits, Round::Down),
            self.hi.to_decimal(digits, Round::Up)
        )
    }
}

#[derive(Serialize, Deserialize)]
struct EnclosureRepr {
    lo: String,
    hi: String,
    bits: u32,
}

impl Serialize for RealEnclosure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let digits = self.decimal_digits();
        EnclosureRepr {
            lo: self.lo_decimal(digits),
            hi: self.hi_decimal(digits),
            bits: self.bits,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealEnclosure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = EnclosureRepr::deserialize(d)?;
        let lo = parse_decimal(&r.lo).map_err(serde::de::Error::custom)?;
        let hi = parse_decimal(&r.hi).map_err(serde::de::Error::custom)?;
        RealEnclosure::new(
            Dyadic::from_rational(&lo, r.bits, Round::Down),
            Dyadic::from_rational(&hi, r.bits, Round::Up),
            r.bits,
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Exact value of a decimal literal (`[-]digits[.digits][e[-]digits]`).
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let err = || Error::Parse(format!("not a decimal number: {s:?}"));
    let t = s.trim();
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut n: BigInt = digits.parse().map_err(|_| err())?;
    if neg {
        n = -n;
    }
    let e = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let magnitude = e.unsigned_abs();
    if magnitude > 100_000 {
        return Err(err());
    }
    let scale = ten.pow(magnitude as u32);
    Ok(if e >= 0 {
        BigRational::from_integer(n * scale)
    } else {
        BigRational::new(n, scale)
    })
}

/// Fixed-point `atanh(num/den) · 2^w` for `|num/den| <= 1/3`, together with a
/// bound on the absolute error in units of `2^-w`.
fn atanh_fixed(num: &BigInt, den: &BigInt, w: u64) -> (BigInt, BigInt) {
    debug_assert!(BigInt::from(3) * num.abs() <= *den);
    let z = (num << w).div_floor(den);
    let z2 = shr_floor(&(&z * &z), w);
    let mut power = z;
    let mut sum = BigInt::zero();
    let mut terms: u64 = 0;
    while !power.is_zero() {
        sum += power.div_floor(&BigInt::from(2 * terms + 1));
        power = shr_floor(&(&power * &z2), w);
        terms += 1;
        if power.abs() <= BigInt::one() {
            // |power| <= 1 ulp; the remaining tail is inside the error bound.
            break;
        }
    }
    // Each truncated power is within 4 ulps of the true power, each term within
    // 5, and the neglected tail within another 5 ulps.
    (sum, BigInt::from(8 * terms + 16))
}

fn ln2_fixed(w: u64) -> (BigInt, BigInt) {
    static CACHE: OnceLock<RwLock<HashMap<u64, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = cache.read().unwrap().get(&w) {
        return v.clone();
    }
    let (s, e) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    let v = (s << 1u32, e << 1u32);
    cache.write().unwrap().insert(w, v.clone());
    v
}

/// Enclosure of `ln 2`.
pub fn ln2(bits: u32) -> RealEnclosure {
    let w = u64::from(bits) + 16;
    let (v, e) = ln2_fixed(w);
    fixed_to_enclosure(&(&v - &e), &(&v + &e), w, bits)
}

fn fixed_to_enclosure(lo: &BigInt, hi: &BigInt, w: u64, bits: u32) -> RealEnclosure {
    let w = -(w as i64);
    RealEnclosure::from_parts(
        Dyadic::new(lo.clone(), w).round(bits, Round::Down),
        Dyadic::new(hi.clone(), w).round(bits, Round::Up),
        bits,
    )
}

/// Enclosure of `ln x` for a positive dyadic.
pub fn ln_dyadic(x: &Dyadic, bits: u32) -> RealEnclosure {
    assert!(x.is_positive(), "logarithm of a non-positive dyadic");
    if *x == Dyadic::one() {
        return RealEnclosure::from_int(0, bits);
    }
    // x = (num/den) · 2^e with num/den in (3/4, 3/2].
    let man = x.mantissa();
    let b = man.bits();
    let mut den = BigInt::one() << (b - 1);
    let mut e = x.exponent() + b as i64 - 1;
    if man * 2u32 > &den * 3u32 {
        den <<= 1u32;
        e += 1;
    }
    let diff = man - &den;
    let sum = man + &den;
    // Extra fixed-point bits for cancellation when ln x is tiny, and for the
    // magnitude of e·ln 2.
    let tiny = if e == 0 && !diff.is_zero() {
        sum.bits().saturating_sub(diff.bits())
    } else {
        0
    };
    let mag = 64 - (e.unsigned_abs()).leading_zeros() as u64;
    let w = u64::from(bits) + 24 + mag + tiny;
    let (s, es) = atanh_fixed(&diff, &sum, w);
    let mut v = s << 1u32;
    let mut err = es << 1u32;
    if e != 0 {
        let (l2, e2) = ln2_fixed(w);
        v += &l2 * e;
        err += &e2 * BigInt::from(e.unsigned_abs());
    }
    fixed_to_enclosure(&(&v - &err), &(&v + &err), w, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(e: &RealEnclosure, v: f64, tol: f64) -> bool {
        (e.to_f64() - v).abs() <= tol
    }

    #[test]
    fn ln2_matches_reference() {
        let l = ln2(256);
        assert!(close(&l, std::f64::consts::LN_2, 1e-15));
        assert!(l.width() < Dyadic::pow2(-250));
        // 0.693147180559945309417232121458176568075500134360255254120680...
        let r = parse_decimal("0.6931471805599453094172321214581765680755001343602552541206800094")
            .unwrap();
        assert!((l.mid().to_rational() - &r).abs() < parse_decimal("1e-60").unwrap());
    }

    #[test]
    fn ln_of_integers_and_fractions() {
        for (x, want) in [
            (3.0f64, 3f64.ln()),
            (0.1, 0.1f64.ln()),
            (1e30, 1e30f64.ln()),
            (1.0000001, 1.0000001f64.ln()),
        ] {
            let e = RealEnclosure::from_f64(x, 128).unwrap().ln().unwrap();
            let exact = Dyadic::from_f64(x).unwrap();
            assert!(close(&e, want, want.abs() * 1e-14 + 1e-300), "ln {x}");
            assert!(
                e.width() <= Dyadic::pow2(-100),
                "ln {x} too wide: {:?} ({exact:?})",
                e
            );
        }
    }

    #[test]
    fn ln_keeps_relative_precision_near_one() {
        let x = &Dyadic::one() + &Dyadic::pow2(-200);
        let e = ln_dyadic(&x, 128);
        // ln(1 + t) = t - t^2/2 + ..., relative accuracy well beyond 128 bits.
        assert!(e.hi() <= &(&Dyadic::pow2(-200) + &Dyadic::pow2(-320)));
        assert!(e.lo() > &Dyadic::pow2(-201));
        assert!(e.width() < Dyadic::pow2(-320));
    }

    #[test]
    fn ln_rejects_nonpositive() {
        assert!(RealEnclosure::from_int(0, 64).ln().is_err());
        let straddle = RealEnclosure::new(Dyadic::from_int(-1), Dyadic::one(), 64).unwrap();
        assert!(straddle.ln().is_err());
    }

    #[test]
    fn division_by_zero_enclosure_is_singular() {
        let one = RealEnclosure::from_int(1, 64);
        let z = RealEnclosure::new(Dyadic::from_int(-1), Dyadic::from_int(1), 64).unwrap();
        assert!(matches!(one.checked_div(&z), Err(Error::Singular(_))));
    }

    #[test]
    fn powers_of_negative_enclosures() {
        let x = RealEnclosure::new(Dyadic::from_int(-2), Dyadic::from_int(1), 64).unwrap();
        let sq = x.powi(2);
        assert!(sq.contains(&Dyadic::zero()) && sq.contains(&Dyadic::from_int(4)));
        let cube = x.powi(3);
        assert!(cube.contains(&Dyadic::from_int(-8)) && cube.contains(&Dyadic::one()));
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(
            parse_decimal("9.7e11").unwrap(),
            BigRational::from_integer(970_000_000_000i64.into())
        );
        assert_eq!(
            parse_decimal("-0.38").unwrap(),
            BigRational::new((-38).into(), 100.into())
        );
        assert_eq!(
            parse_decimal("2.5E-1").unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal("").is_err());
    }

    #[test]
    fn serde_round_trip_contains_original() {
        let x = RealEnclosure::from_ratio(1, 3, 128);
        let json = serde_json::to_string(&x).unwrap();
        let back: RealEnclosure = serde_json::from_str(&json).unwrap();
        assert!(back.lo() <= x.lo() && back.hi() >= x.hi());
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["bits"], 128);
        assert!(v["lo"].is_string() && v["hi"].is_string());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn arithmetic_contains_f64_results(a in -1e6f64..1e6, b in -1e6f64..1e6) {
                let ea = RealEnclosure::from_f64(a, 80).unwrap();
                let eb = RealEnclosure::from_f64(b, 80).unwrap();
                let ra = Dyadic::from_f64(a).unwrap().to_rational();
                let rb = Dyadic::from_f64(b).unwrap().to_rational();
                prop_assert!((&ea + &eb).contains_rational(&(&ra + &rb)));
                prop_assert!((&ea - &eb).contains_rational(&(&ra - &rb)));
                prop_assert!((&ea * &eb).contains_rational(&(&ra * &rb)));
                if b != 0.0 {
                    prop_assert!(ea.checked_div(&eb).unwrap().contains_rational(&(&ra / &rb)));
                }
            }

            #[test]
            fn product_is_the_endpoint_hull(
                a in -100i64..100, w in 0i64..50, b in -100i64..100, v in 0i64..50
            ) {
                let x = RealEnclosure::new(Dyadic::from_int(a), Dyadic::from_int(a + w), 64).unwrap();
                let y = RealEnclosure::new(Dyadic::from_int(b), Dyadic::from_int(b + v), 64).unwrap();
                let ends = [a * b, a * (b + v), (a + w) * b, (a + w) * (b + v)];
                let p = &x * &y;
                prop_assert_eq!(p.lo(), &Dyadic::from_int(*ends.iter().min().unwrap()));
                prop_assert_eq!(p.hi(), &Dyadic::from_int(*ends.iter().max().unwrap()));
            }

            #[test]
            fn ln_at_p_and_2p_overlap(x in 1e-30f64..1e30) {
                let e1 = RealEnclosure::from_f64(x, 96).unwrap().ln().unwrap();
                let e2 = RealEnclosure::from_f64(x, 192).unwrap().ln().unwrap();
                prop_assert!(e1.overlaps(&e2));
                prop_assert!(e2.width() <= e1.width());
            }
        }
    }
}
