//! Integer polynomials (`T(x)`, characteristic polynomials, minimal
//! polynomials) and the exact rational helpers used for squarefree splitting.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Polynomial with integer coefficients, lowest degree first. The highest
/// stored coefficient is nonzero unless the polynomial is zero (empty list).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPolynomial {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> IntPolynomial {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> IntPolynomial {
        IntPolynomial::from_i64(&[c])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Exact value at an integer point (Horner).
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    /// Exact value at a dyadic point; no gcd reductions, unlike the rational path.
    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        self.coeffs.iter().rev().fold(Dyadic::zero(), |acc, c| {
            &(&acc * x) + &Dyadic::from_bigint(c)
        })
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Content-free with positive leading coefficient.
    pub fn primitive(&self) -> IntPolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub(crate) fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Primitive integer polynomial proportional to a rational one.
    pub(crate) fn from_rational(p: &[BigRational]) -> IntPolynomial {
        use num_integer::Integer;
        let lcm = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        IntPolynomial::new(
            p.iter()
                .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
                .collect(),
        )
        .primitive()
    }

    /// Yun's squarefree factorization: `(factor, multiplicity)` pairs of
    /// primitive, pairwise coprime, squarefree factors of positive degree.
    pub fn squarefree_factors(&self) -> Vec<(IntPolynomial, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.to_rational();
        let df = IntPolynomial::new(self.derivative().coeffs).to_rational();
        let a0 = rat_gcd(&f, &df);
        let mut b = rat_div(&f, &a0);
        let mut c = rat_div(&df, &a0);
        let mut d = rat_sub(&c, &rat_deriv(&b));
        let mut i = 1;
        loop {
            let a = rat_gcd(&b, &d);
            if rat_degree(&a) > 0 {
                out.push((IntPolynomial::from_rational(&a), i));
            }
            b = rat_div(&b, &a);
            if rat_degree(&b) == 0 {
                break;
            }
            c = rat_div(&d, &a);
            d = rat_sub(&c, &rat_deriv(&b));
            i += 1;
        }
        out
    }

    /// Exact gcd (primitive, positive leading coefficient).
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::from_rational(&rat_gcd(&self.to_rational(), &other.to_rational()))
    }

    /// Exact quotient; `None` unless `other` divides `self` over the rationals.
    pub fn div_exact(&self, other: &IntPolynomial) -> Option<IntPolynomial> {
        let (q, r) = rat_divmod(&self.to_rational(), &other.to_rational());
        r.is_empty().then(|| IntPolynomial::from_rational(&q))
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rat_degree(p: &[BigRational]) -> usize {
    p.len().saturating_sub(1)
}

fn rat_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_else(BigRational::zero)
                    - b.get(i).cloned().unwrap_or_else(BigRational::zero)
            })
            .collect(),
    )
}

fn rat_deriv(p: &[BigRational]) -> Vec<BigRational> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn rat_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let coef = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &coef * bc;
        }
        q[shift] = coef;
        r = trim(r);
    }
    (trim(q), r)
}

fn rat_div(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    rat_divmod(a, b).0
}

fn rat_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rat_divmod(&x, &y).1;
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        x.iter_mut().for_each(|c| *c /= &l);
    }
    x
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coef = i == 0 || !mag.is_one();
            if show_coef {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Parses sums of terms such as `x^3 - x^2 - x - 1`, `2*x + 7`, `-4`.
    /// A bracketed list `[c0, c1, ...]` (lowest degree first) is also accepted.
    fn from_str(s: &str) -> Result<IntPolynomial> {
        let err = |m: &str| Error::Parse(format!("polynomial {s:?}: {m}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err("empty"));
        }
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coeffs = inner
                .split(',')
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<BigInt>().map_err(|_| err("bad coefficient")))
                .collect::<Result<Vec<_>>>()?;
            return Ok(IntPolynomial::new(coeffs));
        }
        let mut coeffs: Vec<BigInt> = Vec::new();
        let bytes = t.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = BigInt::one();
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            } else if i != 0 {
                return Err(err("expected + or -"));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coef = if i > start {
                t[start..i]
                    .parse::<BigInt>()
                    .map_err(|_| err("bad coefficient"))?
            } else {
                BigInt::one()
            };
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            let mut power = 0usize;
            if i < bytes.len() && bytes[i] == b'x' {
                i += 1;
                power = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let ps = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    power = t[ps..i].parse().map_err(|_| err("bad exponent"))?;
                }
            } else if i == start {
                return Err(err("empty term"));
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += sign * coef;
        }
        Ok(IntPolynomial::new(coeffs))
    }
}

impl From<IntPolynomial> for Vec<String> {
    fn from(p: IntPolynomial) -> Vec<String> {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for IntPolynomial {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<IntPolynomial> {
        v.iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(IntPolynomial::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = IntPolynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(IntPolynomial::from_i64(&[0, 0]).is_zero());
        assert_eq!(IntPolynomial::zero().degree(), None);
    }

    #[test]
    fn horner_evaluation() {
        let p = IntPolynomial::from_i64(&[-1, -1, 1]); // x^2 - x - 1
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::from(5));
        assert_eq!(p.eval(&BigInt::from(-2)), BigInt::from(5));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            p.eval_rational(&half),
            BigRational::new((-5).into(), 4.into())
        );
        assert_eq!(
            p.eval_dyadic(&Dyadic::pow2(-1)).to_rational(),
            p.eval_rational(&half)
        );
    }

    #[test]
    fn parse_and_display() {
        let p: IntPolynomial = "x^3 - x^2 - x - 1".parse().unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[-1, -1, -1, 1]));
        assert_eq!(p.to_string(), "x^3 - x^2 - x - 1");
        let q: IntPolynomial = "-4".parse().unwrap();
        assert_eq!(q, IntPolynomial::constant(-4));
        let r: IntPolynomial = "2*x + 3x^2 - 7".parse().unwrap();
        assert_eq!(r, IntPolynomial::from_i64(&[-7, 2, 3]));
        let l: IntPolynomial = "[6, -5, 1]".parse().unwrap();
        assert_eq!(l.to_string(), "x^2 - 5x + 6");
        assert!("x^".parse::<IntPolynomial>().is_err());
        assert!("x**2".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn squarefree_split() {
        // (x - 1)^2 (x + 2) = x^3 - 3x + 2
        let p = IntPolynomial::from_i64(&[2, -3, 0, 1]);
        let f = p.squarefree_factors();
        assert_eq!(f.len(), 2);
        assert!(f.contains(&(IntPolynomial::from_i64(&[2, 1]), 1)));
        assert!(f.contains(&(IntPolynomial::from_i64(&[-1, 1]), 2)));
        let fib = IntPolynomial::from_i64(&[-1, -1, 1]);
        assert_eq!(fib.squarefree_factors(), vec![(fib.clone(), 1)]);
    }

    #[test]
    fn gcd_with_reflection_finds_opposite_roots() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]); // x^2 - 2
        assert_eq!(p.gcd(&p.reflect()), p);
        let q = IntPolynomial::from_i64(&[6, -5, 1]); // (x-2)(x-3)
        assert_eq!(q.gcd(&q.reflect()).degree(), Some(0));
        assert_eq!(
            q.div_exact(&IntPolynomial::from_i64(&[-2, 1])),
            Some(IntPolynomial::from_i64(&[-3, 1]))
        );
    }

    #[test]
    fn serde_uses_decimal_strings() {
        let p = IntPolynomial::from_i64(&[-4]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["-4"]"#);
        let back: IntPolynomial = serde_json::from_str(r#"["1","0","2"]"#).unwrap();
        assert_eq!(back, IntPolynomial::from_i64(&[1, 0, 2]));
    }
}
