//! Characteristic polynomials, dominant roots, heights and dominance classes.
//!
//! The Perron root `α_k` of `ψ_k(x) = x^k - x^{k-1} - ... - 1` lies in
//! `(2(1 - 2^{-k}), 2)`. For `x > 1`, `ψ_k(x)` has the sign of
//! `(x - 1)ψ_k(x) = x^{k+1} - 2x^k + 1`, which is what the certificates
//! evaluate exactly.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dyadic::{Dyadic, Round};
use crate::enclosure::{RealEnclosure, MAX_PRECISION_BITS};
use crate::error::{invalid, Error, Result};
use crate::poly::IntPolynomial;
use crate::recurrence::{kbonacci, RecurrenceSpec};
use crate::roots::{isolate_roots, RootDisc};

/// Largest degree accepted by [`log_height`].
pub const MAX_HEIGHT_DEGREE: usize = 256;

/// `x^k - x^{k-1} - ... - x - 1`.
pub fn charpoly_kbonacci(k: usize) -> Result<IntPolynomial> {
    if k < 2 {
        return invalid(format!("k-bonacci order must be at least 2, got {k}"));
    }
    let mut c = vec![-1i64; k];
    c.push(1);
    Ok(IntPolynomial::from_i64(&c))
}

/// Certified enclosure of the dominant root of `ψ_k`.
#[derive(Debug, Clone)]
pub struct DominantRootCert {
    pub k: usize,
    pub enclosure: RealEnclosure,
    /// `(a, b)` with `ψ_k(a) < 0 < ψ_k(b)`, checked in exact arithmetic.
    pub bracket: (Dyadic, Dyadic),
}

impl Serialize for DominantRootCert {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DominantRootCert", 3)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("enclosure", &self.enclosure)?;
        let b = [
            self.bracket.0.to_rational().to_string(),
            self.bracket.1.to_rational().to_string(),
        ];
        st.serialize_field("bracket", &b)?;
        st.end()
    }
}

/// Sign of `x^{k+1} - 2x^k + 1`, exactly.
fn shifted_sign(k: usize, x: &Dyadic) -> Ordering {
    let xk = pow_exact(x, k as u64);
    let v = &(&(&xk * x) - &xk.mul_pow2(1)) + &Dyadic::one();
    v.signum().cmp(&0)
}

fn pow_exact(x: &Dyadic, mut e: u64) -> Dyadic {
    let mut base = x.clone();
    let mut acc = Dyadic::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

fn pow_rounded(x: &Dyadic, e: u64, w: u32) -> Dyadic {
    let mut base = x.clone();
    let mut acc = Dyadic::one();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &base).round(w, Round::Down);
        }
        e >>= 1;
        if e > 0 {
            base = (&base * &base).round(w, Round::Down);
        }
    }
    acc
}

fn memo() -> &'static RwLock<HashMap<(usize, u32), DominantRootCert>> {
    static MEMO: OnceLock<RwLock<HashMap<(usize, u32), DominantRootCert>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Enclosure of `α_k` of width at most `2^{4 - bits}`.
pub fn dominant_root(k: usize, bits: u32) -> Result<DominantRootCert> {
    if k < 2 {
        return invalid(format!("k-bonacci order must be at least 2, got {k}"));
    }
    if bits == 0 || bits > MAX_PRECISION_BITS {
        return invalid(format!(
            "precision must be in 1..={MAX_PRECISION_BITS} bits"
        ));
    }
    if let Some(c) = memo().read().expect("memo lock").get(&(k, bits)) {
        return Ok(c.clone());
    }
    let cert = compute_dominant_root(k, bits)?;
    memo()
        .write()
        .expect("memo lock")
        .insert((k, bits), cert.clone());
    Ok(cert)
}

fn compute_dominant_root(k: usize, bits: u32) -> Result<DominantRootCert> {
    let w = bits.max(k as u32 + 64) + 8;
    let lower = &Dyadic::from_int(2) - &Dyadic::pow2(1 - k as i64);
    let two = Dyadic::from_int(2);
    // Newton on x^{k+1} - 2x^k + 1 from x = 2 decreases monotonically to α.
    let kk = k as i64;
    let mut x = two.clone();
    let wp = w + 32;
    for _ in 0..200 {
        let xk1 = pow_rounded(&x, k as u64 - 1, wp);
        let xk = (&xk1 * &x).round(wp, Round::Down);
        let f = &(&(&xk * &x) - &xk.mul_pow2(1)) + &Dyadic::one();
        let df = &(&xk * &Dyadic::from_int(kk + 1)) - &(&xk1 * &Dyadic::from_int(2 * kk));
        if df.is_zero() {
            break;
        }
        let step = Dyadic::div(&f, &df, wp, Round::Down);
        x = (&x - &step).round(wp, Round::Down);
        if step.is_zero() || step.abs().log2_floor().unwrap() < -(i64::from(w) + 4) {
            break;
        }
    }
    let mut eps = Dyadic::pow2(-(i64::from(w) - 2));
    for _ in 0..4 {
        let lo = (&x - &eps).round(w, Round::Down);
        let hi = (&x + &eps).round(w, Round::Up);
        let lo = if lo <= lower { lower.clone() } else { lo };
        let hi = if hi >= two { two.clone() } else { hi };
        if shifted_sign(k, &lo) == Ordering::Less && shifted_sign(k, &hi) == Ordering::Greater {
            if lo <= lower || hi >= two {
                break;
            }
            let enclosure = RealEnclosure::new(lo.clone(), hi.clone(), bits)?;
            return Ok(DominantRootCert {
                k,
                enclosure,
                bracket: (lo, hi),
            });
        }
        eps = eps.mul_pow2(4);
    }
    Err(Error::PrecisionExhausted {
        bits,
        what: format!("could not certify the dominant root of psi_{k}"),
    })
}

/// `(x - 1) / (2 + (k + 1)(x - 2))`.
pub fn weight_g(x: &RealEnclosure, k: usize) -> Result<RealEnclosure> {
    if k < 2 {
        return invalid(format!("k must be at least 2, got {k}"));
    }
    let bits = x.bits();
    let num = x - &RealEnclosure::from_int(1, bits);
    let den = &RealEnclosure::from_int(2, bits)
        + &(x - &RealEnclosure::from_int(2, bits)).mul_int(k as i64 + 1);
    if den.contains_zero() {
        return Err(Error::Singular(format!(
            "2 + (k+1)(x-2) may vanish for k = {k}"
        )));
    }
    if num.lo().is_zero() && num.hi().is_zero() {
        return Ok(RealEnclosure::from_int(0, bits));
    }
    num.checked_div(&den)
}

/// `g(α_k, k) · α_k^{n-1}`.
pub fn dresden_du_main_term(k: usize, n: u64, bits: u32) -> Result<RealEnclosure> {
    if n < 1 {
        return invalid("n must be at least 1");
    }
    let a = dominant_root(k, bits)?.enclosure;
    Ok(&weight_g(&a, k)? * &a.powi(n - 1))
}

/// `F_n^{(k)} - g(α_k, k) α_k^{n-1}`.
pub fn tail_term(k: usize, n: u64, bits: u32) -> Result<RealEnclosure> {
    let f = kbonacci(k, n as i64)?;
    Ok(&RealEnclosure::from_bigint(&f, bits) - &dresden_du_main_term(k, n, bits)?)
}

/// An algebraic number given by its minimal polynomial and an isolating interval.
#[derive(Debug, Clone)]
pub struct AlgebraicNumberDesc {
    pub min_poly: IntPolynomial,
    pub root_selector: RealEnclosure,
}

impl AlgebraicNumberDesc {
    pub fn new(
        min_poly: IntPolynomial,
        root_selector: RealEnclosure,
    ) -> Result<AlgebraicNumberDesc> {
        if min_poly.degree().unwrap_or(0) == 0 {
            return invalid("minimal polynomial must be nonconstant");
        }
        let mut p = min_poly.primitive();
        if p.leading().unwrap().is_negative() {
            p = IntPolynomial::new(p.coeffs().iter().map(|c| -c).collect());
        }
        Ok(AlgebraicNumberDesc {
            min_poly: p,
            root_selector,
        })
    }

    /// The rational integer `v`.
    pub fn integer(v: i64, bits: u32) -> Result<AlgebraicNumberDesc> {
        AlgebraicNumberDesc::new(
            IntPolynomial::from_i64(&[-v, 1]),
            RealEnclosure::from_int(v, bits),
        )
    }

    /// `α_k` with its certified enclosure as selector.
    pub fn kbonacci_root(k: usize, bits: u32) -> Result<AlgebraicNumberDesc> {
        AlgebraicNumberDesc::new(charpoly_kbonacci(k)?, dominant_root(k, bits)?.enclosure)
    }
}

fn disc_meets_segment(d: &RootDisc, lo: &Dyadic, hi: &Dyadic) -> bool {
    d.im.abs() <= d.radius && &(&d.re - &d.radius) <= hi && &(&d.re + &d.radius) >= lo
}

/// Logarithmic height `(1/n)(log|a| + Σ log max(1, |α^{(j)}|))`.
///
/// The selector is checked to isolate exactly one root: one certified root
/// disc meets it and the polynomial changes sign across it (or the disc lies
/// inside it).
pub fn log_height(a: &AlgebraicNumberDesc) -> Result<RealEnclosure> {
    let p = &a.min_poly;
    let bits = a.root_selector.bits().max(64);
    let discs = height_discs(p, bits)?;
    let sel = &a.root_selector;
    let meeting: Vec<&RootDisc> = discs
        .iter()
        .filter(|d| disc_meets_segment(d, sel.lo(), sel.hi()))
        .collect();
    let lo_val = p.eval_dyadic(sel.lo());
    let hi_val = p.eval_dyadic(sel.hi());
    let sign_change = (lo_val.is_negative() && hi_val.is_positive())
        || (lo_val.is_positive() && hi_val.is_negative());
    let inside = meeting.len() == 1
        && meeting[0]
            .real_enclosure()
            .is_some_and(|e| sel.lo() <= e.lo() && e.hi() <= sel.hi());
    if meeting.len() != 1 || !(sign_change || inside) {
        return invalid("root selector does not isolate exactly one root");
    }
    height_from_discs(p, &discs, bits)
}

/// Height shared by all roots of an irreducible `p` (no selector needed).
pub fn poly_log_height(p: &IntPolynomial, bits: u32) -> Result<RealEnclosure> {
    let bits = bits.max(64);
    let discs = height_discs(p, bits)?;
    height_from_discs(p, &discs, bits)
}

fn height_discs(p: &IntPolynomial, bits: u32) -> Result<Vec<RootDisc>> {
    let n = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return invalid("zero or constant polynomial has no height"),
    };
    if n > MAX_HEIGHT_DEGREE {
        return invalid(format!(
            "degree {n} exceeds the supported {MAX_HEIGHT_DEGREE}"
        ));
    }
    if p.gcd(&p.derivative()).degree() != Some(0) {
        return invalid("minimal polynomial is not squarefree");
    }
    isolate_roots(p, bits, MAX_PRECISION_BITS)
}

fn height_from_discs(p: &IntPolynomial, discs: &[RootDisc], bits: u32) -> Result<RealEnclosure> {
    let n = p.degree().expect("nonconstant");
    let lead = p.leading().unwrap().abs();
    let mut sum = RealEnclosure::from_bigint(&lead, bits).ln()?;
    let one = Dyadic::one();
    for d in discs {
        let m = d.modulus();
        let term = if m.hi() <= &one {
            RealEnclosure::from_int(0, bits)
        } else if m.lo() > &one {
            m.ln()?
        } else {
            let up = RealEnclosure::point(m.hi().clone(), bits).ln()?;
            RealEnclosure::new(Dyadic::zero(), up.hi().clone(), bits)?
        };
        sum = &sum + &term;
    }
    sum.checked_div(&RealEnclosure::from_int(n as i64, bits))
}

/// Which hypothesis of the dominance theorem the characteristic roots satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DominanceVariant {
    /// `|r_1| > 1 > |r_j| > 0` for `j > 1`.
    CaseI,
    /// `|r_1| > |r_2| > |r_j| > 0` for `j > 2`.
    CaseII,
    Neither,
}

#[derive(Debug, Clone, Serialize)]
pub struct DominanceClass {
    pub variant: DominanceVariant,
    /// Moduli of the distinct roots, largest first.
    pub root_moduli: Vec<RealEnclosure>,
    /// Multiplicity of each root in `root_moduli` order.
    pub multiplicities: Vec<usize>,
    pub dominant_simple: bool,
    /// The enclosures could not settle the classification at the maximum precision.
    pub undecided: bool,
    pub precision_bits: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }
}

struct Root {
    disc: RootDisc,
    mult: usize,
    /// `-r` is also a root.
    neg_closed: bool,
}

fn conj_meets(a: &RootDisc, b: &RootDisc) -> bool {
    a.may_intersect(&b.re, &-&b.im, &b.radius)
}

fn neg_meets(a: &RootDisc, b: &RootDisc) -> bool {
    a.may_intersect(&-&b.re, &-&b.im, &b.radius)
}

fn neg_conj_meets(a: &RootDisc, b: &RootDisc) -> bool {
    a.may_intersect(&-&b.re, &b.im, &b.radius)
}

/// Is `|roots[i]| = |roots[j]|` provable from the root structure alone?
fn exact_tie(roots: &[Root], i: usize, j: usize) -> bool {
    let unique = |pred: &dyn Fn(&RootDisc, &RootDisc) -> bool| {
        pred(&roots[j].disc, &roots[i].disc)
            && roots
                .iter()
                .enumerate()
                .filter(|(l, r)| *l != j && pred(&r.disc, &roots[i].disc))
                .count()
                == 0
    };
    if !roots[i].disc.real && unique(&conj_meets) {
        return true;
    }
    if roots[i].neg_closed {
        if unique(&neg_meets) {
            return true;
        }
        if !roots[i].disc.real && unique(&neg_conj_meets) {
            return true;
        }
    }
    false
}

/// `|roots[i]| > |roots[j]|`?
fn greater(roots: &[Root], moduli: &[RealEnclosure], i: usize, j: usize) -> Tri {
    match moduli[i].certified_cmp(&moduli[j]) {
        Some(Ordering::Greater) => Tri::True,
        Some(_) => Tri::False,
        None if exact_tie(roots, i, j) => Tri::False,
        None => Tri::Unknown,
    }
}

fn isolate_all(spec: &RecurrenceSpec, bits: u32) -> Result<Vec<Root>> {
    let p = spec.characteristic_polynomial();
    let factors = p.squarefree_factors();
    let radical = factors
        .iter()
        .fold(IntPolynomial::constant(1), |acc, (f, _)| mul_poly(&acc, f));
    let g = radical.gcd(&radical.reflect());
    let mut roots = Vec::new();
    for (f, mult) in &factors {
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        let fg = f.gcd(&g);
        let rest = f.div_exact(&fg).expect("gcd divides");
        for (piece, neg_closed) in [(fg, true), (rest, false)] {
            if piece.degree().unwrap_or(0) == 0 {
                continue;
            }
            for disc in isolate_roots(&piece, bits, MAX_PRECISION_BITS)? {
                roots.push(Root {
                    disc,
                    mult: *mult,
                    neg_closed,
                });
            }
        }
    }
    Ok(roots)
}

fn mul_poly(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let (ca, cb) = (a.coeffs(), b.coeffs());
    let mut out = vec![BigInt::zero(); ca.len() + cb.len() - 1];
    for (i, x) in ca.iter().enumerate() {
        for (j, y) in cb.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    IntPolynomial::new(out)
}

fn classify_at(roots: &[Root], bits: u32) -> (Tri, Tri, Vec<RealEnclosure>, Vec<usize>) {
    let mut order: Vec<usize> = (0..roots.len()).collect();
    let moduli: Vec<RealEnclosure> = roots
        .iter()
        .map(|r| r.disc.modulus().with_bits(bits))
        .collect();
    order.sort_by(|&a, &b| moduli[b].mid().cmp(&moduli[a].mid()));
    let one = RealEnclosure::from_int(1, bits);
    let top = order[0];
    let mut case1 = match moduli[top].certified_cmp(&one) {
        Some(Ordering::Greater) => Tri::True,
        Some(_) => Tri::False,
        None => Tri::Unknown,
    };
    for &j in &order[1..] {
        // Moduli are nonzero because the constant coefficient is nonzero.
        let t = match moduli[j].certified_cmp(&one) {
            Some(Ordering::Less) => Tri::True,
            Some(_) => Tri::False,
            None => Tri::Unknown,
        };
        case1 = case1.and(t);
    }
    let case2 = if order.len() < 2 {
        Tri::False
    } else {
        let mut c = greater(roots, &moduli, top, order[1]);
        for &j in &order[2..] {
            c = c.and(greater(roots, &moduli, order[1], j));
        }
        c
    };
    let sorted = order.iter().map(|&i| moduli[i].clone()).collect();
    let mults = order.iter().map(|&i| roots[i].mult).collect();
    (case1, case2, sorted, mults)
}

/// Classify the characteristic roots of `spec`, escalating precision from
/// `bits` until the classification is certified or the limit is reached.
pub fn classify_dominance(spec: &RecurrenceSpec, bits: u32) -> Result<DominanceClass> {
    let mut p = bits.max(64);
    loop {
        let roots = isolate_all(spec, p)?;
        let (c1, c2, moduli, mults) = classify_at(&roots, p);
        let variant = if c1 == Tri::True {
            Some(DominanceVariant::CaseI)
        } else if c2 == Tri::True {
            Some(DominanceVariant::CaseII)
        } else if c1 == Tri::False && c2 == Tri::False {
            Some(DominanceVariant::Neither)
        } else {
            None
        };
        // A repeated top modulus only matters when the top root is unique.
        let dominant_simple = mults[0] == 1;
        if variant.is_some() || p >= MAX_PRECISION_BITS {
            return Ok(DominanceClass {
                variant: variant.unwrap_or(DominanceVariant::Neither),
                root_moduli: moduli,
                multiplicities: mults,
                dominant_simple,
                undecided: variant.is_none(),
                precision_bits: p,
            });
        }
        p = (p * 2).min(MAX_PRECISION_BITS);
    }
}
