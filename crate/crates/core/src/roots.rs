//! Certified isolation of all complex roots of a squarefree integer polynomial.
//!
//! Approximations come from an Aberth iteration in `f64`, are polished with
//! Weierstrass (Durand–Kerner) steps at the working precision, and are then
//! certified: for distinct points `z_i` with Weierstrass corrections
//! `W_i = P(z_i) / (a_n ∏_{j≠i} (z_i - z_j))`, the roots of `P` are the
//! eigenvalues of `diag(z) - W·1ᵀ`, so Gershgorin discs centred at
//! `z_i - W_i` with radius `(n-1)|W_i|` cover them. Pairwise disjoint discs
//! each hold exactly one root.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::dyadic::{Dyadic, Round};
use crate::enclosure::{RealEnclosure, MAX_PRECISION_BITS};
use crate::error::{invalid, Error, Result};
use crate::poly::IntPolynomial;

/// Rectangle in the complex plane.
#[derive(Debug, Clone)]
pub struct CxEnclosure {
    pub re: RealEnclosure,
    pub im: RealEnclosure,
}

impl CxEnclosure {
    pub fn point(re: Dyadic, im: Dyadic, bits: u32) -> CxEnclosure {
        CxEnclosure {
            re: RealEnclosure::point(re, bits),
            im: RealEnclosure::point(im, bits),
        }
    }

    pub fn from_int(v: &BigInt, bits: u32) -> CxEnclosure {
        CxEnclosure {
            re: RealEnclosure::from_bigint(v, bits),
            im: RealEnclosure::from_int(0, bits),
        }
    }

    pub fn add(&self, o: &CxEnclosure) -> CxEnclosure {
        CxEnclosure {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &CxEnclosure) -> CxEnclosure {
        CxEnclosure {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &CxEnclosure) -> CxEnclosure {
        CxEnclosure {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn norm_sqr(&self) -> RealEnclosure {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn div(&self, o: &CxEnclosure) -> Result<CxEnclosure> {
        let d = o.norm_sqr();
        let conj = CxEnclosure {
            re: o.re.clone(),
            im: -&o.im,
        };
        let n = self.mul(&conj);
        Ok(CxEnclosure {
            re: n.re.checked_div(&d)?,
            im: n.im.checked_div(&d)?,
        })
    }

    /// Upper bound on `|z|` over the rectangle.
    pub fn abs_upper(&self, bits: u32) -> Dyadic {
        let hi = self.norm_sqr().hi().clone();
        hi.sqrt(bits, Round::Up)
    }

    fn mid(&self, bits: u32) -> (Dyadic, Dyadic) {
        (
            self.re.mid().round(bits, Round::Down),
            self.im.mid().round(bits, Round::Down),
        )
    }

    /// Upper bound on the distance from the midpoint to any point of the rectangle.
    fn half_diagonal(&self, bits: u32) -> Dyadic {
        let w = self.re.width().mul_pow2(-1);
        let h = self.im.width().mul_pow2(-1);
        (&(&w * &w) + &(&h * &h)).sqrt(bits, Round::Up)
    }
}

/// A disc `|z - center| <= radius` certified to contain exactly one root.
#[derive(Debug, Clone)]
pub struct RootDisc {
    pub re: Dyadic,
    pub im: Dyadic,
    pub radius: Dyadic,
    /// The root is certified real (disc centred on the real axis and isolated).
    pub real: bool,
    pub bits: u32,
}

impl RootDisc {
    /// Enclosure of `|root|`.
    pub fn modulus(&self) -> RealEnclosure {
        let b = self.bits;
        let n2 = &(&self.re * &self.re) + &(&self.im * &self.im);
        let c = RealEnclosure::point(n2, b).sqrt().expect("nonnegative");
        let r = RealEnclosure::point(self.radius.clone(), b);
        let lo = (&c - &r).lo().clone();
        let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
        let hi = (&c + &r).hi().clone();
        RealEnclosure::new(lo, hi, b).expect("ordered")
    }

    /// Enclosure of `|root|^2`.
    pub fn modulus_sqr(&self) -> RealEnclosure {
        self.modulus().sqr()
    }

    /// Real-axis enclosure for a certified real root.
    pub fn real_enclosure(&self) -> Option<RealEnclosure> {
        self.real.then(|| {
            RealEnclosure::new(&self.re - &self.radius, &self.re + &self.radius, self.bits)
                .expect("ordered")
        })
    }

    /// The root is certified to have positive imaginary part.
    pub fn upper_half(&self) -> bool {
        !self.real && self.im > self.radius
    }

    pub fn center_f64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    fn disjoint_from(&self, o: &RootDisc) -> bool {
        let dx = &self.re - &o.re;
        let dy = &self.im - &o.im;
        let d2 = &(&dx * &dx) + &(&dy * &dy);
        let r = &self.radius + &o.radius;
        d2 > &r * &r
    }

    /// Does the disc intersect the given disc (conservatively)?
    pub fn may_intersect(&self, re: &Dyadic, im: &Dyadic, radius: &Dyadic) -> bool {
        let dx = &self.re - re;
        let dy = &self.im - im;
        let d2 = &(&dx * &dx) + &(&dy * &dy);
        let r = &self.radius + radius;
        d2 <= &r * &r
    }
}

fn horner_f64(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Aberth–Ehrlich approximations to all roots (no guarantees).
pub fn aberth_f64(poly: &IntPolynomial) -> Result<Vec<Complex64>> {
    let n = match poly.degree() {
        Some(d) if d >= 1 => d,
        _ => return invalid("root finding needs a nonconstant polynomial"),
    };
    let coeffs: Vec<f64> = poly
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return invalid("coefficients exceed the f64 range");
    }
    let lead = coeffs[n];
    let coeffs: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return Ok(vec![Complex64::new(-coeffs[0], 0.0)]);
    }
    // Start on a circle whose radius is the geometric mean of the root moduli.
    let a0 = coeffs[0].abs();
    let radius = if a0 > 0.0 {
        a0.powf(1.0 / n as f64)
    } else {
        1.0
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, t)
        })
        .collect();
    for _ in 0..2000 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner_f64(&coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    Ok(z)
}

fn horner_cx(poly: &IntPolynomial, z: &CxEnclosure, bits: u32) -> CxEnclosure {
    let mut acc = CxEnclosure::from_int(&BigInt::from(0), bits);
    for c in poly.coeffs().iter().rev() {
        acc = acc.mul(z).add(&CxEnclosure::from_int(c, bits));
    }
    acc
}

/// Rigorous enclosures of the Weierstrass corrections at exact points.
fn weierstrass(
    poly: &IntPolynomial,
    z: &[(Dyadic, Dyadic)],
    bits: u32,
) -> Result<Vec<CxEnclosure>> {
    let lead = CxEnclosure::from_int(poly.leading().unwrap(), bits);
    let pts: Vec<CxEnclosure> = z
        .iter()
        .map(|(r, i)| CxEnclosure::point(r.clone(), i.clone(), bits))
        .collect();
    (0..pts.len())
        .map(|i| {
            let mut den = lead.clone();
            for (j, pj) in pts.iter().enumerate() {
                if j != i {
                    den = den.mul(&pts[i].sub(pj));
                }
            }
            horner_cx(poly, &pts[i], bits).div(&den)
        })
        .collect()
}

/// log2 of |w| / max(|z|, 1), rounded down; `None` when `w` is exactly zero.
fn relative_log2(w: &CxEnclosure, z: &(Dyadic, Dyadic)) -> Option<i64> {
    let wm = w.abs_upper(64);
    if wm.is_zero() {
        return None;
    }
    let zm = (&(&z.0 * &z.0) + &(&z.1 * &z.1)).log2_floor().unwrap_or(0) / 2;
    Some(wm.log2_floor().unwrap() - zm.max(0))
}

fn refine(poly: &IntPolynomial, z: &mut [(Dyadic, Dyadic)], bits: u32) -> Result<()> {
    // Convergence is quadratic near simple roots: once the squared correction
    // is below the target the step just taken reaches full precision. The
    // stall counter catches clusters, where rounding noise sets the floor.
    let target = 8 - i64::from(bits);
    let mut prev = i64::MAX;
    let mut stalled = 0;
    for _ in 0..64 {
        let w = weierstrass(poly, z, bits)?;
        let worst = w
            .iter()
            .zip(z.iter())
            .filter_map(|(wi, zi)| relative_log2(wi, zi))
            .max()
            .unwrap_or(i64::MIN / 4);
        for (zi, wi) in z.iter_mut().zip(w.iter()) {
            let c = CxEnclosure::point(zi.0.clone(), zi.1.clone(), bits).sub(wi);
            *zi = c.mid(bits);
        }
        if 2 * worst + 8 <= target {
            break;
        }
        stalled = if worst > prev - 2 { stalled + 1 } else { 0 };
        if stalled >= 2 {
            break;
        }
        prev = prev.min(worst);
    }
    Ok(())
}

fn certify(
    poly: &IntPolynomial,
    z: &[(Dyadic, Dyadic)],
    bits: u32,
) -> Result<Option<Vec<RootDisc>>> {
    let n = z.len();
    let w = weierstrass(poly, z, bits)?;
    let mut discs: Vec<RootDisc> = z
        .iter()
        .zip(w.iter())
        .map(|(zi, wi)| {
            let c = CxEnclosure::point(zi.0.clone(), zi.1.clone(), bits).sub(wi);
            let (re, im) = c.mid(bits);
            let r =
                &(&wi.abs_upper(bits) * &Dyadic::from_int(n as i64 - 1)) + &c.half_diagonal(bits);
            RootDisc {
                re,
                im,
                radius: r.round(bits, Round::Up),
                real: false,
                bits,
            }
        })
        .collect();
    // Discs touching the real axis are replaced by real-centred ones; an
    // isolated disc symmetric about the axis holds a real root.
    for d in discs.iter_mut() {
        if d.im.abs() <= d.radius {
            d.radius = (&d.radius + &d.im.abs()).round(bits, Round::Up);
            d.im = Dyadic::zero();
            d.real = true;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !discs[i].disjoint_from(&discs[j]) {
                return Ok(None);
            }
        }
    }
    Ok(Some(discs))
}

/// Certified discs for every root of a squarefree polynomial, escalating the
/// working precision from `bits` up to `max_bits`.
pub fn isolate_roots(poly: &IntPolynomial, bits: u32, max_bits: u32) -> Result<Vec<RootDisc>> {
    let n = match poly.degree() {
        Some(d) if d >= 1 => d,
        _ => return invalid("root isolation needs a nonconstant polynomial"),
    };
    let approx = aberth_f64(poly)?;
    let mut z: Vec<(Dyadic, Dyadic)> = approx
        .iter()
        .map(|c| {
            (
                Dyadic::from_f64(c.re).unwrap_or_else(Dyadic::zero),
                Dyadic::from_f64(c.im).unwrap_or_else(Dyadic::zero),
            )
        })
        .collect();
    // Separate exact coincidences so the Weierstrass products are defined.
    for i in 0..n {
        for j in 0..i {
            if z[i] == z[j] {
                z[i].0 = &z[i].0 + &Dyadic::pow2(-20 - i as i64);
            }
        }
    }
    let mut p = bits.max(64);
    let max_bits = max_bits.min(MAX_PRECISION_BITS).max(p);
    loop {
        match refine(poly, &mut z, p).and_then(|_| certify(poly, &z, p)) {
            Ok(Some(discs)) => return Ok(discs),
            Ok(None) | Err(Error::Singular(_)) => {}
            Err(e) => return Err(e),
        }
        if p >= max_bits {
            return Err(Error::PrecisionExhausted {
                bits: p,
                what: format!("could not separate the roots of {poly}"),
            });
        }
        p = (p * 2).min(max_bits);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_roots() {
        let p = IntPolynomial::from_i64(&[-1, -1, 1]);
        let discs = isolate_roots(&p, 128, 1024).unwrap();
        assert_eq!(discs.len(), 2);
        assert!(discs.iter().all(|d| d.real));
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut mods: Vec<f64> = discs.iter().map(|d| d.modulus().to_f64()).collect();
        mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((mods[0] - 1.0 / phi).abs() < 1e-15);
        assert!((mods[1] - phi).abs() < 1e-15);
        assert!(discs.iter().all(|d| d.radius < Dyadic::pow2(-100)));
    }

    #[test]
    fn complex_pair_is_not_real() {
        let p = IntPolynomial::from_i64(&[1, 0, 1]); // x^2 + 1
        let discs = isolate_roots(&p, 64, 256).unwrap();
        assert_eq!(discs.len(), 2);
        assert!(discs.iter().all(|d| !d.real));
        assert_eq!(discs.iter().filter(|d| d.upper_half()).count(), 1);
        for d in &discs {
            assert!(d.modulus().contains(&Dyadic::one()));
        }
    }

    #[test]
    fn linear_root_is_exact_rational() {
        let p = IntPolynomial::from_i64(&[-3, 2]);
        let d = &isolate_roots(&p, 64, 64).unwrap()[0];
        assert!(d.real);
        let e = d.real_enclosure().unwrap();
        assert!(e.contains(&Dyadic::new(3.into(), -1)));
    }

    #[test]
    fn tetranacci_like_degree_thirty() {
        // psi_30 has one root near 2 and 29 inside the unit disc.
        let mut c = vec![-1i64; 30];
        c.push(1);
        let p = IntPolynomial::from_i64(&c);
        let discs = isolate_roots(&p, 128, 1024).unwrap();
        assert_eq!(discs.len(), 30);
        let outside: Vec<_> = discs
            .iter()
            .filter(|d| !d.modulus().hi().lt(&Dyadic::one()))
            .collect();
        assert_eq!(outside.len(), 1);
        assert!(outside[0].real);
    }

    #[test]
    fn rejects_constants() {
        assert!(isolate_roots(&IntPolynomial::constant(3), 64, 64).is_err());
    }
}
