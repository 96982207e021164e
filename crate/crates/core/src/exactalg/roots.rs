//! Certified complex root isolation: floating Aberth start, exact dyadic Aberth refinement,
//! and a posteriori inclusion disks `D(z_i, n |W_i|)` from the Weierstrass corrections.

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::ball::{CRat, ComplexBall};
use super::multipoly::MultiPoly;
use super::rational::{sqrt_upper, to_f64, Rational};
use super::upoly::UPoly;
use crate::error::{Error, Result};

pub const MAX_PRECISION_BITS: u32 = 16384;

fn univariate(f: &MultiPoly) -> Result<UPoly> {
    match f.vars() {
        [] => Ok(UPoly::new(vec![f.constant_value().unwrap()])),
        [v] => UPoly::from_multipoly(f, &v.clone()),
        _ => Err(Error::Invalid(format!("not univariate: {f}"))),
    }
}

fn aberth_f64(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    let bound = 1.0 + coeffs[..n].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let r = bound.min(1e6).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r * 0.7, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn to_crat(z: Complex64) -> CRat {
    let f = |x: f64| Rational::from_float(if x.is_finite() { x } else { 0.0 }).unwrap_or_else(Rational::zero);
    CRat::new(f(z.re), f(z.im))
}

/// Isolate all roots of a squarefree univariate polynomial at the given precision.
pub fn certified_roots(f: &MultiPoly, precision_bits: u32) -> Result<Vec<ComplexBall>> {
    let p = univariate(f)?;
    if p.degree() < 1 {
        return Ok(vec![]);
    }
    if !p.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let monic = p.monic();
    let coeffs = &monic.0;
    let n = coeffs.len() - 1;
    let dcoeffs = monic.derivative().0;
    let bits = precision_bits.max(16);
    let work = bits + 32;

    let init = aberth_f64(&coeffs.iter().map(to_f64).collect::<Vec<_>>());
    let mut z: Vec<CRat> = init.into_iter().map(to_crat).collect();
    let nudge = Rational::new(1.into(), num_bigint::BigInt::one() << 40usize);
    for i in 1..n {
        while z[..i].contains(&z[i]) {
            z[i] = z[i].add(&CRat::new(nudge.clone(), nudge.clone()));
        }
    }
    let tol = Rational::new(1.into(), num_bigint::BigInt::one() << (2 * bits as usize + 8));
    for _ in 0..200 {
        let mut max_step = Rational::zero();
        for i in 0..n {
            let fz = CRat::eval_poly(coeffs, &z[i]);
            if fz.is_zero() {
                continue;
            }
            let dfz = CRat::eval_poly(&dcoeffs, &z[i]);
            if dfz.is_zero() {
                break;
            }
            let ratio = fz.div(&dfz);
            let mut s = CRat::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if d.is_zero() {
                        return Err(Error::PrecisionExhausted(precision_bits));
                    }
                    s = s.add(&CRat::real(Rational::one()).div(&d));
                }
            }
            let denom = CRat::real(Rational::one()).sub(&ratio.mul(&s));
            let w = if denom.is_zero() { ratio } else { ratio.div(&denom) };
            z[i] = z[i].sub(&w).round(work);
            let step = w.norm_sq();
            if step > max_step {
                max_step = step;
            }
        }
        if max_step < tol {
            break;
        }
    }

    let mut balls = Vec::with_capacity(n);
    let nn = Rational::from_integer((n as u64).into());
    for i in 0..n {
        let mut prod = CRat::real(Rational::one());
        for j in 0..n {
            if j != i {
                let d = z[i].sub(&z[j]);
                if d.is_zero() {
                    return Err(Error::PrecisionExhausted(precision_bits));
                }
                prod = prod.mul(&d);
            }
        }
        let w = CRat::eval_poly(coeffs, &z[i]).div(&prod);
        let rad = &nn * sqrt_upper(&w.norm_sq(), work);
        balls.push(ComplexBall::new(z[i].clone(), rad));
    }
    let limit = Rational::new(1.into(), num_bigint::BigInt::one() << (bits / 2) as usize);
    for i in 0..n {
        if balls[i].radius > limit {
            return Err(Error::PrecisionExhausted(precision_bits));
        }
        for j in i + 1..n {
            if !balls[i].disjoint(&balls[j]) {
                return Err(Error::PrecisionExhausted(precision_bits));
            }
        }
    }
    balls.sort_by(|a, b| (&a.center.re, &a.center.im).cmp(&(&b.center.re, &b.center.im)));
    Ok(balls)
}

/// Retry [`certified_roots`] with doubling precision up to [`MAX_PRECISION_BITS`].
pub fn isolate_roots(f: &MultiPoly, start_bits: u32) -> Result<(Vec<ComplexBall>, u32)> {
    let mut bits = start_bits.max(64);
    loop {
        match certified_roots(f, bits) {
            Ok(r) => return Ok((r, bits)),
            Err(Error::PrecisionExhausted(_)) if bits < MAX_PRECISION_BITS => bits = (bits * 2).min(MAX_PRECISION_BITS),
            Err(e) => return Err(e),
        }
    }
}
