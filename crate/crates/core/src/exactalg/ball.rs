//! Exact Gaussian rationals and complex balls with rational radii.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::multipoly::MultiPoly;
use super::rational::{round_dyadic, sqrt_upper, to_f64, Rational};

/// Exact complex number with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CRat {
    pub re: Rational,
    pub im: Rational,
}

impl CRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        CRat { re, im }
    }

    pub fn real(re: Rational) -> Self {
        CRat { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add(&self, o: &Self) -> Self {
        CRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        CRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        CRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        CRat::new(&self.re * k, &self.im * k)
    }

    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn div(&self, o: &Self) -> Self {
        let d = o.norm_sq();
        let conj = CRat::new(o.re.clone(), -&o.im);
        self.mul(&conj).scale(&d.recip())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Upper bound on the modulus: `|re| + |im|`.
    pub fn abs_upper(&self) -> Rational {
        self.re.abs() + self.im.abs()
    }

    pub fn round(&self, bits: u32) -> Self {
        CRat::new(round_dyadic(&self.re, bits), round_dyadic(&self.im, bits))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }

    /// Horner evaluation of a polynomial given by rational coefficients (low to high).
    pub fn eval_poly(coeffs: &[Rational], z: &CRat) -> CRat {
        coeffs.iter().rev().fold(CRat::zero(), |acc, c| acc.mul(z).add(&CRat::real(c.clone())))
    }
}

/// Disk `{ z : |z - center| <= radius }` with exact center and rational radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub center: CRat,
    pub radius: Rational,
}

impl ComplexBall {
    pub fn new(center: CRat, radius: Rational) -> Self {
        assert!(!radius.is_negative(), "negative radius");
        ComplexBall { center, radius }
    }

    pub fn exact(center: CRat) -> Self {
        ComplexBall { center, radius: Rational::zero() }
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::exact(CRat::real(r))
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexBall::new(self.center.add(&o.center), &self.radius + &o.radius)
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexBall::new(self.center.sub(&o.center), &self.radius + &o.radius)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let r = self.center.abs_upper() * &o.radius + o.center.abs_upper() * &self.radius + &self.radius * &o.radius;
        ComplexBall::new(self.center.mul(&o.center), r)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ComplexBall::new(self.center.scale(k), &self.radius * k.abs())
    }

    /// Enclosure of the inverse; `None` when the ball touches zero.
    pub fn recip(&self) -> Option<Self> {
        // |c| >= lower, and |1/z - 1/c| <= r / (|c| (|c| - r)).
        let n2 = self.center.norm_sq();
        let lower = lower_sqrt(&n2);
        if lower <= self.radius {
            return None;
        }
        let c = CRat::real(Rational::from_integer(1.into())).div(&self.center);
        let rad = &self.radius / (&lower * (&lower - &self.radius));
        Some(ComplexBall::new(c, rad))
    }

    /// Round the center to `bits` fractional bits, absorbing the error in the radius.
    pub fn rounded(&self, bits: u32) -> Self {
        let c = self.center.round(bits);
        let err = self.center.sub(&c).abs_upper();
        ComplexBall::new(c, &self.radius + err)
    }

    /// Whether the exact point `z` lies in the ball.
    pub fn contains(&self, z: &CRat) -> bool {
        self.center.sub(z).norm_sq() <= &self.radius * &self.radius
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&CRat::zero())
    }

    /// Whether the balls are certainly disjoint.
    pub fn disjoint(&self, o: &Self) -> bool {
        let s = &self.radius + &o.radius;
        self.center.sub(&o.center).norm_sq() > &s * &s
    }

    /// Interval evaluation of a univariate polynomial (coefficients low to high).
    pub fn eval_poly(coeffs: &[Rational], z: &ComplexBall, bits: u32) -> ComplexBall {
        let mut acc = ComplexBall::exact(CRat::zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(z).add(&ComplexBall::from_rational(c.clone())).rounded(bits);
        }
        acc
    }

    /// Interval evaluation of a polynomial whose variables are bound to balls.
    pub fn eval_multi(p: &MultiPoly, values: &[(&str, ComplexBall)], bits: u32) -> ComplexBall {
        let idx: Vec<usize> = p
            .vars()
            .iter()
            .map(|v| values.iter().position(|(n, _)| n == v).expect("value provided for every variable"))
            .collect();
        let mut acc = ComplexBall::exact(CRat::zero());
        for (m, c) in p.terms() {
            let mut t = ComplexBall::from_rational(c.clone());
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&values[idx[k]].1).rounded(bits);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Nearest integer to the real part, if the ball is within 1/4 of it and the imaginary part can be 0.
    pub fn nearest_integer(&self) -> Option<num_bigint::BigInt> {
        let n = self.center.re.round().to_integer();
        let quarter = Rational::new(1.into(), 4.into());
        if self.radius < quarter && self.contains(&CRat::real(Rational::from_integer(n.clone()))) {
            Some(n)
        } else {
            None
        }
    }

    pub fn summary(&self) -> BallSummary {
        let (re, im) = self.center.to_f64();
        BallSummary { re, im, radius: to_f64(&self.radius) }
    }
}

/// Lower bound for `sqrt(x)`, `x >= 0`, as a rational.
fn lower_sqrt(x: &Rational) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    // sqrt(x) >= x / sqrt_upper(x)
    let up = sqrt_upper(x, 64);
    x / up
}

/// Floating summary for reports.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BallSummary {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, ratio};

    #[test]
    fn multiplication_encloses_products() {
        let a = ComplexBall::new(CRat::new(rat(1), rat(1)), ratio(1, 100));
        let b = ComplexBall::new(CRat::new(rat(2), rat(-1)), ratio(1, 50));
        let c = a.mul(&b);
        // extreme corner (1.01+1i)(2.02-1i) stays inside
        let z = CRat::new(ratio(101, 100), rat(1)).mul(&CRat::new(ratio(202, 100), rat(-1)));
        assert!(c.contains(&z));
    }

    #[test]
    fn reciprocal_and_disjointness() {
        let a = ComplexBall::new(CRat::real(rat(2)), ratio(1, 10));
        let inv = a.recip().unwrap();
        assert!(inv.contains(&CRat::real(ratio(1, 2))));
        assert!(inv.contains(&CRat::real(ratio(10, 21))));
        assert!(ComplexBall::new(CRat::zero(), rat(1)).recip().is_none());
        let b = ComplexBall::new(CRat::real(rat(3)), ratio(1, 10));
        assert!(a.disjoint(&b));
        assert!(!a.disjoint(&ComplexBall::new(CRat::real(rat(3)), rat(1))));
    }

    #[test]
    fn rounding_keeps_enclosure() {
        let a = ComplexBall::exact(CRat::new(ratio(1, 3), ratio(-2, 7)));
        let r = a.rounded(10);
        assert!(r.contains(&a.center));
    }
}
