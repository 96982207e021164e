//! Dense univariate polynomials over the rationals (coefficients low to high).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::multipoly::MultiPoly;
use super::rational::{rational_sqrt, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<Rational>);

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
    }

    pub fn from_multipoly(p: &MultiPoly, var: &str) -> Result<Self> {
        Ok(Self::new(p.univariate_coeffs(var)?))
    }

    pub fn to_multipoly(&self, var: &str) -> MultiPoly {
        MultiPoly::from_coeffs(var, &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn lc(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return UPoly(vec![]);
        }
        let mut out = vec![Rational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let z = Rational::zero();
        Self::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - rhs.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        if r.len() <= dd {
            return Ok((UPoly(vec![]), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        let lc = d.lc();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        UPoly(self.0.iter().map(|c| c / &lc).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    /// Exact square root when the polynomial is a perfect square in Q[x].
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let n = self.degree();
        if n % 2 != 0 {
            return None;
        }
        let m = (n / 2) as usize;
        let top = rational_sqrt(&self.lc())?;
        let mut g = vec![Rational::zero(); m + 1];
        g[m] = top.clone();
        let two_top = &top * Rational::from_integer(BigInt::from(2));
        for k in (0..m).rev() {
            // coefficient of x^(m + k) in g^2 determines g[k]
            let mut s = self.0[m + k].clone();
            for i in (k + 1)..=m {
                let j = m + k - i;
                if j > k && j <= m {
                    s -= &g[i] * &g[j];
                }
            }
            g[k] = s / &two_top;
        }
        let g = UPoly::new(g);
        (g.mul(&g) == *self).then_some(g)
    }

    /// Integer coefficients after clearing denominators (primitive, positive leading coefficient).
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_zero() {
            for x in ints.iter_mut() {
                *x = &*x / &g;
            }
        }
        if ints.last().is_some_and(|x| x.is_negative()) {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
        ints
    }

    /// All distinct rational roots, in increasing order.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut roots = Vec::new();
        if self.degree() < 1 {
            return roots;
        }
        let mut ints = self.primitive_integer();
        let lead_zeros = ints.iter().take_while(|x| x.is_zero()).count();
        if lead_zeros > 0 {
            roots.push(Rational::zero());
            ints.drain(..lead_zeros);
        }
        if ints.len() >= 2 {
            let a0 = ints[0].abs();
            let an = ints.last().unwrap().abs();
            let reduced = UPoly::new(ints.iter().map(|x| Rational::from_integer(x.clone())).collect());
            for p in divisors(&a0) {
                for q in divisors(&an) {
                    for s in [1i32, -1] {
                        let r = Rational::new(BigInt::from(s) * &p, q.clone());
                        if reduced.eval(&r).is_zero() && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

/// Positive divisors by trial division.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    if let Some(v) = n.to_u128() {
        let mut d: u128 = 1;
        while d * d <= v {
            if v % d == 0 {
                small.push(BigInt::from(d));
                if d * d != v {
                    large.push(BigInt::from(v / d));
                }
            }
            d += 1;
        }
    } else {
        panic!("divisor enumeration on an integer above 2^128");
    }
    large.reverse();
    small.extend(large);
    small
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, ratio};

    #[test]
    fn gcd_and_squarefree() {
        let f = UPoly::from_ints(&[-1, 0, 1]);
        let g = UPoly::from_ints(&[1, 1]);
        assert_eq!(f.gcd(&g), g);
        assert!(f.is_squarefree());
        assert!(!f.mul(&g).is_squarefree());
    }

    #[test]
    fn rational_roots_found() {
        // (2x - 1)(x + 3) x
        let f = UPoly::from_ints(&[0, -3, 5, 2]);
        assert_eq!(f.rational_roots(), vec![rat(-3), rat(0), ratio(1, 2)]);
        assert!(UPoly::from_ints(&[2, 0, 0, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn square_root_of_square() {
        let g = UPoly::from_ints(&[3, -1, 0, 2]);
        assert_eq!(g.mul(&g).sqrt_exact().unwrap().monic(), g.monic());
        assert!(UPoly::from_ints(&[1, 0, 0, 1]).sqrt_exact().is_none());
        assert!(UPoly::from_ints(&[2, 0, 1]).sqrt_exact().is_none());
    }

    #[test]
    fn division_with_remainder() {
        let (q, r) = UPoly::from_ints(&[1, 0, 0, 1]).div_rem(&UPoly::from_ints(&[1, 1])).unwrap();
        assert_eq!(q, UPoly::from_ints(&[1, -1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn divisor_listing() {
        let d: Vec<i64> = divisors(&BigInt::from(12)).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }
}
