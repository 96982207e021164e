//! Exact multivariate polynomials over the rationals with named variables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::rational::{to_string_frac, Rational};
use crate::error::{Error, Result};

pub type Monomial = Vec<u32>;

/// Sort key placing `a0 < a1 < a2 < a3 < c0 < c1 < c2 < c3` before any other name.
fn var_rank(name: &str) -> (u8, u32, String) {
    let mut chars = name.chars();
    let head = chars.next();
    let tail: String = chars.collect();
    if let (Some(h @ ('a' | 'c')), Ok(i)) = (head, tail.parse::<u32>()) {
        if !tail.is_empty() && tail.chars().all(|c| c.is_ascii_digit()) {
            return (if h == 'a' { 0 } else { 1 }, i, String::new());
        }
    }
    (2, 0, name.to_string())
}

pub fn cmp_vars(a: &str, b: &str) -> std::cmp::Ordering {
    var_rank(a).cmp(&var_rank(b))
}

/// Dense exponent-tuple polynomial. The variable list holds exactly the variables that occur,
/// in canonical order, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPoly { vars: Vec::new(), terms }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rational::one());
        MultiPoly { vars: vec![name.to_string()], terms }
    }

    /// `coeff * name^exp`.
    pub fn monomial(name: &str, exp: u32, coeff: Rational) -> Self {
        if exp == 0 {
            return Self::constant(coeff);
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(vec![exp], coeff);
        }
        MultiPoly { vars: vec![name.to_string()], terms }.normalized()
    }

    /// Build from terms over an arbitrary (not necessarily canonical) variable list.
    pub fn from_terms(vars: &[&str], terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&i, &j| cmp_vars(vars[i], vars[j]));
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "exponent tuple length must match variables");
            let key: Monomial = order.iter().map(|&i| m[i]).collect();
            add_term(&mut out, key, c);
        }
        let mut sorted: Vec<String> = order.iter().map(|&i| vars[i].to_string()).collect();
        sorted.dedup();
        assert_eq!(sorted.len(), vars.len(), "duplicate variable names");
        MultiPoly { vars: sorted, terms: out }.normalized()
    }

    /// Univariate polynomial `sum coeffs[i] * name^i`.
    pub fn from_coeffs(name: &str, coeffs: &[Rational]) -> Self {
        let terms = coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone()));
        Self::from_terms(&[name], terms)
    }

    pub fn from_int_coeffs(name: &str, coeffs: &[i64]) -> Self {
        let c: Vec<Rational> = coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect();
        Self::from_coeffs(name, &c)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn contains_var(&self, name: &str) -> bool {
        self.var_index(name).is_some()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.keys().map(|m| m[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    /// Total degree restricted to the listed variables.
    pub fn degree_in_vars(&self, names: &[&str]) -> u32 {
        let idx: Vec<usize> = names.iter().filter_map(|n| self.var_index(n)).collect();
        self.terms.keys().map(|m| idx.iter().map(|&i| m[i]).sum()).max().unwrap_or(0)
    }

    /// Degree `d` if every term has total degree `d` in `names`.
    pub fn homogeneous_degree_in(&self, names: &[&str]) -> Option<u32> {
        let idx: Vec<usize> = names.iter().filter_map(|n| self.var_index(n)).collect();
        let mut degs = self.terms.keys().map(|m| idx.iter().map(|&i| m[i]).sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Coefficient of the given monomial, with exponents listed per named variable.
    pub fn coeff(&self, exps: &[(&str, u32)]) -> Rational {
        let mut key = vec![0u32; self.vars.len()];
        for &(n, e) in exps {
            match self.var_index(n) {
                Some(i) => key[i] = e,
                None if e == 0 => {}
                None => return Rational::zero(),
            }
        }
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading term under lexicographic order in canonical variable order.
    pub fn leading_term(&self) -> Option<(Monomial, Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))
    }

    pub fn leading_term_string(&self) -> String {
        match self.leading_term() {
            Some((m, c)) => MultiPoly { vars: self.vars.clone(), terms: BTreeMap::from([(m, c)]) }
                .normalized()
                .to_string(),
            None => "0".into(),
        }
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..self.vars.len()).map(|i| self.terms.keys().any(|m| m[i] > 0)).collect();
        if used.iter().all(|&u| u) {
            return self;
        }
        let vars = self.vars.iter().zip(&used).filter(|(_, &u)| u).map(|(v, _)| v.clone()).collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(m, c)| (m.iter().zip(&used).filter(|(_, &u)| u).map(|(&e, _)| e).collect(), c))
            .collect();
        MultiPoly { vars, terms }
    }

    fn lift(&self, vars: &[String]) -> BTreeMap<Monomial, Rational> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("target variable set is a superset"))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut key = vec![0u32; vars.len()];
                for (i, &e) in m.iter().enumerate() {
                    key[map[i]] = e;
                }
                (key, c.clone())
            })
            .collect()
    }

    fn union_vars(&self, other: &Self) -> Vec<String> {
        let mut v: Vec<String> = self.vars.iter().chain(&other.vars).cloned().collect();
        v.sort_by(|a, b| cmp_vars(a, b));
        v.dedup();
        v
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let vars = self.union_vars(rhs);
        let mut terms = self.lift(&vars);
        for (m, c) in rhs.lift(&vars) {
            add_term(&mut terms, m, c);
        }
        MultiPoly { vars, terms }.normalized()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let vars = self.union_vars(rhs);
        let a = self.lift(&vars);
        let b = rhs.lift(&vars);
        let mut terms = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                add_term(&mut terms, m, ca * cb);
            }
        }
        MultiPoly { vars, terms }.normalized()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact quotient; fails with the remainder's leading term when `rhs` does not divide `self`.
    pub fn divexact(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if let Some(c) = rhs.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let vars = self.union_vars(rhs);
        let mut rem = self.lift(&vars);
        let div = rhs.lift(&vars);
        let (lm, lc) = div.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut quot = BTreeMap::new();
        while let Some((m, c)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if m.iter().zip(&lm).any(|(a, b)| a < b) {
                let r = MultiPoly { vars: vars.clone(), terms: rem }.normalized();
                return Err(Error::InexactDivision(r.leading_term_string()));
            }
            let qm: Monomial = m.iter().zip(&lm).map(|(a, b)| a - b).collect();
            let qc = &c / &lc;
            for (dm, dc) in &div {
                let t: Monomial = dm.iter().zip(&qm).map(|(a, b)| a + b).collect();
                add_term(&mut rem, t, -(dc * &qc));
            }
            quot.insert(qm, qc);
        }
        Ok(MultiPoly { vars, terms: quot }.normalized())
    }

    /// Coefficients of powers of `name`, each a polynomial in the remaining variables.
    pub fn coeffs_in(&self, name: &str) -> Vec<MultiPoly> {
        let Some(i) = self.var_index(name) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(name) as usize;
        let rest: Vec<String> = self.vars.iter().filter(|v| *v != name).cloned().collect();
        let mut out: Vec<BTreeMap<Monomial, Rational>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut key = m.clone();
            let e = key.remove(i) as usize;
            out[e].insert(key, c.clone());
        }
        out.into_iter().map(|terms| MultiPoly { vars: rest.clone(), terms }.normalized()).collect()
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(name: &str, coeffs: &[MultiPoly]) -> Self {
        let x = MultiPoly::var(name);
        let mut acc = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(&x).add(c);
        }
        acc
    }

    /// Substitute a polynomial for a variable.
    pub fn substitute(&self, name: &str, value: &MultiPoly) -> Self {
        if !self.contains_var(name) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(name);
        let mut acc = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    pub fn substitute_value(&self, name: &str, value: &Rational) -> Self {
        self.substitute(name, &MultiPoly::constant(value.clone()))
    }

    /// Substitute several variables by rationals.
    pub fn substitute_values(&self, values: &[(&str, Rational)]) -> Self {
        let mut p = self.clone();
        for (n, v) in values {
            p = p.substitute_value(n, v);
        }
        p
    }

    /// Evaluate at a full assignment; missing variables are an error.
    pub fn eval(&self, values: &[(&str, Rational)]) -> Result<Rational> {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                values
                    .iter()
                    .position(|(n, _)| n == v)
                    .ok_or_else(|| Error::Invalid(format!("no value for variable {v}")))
            })
            .collect::<Result<_>>()?;
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(values[idx[k]].1.clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    pub fn eval_ints(&self, values: &[(&str, i64)]) -> Result<Rational> {
        let v: Vec<(&str, Rational)> =
            values.iter().map(|&(n, x)| (n, Rational::from_integer(BigInt::from(x)))).collect();
        self.eval(&v)
    }

    pub fn derivative(&self, name: &str) -> Self {
        let Some(i) = self.var_index(name) else {
            return Self::zero();
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut k = m.clone();
                k[i] -= 1;
                terms.insert(k, c * Rational::from_integer(BigInt::from(m[i])));
            }
        }
        MultiPoly { vars: self.vars.clone(), terms }.normalized()
    }

    /// Rename a variable (the new name must not already occur).
    pub fn rename(&self, from: &str, to: &str) -> Self {
        if from == to || !self.contains_var(from) {
            return self.clone();
        }
        assert!(!self.contains_var(to), "rename target already present");
        let vars: Vec<&str> = self.vars.iter().map(|v| if v == from { to } else { v.as_str() }).collect();
        Self::from_terms(&vars, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// gcd of the numerators after clearing denominators.
    pub fn content_of_integral(&self) -> BigInt {
        let d = self.denominator_lcm();
        self.terms
            .values()
            .map(|c| (c * Rational::from_integer(d.clone())).to_integer())
            .fold(BigInt::zero(), |acc, n| acc.gcd(&n))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// First monomial (in descending order) where `self` and `other` differ, for diagnostics.
    pub fn first_difference(&self, other: &Self) -> Option<String> {
        let d = self.sub(other);
        if d.is_zero() {
            None
        } else {
            Some(d.leading_term_string())
        }
    }

    /// Integer coefficients, low to high, of a univariate polynomial in `name`.
    pub fn univariate_coeffs(&self, name: &str) -> Result<Vec<Rational>> {
        if self.vars.iter().any(|v| v != name) {
            return Err(Error::Invalid(format!("polynomial is not univariate in {name}: {self}")));
        }
        Ok(self.coeffs_in(name).iter().map(|c| c.constant_value().unwrap()).collect())
    }

    /// Comma separated low to high coefficients of a univariate polynomial.
    pub fn to_coeff_string(&self, name: &str) -> Result<String> {
        Ok(self.univariate_coeffs(name)?.iter().map(to_string_frac).collect::<Vec<_>>().join(","))
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", to_string_frac(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", to_string_frac(&a))?;
                }
                write!(f, "{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        MultiPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        MultiPoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        MultiPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

/// The four arithmetic operations exposed as one entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    DivExact,
}

pub fn poly_arith(lhs: &MultiPoly, rhs: &MultiPoly, op: PolyOp) -> Result<MultiPoly> {
    Ok(match op {
        PolyOp::Add => lhs.add(rhs),
        PolyOp::Sub => lhs.sub(rhs),
        PolyOp::Mul => lhs.mul(rhs),
        PolyOp::DivExact => lhs.divexact(rhs)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn canonical_variable_order() {
        let q = p("c0 + a3 + x + a0 + c2");
        assert_eq!(q.vars(), &["a0", "a3", "c0", "c2", "x"]);
    }

    #[test]
    fn difference_of_squares() {
        let r = poly_arith(&p("a1+a2"), &p("a1-a2"), PolyOp::Mul).unwrap();
        assert_eq!(r, p("a1^2-a2^2"));
    }

    #[test]
    fn divexact_by_one_and_failure() {
        let f = p("a2^2-a1*a3");
        assert_eq!(poly_arith(&f, &MultiPoly::one(), PolyOp::DivExact).unwrap(), f);
        match f.divexact(&p("a1+1")) {
            Err(Error::InexactDivision(t)) => assert!(!t.is_empty()),
            other => panic!("expected inexact division, got {other:?}"),
        }
        assert_eq!(p("x^2-1").divexact(&p("x-1")).unwrap(), p("x+1"));
    }

    #[test]
    fn cancellation_drops_variables() {
        let r = p("a1 + a2").sub(&p("a1"));
        assert_eq!(r.vars(), &["a2"]);
        assert!(p("a1").sub(&p("a1")).is_zero());
    }

    #[test]
    fn coefficients_round_trip() {
        let f = p("a0^2*a1 - 3*a0 + a2^3");
        let cs = f.coeffs_in("a0");
        assert_eq!(cs.len(), 3);
        assert_eq!(MultiPoly::from_coeffs_in("a0", &cs), f);
        assert_eq!(f.coeff(&[("a0", 2), ("a1", 1)]), Rational::one());
        assert_eq!(f.degree_in("a0"), 2);
        assert_eq!(f.homogeneous_degree_in(&["a0", "a1", "a2"]), None);
    }

    #[test]
    fn substitution_and_evaluation() {
        let f = p("x^2 + y");
        assert_eq!(f.substitute("x", &p("y+1")), p("y^2+3*y+1"));
        assert_eq!(f.eval_ints(&[("x", 3), ("y", -1)]).unwrap(), Rational::from_integer(8.into()));
        assert!(f.eval_ints(&[("x", 3)]).is_err());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p("-a1^2 + 2*a1*a2 - 1/2").to_string(), "-a1^2 + 2*a1*a2 - 1/2");
    }
}
