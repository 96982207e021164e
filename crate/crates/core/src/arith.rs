//! Machine-word and big-integer number theory: modular arithmetic, primality, square roots and
//! polynomial roots modulo primes, and integer factorisation with an explicit work budget.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if coprime.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

pub fn reduce_i64(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn reduce_big(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Deterministic Miller-Rabin on 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let (d, s) = split_pow2(n - 1);
    MR_BASES[..12].iter().all(|&a| mr_round_u64(n, a, d, s))
}

fn split_pow2(mut d: u64) -> (u64, u32) {
    let s = d.trailing_zeros();
    d >>= s;
    (d, s)
}

fn mr_round_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Miller-Rabin with the first 13 prime bases: a proof below `3.3 * 10^24`, a strong probable-prime test above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Bound below which [`is_probable_prime`] is a proof.
pub fn mr_proof_bound() -> BigUint {
    BigUint::parse_bytes(b"3317044064679887385961981", 10).unwrap()
}

pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Tonelli-Shanks square root modulo an odd prime.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let (q, s) = split_pow2(p - 1);
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// Dense polynomials over `F_p`, coefficients low to high.
pub mod polymod {
    use super::{inv_mod, mul_mod};

    pub fn trim(mut f: Vec<u64>) -> Vec<u64> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
        f.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(out)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let inv = inv_mod(m[dm], p).expect("unit leading coefficient");
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let c = mul_mod(r[r.len() - 1], inv, p);
            for (j, &mj) in m.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mul_mod(c, mj, p)) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn monic(f: &[u64], p: u64) -> Vec<u64> {
        let inv = inv_mod(*f.last().unwrap(), p).unwrap();
        f.iter().map(|&c| mul_mod(c, inv, p)).collect()
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            monic(&a, p)
        }
    }

    pub fn pow_rem(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = rem(&mul(&result, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        result
    }

    pub fn div_exact(a: &[u64], d: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dd = d.len() - 1;
        let inv = inv_mod(d[dd], p).unwrap();
        if r.len() <= dd {
            return vec![];
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dd], inv, p);
            q[k] = c;
            for (j, &x) in d.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mul_mod(c, x, p)) % p;
            }
        }
        trim(q)
    }
}

/// Distinct roots in `[0, p)` of `f` modulo the prime `p`, sorted.
pub fn roots_mod_p(f: &[u64], p: u64) -> Vec<u64> {
    let f = polymod::trim(f.iter().map(|&c| c % p).collect());
    if f.len() <= 1 {
        return vec![];
    }
    if p <= 64 {
        return (0..p).filter(|&x| polymod::eval(&f, x, p) == 0).collect();
    }
    // g = gcd(f, x^p - x) is the product of the distinct linear factors
    let xp = polymod::pow_rem(&[0, 1], p, &f, p);
    let g = polymod::gcd(&f, &polymod::sub(&xp, &[0, 1], p), p);
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    split_linear(&g, p, &mut rng, &mut out);
    out.sort_unstable();
    out
}

fn split_linear(g: &[u64], p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    let deg = g.len().saturating_sub(1);
    match deg {
        0 => {}
        1 => {
            let m = polymod::monic(g, p);
            out.push((p - m[0]) % p);
        }
        _ => loop {
            let delta = rng.gen_range(0..p);
            let h = polymod::pow_rem(&[delta, 1], (p - 1) / 2, g, p);
            let d = polymod::gcd(g, &polymod::sub(&h, &[1], p), p);
            if d.len() > 1 && d.len() < g.len() {
                let rest = polymod::div_exact(g, &d, p);
                split_linear(&d, p, rng, out);
                split_linear(&rest, p, rng, out);
                return;
            }
        },
    }
}

/// Prime factorisation with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    #[serde(serialize_with = "ser_factors")]
    pub factors: Vec<(BigUint, u32)>,
    /// some prime factor exceeds the Miller-Rabin proof bound
    pub probable: bool,
}

fn ser_factors<S: serde::Serializer>(f: &[(BigUint, u32)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(f.len()))?;
    for (p, e) in f {
        seq.serialize_element(&(p.to_string(), e))?;
    }
    seq.end()
}

impl Factorization {
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn largest(&self) -> Option<&BigUint> {
        self.factors.last().map(|(p, _)| p)
    }

    pub fn smallest(&self) -> Option<&BigUint> {
        self.factors.first().map(|(p, _)| p)
    }

    pub fn product(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }
}

/// Iteration budget for the rho stage; `None` means unlimited.
#[derive(Clone, Copy, Debug)]
pub struct Budget(pub Option<u64>);

impl Default for Budget {
    fn default() -> Self {
        Budget(Some(5_000_000))
    }
}

const TRIAL_LIMIT: u64 = 100_000;

/// Trial division to `10^5`, then Miller-Rabin and Pollard-Brent; `Undecided` when over budget.
pub fn factorize(n: &BigUint, budget: Budget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Invalid("factorisation of 0".into()));
    }
    let mut rest = n.clone();
    let mut found: Vec<BigUint> = Vec::new();
    for &p in small_primes() {
        if let Some(mut r) = rest.to_u64() {
            for &q in small_primes().iter().skip_while(|&&q| q < p) {
                if q * q > r {
                    break;
                }
                while r % q == 0 {
                    r /= q;
                    found.push(BigUint::from(q));
                }
            }
            rest = BigUint::from(r);
            break;
        }
        if BigUint::from(p * p) > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            found.push(BigUint::from(p));
        }
    }
    split_rough(rest, found, budget)
}

/// Factor `n` known to have no prime factor below `10^5`; skips trial division.
pub fn factorize_rough(n: &BigUint, budget: Budget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Invalid("factorisation of 0".into()));
    }
    split_rough(n.clone(), Vec::new(), budget)
}

fn split_rough(rest: BigUint, mut found: Vec<BigUint>, budget: Budget) -> Result<Factorization> {
    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    let mut spent = 0u64;
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if m < BigUint::from(TRIAL_LIMIT * TRIAL_LIMIT) || is_probable_prime(&m) {
            found.push(m);
            continue;
        }
        let d = find_factor(&m, budget, &mut spent)?;
        let other = &m / &d;
        stack.push(d);
        stack.push(other);
    }
    found.sort();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for p in found {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    let bound = mr_proof_bound();
    let probable = factors.iter().any(|(p, _)| p >= &bound);
    Ok(Factorization { factors, probable })
}

pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    factorize(&BigUint::from(n), Budget(None))
        .expect("64-bit factorisation always finishes")
        .factors
        .into_iter()
        .map(|(p, e)| (p.to_u64().unwrap(), e))
        .collect()
}

fn small_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

fn find_factor(n: &BigUint, budget: Budget, spent: &mut u64) -> Result<BigUint> {
    for c in 1u64.. {
        let r = if let Some(v) = n.to_u64() {
            brent_u64(v, c, budget, spent)?.map(BigUint::from)
        } else if let Some(v) = n.to_u128() {
            brent_u128(v, c as u128, budget, spent)?.map(BigUint::from)
        } else {
            brent_big(n, c, budget, spent)?
        };
        if let Some(d) = r {
            return Ok(d);
        }
    }
    unreachable!()
}

fn charge(budget: Budget, spent: &mut u64, amount: u64) -> Result<()> {
    *spent += amount;
    match budget.0 {
        Some(b) if *spent > b => Err(Error::Undecided(format!("factorisation budget of {b} iterations exhausted"))),
        _ => Ok(()),
    }
}

fn brent_u64(n: u64, c: u64, budget: Budget, spent: &mut u64) -> Result<Option<u64>> {
    if n % 2 == 0 {
        return Ok(Some(2));
    }
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
    let (mut g, mut x, mut ys) = (1u64, 0u64, 0u64);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = m.min(r - k);
            for _ in 0..lim {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            charge(budget, spent, lim)?;
            g = gcd_u64(q, n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    Ok((g != n).then_some(g))
}

/// `a * b` as `(high, low)` 128-bit halves.
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let mask = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & mask);
    let (b1, b0) = (b >> 64, b & mask);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
    let lo = (p00 & mask) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Montgomery arithmetic modulo an odd `n`, `R = 2^128`.
struct Mont {
    n: u128,
    ninv: u128,
}

impl Mont {
    fn new(n: u128) -> Self {
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        Mont { n, ninv: inv.wrapping_neg() }
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        let m = lo.wrapping_mul(self.ninv);
        let (mh, ml) = mul_wide(m, self.n);
        let carry = lo.overflowing_add(ml).1 as u128;
        let (t, over1) = hi.overflowing_add(mh);
        let (t, over2) = t.overflowing_add(carry);
        if over1 || over2 || t >= self.n {
            t.wrapping_sub(self.n)
        } else {
            t
        }
    }

    fn add(&self, a: u128, b: u128) -> u128 {
        let (t, over) = a.overflowing_add(b);
        if over || t >= self.n {
            t.wrapping_sub(self.n)
        } else {
            t
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn brent_u128(n: u128, c: u128, budget: Budget, spent: &mut u64) -> Result<Option<u128>> {
    if n % 2 == 0 {
        return Ok(Some(2));
    }
    let mt = Mont::new(n);
    let f = |x: u128| mt.add(mt.mul(x, x), c % n);
    let (mut y, mut r, mut q, m) = (2u128 % n, 1u64, 1u128 % n, 128u64);
    let (mut g, mut x, mut ys) = (1u128, 0u128, 0u128);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = m.min(r - k);
            for _ in 0..lim {
                y = f(y);
                q = mt.mul(q, x.abs_diff(y));
            }
            charge(budget, spent, lim)?;
            g = gcd_u128(q, n);
            k += m;
        }
        r *= 2;
    }
    if g == n || g == 0 {
        loop {
            ys = f(ys);
            g = gcd_u128(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    Ok((g != n).then_some(g))
}

fn brent_big(n: &BigUint, c: u64, budget: Budget, spent: &mut u64) -> Result<Option<BigUint>> {
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return Ok(Some(two));
    }
    let cc = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &cc) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let (mut y, mut r, mut q, m) = (two.clone(), 1u64, BigUint::one(), 64u64);
    let (mut g, mut x, mut ys) = (BigUint::one(), BigUint::zero(), BigUint::zero());
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let lim = m.min(r - k);
            for _ in 0..lim {
                y = f(&y);
                q = q * diff(&x, &y) % n;
            }
            charge(budget, spent, lim)?;
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    Ok((&g != n).then_some(g))
}
