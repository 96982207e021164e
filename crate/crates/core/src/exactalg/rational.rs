//! Arbitrary precision rationals and integer helpers.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rationals are always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_int(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// `Some(n)` when the rational is an integer.
pub fn as_integer(r: &Rational) -> Option<BigInt> {
    if r.denom().is_one() {
        Some(r.numer().clone())
    } else {
        None
    }
}

/// Exact integer square root when `n` is a perfect square (0 included).
pub fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Square root of a rational if it is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let n = isqrt_exact(r.numer())?;
    let d = isqrt_exact(r.denom())?;
    Some(Rational::new(n, d))
}

pub fn is_rational_square(r: &Rational) -> bool {
    rational_sqrt(r).is_some()
}

/// Smallest dyadic upper bound `k / 2^bits` for `sqrt(r)`, `r >= 0`.
pub fn sqrt_upper(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = r * Rational::from_integer(scale);
    let c = scaled.ceil().to_integer();
    let mut s = c.sqrt();
    if &s * &s < c {
        s += 1;
    }
    Rational::new(s, BigInt::one() << bits as usize)
}

/// Round to the nearest multiple of `2^-bits`.
pub fn round_dyadic(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = r * Rational::from_integer(scale.clone());
    Rational::new(scaled.round().to_integer(), scale)
}

pub fn to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = r.numer().bits().max(r.denom().bits()) as i64 - 60;
            let n = if shift > 0 { r.numer() >> shift as usize } else { r.numer().clone() };
            let d = if shift > 0 { r.denom() >> shift as usize } else { r.denom().clone() };
            n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
        }
    }
}

/// `num/den` string form (integers print without a denominator).
pub fn to_string_frac(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `12`, `-3/4` or a decimal such as `0.0000001` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
    let e = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if e >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, e as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-e) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

pub fn lcm_int(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    a.lcm(b).abs()
}

/// Modular inverse of `a` modulo `m > 1`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Continued fraction best approximation of `x` with denominator at most `max_den`.
pub fn reconstruct(x: &Rational, max_den: &BigInt) -> Rational {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    loop {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if &q2 > max_den {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    if q1.is_zero() {
        return Rational::from_integer(x.round().to_integer());
    }
    Rational::new(p1, q1)
}

pub fn sign_of(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Smallest integer `m >= 0` with `m^den >= x^num` for `x >= 1`, i.e. `ceil(x^(num/den))`.
pub fn ceil_power(x: u64, e: &Rational) -> BigInt {
    let target = pow_rational_int(x, e.numer());
    let d = e.denom().to_u32().expect("exponent denominator fits u32");
    let mut m = BigInt::from(to_f64(e).mul_add((x as f64).ln(), 0.0).exp().max(0.0) as u128);
    while num_traits::pow(m.clone(), d as usize) < target {
        m += 1;
    }
    while m > BigInt::zero() && num_traits::pow(&m - 1u32, d as usize) >= target {
        m -= 1;
    }
    m
}

/// Largest integer `m >= 0` with `m^den <= x^num`, i.e. `floor(x^(num/den))`.
pub fn floor_power(x: u64, e: &Rational) -> BigInt {
    let target = pow_rational_int(x, e.numer());
    let d = e.denom().to_u32().expect("exponent denominator fits u32");
    let mut m = BigInt::from(to_f64(e).mul_add((x as f64).ln(), 0.0).exp().max(0.0) as u128);
    while m > BigInt::zero() && num_traits::pow(m.clone(), d as usize) > target {
        m -= 1;
    }
    while num_traits::pow(&m + 1u32, d as usize) <= target {
        m += 1;
    }
    m
}

fn pow_rational_int(x: u64, n: &BigInt) -> BigInt {
    let n = n.to_usize().expect("exponent numerator must be a small non-negative integer");
    num_traits::pow(BigInt::from(x), n)
}

/// Compare `a^e` against `b` exactly for integer `a >= 1`, rational `e >= 0`, integer `b >= 0`.
pub fn cmp_power(a: &BigInt, e: &Rational, b: &BigInt) -> std::cmp::Ordering {
    let fa = a.to_f64().map(f64::ln);
    let fb = b.to_f64().map(f64::ln);
    if let (Some(la), Some(lb)) = (fa, fb) {
        let lhs = la * to_f64(e);
        if lb.is_finite() && lhs.is_finite() && (lhs - lb).abs() > 1e-9 * (1.0 + lb.abs()) {
            return lhs.partial_cmp(&lb).unwrap();
        }
    }
    let n = e.numer().to_usize().expect("exponent numerator too large for exact comparison");
    let d = e.denom().to_usize().expect("exponent denominator too large for exact comparison");
    num_traits::pow(a.clone(), n).cmp(&num_traits::pow(b.clone(), d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_rational("0.0000001").unwrap(), ratio(1, 10_000_000));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("2e-3").unwrap(), ratio(1, 500));
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn sqrt_helpers() {
        assert_eq!(rational_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rational_sqrt(&rat(0)), Some(rat(0)));
        assert!(rational_sqrt(&rat(-4)).is_none());
        let up = sqrt_upper(&rat(2), 20);
        assert!(&up * &up >= rat(2));
        assert!(up < ratio(14143, 10000));
    }

    #[test]
    fn continued_fraction_reconstruction() {
        let approx = Rational::new(BigInt::from(333_333_333_334i64), BigInt::from(1_000_000_000_000i64));
        assert_eq!(reconstruct(&approx, &BigInt::from(1000)), ratio(1, 3));
        assert_eq!(reconstruct(&ratio(-7, 2), &BigInt::from(10)), ratio(-7, 2));
    }

    #[test]
    fn integer_powers_of_rational_exponents() {
        assert_eq!(ceil_power(1000, &ratio(1, 3)), BigInt::from(10));
        assert_eq!(floor_power(1000, &ratio(1, 3)), BigInt::from(10));
        assert_eq!(ceil_power(1001, &ratio(1, 3)), BigInt::from(11));
        assert_eq!(floor_power(999, &ratio(1, 3)), BigInt::from(9));
        assert_eq!(cmp_power(&BigInt::from(4), &ratio(3, 2), &BigInt::from(8)), std::cmp::Ordering::Equal);
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(mod_inverse(&BigInt::from(-1), &BigInt::from(3)), Some(BigInt::from(2)));
        assert_eq!(mod_inverse(&BigInt::from(6), &BigInt::from(9)), None);
    }
}
