//! Monic integer quartics: irreducibility, cubic resolvents, Galois class, canonical root order
//! and the derived constants `t1, t2, Δ1, Δ2, D_q2, q0`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::ball::{CRat, ComplexBall};
use crate::exactalg::multipoly::MultiPoly;
use crate::exactalg::parse::parse_univariate;
use crate::exactalg::rational::{
    from_int, is_rational_square, isqrt_exact, lcm_int, rational_sqrt, to_string_frac, Rational,
};
use crate::exactalg::resultant::discriminant;
use crate::exactalg::roots::isolate_roots;
use crate::exactalg::upoly::{divisors, UPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GaloisClass {
    C4,
    D4,
    V,
    A4,
    S4,
}

impl fmt::Display for GaloisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GaloisClass::C4 => "C4",
            GaloisClass::D4 => "D4",
            GaloisClass::V => "V",
            GaloisClass::A4 => "A4",
            GaloisClass::S4 => "S4",
        };
        f.write_str(s)
    }
}

/// The six reference polynomials `(name, [c0, c1, c2, c3], class)`.
pub const NAMED_QUARTICS: [(&str, [i64; 4], GaloisClass); 6] = [
    ("Phi5", [1, 1, 1, 1], GaloisClass::C4),
    ("X^4-5X^2+5", [5, 0, -5, 0], GaloisClass::C4),
    ("X^4+13X+39", [39, 13, 0, 0], GaloisClass::C4),
    ("X^4+2", [2, 0, 0, 0], GaloisClass::D4),
    ("X^4+3X+3", [3, 3, 0, 0], GaloisClass::D4),
    ("X^4-5X^2+3", [3, 0, -5, 0], GaloisClass::D4),
];

/// Coefficients `[c0, c1, c2, c3]` of `X^4 + c3 X^3 + c2 X^2 + c1 X + c0`.
pub type Coeffs = [i64; 4];

pub fn quartic_poly(c: &Coeffs, var: &str) -> MultiPoly {
    MultiPoly::from_int_coeffs(var, &[c[0], c[1], c[2], c[3], 1])
}

/// Parse `c0,c1,c2,c3` (monic implied), `c0,...,c3,1`, or an expression such as `X^4+2`.
pub fn parse_quartic(s: &str) -> Result<Coeffs> {
    let p = parse_univariate(s, "x")?;
    let mut coeffs = p.univariate_coeffs("x").unwrap_or_default();
    if s.contains(',') && s.split(',').count() == 4 {
        coeffs.resize(4, Rational::zero());
        coeffs.push(Rational::one());
    }
    if coeffs.len() != 5 || !coeffs[4].is_one() {
        return Err(Error::Parse(format!("expected a monic quartic, got {s:?}")));
    }
    let mut out = [0i64; 4];
    for i in 0..4 {
        if !coeffs[i].is_integer() {
            return Err(Error::Parse(format!("non-integer coefficient in {s:?}")));
        }
        out[i] = coeffs[i]
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::Parse("coefficient out of range".into()))?;
    }
    Ok(out)
}

pub fn format_quartic(c: &Coeffs) -> String {
    quartic_poly(c, "X").to_string()
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Integer-root and integer quadratic-factor search; `Err` names the factor found.
pub fn check_irreducible(c: &Coeffs) -> Result<()> {
    let [c0, c1, c2, c3] = c.map(big);
    let p = UPoly::from_ints(&[c[0], c[1], c[2], c[3], 1]);
    if let Some(r) = p.rational_roots().first() {
        return Err(Error::NotIrreducible(format!("rational root {r}")));
    }
    let two = big(2);
    for bb in divisors(&c0) {
        for b in [bb.clone(), -bb] {
            let d = &c0 / &b;
            let mut candidates = Vec::new();
            if d != b {
                let num = &c1 - &b * &c3;
                let den = &d - &b;
                if num.is_multiple_of(&den) {
                    candidates.push(num / den);
                }
            } else if c1 == &b * &c3 {
                // a^2 - c3 a + (c2 - 2b) = 0
                let disc = &c3 * &c3 - 4 * (&c2 - &two * &b);
                if let Some(s) = isqrt_exact(&disc) {
                    for root in [&c3 + &s, &c3 - &s] {
                        if root.is_even() {
                            candidates.push(root / 2);
                        }
                    }
                }
            }
            for a in candidates {
                let cc = &c3 - &a;
                if &a * &cc + &b + &d == c2 && &a * &d + &b * &cc == c1 {
                    return Err(Error::NotIrreducible(format!("(X^2 + {a} X + {b})(X^2 + {cc} X + {d})")));
                }
            }
        }
    }
    Ok(())
}

/// `X^3 - c2 X^2 + (c3 c1 - 4 c0) X - (c3^2 c0 + c1^2 - 4 c2 c0)`, roots `r_i r_j + r_k r_l`.
pub fn resolvent_pairprod(c: &Coeffs) -> MultiPoly {
    let [c0, c1, c2, c3] = *c;
    MultiPoly::from_int_coeffs("x", &[-(c3 * c3 * c0 + c1 * c1 - 4 * c2 * c0), c3 * c1 - 4 * c0, -c2, 1])
}

/// `X^3 - 2c2 X^2 + (c2^2 + c3 c1 - 4c0) X + (c3^2 c0 + c1^2 - c3 c2 c1)`, roots `(r_i + r_j)(r_k + r_l)`.
pub fn resolvent_sumprod(c: &Coeffs) -> MultiPoly {
    let [c0, c1, c2, c3] = *c;
    MultiPoly::from_int_coeffs(
        "x",
        &[c3 * c3 * c0 + c1 * c1 - c3 * c2 * c1, c2 * c2 + c3 * c1 - 4 * c0, -2 * c2, 1],
    )
}

fn cubic_roots(p: &MultiPoly) -> Vec<Rational> {
    UPoly::from_multipoly(p, "x").map(|u| u.rational_roots()).unwrap_or_default()
}

pub fn quartic_discriminant(c: &Coeffs) -> BigInt {
    discriminant(&quartic_poly(c, "x")).expect("degree four").to_integer()
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolventInfo {
    pub poly: MultiPoly,
    pub rational_roots: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisReport {
    pub class: GaloisClass,
    pub resolvent_pairprod: ResolventInfo,
    pub resolvent_sumprod: ResolventInfo,
    pub disc: String,
    pub disc_is_square: bool,
    /// the rational root `t1` of the pair-product resolvent when it is unique
    #[serde(skip)]
    pub t1: Option<BigInt>,
}

/// Classification from the rational-root structure of the pair-product resolvent and the squareness
/// of the discriminant; in the one-root case `C4` iff `(t^2 - 4c0)Δ` and `(c3^2 - 4(c2 - t))Δ` are
/// both rational squares, zero included.
pub fn classify_galois(c: &Coeffs) -> Result<GaloisReport> {
    check_irreducible(c)?;
    let disc = quartic_discriminant(c);
    let r3 = resolvent_pairprod(c);
    let rs = resolvent_sumprod(c);
    let roots3 = cubic_roots(&r3);
    let roots_s = cubic_roots(&rs);
    let disc_q = from_int(&disc);
    let disc_is_square = is_rational_square(&disc_q);
    let mut t1 = None;
    let class = match roots3.len() {
        0 => {
            if disc_is_square {
                GaloisClass::A4
            } else {
                GaloisClass::S4
            }
        }
        1 => {
            let t = roots3[0].clone();
            t1 = Some(t.to_integer());
            let [c0, _, c2, c3] = c.map(|x| Rational::from_integer(big(x)));
            let four = Rational::from_integer(big(4));
            let e_disc = &t * &t - &four * &c0;
            let s_disc = &c3 * &c3 - &four * (&c2 - &t);
            if is_rational_square(&(e_disc * &disc_q)) && is_rational_square(&(s_disc * &disc_q)) {
                GaloisClass::C4
            } else {
                GaloisClass::D4
            }
        }
        _ => GaloisClass::V,
    };
    let info = |p: MultiPoly, r: &[Rational]| ResolventInfo {
        poly: p,
        rational_roots: r.iter().map(to_string_frac).collect(),
    };
    Ok(GaloisReport {
        class,
        resolvent_pairprod: info(r3, &roots3),
        resolvent_sumprod: info(rs, &roots_s),
        disc: disc.to_string(),
        disc_is_square,
        t1,
    })
}

/// `x + y sqrt(D)` with rational `x, y`; conjugation flips the sign of `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElem {
    pub x: Rational,
    pub y: Rational,
}

impl QuadElem {
    pub fn rational(x: Rational) -> Self {
        QuadElem { x, y: Rational::zero() }
    }
    pub fn conj(&self) -> Self {
        QuadElem { x: self.x.clone(), y: -&self.y }
    }
    pub fn add(&self, o: &Self) -> Self {
        QuadElem { x: &self.x + &o.x, y: &self.y + &o.y }
    }
    pub fn sub(&self, o: &Self) -> Self {
        QuadElem { x: &self.x - &o.x, y: &self.y - &o.y }
    }
    pub fn mul(&self, o: &Self, d: &Rational) -> Self {
        QuadElem { x: &self.x * &o.x + &self.y * &o.y * d, y: &self.x * &o.y + &self.y * &o.x }
    }
    pub fn scale(&self, k: &Rational) -> Self {
        QuadElem { x: &self.x * k, y: &self.y * k }
    }
}

/// `sqrt(v)` inside `Q(sqrt(d))` for rational `v`, if it exists there.
fn sqrt_in_field(v: &Rational, d: &Rational) -> Option<QuadElem> {
    if let Some(r) = rational_sqrt(v) {
        return Some(QuadElem::rational(r));
    }
    rational_sqrt(&(v / d)).map(|k| QuadElem { x: Rational::zero(), y: k })
}

/// Exact data of the quadratic subfield attached to the pairing `{r1, r2} | {r3, r4}`:
/// `s = r1 + r2` and `e = r1 r2` in `Q(sqrt(d))`, their conjugates giving `r3 + r4`, `r3 r4`.
#[derive(Clone, Debug)]
pub struct PairingField {
    pub d: Rational,
    pub s: QuadElem,
    pub e: QuadElem,
    /// the conjugate branch `(t1 - sqrt(t1^2 - 4c0)) / 2` relative to `e`
    pub e_alt: QuadElem,
    /// whether the other choice of `e` for the same `s` also satisfies the pairing relation
    pub symmetric: bool,
}

impl PairingField {
    /// Both sign choices for `e` given `s`, the first being the one with `s e' + s' e = -c1`.
    pub fn build(c: &Coeffs, t1: &BigInt, t2: &BigInt) -> Result<Self> {
        let [c0, c1, _, c3] = c.map(|x| Rational::from_integer(big(x)));
        let t1 = from_int(t1);
        let t2 = from_int(t2);
        let four = Rational::from_integer(big(4));
        let half = Rational::new(big(1), big(2));
        let delta1 = &c3 * &c3 - &four * &t2;
        let delta_e = &t1 * &t1 - &four * &c0;
        let d = [&delta1, &delta_e]
            .into_iter()
            .find(|v| !is_rational_square(v))
            .cloned()
            .ok_or(Error::ImpossibleForIrreducible)?;
        let root1 = sqrt_in_field(&delta1, &d)
            .ok_or_else(|| Error::OrderingInconsistent("c3^2 - 4 t2 outside the quadratic field".into()))?;
        let root_e = sqrt_in_field(&delta_e, &d)
            .ok_or_else(|| Error::OrderingInconsistent("t1^2 - 4 c0 outside the quadratic field".into()))?;
        let s = QuadElem::rational(-&c3).add(&root1).scale(&half);
        let e_plus = QuadElem::rational(t1.clone()).add(&root_e).scale(&half);
        let e_minus = QuadElem::rational(t1).sub(&root_e).scale(&half);
        let relation = |e: &QuadElem| {
            let v = s.mul(&e.conj(), &d).add(&s.conj().mul(e, &d));
            v.y.is_zero() && v.x == -&c1
        };
        let (ok_p, ok_m) = (relation(&e_plus), relation(&e_minus));
        let (e, e_alt) = match (ok_p, ok_m) {
            (true, _) => (e_plus, e_minus),
            (false, true) => (e_minus, e_plus),
            _ => return Err(Error::OrderingInconsistent("no pairing of s and e reproduces c1".into())),
        };
        Ok(PairingField { d, s, e, e_alt, symmetric: ok_p && ok_m })
    }

    /// `u = s^2 - e = r1^2 + r1 r2 + r2^2`.
    pub fn u(&self) -> QuadElem {
        self.s.mul(&self.s, &self.d).sub(&self.e)
    }
}

/// Canonically ordered, certified roots with `r1 r2 + r3 r4 = t1`.
#[derive(Clone, Debug)]
pub struct OrderedRoots {
    pub roots: [ComplexBall; 4],
    pub t1: BigInt,
    pub t2: BigInt,
    pub bits: u32,
}

fn cmp_balls(a: &ComplexBall, b: &ComplexBall) -> Ordering {
    let s = &a.radius + &b.radius;
    let dre = &a.center.re - &b.center.re;
    if dre.abs() > s {
        return dre.cmp(&Rational::zero());
    }
    (&a.center.im).cmp(&b.center.im)
}

/// Certified pairing: exactly one of the three pairings has `r_i r_j + r_k r_l` enclosing `t1`.
pub fn order_roots(c: &Coeffs) -> Result<OrderedRoots> {
    order_roots_with(c, 128)
}

pub fn order_roots_with(c: &Coeffs, start_bits: u32) -> Result<OrderedRoots> {
    let report = classify_galois(c)?;
    if !matches!(report.class, GaloisClass::C4 | GaloisClass::D4) {
        return Err(Error::WrongGaloisClass(report.class.to_string()));
    }
    let t1 = report.t1.clone().expect("unique resolvent root");
    let t2 = big(c[2]) - &t1;
    let t1q = CRat::real(from_int(&t1));
    let t2q = CRat::real(from_int(&t2));
    let p = quartic_poly(c, "x");
    let mut bits = start_bits;
    loop {
        let (mut roots, used) = isolate_roots(&p, bits)?;
        roots.sort_by(cmp_balls);
        let work = used + 32;
        let pairings = [[0usize, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
        let value = |q: &[usize; 4]| {
            roots[q[0]].mul(&roots[q[1]]).add(&roots[q[2]].mul(&roots[q[3]])).rounded(work)
        };
        let hits: Vec<&[usize; 4]> = pairings.iter().filter(|q| value(q).contains(&t1q)).collect();
        if hits.len() == 1 {
            let q = hits[0];
            let ordered = [roots[q[0]].clone(), roots[q[1]].clone(), roots[q[2]].clone(), roots[q[3]].clone()];
            let sp = ordered[0].add(&ordered[1]).mul(&ordered[2].add(&ordered[3]));
            if !sp.contains(&t2q) {
                return Err(Error::OrderingInconsistent("(r1+r2)(r3+r4) does not enclose t2".into()));
            }
            let rs = UPoly::from_multipoly(&resolvent_sumprod(c), "x")?;
            if !rs.eval(&from_int(&t2)).is_zero() {
                return Err(Error::OrderingInconsistent("t2 is not a root of the sum-product resolvent".into()));
            }
            return Ok(OrderedRoots { roots: ordered, t1, t2, bits: used });
        }
        if used >= crate::exactalg::roots::MAX_PRECISION_BITS {
            return Err(Error::PrecisionExhausted(used));
        }
        bits = used * 2;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivedConstants {
    /// `512 (1 + c3^2 + |c2| + |t1| + |t2|) δ_P Disc(P)` with the supplied or default `δ_P`
    pub q0_upper: String,
    pub delta_p: String,
    pub delta_p_is_default: bool,
    pub dq2: String,
    pub delta1: String,
    pub delta2: String,
    /// `X^2 + c3 X + t2`
    pub p1: MultiPoly,
    /// quadratic with roots `r1^2 + r1 r2 + r2^2`, `r3^2 + r3 r4 + r4^2`
    pub p2: MultiPoly,
}

/// Full analysis of one quartic.
#[derive(Clone, Debug)]
pub struct QuarticPoly {
    pub c: Coeffs,
    pub disc: BigInt,
    pub galois: GaloisReport,
    pub ordered: Option<OrderedRoots>,
}

impl QuarticPoly {
    pub fn analyze(c: Coeffs) -> Result<Self> {
        let galois = classify_galois(&c)?;
        let disc = quartic_discriminant(&c);
        if disc.is_zero() {
            return Err(Error::NotSquarefree);
        }
        let ordered = match galois.class {
            GaloisClass::C4 | GaloisClass::D4 => Some(order_roots(&c)?),
            _ => None,
        };
        Ok(QuarticPoly { c, disc, galois, ordered })
    }

    pub fn class(&self) -> GaloisClass {
        self.galois.class
    }

    pub fn is_c4_d4(&self) -> bool {
        self.ordered.is_some()
    }

    pub fn poly(&self, var: &str) -> MultiPoly {
        quartic_poly(&self.c, var)
    }

    pub fn ordered(&self) -> Result<&OrderedRoots> {
        self.ordered.as_ref().ok_or_else(|| Error::WrongGaloisClass(self.class().to_string()))
    }

    pub fn t1(&self) -> Option<&BigInt> {
        self.ordered.as_ref().map(|o| &o.t1)
    }

    pub fn t2(&self) -> Option<&BigInt> {
        self.ordered.as_ref().map(|o| &o.t2)
    }

    pub fn pairing_field(&self) -> Result<PairingField> {
        let o = self.ordered()?;
        PairingField::build(&self.c, &o.t1, &o.t2)
    }

    pub fn name(&self) -> String {
        format_quartic(&self.c)
    }
}

/// `count` distinct irreducible quartics with `|c_i| <= bound`, reproducible from `seed`.
pub fn random_irreducible_quartics(seed: u64, count: usize, bound: i64) -> Vec<QuarticPoly> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<QuarticPoly> = Vec::with_capacity(count);
    while out.len() < count {
        let c: Coeffs = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        if out.iter().any(|p| p.c == c) {
            continue;
        }
        if let Ok(p) = QuarticPoly::analyze(c) {
            out.push(p);
        }
    }
    out
}

/// `q0`, `D_q2`, `Δ1`, `Δ2` and the quadratics `P1`, `P2`.
pub fn derived_constants(p: &QuarticPoly, delta_p: Option<&BigInt>) -> Result<DerivedConstants> {
    let o = p.ordered()?;
    let pf = p.pairing_field()?;
    let u = pf.u();
    let sum = u.add(&u.conj());
    let prod = u.mul(&u.conj(), &pf.d);
    if !sum.y.is_zero() || !prod.y.is_zero() || !sum.x.is_integer() || !prod.x.is_integer() {
        return Err(Error::OrderingInconsistent("P2 is not an integer polynomial".into()));
    }
    let p2 = MultiPoly::from_coeffs("x", &[prod.x.clone(), -sum.x.clone(), Rational::one()]);
    let delta2 = (&sum.x * &sum.x - Rational::from_integer(big(4)) * &prod.x).to_integer();
    let [_, _, c2, c3] = p.c.map(big);
    let delta1: BigInt = &c3 * &c3 - big(4) * &o.t2;
    if delta1.is_zero() && delta2.is_zero() {
        return Err(Error::ImpossibleForIrreducible);
    }
    let eight = big(8);
    let dq2 = if !(&delta1 * &delta2).is_zero() {
        lcm_int(&lcm_int(&eight, &delta1), &delta2)
    } else {
        lcm_int(&eight, &(&delta1 + &delta2))
    };
    let default_dp = &p.disc * &p.disc;
    let dp = delta_p.cloned().unwrap_or(default_dp);
    let q0 = big(512) * (big(1) + &c3 * &c3 + c2.abs() + o.t1.abs() + o.t2.abs()) * &dp * &p.disc;
    let p1 = MultiPoly::from_coeffs(
        "x",
        &[from_int(&o.t2), from_int(&c3), Rational::one()],
    );
    Ok(DerivedConstants {
        q0_upper: q0.to_string(),
        delta_p: dp.to_string(),
        delta_p_is_default: delta_p.is_none(),
        dq2: dq2.to_string(),
        delta1: delta1.to_string(),
        delta2: delta2.to_string(),
        p1,
        p2,
    })
}

/// Integer views of the derived constants.
#[derive(Clone, Debug)]
pub struct Constants {
    pub q0: BigInt,
    pub dq2: BigInt,
    pub delta1: BigInt,
    pub delta2: BigInt,
}

impl DerivedConstants {
    pub fn integers(&self) -> Constants {
        Constants {
            q0: self.q0_upper.parse().unwrap(),
            dq2: self.dq2.parse().unwrap(),
            delta1: self.delta1.parse().unwrap(),
            delta2: self.delta2.parse().unwrap(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse_poly;

    #[test]
    fn resolvents_of_examples() {
        assert_eq!(resolvent_pairprod(&[2, 0, 0, 0]), parse_poly("x^3-8x").unwrap());
        assert_eq!(resolvent_pairprod(&[1, 1, 1, 1]), parse_poly("x^3-x^2-3x+2").unwrap());
        assert_eq!(resolvent_pairprod(&[1, 0, -1, 0]), parse_poly("x^3+x^2-4x-4").unwrap());
        assert_eq!(resolvent_sumprod(&[2, 0, 0, 0]), parse_poly("x^3-8x").unwrap());
        assert_eq!(resolvent_sumprod(&[1, 1, 1, 1]), parse_poly("x^3-2x^2-2x+1").unwrap());
        assert_eq!(cubic_roots(&resolvent_pairprod(&[1, 1, 1, 1])), vec![Rational::from_integer(big(2))]);
    }

    #[test]
    fn named_labels() {
        for (name, c, class) in NAMED_QUARTICS {
            assert_eq!(classify_galois(&c).unwrap().class, class, "{name}");
        }
        assert_eq!(classify_galois(&[1, 0, -1, 0]).unwrap().class, GaloisClass::V);
        assert_eq!(classify_galois(&[-1, -1, 0, 0]).unwrap().class, GaloisClass::S4);
        // X^4 + 8X + 12 has group A4
        assert_eq!(classify_galois(&[12, 8, 0, 0]).unwrap().class, GaloisClass::A4);
    }

    #[test]
    fn reducible_inputs_rejected() {
        assert!(matches!(check_irreducible(&[-1, 0, 0, 0]), Err(Error::NotIrreducible(_))));
        // (X^2 + 1)(X^2 + 2)
        assert!(matches!(check_irreducible(&[2, 0, 3, 0]), Err(Error::NotIrreducible(_))));
        // (X^2 + X + 1)(X^2 - X + 1) = X^4 + X^2 + 1, equal constant terms
        assert!(matches!(check_irreducible(&[1, 0, 1, 0]), Err(Error::NotIrreducible(_))));
        assert!(check_irreducible(&[2, 0, 0, 0]).is_ok());
        assert!(matches!(classify_galois(&[0, 0, 0, 1]), Err(Error::NotIrreducible(_))));
    }

    #[test]
    fn ordering_of_x4_plus_2() {
        let o = order_roots(&[2, 0, 0, 0]).unwrap();
        assert_eq!(o.t1, big(0));
        assert_eq!(o.t2, big(0));
        let angle = |b: &ComplexBall| {
            let (re, im) = b.center.to_f64();
            let a = im.atan2(re).to_degrees();
            if a < 0.0 {
                a + 360.0
            } else {
                a
            }
        };
        let mut pair = [angle(&o.roots[0]), angle(&o.roots[1])];
        pair.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((pair[0] - 45.0).abs() < 1e-9 && (pair[1] - 225.0).abs() < 1e-9, "{pair:?}");
    }

    #[test]
    fn phi5_constants() {
        let p = QuarticPoly::analyze([1, 1, 1, 1]).unwrap();
        assert_eq!(p.t1(), Some(&big(2)));
        assert_eq!(p.t2(), Some(&big(-1)));
        let d = derived_constants(&p, None).unwrap();
        assert_eq!(d.delta1, "5");
        assert_eq!(d.p1, parse_poly("x^2+x-1").unwrap());
        assert_eq!(d.delta2, "5");
        assert_eq!(d.dq2, "40");
    }

    #[test]
    fn x4_plus_2_constants() {
        let p = QuarticPoly::analyze([2, 0, 0, 0]).unwrap();
        let d = derived_constants(&p, None).unwrap();
        assert_eq!(d.delta1, "0");
        assert_eq!(d.p2, parse_poly("x^2+2").unwrap());
        assert_eq!(d.delta2, "-8");
        assert_eq!(d.dq2, "8");
        let q0: BigInt = d.q0_upper.parse().unwrap();
        assert!((q0 % 512u32).is_zero());
        assert_eq!(d.q0_upper, (big(512) * big(2048).pow(3u32)).to_string());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_quartic("2,0,0,0").unwrap(), [2, 0, 0, 0]);
        assert_eq!(parse_quartic("X^4+13X+39").unwrap(), [39, 13, 0, 0]);
        assert_eq!(parse_quartic("1,1,1,1,1").unwrap(), [1, 1, 1, 1]);
        assert!(parse_quartic("2X^4+1").is_err());
        assert!(parse_quartic("X^3+1").is_err());
    }

    #[test]
    fn wrong_class_for_ordering() {
        assert!(matches!(order_roots(&[1, 0, -1, 0]), Err(Error::WrongGaloisClass(_))));
    }

    #[test]
    fn random_sample_is_reproducible() {
        let a = random_irreducible_quartics(7, 5, 20);
        let b = random_irreducible_quartics(7, 5, 20);
        assert_eq!(a.iter().map(|p| p.c).collect::<Vec<_>>(), b.iter().map(|p| p.c).collect::<Vec<_>>());
        assert!(a.iter().all(|p| p.c.iter().all(|c| c.abs() <= 20) && check_irreducible(&p.c).is_ok()));
    }
}
