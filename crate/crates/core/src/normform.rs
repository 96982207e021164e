//! The factorisation `q = q1 q2` and the realisation of `q1` as a norm form
//! `N(a1 + a2 θ + a3 g(θ))` with `θ = r1 + r3` and `g(θ) = r1^2 + r1 r3 + r3^2`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cofactors::CofactorSuite;
use crate::error::{Error, Result};
use crate::exactalg::ball::{CRat, ComplexBall};
use crate::exactalg::multipoly::MultiPoly;
use crate::exactalg::rational::{from_int, reconstruct, Rational};
use crate::exactalg::resultant::{discriminant_in, resultant};
use crate::exactalg::upoly::UPoly;
use crate::identity::IdentityCheck;
use crate::quartic::{check_irreducible, order_roots_with, quartic_poly, Coeffs, PairingField, QuadElem, QuarticPoly};

#[derive(Clone, Debug, Serialize)]
pub struct QSplit {
    pub q1: MultiPoly,
    pub q2: MultiPoly,
    /// whether the `e` branch that divides `q` is the one fixed by the `c1` relation
    pub branch_agrees: bool,
    /// both branches divide `q` (the two candidate `q2` coincide)
    pub branches_coincide: bool,
}

/// `N(a1 + s a2 + (s^2 - e) a3)` over `Q(sqrt d)`.
pub fn q2_from(s: &QuadElem, e: &QuadElem, d: &Rational) -> MultiPoly {
    let u = s.mul(s, d).sub(e);
    let (sb, ub) = (s.conj(), u.conj());
    let rational = |x: QuadElem| {
        debug_assert!(x.y.is_zero());
        x.x
    };
    let coeffs = [
        (vec![2, 0, 0], Rational::one()),
        (vec![1, 1, 0], rational(s.add(&sb))),
        (vec![1, 0, 1], rational(u.add(&ub))),
        (vec![0, 2, 0], rational(s.mul(&sb, d))),
        (vec![0, 1, 1], rational(s.mul(&ub, d).add(&sb.mul(&u, d)))),
        (vec![0, 0, 2], rational(u.mul(&ub, d))),
    ];
    MultiPoly::from_terms(&["a1", "a2", "a3"], coeffs)
}

/// Split `q` by trying both branches of `e` for the fixed branch of `s`.
pub fn split_q(p: &QuarticPoly, suite: &CofactorSuite) -> Result<QSplit> {
    if !p.is_c4_d4() {
        return Err(Error::WrongGaloisClass(p.class().to_string()));
    }
    let pf = p.pairing_field()?;
    let cand = [q2_from(&pf.s, &pf.e, &pf.d), q2_from(&pf.s, &pf.e_alt, &pf.d)];
    let quot: Vec<Option<MultiPoly>> = cand.iter().map(|q2| suite.q.divexact(q2).ok()).collect();
    let pick = match (&quot[0], &quot[1]) {
        (Some(_), _) => 0,
        (None, Some(_)) => 1,
        _ => return Err(Error::SplitFailure),
    };
    let q1 = quot[pick].clone().unwrap();
    if q1.homogeneous_degree_in(&["a1", "a2", "a3"]) != Some(4) {
        return Err(Error::SplitFailure);
    }
    Ok(QSplit {
        q1,
        q2: cand[pick].clone(),
        branch_agrees: pick == 0 || cand[0] == cand[1],
        branches_coincide: cand[0] == cand[1] || (quot[0].is_some() && quot[1].is_some()),
    })
}

/// Degree-6 polynomial whose roots are all `r_i + r_j`, `i < j`.
pub fn pair_sum_sextic(c: &Coeffs) -> Result<UPoly> {
    let py = quartic_poly(c, "y");
    let x_minus_y = MultiPoly::var("x").sub(&MultiPoly::var("y"));
    let pxy = quartic_poly(c, "t").substitute("t", &x_minus_y);
    let res = resultant(&py, &pxy, "y")?;
    let half_x = MultiPoly::var("x").scale(&Rational::new(BigInt::one(), BigInt::from(2)));
    let diag = quartic_poly(c, "t").substitute("t", &half_x).scale(&Rational::from_integer(BigInt::from(16)));
    let sq = res.divexact(&diag).map_err(|_| Error::OrderingInconsistent("diagonal factor does not divide".into()))?;
    let sq = UPoly::from_multipoly(&sq, "x")?;
    sq.sqrt_exact()
        .map(|g| g.monic())
        .ok_or_else(|| Error::OrderingInconsistent("pair-sum resultant is not a square".into()))
}

/// Minimal polynomial of `θ = r1 + r3`: the pair-sum sextic divided by `X^2 + c3 X + t2`.
pub fn theta_minpoly(p: &QuarticPoly) -> Result<UPoly> {
    let o = p.ordered()?;
    let sextic = pair_sum_sextic(&p.c)?;
    let p1 = UPoly::new(vec![from_int(&o.t2), Rational::from_integer(BigInt::from(p.c[3])), Rational::one()]);
    let (quo, rem) = sextic.div_rem(&p1)?;
    if !rem.is_zero() {
        return Err(Error::OrderingInconsistent("X^2 + c3 X + t2 does not divide the pair-sum sextic".into()));
    }
    if quo.degree() != 4 || !quo.0.iter().all(|c| c.is_integer()) {
        return Err(Error::OrderingInconsistent("theta polynomial is not a monic integer quartic".into()));
    }
    let ci: Vec<i64> = quo.0.iter().map(|c| c.to_integer().to_i64().unwrap_or(i64::MAX)).collect();
    if ci.iter().any(|&x| x == i64::MAX) {
        return Err(Error::TooLarge("theta polynomial coefficients".into()));
    }
    check_irreducible(&[ci[0], ci[1], ci[2], ci[3]])?;
    let theta = o.roots[0].add(&o.roots[2]);
    let v = ComplexBall::eval_poly(&quo.0, &theta, o.bits + 32);
    if !v.contains_zero() {
        return Err(Error::OrderingInconsistent("r1 + r3 is not a root of the theta polynomial".into()));
    }
    Ok(quo)
}

fn crossing_pairs(roots: &[ComplexBall; 4], bits: u32) -> Vec<(ComplexBall, ComplexBall)> {
    [(0, 2), (0, 3), (1, 2), (1, 3)]
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (&roots[i], &roots[j]);
            let theta = a.add(b);
            let nu = a.mul(a).add(&a.mul(b)).add(&b.mul(b)).rounded(bits);
            (theta, nu)
        })
        .collect()
}

/// Exact Gaussian elimination on a square complex system, rounding to `bits` as it goes.
fn solve_complex(mut a: Vec<Vec<CRat>>, mut b: Vec<CRat>, bits: u32) -> Option<Vec<CRat>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm_sq().cmp(&a[j][col].norm_sq()))?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col].div(&a[col][col]).round(bits);
            for k in col..n {
                let t = f.mul(&a[col][k]);
                a[row][k] = a[row][k].sub(&t).round(bits);
            }
            let t = f.mul(&b[col]);
            b[row] = b[row].sub(&t).round(bits);
        }
    }
    let mut x = vec![CRat::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row].clone();
        for k in row + 1..n {
            s = s.sub(&a[row][k].mul(&x[k]));
        }
        x[row] = s.div(&a[row][row]).round(bits);
    }
    Some(x)
}

/// `Res_x(m(x), a1 + a2 x + a3 g(x))`.
pub fn norm_form(minpoly: &UPoly, g: &UPoly) -> Result<MultiPoly> {
    let m = minpoly.to_multipoly("x");
    let lin = MultiPoly::var("a1")
        .add(&MultiPoly::var("a2").mul(&MultiPoly::var("x")))
        .add(&MultiPoly::var("a3").mul(&g.to_multipoly("x")));
    resultant(&m, &lin, "x")
}

/// Reconstruct `g` with `g(θ_k) = ν_k` over the four crossing pairs and check `± q1 = N(...)`.
pub fn nu3_over_theta(p: &QuarticPoly, minpoly: &UPoly, q1: &MultiPoly) -> Result<(UPoly, i32)> {
    let mut bits = p.ordered()?.bits.max(128);
    loop {
        let o = order_roots_with(&p.c, bits)?;
        let work = o.bits + 32;
        let pairs = crossing_pairs(&o.roots, work);
        let mat: Vec<Vec<CRat>> = pairs
            .iter()
            .map(|(t, _)| {
                let mut row = vec![CRat::real(Rational::one())];
                for k in 1..4 {
                    let prev: CRat = row[k - 1].clone();
                    row.push(prev.mul(&t.center).round(work));
                }
                row
            })
            .collect();
        let rhs: Vec<CRat> = pairs.iter().map(|(_, n)| n.center.clone()).collect();
        let sol = solve_complex(mat, rhs, work).ok_or_else(|| Error::ReconstructionFailure("singular system".into()))?;
        let max_den = BigInt::one() << (o.bits / 4) as usize;
        let g = UPoly::new(sol.iter().map(|z| reconstruct(&z.re, &max_den)).collect());
        if g.degree() >= 0 {
            let nf = norm_form(minpoly, &g)?;
            let sign = if nf == *q1 {
                Some(1)
            } else if nf == q1.neg() {
                Some(-1)
            } else {
                None
            };
            if let Some(sign) = sign {
                if g.degree() <= 1 {
                    return Err(Error::NormFormViolation("1, θ, ν3 are linearly dependent".into()));
                }
                let consistent = pairs.iter().all(|(t, nu)| {
                    let v = ComplexBall::eval_poly(&g.0, t, work).sub(nu);
                    v.contains_zero()
                });
                if !consistent {
                    return Err(Error::ReconstructionFailure("g(θ_k) misses ν_k".into()));
                }
                return Ok((g, sign));
            }
        }
        if o.bits >= crate::exactalg::roots::MAX_PRECISION_BITS {
            return Err(Error::ReconstructionFailure(format!("no exact match up to {} bits", o.bits)));
        }
        bits = o.bits * 2;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormFieldData {
    pub theta_minpoly: MultiPoly,
    pub nu3_in_theta: MultiPoly,
    pub q1: MultiPoly,
    pub q2: MultiPoly,
    pub sign: i32,
    pub checks: Vec<IdentityCheck>,
}

/// `Δ14 = -q3 h` for the closed form of `h`, together with `h = -((c3^2 - 4 t2) q3 + 4 q2)`.
pub fn delta14_checks(p: &QuarticPoly, suite: &CofactorSuite, q2: &MultiPoly) -> Result<Vec<IdentityCheck>> {
    let d14 = discriminant_in(suite.b14(), "a0")?;
    let closed = crate::cofactors::closed_forms::specialize(crate::cofactors::closed_forms::H, &p.c);
    let o = p.ordered()?;
    let delta1 = BigInt::from(p.c[3]).pow(2u32) - BigInt::from(4) * &o.t2;
    let four = Rational::from_integer(BigInt::from(4));
    let h = suite.q3.scale(&from_int(&delta1)).add(&q2.scale(&four)).neg();
    Ok(vec![
        IdentityCheck::poly_eq("Delta14 = -q3*h", &d14, &suite.q3.mul(&closed).neg()),
        IdentityCheck::poly_eq("h = -((c3^2 - 4*t2)*q3 + 4*q2)", &closed, &h),
    ])
}

/// `(c3^2 - 4 t2) q3 - q2`.
pub fn h_from_q2(p: &QuarticPoly, suite: &CofactorSuite, q2: &MultiPoly) -> Result<MultiPoly> {
    let o = p.ordered()?;
    let delta1 = BigInt::from(p.c[3]).pow(2u32) - BigInt::from(4) * &o.t2;
    Ok(suite.q3.scale(&from_int(&delta1)).sub(q2))
}

/// `Δ14 = -q3 ((c3^2 - 4 t2) q3 - q2)` taken literally; it does not hold in general.
pub fn delta14_literal(p: &QuarticPoly, suite: &CofactorSuite, q2: &MultiPoly) -> Result<IdentityCheck> {
    let d14 = discriminant_in(suite.b14(), "a0")?;
    let h = h_from_q2(p, suite, q2)?;
    Ok(IdentityCheck::poly_eq("Delta14 = -q3*((c3^2 - 4*t2)*q3 - q2)", &d14, &suite.q3.mul(&h).neg()))
}

pub fn verify_normform(p: &QuarticPoly, suite: &CofactorSuite) -> Result<NormFieldData> {
    let split = split_q(p, suite)?;
    let minpoly = theta_minpoly(p)?;
    let (g, sign) = nu3_over_theta(p, &minpoly, &split.q1)?;
    let mut checks = vec![
        IdentityCheck::poly_eq("q1*q2 = q", &split.q1.mul(&split.q2), &suite.q),
        IdentityCheck::new("q1, q2 integral", split.q1.is_integral() && split.q2.is_integral()),
        IdentityCheck::new("q2 branch agrees with the c1 relation", split.branch_agrees),
        IdentityCheck::poly_eq(
            "sign*q1 = Res_x(theta_minpoly, a1 + a2 x + a3 g(x))",
            &split.q1.scale(&Rational::from_integer(BigInt::from(sign))),
            &norm_form(&minpoly, &g)?,
        ),
        IdentityCheck::new("deg g >= 2", g.degree() >= 2),
    ];
    checks.extend(delta14_checks(p, suite, &split.q2)?);
    if let Some(bad) = checks.iter().find(|c| !c.pass) {
        return Err(Error::NormFormViolation(bad.name.clone()));
    }
    Ok(NormFieldData {
        theta_minpoly: minpoly.to_multipoly("x"),
        nu3_in_theta: g.to_multipoly("x"),
        q1: split.q1,
        q2: split.q2,
        sign,
        checks,
    })
}

/// `|q1(0, 1, 0)|`, equal to `|m(0)|` for the theta polynomial `m`.
pub fn q1_at_theta(nf: &NormFieldData) -> BigInt {
    nf.q1
        .eval(&[("a1", Rational::zero()), ("a2", Rational::one()), ("a3", Rational::zero())])
        .expect("q1 in a1..a3")
        .to_integer()
        .abs()
}

/// The pairing field used by the split, exposed for diagnostics.
pub fn pairing_field(p: &QuarticPoly) -> Result<PairingField> {
    p.pairing_field()
}
