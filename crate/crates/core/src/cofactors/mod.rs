//! The multiplication matrix `M_α` of `α = a0 + a1 r + a2 r^2 + a3 r^3`, its cofactors `B_ij`,
//! the norm form `N_P`, the forms `q3, R, R0, q`, the Bézout pair `(U, V)` and the residue `k_α`.

pub mod closed_forms;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::ball::{CRat, ComplexBall};
use crate::exactalg::multipoly::MultiPoly;
use crate::exactalg::rational::{from_int, mod_inverse, rat, Rational};
use crate::exactalg::resultant::{cofactor, det_bareiss, resultant, sylvester_matrix, PolyMatrix};
use crate::exactalg::roots::isolate_roots;
use crate::identity::{require_all, IdentityCheck};
use crate::quartic::{quartic_poly, Coeffs, QuarticPoly};

pub const A_VARS: [&str; 4] = ["a0", "a1", "a2", "a3"];

/// Integer coordinates of `α` in the power basis of `r1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlphaVec {
    pub a: [BigInt; 4],
}

impl AlphaVec {
    pub fn new(a0: i64, a1: i64, a2: i64, a3: i64) -> Self {
        AlphaVec { a: [a0, a1, a2, a3].map(BigInt::from) }
    }

    pub fn from_big(a: [BigInt; 4]) -> Self {
        AlphaVec { a }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    pub fn values(&self) -> Vec<(&'static str, Rational)> {
        A_VARS.iter().zip(&self.a).map(|(n, v)| (*n, from_int(v))).collect()
    }

    /// Value of an integral form in the `a_i`.
    pub fn eval(&self, p: &MultiPoly) -> BigInt {
        let v = p.eval(&self.values()).expect("form in a0..a3 only");
        assert!(v.is_integer(), "form is not integral at an integer point");
        v.to_integer()
    }
}

/// Multiplication by `α` in the basis `1, r, r^2, r^3` with symbolic or numeric coefficients.
pub fn mult_matrix_from(c: &[MultiPoly; 4]) -> PolyMatrix {
    let mut cols: Vec<[MultiPoly; 4]> = Vec::with_capacity(4);
    cols.push(A_VARS.map(MultiPoly::var));
    for _ in 1..4 {
        let v = cols.last().unwrap();
        cols.push([
            c[0].mul(&v[3]).neg(),
            v[0].sub(&c[1].mul(&v[3])),
            v[1].sub(&c[2].mul(&v[3])),
            v[2].sub(&c[3].mul(&v[3])),
        ]);
    }
    (0..4).map(|i| (0..4).map(|j| cols[j][i].clone()).collect()).collect()
}

pub fn mult_matrix(c: &Coeffs) -> PolyMatrix {
    mult_matrix_from(&c.map(MultiPoly::int))
}

pub fn mult_matrix_symbolic() -> PolyMatrix {
    mult_matrix_from(&["c0", "c1", "c2", "c3"].map(MultiPoly::var))
}

/// Full array of signed cofactors, `b[i][j]` belonging to entry `(i, j)`.
pub fn cofactor_array(m: &PolyMatrix) -> Result<PolyMatrix> {
    (0..m.len()).map(|i| (0..m.len()).map(|j| cofactor(m, i, j)).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct CofactorSuite {
    pub c: Coeffs,
    pub m: PolyMatrix,
    pub np: MultiPoly,
    /// `b[i][j] = B_{i+1, j+1}`
    pub b: PolyMatrix,
    pub q3: MultiPoly,
    pub r: MultiPoly,
    pub r0: MultiPoly,
    pub q: MultiPoly,
    pub u: MultiPoly,
    pub v: MultiPoly,
    pub tp: Rational,
    /// `s` with closed-form `U = s U`, `V = s V` after specialising the `c_i`
    pub uv_sign: i32,
    pub checks: Vec<IdentityCheck>,
}

impl CofactorSuite {
    /// `B_ij` with 1-based indices.
    pub fn bij(&self, i: usize, j: usize) -> &MultiPoly {
        &self.b[i - 1][j - 1]
    }

    pub fn b13(&self) -> &MultiPoly {
        self.bij(1, 3)
    }

    pub fn b14(&self) -> &MultiPoly {
        self.bij(1, 4)
    }

    pub fn b24(&self) -> &MultiPoly {
        self.bij(2, 4)
    }

    /// `(U1, U0)` with `U = a0 U1 + U0`.
    pub fn u_parts(&self) -> (MultiPoly, MultiPoly) {
        split_a0(&self.u)
    }

    pub fn v_parts(&self) -> (MultiPoly, MultiPoly) {
        split_a0(&self.v)
    }
}

fn split_a0(p: &MultiPoly) -> (MultiPoly, MultiPoly) {
    let mut cs = p.coeffs_in("a0");
    cs.resize(2, MultiPoly::zero());
    (cs[1].clone(), cs[0].clone())
}

/// `(U, V)` of degree at most one in `a0` with `U B13 + V B14 = Res_{a0}(B13, B14)`, read off the
/// last row of the adjugate of the Sylvester matrix.
pub fn bezout_uv(b13: &MultiPoly, b14: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
    if b13.degree_in("a0") != 2 || b14.degree_in("a0") != 2 {
        return Err(Error::BezoutFailure);
    }
    let s = sylvester_matrix(b13, b14, "a0");
    let col = |k: usize| cofactor(&s, k, 3);
    let a0 = MultiPoly::var("a0");
    let u = a0.mul(&col(0)?).add(&col(1)?);
    let v = a0.mul(&col(2)?).add(&col(3)?);
    if u.is_zero() && v.is_zero() {
        return Err(Error::BezoutFailure);
    }
    Ok((u, v))
}

/// Compute every form from the matrix and collect the identity ledger without failing on it.
pub fn compute_suite(c: &Coeffs) -> Result<CofactorSuite> {
    let m = mult_matrix(c);
    let np = det_bareiss(&m)?;
    let b = cofactor_array(&m)?;
    let (b13, b14, b23, b24) = (&b[0][2], &b[0][3], &b[1][2], &b[1][3]);
    let bbn = b24.mul(b13).sub(&b14.mul(b23));
    let q3 = bbn.divexact(&np).map_err(|e| Error::InternalIdentityViolation {
        identity: "B24*B13 - B14*B23 = q3*N_P".into(),
        detail: e.to_string(),
    })?;
    let r = resultant(b14, &np, "a0")?;
    let r0 = resultant(b13, b14, "a0")?;
    let q = r0.divexact(&q3).map_err(|e| Error::InternalIdentityViolation {
        identity: "R0 = q*q3".into(),
        detail: e.to_string(),
    })?;
    let (u, v) = bezout_uv(b13, b14)?;
    let disc = crate::quartic::quartic_discriminant(c);
    if disc.is_zero() {
        return Err(Error::NotSquarefree);
    }
    let tp = Rational::new(BigInt::one(), disc);
    let closed_u = closed_forms::specialize(closed_forms::U, c);
    let uv_sign = if closed_u == u {
        1
    } else if closed_u == u.neg() {
        -1
    } else {
        0
    };
    let mut suite = CofactorSuite { c: *c, m, np, b, q3, r, r0, q, u, v, tp, uv_sign, checks: vec![] };
    suite.checks = suite_identities(&suite);
    Ok(suite)
}

/// Build the suite and fail on the first identity that does not hold.
pub fn build_suite(p: &QuarticPoly) -> Result<CofactorSuite> {
    let suite = compute_suite(&p.c)?;
    require_all(&suite.checks)?;
    Ok(suite)
}

pub fn suite_identities(s: &CofactorSuite) -> Vec<IdentityCheck> {
    let c = &s.c;
    let mut out = Vec::new();
    let n = &s.np;
    let zero = MultiPoly::zero();

    let mut adj_ok = None;
    'outer: for j in 0..4 {
        for k in 0..4 {
            let mut acc = MultiPoly::zero();
            for i in 0..4 {
                acc = acc.add(&s.b[i][j].mul(&s.m[i][k]));
            }
            let expect = if j == k { n.clone() } else { zero.clone() };
            if let Some(d) = acc.first_difference(&expect) {
                adj_ok = Some(format!("entry ({},{}) differs at {d}", j + 1, k + 1));
                break 'outer;
            }
        }
    }
    out.push(match adj_ok {
        None => IdentityCheck::new("adj(M)*M = N_P*I", true),
        Some(d) => IdentityCheck::with_detail("adj(M)*M = N_P*I", false, d),
    });

    let ci = c.map(|x| MultiPoly::int(x));
    let b14 = s.b14();
    out.push(IdentityCheck::poly_eq("B21 = -c0*B14", s.bij(2, 1), &ci[0].mul(b14).neg()));
    out.push(IdentityCheck::poly_eq("B22 = B11 - c1*B14", s.bij(2, 2), &s.bij(1, 1).sub(&ci[1].mul(b14))));
    out.push(IdentityCheck::poly_eq("B23 = B12 - c2*B14", s.bij(2, 3), &s.bij(1, 2).sub(&ci[2].mul(b14))));
    out.push(IdentityCheck::poly_eq("B24 = B13 - c3*B14", s.b24(), &s.b13().sub(&ci[3].mul(b14))));

    let bbn = s.b24().mul(s.b13()).sub(&b14.mul(s.bij(2, 3)));
    out.push(IdentityCheck::poly_eq("B24*B13 - B14*B23 = q3*N_P", &bbn, &s.q3.mul(n)));
    out.push(IdentityCheck::poly_eq("q3 closed form", &s.q3, &closed_forms::specialize(closed_forms::Q3, c)));
    out.push(IdentityCheck::new("q3 independent of a0", !s.q3.contains_var("a0")));
    out.push(IdentityCheck::poly_eq("B13 closed form", s.b13(), &closed_forms::specialize(closed_forms::B13, c)));
    out.push(IdentityCheck::poly_eq("B14 closed form", b14, &closed_forms::specialize(closed_forms::B14, c)));
    out.push(IdentityCheck::poly_eq("q3^2*R = R0^2", &s.q3.mul(&s.q3).mul(&s.r), &s.r0.mul(&s.r0)));
    out.push(IdentityCheck::poly_eq("R0 = q*q3", &s.r0, &s.q.mul(&s.q3)));
    out.push(IdentityCheck::new(
        "q homogeneous of degree 6 in a1,a2,a3",
        !s.q.contains_var("a0") && s.q.homogeneous_degree_in(&["a1", "a2", "a3"]) == Some(6),
    ));
    out.push(IdentityCheck::poly_eq("U*B13 + V*B14 = q*q3", &s.u.mul(s.b13()).add(&s.v.mul(b14)), &s.q.mul(&s.q3)));
    out.push(IdentityCheck::new("deg_a0 U, V <= 1", s.u.degree_in("a0") <= 1 && s.v.degree_in("a0") <= 1));
    let (u1, _) = s.u_parts();
    let (v1, _) = s.v_parts();
    let a2 = MultiPoly::var("a2");
    let a3 = MultiPoly::var("a3");
    out.push(IdentityCheck::poly_eq("a2*U1 + a3*V1 = 0", &a2.mul(&u1).add(&a3.mul(&v1)), &zero));
    let closed_v = closed_forms::specialize(closed_forms::V, c);
    let sign = Rational::from_integer(BigInt::from(s.uv_sign));
    out.push(IdentityCheck::with_detail(
        "U, V closed forms up to a common sign",
        s.uv_sign != 0 && closed_v == s.v.scale(&sign),
        format!("sign {}", s.uv_sign),
    ));
    out.push(IdentityCheck::poly_eq(
        "U1 closed form up to the same sign",
        &u1.scale(&sign),
        &closed_forms::specialize(closed_forms::U1, c),
    ));
    let cong = s.u.mul(n).sub(&s.q.mul(s.b13()));
    out.push(match cong.divexact(b14) {
        Ok(_) => IdentityCheck::new("U*N_P - q*B13 = 0 mod B14", true),
        Err(e) => IdentityCheck::with_detail("U*N_P - q*B13 = 0 mod B14", false, e.to_string()),
    });
    out
}

/// `k ≡ B24(a) B14(a)^{-1} (mod |N_P(a)|)` in `[0, |N_P(a)|)`.
pub fn k_alpha(s: &CofactorSuite, a: &AlphaVec) -> Result<BigInt> {
    let n = a.eval(&s.np).abs();
    if n.is_zero() {
        return Err(Error::NotCoprime("N_P(a) = 0".into()));
    }
    let b14 = a.eval(s.b14());
    if !n.gcd(&b14).is_one() {
        return Err(Error::NotCoprime(format!("gcd(N_P(a), B14(a)) = {}", n.gcd(&b14))));
    }
    if n.is_one() {
        return Ok(BigInt::zero());
    }
    let inv = mod_inverse(&b14, &n).expect("coprime");
    Ok((a.eval(s.b24()) * inv).mod_floor(&n))
}

#[derive(Clone, Debug, Serialize)]
pub struct QProductReport {
    pub samples: usize,
    /// `s` with `q = s * prod (a(r_i) - a(r_j)) / (r_i - r_j)`, `0` if every sample had `q = 0`
    pub sign: i32,
    pub pass: bool,
    pub checks: Vec<IdentityCheck>,
}

fn ball_alpha(r: &ComplexBall, a: &[i64; 3], bits: u32) -> ComplexBall {
    let r2 = r.mul(r).rounded(bits);
    let r3 = r2.mul(r).rounded(bits);
    r.scale(&rat(a[0])).add(&r2.scale(&rat(a[1]))).add(&r3.scale(&rat(a[2]))).rounded(bits)
}

/// Compare `q(a)` and `R(a)` with the product formulas over certified roots at seeded points.
pub fn q_product_check(p: &QuarticPoly, s: &CofactorSuite, samples: usize, seed: u64) -> Result<QProductReport> {
    let (roots, bits) = isolate_roots(&quartic_poly(&p.c, "x"), 160)?;
    let work = bits + 64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diff_inv = Vec::new();
    let mut diff_sq = ComplexBall::from_rational(Rational::one());
    for i in 0..4 {
        for j in i + 1..4 {
            let d = roots[i].sub(&roots[j]);
            diff_sq = diff_sq.mul(&d).mul(&d).rounded(work);
            diff_inv.push(d.recip().ok_or(Error::PrecisionExhausted(bits))?.rounded(work));
        }
    }
    let mut checks = Vec::new();
    checks.push(IdentityCheck::new(
        "t_P = prod 1/(r_i - r_j)^2",
        diff_sq.recip().is_some_and(|b| b.contains(&CRat::real(s.tp.clone()))),
    ));
    let mut sign = 0i32;
    let mut sign_ok = true;
    let mut value_ok = true;
    let mut r_ok = true;
    for k in 0..samples {
        let a: [i64; 3] = if k == 0 { [0, 0, 0] } else { [0; 3].map(|_| rng.gen_range(-12..=12)) };
        let alphas: Vec<ComplexBall> = roots.iter().map(|r| ball_alpha(r, &a, work)).collect();
        let mut prod = ComplexBall::from_rational(Rational::one());
        let mut prod_sq = ComplexBall::from_rational(Rational::one());
        let mut idx = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                let d = alphas[i].sub(&alphas[j]);
                prod = prod.mul(&d).mul(&diff_inv[idx]).rounded(work);
                prod_sq = prod_sq.mul(&d).mul(&d).rounded(work);
                idx += 1;
            }
        }
        let av = AlphaVec::new(0, a[0], a[1], a[2]);
        let qv = from_int(&av.eval(&s.q));
        let rv = from_int(&av.eval(&s.r));
        let plus = prod.contains(&CRat::real(qv.clone()));
        let minus = prod.contains(&CRat::real(-qv.clone()));
        if qv.is_zero() {
            value_ok &= plus;
        } else {
            let here = match (plus, minus) {
                (true, false) => 1,
                (false, true) => -1,
                _ => {
                    value_ok = false;
                    0
                }
            };
            if sign == 0 {
                sign = here;
            } else if here != sign {
                sign_ok = false;
            }
        }
        let disc = s.tp.recip();
        r_ok &= prod_sq.contains(&CRat::real(rv * disc));
    }
    checks.push(IdentityCheck::new("|q(a)| = |prod (a(r_i)-a(r_j))/(r_i-r_j)|", value_ok));
    checks.push(IdentityCheck::with_detail("sign of q against the product is constant", sign_ok, format!("sign {sign}")));
    checks.push(IdentityCheck::new("R(a) * prod (r_i-r_j)^2 = prod (a(r_i)-a(r_j))^2", r_ok));
    let pass = checks.iter().all(|c| c.pass);
    if !pass {
        let bad = checks.iter().find(|c| !c.pass).unwrap();
        return Err(Error::IdentityViolation(bad.name.clone()));
    }
    Ok(QProductReport { samples, sign, pass, checks })
}
