//! Counts modulo primes and prime powers: `Q_p`, roots of `B14` in `a0`, the `N_P`/`B13` link,
//! splitting of `q2`, and the local densities `ρ_P`, `ρ_v`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{self, factorize, inv_mod, is_prime_u64, mul_mod, polymod, reduce_big, roots_mod_p, Budget};
use crate::cofactors::{build_suite, AlphaVec, CofactorSuite};
use crate::error::{Error, Result};
use crate::exactalg::intmat::{hnf, hnf_index, in_lattice};
use crate::exactalg::rational::{from_int, Rational};
use crate::exactalg::{MultiPoly, UPoly};
use crate::normform::{norm_form, verify_normform, NormFieldData};
use crate::quartic::{derived_constants, Constants, QuarticPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeLocalReport {
    pub check: String,
    pub p: u64,
    pub point: Vec<String>,
    pub predicate_value: u64,
    pub brute_force_value: u64,
    pub agree: bool,
}

impl PrimeLocalReport {
    fn new(check: &str, p: u64, point: &[&BigInt], predicate: u64, brute: u64) -> Self {
        PrimeLocalReport {
            check: check.into(),
            p,
            point: point.iter().map(|x| x.to_string()).collect(),
            predicate_value: predicate,
            brute_force_value: brute,
            agree: predicate == brute,
        }
    }
}

/// A prime `(p, θ - c)` of degree one in `Z[θ]`, `m(θ) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeOnePrime {
    pub p: u64,
    pub c: u64,
}

impl DegreeOnePrime {
    pub fn new(m: &UPoly, p: u64, c: i64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::BadPrime(format!("{p} is not prime")));
        }
        let coeffs = upoly_mod(m, p).ok_or_else(|| Error::BadPrime(format!("{p} divides a denominator")))?;
        let c = arith::reduce_i64(c, p);
        if polymod::eval(&coeffs, c, p) != 0 {
            return Err(Error::Invalid(format!("m({c}) is not 0 mod {p}")));
        }
        if reduce_big(&upoly_disc(m), p) == 0 {
            return Err(Error::BadPrime(format!("{p} divides disc(m)")));
        }
        Ok(DegreeOnePrime { p, c })
    }
}

fn upoly_disc(m: &UPoly) -> BigInt {
    crate::exactalg::discriminant(&m.to_multipoly("x")).expect("nonconstant").to_integer()
}

fn rat_mod(r: &Rational, m: u64) -> Option<u64> {
    let d = reduce_big(r.denom(), m);
    let inv = inv_mod(d, m)?;
    Some(mul_mod(reduce_big(r.numer(), m), inv, m))
}

/// Coefficients of `f` mod `m`, or `None` if a denominator is not invertible.
pub fn upoly_mod(f: &UPoly, m: u64) -> Option<Vec<u64>> {
    f.0.iter().map(|c| rat_mod(c, m)).collect()
}

/// Degree-one primes `p <= pmax` of `Z[θ]` with `p ∤ disc(m)`, ordered by `(p, c)`.
pub fn degree_one_primes(m: &UPoly, pmax: u64) -> Vec<DegreeOnePrime> {
    let disc = upoly_disc(m);
    let mut out = Vec::new();
    for p in arith::primes_up_to(pmax) {
        if reduce_big(&disc, p) == 0 {
            continue;
        }
        let Some(coeffs) = upoly_mod(m, p) else { continue };
        out.extend(roots_mod_p(&coeffs, p).into_iter().map(|c| DegreeOnePrime { p, c }));
    }
    out
}

/// Coefficients in `main` of `f` modulo `m` after fixing the other variables; `None` if a
/// denominator is not invertible.
pub fn univariate_mod(f: &MultiPoly, main: &str, fixed: &[(&str, u64)], m: u64) -> Option<Vec<u64>> {
    let vars = f.vars();
    let mut out = vec![0u64; f.degree_in(main) as usize + 1];
    for (mono, coeff) in f.terms() {
        let mut v = rat_mod(coeff, m)?;
        let mut slot = 0;
        for (name, &e) in vars.iter().zip(mono) {
            if name == main {
                slot = e as usize;
            } else {
                let x = fixed.iter().find(|(n, _)| n == name).map(|(_, x)| *x).expect("every variable fixed");
                v = mul_mod(v, arith::pow_mod(x, e as u64, m), m);
            }
        }
        out[slot] = (out[slot] + v) % m;
    }
    Some(out)
}

fn eval_int(f: &MultiPoly, vals: &[(&str, &BigInt)]) -> BigInt {
    let vals: Vec<(&str, Rational)> = vals.iter().map(|(n, v)| (*n, from_int(v))).collect();
    let r = f.eval(&vals).expect("all variables supplied");
    assert!(r.is_integer(), "integral form expected");
    r.to_integer()
}

/// Everything needed for local computations on one `C4`/`D4` quartic.
pub struct LocalContext {
    pub poly: QuarticPoly,
    pub suite: CofactorSuite,
    pub nf: NormFieldData,
    pub consts: Constants,
    /// `2 * 3 * 5 * Disc(P) * D_q2`
    pub bad: BigInt,
}

impl LocalContext {
    pub fn new(poly: QuarticPoly) -> Result<Self> {
        let suite = build_suite(&poly)?;
        let nf = verify_normform(&poly, &suite)?;
        let consts = derived_constants(&poly, None)?.integers();
        let bad = BigInt::from(30) * &poly.disc * &consts.dq2;
        Ok(LocalContext { poly, suite, nf, consts, bad })
    }

    pub fn delta1(&self) -> &BigInt {
        &self.consts.delta1
    }

    /// `p` prime with `p ∤ 2 * 3 * 5 * Disc(P) * D_q2 * a2 * a3`.
    pub fn is_admissible(&self, p: u64, a2: &BigInt, a3: &BigInt) -> bool {
        is_prime_u64(p) && reduce_big(&(&self.bad * a2 * a3), p) != 0
    }

    pub fn theta_poly(&self) -> UPoly {
        UPoly::from_multipoly(&self.nf.theta_minpoly, "x").expect("univariate")
    }

    pub fn nu_basis(&self) -> NuBasis {
        NuBasis {
            m: self.theta_poly(),
            nu: [UPoly::from_ints(&[1]), UPoly::from_ints(&[0, 1]), UPoly::from_multipoly(&self.nf.nu3_in_theta, "x").unwrap()],
        }
    }
}

/// `Q_p(a2, a3)` by enumeration of `a1` against the root criterion `P((a2 - c3 a3)/a3) = 0 mod p`.
pub fn count_qp(ctx: &LocalContext, p: u64, a2: i64, a3: i64) -> Result<PrimeLocalReport> {
    if !is_prime_u64(p) {
        return Err(Error::BadPrime(format!("{p} is not prime")));
    }
    let (b2, b3) = (BigInt::from(a2), BigInt::from(a3));
    if reduce_big(&(&b3 * &ctx.poly.disc), p) == 0 {
        return Err(Error::BadPrime(format!("{p} divides a3 * Disc(P)")));
    }
    if reduce_big(&(BigInt::from(2) * &ctx.poly.disc * &ctx.consts.dq2), p) == 0 {
        return Err(Error::BadPrime(format!("{p} divides 2 * Disc(P) * D_q2")));
    }
    let (r2, r3) = (arith::reduce_i64(a2, p), arith::reduce_i64(a3, p));
    let fixed = [("a2", r2), ("a3", r3)];
    let q1 = univariate_mod(&ctx.nf.q1, "a1", &fixed, p).ok_or_else(|| Error::BadPrime(format!("{p} hits a denominator")))?;
    let q2 = univariate_mod(&ctx.nf.q2, "a1", &fixed, p).ok_or_else(|| Error::BadPrime(format!("{p} hits a denominator")))?;
    let brute = (0..p).filter(|&a1| polymod::eval(&q1, a1, p) == 0 && polymod::eval(&q2, a1, p) == 0).count() as u64;
    let c3 = arith::reduce_i64(ctx.poly.c[3], p);
    let x = mul_mod((r2 + p - mul_mod(c3, r3, p)) % p, inv_mod(r3, p).unwrap(), p);
    let pc: Vec<u64> = ctx.poly.c.iter().map(|&c| arith::reduce_i64(c, p)).chain([1]).collect();
    let predicate = u64::from(polymod::eval(&pc, x, p) == 0);
    Ok(PrimeLocalReport::new("Q_p count", p, &[&b2, &b3], predicate, brute))
}

/// Point `(a1, a2, a3)` with its hypotheses for the `B14` and `N_P` statements.
struct PointData {
    failures: Vec<String>,
}

fn point_hypotheses(ctx: &LocalContext, p: u64, a: [&BigInt; 3]) -> PointData {
    let vals = [("a1", a[0]), ("a2", a[1]), ("a3", a[2])];
    let q = eval_int(&ctx.suite.q, &vals);
    let q3 = eval_int(&ctx.suite.q3, &vals);
    let mut failures = Vec::new();
    if !is_prime_u64(p) {
        failures.push(format!("{p} is prime"));
    }
    if q.is_zero() || reduce_big(&q, p) != 0 {
        failures.push("p | q(a1, a2, a3)".into());
    }
    if !q.is_zero() {
        match factorize(&q.magnitude().clone(), Budget::default()) {
            Ok(f) if f.is_squarefree() => {}
            Ok(_) => failures.push("q(a1, a2, a3) squarefree".into()),
            Err(_) => failures.push("q(a1, a2, a3) squarefree (undecided)".into()),
        }
    }
    if !q.gcd(&q3).is_one() {
        failures.push("gcd(q, q3) = 1".into());
    }
    if reduce_big(&(&ctx.bad * a[1] * a[2]), p) == 0 {
        failures.push("p admissible and p ∤ a2 a3".into());
    }
    PointData { failures }
}

fn b14_in_a0(ctx: &LocalContext, p: u64, a: [&BigInt; 3]) -> Vec<u64> {
    let fixed: Vec<(&str, u64)> = ["a1", "a2", "a3"].into_iter().zip(a).map(|(n, v)| (n, reduce_big(v, p))).collect();
    univariate_mod(ctx.suite.b14(), "a0", &fixed, p).expect("integral form")
}

fn root_count(f: &[u64], p: u64) -> u64 {
    if f.iter().all(|&c| c == 0) {
        p
    } else {
        roots_mod_p(f, p).len() as u64
    }
}

/// Number of `a0 mod p` with `B14 = 0`, against 2 when `p | q1` or `p ∤ c3^2 - 4 t2`, and 1 otherwise.
pub fn b14_roots_mod_p(ctx: &LocalContext, p: u64, a1: &BigInt, a2: &BigInt, a3: &BigInt) -> Result<PrimeLocalReport> {
    let pt = point_hypotheses(ctx, p, [a1, a2, a3]);
    if !pt.failures.is_empty() {
        return Err(Error::HypothesisViolation(pt.failures));
    }
    let brute = root_count(&b14_in_a0(ctx, p, [a1, a2, a3]), p);
    let q1 = eval_int(&ctx.nf.q1, &[("a1", a1), ("a2", a2), ("a3", a3)]);
    let predicate = if reduce_big(&q1, p) == 0 || reduce_big(ctx.delta1(), p) != 0 { 2 } else { 1 };
    Ok(PrimeLocalReport::new("B14 roots", p, &[a1, a2, a3], predicate, brute))
}

/// `(p | N_P(α), p | B13(α))`; reported as `predicate_value = [p | B13]`, `brute_force_value = [p | N_P]`.
pub fn norm_link(ctx: &LocalContext, p: u64, a: &AlphaVec) -> Result<PrimeLocalReport> {
    let [_, a1, a2, a3] = &a.a;
    let mut pt = point_hypotheses(ctx, p, [a1, a2, a3]);
    if reduce_big(&a.eval(ctx.suite.b14()), p) != 0 {
        pt.failures.push("p | B14(a)".into());
    }
    if !pt.failures.is_empty() {
        return Err(Error::HypothesisViolation(pt.failures));
    }
    let n = a.eval(&ctx.suite.np);
    let b13 = a.eval(ctx.suite.b13());
    let refs: Vec<&BigInt> = a.a.iter().collect();
    Ok(PrimeLocalReport::new(
        "N_P/B13 link",
        p,
        &refs,
        u64::from(reduce_big(&b13, p) == 0),
        u64::from(reduce_big(&n, p) == 0),
    ))
}

/// A linear form `x a1 + y a2 + z a3` over `F_p`.
pub type LinearForm = [u64; 3];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Q2Split {
    /// `q2 = scale * l1 * l2 (mod p)` with `l1 <= l2`, each with first nonzero coefficient 1.
    Split { p: u64, scale: u64, l1: LinearForm, l2: LinearForm },
    NonSplit { p: u64 },
}

/// Coefficients of a ternary quadratic form mod p, indexed `[i][j]` for `a_{i+1} a_{j+1}`, `i <= j`.
type QuadForm = [[u64; 3]; 3];

fn quad_form_mod(f: &MultiPoly, p: u64) -> Option<QuadForm> {
    let names = ["a1", "a2", "a3"];
    let mut out = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let exps: Vec<(&str, u32)> =
                if i == j { vec![(names[i], 2)] } else { vec![(names[i], 1), (names[j], 1)] };
            out[i][j] = rat_mod(&f.coeff(&exps), p)?;
        }
    }
    Some(out)
}

fn normalize_form(l: LinearForm, p: u64) -> (u64, LinearForm) {
    let lead = l.iter().copied().find(|&x| x != 0).unwrap_or(1);
    let inv = inv_mod(lead, p).unwrap();
    (lead, l.map(|x| mul_mod(x, inv, p)))
}

fn product_form(l1: &LinearForm, l2: &LinearForm, scale: u64, p: u64) -> QuadForm {
    let mut out = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (i.min(j), i.max(j));
            out[a][b] = (out[a][b] + mul_mod(scale, mul_mod(l1[i], l2[j], p), p)) % p;
        }
    }
    out
}

/// Factor a ternary quadratic form over `F_p` into linear forms, if possible.
fn factor_quadratic(q: &QuadForm, p: u64) -> Option<(u64, LinearForm, LinearForm)> {
    for lead in 0..3 {
        let a = q[lead][lead];
        if a == 0 {
            continue;
        }
        let (o1, o2) = ((lead + 1) % 3, (lead + 2) % 3);
        let coeff = |i: usize, j: usize| q[i.min(j)][i.max(j)];
        // q = a x^2 + x (b1 y + b2 z) + (g11 y^2 + g12 y z + g22 z^2)
        let (b1, b2) = (coeff(lead, o1), coeff(lead, o2));
        let (g11, g12, g22) = (coeff(o1, o1), coeff(o1, o2), coeff(o2, o2));
        let sub = |x: u64, y: u64| (x + p - y) % p;
        let four_a = mul_mod(4, a, p);
        let d11 = sub(mul_mod(b1, b1, p), mul_mod(four_a, g11, p));
        let d12 = sub(mul_mod(2, mul_mod(b1, b2, p), p), mul_mod(four_a, g12, p));
        let d22 = sub(mul_mod(b2, b2, p), mul_mod(four_a, g22, p));
        // need d11 y^2 + d12 y z + d22 z^2 = (u y + v z)^2
        let (u, v) = if d11 != 0 {
            let u = arith::sqrt_mod(d11, p)?;
            (u, mul_mod(d12, inv_mod(mul_mod(2, u, p), p)?, p))
        } else {
            (0, arith::sqrt_mod(d22, p)?)
        };
        if mul_mod(u, u, p) != d11 || mul_mod(2, mul_mod(u, v, p), p) != d12 || mul_mod(v, v, p) != d22 {
            return None;
        }
        // q = (1/(4a)) (2a x + b1 y + b2 z - (u y + v z)) (2a x + b1 y + b2 z + (u y + v z))
        let mut l1 = [0u64; 3];
        let mut l2 = [0u64; 3];
        l1[lead] = mul_mod(2, a, p);
        l2[lead] = l1[lead];
        l1[o1] = sub(b1, u);
        l2[o1] = (b1 + u) % p;
        l1[o2] = sub(b2, v);
        l2[o2] = (b2 + v) % p;
        let (s1, l1) = normalize_form(l1, p);
        let (s2, l2) = normalize_form(l2, p);
        let scale = mul_mod(mul_mod(s1, s2, p), inv_mod(four_a, p)?, p);
        return Some(if l1 <= l2 { (scale, l1, l2) } else { (scale, l2, l1) });
    }
    // all squares vanish: x a1 a2 + y a1 a3 + z a2 a3
    let (x, y, z) = (q[0][1], q[0][2], q[1][2]);
    let pairs: [(u64, LinearForm, LinearForm); 3] = [
        (1, [1, 0, 0], [0, x, y]),
        (1, [0, 0, 1], [y, z, 0]),
        (1, [0, 1, 0], [x, 0, z]),
    ];
    let (zero_z, zero_x, zero_y) = (z == 0, x == 0, y == 0);
    let pick = if zero_z { 0 } else if zero_x { 1 } else if zero_y { 2 } else { return None };
    let (_, l1, l2) = pairs[pick];
    let (s1, l1) = normalize_form(l1, p);
    let (s2, l2) = normalize_form(l2, p);
    let scale = mul_mod(s1, s2, p);
    Some(if l1 <= l2 { (scale, l1, l2) } else { (scale, l2, l1) })
}

/// Factor `q2` into two linear forms modulo `p`.
pub fn q2_split_mod_p(ctx: &LocalContext, p: u64) -> Result<Q2Split> {
    if p == 2 || !is_prime_u64(p) || reduce_big(&ctx.poly.disc, p) == 0 {
        return Err(Error::BadPrime(format!("{p} must be an odd prime not dividing Disc(P)")));
    }
    let q = quad_form_mod(&ctx.nf.q2, p).ok_or_else(|| Error::BadPrime(format!("{p} hits a denominator")))?;
    match factor_quadratic(&q, p) {
        Some((scale, l1, l2)) => {
            if product_form(&l1, &l2, scale, p) != q {
                return Err(Error::InternalIdentityViolation {
                    identity: "q2 = scale * L1 * L2 mod p".into(),
                    detail: format!("p = {p}"),
                });
            }
            Ok(Q2Split::Split { p, scale, l1, l2 })
        }
        None if split_predicted(ctx, p) => {
            Err(Error::TheoryViolation(format!("q2 does not split modulo {p} although p = 1 mod D_q2")))
        }
        None => Ok(Q2Split::NonSplit { p }),
    }
}

fn split_predicted(ctx: &LocalContext, p: u64) -> bool {
    (BigInt::from(p) - 1u32).mod_floor(&ctx.consts.dq2).is_zero()
}

/// Format a linear form such as `a1 - 7*a3` with coefficients lifted to `(-p/2, p/2]`.
pub fn format_linear_form(l: &LinearForm, p: u64) -> String {
    let mut s = String::new();
    for (i, &c) in l.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let v = if c > p / 2 { -((p - c) as i64) } else { c as i64 };
        let var = format!("a{}", i + 1);
        let mag = v.unsigned_abs();
        let body = if mag == 1 { var } else { format!("{mag}*{var}") };
        if s.is_empty() {
            s = if v < 0 { format!("-{body}") } else { body };
        } else {
            s += &format!(" {} {body}", if v < 0 { '-' } else { '+' });
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// `Z[r]/(P)` arithmetic on coordinate vectors in the basis `1, r, r^2, r^3`.
fn mul_in_order(c: &[i64; 4], x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let mut prod = vec![BigInt::zero(); 7];
    for i in 0..4 {
        for j in 0..4 {
            prod[i + j] += &x[i] * &y[j];
        }
    }
    for k in (4..7).rev() {
        let top = std::mem::take(&mut prod[k]);
        for (i, &ci) in c.iter().enumerate() {
            prod[k - 4 + i] -= &top * ci;
        }
    }
    prod.truncate(4);
    prod
}

fn basis_vec(i: usize) -> Vec<BigInt> {
    (0..4).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

/// Ideals of `Z[r1]` for [`rho_p`].
#[derive(Clone, Debug)]
pub enum IdealSpec {
    Principal(AlphaVec),
    DegreeOne(DegreeOnePrime),
    /// product of degree-one primes above pairwise distinct rational primes
    Product(Vec<DegreeOnePrime>),
}

const RHO_P_LIMIT: u64 = 10_000_000;

/// `Z`-module generators of the ideal.
fn ideal_generators(c: &[i64; 4], ideal: &IdealSpec) -> Result<(Vec<Vec<BigInt>>, BigInt)> {
    let prime_gens = |d: &DegreeOnePrime| -> Vec<Vec<BigInt>> {
        let mut g: Vec<Vec<BigInt>> = (0..4).map(|i| basis_vec(i).into_iter().map(|x| x * d.p).collect()).collect();
        let lin = vec![-BigInt::from(d.c), BigInt::one(), BigInt::zero(), BigInt::zero()];
        g.extend((0..4).map(|i| mul_in_order(c, &lin, &basis_vec(i))));
        hnf(&g)
    };
    match ideal {
        IdealSpec::Principal(a) => {
            if a.is_zero() {
                return Err(Error::Invalid("zero ideal".into()));
            }
            let g: Vec<Vec<BigInt>> = (0..4).map(|i| mul_in_order(c, &a.a, &basis_vec(i))).collect();
            let h = hnf(&g);
            let n = hnf_index(&h);
            Ok((h, n))
        }
        IdealSpec::DegreeOne(d) => {
            let h = prime_gens(d);
            let n = hnf_index(&h);
            Ok((h, n))
        }
        IdealSpec::Product(ps) => {
            let mut ps_sorted: Vec<u64> = ps.iter().map(|d| d.p).collect();
            ps_sorted.sort_unstable();
            ps_sorted.dedup();
            if ps_sorted.len() != ps.len() {
                return Err(Error::Invalid("product needs distinct rational primes".into()));
            }
            let mut acc: Vec<Vec<BigInt>> = (0..4).map(basis_vec).collect();
            for d in ps {
                let g = prime_gens(d);
                let prods: Vec<Vec<BigInt>> =
                    acc.iter().flat_map(|x| g.iter().map(|y| mul_in_order(c, x, y)).collect::<Vec<_>>()).collect();
                acc = hnf(&prods);
            }
            let n = hnf_index(&acc);
            Ok((acc, n))
        }
    }
}

/// `#{0 <= n < N(I) : n - r1 ∈ I}`.
pub fn rho_p(p: &QuarticPoly, ideal: &IdealSpec) -> Result<u64> {
    let (h, n) = ideal_generators(&p.c, ideal)?;
    if !n.gcd(&p.disc).is_one() {
        return Err(Error::BadModulus(format!("gcd({n}, Disc(P)) = {}", n.gcd(&p.disc))));
    }
    let nn = n.to_u64().filter(|&v| v <= RHO_P_LIMIT).ok_or_else(|| Error::TooLarge(format!("ideal norm {n}")))?;
    let mut count = 0;
    for k in 0..nn {
        let v = vec![BigInt::from(k), -BigInt::one(), BigInt::zero(), BigInt::zero()];
        if in_lattice(&h, &v) {
            count += 1;
        }
    }
    Ok(count)
}

/// An order `Z[ν1, ν2, ν3]`-type triple `ν_i` given as polynomials in a root `θ` of the monic `m`.
#[derive(Clone, Debug)]
pub struct NuBasis {
    pub m: UPoly,
    pub nu: [UPoly; 3],
}

impl NuBasis {
    /// `[1, θ, θ^2]`.
    pub fn power(m: UPoly) -> Self {
        NuBasis { m, nu: [UPoly::from_ints(&[1]), UPoly::from_ints(&[0, 1]), UPoly::from_ints(&[0, 0, 1])] }
    }

    /// Norm of `a1 ν1 + a2 ν2 + a3 ν3` as a form in `a1, a2, a3`.
    pub fn norm_form(&self) -> Result<MultiPoly> {
        let [n1, n2, n3] = &self.nu;
        if n1.0 != UPoly::from_ints(&[1]).0 {
            // general ν1: Res_x(m, a1 ν1 + a2 ν2 + a3 ν3)
            let x = |u: &UPoly, a: &str| u.to_multipoly("x").mul(&MultiPoly::var(a));
            let elt = x(n1, "a1").add(&x(n2, "a2")).add(&x(n3, "a3"));
            return crate::exactalg::resultant(&self.m.to_multipoly("x"), &elt, "x");
        }
        if n2.0 == UPoly::from_ints(&[0, 1]).0 {
            return norm_form(&self.m, n3);
        }
        let elt = MultiPoly::var("a1")
            .add(&n2.to_multipoly("x").mul(&MultiPoly::var("a2")))
            .add(&n3.to_multipoly("x").mul(&MultiPoly::var("a3")));
        crate::exactalg::resultant(&self.m.to_multipoly("x"), &elt, "x")
    }
}

/// Divisors for [`rho_v`].
#[derive(Clone, Debug)]
pub enum VDivisor {
    Prime(DegreeOnePrime),
    /// degree-one primes above pairwise distinct rational primes
    Product(Vec<DegreeOnePrime>),
    /// `p^k` dividing the norm
    PrimePower { p: u64, k: u32 },
}

/// Enumeration bound on `N(d)^2` pairs `(a2, a3)`.
pub const RHO_V_PAIR_LIMIT: u64 = 100_000_000;

/// Local density `ρ_v(d)`: solutions in the cube `[1, N(d)]^3` divided by `N(d)^2`.
pub fn rho_v(basis: &NuBasis, d: &VDivisor) -> Result<Ratio<u64>> {
    match d {
        VDivisor::Prime(q) => rho_v_primes(basis, std::slice::from_ref(q)),
        VDivisor::Product(qs) => rho_v_primes(basis, qs),
        VDivisor::PrimePower { p, k } => {
            if !is_prime_u64(*p) || *k == 0 || *k > 4 {
                return Err(Error::Invalid(format!("prime power {p}^{k}")));
            }
            let n = p.checked_pow(*k).filter(|n| n.checked_mul(*n).is_some_and(|s| s <= RHO_V_PAIR_LIMIT));
            let n = n.ok_or_else(|| Error::TooLarge(format!("{p}^{k}")))?;
            let count = prime_power_count(basis, *p, *k)?;
            Ok(Ratio::new(count, n * n))
        }
    }
}

fn rho_v_primes(basis: &NuBasis, qs: &[DegreeOnePrime]) -> Result<Ratio<u64>> {
    let mut ps: Vec<u64> = qs.iter().map(|q| q.p).collect();
    ps.sort_unstable();
    ps.dedup();
    if ps.len() != qs.len() || qs.is_empty() {
        return Err(Error::Invalid("need degree-one primes above distinct rational primes".into()));
    }
    let n: u64 = ps.iter().product();
    if n.checked_mul(n).map_or(true, |s| s > RHO_V_PAIR_LIMIT) {
        return Err(Error::TooLarge(format!("N(d) = {n}")));
    }
    // values ν_i(c) mod p for each prime
    let vals: Vec<(u64, [u64; 3])> = qs
        .iter()
        .map(|q| {
            let v: Option<Vec<u64>> = basis.nu.iter().map(|u| upoly_mod(u, q.p).map(|f| polymod::eval(&f, q.c, q.p))).collect();
            v.map(|v| (q.p, [v[0], v[1], v[2]]))
                .ok_or_else(|| Error::BadPrime(format!("{} divides a denominator of the basis", q.p)))
        })
        .collect::<Result<_>>()?;
    let mut count = 0u64;
    for a2 in 1..=n {
        for a3 in 1..=n {
            // a1 solutions in [1, n] = product over primes of solutions mod p (CRT)
            let mut sols = 1u64;
            for &(p, [v1, v2, v3]) in &vals {
                let rest = (mul_mod(a2 % p, v2, p) + mul_mod(a3 % p, v3, p)) % p;
                let s = if v1 != 0 { 1 } else if rest == 0 { p } else { 0 };
                sols *= s;
                if sols == 0 {
                    break;
                }
            }
            count += sols;
        }
    }
    Ok(Ratio::new(count, n * n))
}

/// `#{(x1, x2, x3) mod p^k : p^k | N(x1 ν1 + x2 ν2 + x3 ν3)}`.
pub fn prime_power_count(basis: &NuBasis, p: u64, k: u32) -> Result<u64> {
    let nf = basis.norm_form()?;
    let modulus = p.pow(k);
    // coefficients of the norm form in a1, for each monomial a2^i a3^j
    let deg = nf.degree_in("a1") as usize;
    let mut parts: Vec<Vec<(u32, u32, u64)>> = vec![Vec::new(); deg + 1];
    let vars = nf.vars().to_vec();
    for (mono, coeff) in nf.terms() {
        let c = rat_mod(coeff, modulus).ok_or_else(|| Error::BadPrime(format!("{p} divides a denominator of the norm form")))?;
        let mut e = [0u32; 3];
        for (name, &x) in vars.iter().zip(mono) {
            let idx = ["a1", "a2", "a3"].iter().position(|n| n == name).expect("ternary form");
            e[idx] = x;
        }
        parts[e[0] as usize].push((e[1], e[2], c));
    }
    let mut total = 0u64;
    let mut f = vec![0u64; deg + 1];
    for x2 in 0..modulus {
        for x3 in 0..modulus {
            for (slot, terms) in parts.iter().enumerate() {
                f[slot] = terms.iter().fold(0, |acc, &(i, j, c)| {
                    let t = mul_mod(c, mul_mod(arith::pow_mod(x2, i as u64, modulus), arith::pow_mod(x3, j as u64, modulus), modulus), modulus);
                    (acc + t) % modulus
                });
            }
            total += count_roots_prime_power(&f, p, k);
        }
    }
    Ok(total)
}

/// Number of `x mod p^k` with `f(x) = 0 mod p^k`, by lifting solutions one power at a time.
pub fn count_roots_prime_power(f: &[u64], p: u64, k: u32) -> u64 {
    let modulus = p.pow(k);
    let mut level: Vec<u64> = (0..p).filter(|&x| polymod::eval(f, x, modulus) % p == 0).collect();
    let mut pj = p;
    for _ in 1..k {
        let next = pj * p;
        let mut lifted = Vec::new();
        for &x in &level {
            for t in 0..p {
                let y = x + t * pj;
                if polymod::eval(f, y, modulus) % next == 0 {
                    lifted.push(y);
                }
            }
        }
        level = lifted;
        pj = next;
    }
    level.len() as u64
}

/// Results of the seeded local battery on one quartic.
#[derive(Clone, Debug, Serialize)]
pub struct LocalBattery {
    pub poly: String,
    pub reports: Vec<PrimeLocalReport>,
    pub q2_splits: Vec<Q2Split>,
    pub all_agree: bool,
    pub counts: LocalCounts,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LocalCounts {
    pub qp: usize,
    pub b14: usize,
    pub norm_link: usize,
    pub q2_split: usize,
}

/// `Q_p` over `pairs` seeded `(a2, a3)` and admissible `p <= pmax`; `B14` and `N_P`/`B13` over
/// `points` seeded `(a1, a2, a3)` with `q` squarefree; `q2` splitting for `p <= pmax`.
pub fn local_battery(ctx: &LocalContext, pmax: u64, pairs: usize, points: usize, seed: u64) -> Result<LocalBattery> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = arith::primes_up_to(pmax);
    let mut reports = Vec::new();
    let mut counts = LocalCounts::default();
    for _ in 0..pairs {
        let (a2, a3) = (nonzero(&mut rng, 60), nonzero(&mut rng, 60));
        for &p in &primes {
            if ctx.is_admissible(p, &BigInt::from(a2), &BigInt::from(a3)) {
                reports.push(count_qp(ctx, p, a2, a3)?);
                counts.qp += 1;
            }
        }
    }
    let mut found = 0;
    let mut attempts = 0;
    while found < points && attempts < points * 50 {
        attempts += 1;
        let a = [nonzero(&mut rng, 25), nonzero(&mut rng, 25), nonzero(&mut rng, 25)].map(BigInt::from);
        let vals = [("a1", &a[0]), ("a2", &a[1]), ("a3", &a[2])];
        let q = eval_int(&ctx.suite.q, &vals);
        if q.is_zero() || !q.gcd(&eval_int(&ctx.suite.q3, &vals)).is_one() {
            continue;
        }
        let Ok(fq) = factorize(q.magnitude(), Budget::default()) else { continue };
        if !fq.is_squarefree() {
            continue;
        }
        let ps: Vec<u64> = fq.primes().filter_map(|p: &BigUint| p.to_u64()).filter(|&p| ctx.is_admissible(p, &a[1], &a[2])).collect();
        if ps.is_empty() {
            continue;
        }
        found += 1;
        for p in ps {
            reports.push(b14_roots_mod_p(ctx, p, &a[0], &a[1], &a[2])?);
            counts.b14 += 1;
            let f = b14_in_a0(ctx, p, [&a[0], &a[1], &a[2]]);
            for a0 in roots_mod_p(&f, p) {
                let alpha = AlphaVec::from_big([BigInt::from(a0), a[0].clone(), a[1].clone(), a[2].clone()]);
                reports.push(norm_link(ctx, p, &alpha)?);
                counts.norm_link += 1;
            }
        }
    }
    let mut q2_splits = Vec::new();
    for &p in &primes {
        if p == 2 || reduce_big(&ctx.poly.disc, p) == 0 || reduce_big(&ctx.consts.dq2, p) == 0 {
            continue;
        }
        q2_splits.push(q2_split_mod_p(ctx, p)?);
        counts.q2_split += 1;
    }
    let all_agree = reports.iter().all(|r| r.agree);
    Ok(LocalBattery { poly: ctx.poly.name(), reports, q2_splits, all_agree, counts })
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quartic::QuarticPoly;
    use std::sync::OnceLock;

    fn x4p2() -> &'static LocalContext {
        static CTX: OnceLock<LocalContext> = OnceLock::new();
        CTX.get_or_init(|| LocalContext::new(QuarticPoly::analyze([2, 0, 0, 0]).unwrap()).unwrap())
    }

    #[test]
    fn q5_vanishes_for_x4_plus_2() {
        for a2 in 0..5 {
            let r = count_qp(x4p2(), 5, a2, 1).unwrap();
            assert_eq!((r.predicate_value, r.brute_force_value), (0, 0));
        }
    }

    #[test]
    fn q3_at_one_one() {
        let r = count_qp(x4p2(), 3, 1, 1).unwrap();
        assert_eq!((r.predicate_value, r.brute_force_value), (1, 1));
        assert!(matches!(count_qp(x4p2(), 2, 1, 1), Err(Error::BadPrime(_))));
        assert!(matches!(count_qp(x4p2(), 7, 1, 7), Err(Error::BadPrime(_))));
    }

    #[test]
    fn q2_split_at_17_and_41() {
        match q2_split_mod_p(x4p2(), 17).unwrap() {
            Q2Split::Split { scale, l1, l2, .. } => {
                assert_eq!(scale, 1);
                let mut forms = [format_linear_form(&l1, 17), format_linear_form(&l2, 17)];
                forms.sort();
                assert_eq!(forms, ["a1 + 7*a3".to_string(), "a1 - 7*a3".to_string()]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(q2_split_mod_p(x4p2(), 41).unwrap(), Q2Split::Split { .. }));
        let roots: Vec<u64> = (0..41u64).filter(|x| x * x % 41 == 39).collect();
        assert_eq!(roots, vec![11, 30]);
        // p = 3 is not 1 mod 8 but -2 = 1 is still a square there
        assert!(matches!(q2_split_mod_p(x4p2(), 3).unwrap(), Q2Split::Split { .. }));
        assert!(matches!(q2_split_mod_p(x4p2(), 5).unwrap(), Q2Split::NonSplit { .. }));
    }

    #[test]
    fn rho_p_examples() {
        let p = &x4p2().poly;
        assert_eq!(rho_p(p, &IdealSpec::Principal(AlphaVec::new(1, 1, 0, 0))).unwrap(), 1);
        assert_eq!(rho_p(p, &IdealSpec::Principal(AlphaVec::new(1, 0, 0, 0))).unwrap(), 1);
        assert!(matches!(rho_p(p, &IdealSpec::DegreeOne(DegreeOnePrime { p: 2, c: 0 })), Err(Error::BadModulus(_))));
        let m = UPoly::from_ints(&[2, 0, 0, 0, 1]);
        let primes = degree_one_primes(&m, 20);
        for (i, a) in primes.iter().enumerate() {
            assert_eq!(rho_p(p, &IdealSpec::DegreeOne(a.clone())).unwrap(), 1);
            for b in &primes[i + 1..] {
                if a.p != b.p {
                    assert_eq!(rho_p(p, &IdealSpec::Product(vec![a.clone(), b.clone()])).unwrap(), 1);
                }
            }
        }
    }

    #[test]
    fn rho_v_power_basis_at_three() {
        let basis = NuBasis::power(UPoly::from_ints(&[2, 0, 0, 0, 1]));
        let d = DegreeOnePrime::new(&basis.m, 3, 1).unwrap();
        assert_eq!(rho_v(&basis, &VDivisor::Prime(d)).unwrap(), Ratio::from_integer(1));
        assert!(matches!(rho_v(&basis, &VDivisor::PrimePower { p: 101, k: 2 }), Err(Error::TooLarge(_))));
    }

    #[test]
    fn prime_power_roots_match_enumeration() {
        let f = [18u64, 0, 1]; // x^2 + 18 mod 27 = x^2 - 9
        let brute = (0..27u64).filter(|&x| (x * x + 18) % 27 == 0).count() as u64;
        assert_eq!(count_roots_prime_power(&f, 3, 3), brute);
    }

    #[test]
    fn small_battery_agrees() {
        let b = local_battery(x4p2(), 60, 20, 10, 7).unwrap();
        assert!(b.all_agree, "{:?}", b.reports.iter().find(|r| !r.agree));
        assert!(b.counts.b14 > 0 && b.counts.norm_link > 0);
    }
}
