//! Desk-scale counting: largest prime factors of `P(n)`, windowed divisor counts for incomplete
//! norm forms, `Γ_d` counts, and deterministic report emission.

use std::cmp::Ordering;
use std::io::Write;
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::Value;

pub use crate::arith::{factorize, Budget, Factorization};
use crate::arith::{factorize_rough, mul_mod, primes_up_to, reduce_i64, roots_mod_p};
use crate::error::{Error, Result};
use crate::exactalg::multipoly::MultiPoly;
use crate::exactalg::rational::{ceil_power, cmp_power, floor_power, rat, to_f64, Rational};
use crate::identity::IdentityCheck;
use crate::localcount::{rho_v, upoly_mod, DegreeOnePrime, NuBasis, VDivisor};
use crate::quartic::QuarticPoly;

/// Largest `x` accepted by [`lpf_scan`].
pub const SCAN_LIMIT: u64 = 1_000_000;
/// Largest box accepted by the counting routines.
pub const BOX_LIMIT: u64 = 100_000_000;
const SIEVE_LIMIT: u64 = 100_000;
const CHUNK: u64 = 1 << 13;

/// Always `num/den`, also for integers.
pub fn frac(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ser_frac<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&frac(r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    #[serde(serialize_with = "ser_frac")]
    pub c: Rational,
    pub count: u64,
    #[serde(serialize_with = "ser_frac")]
    pub proportion: Rational,
    pub x: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LpfScan {
    pub rows: Vec<ScanRow>,
    pub scanned: u64,
    /// values whose factorisation ran out of budget; they count as failures in every row
    pub undecided: u64,
}

fn abs_value(p: &QuarticPoly, n: u64) -> Result<u128> {
    let n = n as i128;
    let v = p.c.iter().rev().try_fold(1i128, |acc, &c| acc.checked_mul(n)?.checked_add(c as i128));
    v.map(i128::unsigned_abs).ok_or_else(|| Error::TooLarge(format!("P({n}) overflows 128 bits")))
}

/// `P^+(|P(n)|)` for `lo <= n <= hi` (`P^+(1) = 1`); `None` where factorisation was undecided.
pub fn largest_prime_factors(p: &QuarticPoly, lo: u64, hi: u64, budget: Budget) -> Result<Vec<Option<BigUint>>> {
    if lo > hi {
        return Ok(Vec::new());
    }
    let sieve: Vec<(u64, Vec<u64>)> = primes_up_to(SIEVE_LIMIT)
        .into_iter()
        .map(|q| {
            let f: Vec<u64> = p.c.iter().map(|&c| reduce_i64(c, q)).chain([1]).collect();
            (q, roots_mod_p(&f, q))
        })
        .filter(|(_, r)| !r.is_empty())
        .collect();
    let starts: Vec<u64> = (lo..=hi).step_by(CHUNK as usize).collect();
    let chunks: Vec<Vec<Option<BigUint>>> = starts
        .par_iter()
        .map(|&start| {
            let end = (start + CHUNK - 1).min(hi);
            let len = (end - start + 1) as usize;
            let mut vals: Vec<u128> = (start..=end).map(|n| abs_value(p, n)).collect::<Result<_>>()?;
            let mut big = vec![1u64; len];
            for (q, roots) in &sieve {
                for &r in roots {
                    let off = (r + q - start % q) % q;
                    let mut i = off as usize;
                    while i < len {
                        let v = &mut vals[i];
                        if *v != 0 {
                            while *v % (*q as u128) == 0 {
                                *v /= *q as u128;
                                big[i] = *q;
                            }
                        }
                        i += *q as usize;
                    }
                }
            }
            let limit_sq = (SIEVE_LIMIT as u128) * (SIEVE_LIMIT as u128);
            vals.iter()
                .zip(&big)
                .map(|(&m, &b)| {
                    if m < limit_sq {
                        return Ok(Some(BigUint::from(m.max(b as u128))));
                    }
                    match factorize_rough(&BigUint::from(m), budget) {
                        Ok(f) => Ok(f.largest().cloned()),
                        Err(Error::Undecided(_)) => Ok(None),
                        Err(e) => Err(e),
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// For `n` in `(x, 2x]`, the share of `n` with `P^+(P(n)) >= x^{1+c}` for each `c` (ascending).
pub fn lpf_scan(p: &QuarticPoly, x: u64, c_grid: &[Rational], budget: Budget) -> Result<LpfScan> {
    if x == 0 || x > SCAN_LIMIT {
        return Err(Error::TooLarge(format!("x = {x}; need 1 <= x <= {SCAN_LIMIT}")));
    }
    let mut grid = c_grid.to_vec();
    grid.sort();
    grid.dedup();
    if grid.iter().any(|c| c < &rat(-1)) {
        return Err(Error::Invalid("c must be at least -1".into()));
    }
    let lpf = largest_prime_factors(p, x + 1, 2 * x, budget)?;
    let xb = BigInt::from(x);
    let rows = grid
        .iter()
        .map(|c| {
            let e = Rational::one() + c;
            let count = lpf
                .iter()
                .flatten()
                .filter(|q| cmp_power(&xb, &e, &BigInt::from((*q).clone())) != Ordering::Greater)
                .count() as u64;
            ScanRow { c: c.clone(), count, proportion: Rational::new(count.into(), x.into()), x }
        })
        .collect();
    Ok(LpfScan { rows, scanned: x, undecided: lpf.iter().filter(|v| v.is_none()).count() as u64 })
}

/// Integer ternary form in `a1, a2, a3`, evaluated in 128-bit arithmetic.
#[derive(Clone, Debug)]
pub struct TernaryForm {
    terms: Vec<([u32; 3], i128)>,
}

impl TernaryForm {
    pub fn new(f: &MultiPoly) -> Result<Self> {
        let names = ["a1", "a2", "a3"];
        let idx: Vec<usize> = f
            .vars()
            .iter()
            .map(|v| names.iter().position(|n| n == v).ok_or_else(|| Error::Invalid(format!("unexpected variable {v}"))))
            .collect::<Result<_>>()?;
        let terms = f
            .terms()
            .map(|(mono, c)| {
                let c = c
                    .is_integer()
                    .then(|| c.to_integer().to_i128())
                    .flatten()
                    .ok_or_else(|| Error::Invalid(format!("coefficient {c} is not a small integer")))?;
                let mut e = [0u32; 3];
                for (k, &d) in mono.iter().enumerate() {
                    e[idx[k]] = d;
                }
                Ok((e, c))
            })
            .collect::<Result<_>>()?;
        Ok(TernaryForm { terms })
    }

    pub fn eval(&self, a: [i64; 3]) -> Option<i128> {
        self.terms.iter().try_fold(0i128, |acc, (e, c)| {
            let mut t = *c;
            for k in 0..3 {
                t = t.checked_mul((a[k] as i128).checked_pow(e[k])?)?;
            }
            acc.checked_add(t)
        })
    }
}

/// Primes `q` with `x^lo <= q <= x^hi`.
pub fn window_primes(x: u64, lo: &Rational, hi: &Rational) -> Result<Vec<u64>> {
    let a = ceil_power(x, lo);
    let b = floor_power(x, hi);
    let b = b.to_u64().filter(|&b| b <= 100_000_000).ok_or_else(|| Error::TooLarge(format!("window up to {b}")))?;
    let a = a.to_u64().unwrap_or(u64::MAX);
    Ok(primes_up_to(b).into_iter().filter(|&q| q >= a).collect())
}

fn box_points(side: &[u64; 3]) -> Result<u64> {
    side.iter()
        .try_fold(1u64, |acc, &s| acc.checked_mul(s))
        .filter(|&n| n <= BOX_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("box {side:?} exceeds {BOX_LIMIT} points")))
}

fn class_index(a: [i64; 3], m: u64) -> usize {
    let m = m as i64;
    a.iter().fold(0usize, |acc, &v| acc * m as usize + v.rem_euclid(m) as usize)
}

fn point_at(corner: &[i64; 3], side: &[u64; 3], k: u64) -> [i64; 3] {
    let i3 = k % side[2];
    let i2 = (k / side[2]) % side[1];
    let i1 = k / (side[1] * side[2]);
    [corner[0] + i1 as i64, corner[1] + i2 as i64, corner[2] + i3 as i64]
}

/// One instance of the windowed divisor count.
#[derive(Clone, Debug)]
pub struct DistriNormInstance {
    /// norm form `N(a1 ν1 + a2 ν2 + a3 ν3)`
    pub norm: MultiPoly,
    pub f: MultiPoly,
    pub df: u64,
    pub corner: [i64; 3],
    pub side: [u64; 3],
    pub x: u64,
    pub windows: Vec<(Rational, Rational)>,
    pub p_window: (Rational, Rational),
    pub m: u64,
    pub u0: [i64; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeCount {
    pub p: u64,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistriNormCounts {
    pub total: u64,
    pub u0_count: u64,
    pub window_primes: Vec<Vec<u64>>,
    pub p_primes: Vec<u64>,
    /// `|A(u0, m, p)|` per `p`
    pub per_p: Vec<PrimeCount>,
    /// `sum_p sum_{q_i} |A_{q_1 ... q_l}(u0, m, p)|` by divisibility per tuple
    pub weighted_by_divisors: u64,
    /// the same sum recounted from the factorisation of each norm
    pub weighted_by_factorization: u64,
    /// counted points whose norm has two primes from one window
    pub repeated_window_points: u64,
    pub main_term: String,
    pub identities: Vec<IdentityCheck>,
}

struct PointData {
    class: usize,
    norm: i128,
    fval: i128,
}

fn phi(n: u64) -> u64 {
    crate::arith::factorize_u64(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Exact counts of the sets `A`, `A(u0, m, p)`, `A_d(u0, m, p)` in a box, with partition identities.
pub fn distrinorm_count(inst: &DistriNormInstance, budget: Budget) -> Result<DistriNormCounts> {
    let npts = box_points(&inst.side)?;
    if inst.corner.iter().any(|&c| c < 1) {
        return Err(Error::Invalid("box corner must be positive".into()));
    }
    if inst.m == 0 || inst.m > 100 || inst.df == 0 {
        return Err(Error::Invalid("need 1 <= m <= 100 and D_f >= 1".into()));
    }
    let norm = TernaryForm::new(&inst.norm)?;
    let f = TernaryForm::new(&inst.f)?;
    let wp: Vec<Vec<u64>> = inst.windows.iter().map(|(lo, hi)| window_primes(inst.x, lo, hi)).collect::<Result<_>>()?;
    let pp: Vec<u64> = window_primes(inst.x, &inst.p_window.0, &inst.p_window.1)?
        .into_iter()
        .filter(|p| p % inst.df == 1 % inst.df)
        .collect();
    let tuples: u64 = wp.iter().map(|w| w.len() as u64).product();
    if tuples.saturating_mul(pp.len() as u64).saturating_mul(npts) > 20 * BOX_LIMIT {
        return Err(Error::TooLarge("too many divisor tuples".into()));
    }
    let u0_class = class_index(inst.u0, inst.m);
    let pts: Vec<PointData> = (0..npts)
        .into_par_iter()
        .map(|k| {
            let a = point_at(&inst.corner, &inst.side, k);
            let overflow = || Error::TooLarge(format!("form value at {a:?} overflows 128 bits"));
            Ok(PointData { class: class_index(a, inst.m), norm: norm.eval(a).ok_or_else(overflow)?, fval: f.eval(a).ok_or_else(overflow)? })
        })
        .collect::<Result<_>>()?;

    let classes = (inst.m as usize).pow(3);
    let mut class_counts = vec![0u64; classes];
    for pt in &pts {
        class_counts[pt.class] += 1;
    }
    let mut identities = vec![IdentityCheck::new("sum over residue classes of |A(u, m)| = |A|", class_counts.iter().sum::<u64>() == npts)];
    let shifted = [inst.u0[0] + inst.m as i64, inst.u0[1], inst.u0[2] - 2 * inst.m as i64];
    identities.push(IdentityCheck::new("|A(u0 + m v, m)| = |A(u0, m)|", class_counts[class_index(shifted, inst.m)] == class_counts[u0_class]));

    let mut per_p = Vec::new();
    let mut partition_ok = true;
    for &p in &pp {
        let hits: Vec<&PointData> = pts.iter().filter(|pt| pt.fval % p as i128 == 0).collect();
        let mut by_class = vec![0u64; classes];
        for pt in &hits {
            by_class[pt.class] += 1;
        }
        partition_ok &= by_class.iter().sum::<u64>() == hits.len() as u64;
        per_p.push(PrimeCount { p, count: by_class[u0_class] });
    }
    identities.push(IdentityCheck::new("sum over residue classes of |A(u, m, p)| = |A(1, 1, p)|", partition_ok));

    let in_u0: Vec<&PointData> = pts.iter().filter(|pt| pt.class == u0_class).collect();
    let mut divisor_tuples: Vec<i128> = vec![1];
    for w in &wp {
        divisor_tuples = divisor_tuples.iter().flat_map(|d| w.iter().map(move |&q| d * q as i128)).collect();
    }
    let by_div: u64 = pp
        .par_iter()
        .map(|&p| {
            in_u0
                .iter()
                .filter(|pt| pt.fval % p as i128 == 0)
                .map(|pt| divisor_tuples.iter().filter(|&&d| pt.norm % d == 0).count() as u64)
                .sum::<u64>()
        })
        .sum();
    let recount: Vec<(u64, bool)> = in_u0
        .par_iter()
        .map(|pt| {
            let ps = pp.iter().filter(|&&p| pt.fval % p as i128 == 0).count() as u64;
            if ps == 0 || wp.is_empty() {
                return Ok((ps, false));
            }
            let fac = factorize(&BigUint::from(pt.norm.unsigned_abs()), budget)?;
            let primes: Vec<u64> = fac.primes().filter_map(|q| q.to_u64()).collect();
            let per_window: Vec<u64> = wp.iter().map(|w| primes.iter().filter(|q| w.binary_search(q).is_ok()).count() as u64).collect();
            let weight: u64 = per_window.iter().product();
            Ok((ps * weight, weight > 0 && per_window.iter().any(|&c| c > 1)))
        })
        .collect::<Result<_>>()?;
    let by_fac: u64 = recount.iter().map(|r| r.0).sum();
    let repeated = recount.iter().filter(|r| r.1).count() as u64;
    identities.push(IdentityCheck::new("windowed divisor sum by divisibility = recount by factorisation", by_div == by_fac));

    let vol = npts as f64;
    let logs: f64 = inst.windows.iter().map(|(lo, hi)| (to_f64(hi) / to_f64(lo)).ln()).product();
    let tau = (to_f64(&inst.p_window.1) / to_f64(&inst.p_window.0)).ln();
    let main = vol * 2.0 * tau / ((inst.m as f64).powi(3) * phi(inst.df) as f64) * logs;
    Ok(DistriNormCounts {
        total: npts,
        u0_count: class_counts[u0_class],
        window_primes: wp,
        p_primes: pp,
        per_p,
        weighted_by_divisors: by_div,
        weighted_by_factorization: by_fac,
        repeated_window_points: repeated,
        main_term: format!("{main:.6e}"),
        identities,
    })
}

/// `Γ = {a in box : a = u0 mod q}` and `Γ_d = {κ in Γ : d | (κ)}` for `d` a product of degree-one primes.
#[derive(Clone, Debug)]
pub struct GammaInstance {
    pub basis: NuBasis,
    pub corner: [i64; 3],
    pub side: [u64; 3],
    pub u0: [i64; 3],
    pub q: u64,
    /// empty for the unit ideal
    pub d: Vec<DegreeOnePrime>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaCount {
    pub gamma: u64,
    pub gamma_d: u64,
    pub norm_d: u64,
    #[serde(serialize_with = "ser_frac")]
    pub rho_v: Rational,
    #[serde(serialize_with = "ser_frac")]
    pub main_term: Rational,
    #[serde(serialize_with = "ser_frac")]
    pub difference: Rational,
    pub identities: Vec<IdentityCheck>,
}

/// Exact `|Γ_d|` against `ρ_v(d) vol(R) / (q^3 N(d))`.
pub fn gamma_d_count(inst: &GammaInstance) -> Result<GammaCount> {
    let npts = box_points(&inst.side)?;
    if inst.q == 0 || inst.q > 100 {
        return Err(Error::Invalid("need 1 <= q <= 100".into()));
    }
    let mut ps: Vec<u64> = inst.d.iter().map(|d| d.p).collect();
    ps.sort_unstable();
    ps.dedup();
    if ps.len() != inst.d.len() {
        return Err(Error::Invalid("degree-one primes must lie above distinct rational primes".into()));
    }
    let norm_d = ps.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p)).filter(|&n| n <= 1_000_000);
    let norm_d = norm_d.ok_or_else(|| Error::TooLarge("N(d) exceeds 10^6".into()))?;
    if norm_d.gcd(&inst.q) != 1 {
        return Err(Error::Invalid("N(d) and q must be coprime".into()));
    }
    let tests: Vec<(u64, [u64; 3])> = inst
        .d
        .iter()
        .map(|d| {
            let v: Option<Vec<u64>> = inst.basis.nu.iter().map(|u| upoly_mod(u, d.p).map(|f| crate::arith::polymod::eval(&f, d.c, d.p))).collect();
            v.map(|v| (d.p, [v[0], v[1], v[2]])).ok_or_else(|| Error::BadPrime(format!("{} divides a basis denominator", d.p)))
        })
        .collect::<Result<_>>()?;
    let classes = (inst.q as usize).pow(3);
    let counts: Vec<(usize, bool)> = (0..npts)
        .into_par_iter()
        .map(|k| {
            let a = point_at(&inst.corner, &inst.side, k);
            let div = tests.iter().all(|&(p, v)| {
                (0..3).fold(0u64, |acc, i| (acc + mul_mod(reduce_i64(a[i], p), v[i], p)) % p) == 0
            });
            (class_index(a, inst.q), div)
        })
        .collect();
    let mut gamma_cls = vec![0u64; classes];
    let mut gamma_d_cls = vec![0u64; classes];
    let mut gamma_d_all = 0u64;
    for &(c, div) in &counts {
        gamma_cls[c] += 1;
        if div {
            gamma_d_cls[c] += 1;
            gamma_d_all += 1;
        }
    }
    let u0 = class_index(inst.u0, inst.q);
    let mut rho = Ratio::<u64>::one();
    for d in &inst.d {
        rho *= rho_v(&inst.basis, &VDivisor::Prime(d.clone()))?;
    }
    let rho = Rational::new((*rho.numer()).into(), (*rho.denom()).into());
    let denom = Rational::from_integer(BigInt::from(inst.q).pow(3) * norm_d);
    let main = &rho * Rational::from_integer(npts.into()) / denom;
    let gamma_d = gamma_d_cls[u0];
    let identities = vec![
        IdentityCheck::new("sum over u0 mod q of |Γ_d(u0, q)| = |Γ_d(1)|", gamma_d_cls.iter().sum::<u64>() == gamma_d_all),
        IdentityCheck::new("sum over u0 mod q of |Γ(u0, q)| = box size", gamma_cls.iter().sum::<u64>() == npts),
    ];
    Ok(GammaCount {
        gamma: gamma_cls[u0],
        gamma_d,
        norm_d,
        difference: Rational::from_integer(gamma_d.into()) - &main,
        rho_v: rho,
        main_term: main,
        identities,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub poly: String,
    pub seed: u64,
    pub version: String,
}

/// `{meta, rows, identities}` with keys sorted on output.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub rows: Vec<Value>,
    pub identities: Vec<IdentityCheck>,
}

impl Report {
    pub fn new(poly: impl Into<String>, seed: u64) -> Self {
        Report {
            meta: Meta { poly: poly.into(), seed, version: env!("CARGO_PKG_VERSION").into() },
            rows: Vec::new(),
            identities: Vec::new(),
        }
    }

    pub fn push_row<T: Serialize>(&mut self, row: &T) -> Result<()> {
        self.rows.push(serde_json::to_value(row).map_err(|e| Error::Invalid(e.to_string()))?);
        Ok(())
    }

    pub fn all_pass(&self) -> bool {
        self.identities.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

fn csv_cell(v: &Value) -> String {
    let raw = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        _ => v.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

/// Byte-stable rendering; CSV holds the rows only, one column per key in sorted order.
pub fn render_report(r: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let v = serde_json::to_value(r).map_err(|e| Error::Invalid(e.to_string()))?;
            Ok(serde_json::to_string_pretty(&v).map_err(|e| Error::Invalid(e.to_string()))? + "\n")
        }
        Format::Csv => {
            let mut cols: Vec<String> = r.rows.iter().filter_map(Value::as_object).flat_map(|o| o.keys().cloned()).collect();
            cols.sort();
            cols.dedup();
            if cols.is_empty() {
                return Ok(String::new());
            }
            let mut out = cols.join(",") + "\n";
            for row in &r.rows {
                let cells: Vec<String> = cols.iter().map(|c| row.get(c).map(csv_cell).unwrap_or_default()).collect();
                out += &cells.join(",");
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Write to `path`, or to standard output when `path` is `None`.
pub fn emit_report(r: &Report, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render_report(r, format)?;
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
