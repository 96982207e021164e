//! The explicit constant system for the set of ideals `J`, the hypotheses of the norm-form
//! counting theorem, and membership tests for `J` and for the friable set `E(δ)`.

use std::collections::BTreeMap;
use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, Budget, Factorization};
use crate::cofactors::AlphaVec;
use crate::error::{Error, Result};
use crate::exactalg::rational::{cmp_power, parse_rational, rat, ratio, to_string_frac, Rational};
use crate::localcount::LocalContext;
use crate::quartic::QuarticPoly;

/// Index pairs `(1,1), ..., (1,6), (2,1)`.
pub const INDEX_SET: [(u8, u8); 7] = [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 1)];

#[derive(Clone, Debug, PartialEq)]
pub struct SieveConfig {
    pub alpha0: Rational,
    pub theta: BTreeMap<(u8, u8), Rational>,
    pub tau: BTreeMap<(u8, u8), Rational>,
    pub theta0: Rational,
    pub x: BigInt,
    pub ell: usize,
    pub ell_prime: usize,
    /// `τ` and `τ'` before the logarithmic rescaling; default `θ21` and `θ21 + τ21`
    pub tau_lo: Rational,
    pub tau_hi: Rational,
    pub delta: Rational,
}

/// On-disk form: every number a decimal or `n/d` string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha0: String,
    pub theta: BTreeMap<String, String>,
    pub tau: BTreeMap<String, String>,
    pub theta0: String,
    #[serde(rename = "X")]
    pub x: String,
    pub ell: usize,
    pub ell_prime: usize,
    #[serde(default)]
    pub tau_lo: Option<String>,
    #[serde(default)]
    pub tau_hi: Option<String>,
    pub delta: String,
}

fn pair_key((i, j): (u8, u8)) -> String {
    format!("{i}{j}")
}

fn parse_key(k: &str) -> Result<(u8, u8)> {
    let digits: String = k.chars().filter(char::is_ascii_digit).collect();
    let err = || Error::Parse(format!("bad index {k:?}; expected one of 11..16, 21"));
    if digits.len() != 2 {
        return Err(err());
    }
    let pair = (digits.as_bytes()[0] - b'0', digits.as_bytes()[1] - b'0');
    INDEX_SET.contains(&pair).then_some(pair).ok_or_else(err)
}

fn parse_table(t: &BTreeMap<String, String>, what: &str) -> Result<BTreeMap<(u8, u8), Rational>> {
    let mut out = BTreeMap::new();
    for (k, v) in t {
        out.insert(parse_key(k)?, parse_rational(v)?);
    }
    if out.len() != INDEX_SET.len() {
        return Err(Error::Parse(format!("{what} needs exactly the seven indices 11..16, 21")));
    }
    Ok(out)
}

impl SieveConfig {
    /// The explicit constants shipped with the tool.
    pub fn explicit() -> Self {
        let d = |s: &str| parse_rational(s).unwrap();
        let theta: BTreeMap<(u8, u8), Rational> = INDEX_SET
            .iter()
            .copied()
            .zip(["0.1398", "0.1401", "0.1402", "0.21", "0.19", "0.1799", "0.001"].map(d))
            .collect();
        let tau = INDEX_SET.iter().map(|&k| (k, d("0.0000001"))).collect();
        let mut cfg = SieveConfig {
            alpha0: d("0.00001"),
            theta,
            tau,
            theta0: d("0.000001"),
            x: BigInt::from(1_000_000),
            ell: 6,
            ell_prime: 3,
            tau_lo: Rational::zero(),
            tau_hi: Rational::zero(),
            delta: d("0.00001"),
        };
        cfg.reset_tau_pair();
        cfg
    }

    fn reset_tau_pair(&mut self) {
        self.tau_lo = self.theta[&(2, 1)].clone();
        self.tau_hi = &self.theta[&(2, 1)] + &self.tau[&(2, 1)];
    }

    pub fn from_file(f: &ConfigFile) -> Result<Self> {
        let theta = parse_table(&f.theta, "theta")?;
        let tau = parse_table(&f.tau, "tau")?;
        let x = parse_rational(&f.x)?;
        if !x.is_integer() || x <= Rational::one() {
            return Err(Error::Parse("X must be an integer > 1".into()));
        }
        let mut cfg = SieveConfig {
            alpha0: parse_rational(&f.alpha0)?,
            theta,
            tau,
            theta0: parse_rational(&f.theta0)?,
            x: x.to_integer(),
            ell: f.ell,
            ell_prime: f.ell_prime,
            tau_lo: Rational::zero(),
            tau_hi: Rational::zero(),
            delta: parse_rational(&f.delta)?,
        };
        cfg.reset_tau_pair();
        if let Some(t) = &f.tau_lo {
            cfg.tau_lo = parse_rational(t)?;
        }
        if let Some(t) = &f.tau_hi {
            cfg.tau_hi = parse_rational(t)?;
        }
        let unit = |r: &Rational| r > &Rational::zero() && r < &Rational::one();
        let all = [&cfg.alpha0, &cfg.theta0].into_iter().chain(cfg.theta.values()).chain(cfg.tau.values());
        if !all.into_iter().all(unit) {
            return Err(Error::Invalid("alpha0, theta0, theta and tau must lie in (0, 1)".into()));
        }
        Ok(cfg)
    }

    pub fn to_file(&self) -> ConfigFile {
        let table = |m: &BTreeMap<(u8, u8), Rational>| m.iter().map(|(k, v)| (pair_key(*k), decimal(v))).collect();
        ConfigFile {
            alpha0: decimal(&self.alpha0),
            theta: table(&self.theta),
            tau: table(&self.tau),
            theta0: decimal(&self.theta0),
            x: self.x.to_string(),
            ell: self.ell,
            ell_prime: self.ell_prime,
            tau_lo: Some(decimal(&self.tau_lo)),
            tau_hi: Some(decimal(&self.tau_hi)),
            delta: decimal(&self.delta),
        }
    }

    /// Load TOML, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        let file: ConfigFile = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
        } else {
            toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
        };
        Self::from_file(&file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_file()).expect("plain tables serialise")
    }

    pub fn th(&self, i: u8, j: u8) -> &Rational {
        &self.theta[&(i, j)]
    }

    pub fn ta(&self, i: u8, j: u8) -> &Rational {
        &self.tau[&(i, j)]
    }

    /// Replace one named parameter (`alpha0`, `theta11`, `tau21`, ...).
    pub fn with_param(&self, name: &str, value: &Rational) -> Result<Self> {
        let mut c = self.clone();
        match name {
            "alpha0" => c.alpha0 = value.clone(),
            "theta0" => c.theta0 = value.clone(),
            _ => {
                let (table, key) = if let Some(k) = name.strip_prefix("theta") {
                    (&mut c.theta, k)
                } else if let Some(k) = name.strip_prefix("tau") {
                    (&mut c.tau, k)
                } else {
                    return Err(Error::Invalid(format!("unknown parameter {name}")));
                };
                table.insert(parse_key(key)?, value.clone());
            }
        }
        if name.ends_with("21") {
            c.reset_tau_pair();
        }
        Ok(c)
    }
}

/// Shortest exact decimal, or `n/d` when the denominator is not of the form `2^a 5^b`.
pub fn decimal(r: &Rational) -> String {
    let mut d = r.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_even() {
        d /= 2;
        twos += 1;
    }
    while (&d % 5u32).is_zero() {
        d /= 5;
        fives += 1;
    }
    if !d.is_one() {
        return to_string_frac(r);
    }
    let k = twos.max(fives);
    let scaled = (r * Rational::from_integer(num_traits::pow(BigInt::from(10), k))).to_integer();
    if k == 0 {
        return scaled.to_string();
    }
    let neg = scaled.is_negative();
    let digits = format!("{:0>width$}", scaled.abs().to_string(), width = k + 1);
    let (int, frac) = digits.split_at(digits.len() - k);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintResult {
    pub family: String,
    pub name: String,
    pub satisfied: bool,
    #[serde(serialize_with = "ser_rat")]
    pub slack: Rational,
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_string_frac(r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintReport {
    pub constraints: Vec<ConstraintResult>,
    pub all_satisfied: bool,
}

impl ConstraintReport {
    fn new(constraints: Vec<ConstraintResult>) -> Self {
        let all_satisfied = constraints.iter().all(|c| c.satisfied);
        ConstraintReport { constraints, all_satisfied }
    }

    pub fn get(&self, name: &str) -> Option<&ConstraintResult> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn family_ok(&self, family: &str) -> bool {
        self.constraints.iter().filter(|c| c.family == family).all(|c| c.satisfied)
    }

    pub fn failing_families(&self) -> Vec<String> {
        let mut v: Vec<String> = self.constraints.iter().filter(|c| !c.satisfied).map(|c| c.family.clone()).collect();
        v.dedup();
        v
    }
}

/// `lhs < rhs` with slack `rhs - lhs`.
fn less(family: &str, name: String, lhs: &Rational, rhs: &Rational) -> ConstraintResult {
    let slack = rhs - lhs;
    ConstraintResult { family: family.into(), name, satisfied: slack > Rational::zero(), slack }
}

pub const FAMILIES: [&str; 8] =
    ["disjoint", "small", "alpha0", "sum", "large", "window", "theta21-first", "theta21-second"];

/// Every inequality of the constant system, with exact slacks.
pub fn verify_constants(cfg: &SieveConfig) -> ConstraintReport {
    let mut out = Vec::new();
    let mut intervals: Vec<((u8, u8), Rational, Rational)> =
        INDEX_SET.iter().map(|&k| (k, cfg.theta[&k].clone(), &cfg.theta[&k] + &cfg.tau[&k])).collect();
    intervals.sort_by(|a, b| a.1.cmp(&b.1));
    for w in intervals.windows(2) {
        let (k0, _, hi0) = &w[0];
        let (k1, lo1, _) = &w[1];
        out.push(less("disjoint", format!("[theta{0}, theta{0} + tau{0}] before theta{1}", pair_key(*k0), pair_key(*k1)), hi0, lo1));
    }
    let bound = ratio(7, 32);
    let sum_theta1: Rational = (1..=6).map(|j| cfg.th(1, j).clone()).sum();
    let sum_all1: Rational = (1..=6).map(|j| cfg.th(1, j) + cfg.ta(1, j)).sum();
    for j in 1..=6 {
        out.push(less("small", format!("0 < theta1{j}"), &Rational::zero(), cfg.th(1, j)));
        out.push(less("small", format!("theta1{j} + tau1{j} < 7/32"), &(cfg.th(1, j) + cfg.ta(1, j)), &bound));
    }
    out.push(less("alpha0", "alpha0 < 2^-15".into(), &cfg.alpha0, &ratio(1, 32768)));
    let one = Rational::one();
    out.push(less("sum", "sum_j (theta1j + tau1j) < 1 + alpha0/2".into(), &sum_all1, &(&one + &cfg.alpha0 / rat(2))));
    let floor = &one + &cfg.alpha0 - &sum_theta1;
    for &k in &INDEX_SET {
        out.push(less("large", format!("theta{} > 1 + alpha0 - sum_j theta1j", pair_key(k)), &floor, &cfg.theta[&k]));
    }
    let s3: Rational = (1..=3).map(|j| cfg.th(1, j).clone()).sum();
    let t3: Rational = (1..=3).map(|j| cfg.ta(1, j).clone()).sum();
    let two_a = rat(2) + &cfg.alpha0;
    out.push(less("window", "(1 + alpha0)/4 < theta11 + theta12 + theta13".into(), &((&one + &cfg.alpha0) / rat(4)), &s3));
    out.push(less("window", "theta11 + theta12 + theta13 < (2 + alpha0)/4 - tau11 - tau12 - tau13".into(), &s3, &(&two_a / rat(4) - &t3)));
    let t21 = cfg.th(2, 1) + cfg.ta(2, 1);
    out.push(less("theta21-first", "theta21 + tau21 < (2 + alpha0)/200 - sum_{i<=3} (theta1i + tau1i)/50".into(), &t21, &(&two_a / rat(200) - (&s3 + &t3) / rat(50))));
    let rhs = (rat(4) * &s3 / (&one + &cfg.alpha0) - &one) * &two_a / rat(800);
    out.push(less("theta21-second", "theta21 + tau21 < (4(theta11 + theta12 + theta13)/(1 + alpha0) - 1)(2 + alpha0)/800".into(), &t21, &rhs));
    ConstraintReport::new(out)
}

/// A single-parameter change with the constraint family it is expected to break.
#[derive(Clone, Debug, Serialize)]
pub struct Mutation {
    pub param: &'static str,
    pub value: &'static str,
    pub predicted: &'static str,
}

pub const MUTATIONS: [Mutation; 2] = [
    Mutation { param: "theta21", value: "0.002", predicted: "theta21-first" },
    Mutation { param: "alpha0", value: "0.001", predicted: "alpha0" },
];

#[derive(Clone, Debug, Serialize)]
pub struct MutationOutcome {
    pub mutation: Mutation,
    /// families satisfied before and failing after the change
    pub flipped: Vec<String>,
    pub predicted_flips: bool,
    pub only_predicted_flips: bool,
}

pub fn mutation_outcomes(base: &SieveConfig) -> Result<Vec<MutationOutcome>> {
    let before = verify_constants(base);
    MUTATIONS
        .iter()
        .map(|m| {
            let cfg = base.with_param(m.param, &parse_rational(m.value)?)?;
            let after = verify_constants(&cfg);
            let flipped: Vec<String> = FAMILIES
                .iter()
                .filter(|f| before.family_ok(f) && !after.family_ok(f))
                .map(|f| f.to_string())
                .collect();
            Ok(MutationOutcome {
                mutation: m.clone(),
                predicted_flips: flipped.iter().any(|f| f == m.predicted),
                only_predicted_flips: flipped == [m.predicted],
                flipped,
            })
        })
        .collect()
}

/// Inputs of the counting-theorem hypothesis check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistriNormParams {
    #[serde(serialize_with = "ser_rats")]
    pub theta: Vec<Rational>,
    #[serde(serialize_with = "ser_rats")]
    pub theta_prime: Vec<Rational>,
    pub ell_prime: usize,
    #[serde(serialize_with = "ser_rat")]
    pub tau_lo: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub tau_hi: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub delta: Rational,
}

fn ser_rats<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&to_string_frac(r))?;
    }
    seq.end()
}

/// All hypotheses on the windows `[θ_i, θ_i']` and on `τ < τ'`.
pub fn verify_distrinorm_hypotheses(h: &DistriNormParams) -> Result<ConstraintReport> {
    let ell = h.theta.len();
    if h.theta_prime.len() != ell {
        return Err(Error::Invalid("theta and theta' lengths differ".into()));
    }
    if h.delta <= Rational::zero() {
        return Err(Error::Invalid("delta must be positive".into()));
    }
    let d = &h.delta;
    let one = Rational::one();
    let (th, tp) = (&h.theta, &h.theta_prime);
    let mut out = Vec::new();
    for i in 0..ell {
        out.push(less("th-bounds", format!("delta < theta{}", i + 1), d, &th[i]));
        out.push(less("th-bounds", format!("theta{0} < theta{0}'", i + 1), &th[i], &tp[i]));
        out.push(less("th-bounds", format!("theta{}' < 1 - delta", i + 1), &tp[i], &(&one - d)));
    }
    let mut order: Vec<usize> = (0..ell).collect();
    order.sort_by(|&a, &b| th[a].cmp(&th[b]));
    for w in order.windows(2) {
        out.push(less("th-disjoint", format!("theta{}' < theta{}", w[0] + 1, w[1] + 1), &tp[w[0]], &th[w[1]]));
    }
    let sum_p: Rational = tp.iter().sum();
    let sum: Rational = th.iter().sum();
    out.push(less("th-sum", "sum theta_i' < 4 - delta".into(), &sum_p, &(rat(4) - d)));
    for j in 0..ell {
        out.push(less("th-square", format!("theta{} + sum theta_i > 4 + delta", j + 1), &(rat(4) + d), &(&th[j] + &sum)));
    }
    let lp = h.ell_prime;
    if lp == 0 || lp >= ell {
        out.push(ConstraintResult {
            family: "th-split".into(),
            name: format!("1 <= ell' = {lp} < ell = {ell}"),
            satisfied: false,
            slack: Rational::zero(),
        });
    } else {
        let s: Rational = th[..lp].iter().sum();
        let sp: Rational = tp[..lp].iter().sum();
        out.push(less("th-split", format!("1 + delta < sum_(i<={lp}) theta_i"), &(&one + d), &s));
        out.push(less("th-split", format!("sum_(i<={lp}) theta_i < sum_(i<={lp}) theta_i'"), &s, &sp));
        out.push(less("th-split", format!("sum_(i<={lp}) theta_i' < 2 - delta"), &sp, &(rat(2) - d)));
        out.push(less("tau", "0 < tau".into(), &Rational::zero(), &h.tau_lo));
        out.push(less("tau", "tau < tau'".into(), &h.tau_lo, &h.tau_hi));
        let m1 = (rat(4) - rat(2) * &sp) / rat(100);
        let m2 = (&s - &one) / rat(100);
        out.push(less("tau", "tau' < (4 - 2 sum theta_i')/100".into(), &h.tau_hi, &m1));
        out.push(less("tau", "tau' < (sum theta_i - 1)/100".into(), &h.tau_hi, &m2));
    }
    Ok(ConstraintReport::new(out))
}

/// Scale the windows by `s`, taking the first `ell` indices `(1, j)`.
pub fn distrinorm_params(cfg: &SieveConfig, ell: usize, scale: &Rational) -> DistriNormParams {
    let th = (1..=ell as u8).map(|j| cfg.th(1, j) * scale).collect();
    let tp = (1..=ell as u8).map(|j| (cfg.th(1, j) + cfg.ta(1, j)) * scale).collect();
    DistriNormParams {
        theta: th,
        theta_prime: tp,
        ell_prime: cfg.ell_prime,
        tau_lo: &cfg.tau_lo * scale,
        tau_hi: &cfg.tau_hi * scale,
        delta: cfg.delta.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistriNormCheck {
    pub ell: usize,
    /// `4/(1 + alpha0)` and `4/(1 + alpha0/2)`
    pub scale: String,
    pub report: ConstraintReport,
}

/// Hypothesis checks at both ends of the scaling range and for `ell` in `{5, 6}`.
pub fn distrinorm_from_config(cfg: &SieveConfig) -> Result<Vec<DistriNormCheck>> {
    let one = Rational::one();
    let scales = [rat(4) / (&one + &cfg.alpha0), rat(4) / (&one + &cfg.alpha0 / rat(2))];
    let mut out = Vec::new();
    let mut ells = vec![cfg.ell];
    for e in [5, 6] {
        if !ells.contains(&e) {
            ells.push(e);
        }
    }
    for ell in ells {
        for s in &scales {
            let report = verify_distrinorm_hypotheses(&distrinorm_params(cfg, ell, s))?;
            out.push(DistriNormCheck { ell, scale: to_string_frac(s), report });
        }
    }
    Ok(out)
}

/// Three-valued outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    True,
    False,
    Undecided,
}

impl From<bool> for Decision {
    fn from(b: bool) -> Self {
        if b {
            Decision::True
        } else {
            Decision::False
        }
    }
}

impl Decision {
    pub fn and(self, o: Decision) -> Decision {
        match (self, o) {
            (Decision::False, _) | (_, Decision::False) => Decision::False,
            (Decision::Undecided, _) | (_, Decision::Undecided) => Decision::Undecided,
            _ => Decision::True,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionOutcome {
    pub name: String,
    pub outcome: Decision,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub point: Vec<String>,
    pub decision: Decision,
    pub conditions: Vec<ConditionOutcome>,
}

impl MembershipReport {
    pub fn condition(&self, name: &str) -> Option<Decision> {
        self.conditions.iter().find(|c| c.name == name).map(|c| c.outcome)
    }
}

fn in_window(x: &BigInt, lo: &Rational, hi: &Rational, q: &BigUint) -> bool {
    let q = BigInt::from(q.clone());
    cmp_power(x, lo, &q) != Ordering::Greater && cmp_power(x, hi, &q) != Ordering::Less
}

fn factor_or_undecided(n: &BigInt, budget: Budget) -> std::result::Result<Factorization, String> {
    if n.is_zero() {
        return Err("value is 0".into());
    }
    factorize(n.magnitude(), budget).map_err(|e| e.to_string())
}

/// Choose one prime per window (smallest admissible), then require the rest to exceed `q0`.
fn localized_pattern(
    f: &Factorization,
    windows: &[(Rational, Rational)],
    x: &BigInt,
    q0: &BigInt,
    extra: impl Fn(&BigUint) -> bool,
) -> (bool, String) {
    let mut rest: Vec<BigUint> = f.factors.iter().flat_map(|(p, e)| std::iter::repeat(p.clone()).take(*e as usize)).collect();
    let mut chosen = Vec::new();
    for (lo, hi) in windows {
        let pick = rest.iter().position(|p| in_window(x, lo, hi, p) && extra(p));
        match pick {
            Some(i) => chosen.push(rest.remove(i)),
            None => return (false, format!("no prime in [X^{}, X^{}]", to_string_frac(lo), to_string_frac(hi))),
        }
    }
    let q0u = q0.magnitude();
    match rest.iter().find(|p| *p <= q0u) {
        Some(p) => (false, format!("cofactor has prime {p} <= q0")),
        None => (true, format!("window primes {:?}", chosen.iter().map(|p| p.to_string()).collect::<Vec<_>>())),
    }
}

/// Test `(α)` against the five conditions defining `J`; `Undecided` when a factorisation runs out of budget.
pub fn membership_j(ctx: &LocalContext, a: &AlphaVec, cfg: &SieveConfig, budget: Budget) -> MembershipReport {
    let mut conds = Vec::new();
    let mut push = |name: &str, outcome: Decision, detail: Option<String>| {
        conds.push(ConditionOutcome { name: name.into(), outcome, detail });
    };
    let [_, a1, a2, a3] = &a.a;
    let x = &cfg.x;
    let q = a.eval(&ctx.suite.q);
    let q3 = a.eval(&ctx.suite.q3);
    let b14 = a.eval(ctx.suite.b14());
    let n = a.eval(&ctx.suite.np);
    let q1 = a.eval(&ctx.nf.q1);
    let q2 = a.eval(&ctx.nf.q2);
    let q0 = &ctx.consts.q0;

    // (C5)
    let m = |v: &BigInt, md: i64| v.mod_floor(&BigInt::from(md));
    let c5a = a2.gcd(a3) == BigInt::from(30)
        && m(a2, 900) == BigInt::from(30)
        && m(a3, 900) == BigInt::from(30)
        && m(a1, 30).is_one();
    push("C5a", c5a.into(), None);
    push("C5b", n.gcd(q0).is_one().into(), None);
    push("C5c", q.gcd(&q3).is_one().into(), None);
    push("C5d", q.gcd(&b14).is_one().into(), None);
    push("C5e", q.gcd(&(a2 * a3)).is_one().into(), None);

    // (C2)
    let e = |num: i64, den: i64| ratio(num, den);
    let one = Rational::one();
    let size_q = q.is_positive() && cmp_power(x, &e(3, 2), &q) != Ordering::Greater;
    let size_b = cmp_power(x, &e(3, 4), &b14.abs()) != Ordering::Greater;
    let nabs = n.abs();
    let size_n = n.is_positive()
        && cmp_power(x, &(&one + &cfg.alpha0 / rat(2)), &nabs) != Ordering::Greater
        && cmp_power(x, &(&one + &cfg.alpha0), &nabs) != Ordering::Less;
    push("C2", (size_q && size_b && size_n).into(), Some(format!("q >= X^(3/2): {size_q}, |B14| >= X^(3/4): {size_b}, N_P in window: {size_n}")));

    // (C1)
    match factor_or_undecided(&q, budget) {
        Ok(f) => push("C1", f.is_squarefree().into(), None),
        Err(d) => push("C1", if q.is_zero() { Decision::False } else { Decision::Undecided }, Some(d)),
    }

    // (C3): a rational prime p in the window with a degree-one prime above p dividing (α)
    match factor_or_undecided(&n, budget) {
        Ok(f) => {
            let lo = rat(4) * &cfg.alpha0;
            let hi = rat(5) * &cfg.alpha0;
            let witness = f.primes().find(|p| {
                let pb = BigInt::from((*p).clone());
                let above = cmp_power(x, &lo, &pb) == Ordering::Less && cmp_power(x, &hi, &pb) != Ordering::Less;
                above && p.to_u64().is_some_and(|pp| degree_one_divides(&ctx.poly, a, pp))
            });
            push("C3", witness.is_some().into(), witness.map(|p| format!("witness p = {p}")));
        }
        Err(d) => push("C3", if n.is_zero() { Decision::False } else { Decision::Undecided }, Some(d)),
    }

    // (C4)
    let windows1: Vec<(Rational, Rational)> = (1..=6).map(|j| (cfg.th(1, j).clone(), cfg.th(1, j) + cfg.ta(1, j))).collect();
    let window2 = [(cfg.th(2, 1).clone(), cfg.th(2, 1) + cfg.ta(2, 1))];
    let dq2 = ctx.consts.dq2.clone();
    let c4 = match (factor_or_undecided(&q1, budget), factor_or_undecided(&q2, budget)) {
        (Ok(f1), Ok(f2)) => {
            let (ok1, d1) = localized_pattern(&f1, &windows1, x, q0, |_| true);
            let (ok2, d2) = localized_pattern(&f2, &window2, x, q0, |p| (BigInt::from(p.clone()) - 1u32).mod_floor(&dq2).is_zero());
            (Decision::from(ok1 && ok2), format!("q1: {d1}; q2: {d2}"))
        }
        (r1, r2) => {
            let zero = q1.is_zero() || q2.is_zero();
            let msg = [r1.err(), r2.err()].into_iter().flatten().collect::<Vec<_>>().join("; ");
            (if zero { Decision::False } else { Decision::Undecided }, msg)
        }
    };
    push("C4", c4.0, Some(c4.1));

    let decision = conds.iter().fold(Decision::True, |acc, c| acc.and(c.outcome));
    MembershipReport { point: a.a.iter().map(|v| v.to_string()).collect(), decision, conditions: conds }
}

/// Some root `c` of `P mod p` has `α(c) = 0 mod p`.
fn degree_one_divides(p: &QuarticPoly, a: &AlphaVec, prime: u64) -> bool {
    use crate::arith::{polymod, reduce_big, reduce_i64, roots_mod_p};
    let pc: Vec<u64> = p.c.iter().map(|&c| reduce_i64(c, prime)).chain([1]).collect();
    let av: Vec<u64> = a.a.iter().map(|v| reduce_big(v, prime)).collect();
    roots_mod_p(&pc, prime).into_iter().any(|c| polymod::eval(&av, c, prime) == 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct FriableOutcome {
    pub n: String,
    pub value: String,
    pub friable_part: String,
    pub decision: Decision,
}

/// `∏_{p <= X, p^e || P(n)} p^e >= X^{1 + δ}` for `X < n <= 2X`.
pub fn friable_membership(p: &QuarticPoly, n: &BigInt, x: &BigInt, delta: &Rational, budget: Budget) -> Result<FriableOutcome> {
    if !(n > x && n <= &(x * 2)) {
        return Err(Error::Invalid(format!("need X < n <= 2X, got n = {n}, X = {x}")));
    }
    let value = p.c.iter().rev().fold(BigInt::one(), |acc, &c| acc * n + c);
    let (part, decision) = match factorize(value.magnitude(), budget) {
        Ok(f) => {
            let xu = x.magnitude();
            let part: BigUint = f.factors.iter().filter(|(q, _)| q <= xu).map(|(q, e)| q.pow(*e)).product();
            let exp = Rational::one() + delta;
            let ok = cmp_power(x, &exp, &BigInt::from(part.clone())) != Ordering::Greater;
            (part.to_string(), Decision::from(ok))
        }
        Err(Error::Undecided(_)) => ("?".into(), Decision::Undecided),
        Err(e) => return Err(e),
    };
    Ok(FriableOutcome { n: n.to_string(), value: value.to_string(), friable_part: part, decision })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_constants_pass_with_stated_slack() {
        let r = verify_constants(&SieveConfig::explicit());
        assert!(r.all_satisfied, "{:?}", r.constraints.iter().find(|c| !c.satisfied));
        let sum = r.get("sum_j (theta1j + tau1j) < 1 + alpha0/2").unwrap();
        assert_eq!(sum.slack, rat(1) + ratio(1, 200000) - parse_rational("1.0000006").unwrap());
        let s: Rational = (1..=6).map(|j| SieveConfig::explicit().th(1, j).clone()).sum();
        assert_eq!(s, rat(1));
    }

    #[test]
    fn mutations_break_their_families() {
        let outcomes = mutation_outcomes(&SieveConfig::explicit()).unwrap();
        assert!(outcomes.iter().all(|o| o.predicted_flips));
        let theta21 = &outcomes[0];
        assert!(theta21.flipped.contains(&"theta21-first".to_string()));
        let bound = verify_constants(&SieveConfig::explicit().with_param("theta21", &parse_rational("0.002").unwrap()).unwrap());
        let c = bound.get("theta21 + tau21 < (2 + alpha0)/200 - sum_{i<=3} (theta1i + tau1i)/50").unwrap();
        // bound is about 0.001598
        let b = &c.slack + parse_rational("0.0020001").unwrap();
        assert!(b > parse_rational("0.001598").unwrap() && b < parse_rational("0.001599").unwrap());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = SieveConfig::explicit();
        let text = cfg.to_toml();
        assert_eq!(SieveConfig::parse(&text).unwrap(), cfg);
        let json = serde_json::to_string(&cfg.to_file()).unwrap();
        assert_eq!(SieveConfig::parse(&json).unwrap(), cfg);
        assert!(SieveConfig::parse("alpha0 = \"0.1\"").is_err());
    }

    #[test]
    fn distrinorm_mapping_six_windows() {
        let checks = distrinorm_from_config(&SieveConfig::explicit()).unwrap();
        for c in &checks {
            assert_eq!(c.report.all_satisfied, c.ell == 6, "ell = {} scale = {}", c.ell, c.scale);
        }
    }

    #[test]
    fn distrinorm_degenerate_inputs() {
        let one_window = DistriNormParams {
            theta: vec![ratio(39, 10)],
            theta_prime: vec![ratio(395, 100)],
            ell_prime: 1,
            tau_lo: ratio(1, 1000),
            tau_hi: ratio(2, 1000),
            delta: ratio(1, 100000),
        };
        assert!(!verify_distrinorm_hypotheses(&one_window).unwrap().all_satisfied);
        let zero = DistriNormParams { delta: Rational::zero(), ..one_window };
        assert!(verify_distrinorm_hypotheses(&zero).is_err());
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(decimal(&parse_rational("0.0000001").unwrap()), "0.0000001");
        assert_eq!(decimal(&ratio(-3, 4)), "-0.75");
        assert_eq!(decimal(&ratio(1, 3)), "1/3");
        assert_eq!(decimal(&rat(12)), "12");
    }

    #[test]
    fn friable_examples() {
        let p = QuarticPoly::analyze([2, 0, 0, 0]).unwrap();
        let r = friable_membership(&p, &BigInt::from(3), &BigInt::from(2), &ratio(1, 10), Budget::default()).unwrap();
        assert_eq!((r.value.as_str(), r.friable_part.as_str(), r.decision), ("83", "1", Decision::False));
        // P(11) = 14643 = 3 * 4881 = 3^2 * 1627
        let r = friable_membership(&p, &BigInt::from(11), &BigInt::from(10), &ratio(1, 10), Budget::default()).unwrap();
        assert_eq!((r.friable_part.as_str(), r.decision), ("9", Decision::False));
        assert!(friable_membership(&p, &BigInt::from(30), &BigInt::from(10), &ratio(1, 10), Budget::default()).is_err());
    }

    #[test]
    fn membership_sign_symmetry() {
        let ctx = LocalContext::new(QuarticPoly::analyze([2, 0, 0, 0]).unwrap()).unwrap();
        let cfg = SieveConfig { x: BigInt::from(1000), ..SieveConfig::explicit() };
        for a in [AlphaVec::new(7, 31, 930, 1830), AlphaVec::new(-3, 61, 30, 930), AlphaVec::new(1, 1, 1, 1)] {
            let neg = AlphaVec::from_big(a.a.clone().map(|v| -v));
            let r = membership_j(&ctx, &a, &cfg, Budget::default());
            let s = membership_j(&ctx, &neg, &cfg, Budget::default());
            for c in ["C1", "C4", "C5b", "C5c", "C5d", "C5e"] {
                assert_eq!(r.condition(c), s.condition(c), "{c}");
            }
            assert_eq!(r.conditions.len(), 9);
        }
        let r = membership_j(&ctx, &AlphaVec::new(7, 31, 930, 1830), &cfg, Budget::default());
        assert_eq!(r.condition("C5a"), Some(Decision::True));
        assert_eq!(r.decision, Decision::False);
    }
}
