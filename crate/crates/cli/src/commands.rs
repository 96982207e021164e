use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use quartlab::cofactors::{build_suite, q_product_check, suite_identities};
use quartlab::exactalg::{parse_univariate, UPoly};
use quartlab::experiments::{distrinorm_count, gamma_d_count, lpf_scan, Budget, DistriNormInstance, GammaInstance, Report};
use quartlab::identity::IdentityCheck;
use quartlab::lattice::{lattice_lb1b2, lattice_ld, parse_basis, power_basis, structure_constants, vec4};
use quartlab::localcount::{local_battery, DegreeOnePrime, LocalContext};
use quartlab::normform::{delta14_literal, verify_normform};
use quartlab::quartic::{derived_constants, format_quartic, QuarticPoly, NAMED_QUARTICS};
use quartlab::sieveconfig::{distrinorm_from_config, mutation_outcomes, verify_constants, SieveConfig, FAMILIES};
use quartlab::{Error, Result};
use serde::Serialize;
use serde_json::Value;

use crate::{Command, ConfigCommand, DistriNormArgs, GammaArgs, LatticeArgs};

pub enum Output {
    Report(Report),
    Text(String),
}

pub fn run(cmd: &Command, seed: u64) -> Result<Output> {
    let report = match cmd {
        Command::Analyze { poly, delta_p } => analyze(poly, delta_p.as_ref(), seed)?,
        Command::Verify { poly, trials } => verify(poly, *trials, seed)?,
        Command::Local { poly, pmax, pairs, points } => local(poly, *pmax, *pairs, *points, seed)?,
        Command::Lattice(args) => lattice(args, seed)?,
        Command::Config(ConfigCommand::Check { path, mutations }) => config_check(path, *mutations, seed)?,
        Command::Config(ConfigCommand::Explicit) => return Ok(Output::Text(SieveConfig::explicit().to_toml())),
        Command::Scan { poly, x, c } => scan(poly, *x, c, seed)?,
        Command::Distrinorm(args) => distrinorm(args, seed)?,
        Command::Gamma(args) => gamma(args, seed)?,
        Command::Selftest => selftest(seed)?,
    };
    Ok(Output::Report(report))
}

fn tagged<T: Serialize>(section: &str, v: &T) -> Result<Value> {
    let v = serde_json::to_value(v).map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(match v {
        Value::Object(mut m) => {
            m.insert("section".into(), section.into());
            Value::Object(m)
        }
        other => serde_json::json!({ "section": section, "value": other }),
    })
}

fn analyze(c: &[i64; 4], delta_p: Option<&BigInt>, seed: u64) -> Result<Report> {
    let p = QuarticPoly::analyze(*c)?;
    let mut r = Report::new(p.name(), seed);
    r.rows.push(tagged("galois", &p.galois)?);
    if p.is_c4_d4() {
        r.rows.push(tagged("constants", &derived_constants(&p, delta_p)?)?);
        let suite = build_suite(&p)?;
        let nf = verify_normform(&p, &suite)?;
        r.identities.extend(nf.checks.iter().cloned());
        r.rows.push(tagged("normform", &nf)?);
    }
    Ok(r)
}

fn identity_battery(p: &QuarticPoly, trials: usize, seed: u64) -> Result<(Vec<IdentityCheck>, Vec<Value>)> {
    let suite = build_suite(p)?;
    let mut checks = suite_identities(&suite);
    let mut rows = Vec::new();
    if p.is_c4_d4() {
        let nf = verify_normform(p, &suite)?;
        checks.extend(nf.checks);
        checks.extend(q_product_check(p, &suite, trials, seed)?.checks);
        rows.push(tagged("literal", &delta14_literal(p, &suite, &suite_q2(p, &suite)?)?)?);
    }
    Ok((checks, rows))
}

fn suite_q2(p: &QuarticPoly, suite: &quartlab::cofactors::CofactorSuite) -> Result<quartlab::exactalg::MultiPoly> {
    Ok(quartlab::normform::split_q(p, suite)?.q2)
}

fn verify(c: &[i64; 4], trials: usize, seed: u64) -> Result<Report> {
    let p = QuarticPoly::analyze(*c)?;
    let mut r = Report::new(p.name(), seed);
    let (checks, rows) = identity_battery(&p, trials, seed)?;
    for check in &checks {
        r.rows.push(tagged("identity", check)?);
    }
    r.rows.extend(rows);
    r.identities = checks;
    Ok(r)
}

fn local(c: &[i64; 4], pmax: u64, pairs: usize, points: usize, seed: u64) -> Result<Report> {
    let ctx = LocalContext::new(QuarticPoly::analyze(*c)?)?;
    let battery = local_battery(&ctx, pmax, pairs, points, seed)?;
    let mut r = Report::new(ctx.poly.name(), seed);
    let mut by_check: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for rep in &battery.reports {
        let e = by_check.entry(rep.check.as_str()).or_default();
        e.0 += 1;
        e.1 += usize::from(!rep.agree);
        r.rows.push(tagged("report", rep)?);
    }
    for s in &battery.q2_splits {
        r.rows.push(tagged("q2_split", s)?);
    }
    for (check, (n, bad)) in by_check {
        r.identities.push(IdentityCheck::with_detail(
            format!("{check} agrees with enumeration"),
            bad == 0,
            format!("{n} reports, {bad} disagreements"),
        ));
    }
    Ok(r)
}

fn lattice(args: &LatticeArgs, seed: u64) -> Result<Report> {
    let (name, m) = match (&args.minpoly, &args.poly) {
        (Some(s), _) => (s.clone(), UPoly::from_multipoly(&parse_univariate(s, "x")?, "x")?),
        (None, Some(c)) => {
            let ctx = LocalContext::new(QuarticPoly::analyze(*c)?)?;
            (format_quartic(c), ctx.theta_poly())
        }
        (None, None) => return Err(Error::Invalid("need --minpoly or --poly".into())),
    };
    if m.degree() != 4 || !m.lc().is_integer() || m.lc() != num_traits::One::one() {
        return Err(Error::Invalid("minimal polynomial must be monic of degree 4".into()));
    }
    let basis = match &args.basis {
        Some(b) => parse_basis(b)?,
        None => power_basis(),
    };
    let sc = structure_constants(&m, &basis)?;
    let mut r = Report::new(name, seed);
    r.identities.push(IdentityCheck::new("structure constants symmetric", sc.is_symmetric()));
    r.identities.push(IdentityCheck::new("structure constants associative", sc.is_associative()));
    r.rows.push(serde_json::json!({
        "section": "structure",
        "denominator": sc.denom.to_string(),
        "t_bound_sq": quartlab::experiments::frac(&sc.t_bound_sq()),
    }));
    if let Some(d) = args.d {
        let dl = lattice_ld(&vec4(d), &sc)?;
        r.identities.push(IdentityCheck::new("det(Lambda_d)^2 = (|T(d)| / content)^2", dl.det_formula_holds));
        r.identities.push(IdentityCheck::new("Lambda_d lies in the kernel", dl.kernel_holds));
        r.rows.push(tagged("direction", &dl)?);
    }
    if let (Some(b1), Some(b2)) = (args.b1, args.b2) {
        let pl = lattice_lb1b2(&vec4(b1), &vec4(b2), &sc)?;
        r.identities.push(IdentityCheck::new("gram_det * D^2 = wedge_sq", pl.wedge_identity_holds));
        r.rows.push(tagged("pair", &pl)?);
    }
    Ok(r)
}

fn config_check(path: &std::path::Path, mutations: bool, seed: u64) -> Result<Report> {
    let cfg = SieveConfig::parse(&std::fs::read_to_string(path)?)?;
    let report = verify_constants(&cfg);
    let mut r = Report::new("-", seed);
    for c in &report.constraints {
        r.rows.push(tagged("constraint", c)?);
    }
    for family in FAMILIES {
        r.identities.push(IdentityCheck::new(format!("constraint family {family}"), report.family_ok(family)));
    }
    for check in distrinorm_from_config(&cfg)? {
        for c in &check.report.constraints {
            let mut row = tagged("distrinorm", c)?;
            row["ell"] = check.ell.into();
            row["scale"] = check.scale.clone().into();
            r.rows.push(row);
        }
        if check.ell == cfg.ell {
            r.identities.push(IdentityCheck::new(
                format!("distrinorm hypotheses at ell = {}, scale {}", check.ell, check.scale),
                check.report.all_satisfied,
            ));
        }
    }
    if mutations {
        for m in mutation_outcomes(&cfg)? {
            r.identities.push(IdentityCheck::with_detail(
                format!("{} -> {} flips only {}", m.mutation.param, m.mutation.value, m.mutation.predicted),
                m.only_predicted_flips,
                format!("flipped {:?}", m.flipped),
            ));
            r.rows.push(tagged("mutation", &m)?);
        }
    }
    Ok(r)
}

fn scan(c: &[i64; 4], x: u64, grid: &[quartlab::exactalg::Rational], seed: u64) -> Result<Report> {
    let p = QuarticPoly::analyze(*c)?;
    let s = lpf_scan(&p, x, grid, Budget::default())?;
    let mut r = Report::new(p.name(), seed);
    let monotone = s.rows.windows(2).all(|w| w[0].count >= w[1].count);
    r.identities.push(IdentityCheck::with_detail(
        "proportions non-increasing in c",
        monotone,
        format!("{} values scanned, {} undecided", s.scanned, s.undecided),
    ));
    for row in &s.rows {
        r.push_row(row)?;
    }
    Ok(r)
}

fn distrinorm(a: &DistriNormArgs, seed: u64) -> Result<Report> {
    let ctx = LocalContext::new(QuarticPoly::analyze(a.poly)?)?;
    let df = ctx.consts.dq2.to_u64().ok_or_else(|| Error::TooLarge("D_q2".into()))?;
    let inst = DistriNormInstance {
        norm: ctx.nu_basis().norm_form()?,
        f: ctx.nf.q2.clone(),
        df,
        corner: a.corner,
        side: a.side,
        x: a.x,
        windows: a.windows.clone(),
        p_window: a.p_window.clone(),
        m: a.m,
        u0: a.u0,
    };
    let c = distrinorm_count(&inst, Budget::default())?;
    let mut r = Report::new(ctx.poly.name(), seed);
    r.identities = c.identities.clone();
    r.rows.push(tagged("summary", &c)?);
    Ok(r)
}

fn gamma(a: &GammaArgs, seed: u64) -> Result<Report> {
    let ctx = LocalContext::new(QuarticPoly::analyze(a.poly)?)?;
    let basis = ctx.nu_basis();
    let d = a.d.iter().map(|&(p, c)| DegreeOnePrime::new(&basis.m, p, c)).collect::<Result<Vec<_>>>()?;
    let g = gamma_d_count(&GammaInstance { basis, corner: a.corner, side: a.side, u0: a.u0, q: a.q, d })?;
    let mut r = Report::new(ctx.poly.name(), seed);
    r.identities = g.identities.clone();
    r.push_row(&g)?;
    Ok(r)
}

#[derive(Serialize)]
struct SelftestRow {
    poly: String,
    class: String,
    expected_class: String,
    checks: usize,
    failures: Vec<String>,
}

fn selftest(seed: u64) -> Result<Report> {
    let names: Vec<&str> = NAMED_QUARTICS.iter().map(|n| n.0).collect();
    let mut r = Report::new(names.join(", "), seed);
    for (name, c, class) in NAMED_QUARTICS {
        let p = QuarticPoly::analyze(c)?;
        let mut checks = vec![IdentityCheck::new("Galois class", p.class() == class)];
        let (battery, _) = identity_battery(&p, 10, seed)?;
        checks.extend(battery);
        let ctx = LocalContext::new(p.clone())?;
        let local = local_battery(&ctx, 60, 20, 10, seed)?;
        checks.push(IdentityCheck::new("local lemmas agree with enumeration", local.all_agree));
        r.push_row(&SelftestRow {
            poly: name.into(),
            class: p.class().to_string(),
            expected_class: class.to_string(),
            checks: checks.len(),
            failures: checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect(),
        })?;
        r.identities.extend(checks.into_iter().map(|mut c| {
            c.name = format!("{name}: {}", c.name);
            c
        }));
    }
    Ok(r)
}
