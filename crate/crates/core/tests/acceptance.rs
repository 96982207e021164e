//! Acceptance criteria, one test each. Every test prints a single `criterion N PASS|FAIL` line.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quartlab::arith::Budget;
use quartlab::cofactors::{compute_suite, k_alpha, AlphaVec};
use quartlab::exactalg::intmat::{det, gram};
use quartlab::exactalg::parse::parse_poly;
use quartlab::exactalg::rational::{parse_rational, rat, ratio};
use quartlab::exactalg::upoly::UPoly;
use quartlab::experiments::{
    distrinorm_count, gamma_d_count, lpf_scan, render_report, DistriNormInstance, Format, GammaInstance, Report,
};
use quartlab::identity::IdentityCheck;
use quartlab::lattice::{lattice_lb1b2, lattice_ld, power_basis, shortest_vector, structure_constants, IntLattice, Vec4};
use quartlab::localcount::{degree_one_primes, local_battery, rho_p, rho_v, IdealSpec, LocalContext, VDivisor};
use quartlab::normform::{delta14_checks, delta14_literal, theta_minpoly, verify_normform};
use quartlab::quartic::{classify_galois, random_irreducible_quartics, GaloisClass, QuarticPoly, NAMED_QUARTICS};
use quartlab::sieveconfig::{mutation_outcomes, verify_constants, SieveConfig};

fn report(n: u32, title: &str, pass: bool, detail: &str) {
    let line = format!("criterion {n} {}: {title}; {detail}\n", if pass { "PASS" } else { "FAIL" });
    // libtest captures stdout and stderr; the device file keeps one line per criterion visible
    match std::fs::OpenOptions::new().append(true).open("/dev/stderr") {
        Ok(mut f) => {
            let _ = std::io::Write::write_all(&mut f, line.as_bytes());
        }
        Err(_) => eprint!("{line}"),
    }
    assert!(pass, "criterion {n} failed: {detail}");
}

fn named() -> Vec<QuarticPoly> {
    NAMED_QUARTICS.iter().map(|(_, c, _)| QuarticPoly::analyze(*c).unwrap()).collect()
}

fn failing(checks: &[IdentityCheck]) -> Vec<String> {
    checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect()
}

#[test]
fn criterion_1_identity_battery() {
    let start = std::time::Instant::now();
    let mut polys = named();
    polys.extend(random_irreducible_quartics(2024, 20, 20));
    let mut structural = Vec::new();
    let mut literal = Vec::new();
    let mut corrected = Vec::new();
    for p in &polys {
        let suite = compute_suite(&p.c).unwrap();
        structural.extend(failing(&suite.checks).into_iter().map(|n| format!("{}: {n}", p.name())));
        if p.is_c4_d4() {
            let nf = verify_normform(p, &suite).unwrap();
            let lit = delta14_literal(p, &suite, &nf.q2).unwrap();
            if !lit.pass {
                literal.push(p.name());
            }
            corrected.extend(failing(&delta14_checks(p, &suite, &nf.q2).unwrap()).into_iter().map(|n| format!("{}: {n}", p.name())));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = structural.is_empty() && literal.is_empty() && secs < 300.0;
    let detail = format!(
        "{} polynomials in {secs:.1}s; structural identity failures {structural:?}; literal Delta14 = -q3((c3^2-4t2)q3 - q2) fails for {literal:?}; Delta14 = -q3 h with h = -((c3^2-4t2)q3 + 4q2) failures {corrected:?}",
        polys.len()
    );
    report(1, "cofactor identity battery", pass, &detail);
}

#[test]
fn criterion_2_galois_labels() {
    let mut wrong = Vec::new();
    for (name, c, class) in NAMED_QUARTICS {
        let got = classify_galois(&c).unwrap().class;
        if got != class {
            wrong.push(format!("{name}: {got}"));
        }
    }
    let v = classify_galois(&[1, 0, -1, 0]).unwrap().class;
    report(2, "Galois classification", wrong.is_empty() && v == GaloisClass::V, &format!("mismatches {wrong:?}; X^4-X^2+1 -> {v}"));
}

struct NormFormOutcome {
    identity_failures: Vec<String>,
    minpoly_is_x4_plus_8: bool,
    minpoly_is_x4_minus_8: bool,
    q2_matches: bool,
}

fn norm_form_outcome() -> &'static NormFormOutcome {
    static CELL: OnceLock<NormFormOutcome> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut identity_failures = Vec::new();
        for p in named() {
            let suite = compute_suite(&p.c).unwrap();
            match verify_normform(&p, &suite) {
                Ok(nf) => {
                    let ok = nf.checks.iter().any(|c| c.name.starts_with("sign*q1 = Res_x") && c.pass);
                    if !ok {
                        identity_failures.push(p.name());
                    }
                }
                Err(e) => identity_failures.push(format!("{}: {e}", p.name())),
            }
        }
        let p = QuarticPoly::analyze([2, 0, 0, 0]).unwrap();
        let suite = compute_suite(&p.c).unwrap();
        let m = theta_minpoly(&p).unwrap();
        let nf = verify_normform(&p, &suite).unwrap();
        NormFormOutcome {
            identity_failures,
            minpoly_is_x4_plus_8: m == UPoly::from_ints(&[8, 0, 0, 0, 1]),
            minpoly_is_x4_minus_8: m == UPoly::from_ints(&[-8, 0, 0, 0, 1]),
            q2_matches: nf.q2 == parse_poly("a1^2 + 2*a3^2").unwrap(),
        }
    })
}

#[test]
fn criterion_3_norm_form() {
    let o = norm_form_outcome();
    let pass = o.identity_failures.is_empty() && o.minpoly_is_x4_plus_8 && o.q2_matches;
    let detail = format!(
        "sign*q1 = Res failures {:?}; X^4+2: minpoly = X^4+8 {}, minpoly = X^4-8 {}, q2 = a1^2+2a3^2 {}",
        o.identity_failures, o.minpoly_is_x4_plus_8, o.minpoly_is_x4_minus_8, o.q2_matches
    );
    report(3, "norm form identity", pass, &detail);
}

fn local_outcome() -> &'static (bool, String) {
    static CELL: OnceLock<(bool, String)> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for p in named() {
            let name = p.name();
            let ctx = LocalContext::new(p).unwrap();
            let b = local_battery(&ctx, 200, 200, 60, 1).unwrap();
            let bad = b.reports.iter().filter(|r| !r.agree).count();
            ok &= b.all_agree && bad == 0;
            parts.push(format!("{name}: {} reports, {bad} disagreements", b.reports.len()));
        }
        (ok, parts.join(", "))
    })
}

#[test]
fn criterion_4_local_lemmas() {
    let (ok, detail) = local_outcome();
    report(4, "local lemmas against enumeration", *ok, detail);
}

#[test]
fn criterion_5_constant_system() {
    let cfg = SieveConfig::explicit();
    let r = verify_constants(&cfg);
    let sum = r.get("sum_j (theta1j + tau1j) < 1 + alpha0/2").unwrap();
    let expected = rat(1) + &cfg.alpha0 / rat(2) - parse_rational("1.0000006").unwrap();
    let slack_ok = sum.slack == expected && sum.satisfied;
    let outcomes = mutation_outcomes(&cfg).unwrap();
    let exact = outcomes.iter().all(|o| o.only_predicted_flips);
    let flips: Vec<String> = outcomes
        .iter()
        .map(|o| format!("{} -> {} flips {:?} (predicted {})", o.mutation.param, o.mutation.value, o.flipped, o.mutation.predicted))
        .collect();
    let pass = r.all_satisfied && slack_ok && outcomes.len() == 3 && exact;
    let detail = format!(
        "all constraints hold {}; sum slack exact {slack_ok}; {} mutations specified (3 required); {flips:?}",
        r.all_satisfied,
        outcomes.len()
    );
    report(5, "explicit constant system", pass, &detail);
}

fn rand_vec4(rng: &mut ChaCha8Rng, bound: i64) -> Vec4 {
    std::array::from_fn(|_| BigInt::from(rng.gen_range(-bound..=bound)))
}

/// Minimum squared norm over all coefficient vectors in the box bounded via the adjugate of the Gram matrix.
fn brute_min_norm(basis: &[Vec<BigInt>]) -> Option<i128> {
    let b: Vec<Vec<i128>> = basis.iter().map(|r| r.iter().map(|x| i128::try_from(x).unwrap()).collect()).collect();
    let g = gram(basis);
    let d = i128::try_from(det(&g)).unwrap();
    let r2 = b.iter().map(|r| r.iter().map(|x| x * x).sum::<i128>()).min().unwrap();
    let n = b.len();
    let mut bounds = Vec::new();
    for i in 0..n {
        let minor: Vec<Vec<BigInt>> = (0..n).filter(|&k| k != i).map(|k| (0..n).filter(|&l| l != i).map(|l| g[k][l].clone()).collect()).collect();
        let adj = i128::try_from(det(&minor)).unwrap();
        let mut c = 0i128;
        while (c + 1) * (c + 1) * d <= r2 * adj {
            c += 1;
        }
        bounds.push(c);
    }
    if bounds.iter().map(|c| 2 * c + 1).product::<i128>() > 2_000_000 {
        return None;
    }
    let mut best = i128::MAX;
    let mut coeff: Vec<i128> = bounds.iter().map(|c| -c).collect();
    loop {
        if coeff.iter().any(|&c| c != 0) {
            let v: Vec<i128> = (0..4).map(|k| (0..n).map(|i| coeff[i] * b[i][k]).sum()).collect();
            best = best.min(v.iter().map(|x| x * x).sum());
        }
        let mut i = 0;
        loop {
            if i == n {
                return Some(best);
            }
            coeff[i] += 1;
            if coeff[i] <= bounds[i] {
                break;
            }
            coeff[i] = -bounds[i];
            i += 1;
        }
    }
}

#[test]
fn criterion_6_lattices() {
    let m = UPoly::from_ints(&[2, 0, 0, 0, 1]);
    let sc = structure_constants(&m, &power_basis()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut wedge_bad = 0;
    let mut pairs = 0;
    while pairs < 500 {
        let (b1, b2) = (rand_vec4(&mut rng, 9), rand_vec4(&mut rng, 9));
        let Ok(pl) = lattice_lb1b2(&b1, &b2, &sc) else { continue };
        pairs += 1;
        let gd = &pl.lattice.gram_det * &pl.d * &pl.d;
        if gd != pl.wedge_sq || !pl.wedge_identity_holds || pl.lattice.rank != 2 {
            wedge_bad += 1;
        }
    }
    let mut ld_bad = 0;
    let mut dirs = 0;
    while dirs < 500 {
        let d = rand_vec4(&mut rng, 20);
        let Ok(dl) = lattice_ld(&d, &sc) else { continue };
        dirs += 1;
        let t2: BigInt = dl.t.iter().map(|x| x * x).sum();
        let c = dl.t.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        if dl.lattice.rank != 3 || &dl.lattice.gram_det * &c * &c != t2 || !dl.kernel_holds {
            ld_bad += 1;
        }
    }
    let mut sv_bad = 0;
    let mut instances = 0;
    while instances < 200 {
        let rank = if instances % 2 == 0 { 2 } else { 3 };
        let rows: Vec<Vec<BigInt>> = (0..rank).map(|_| rand_vec4(&mut rng, 50).to_vec()).collect();
        let Ok(l) = IntLattice::from_basis(rows.clone()) else { continue };
        let Some(min) = brute_min_norm(&rows) else { continue };
        instances += 1;
        let z = shortest_vector(&l).unwrap();
        let zn: BigInt = z.iter().map(|x| x * x).sum();
        if zn != BigInt::from(min) {
            sv_bad += 1;
        }
    }
    let detail = format!(
        "X^4+2 power basis: gram_det*D^2 = wedge_sq failed on {wedge_bad}/500; rank-3 det^2 = (|T|/content)^2 failed on {ld_bad}/500; shortest vector mismatches {sv_bad}/200"
    );
    report(6, "lattice identities", wedge_bad == 0 && ld_bad == 0 && sv_bad == 0, &detail);
}

#[test]
fn criterion_7_rho_functions() {
    let mut ones = 0;
    let mut tested = 0;
    for coeffs in [[2, 0, 0, 0], [1, 1, 1, 1]] {
        let ctx = LocalContext::new(QuarticPoly::analyze(coeffs).unwrap()).unwrap();
        let basis = ctx.nu_basis();
        let primes: Vec<_> = degree_one_primes(&basis.m, 2000)
            .into_iter()
            .filter(|q| quartlab::localcount::upoly_mod(&basis.nu[2], q.p).is_some())
            .take(25)
            .collect();
        for q in primes {
            tested += 1;
            if rho_v(&basis, &VDivisor::Prime(q)).unwrap() == num_rational::Ratio::one() {
                ones += 1;
            }
        }
    }
    let p = QuarticPoly::analyze([2, 0, 0, 0]).unwrap();
    let suite = compute_suite(&p.c).unwrap();
    let a = AlphaVec::new(1, 1, 0, 0);
    let n = a.eval(&suite.np);
    let k = k_alpha(&suite, &a).unwrap();
    let rho = rho_p(&p, &IdealSpec::Principal(a)).unwrap();
    // (1 + r) divides n - r = (n + 1) - (1 + r) iff 3 | n + 1
    let period: Vec<u64> = (0..3u64).filter(|n| (n + 1) % 3 == 0).collect();
    let pass = tested == 50 && ones == 50 && rho == 1 && k == BigInt::from(2) && period == [2] && n == BigInt::from(3);
    let detail = format!("rho_v = 1 on {ones}/{tested} degree-one primes; N(1+r1) = {n}, k_alpha = {k}, rho_P = {rho}, residues {period:?}");
    report(7, "rho functions", pass, &detail);
}

fn harness_outcome() -> &'static (bool, String) {
    static CELL: OnceLock<(bool, String)> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut ok = true;
        let mut parts = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for coeffs in [[2, 0, 0, 0], [1, 1, 1, 1], [3, 3, 0, 0]] {
            let p = QuarticPoly::analyze(coeffs).unwrap();
            let name = p.name();
            let ctx = LocalContext::new(p).unwrap();
            let corner: [i64; 3] = std::array::from_fn(|_| rng.gen_range(20..200));
            let side: [u64; 3] = std::array::from_fn(|_| rng.gen_range(30..60));
            let df = ctx.consts.dq2.to_string().parse::<u64>().unwrap();
            let inst = DistriNormInstance {
                norm: ctx.nu_basis().norm_form().unwrap(),
                f: ctx.nf.q2.clone(),
                df,
                corner,
                side,
                x: 1000,
                windows: vec![(ratio(1, 5), ratio(3, 10)), (ratio(1, 3), ratio(2, 5))],
                p_window: (ratio(1, 5), ratio(3, 5)),
                m: rng.gen_range(1..4),
                u0: std::array::from_fn(|_| rng.gen_range(0..3)),
            };
            let c = distrinorm_count(&inst, Budget::default()).unwrap();
            let dn_fail = failing(&c.identities);
            let basis = ctx.nu_basis();
            let d: Vec<_> = degree_one_primes(&basis.m, 60)
                .into_iter()
                .filter(|q| quartlab::localcount::upoly_mod(&basis.nu[2], q.p).is_some() && q.p != 2 && q.p != 3)
                .take(2)
                .collect();
            let mut d = d;
            if d.len() == 2 && d[0].p == d[1].p {
                d.pop();
            }
            let g = gamma_d_count(&GammaInstance { basis, corner, side, u0: inst.u0, q: 3, d }).unwrap();
            let g_fail = failing(&g.identities);
            ok &= dn_fail.is_empty() && g_fail.is_empty();
            parts.push(format!(
                "{name}: box {side:?}, weighted sums {} = {}, |Gamma_d| = {} vs main {}, failures {dn_fail:?} {g_fail:?}",
                c.weighted_by_divisors, c.weighted_by_factorization, g.gamma_d, quartlab::experiments::frac(&g.main_term)
            ));
        }
        let p = QuarticPoly::analyze([2, 0, 0, 0]).unwrap();
        let grid: Vec<_> = [-1, 0, 1, 2, 5, 10, 20, 50].iter().map(|&k| ratio(k, 100)).collect();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let scan = pool.install(|| lpf_scan(&p, 100_000, &grid, Budget::default())).unwrap();
            let mut r = Report::new(p.name(), 0);
            for row in &scan.rows {
                r.push_row(row).unwrap();
            }
            (scan, render_report(&r, Format::Json).unwrap())
        };
        let (scan, one) = run(1);
        let (_, four) = run(4);
        let monotone = scan.rows.windows(2).all(|w| w[0].proportion >= w[1].proportion);
        ok &= monotone && one == four;
        parts.push(format!(
            "lpf_scan x = 10^5: monotone {monotone}, identical bytes across 1/4 threads {}, undecided {}, proportions {:?}",
            one == four,
            scan.undecided,
            scan.rows.iter().map(|r| quartlab::experiments::frac(&r.proportion)).collect::<Vec<_>>()
        ));
        (ok, parts.join("; "))
    })
}

#[test]
fn criterion_8_counting_harness() {
    let (ok, detail) = harness_outcome();
    report(8, "counting harness", *ok, detail);
}

#[test]
fn criterion_9_structural_substitutes() {
    let nf = norm_form_outcome();
    let (local, _) = local_outcome();
    let (harness, _) = harness_outcome();
    let pass = nf.identity_failures.is_empty() && *local && *harness;
    let detail = format!(
        "asymptotics not reproduced; norm-form identity {}, local lemmas {local}, harness identities {harness}",
        nf.identity_failures.is_empty()
    );
    report(9, "headline asymptotics via structural facts", pass, &detail);
}
