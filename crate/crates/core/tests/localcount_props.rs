use num_rational::Ratio;
use quartlab::localcount::{degree_one_primes, prime_power_count, rho_v, upoly_mod, DegreeOnePrime, LocalContext, NuBasis, VDivisor};
use quartlab::quartic::QuarticPoly;

const P_SQUARED_C: u64 = 10;
const NORM_LIMIT: u64 = 250;

fn contexts() -> Vec<LocalContext> {
    [[2, 0, 0, 0], [1, 1, 1, 1], [5, 0, -5, 0], [3, 3, 0, 0]]
        .into_iter()
        .map(|c| LocalContext::new(QuarticPoly::analyze(c).unwrap()).unwrap())
        .collect()
}

fn eval_mod(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// Direct count over the cube `[1, n]^3` of points whose element lies in every given prime.
fn brute_rho(b: &NuBasis, qs: &[DegreeOnePrime]) -> Ratio<u64> {
    let n: u64 = qs.iter().map(|q| q.p).product();
    let vals: Vec<[u64; 3]> = qs
        .iter()
        .map(|q| std::array::from_fn(|i| eval_mod(&upoly_mod(&b.nu[i], q.p).unwrap(), q.c, q.p)))
        .collect();
    let mut count = 0;
    for a1 in 1..=n {
        for a2 in 1..=n {
            for a3 in 1..=n {
                if qs.iter().zip(&vals).all(|(q, v)| (a1 * v[0] + a2 * v[1] + a3 * v[2]) % q.p == 0) {
                    count += 1;
                }
            }
        }
    }
    Ratio::new(count, n * n)
}

#[test]
fn rho_v_is_multiplicative_for_small_norms() {
    let mut pairs = 0;
    for ctx in contexts() {
        let b = ctx.nu_basis();
        let primes: Vec<DegreeOnePrime> = degree_one_primes(&b.m, 50).into_iter().filter(|q| upoly_mod(&b.nu[2], q.p).is_some()).collect();
        for q in &primes {
            assert_eq!(rho_v(&b, &VDivisor::Prime(q.clone())).unwrap(), brute_rho(&b, std::slice::from_ref(q)));
        }
        for (i, q1) in primes.iter().enumerate() {
            for q2 in &primes[i + 1..] {
                if q1.p == q2.p || q1.p * q2.p > NORM_LIMIT {
                    continue;
                }
                let pair = vec![q1.clone(), q2.clone()];
                let joint = rho_v(&b, &VDivisor::Product(pair.clone())).unwrap();
                let single = |q: &DegreeOnePrime| rho_v(&b, &VDivisor::Prime(q.clone())).unwrap();
                assert_eq!(joint, single(q1) * single(q2));
                assert_eq!(joint, brute_rho(&b, &pair));
                pairs += 1;
            }
        }
    }
    assert!(pairs > 0);
}

#[test]
fn p_squared_count_bound() {
    for ctx in contexts() {
        let b = ctx.nu_basis();
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
            let n = prime_power_count(&b, p, 2).unwrap();
            assert!(n <= P_SQUARED_C * p.pow(4), "{}: p = {p}, count {n}", ctx.poly.name());
        }
    }
}
