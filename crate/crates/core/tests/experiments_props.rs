use num_bigint::BigUint;
use num_traits::{One, Signed};
use quartlab::exactalg::rational::{rat, ratio, Rational};
use quartlab::experiments::{factorize, gamma_d_count, lpf_scan, Budget, GammaInstance};
use quartlab::localcount::{DegreeOnePrime, LocalContext};
use quartlab::quartic::QuarticPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn factorizations_multiply_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for _ in 0..10_000 {
        let n: u64 = rng.gen_range(1..=1_000_000_000_000);
        let f = factorize(&BigUint::from(n), Budget::default()).unwrap();
        assert!(!f.probable);
        let back: BigUint = f.factors.iter().map(|(p, e)| p.pow(*e)).product();
        assert_eq!(back, BigUint::from(n));
        assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(f.factors.iter().all(|(p, e)| *e >= 1 && p > &BigUint::one()));
    }
}

#[test]
fn lpf_proportions_do_not_increase() {
    let grid: Vec<Rational> = (-4..=8).map(|k| ratio(k, 8)).collect();
    for c in [[2, 0, 0, 0], [1, 1, 1, 1], [39, 13, 0, 0]] {
        let p = QuarticPoly::analyze(c).unwrap();
        let scan = lpf_scan(&p, 3000, &grid, Budget::default()).unwrap();
        assert_eq!(scan.undecided, 0);
        assert_eq!(scan.rows.len(), grid.len());
        for w in scan.rows.windows(2) {
            assert!(w[0].c < w[1].c && w[0].count >= w[1].count);
        }
        assert!(scan.rows.iter().all(|r| r.proportion == ratio(r.count as i64, 3000)));
    }
}

#[test]
fn gamma_d_matches_density_on_large_cube() {
    let ctx = LocalContext::new(QuarticPoly::analyze([5, -5, -10, 0]).unwrap()).unwrap();
    let basis = ctx.nu_basis();
    let d = DegreeOnePrime::new(&basis.m, 3, 1).unwrap();
    let side = 301u64;
    let g = gamma_d_count(&GammaInstance { basis, corner: [1, 1, 1], side: [side; 3], u0: [0, 0, 0], q: 1, d: vec![d] }).unwrap();
    assert!(g.identities.iter().all(|c| c.pass));
    let vol_over_p = Rational::from_integer((side.pow(3)).into()) / rat(3);
    assert_eq!(g.main_term, vol_over_p);
    let rel = (Rational::from_integer(g.gamma_d.into()) - &vol_over_p).abs() / &vol_over_p;
    assert!(rel <= ratio(5, 100), "relative error {rel}");
}
