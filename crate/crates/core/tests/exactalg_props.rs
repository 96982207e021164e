use proptest::prelude::*;
use quartlab::exactalg::ball::ComplexBall;
use quartlab::exactalg::multipoly::MultiPoly;
use quartlab::exactalg::rational::{rat, Rational};
use quartlab::exactalg::resultant::resultant;
use quartlab::exactalg::roots::certified_roots;
use quartlab::exactalg::upoly::UPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bivariate(c: &[i64]) -> MultiPoly {
    let mut f = MultiPoly::zero();
    for (k, &v) in c.iter().enumerate() {
        let (i, j) = ((k / 3) as u32, (k % 3) as u32);
        f = f.add(&MultiPoly::monomial("x", i, rat(v)).mul(&MultiPoly::monomial("y", j, rat(1))));
    }
    f
}

fn from_roots(roots: &[i64]) -> MultiPoly {
    roots.iter().fold(MultiPoly::one(), |acc, &r| acc.mul(&MultiPoly::from_int_coeffs("x", &[-r, 1])))
}

proptest! {
    #[test]
    fn resultant_swaps_with_sign(f in prop::collection::vec(-5i64..5, 9), g in prop::collection::vec(-5i64..5, 6)) {
        let (f, g) = (bivariate(&f), bivariate(&g));
        prop_assume!(!f.is_zero() && !g.is_zero() && f.degree_in("x") > 0 && g.degree_in("x") > 0);
        let rfg = resultant(&f, &g, "x").unwrap();
        let rgf = resultant(&g, &f, "x").unwrap();
        let sign = if (f.degree_in("x") * g.degree_in("x")) % 2 == 1 { rat(-1) } else { rat(1) };
        prop_assert_eq!(rfg.scale(&sign), rgf);
    }

    #[test]
    fn resultant_is_product_of_root_differences(r in prop::collection::vec(-9i64..9, 1..5), s in prop::collection::vec(-9i64..9, 1..5)) {
        let expected: i64 = r.iter().flat_map(|a| s.iter().map(move |b| a - b)).product();
        let res = resultant(&from_roots(&r), &from_roots(&s), "x").unwrap();
        prop_assert_eq!(res.constant_value(), Some(rat(expected)));
    }
}

#[test]
fn divexact_recovers_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let a: Vec<i64> = (0..9).map(|_| rng.gen_range(-6..=6)).collect();
        let b: Vec<i64> = (0..9).map(|_| rng.gen_range(-6..=6)).collect();
        let (a, b) = (bivariate(&a), bivariate(&b));
        if b.is_zero() {
            continue;
        }
        assert_eq!(a.mul(&b).divexact(&b).unwrap(), a);
    }
}

#[test]
fn certified_balls_enclose_zeros() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut tested = 0;
    while tested < 40 {
        let deg = rng.gen_range(2..=6);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-20..=20)).collect();
        c.push(1);
        let f = MultiPoly::from_int_coeffs("x", &c);
        let Ok(balls) = certified_roots(&f, 128) else { continue };
        tested += 1;
        assert_eq!(balls.len(), deg);
        let coeffs: Vec<Rational> = UPoly::from_ints(&c).0;
        for b in &balls {
            assert!(ComplexBall::eval_poly(&coeffs, b, 256).contains_zero(), "{c:?}");
        }
    }
}
