mod common;

use num_bigint::BigInt;
use quartlab::exactalg::ball::ComplexBall;
use quartlab::exactalg::rational::Rational;
use quartlab::exactalg::resultant::resultant;
use quartlab::exactalg::upoly::UPoly;
use quartlab::quartic::{quartic_discriminant, quartic_poly, resolvent_pairprod, resolvent_sumprod};

fn classical_disc(c: &[i64; 4]) -> BigInt {
    let [e, d, c2, b] = c.map(BigInt::from);
    let a = BigInt::from(1);
    let terms = [
        (256, vec![&a, &a, &a, &e, &e, &e]),
        (-192, vec![&a, &a, &b, &d, &e, &e]),
        (-128, vec![&a, &a, &c2, &c2, &e, &e]),
        (144, vec![&a, &a, &c2, &d, &d, &e]),
        (-27, vec![&a, &a, &d, &d, &d, &d]),
        (144, vec![&a, &b, &b, &c2, &e, &e]),
        (-6, vec![&a, &b, &b, &d, &d, &e]),
        (-80, vec![&a, &b, &c2, &c2, &d, &e]),
        (18, vec![&a, &b, &c2, &d, &d, &d]),
        (16, vec![&a, &c2, &c2, &c2, &c2, &e]),
        (-4, vec![&a, &c2, &c2, &c2, &d, &d]),
        (-27, vec![&b, &b, &b, &b, &e, &e]),
        (18, vec![&b, &b, &b, &c2, &d, &e]),
        (-4, vec![&b, &b, &b, &d, &d, &d]),
        (-4, vec![&b, &b, &c2, &c2, &c2, &e]),
        (1, vec![&b, &b, &c2, &c2, &d, &d]),
    ];
    terms
        .iter()
        .map(|(k, f)| f.iter().fold(BigInt::from(*k), |acc, x| acc * *x))
        .sum()
}

#[test]
fn sample_pairings_and_discriminants() {
    let polys = common::random_c4_d4(31, 24, 12);
    for p in &polys {
        let o = p.ordered().unwrap();
        assert_eq!(&o.t1 + &o.t2, BigInt::from(p.c[2]), "{}", p.name());
        let f = quartic_poly(&p.c, "x");
        let via_res = resultant(&f, &f.derivative("x"), "x").unwrap().constant_value().unwrap();
        assert_eq!(via_res.to_integer(), p.disc.clone(), "{}", p.name());
        assert_eq!(quartic_discriminant(&p.c), classical_disc(&p.c), "{}", p.name());
        let r = UPoly::from_multipoly(&resolvent_pairprod(&p.c), "x").unwrap().rational_roots();
        assert_eq!(r.len(), 1, "{}", p.name());
    }
}

#[test]
fn resolvents_vanish_on_root_combinations() {
    for p in common::random_c4_d4(32, 50, 15) {
        let o = p.ordered().unwrap();
        let r = &o.roots;
        let pp: Vec<Rational> = UPoly::from_multipoly(&resolvent_pairprod(&p.c), "x").unwrap().0;
        let sp: Vec<Rational> = UPoly::from_multipoly(&resolvent_sumprod(&p.c), "x").unwrap().0;
        for (i, j, k, l) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
            let prod = r[i].mul(&r[j]).add(&r[k].mul(&r[l]));
            let sum = r[i].add(&r[j]).mul(&r[k].add(&r[l]));
            assert!(ComplexBall::eval_poly(&pp, &prod, o.bits + 64).contains_zero(), "{}", p.name());
            assert!(ComplexBall::eval_poly(&sp, &sum, o.bits + 64).contains_zero(), "{}", p.name());
        }
    }
}
