use num_bigint::BigInt;
use proptest::prelude::*;
use quartlab::cofactors::AlphaVec;
use quartlab::exactalg::rational::ratio;
use quartlab::experiments::Budget;
use quartlab::localcount::LocalContext;
use quartlab::quartic::QuarticPoly;
use quartlab::sieveconfig::{membership_j, verify_constants, SieveConfig, INDEX_SET};
use std::sync::OnceLock;

fn ctx() -> &'static LocalContext {
    static C: OnceLock<LocalContext> = OnceLock::new();
    C.get_or_init(|| LocalContext::new(QuarticPoly::analyze([2, 0, 0, 0]).unwrap()).unwrap())
}

fn param_names() -> Vec<String> {
    let mut v = vec!["alpha0".to_string(), "theta0".to_string()];
    for (i, j) in INDEX_SET {
        v.push(format!("theta{i}{j}"));
        v.push(format!("tau{i}{j}"));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn toml_round_trip(k in 0usize..16, num in 1i64..1_000_000) {
        let names = param_names();
        let name = &names[k % names.len()];
        let cfg = SieveConfig::explicit().with_param(name, &ratio(num, 10_000_000)).unwrap();
        let back = SieveConfig::parse(&cfg.to_toml()).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(verify_constants(&back).all_satisfied, verify_constants(&cfg).all_satisfied);
    }

    #[test]
    fn membership_conditions_survive_negation(k1 in -40i64..40, k2 in -3i64..3, k3 in -3i64..3, a0 in -2000i64..2000) {
        let a1 = 1 + 30 * k1;
        let a2 = 30 + 900 * k2;
        let a3 = 30 + 900 * k3;
        let cfg = SieveConfig::explicit();
        let a = AlphaVec::new(a0, a1, a2, a3);
        let neg = AlphaVec::from_big(a.a.clone().map(|v: BigInt| -v));
        let r = membership_j(ctx(), &a, &cfg, Budget::default());
        let s = membership_j(ctx(), &neg, &cfg, Budget::default());
        for name in ["C1", "C4", "C5b", "C5c", "C5d", "C5e"] {
            prop_assert_eq!(r.condition(name), s.condition(name), "{}", name);
        }
    }
}
