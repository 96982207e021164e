use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use quartlab::exactalg::rational::from_int;
use quartlab::lattice::{lattice_ld, power_basis, structure_constants, vec4, StructureConstants};
use quartlab::localcount::LocalContext;
use quartlab::quartic::QuarticPoly;
use std::sync::OnceLock;

const Z1_C: f64 = 3.0;

fn fields() -> &'static Vec<StructureConstants> {
    static F: OnceLock<Vec<StructureConstants>> = OnceLock::new();
    F.get_or_init(|| {
        [[2, 0, 0, 0], [1, 1, 1, 1], [5, 0, -5, 0]]
            .into_iter()
            .map(|c| {
                let ctx = LocalContext::new(QuarticPoly::analyze(c).unwrap()).unwrap();
                structure_constants(&ctx.theta_poly(), &power_basis()).unwrap()
            })
            .collect()
    })
}

fn norm(v: &[BigInt]) -> f64 {
    v.iter().map(|x| x.to_f64().unwrap().powi(2)).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn direction_lattice_bounds(field in 0usize..3, d in prop::array::uniform4(-5000i64..5000)) {
        prop_assume!(d.iter().any(|&x| x != 0));
        let sc = &fields()[field];
        let d = vec4(d);
        let dl = lattice_ld(&d, sc).unwrap();
        prop_assert!(dl.kernel_holds);
        let d_sq: BigInt = d.iter().map(|x| x * x).sum();
        prop_assert!(from_int(&dl.lattice.gram_det) <= sc.t_bound_sq() * from_int(&d_sq));
        prop_assert!(norm(&dl.z1) <= Z1_C * norm(&d).cbrt());
    }
}
