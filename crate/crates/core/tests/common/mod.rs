#![allow(dead_code)]

use quartlab::quartic::QuarticPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rejection sample of `count` distinct quartics with Galois group C4 or D4 and `|c_i| <= bound`.
pub fn random_c4_d4(seed: u64, count: usize, bound: i64) -> Vec<QuarticPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<QuarticPoly> = Vec::new();
    while out.len() < count {
        // half the draws from the even family X^4 + c2 X^2 + c0, where C4 and D4 are common
        let c = if rng.gen_bool(0.5) {
            [rng.gen_range(-bound..=bound), 0, rng.gen_range(-bound..=bound), 0]
        } else {
            std::array::from_fn(|_| rng.gen_range(-bound..=bound))
        };
        if out.iter().any(|p| p.c == c) {
            continue;
        }
        if let Ok(p) = QuarticPoly::analyze(c) {
            if p.is_c4_d4() {
                out.push(p);
            }
        }
    }
    out
}
