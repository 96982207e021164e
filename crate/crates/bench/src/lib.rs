//! Fixed inputs shared by the kernel benchmarks.

use num_bigint::{BigInt, BigUint};
use quartlab::quartic::QuarticPoly;

/// `X^4 + 2`, the usual D4 workhorse.
pub fn x4_plus_2() -> QuarticPoly {
    QuarticPoly::analyze([2, 0, 0, 0]).expect("irreducible")
}

/// Semiprimes near `10^12` with balanced factors, the slow case for rho.
pub fn semiprimes() -> Vec<BigUint> {
    [(999_983u64, 1_000_003u64), (999_979, 999_961), (1_000_033, 1_000_037), (104_723, 9_999_991)]
        .iter()
        .map(|&(p, q)| BigUint::from(p) * BigUint::from(q))
        .collect()
}

/// Deterministic integer rows for Hermite normal form timings.
pub fn hnf_rows(n: usize, m: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..m).map(|j| BigInt::from(((i * 31 + j * 17 + i * j * 7) % 97) as i64 - 48)).collect())
        .collect()
}
