use criterion::{black_box, criterion_group, criterion_main, Criterion};
use quartlab::arith::{factorize, Budget};
use quartlab::cofactors::compute_suite;
use quartlab::exactalg::intmat::hnf;
use quartlab::experiments::largest_prime_factors;
use quartlab::lattice::{lattice_ld, power_basis, structure_constants, vec4};
use quartlab::exactalg::UPoly;
use quartlab_bench::{hnf_rows, semiprimes, x4_plus_2};

fn factorisation(c: &mut Criterion) {
    let ns = semiprimes();
    c.bench_function("factorize semiprimes near 1e12", |b| {
        b.iter(|| {
            for n in &ns {
                black_box(factorize(n, Budget::default()).unwrap());
            }
        })
    });
}

fn sieve(c: &mut Criterion) {
    let p = x4_plus_2();
    c.bench_function("largest prime factors of P(n), n in (2000, 4000]", |b| {
        b.iter(|| black_box(largest_prime_factors(&p, 2001, 4000, Budget::default()).unwrap()))
    });
}

fn exact(c: &mut Criterion) {
    let rows = hnf_rows(6, 4);
    c.bench_function("hnf 6x4", |b| b.iter(|| black_box(hnf(&rows))));
    c.bench_function("cofactor suite X^4+3X+3", |b| b.iter(|| black_box(compute_suite(&[3, 3, 0, 0]).unwrap())));
    let sc = structure_constants(&UPoly::from_ints(&[-8, 0, 0, 0, 1]), &power_basis()).unwrap();
    let d = vec4([17, -4, 9, 23]);
    c.bench_function("direction lattice with shortest vector", |b| b.iter(|| black_box(lattice_ld(&d, &sc).unwrap())));
}

criterion_group!(benches, factorisation, sieve, exact);
criterion_main!(benches);
