//! Integer matrices: Hermite normal form, lattice membership, kernels and determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn sub_multiple(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Row Hermite normal form of the lattice spanned by `rows`: echelon rows with positive pivots,
/// entries above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hnf(rows: &[Vec<BigInt>]) -> IntMatrix {
    let mut a: IntMatrix = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        if r == a.len() {
            break;
        }
        loop {
            let best = (r..a.len())
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
            let Some(best) = best else { break };
            a.swap(r, best);
            let mut done = true;
            for i in r + 1..a.len() {
                if !a[i][col].is_zero() {
                    let q = a[i][col].div_floor(&a[r][col]);
                    let (head, tail) = a.split_at_mut(i);
                    sub_multiple(&mut tail[0], &head[r], &q);
                    if !a[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][col].is_zero() {
            if a[r][col].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = a[i][col].div_floor(&a[r][col]);
                let (head, tail) = a.split_at_mut(r);
                sub_multiple(&mut head[i], &tail[0], &q);
            }
            r += 1;
        }
    }
    a.truncate(r);
    a
}

fn pivot_col(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Coordinates of `v` in the HNF basis `h`, or `None` if `v` is not in the lattice.
pub fn lattice_coords(h: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(h.len());
    for row in h {
        let pc = pivot_col(row)?;
        if rest[..pc].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, rem) = rest[pc].div_rem(&row[pc]);
        if !rem.is_zero() {
            return None;
        }
        sub_multiple(&mut rest, row, &q);
        coords.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}

pub fn in_lattice(h: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    lattice_coords(h, v).is_some()
}

/// `Z`-basis of `{x : A x = 0}` for an `m x n` matrix `A`.
pub fn kernel(a: &[Vec<BigInt>]) -> IntMatrix {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let aug: IntMatrix = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = (0..m).map(|i| a[i][j].clone()).collect();
            row.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    hnf(&aug)
        .into_iter()
        .filter(|row| row[..m].iter().all(Zero::is_zero))
        .map(|row| row[m..].to_vec())
        .collect()
}

/// Fraction-free Gaussian elimination.
pub fn det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: IntMatrix = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Absolute determinant of the lattice with HNF basis `h` of full rank.
pub fn hnf_index(h: &[Vec<BigInt>]) -> BigInt {
    h.iter().map(|r| r[pivot_col(r).unwrap()].clone()).product()
}

pub fn gram(rows: &[Vec<BigInt>]) -> IntMatrix {
    rows.iter().map(|u| rows.iter().map(|v| dot(u, v)).collect()).collect()
}

pub fn dot(u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Gcd of all entries, always non-negative.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hnf_of_small_lattice() {
        let h = hnf(&to_int_matrix(&[vec![2, 4], vec![3, 1], vec![5, 5]]));
        assert_eq!(h, to_int_matrix(&[vec![1, 7], vec![0, 10]]));
        assert!(in_lattice(&h, &to_int_matrix(&[vec![5, 5]])[0]));
        assert!(!in_lattice(&h, &to_int_matrix(&[vec![0, 5]])[0]));
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let k = kernel(&to_int_matrix(&[vec![2, 3, 5]]));
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((BigInt::from(2) * &v[0] + BigInt::from(3) * &v[1] + BigInt::from(5) * &v[2]).is_zero());
        }
        // primitive: the 2x2 minors have gcd 1
        let minors: Vec<BigInt> = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| &k[0][i] * &k[1][j] - &k[0][j] * &k[1][i])
            .collect();
        assert!(content(&minors).is_one());
    }

    proptest! {
        #[test]
        fn hnf_preserves_determinant(entries in prop::collection::vec(-20i64..20, 9)) {
            let m: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let m = to_int_matrix(&m);
            let d = det(&m);
            let h = hnf(&m);
            if d.is_zero() {
                prop_assert!(h.len() < 3);
            } else {
                prop_assert_eq!(h.len(), 3);
                prop_assert_eq!(hnf_index(&h), d.abs());
                for row in &m {
                    prop_assert!(in_lattice(&h, row));
                }
            }
        }
    }
}
