//! Structure constants of a basis of a quartic order, the product `d ⋄ e`, and the lattices
//! `Λ_d`, `Λ_{b1,b2}` with exact determinants and shortest vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::intmat::{content, det, dot, gram, hnf, kernel};
use crate::exactalg::rational::{from_int, to_string_frac, Rational};
use crate::exactalg::UPoly;

pub type Vec4 = [BigInt; 4];

pub fn vec4(v: [i64; 4]) -> Vec4 {
    v.map(BigInt::from)
}

fn norm_sq(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

/// `λ_{ijk}` with `ν_i ν_j = Σ_k λ_{ijk} ν_k` (indices from 0), plus the lcm of their denominators.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    pub lambda: [[[Rational; 4]; 4]; 4],
    pub denom: BigInt,
}

impl Serialize for StructureConstants {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let l: Vec<Vec<Vec<String>>> = self
            .lambda
            .iter()
            .map(|a| a.iter().map(|b| b.iter().map(to_string_frac).collect()).collect())
            .collect();
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("StructureConstants", 2)?;
        st.serialize_field("lambda", &l)?;
        st.serialize_field("denom", &self.denom.to_string())?;
        st.end()
    }
}

fn zero4() -> [Rational; 4] {
    std::array::from_fn(|_| Rational::zero())
}

/// Solve `x W = c` for the row vector `x`, `W` given by rows; `None` if singular.
fn solve_rows(w: &[[Rational; 4]; 4], c: &[Rational; 4]) -> Option<[Rational; 4]> {
    // transpose: W^T x^T = c^T
    let mut a: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| w[j][i].clone()).chain([c[i].clone()]).collect()).collect();
    for col in 0..4 {
        let piv = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(std::array::from_fn(|i| a[i][4].clone()))
}

/// Power-basis coordinates of `x y` modulo the monic quartic `m`.
fn mul_mod_minpoly(m: &[Rational], x: &[Rational; 4], y: &[Rational; 4]) -> [Rational; 4] {
    let mut prod: Vec<Rational> = vec![Rational::zero(); 7];
    for i in 0..4 {
        for j in 0..4 {
            prod[i + j] += &x[i] * &y[j];
        }
    }
    for k in (4..7).rev() {
        let top = std::mem::take(&mut prod[k]);
        for i in 0..4 {
            prod[k - 4 + i] -= &top * &m[i];
        }
    }
    std::array::from_fn(|i| prod[i].clone())
}

/// Structure constants of `ν_i = Σ_k w_{ik} θ^k` with `m(θ) = 0`.
pub fn structure_constants(minpoly: &UPoly, basis: &[[Rational; 4]; 4]) -> Result<StructureConstants> {
    if minpoly.degree() != 4 || !minpoly.lc().is_one() {
        return Err(Error::Invalid("minimal polynomial must be monic of degree 4".into()));
    }
    let m = &minpoly.0;
    let mut lambda: [[[Rational; 4]; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| zero4()));
    for i in 0..4 {
        for j in 0..4 {
            let prod = mul_mod_minpoly(m, &basis[i], &basis[j]);
            lambda[i][j] = solve_rows(basis, &prod).ok_or(Error::SingularBasis)?;
        }
    }
    let denom = lambda.iter().flatten().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    Ok(StructureConstants { lambda, denom })
}

/// `(1, θ, θ^2, θ^3)`.
pub fn power_basis() -> [[Rational; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|k| if i == k { Rational::one() } else { Rational::zero() }))
}

/// Parse a basis such as `1; x; x^2/2 + x/2; x^3` into power-basis coordinates.
pub fn parse_basis(s: &str) -> Result<[[Rational; 4]; 4]> {
    let parts: Vec<&str> = s.split(';').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!("expected four basis elements separated by ';', got {}", parts.len())));
    }
    let mut out = power_basis();
    for (i, part) in parts.iter().enumerate() {
        let p = crate::exactalg::parse_univariate(part, "x")?;
        let u = UPoly::from_multipoly(&p, "x")?;
        if u.degree() > 3 {
            return Err(Error::Parse(format!("basis element {part} has degree above 3")));
        }
        out[i] = std::array::from_fn(|k| u.0.get(k).cloned().unwrap_or_else(Rational::zero));
    }
    Ok(out)
}

impl StructureConstants {
    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.lambda[i][j] == self.lambda[j][i]))
    }

    /// `(ν_i ν_j) ν_k = ν_i (ν_j ν_k)` for every basis triple.
    pub fn is_associative(&self) -> bool {
        let l = &self.lambda;
        (0..4).all(|i| {
            (0..4).all(|j| {
                (0..4).all(|k| {
                    (0..4).all(|t| {
                        let lhs: Rational = (0..4).map(|s| &l[i][j][s] * &l[s][k][t]).sum();
                        let rhs: Rational = (0..4).map(|s| &l[j][k][s] * &l[i][s][t]).sum();
                        lhs == rhs
                    })
                })
            })
        })
    }

    /// `λ_{0jk} = δ_{jk}`, which holds when `ν_1 = 1`.
    pub fn first_is_unit(&self) -> bool {
        (0..4).all(|j| (0..4).all(|k| self.lambda[0][j][k] == if j == k { Rational::one() } else { Rational::zero() }))
    }

    /// `T(d)_j = Σ_i λ_{ij4} d_i` scaled by [`Self::denom`].
    pub fn t_vector(&self, d: &Vec4) -> Vec4 {
        let den = from_int(&self.denom);
        std::array::from_fn(|j| {
            let s: Rational = (0..4).map(|i| &self.lambda[i][j][3] * from_int(&d[i])).sum();
            (s * &den).to_integer()
        })
    }

    /// `denom^2 Σ_{ij} λ_{ij4}^2`, so that `‖T(d)‖^2 <= bound * ‖d‖^2`.
    pub fn t_bound_sq(&self) -> Rational {
        let den = from_int(&self.denom);
        let s: Rational = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| &self.lambda[i][j][3] * &self.lambda[i][j][3]).sum();
        s * &den * &den
    }
}

/// `Σ_{ij} λ_{ijk} d_i e_j`.
pub fn diamond(d: &Vec4, e: &Vec4, sc: &StructureConstants) -> [Rational; 4] {
    std::array::from_fn(|k| {
        let mut s = Rational::zero();
        for i in 0..4 {
            for j in 0..4 {
                if !d[i].is_zero() && !e[j].is_zero() {
                    s += &sc.lambda[i][j][k] * from_int(&(&d[i] * &e[j]));
                }
            }
        }
        s
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    pub basis: Vec<Vec<BigInt>>,
    pub rank: usize,
    pub gram_det: BigInt,
}

impl IntLattice {
    pub fn new(generators: &[Vec<BigInt>]) -> Self {
        let basis = hnf(generators);
        let gram_det = det(&gram(&basis));
        IntLattice { rank: basis.len(), basis, gram_det }
    }

    /// Lattice with a given basis; `SingularBasis` if dependent.
    pub fn from_basis(basis: Vec<Vec<BigInt>>) -> Result<Self> {
        let gram_det = det(&gram(&basis));
        if gram_det.is_zero() && !basis.is_empty() {
            return Err(Error::SingularBasis);
        }
        Ok(IntLattice { rank: basis.len(), basis, gram_det })
    }
}

impl Serialize for IntLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let b: Vec<Vec<String>> = self.basis.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        let mut st = s.serialize_struct("IntLattice", 3)?;
        st.serialize_field("basis", &b)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("gram_det", &self.gram_det.to_string())?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectionLattice {
    pub lattice: IntLattice,
    #[serde(serialize_with = "ser_vec")]
    pub t: Vec4,
    #[serde(serialize_with = "ser_vec")]
    pub z1: Vec<BigInt>,
    /// `gram_det = (‖T‖ / content(T))^2`
    pub det_formula_holds: bool,
    /// every basis vector `b` has `(b ⋄ d)_4 = 0`
    pub kernel_holds: bool,
}

fn ser_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// `Λ_d = {e : (d ⋄ e)_4 = 0}` with its determinant and a shortest vector.
pub fn lattice_ld(d: &Vec4, sc: &StructureConstants) -> Result<DirectionLattice> {
    if d.iter().all(Zero::is_zero) {
        return Err(Error::Invalid("d = 0".into()));
    }
    let t = sc.t_vector(d);
    if t.iter().all(Zero::is_zero) {
        return Err(Error::DegenerateDirection);
    }
    let basis = kernel(&[t.to_vec()]);
    let lattice = IntLattice::from_basis(basis)?;
    let c = content(&t);
    let expected = norm_sq(&t) / (&c * &c);
    let det_formula_holds = norm_sq(&t).is_multiple_of(&(&c * &c)) && lattice.gram_det == expected && lattice.rank == 3;
    let kernel_holds = lattice.basis.iter().all(|b| {
        let b4: Vec4 = std::array::from_fn(|i| b[i].clone());
        diamond(&b4, d, sc)[3].is_zero()
    });
    let z1 = shortest_vector(&lattice)?;
    Ok(DirectionLattice { lattice, t, z1, det_formula_holds, kernel_holds })
}

/// The six `2 x 2` minors of the rows `b1`, `b2`.
pub fn minors(b1: &Vec4, b2: &Vec4) -> [BigInt; 6] {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    pairs.map(|(i, j)| &b1[i] * &b2[j] - &b1[j] * &b2[i])
}

#[derive(Clone, Debug, Serialize)]
pub struct PairLattice {
    pub lattice: IntLattice,
    #[serde(serialize_with = "ser_str")]
    pub wedge_sq: BigInt,
    #[serde(serialize_with = "ser_str")]
    pub d: BigInt,
    /// `gram_det * D^2 = wedge_sq`
    pub wedge_identity_holds: bool,
}

fn ser_str<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `Λ_{b1,b2} = {x : (x ⋄ b1)_4 = (x ⋄ b2)_4 = 0}` with `∧(b1, b2)^2` and the gcd `D` of the minors.
pub fn lattice_lb1b2(b1: &Vec4, b2: &Vec4, sc: &StructureConstants) -> Result<PairLattice> {
    let mins = minors(b1, b2);
    let wedge_sq: BigInt = mins.iter().map(|m| m * m).sum();
    if wedge_sq.is_zero() {
        return Err(Error::Collinear);
    }
    let d = content(&mins);
    // (x ⋄ b)_4 = Σ_{ij} λ_{ij4} x_i b_j = T(b) . x by symmetry of λ
    let rows = vec![sc.t_vector(b1).to_vec(), sc.t_vector(b2).to_vec()];
    let lattice = IntLattice::from_basis(kernel(&rows))?;
    let wedge_identity_holds = &lattice.gram_det * &d * &d == wedge_sq;
    Ok(PairLattice { lattice, wedge_sq, d, wedge_identity_holds })
}

/// Exact LLL reduction (`δ = 3/4`) of independent integer rows.
pub fn lll(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut b: Vec<Vec<BigInt>> = basis.to_vec();
    let n = b.len();
    if n <= 1 {
        return b;
    }
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&b);
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
            }
        }
        let (mu, bstar) = gram_schmidt(&b);
        let lhs = &bstar[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1];
        if lhs >= &rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = k.saturating_sub(1).max(1);
        }
    }
    b
}

/// Gram-Schmidt coefficients `μ_{ij}` and squared norms `‖b_i*‖^2`.
fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = b.len();
    let g = gram(b);
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut bstar = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = from_int(&g[i][j]);
            for k in 0..j {
                s -= &mu[j][k] * &mu[i][k] * &bstar[k];
            }
            mu[i][j] = s / &bstar[j];
        }
        let mut s = from_int(&g[i][i]);
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &bstar[k];
        }
        bstar[i] = s;
        mu[i][i] = Rational::one();
    }
    (mu, bstar)
}

/// Sign-normalised so the first nonzero entry is positive.
fn normalize_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Minimum-norm nonzero vector over the coefficient box `|x_i|^2 <= R^2 (G^{-1})_{ii}` of `basis`;
/// among equal norms the sign-normalised, lexicographically greatest vector wins.
pub fn shortest_in_box(basis: &[Vec<BigInt>]) -> Result<Vec<BigInt>> {
    let n = basis.len();
    if n == 0 {
        return Err(Error::EmptyLattice);
    }
    let g = gram(basis);
    let gdet = det(&g);
    if gdet.is_zero() {
        return Err(Error::SingularBasis);
    }
    let r2 = (0..n).map(|i| g[i][i].clone()).min().unwrap();
    let bounds: Vec<i64> = (0..n)
        .map(|i| {
            let minor: Vec<Vec<BigInt>> =
                (0..n).filter(|&r| r != i).map(|r| (0..n).filter(|&c| c != i).map(|c| g[r][c].clone()).collect()).collect();
            let cof = det(&minor);
            let x2 = (&r2 * cof).div_floor(&gdet);
            i64::try_from(x2.sqrt()).expect("coefficient bound fits")
        })
        .collect();
    let dim = basis[0].len();
    let mut best: Option<(BigInt, Vec<BigInt>)> = None;
    let mut x = bounds.iter().map(|b| -b).collect::<Vec<i64>>();
    loop {
        if x.iter().any(|&c| c != 0) {
            let v: Vec<BigInt> = (0..dim).map(|k| (0..n).map(|i| &basis[i][k] * x[i]).sum()).collect();
            let nv = norm_sq(&v);
            let v = normalize_sign(v);
            let better = match &best {
                None => true,
                Some((bn, bv)) => nv < *bn || (nv == *bn && v > *bv),
            };
            if better {
                best = Some((nv, v));
            }
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == n {
                return Ok(best.expect("box contains a basis vector").1);
            }
            if x[i] < bounds[i] {
                x[i] += 1;
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

/// Shortest nonzero vector of `L` (exact, LLL-reduced first).
pub fn shortest_vector(l: &IntLattice) -> Result<Vec<BigInt>> {
    if l.rank == 0 {
        return Err(Error::EmptyLattice);
    }
    shortest_in_box(&lll(&l.basis))
}
