//! Sylvester resultants and discriminants via fraction-free elimination.

use num_traits::Zero;

use super::multipoly::MultiPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

pub type PolyMatrix = Vec<Vec<MultiPoly>>;

/// Sylvester matrix of `f` and `g` with respect to `var`, rows of `f` first.
pub fn sylvester_matrix(f: &MultiPoly, g: &MultiPoly, var: &str) -> PolyMatrix {
    let fc = f.coeffs_in(var);
    let gc = g.coeffs_in(var);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![MultiPoly::zero(); size];
        for (k, c) in fc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![MultiPoly::zero(); size];
        for (k, c) in gc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant by Bareiss fraction-free elimination; every division is exact.
pub fn det_bareiss(matrix: &PolyMatrix) -> Result<MultiPoly> {
    let n = matrix.len();
    if n == 0 {
        return Ok(MultiPoly::one());
    }
    let mut a = matrix.clone();
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return Ok(MultiPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.divexact(&prev)?;
            }
        }
        prev = a[k][k].clone();
        for row in a.iter_mut().skip(k + 1) {
            row[k] = MultiPoly::zero();
        }
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign { d.neg() } else { d })
}

/// Determinant by cofactor expansion along the first row (small matrices, oracle use).
pub fn det_laplace(matrix: &PolyMatrix) -> MultiPoly {
    let n = matrix.len();
    match n {
        0 => MultiPoly::one(),
        1 => matrix[0][0].clone(),
        _ => {
            let mut acc = MultiPoly::zero();
            for j in 0..n {
                if matrix[0][j].is_zero() {
                    continue;
                }
                let term = matrix[0][j].mul(&det_laplace(&minor_matrix(matrix, 0, j)));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Matrix with row `r` and column `c` removed.
pub fn minor_matrix(matrix: &PolyMatrix, r: usize, c: usize) -> PolyMatrix {
    matrix
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Signed cofactor `(-1)^(r+c) * minor(r, c)`.
pub fn cofactor(matrix: &PolyMatrix, r: usize, c: usize) -> Result<MultiPoly> {
    let m = det_bareiss(&minor_matrix(matrix, r, c))?;
    Ok(if (r + c) % 2 == 0 { m } else { m.neg() })
}

/// Sylvester resultant eliminating `var`.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, var: &str) -> Result<MultiPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.contains_var(var) && !g.contains_var(var) {
        return Err(Error::Invalid(format!("variable {var} occurs in neither polynomial")));
    }
    det_bareiss(&sylvester_matrix(f, g, var))
}

/// Discriminant in `var`: `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant_in(f: &MultiPoly, var: &str) -> Result<MultiPoly> {
    let n = f.degree_in(var);
    if n < 2 {
        return Err(Error::DegreeTooLow(format!("degree {n} in {var}")));
    }
    let lc = f.coeffs_in(var).pop().unwrap();
    let r = resultant(f, &f.derivative(var), var)?.divexact(&lc)?;
    Ok(if (n * (n - 1) / 2) % 2 == 1 { r.neg() } else { r })
}

/// Discriminant of a univariate polynomial.
pub fn discriminant(f: &MultiPoly) -> Result<Rational> {
    let var = match f.vars() {
        [v] => v.clone(),
        _ => return Err(Error::DegreeTooLow("not a univariate polynomial of degree at least 2".into())),
    };
    let d = discriminant_in(f, &var)?;
    Ok(d.constant_value().unwrap_or_else(Rational::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse_poly;
    use crate::exactalg::rational::rat;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn resultant_of_linear_and_quadratic() {
        assert_eq!(resultant(&p("x-2"), &p("x^2+1"), "x").unwrap(), MultiPoly::int(5));
    }

    #[test]
    fn resultant_of_polynomial_with_itself_vanishes() {
        assert!(resultant(&p("x^3-x+7"), &p("x^3-x+7"), "x").unwrap().is_zero());
    }

    #[test]
    fn zero_inputs_rejected() {
        assert_eq!(resultant(&MultiPoly::zero(), &p("x"), "x"), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn known_discriminants() {
        assert_eq!(discriminant(&p("x^2+1")).unwrap(), rat(-4));
        assert_eq!(discriminant(&p("x^4+2")).unwrap(), rat(2048));
        assert_eq!(discriminant(&p("x^4+x^3+x^2+x+1")).unwrap(), rat(125));
        assert!(matches!(discriminant(&p("x+1")), Err(Error::DegreeTooLow(_))));
    }

    #[test]
    fn quadratic_discriminant_in_parameter_ring() {
        let d = discriminant_in(&p("a*x^2 + b*x + c"), "x").unwrap();
        assert_eq!(d, p("b^2 - 4*a*c"));
    }

    #[test]
    fn bareiss_matches_laplace_oracle() {
        let fx = p("x^4+2");
        let m = sylvester_matrix(&fx, &fx.derivative("x"), "x");
        assert_eq!(det_bareiss(&m).unwrap(), det_laplace(&m));
        let f = p("a*x^2 + b*x + c");
        let g = p("d*x^2 + e*x + 1");
        let m = sylvester_matrix(&f, &g, "x");
        assert_eq!(det_bareiss(&m).unwrap(), det_laplace(&m));
    }
}
