//! Closed forms in the symbols `a0..a3, c0..c3`, used as independent references.

use crate::exactalg::multipoly::MultiPoly;
use crate::exactalg::parse::parse_poly;
use crate::quartic::Coeffs;

pub const Q3: &str = "a2^2 - a1*a3 - c3*a2*a3 + c2*a3^2";

pub const B13: &str = "-a2*a0^2 + (a1^2 + c3*a1*a2 + (-c3^2 + c2)*a2^2 + (-2*c2)*a1*a3 + (c3^3 - c2*c3 + c1)*a2*a3 + (-c2*c3^2 + c2^2 + c1*c3 - c0)*a3^2 )*a0 + (-c3)*a1^3 + c3^2*a1^2*a2 + (-c2*c3)*a1*a2^2 + (c1*c3 - c0)*a2^3 + (-c3^3 + 2*c2*c3)*a1^2*a3 + (c2*c3^2 - 3*c1*c3 + 2*c0)*a1*a2*a3 + (-c1*c3^2 + 2*c0*c3)*a2^2*a3 + (-c2^2*c3 + 2*c1*c3^2 - 2*c0*c3)*a1*a3^2 + (c1*c2*c3 - c0*c3^2 - c0*c2)*a2*a3^2 + (-c1^2*c3 + c0*c2*c3 + c0*c1)*a3^3";

pub const B14: &str = "-a3*a0^2 + (2*a1*a2 -c3*a2^2 -c3*a1*a3 + c3^2*a2*a3 + (-c2*c3 + 2*c1)*a3^2 )*a0 - a1^3 + c3*a1^2*a2 -c2*a1*a2^2 + c1*a2^3 + (-c3^2 + 2*c2)*a1^2*a3 + (c2*c3 - 3*c1)*a1*a2*a3 + (-c1*c3 + c0)*a2^2*a3 + (-c2^2 + 2*c1*c3 - c0)*a1*a3^2 +(c1*c2 - c0*c3)*a2*a3^2 + (-c1^2 + c0*c2)*a3^3";

pub const U1: &str = "-a1^2*a3^2 + 2*a1*a2^2*a3 -2*c3*a1*a2*a3^2 + 2*c2*a1*a3^3 -c3*a2^3*a3 + (2*c3^2 - c2)*a2^2*a3^2 + (-c3^3 + c1)*a2*a3^3 + (c2*c3^2 - c2^2 - c1*c3 + c0)*a3^4";

pub const U: &str = "a0*(-a1^2*a3^2 + 2*a1*a2^2*a3 -2*c3*a1*a2*a3^2 + 2*c2*a1*a3^3 -c3*a2^3*a3 + (2*c3^2 - c2)*a2^2*a3^2 + (-c3^3 + c1)*a2*a3^3 + (c2*c3^2 - c2^2 - c1*c3 + c0)*a3^4 ) +3*a1^3*a2*a3 -2*c3*a1^3*a3^2 -4*a1^2*a2^3 + 4*c3*a1^2*a2^2*a3 + (c3^2 - 6*c2)*a1^2*a2*a3^2 + (-c3^3 + 3*c2*c3 + 2*c1)*a1^2*a3^3 + 4*c3*a1*a2^4 + (-9*c3^2 + 3*c2)*a1*a2^3*a3 + (6*c3^3 + c2*c3 - 3*c1)*a1*a2^2*a3^2 + (-c3^4 - 5*c2*c3^2 + 3*c2^2 + 2*c1*c3 + c0)*a1*a2*a3^3 + (c2*c3^3 + c1*c3^2 - 4*c1*c2 - c0*c3)*a1*a3^4 -c3^2*a2^5 + (3*c3^3 - c2*c3 - c1)*a2^4*a3 + (-3*c3^4 + 5*c1*c3 - 2*c0)*a2^3*a3^2 + (c3^5 + 3*c2*c3^3 - 2*c2^2*c3 - 7*c1*c3^2 + c1*c2 + 4*c0*c3)*a2^2*a3^3 + (-2*c2*c3^4 + c2^2*c3^2 + 3*c1*c3^3 + 2*c1*c2*c3 - 2*c0*c3^2 - c1^2 - 2*c0*c2)*a2*a3^4 + (c2^2*c3^3 - c2^3*c3 - 3*c1*c2*c3^2 + 2*c1*c2^2 + c1^2*c3 + 2*c0*c2*c3 - c0*c1)*a3^5";

pub const V: &str = "a0*(a1^2*a2*a3 -2*a1*a2^3 + 2*c3*a1*a2^2*a3 -2*c2*a1*a2*a3^2 + c3*a2^4 + (-2*c3^2 + c2)*a2^3*a3 + (c3^3 - c1)*a2^2*a3^2 + (-c2*c3^2 + c2^2 + c1*c3 - c0)*a2*a3^3 ) -a1^4*a3 + a1^3*a2^2 -2*c3*a1^3*a2*a3 + 4*c2*a1^3*a3^2 + 2*c3*a1^2*a2^3 + (-c3^2 - 4*c2)*a1^2*a2^2*a3 + (-c3^3 + 5*c2*c3)*a1^2*a2*a3^2 + (2*c2*c3^2 - 6*c2^2 - 2*c1*c3 + 2*c0)*a1^2*a3^3 + (-3*c3^2 + c2)*a1*a2^4 + (6*c3^3 - c2*c3 - c1)*a1*a2^3*a3 + (-3*c3^4 - 7*c2*c3^2 + 5*c2^2 + 6*c1*c3 - 5*c0)*a1*a2^2*a3^2 + (7*c2*c3^3 - 4*c2^2*c3 - 5*c1*c3^2 + 5*c0*c3)*a1*a2*a3^3 + (-4*c2^2*c3^2 + 4*c2^3 + 4*c1*c2*c3 - 4*c0*c2)*a1*a3^4 + (c3^3 - c2*c3 + c1)*a2^5 + (-3*c3^4 + 4*c2*c3^2 - c2^2 - 3*c1*c3 + 2*c0)*a2^4*a3 +(3*c3^5 - 3*c2*c3^3 + c1*c3^2 + c1*c2 - 2*c0*c3)*a2^3*a3^2 + (-c3^6 - 2*c2*c3^4 + 5*c2^2*c3^2 + 3*c1*c3^3 - 2*c2^3 - 4*c1*c2*c3 - 2*c0*c3^2 + 4*c0*c2)*a2^2*a3^3 +(2*c2*c3^5 - 3*c2^2*c3^3 - 2*c1*c3^4 + c2^3*c3 + c1*c2*c3^2 + 2*c0*c3^3 + c1^2*c3 - 2*c0*c2*c3 - c0*c1)*a2*a3^4 + (-c2^2*c3^4 + 2*c2^3*c3^2 + 2*c1*c2*c3^3 - c2^4 - 2*c1*c2^2*c3 - c1^2*c3^2 - 2*c0*c2*c3^2 + 2*c0*c2^2 + 2*c0*c1*c3 - c0^2)*a3^5";

/// `h`, written in the `c_i` alone.
pub const H: &str = "-4*a1^2 + 4*c3*a1*a2 + (-3*c3^2 + 4*c2)*a1*a3 - c3^2*a2^2 + (c3^3 - 4*c1)*a2*a3 + (-c2*c3^2 + 4*c1*c3 - 4*c0)*a3^2";

pub fn symbolic(form: &str) -> MultiPoly {
    parse_poly(form).expect("closed form parses")
}

/// A closed form with the `c_i` replaced by the given integers.
pub fn specialize(form: &str, c: &Coeffs) -> MultiPoly {
    let p = symbolic(form);
    let vals: Vec<(&str, crate::exactalg::Rational)> = ["c0", "c1", "c2", "c3"]
        .iter()
        .zip(c)
        .map(|(n, &v)| (*n, crate::exactalg::rational::rat(v)))
        .collect();
    p.substitute_values(&vals)
}
