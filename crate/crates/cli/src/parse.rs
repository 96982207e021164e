use quartlab::exactalg::rational::parse_rational;
use quartlab::exactalg::Rational;
use quartlab::experiments::Format;
use quartlab::quartic::parse_quartic;

type Window = (Rational, Rational);

pub fn format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: quartlab::Error| e.to_string())
}

pub fn poly(s: &str) -> Result<[i64; 4], String> {
    parse_quartic(s).map_err(|e| e.to_string())
}

fn ints<const N: usize>(s: &str) -> Result<[i64; N], String> {
    let v: Vec<i64> = s.split(',').map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"))).collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<i64>| format!("expected {N} integers, got {}", v.len()))
}

pub fn vec3(s: &str) -> Result<[i64; 3], String> {
    ints(s)
}

pub fn vec4(s: &str) -> Result<[i64; 4], String> {
    ints(s)
}

pub fn side3(s: &str) -> Result<[u64; 3], String> {
    let v = ints::<3>(s)?;
    if v.iter().any(|&x| x < 1) {
        return Err("box sides must be positive".into());
    }
    Ok(v.map(|x| x as u64))
}

pub fn rationals(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').map(|t| parse_rational(t).map_err(|e| e.to_string())).collect()
}

pub fn window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let lo = parse_rational(lo).map_err(|e| e.to_string())?;
    let hi = parse_rational(hi).map_err(|e| e.to_string())?;
    if lo >= hi {
        return Err(format!("empty window {s:?}"));
    }
    Ok((lo, hi))
}

pub fn windows(s: &str) -> Result<Vec<Window>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(window).collect()
}

pub fn primes(s: &str) -> Result<Vec<(u64, i64)>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let (p, c) = t.split_once(':').ok_or_else(|| format!("expected p:c, got {t:?}"))?;
            let p = p.trim().parse::<u64>().map_err(|e| format!("{p:?}: {e}"))?;
            let c = c.trim().parse::<i64>().map_err(|e| format!("{c:?}: {e}"))?;
            Ok((p, c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(vec3("1, -2,3").unwrap(), [1, -2, 3]);
        assert!(vec4("1,2,3").is_err());
        assert!(side3("1,0,2").is_err());
        assert_eq!(primes("7:1,23:6").unwrap(), vec![(7, 1), (23, 6)]);
        assert!(primes("").unwrap().is_empty());
        assert!(window("1/2:1/3").is_err());
        assert_eq!(poly("2,0,0,0").unwrap(), [2, 0, 0, 0]);
    }
}
