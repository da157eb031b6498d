//! Plain-text instance formats.
//!
//! QP: header `n z`, then `n` lines `d m l u sigma`.
//! Elastic-net ball: header `gamma radius`, then one entry of `g` per line.
//! Blank lines and `#` comments are ignored.

use ndarray::Array1;

use super::elastic::ElasticNetBall;
use super::qp::BoxHyperplaneQp;
use crate::error::{AgmError, Result};
use crate::scalar::Scalar;

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn numbers<T: Scalar>(line: usize, s: &str, want: usize) -> Result<Vec<T>> {
    let vals: Vec<T> = s
        .split_whitespace()
        .map(|t| t.parse::<f64>().map(T::lit).map_err(|_| AgmError::Input(format!("line {line}: bad number {t:?}"))))
        .collect::<Result<_>>()?;
    if vals.len() != want {
        return Err(AgmError::Input(format!("line {line}: expected {want} numbers, found {}", vals.len())));
    }
    Ok(vals)
}

pub fn parse_qp<T: Scalar>(text: &str) -> Result<BoxHyperplaneQp<T>> {
    let mut lines = numbered_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| AgmError::Input("empty QP instance".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(AgmError::Input(format!("line {ln}: expected header `n z`")));
    }
    let n: usize = parts[0].parse().map_err(|_| AgmError::Input(format!("line {ln}: bad n {:?}", parts[0])))?;
    let z: f64 = parts[1].parse().map_err(|_| AgmError::Input(format!("line {ln}: bad z {:?}", parts[1])))?;
    let mut cols: [Vec<T>; 5] = Default::default();
    for c in cols.iter_mut() {
        c.reserve(n);
    }
    for (ln, line) in lines {
        let v = numbers::<T>(ln, line, 5)?;
        for (c, x) in cols.iter_mut().zip(v) {
            c.push(x);
        }
    }
    if cols[0].len() != n {
        return Err(AgmError::Input(format!("header says n = {n}, found {} coordinates", cols[0].len())));
    }
    let [d, m, l, u, sigma] = cols.map(Array1::from);
    Ok(BoxHyperplaneQp { d, m, l, u, sigma, z: T::lit(z) })
}

pub fn format_qp<T: Scalar>(qp: &BoxHyperplaneQp<T>) -> String {
    let mut s = format!("{} {}\n", qp.len(), qp.z);
    for i in 0..qp.len() {
        s.push_str(&format!("{} {} {} {} {}\n", qp.d[i], qp.m[i], qp.l[i], qp.u[i], qp.sigma[i]));
    }
    s
}

pub fn parse_elastic_ball<T: Scalar>(text: &str) -> Result<(Array1<T>, ElasticNetBall<T>)> {
    let mut lines = numbered_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| AgmError::Input("empty ball instance".into()))?;
    let h = numbers::<T>(ln, header, 2)?;
    let ball = ElasticNetBall::new(h[0], h[1])?;
    let g: Vec<T> = lines.map(|(ln, l)| numbers::<T>(ln, l, 1).map(|v| v[0])).collect::<Result<_>>()?;
    if g.is_empty() {
        return Err(AgmError::Input("ball instance has no coordinates".into()));
    }
    Ok((Array1::from(g), ball))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qp_roundtrip() {
        let qp: BoxHyperplaneQp<f64> = parse_qp("2 1\n1 0.8 0 1 1\n1 0.4 0 1 1 # second\n").unwrap();
        assert_eq!(qp.m[1], 0.4);
        let back: BoxHyperplaneQp<f64> = parse_qp(&format_qp(&qp)).unwrap();
        assert_eq!(back, qp);
    }

    #[test]
    fn qp_errors() {
        let e = parse_qp::<f64>("2 1\n1 0.8 0 1\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(parse_qp::<f64>("3 1\n1 0.8 0 1 1\n").is_err());
        assert!(parse_qp::<f64>("").is_err());
    }

    #[test]
    fn ball_parse() {
        let (g, b) = parse_elastic_ball::<f64>("0.5 1\n3\n-3\n").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(b.gamma, 0.5);
        assert!(parse_elastic_ball::<f64>("0 1\n3\n").is_err());
    }
}
