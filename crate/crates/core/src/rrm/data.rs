use std::io::{self, Write};
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{AgmError, Result};
use crate::scalar::Scalar;

/// Examples as rows of `x`, targets in `y` (`±1` for classification).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    pub x: Array2<T>,
    pub y: Array1<T>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(x: Array2<T>, y: Array1<T>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(AgmError::Input(format!("{} rows but {} targets", x.nrows(), y.len())));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(AgmError::Input("dataset contains non-finite values".into()));
        }
        Ok(Self { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Labels as `±1`, rejecting anything else.
    pub fn labels(&self) -> Result<Vec<i8>> {
        self.y
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if v == T::one() {
                    Ok(1)
                } else if v == -T::one() {
                    Ok(-1)
                } else {
                    Err(AgmError::Input(format!("example {i}: label {v} is not +1 or -1")))
                }
            })
            .collect()
    }

    /// `(n₊, n₋)`.
    pub fn class_counts(&self) -> Result<(usize, usize)> {
        let l = self.labels()?;
        let pos = l.iter().filter(|&&v| v == 1).count();
        Ok((pos, l.len() - pos))
    }

    /// `R = maxᵢ ‖xᵢ‖₂`.
    pub fn max_row_norm(&self) -> T {
        self.x.rows().into_iter().map(|r| r.dot(&r).sqrt()).fold(T::zero(), T::max)
    }
}

/// Parses `<label> <idx>:<val> ...` lines with 1-based feature indices.
///
/// Blank lines and `#` comments are skipped. The feature count is the largest
/// index seen unless `n_features` is given.
pub fn parse_libsvm<T: Scalar>(text: &str, n_features: Option<usize>) -> Result<Dataset<T>> {
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut max_idx = 0;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| AgmError::Input(format!("line {}: {msg}", ln + 1));
        let mut toks = line.split_whitespace();
        let label: f64 = toks
            .next()
            .unwrap()
            .parse()
            .map_err(|_| err(format!("bad label {:?}", line.split_whitespace().next().unwrap())))?;
        if !label.is_finite() {
            return Err(err("label is not finite".into()));
        }
        let mut feats = Vec::new();
        let mut last = 0;
        for tok in toks {
            let (i, v) = tok.split_once(':').ok_or_else(|| err(format!("expected idx:val, got {tok:?}")))?;
            let idx: usize = i.parse().map_err(|_| err(format!("bad feature index {i:?}")))?;
            if idx == 0 {
                return Err(err("feature indices are 1-based".into()));
            }
            if idx <= last {
                return Err(err(format!("feature index {idx} out of order")));
            }
            let val: f64 = v.parse().map_err(|_| err(format!("bad feature value {v:?}")))?;
            if !val.is_finite() {
                return Err(err(format!("feature {idx} is not finite")));
            }
            if let Some(p) = n_features {
                if idx > p {
                    return Err(err(format!("feature index {idx} exceeds {p}")));
                }
            }
            last = idx;
            max_idx = max_idx.max(idx);
            feats.push((idx - 1, val));
        }
        labels.push(label);
        rows.push(feats);
    }
    if rows.is_empty() {
        return Err(AgmError::Input("no examples".into()));
    }
    let p = n_features.unwrap_or(max_idx);
    let mut x = Array2::zeros((rows.len(), p));
    for (r, feats) in rows.iter().enumerate() {
        for &(j, v) in feats {
            x[[r, j]] = T::lit(v);
        }
    }
    Dataset::new(x, labels.into_iter().map(T::lit).collect())
}

pub fn read_libsvm<T: Scalar>(path: &Path, n_features: Option<usize>) -> Result<Dataset<T>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AgmError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_libsvm(&text, n_features)
}

/// Writes the dataset in LibSVM format, skipping zero features.
pub fn write_libsvm<T: Scalar, W: Write>(data: &Dataset<T>, out: &mut W) -> io::Result<()> {
    for (row, y) in data.x.rows().into_iter().zip(data.y.iter()) {
        write!(out, "{y}")?;
        for (j, v) in row.iter().enumerate() {
            if *v != T::zero() {
                write!(out, " {}:{v}", j + 1)?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Writes `p λ b` followed by one weight per line.
pub fn write_model<T: Scalar, W: Write>(w: ArrayView1<T>, lambda: T, bias: T, out: &mut W) -> io::Result<()> {
    writeln!(out, "{} {lambda} {bias}", w.len())?;
    for v in w.iter() {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

/// Reads what [`write_model`] wrote: `(w, λ, b)`.
pub fn parse_model<T: Scalar>(text: &str) -> Result<(Array1<T>, T, T)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| AgmError::Input("empty model file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(AgmError::Input("line 1: expected `p lambda b`".into()));
    }
    let bad = |l: usize| AgmError::Input(format!("line {l}: not a number"));
    let p: usize = parts[0].parse().map_err(|_| bad(1))?;
    let lambda: f64 = parts[1].parse().map_err(|_| bad(1))?;
    let bias: f64 = parts[2].parse().map_err(|_| bad(1))?;
    let w: Vec<T> = lines
        .enumerate()
        .map(|(i, l)| l.trim().parse::<f64>().map(T::lit).map_err(|_| bad(i + 2)))
        .collect::<Result<_>>()?;
    if w.len() != p {
        return Err(AgmError::Input(format!("header says {p} weights, found {}", w.len())));
    }
    Ok((Array1::from(w), T::lit(lambda), T::lit(bias)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn parse_and_roundtrip() {
        let d: Dataset<f64> = parse_libsvm("+1 1:0.5 3:-1\n-1 2:2\n\n# comment\n", None).unwrap();
        assert_eq!(d.x, array![[0.5, 0.0, -1.0], [0.0, 2.0, 0.0]]);
        assert_eq!(d.y, array![1.0, -1.0]);
        let mut buf = Vec::new();
        write_libsvm(&d, &mut buf).unwrap();
        let back: Dataset<f64> = parse_libsvm(std::str::from_utf8(&buf).unwrap(), Some(3)).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_libsvm::<f64>("1 1:1\n1 0:2\n", None).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = parse_libsvm::<f64>("1 1:1\n\nx 1:2\n", None).unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse_libsvm::<f64>("1 2:1 1:1\n", None).unwrap_err();
        assert!(e.to_string().contains("out of order"), "{e}");
        assert!(parse_libsvm::<f64>("", None).is_err());
    }

    #[test]
    fn model_roundtrip() {
        let mut buf = Vec::new();
        write_model(array![1.5, -2.0].view(), 0.01, 0.25, &mut buf).unwrap();
        let (w, l, b) = parse_model::<f64>(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(w, array![1.5, -2.0]);
        assert_eq!((l, b), (0.01, 0.25));
    }
}
