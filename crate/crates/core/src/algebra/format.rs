//! Line-oriented text format for algebras.
//!
//! ```text
//! dim 2
//! kind symmetric
//! metric 1 1 1
//! metric 2 2 2
//! tensor k=3 1 1 1 1/2
//! tensor k=2 label=1 1 2 3
//! ```
//!
//! Indices are 1-based. A `metric i j q` line sets both `g_ij` and `g_ji`.
//! Unlisted entries are zero. `kind` defaults to `cyclic`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Kind, Metric, SymAlgebra, Tensor, TensorKey};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational};

pub fn parse_algebra(text: &str) -> Result<SymAlgebra> {
    let mut dim: Option<usize> = None;
    let mut kind = Kind::Cyclic;
    let mut metric: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    let mut tensors: BTreeMap<TensorKey, Vec<(Vec<usize>, Rational)>> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::parse(line_no, msg);
        let words: Vec<&str> = line.split_whitespace().collect();
        let rational = |s: &str| {
            parse_rational(s).ok_or_else(|| err(format!("expected a rational, found `{s}`")))
        };
        let index = |s: &str| -> Result<usize> {
            let n = dim.ok_or_else(|| err("`dim` must come first".into()))?;
            match s.parse::<usize>() {
                Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
                _ => Err(err(format!("index `{s}` is not in 1..={n}"))),
            }
        };
        match words[0] {
            "dim" => match words.as_slice() {
                [_, n] => {
                    if dim.is_some() {
                        return Err(err("`dim` given twice".into()));
                    }
                    dim = Some(n.parse().map_err(|_| err(format!("bad dimension `{n}`")))?);
                }
                _ => return Err(err("expected `dim <n>`".into())),
            },
            "kind" => match words.as_slice() {
                [_, k] => kind = k.parse().map_err(|e: Error| err(e.to_string()))?,
                _ => return Err(err("expected `kind cyclic|symmetric`".into())),
            },
            "metric" => match words.as_slice() {
                [_, i, j, q] => {
                    let (i, j, q) = (index(i)?, index(j)?, rational(q)?);
                    metric.insert((i.min(j), i.max(j)), q);
                }
                _ => return Err(err("expected `metric <i> <j> <rational>`".into())),
            },
            "tensor" => {
                let k: usize = words
                    .get(1)
                    .and_then(|w| w.strip_prefix("k="))
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err("expected `tensor k=<k> ...`".into()))?;
                let mut rest = &words[2..];
                let mut label = None;
                if let Some(l) = rest.first().and_then(|w| w.strip_prefix("label=")) {
                    label = Some(l.parse().map_err(|_| err(format!("bad label `{l}`")))?);
                    rest = &rest[1..];
                }
                if rest.len() != k + 1 {
                    return Err(err(format!("expected {k} indices and a value")));
                }
                let ix = rest[..k]
                    .iter()
                    .map(|w| index(w))
                    .collect::<Result<Vec<_>>>()?;
                let q = rational(rest[k])?;
                tensors
                    .entry(TensorKey { arity: k, label })
                    .or_default()
                    .push((ix, q));
            }
            other => return Err(err(format!("unknown statement `{other}`"))),
        }
    }

    let n = dim.ok_or_else(|| Error::parse(0, "missing `dim`"))?;
    let mut g = vec![vec![Rational::from_integer(0.into()); n]; n];
    for ((i, j), q) in metric {
        g[i][j] = q.clone();
        g[j][i] = q;
    }
    let mut algebra = SymAlgebra::new(Metric::new(g)?, kind);
    for (key, entries) in tensors {
        algebra.insert(key, Tensor::from_entries(n, key.arity, entries)?)?;
    }
    Ok(algebra)
}

pub fn write_algebra(a: &SymAlgebra) -> String {
    let n = a.dim();
    let mut out = format!("dim {n}\nkind {}\n", a.kind());
    for i in 0..n {
        for j in i..n {
            let q = a.metric().lower(i, j);
            if *q != Rational::from_integer(0.into()) {
                writeln!(out, "metric {} {} {q}", i + 1, j + 1).unwrap();
            }
        }
    }
    for (key, t) in a.tensors() {
        for (ix, q) in t.nonzero() {
            let ix: Vec<String> = ix.iter().map(|i| (i + 1).to_string()).collect();
            writeln!(out, "tensor {key} {} {q}", ix.join(" ")).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn parses_a_small_algebra() {
        let a = parse_algebra(
            "# one-dimensional\ndim 1\nkind symmetric\nmetric 1 1 2\ntensor k=4 1 1 1 1 3/2\n",
        )
        .unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(*a.metric().upper(0, 0), ratio(1, 2));
        assert_eq!(
            a.tensor(TensorKey::plain(4)).unwrap().get(&[0, 0, 0, 0]),
            ratio(3, 2)
        );
    }

    #[test]
    fn round_trip() {
        let text = "dim 2\nkind cyclic\nmetric 1 1 1\nmetric 1 2 1/2\nmetric 2 2 1\n\
                    tensor k=2 label=3 1 2 5\ntensor k=2 label=3 2 1 5\n";
        let a = parse_algebra(text).unwrap();
        assert_eq!(parse_algebra(&write_algebra(&a)).unwrap(), a);
        assert_eq!(*a.metric().lower(1, 0), ratio(1, 2));
        assert_eq!(
            a.tensor(TensorKey::labeled(2, 3)).unwrap().get(&[1, 0]),
            int(5)
        );
    }

    #[test]
    fn non_invariant_tensor_is_rejected() {
        let text = "dim 2\nkind symmetric\nmetric 1 1 1\nmetric 2 2 1\ntensor k=2 1 2 1\n";
        assert!(matches!(parse_algebra(text), Err(Error::Domain(_))));
    }

    #[test]
    fn errors_name_the_line() {
        let text = "dim 2\nmetric 1 3 1\n";
        assert!(matches!(
            parse_algebra(text),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_algebra("dim 1\nmetric 1 1 0\n"),
            Err(Error::Degenerate)
        ));
    }
}
