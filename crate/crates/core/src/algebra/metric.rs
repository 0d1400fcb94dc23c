use std::fmt;

use num_traits::{One, Zero};

use super::Tensor;
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Nondegenerate symmetric bilinear form `g_ij` together with its exact
/// inverse `g^ij`.
#[derive(Clone, PartialEq, Eq)]
pub struct Metric {
    lower: Vec<Vec<Rational>>,
    upper: Vec<Vec<Rational>>,
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .lower
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        f.debug_struct("Metric").field("g", &rows).finish()
    }
}

impl Metric {
    /// Fails with [`Error::Domain`] on a non-square or asymmetric matrix and
    /// with [`Error::Degenerate`] on a singular one.
    pub fn new(g: Vec<Vec<Rational>>) -> Result<Self> {
        let n = g.len();
        if g.iter().any(|row| row.len() != n) {
            return Err(Error::domain("metric must be square"));
        }
        for (i, row) in g.iter().enumerate() {
            for (j, x) in row.iter().enumerate().take(i) {
                if *x != g[j][i] {
                    return Err(Error::domain(format!(
                        "metric is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let upper = invert(&g).ok_or(Error::Degenerate)?;
        Ok(Metric { lower: g, upper })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![Rational::one(); n]).unwrap()
    }

    pub fn diagonal(values: Vec<Rational>) -> Result<Self> {
        let n = values.len();
        let mut g = vec![vec![Rational::zero(); n]; n];
        for (i, v) in values.into_iter().enumerate() {
            g[i][i] = v;
        }
        Self::new(g)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// `g_ij`.
    pub fn lower(&self, i: usize, j: usize) -> &Rational {
        &self.lower[i][j]
    }

    /// `g^ij`.
    pub fn upper(&self, i: usize, j: usize) -> &Rational {
        &self.upper[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.lower
    }

    pub fn inverse(&self) -> &[Vec<Rational>] {
        &self.upper
    }

    /// The Casimir element `sum g^ij e_i (x) e_j`.
    pub fn casimir(&self) -> Tensor {
        Tensor::from_fn(self.dim(), 2, |ix| self.upper[ix[0]][ix[1]].clone())
    }

    /// `g_ij` as an arity-2 tensor.
    pub fn as_tensor(&self) -> Tensor {
        Tensor::from_fn(self.dim(), 2, |ix| self.lower[ix[0]][ix[1]].clone())
    }
}

/// Gauss-Jordan elimination over the rationals.
fn invert(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let (src, dst) = if r < col {
                    let (lo, hi) = m.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = m.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= &factor * s;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn inverse_of_identity_and_scalar() {
        let m = Metric::identity(3);
        assert_eq!(m.inverse(), m.matrix());
        let m = Metric::new(vec![vec![int(2)]]).unwrap();
        assert_eq!(*m.upper(0, 0), ratio(1, 2));
    }

    #[test]
    fn inverse_times_metric_is_identity() {
        let g = vec![
            vec![int(2), int(1), int(0)],
            vec![int(1), int(3), ratio(1, 2)],
            vec![int(0), ratio(1, 2), int(1)],
        ];
        let m = Metric::new(g).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                let s: Rational = (0..3).map(|j| m.upper(i, j) * m.lower(j, k)).sum();
                assert_eq!(s, if i == k { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn singular_and_asymmetric_are_rejected() {
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(Metric::new(singular), Err(Error::Degenerate));
        let asym = vec![vec![int(1), int(2)], vec![int(0), int(1)]];
        assert!(matches!(Metric::new(asym), Err(Error::Domain(_))));
    }

    #[test]
    fn off_diagonal_pivoting() {
        // hyperbolic plane: needs a row swap
        let m = Metric::new(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(m.inverse(), m.matrix());
    }
}
