//! Random small-rational metrics and tensors for property tests and the
//! `check` command.

use rand::Rng;

use super::{Kind, Metric, Tensor};
use crate::scalar::{int, ratio, Rational};

pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

/// Positive definite `AᵀA + I` with small rational `A`.
pub fn positive_metric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Metric {
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|_| (0..n).map(|_| small_rational(rng)).collect())
        .collect();
    let g = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s: Rational = (0..n).map(|k| &a[k][i] * &a[k][j]).sum();
                    if i == j {
                        s + int(1)
                    } else {
                        s
                    }
                })
                .collect()
        })
        .collect();
    Metric::new(g).expect("AᵀA + I is invertible")
}

/// Random tensor, symmetrized for the requested kind.
pub fn invariant_tensor<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    arity: usize,
    kind: Kind,
) -> Tensor {
    let raw = Tensor::from_fn(dim, arity, |_| small_rational(rng));
    match kind {
        Kind::Cyclic => raw.cyclic_symmetrization(),
        Kind::Symmetric => raw.full_symmetrization(),
    }
}
