//! Gaussian moments `<v^{i1} ... v^{im}>` for the normalized Gaussian
//! measure with covariance `g^ij`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{Metric, Tensor};
use crate::scalar::Rational;

/// Sum over all perfect matchings of the slots of the products of `g^ij`
/// over matched pairs. Zero for an odd number of indices.
pub fn gaussian_moment(indices: &[usize], m: &Metric) -> Rational {
    if indices.len() % 2 == 1 {
        return Rational::zero();
    }
    let mut rest = indices.to_vec();
    pair_sum(&mut rest, m)
}

fn pair_sum(rest: &mut Vec<usize>, m: &Metric) -> Rational {
    let Some(first) = rest.pop() else {
        return Rational::one();
    };
    let mut total = Rational::zero();
    for k in 0..rest.len() {
        let c = m.upper(first, rest[k]);
        if c.is_zero() {
            continue;
        }
        let partner = rest.remove(k);
        total += c * pair_sum(rest, m);
        rest.insert(k, partner);
    }
    rest.push(first);
    total
}

/// Commutative polynomial in the coordinates `v^0 .. v^{n-1}`, keyed by
/// exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn one(nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; nvars], Rational::one());
        Polynomial { nvars, terms }
    }

    /// `T(v, v, ..., v)`.
    pub fn from_tensor(t: &Tensor) -> Self {
        let n = t.dim();
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ix, c) in t.nonzero() {
            let mut e = vec![0u32; n];
            for &i in ix {
                e[i] += 1;
            }
            *terms.entry(e).or_insert_with(Rational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { nvars: n, terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }
}

/// Memoized monomial moments, computed by the recursion
/// `<v^a M> = sum_b g^ab <d_b M>`.
pub struct MomentTable {
    inverse: Vec<Vec<Rational>>,
    memo: HashMap<Vec<u32>, Rational>,
}

impl MomentTable {
    pub fn new(m: &Metric) -> Self {
        Self::with_covariance(m.inverse().to_vec())
    }

    /// Moments for an arbitrary symmetric covariance matrix.
    pub fn with_covariance(covariance: Vec<Vec<Rational>>) -> Self {
        MomentTable {
            inverse: covariance,
            memo: HashMap::new(),
        }
    }

    pub fn moment(&mut self, exps: &[u32]) -> Rational {
        let degree: u32 = exps.iter().sum();
        if degree % 2 == 1 {
            return Rational::zero();
        }
        if degree == 0 {
            return Rational::one();
        }
        if let Some(v) = self.memo.get(exps) {
            return v.clone();
        }
        let a = exps.iter().position(|&e| e > 0).unwrap();
        let mut rest = exps.to_vec();
        rest[a] -= 1;
        let mut total = Rational::zero();
        for b in 0..rest.len() {
            if rest[b] == 0 {
                continue;
            }
            let c = self.inverse[a][b].clone();
            if c.is_zero() {
                continue;
            }
            let mult = Rational::from_integer(rest[b].into());
            let mut reduced = rest.clone();
            reduced[b] -= 1;
            total += c * mult * self.moment(&reduced);
        }
        self.memo.insert(exps.to_vec(), total.clone());
        total
    }

    pub fn expectation(&mut self, p: &Polynomial) -> Rational {
        p.terms().map(|(e, c)| c * self.moment(e)).sum()
    }
}
