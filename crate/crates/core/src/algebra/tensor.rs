use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{Kind, Metric};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Coefficient array `T_{i1...ir}` over `{0..n}^r`.
///
/// Semantically dense (every index tuple has a value); only nonzero entries
/// are stored, which keeps trace tensors on matrix algebras small.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    dim: usize,
    arity: usize,
    entries: BTreeMap<Vec<usize>, Rational>,
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor(dim={}, arity={}) {{", self.dim, self.arity)?;
        for (ix, v) in &self.entries {
            write!(f, " {ix:?}: {v},")?;
        }
        f.write_str(" }")
    }
}

/// Every tuple in `{0..dim}^arity`, lexicographically.
pub fn index_tuples(dim: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if dim == 0 && arity > 0 {
        0
    } else {
        dim.pow(arity as u32)
    };
    (0..total).map(move |mut code| {
        let mut ix = vec![0; arity];
        for slot in (0..arity).rev() {
            ix[slot] = code % dim;
            code /= dim;
        }
        ix
    })
}

impl Tensor {
    pub fn zeros(dim: usize, arity: usize) -> Self {
        Tensor {
            dim,
            arity,
            entries: BTreeMap::new(),
        }
    }

    pub fn scalar(value: Rational) -> Self {
        let mut t = Self::zeros(0, 0);
        t.set(vec![], value);
        t
    }

    pub fn from_fn(dim: usize, arity: usize, mut f: impl FnMut(&[usize]) -> Rational) -> Self {
        let mut t = Self::zeros(dim, arity);
        for ix in index_tuples(dim, arity) {
            let v = f(&ix);
            t.set(ix, v);
        }
        t
    }

    pub fn from_entries(
        dim: usize,
        arity: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Rational)>,
    ) -> Result<Self> {
        let mut t = Self::zeros(dim, arity);
        for (ix, v) in entries {
            if ix.len() != arity || ix.iter().any(|&i| i >= dim) {
                return Err(Error::domain(format!(
                    "index {ix:?} out of range for arity {arity}, dimension {dim}"
                )));
            }
            let cur = t.get(&ix);
            t.set(ix, cur + v);
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, ix: &[usize]) -> Rational {
        self.entries.get(ix).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, ix: Vec<usize>, value: Rational) {
        debug_assert_eq!(ix.len(), self.arity);
        if value.is_zero() {
            self.entries.remove(&ix);
        } else {
            self.entries.insert(ix, value);
        }
    }

    /// Nonzero entries in lexicographic index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Row-major array of length `dim^arity`.
    pub fn to_dense(&self) -> Vec<Rational> {
        index_tuples(self.dim, self.arity)
            .map(|ix| self.get(&ix))
            .collect()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut t = Self::zeros(self.dim, self.arity);
        for (ix, v) in &self.entries {
            t.set(ix.clone(), v * c);
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.arity), (other.dim, other.arity));
        let mut t = self.clone();
        for (ix, v) in &other.entries {
            let cur = t.get(ix);
            t.set(ix.clone(), cur + v);
        }
        t
    }

    /// Slot `s` of the result is slot `perm[s]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.arity);
        let mut t = Self::zeros(self.dim, self.arity);
        for (ix, v) in &self.entries {
            let out: Vec<usize> = (0..self.arity).map(|s| ix[perm[s]]).collect();
            t.entries.insert(out, v.clone());
        }
        t
    }

    /// Average over the cyclic rotations of the slots.
    pub fn cyclic_symmetrization(&self) -> Self {
        let r = self.arity.max(1);
        let mut acc = Self::zeros(self.dim, self.arity);
        for s in 0..r {
            let perm: Vec<usize> = (0..self.arity).map(|i| (i + s) % r).collect();
            acc = acc.add(&self.permuted(&perm));
        }
        acc.scaled(&Rational::new(1.into(), (r as i64).into()))
    }

    /// Average over all permutations of the slots.
    pub fn full_symmetrization(&self) -> Self {
        let mut out = Self::zeros(self.dim, self.arity);
        let mut groups: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (ix, v) in &self.entries {
            let mut key = ix.clone();
            key.sort_unstable();
            *groups.entry(key).or_insert_with(Rational::zero) += v;
        }
        for (key, sum) in groups {
            let orbit = orbit_size(&key);
            let avg = sum / Rational::from_integer(orbit.into());
            for ix in distinct_permutations(&key) {
                out.set(ix, avg.clone());
            }
        }
        out
    }
}

fn orbit_size(sorted: &[usize]) -> u64 {
    let mut n: u64 = (1..=sorted.len() as u64).product();
    let mut i = 0;
    while i < sorted.len() {
        let j = (i..sorted.len())
            .find(|&j| sorted[j] != sorted[i])
            .unwrap_or(sorted.len());
        n /= (1..=(j - i) as u64).product::<u64>();
        i = j;
    }
    n
}

fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let n = cur.len();
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// Checks invariance under the generators of the cyclic or symmetric group
/// and returns a violating index tuple on failure.
pub fn check_invariance(t: &Tensor, kind: Kind) -> std::result::Result<(), Vec<usize>> {
    let r = t.arity();
    if r <= 1 {
        return Ok(());
    }
    let generators: Vec<Vec<usize>> = match kind {
        // T_{i1..ir} = T_{ir i1 .. i(r-1)}
        Kind::Cyclic => vec![(0..r).map(|s| (s + r - 1) % r).collect()],
        Kind::Symmetric => (0..r - 1)
            .map(|a| {
                let mut p: Vec<usize> = (0..r).collect();
                p.swap(a, a + 1);
                p
            })
            .collect(),
    };
    for (ix, v) in t.nonzero() {
        for p in &generators {
            let moved: Vec<usize> = p.iter().map(|&s| ix[s]).collect();
            if &t.get(&moved) != v {
                return Err(ix.clone());
            }
        }
    }
    Ok(())
}

/// Raises slot `slot` with `g^ij`.
pub fn raise_slot(t: &Tensor, m: &Metric, slot: usize) -> Tensor {
    contract_slot(t, slot, |k, j| m.upper(k, j).clone())
}

/// Lowers slot `slot` with `g_ij`.
pub fn lower_slot(t: &Tensor, m: &Metric, slot: usize) -> Tensor {
    contract_slot(t, slot, |k, j| m.lower(k, j).clone())
}

fn contract_slot(t: &Tensor, slot: usize, mat: impl Fn(usize, usize) -> Rational) -> Tensor {
    let n = t.dim();
    let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (ix, v) in t.nonzero() {
        for j in 0..n {
            let c = mat(ix[slot], j);
            if c.is_zero() {
                continue;
            }
            let mut o = ix.clone();
            o[slot] = j;
            *out.entry(o).or_insert_with(Rational::zero) += v * c;
        }
    }
    Tensor::from_entries(n, t.arity(), out).unwrap()
}

/// The mixed map `T_{p, r-p}` with the first `p` slots as inputs and the
/// last `r - p` raised into outputs.
pub fn rotate_tensor(t: &Tensor, m: &Metric, p: usize) -> Result<Tensor> {
    let r = t.arity();
    if p > r {
        return Err(Error::domain(format!(
            "cannot take {p} inputs from an arity-{r} tensor"
        )));
    }
    Ok((p..r).fold(t.clone(), |acc, s| raise_slot(&acc, m, s)))
}

/// Same target as [`rotate_tensor`] reached the other way round: raise the
/// first `r - p` slots, then rotate them to the back. Agrees with
/// [`rotate_tensor`] for cyclic tensors.
pub fn rotate_tensor_leftwards(t: &Tensor, m: &Metric, p: usize) -> Result<Tensor> {
    let r = t.arity();
    if p > r {
        return Err(Error::domain(format!(
            "cannot take {p} inputs from an arity-{r} tensor"
        )));
    }
    let q = r - p;
    let raised = (0..q).fold(t.clone(), |acc, s| raise_slot(&acc, m, s));
    let perm: Vec<usize> = (0..r).map(|s| (s + q) % r).collect();
    Ok(raised.permuted(&perm))
}
