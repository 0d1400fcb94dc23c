//! Graphical calculus: a graph and an algebra give a tensor by placing one
//! interaction tensor on every vertex, one Casimir element on every edge,
//! and summing over all internal indices.
//!
//! The sum is carried out as a sparse tensor network over flag labels.
//! Vertex slots are covariant. An internal edge `(f, g)` contributes the
//! factor `g^{fg}`; an output leg raises its slot with `g^ij`. Bare
//! strands evaluate to `δ` (input to output), `g_ij` (two inputs) or
//! `g^ij` (two outputs). Each free circle contributes `dim V`. Output axes
//! are ordered inputs first, then outputs.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{check_invariance, raise_slot, Kind, Metric, SymAlgebra, Tensor};
use crate::error::{Error, Result};
use crate::graph::{Mode, RibbonGraph};
use crate::scalar::Rational;

/// Order in which summed labels are eliminated. The value never depends on
/// the schedule; only the size of intermediate tensors does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractionSchedule {
    /// Repeatedly merge the pair of factors with the smallest result rank.
    Greedy,
    /// Eliminate summed labels in a seeded random order.
    Random(u64),
    /// Eliminate the listed flags in order. Every summed flag must appear.
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone)]
struct Factor {
    labels: Vec<usize>,
    entries: HashMap<Vec<usize>, Rational>,
}

impl Factor {
    fn from_tensor(t: &Tensor, labels: Vec<usize>) -> Self {
        debug_assert_eq!(t.arity(), labels.len());
        Factor {
            labels,
            entries: t.nonzero().map(|(ix, v)| (ix.clone(), v.clone())).collect(),
        }
    }

    fn scalar(v: Rational) -> Self {
        let mut entries = HashMap::new();
        if !v.is_zero() {
            entries.insert(vec![], v);
        }
        Factor {
            labels: vec![],
            entries,
        }
    }

    /// Product of two factors summed over their shared labels.
    fn contract(&self, other: &Factor) -> Factor {
        let shared: Vec<usize> = self
            .labels
            .iter()
            .copied()
            .filter(|l| other.labels.contains(l))
            .collect();
        let pos = |labels: &[usize], l: usize| labels.iter().position(|&x| x == l).unwrap();
        let a_key: Vec<usize> = shared.iter().map(|&l| pos(&self.labels, l)).collect();
        let b_key: Vec<usize> = shared.iter().map(|&l| pos(&other.labels, l)).collect();
        let a_rest: Vec<usize> = (0..self.labels.len())
            .filter(|i| !a_key.contains(i))
            .collect();
        let b_rest: Vec<usize> = (0..other.labels.len())
            .filter(|i| !b_key.contains(i))
            .collect();

        let mut index: HashMap<Vec<usize>, Vec<(Vec<usize>, &Rational)>> = HashMap::new();
        for (ix, v) in &other.entries {
            let key: Vec<usize> = b_key.iter().map(|&p| ix[p]).collect();
            let rest: Vec<usize> = b_rest.iter().map(|&p| ix[p]).collect();
            index.entry(key).or_default().push((rest, v));
        }
        let mut entries: HashMap<Vec<usize>, Rational> = HashMap::new();
        for (ix, v) in &self.entries {
            let key: Vec<usize> = a_key.iter().map(|&p| ix[p]).collect();
            let Some(matches) = index.get(&key) else {
                continue;
            };
            let head: Vec<usize> = a_rest.iter().map(|&p| ix[p]).collect();
            for (rest, w) in matches {
                let mut out = head.clone();
                out.extend_from_slice(rest);
                *entries.entry(out).or_insert_with(Rational::zero) += v * *w;
            }
        }
        entries.retain(|_, v| !v.is_zero());
        let mut labels: Vec<usize> = a_rest.iter().map(|&p| self.labels[p]).collect();
        labels.extend(b_rest.iter().map(|&p| other.labels[p]));
        Factor { labels, entries }
    }
}

struct Network {
    factors: Vec<Option<Factor>>,
    /// Labels that occur in two factors.
    summed: Vec<usize>,
    /// Free labels in output order.
    outputs: Vec<usize>,
    dim: usize,
}

fn check_mode(alg: &SymAlgebra, mode: Mode) -> Result<()> {
    if mode == Mode::Ordinary && alg.kind() != Kind::Symmetric {
        return Err(Error::domain(
            "ordinary graphs need a symmetric algebra; this one is only cyclic",
        ));
    }
    Ok(())
}

fn network(g: &RibbonGraph, alg: &SymAlgebra) -> Result<Network> {
    let m = alg.metric();
    let n = alg.dim();
    let mut factors = Vec::new();
    let mut summed = Vec::new();
    for v in g.vertices() {
        let t = alg.tensor_for(v.valence(), v.decoration)?;
        factors.push(Some(Factor::from_tensor(t, v.flags.clone())));
    }
    let casimir = m.casimir();
    for (f, h) in g.edges() {
        factors.push(Some(Factor::from_tensor(&casimir, vec![f, h])));
        summed.push(f);
        summed.push(h);
    }
    let is_input: Vec<bool> = {
        let mut v = vec![false; g.num_flags()];
        for &e in g.in_legs() {
            v[e] = true;
        }
        v
    };
    let mut outputs = Vec::new();
    for &e in g.in_legs() {
        let h = g.partner(e);
        outputs.push(if g.is_vertex_flag(h) { h } else { e });
    }
    for &e in g.out_legs() {
        let h = g.partner(e);
        if g.is_vertex_flag(h) {
            factors.push(Some(Factor::from_tensor(&casimir, vec![h, e])));
            summed.push(h);
        }
        outputs.push(e);
    }
    for e in 0..g.num_flags() {
        let h = g.partner(e);
        if g.is_vertex_flag(e) || g.is_vertex_flag(h) || e > h {
            continue;
        }
        let strand = match (is_input[e], is_input[h]) {
            (true, true) => m.as_tensor(),
            (false, false) => casimir.clone(),
            _ => Tensor::from_fn(n, 2, |ix| {
                if ix[0] == ix[1] {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }),
        };
        factors.push(Some(Factor::from_tensor(&strand, vec![e, h])));
    }
    if g.free_circles() > 0 {
        let c = Rational::from_integer(n.into());
        factors.push(Some(Factor::scalar(num_traits::pow(c, g.free_circles()))));
    }
    summed.sort_unstable();
    Ok(Network {
        factors,
        summed,
        outputs,
        dim: n,
    })
}

impl Network {
    fn holder_pair(&self, label: usize) -> Option<(usize, usize)> {
        let mut it = self
            .factors
            .iter()
            .enumerate()
            .filter(|(_, f)| f.as_ref().is_some_and(|f| f.labels.contains(&label)))
            .map(|(i, _)| i);
        let a = it.next()?;
        let b = it.next()?;
        Some((a, b))
    }

    fn merge(&mut self, a: usize, b: usize) {
        let fa = self.factors[a].take().unwrap();
        let fb = self.factors[b].take().unwrap();
        self.factors[a] = Some(fa.contract(&fb));
    }

    fn run(mut self, schedule: &ContractionSchedule) -> Result<Tensor> {
        match schedule {
            ContractionSchedule::Greedy => {
                while let Some((a, b)) = self.greedy_pair() {
                    self.merge(a, b);
                }
            }
            ContractionSchedule::Random(seed) => {
                let mut order = self.summed.clone();
                order.dedup();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
                for l in order {
                    if let Some((a, b)) = self.holder_pair(l) {
                        self.merge(a, b);
                    }
                }
            }
            ContractionSchedule::Explicit(order) => {
                for &l in order {
                    if let Some((a, b)) = self.holder_pair(l) {
                        self.merge(a, b);
                    }
                }
                if let Some(&l) = self.summed.iter().find(|&&l| self.holder_pair(l).is_some()) {
                    return Err(Error::Configuration(format!(
                        "contraction schedule never eliminates flag {l}"
                    )));
                }
            }
        }
        // disconnected pieces: plain outer products
        let mut acc = Factor::scalar(Rational::one());
        for f in self.factors.into_iter().flatten() {
            acc = acc.contract(&f);
        }
        let perm: Vec<usize> = self
            .outputs
            .iter()
            .map(|l| acc.labels.iter().position(|x| x == l).unwrap())
            .collect();
        let entries = acc
            .entries
            .into_iter()
            .map(|(ix, v)| (perm.iter().map(|&p| ix[p]).collect(), v));
        Tensor::from_entries(self.dim, self.outputs.len(), entries)
    }

    fn greedy_pair(&self) -> Option<(usize, usize)> {
        let live: Vec<(usize, &Factor)> = self
            .factors
            .iter()
            .enumerate()
            .filter_map(|(i, f)| f.as_ref().map(|f| (i, f)))
            .collect();
        let mut best: Option<((usize, usize), (usize, usize))> = None;
        for (x, &(i, fi)) in live.iter().enumerate() {
            for &(j, fj) in &live[x + 1..] {
                let shared = fi.labels.iter().filter(|l| fj.labels.contains(l)).count();
                if shared == 0 {
                    continue;
                }
                let rank = fi.labels.len() + fj.labels.len() - 2 * shared;
                let cost = fi.entries.len().saturating_mul(fj.entries.len());
                let score = (rank, cost);
                if best.is_none_or(|(s, _)| score < s) {
                    best = Some((score, (i, j)));
                }
            }
        }
        best.map(|(_, p)| p)
    }
}

/// Full evaluation as a tensor with one axis per leg.
pub fn evaluate(
    g: &RibbonGraph,
    alg: &SymAlgebra,
    mode: Mode,
    schedule: &ContractionSchedule,
) -> Result<Tensor> {
    check_mode(alg, mode)?;
    network(g, alg)?.run(schedule)
}

/// `Z(Γ)` for a closed graph.
pub fn evaluate_closed(g: &RibbonGraph, alg: &SymAlgebra, mode: Mode) -> Result<Rational> {
    evaluate_closed_with(g, alg, mode, &ContractionSchedule::Greedy)
}

pub fn evaluate_closed_with(
    g: &RibbonGraph,
    alg: &SymAlgebra,
    mode: Mode,
    schedule: &ContractionSchedule,
) -> Result<Rational> {
    if !g.is_closed() {
        return Err(Error::domain(format!(
            "closed evaluation of a graph of type {}",
            g.graph_type()
        )));
    }
    Ok(evaluate(g, alg, mode, schedule)?.get(&[]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpenValue {
    Scalar(Rational),
    Tensor(Tensor),
}

/// Evaluates a graph with legs. Without inputs the result is the tensor
/// with free leg indices; with inputs (one vector per input leg, graph of
/// type `(p, 0)`) every input slot is paired with its vector.
pub fn evaluate_open(
    g: &RibbonGraph,
    alg: &SymAlgebra,
    mode: Mode,
    inputs: Option<&[Vec<Rational>]>,
) -> Result<OpenValue> {
    let t = evaluate(g, alg, mode, &ContractionSchedule::Greedy)?;
    let Some(inputs) = inputs else {
        return Ok(OpenValue::Tensor(t));
    };
    let ty = g.graph_type();
    if ty.outputs != 0 || inputs.len() != ty.inputs {
        return Err(Error::domain(format!(
            "{} input vectors given for a graph of type {ty}",
            inputs.len()
        )));
    }
    if let Some(v) = inputs.iter().find(|v| v.len() != alg.dim()) {
        return Err(Error::domain(format!(
            "input vector has {} components, dimension is {}",
            v.len(),
            alg.dim()
        )));
    }
    let total = t
        .nonzero()
        .map(|(ix, c)| {
            ix.iter()
                .zip(inputs)
                .fold(c.clone(), |acc, (&i, v)| acc * &v[i])
        })
        .sum();
    Ok(OpenValue::Scalar(total))
}

/// `Σ c_ijm g^mn c_nkl − Σ c_ilm g^mn c_njk` for a symmetric arity-3 tensor.
/// Vanishes identically iff the structure constants satisfy WDVV.
pub fn wdvv_residual(c: &Tensor, m: &Metric) -> Result<Tensor> {
    if c.arity() != 3 || c.dim() != m.dim() {
        return Err(Error::domain(
            "WDVV needs an arity-3 tensor of the metric's dimension",
        ));
    }
    if let Err(w) = check_invariance(c, Kind::Symmetric) {
        return Err(Error::domain(format!(
            "third derivatives not symmetric at {w:?}"
        )));
    }
    let n = c.dim();
    let raised = raise_slot(c, m, 2);
    let prod = |i: usize, j: usize, k: usize, l: usize| -> Rational {
        (0..n)
            .map(|x| raised.get(&[i, j, x]) * c.get(&[x, k, l]))
            .sum()
    };
    Ok(Tensor::from_fn(n, 4, |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        prod(i, j, k, l) - prod(i, l, j, k)
    }))
}
