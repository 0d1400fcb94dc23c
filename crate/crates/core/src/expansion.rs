//! Feynman expansions of Gaussian integrals as exact graph sums, each
//! paired with a graph-free Taylor–Wick computation of the same series.
//!
//! A *vertex sort* is a tensor together with the monomial it contributes
//! and its normalization (`k` for cyclic exponents `x_k T_k / k`, `k!` for
//! symmetric ones). The graph side sums `Z(Γ) / |Aut Γ|` over closed graphs
//! built from the sorts. The Taylor–Wick side expands the exponential into
//! monomials in the sort counts and takes Gaussian moments.
//!
//! Modular expansions keep `x_k` as slot counters and store the power of
//! `ħ` shifted by the vertex count in a weight-0 variable `h`: every vertex
//! of genus `g` contributes `h^g` and every edge `h`, so a graph's true
//! `ħ` exponent is `(h exponent) − V`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{Kind, Metric, MomentTable, Polynomial, SymAlgebra, Tensor, TensorKey};
use crate::enumerate::{graphs_with_profile, ValenceProfile, VertexSort, SLOT_LIMIT};
use crate::error::{Error, Result};
use crate::evaluate::evaluate_closed;
use crate::graph::{CanonicalForm, Decoration, Mode, RibbonGraph};
use crate::scalar::{factorial, Rational};
use crate::series::MultiSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpansionMode {
    Ribbon,
    Ordinary,
    Modular,
}

impl ExpansionMode {
    pub fn graph_mode(self) -> Mode {
        match self {
            ExpansionMode::Ribbon => Mode::Ribbon,
            ExpansionMode::Ordinary | ExpansionMode::Modular => Mode::Ordinary,
        }
    }
}

impl fmt::Display for ExpansionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExpansionMode::Ribbon => "ribbon",
            ExpansionMode::Ordinary => "ordinary",
            ExpansionMode::Modular => "modular",
        })
    }
}

impl std::str::FromStr for ExpansionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ribbon" => Ok(ExpansionMode::Ribbon),
            "ordinary" => Ok(ExpansionMode::Ordinary),
            "modular" => Ok(ExpansionMode::Modular),
            other => Err(Error::domain(format!("unknown expansion mode `{other}`"))),
        }
    }
}

/// What to expand.
///
/// Couplings: every plain tensor `T_k` comes with `x_k` (weight `k`), a
/// labeled tensor `T_{k,α}` with `x_k y<α>` (`y<α>` of weight 0). In
/// modular mode the labels are vertex genera and `y` is replaced by `h`.
/// Special vertices carry their plain tensor with no coupling and do not
/// count towards the truncation order.
#[derive(Debug, Clone)]
pub struct ExpansionRequest {
    pub algebra: SymAlgebra,
    pub mode: ExpansionMode,
    /// Truncation order on the weighted degree, i.e. on coupled slots.
    pub order: u32,
    pub special: ValenceProfile,
    /// Univalent cap evaluated as `v ↦ Σ ζ_i v^i` (modular mode).
    pub zeta: Option<Vec<Rational>>,
}

impl ExpansionRequest {
    pub fn new(algebra: SymAlgebra, mode: ExpansionMode, order: u32) -> Self {
        ExpansionRequest {
            algebra,
            mode,
            order,
            special: ValenceProfile::empty(),
            zeta: None,
        }
    }

    /// Fixed numbers of special vertices per valence.
    pub fn with_special(mut self, counts: &[(usize, usize)]) -> Self {
        self.special = ValenceProfile::new(
            counts
                .iter()
                .map(|&(k, l)| (VertexSort::new(k, Decoration::Special), l)),
        );
        self
    }

    pub fn with_zeta(mut self, zeta: Vec<Rational>) -> Self {
        self.zeta = Some(zeta);
        self
    }
}

/// One vertex sort of a Taylor–Wick expansion.
#[derive(Debug, Clone)]
pub struct WickSort {
    pub tensor: Tensor,
    /// Exponents of the series variables contributed per vertex.
    pub monomial: Vec<u32>,
    /// Scalar coupling per vertex.
    pub coefficient: Rational,
    /// `k` or `k!`.
    pub normalization: Rational,
    /// Exactly this many vertices of the sort, uncoupled, when set.
    pub fixed: Option<usize>,
}

/// Factor contributed by every Wick pair, i.e. by every edge.
#[derive(Debug, Clone)]
pub struct PairFactor {
    pub monomial: Vec<u32>,
    pub coefficient: Rational,
}

impl PairFactor {
    pub fn trivial(nvars: usize) -> Self {
        PairFactor {
            monomial: vec![0; nvars],
            coefficient: Rational::one(),
        }
    }
}

/// All count vectors `l` with `Σ l_s w_s ≤ max`. Every weight must be
/// positive.
fn count_vectors(weights: &[u32], max: u32) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; weights.len()];
    fn rec(
        i: usize,
        used: u32,
        max: u32,
        w: &[u32],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == w.len() {
            out.push(cur.clone());
            return;
        }
        let mut l = 0;
        while used + w[i] * l as u32 <= max {
            cur[i] = l;
            rec(i + 1, used + w[i] * l as u32, max, w, cur, out);
            l += 1;
        }
        cur[i] = 0;
    }
    rec(0, 0, max, weights, &mut cur, &mut out);
    out
}

fn free_weights(space: &MultiSeries, sorts: &[(Vec<u32>, Option<usize>)]) -> Result<Vec<u32>> {
    sorts
        .iter()
        .filter(|(_, fixed)| fixed.is_none())
        .map(|(m, _)| {
            let w = space.weight(m);
            if w == 0 {
                Err(Error::Configuration(
                    "a coupled vertex sort has weight 0, the expansion would not truncate".into(),
                ))
            } else {
                Ok(w)
            }
        })
        .collect()
}

/// Full count vectors (fixed sorts filled in) within the truncation.
fn all_counts(space: &MultiSeries, sorts: &[(Vec<u32>, Option<usize>)]) -> Result<Vec<Vec<usize>>> {
    let weights = free_weights(space, sorts)?;
    Ok(count_vectors(&weights, space.order())
        .into_iter()
        .map(|free| {
            let mut it = free.into_iter();
            sorts
                .iter()
                .map(|(_, fixed)| fixed.unwrap_or_else(|| it.next().unwrap()))
                .collect()
        })
        .collect())
}

fn add_scaled(acc: &mut [u32], m: &[u32], times: usize) {
    for (a, b) in acc.iter_mut().zip(m) {
        *a += b * times as u32;
    }
}

/// Monomial weight `Π c_s^{l_s}` and exponents for a count vector,
/// `edges` Wick pairs included.
fn monomial_for(
    nvars: usize,
    monomials: &[&[u32]],
    coefficients: &[&Rational],
    counts: &[usize],
    pair: &PairFactor,
    edges: usize,
    fixed: &[bool],
) -> (Vec<u32>, Rational) {
    let mut exps = vec![0u32; nvars];
    let mut c = Rational::one();
    for s in 0..counts.len() {
        if fixed[s] {
            continue;
        }
        add_scaled(&mut exps, monomials[s], counts[s]);
        c *= num_traits::pow(coefficients[s].clone(), counts[s]);
    }
    add_scaled(&mut exps, &pair.monomial, edges);
    c *= num_traits::pow(pair.coefficient.clone(), edges);
    (exps, c)
}

/// Expectation of `Π_s T_s(v^{⊗k_s})^{l_s}`, with powers cached per sort.
struct ProductMoments {
    dim: usize,
    polys: Vec<Polynomial>,
    powers: Vec<Vec<Polynomial>>,
    table: MomentTable,
    cache: HashMap<Vec<usize>, Rational>,
}

impl ProductMoments {
    fn new(covariance: Vec<Vec<Rational>>, tensors: &[&Tensor]) -> Self {
        let polys: Vec<Polynomial> = tensors.iter().map(|t| Polynomial::from_tensor(t)).collect();
        let n = covariance.len();
        ProductMoments {
            dim: n,
            powers: polys.iter().map(|_| vec![Polynomial::one(n)]).collect(),
            polys,
            table: MomentTable::with_covariance(covariance),
            cache: HashMap::new(),
        }
    }

    fn power(&mut self, s: usize, l: usize) -> &Polynomial {
        while self.powers[s].len() <= l {
            let next = self.powers[s].last().unwrap().mul(&self.polys[s]);
            self.powers[s].push(next);
        }
        &self.powers[s][l]
    }

    fn expectation(&mut self, counts: &[usize]) -> Rational {
        if let Some(v) = self.cache.get(counts) {
            return v.clone();
        }
        let mut p = Polynomial::one(self.dim);
        for (s, &l) in counts.iter().enumerate() {
            if l > 0 {
                p = p.mul(&self.power(s, l).clone());
            }
        }
        let v = self.table.expectation(&p);
        self.cache.insert(counts.to_vec(), v.clone());
        v
    }
}

/// Taylor–Wick expansion, grouped by sort counts:
/// `Σ_l Π_s c_s^{l_s} / (n_s^{l_s} l_s!) · ⟨Π_s T_s^{l_s}⟩`, every Wick pair
/// weighted by `pair`.
pub fn taylor_wick(
    metric: &Metric,
    sorts: &[WickSort],
    space: &MultiSeries,
    pair: &PairFactor,
) -> Result<MultiSeries> {
    taylor_wick_with_covariance(metric.inverse().to_vec(), sorts, space, pair)
}

fn taylor_wick_with_covariance(
    covariance: Vec<Vec<Rational>>,
    sorts: &[WickSort],
    space: &MultiSeries,
    pair: &PairFactor,
) -> Result<MultiSeries> {
    let key: Vec<(Vec<u32>, Option<usize>)> = sorts
        .iter()
        .map(|s| (s.monomial.clone(), s.fixed))
        .collect();
    let tensors: Vec<&Tensor> = sorts.iter().map(|s| &s.tensor).collect();
    let mut moments = ProductMoments::new(covariance, &tensors);
    let monomials: Vec<&[u32]> = sorts.iter().map(|s| s.monomial.as_slice()).collect();
    let coefficients: Vec<&Rational> = sorts.iter().map(|s| &s.coefficient).collect();
    let fixed: Vec<bool> = sorts.iter().map(|s| s.fixed.is_some()).collect();
    let mut out = space.zero_like();
    for counts in all_counts(space, &key)? {
        let slots: usize = sorts
            .iter()
            .zip(&counts)
            .map(|(s, l)| s.tensor.arity() * l)
            .sum();
        if slots % 2 == 1 {
            continue;
        }
        let (exps, c) = monomial_for(
            space.vars().len(),
            &monomials,
            &coefficients,
            &counts,
            pair,
            slots / 2,
            &fixed,
        );
        let mut denom = Rational::one();
        for (s, &l) in sorts.iter().zip(&counts) {
            denom *= num_traits::pow(s.normalization.clone(), l);
            denom *= Rational::from_integer(factorial(l));
        }
        let avg = moments.expectation(&counts);
        out.add_term(exps, c * avg / denom);
    }
    Ok(out)
}

/// The same expansion as [`taylor_wick`], summed over ordered sequences
/// of coupled sorts: `Σ_n Σ_{s_1..s_n} Π c / (n! Π n_{s_i}) ⟨...⟩`. Fixed
/// sorts keep their `1 / (n_s^{l_s} l_s!)` prefactor.
pub fn taylor_wick_sequences(
    metric: &Metric,
    sorts: &[WickSort],
    space: &MultiSeries,
    pair: &PairFactor,
) -> Result<MultiSeries> {
    let key: Vec<(Vec<u32>, Option<usize>)> = sorts
        .iter()
        .map(|s| (s.monomial.clone(), s.fixed))
        .collect();
    free_weights(space, &key)?;
    let tensors: Vec<&Tensor> = sorts.iter().map(|s| &s.tensor).collect();
    let mut moments = ProductMoments::new(metric.inverse().to_vec(), &tensors);
    let free: Vec<usize> = (0..sorts.len())
        .filter(|&s| sorts[s].fixed.is_none())
        .collect();
    let mut base = vec![0usize; sorts.len()];
    let mut fixed_denom = Rational::one();
    for (s, sort) in sorts.iter().enumerate() {
        if let Some(l) = sort.fixed {
            base[s] = l;
            fixed_denom *= num_traits::pow(sort.normalization.clone(), l);
            fixed_denom *= Rational::from_integer(factorial(l));
        }
    }
    let mut out = space.zero_like();
    // depth-first over sequences
    let mut stack: Vec<(Vec<usize>, u32, usize, Rational)> =
        vec![(base.clone(), 0, 0, Rational::one())];
    while let Some((counts, used, n, norm)) = stack.pop() {
        let slots: usize = sorts
            .iter()
            .zip(&counts)
            .map(|(s, l)| s.tensor.arity() * l)
            .sum();
        if slots.is_multiple_of(2) {
            let mut exps = vec![0u32; space.vars().len()];
            let mut c = Rational::one();
            for &s in &free {
                add_scaled(&mut exps, &sorts[s].monomial, counts[s] - base[s]);
                c *= num_traits::pow(sorts[s].coefficient.clone(), counts[s] - base[s]);
            }
            add_scaled(&mut exps, &pair.monomial, slots / 2);
            c *= num_traits::pow(pair.coefficient.clone(), slots / 2);
            let avg = moments.expectation(&counts);
            let denom = Rational::from_integer(factorial(n)) * &norm * &fixed_denom;
            out.add_term(exps, c * avg / denom);
        }
        for &s in &free {
            let w = space.weight(&sorts[s].monomial);
            if used + w <= space.order() {
                let mut next = counts.clone();
                next[s] += 1;
                stack.push((next, used + w, n + 1, &norm * &sorts[s].normalization));
            }
        }
    }
    Ok(out)
}

/// A vertex sort on the graph side.
#[derive(Debug, Clone)]
pub struct GraphSort {
    pub vertex: VertexSort,
    pub monomial: Vec<u32>,
    pub coefficient: Rational,
    pub fixed: Option<usize>,
}

/// One class in a graph sum.
#[derive(Debug, Clone)]
pub struct LedgerEntry {
    pub profile: ValenceProfile,
    pub class: CanonicalForm,
    pub graph: RibbonGraph,
    pub automorphisms: u64,
    pub occurrences: u64,
    pub vertices: usize,
    pub edges: usize,
    pub b0: usize,
    /// `Z(Γ)`.
    pub value: Rational,
    pub monomial: Vec<u32>,
    /// `Z(Γ) · coupling / |Aut Γ|`.
    pub contribution: Rational,
    /// True exponent of `ħ` (modular mode).
    pub hbar_exponent: Option<i64>,
    pub modular_genus: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct Expansion {
    pub series: MultiSeries,
    pub ledger: Vec<LedgerEntry>,
}

/// `Σ_Γ value(Γ) · coupling(Γ) / |Aut Γ|` over closed graphs built from
/// the sorts, the empty graph included. `value` may add exponents to the
/// graph's monomial. `modular_h` names the variable whose exponent minus
/// `V` is the true `ħ` exponent.
#[allow(clippy::too_many_arguments)]
pub fn graph_sum<F>(
    sorts: &[GraphSort],
    mode: Mode,
    space: &MultiSeries,
    pair: &PairFactor,
    connected_only: bool,
    modular_h: Option<usize>,
    value: F,
) -> Result<Expansion>
where
    F: Fn(&RibbonGraph, &mut [u32]) -> Result<Rational> + Sync,
{
    let key: Vec<(Vec<u32>, Option<usize>)> = sorts
        .iter()
        .map(|s| (s.monomial.clone(), s.fixed))
        .collect();
    let mut profiles = Vec::new();
    for counts in all_counts(space, &key)? {
        let profile =
            ValenceProfile::new(sorts.iter().map(|s| s.vertex).zip(counts.iter().copied()));
        if profile.slots() > SLOT_LIMIT {
            return Err(Error::CatalogBound {
                slots: profile.slots(),
                limit: SLOT_LIMIT,
            });
        }
        if profile.slots().is_multiple_of(2) {
            profiles.push((profile, counts));
        }
    }
    let monomials: Vec<&[u32]> = sorts.iter().map(|s| s.monomial.as_slice()).collect();
    let coefficients: Vec<&Rational> = sorts.iter().map(|s| &s.coefficient).collect();
    let fixed: Vec<bool> = sorts.iter().map(|s| s.fixed.is_some()).collect();

    let per_profile: Vec<Result<Vec<LedgerEntry>>> = profiles
        .par_iter()
        .map(|(profile, counts)| {
            let k = profile.group_order(mode);
            let mut rows = Vec::new();
            for class in graphs_with_profile(profile, mode) {
                let g = &class.graph;
                let b0 = g.b0();
                if connected_only && b0 != 1 {
                    continue;
                }
                let aut = g.automorphism_count(mode)?;
                if BigInt::from(aut) * BigInt::from(class.occurrences) != k {
                    return Err(Error::InvariantViolation(format!(
                        "profile {profile}: {} occurrences but |K|/|Aut| = {k}/{aut}",
                        class.occurrences
                    )));
                }
                let edges = g.num_edges();
                let (mut exps, c) = monomial_for(
                    space.vars().len(),
                    &monomials,
                    &coefficients,
                    counts,
                    pair,
                    edges,
                    &fixed,
                );
                let value = value(g, &mut exps)?;
                let contribution = &value * c / Rational::from_integer(aut.into());
                let (hbar_exponent, modular_genus) = match modular_h {
                    Some(h) => (
                        Some(i64::from(exps[h]) - g.num_vertices() as i64),
                        Some(g.modular_genus()?),
                    ),
                    None => (None, None),
                };
                rows.push(LedgerEntry {
                    profile: profile.clone(),
                    class: class.form.clone(),
                    graph: g.clone(),
                    automorphisms: aut,
                    occurrences: class.occurrences,
                    vertices: g.num_vertices(),
                    edges,
                    b0,
                    value,
                    monomial: exps,
                    contribution,
                    hbar_exponent,
                    modular_genus,
                });
            }
            Ok(rows)
        })
        .collect();
    let mut series = space.zero_like();
    let mut ledger = Vec::new();
    for rows in per_profile {
        for row in rows? {
            series.add_term(row.monomial.clone(), row.contribution.clone());
            ledger.push(row);
        }
    }
    Ok(Expansion { series, ledger })
}

/// Sorts, series space and algebra (with the ζ cap added) for a request.
struct Plan {
    algebra: SymAlgebra,
    space: MultiSeries,
    wick: Vec<WickSort>,
    graph: Vec<GraphSort>,
    pair: PairFactor,
    modular_h: Option<usize>,
}

fn plan(req: &ExpansionRequest) -> Result<Plan> {
    let alg = &req.algebra;
    let modular = req.mode == ExpansionMode::Modular;
    if req.mode != ExpansionMode::Ribbon && alg.kind() != Kind::Symmetric {
        return Err(Error::domain(format!(
            "{} expansions need a symmetric algebra",
            req.mode
        )));
    }
    let mut algebra = alg.clone();
    if modular {
        for (key, t) in alg.tensors() {
            let Some(g) = key.label else {
                return Err(Error::Configuration(format!(
                    "modular expansions need genus-labeled tensors; {key} has no label"
                )));
            };
            if 3 * g as i64 - 3 + key.arity as i64 <= 0 && !t.is_zero() {
                return Err(Error::domain(format!(
                    "tensor {key} violates the stability bound 3g - 3 + k > 0"
                )));
            }
        }
        if let Some(z) = &req.zeta {
            if z.len() != alg.dim() {
                return Err(Error::domain(format!(
                    "ζ has {} components, dimension is {}",
                    z.len(),
                    alg.dim()
                )));
            }
            let t = Tensor::from_fn(alg.dim(), 1, |ix| z[ix[0]].clone());
            // the cap occupies the otherwise unstable (1, genus 0) slot
            algebra.insert(TensorKey::labeled(1, 0), t)?;
        }
    } else if req.zeta.is_some() {
        return Err(Error::Configuration(
            "ζ caps apply to modular expansions only".into(),
        ));
    }

    let max_k = algebra.max_arity().max(1);
    let labels: BTreeSet<u32> = algebra.tensors().filter_map(|(k, _)| k.label).collect();
    let mut vars: Vec<(String, u32)> = (1..=max_k).map(|k| (format!("x{k}"), k as u32)).collect();
    if modular {
        vars.push(("h".into(), 0));
    } else {
        vars.extend(labels.iter().map(|a| (format!("y{a}"), 0)));
    }
    let var_refs: Vec<(&str, u32)> = vars.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let space = MultiSeries::zero(&var_refs, req.order);
    let nvars = vars.len();
    let index: BTreeMap<&str, usize> = vars
        .iter()
        .enumerate()
        .map(|(i, (n, _))| (n.as_str(), i))
        .collect();

    let norm = |k: usize| -> Rational {
        match req.mode {
            ExpansionMode::Ribbon => Rational::from_integer(k.into()),
            _ => Rational::from_integer(factorial(k)),
        }
    };
    let mut wick = Vec::new();
    let mut graph = Vec::new();
    for (key, t) in algebra.tensors() {
        if key.arity == 0 {
            continue;
        }
        let mut m = vec![0u32; nvars];
        m[index[format!("x{}", key.arity).as_str()]] += 1;
        let decoration = match key.label {
            None => Decoration::Ordinary,
            Some(a) if modular => {
                m[index["h"]] += a;
                Decoration::Genus(a)
            }
            Some(a) => {
                m[index[format!("y{a}").as_str()]] += 1;
                Decoration::Label(a)
            }
        };
        wick.push(WickSort {
            tensor: t.clone(),
            monomial: m.clone(),
            coefficient: Rational::one(),
            normalization: norm(key.arity),
            fixed: None,
        });
        graph.push(GraphSort {
            vertex: VertexSort::new(key.arity, decoration),
            monomial: m,
            coefficient: Rational::one(),
            fixed: None,
        });
    }
    for (sort, l) in req.special.sorts() {
        let t = algebra
            .tensor(TensorKey::plain(sort.valence))
            .ok_or_else(|| {
                Error::Configuration(format!("no tensor k={} for special vertices", sort.valence))
            })?
            .clone();
        wick.push(WickSort {
            tensor: t,
            monomial: vec![0; nvars],
            coefficient: Rational::one(),
            normalization: norm(sort.valence),
            fixed: Some(l),
        });
        graph.push(GraphSort {
            vertex: VertexSort::new(sort.valence, Decoration::Special),
            monomial: vec![0; nvars],
            coefficient: Rational::one(),
            fixed: Some(l),
        });
    }
    let mut pair = PairFactor::trivial(nvars);
    let modular_h = modular.then(|| index["h"]);
    if let Some(h) = modular_h {
        pair.monomial[h] = 1;
    }
    Ok(Plan {
        algebra,
        space,
        wick,
        graph,
        pair,
        modular_h,
    })
}

/// Graph-side partition function: `Σ_Γ Z(Γ) / |Aut Γ|`.
pub fn partition_function(req: &ExpansionRequest) -> Result<Expansion> {
    let p = plan(req)?;
    let mode = req.mode.graph_mode();
    graph_sum(
        &p.graph,
        mode,
        &p.space,
        &p.pair,
        false,
        p.modular_h,
        |g, _| evaluate_closed(g, &p.algebra, mode),
    )
}

/// Taylor–Wick side of [`partition_function`]; no graphs involved.
pub fn partition_function_oracle(req: &ExpansionRequest) -> Result<MultiSeries> {
    let p = plan(req)?;
    taylor_wick(p.algebra.metric(), &p.wick, &p.space, &p.pair)
}

/// [`partition_function_oracle`] through ordered sequences of vertices.
pub fn partition_function_oracle_sequences(req: &ExpansionRequest) -> Result<MultiSeries> {
    let p = plan(req)?;
    taylor_wick_sequences(p.algebra.metric(), &p.wick, &p.space, &p.pair)
}

/// `Σ_{Γ connected} Z(Γ) / |Aut Γ|`.
pub fn connected_sum(req: &ExpansionRequest) -> Result<Expansion> {
    let p = plan(req)?;
    let mode = req.mode.graph_mode();
    graph_sum(
        &p.graph,
        mode,
        &p.space,
        &p.pair,
        true,
        p.modular_h,
        |g, _| evaluate_closed(g, &p.algebra, mode),
    )
}

/// `log Z`, computed as the logarithm of the graph-side partition function
/// and as the connected sum. Fails with an invariant violation if the two
/// disagree.
pub fn free_energy(req: &ExpansionRequest) -> Result<MultiSeries> {
    if !req.special.is_empty() {
        return Err(Error::Configuration(
            "free energy is defined without special vertices".into(),
        ));
    }
    let via_log = partition_function(req)?.series.log()?;
    let connected = connected_sum(req)?.series;
    if via_log != connected {
        return Err(Error::InvariantViolation(format!(
            "log Z and the connected sum differ:\n{via_log}\nvs\n{connected}"
        )));
    }
    Ok(connected)
}

/// Expectation of the special-vertex product against the coupled
/// exponential, as a graph sum with two vertex sorts, checked against its
/// Taylor–Wick side.
pub fn special_vertex_expectation(req: &ExpansionRequest) -> Result<MultiSeries> {
    let graphs = partition_function(req)?.series;
    let oracle = partition_function_oracle(req)?;
    if graphs != oracle {
        return Err(Error::InvariantViolation(format!(
            "special-vertex graph sum and Taylor–Wick expansion differ:\n{graphs}\nvs\n{oracle}"
        )));
    }
    Ok(graphs)
}

/// Modular graph expansion with its per-class ledger. Every ledger row
/// carries the true `ħ` exponent and the modular genus of its graph.
pub fn modular_expansion(req: &ExpansionRequest) -> Result<Expansion> {
    if req.mode != ExpansionMode::Modular {
        return Err(Error::Configuration(
            "modular_expansion needs modular mode".into(),
        ));
    }
    partition_function(req)
}

/// Coefficients of the true `ħ^e` in a modular series, as a series in the
/// `x` variables: terms with `h` exponent minus vertex count equal to `e`.
pub fn hbar_slice(series: &MultiSeries, e: i64) -> Result<MultiSeries> {
    let h = series.index_of("h")?;
    let mut out = series.zero_like();
    for (exps, c) in series.terms() {
        let vertices: u32 = exps
            .iter()
            .zip(series.vars())
            .filter(|(_, v)| v.starts_with('x'))
            .map(|(k, _)| *k)
            .sum();
        if i64::from(exps[h]) - i64::from(vertices) == e {
            out.add_term(exps.clone(), c.clone());
        }
    }
    Ok(out)
}

/// `⟨Π T^{l}⟩` for a profile, as `Σ_Γ α_Γ Z(Γ)` over the classes from
/// pairing up the slots and as a direct Gaussian moment. Fails with an
/// invariant violation if the two differ.
pub fn avg_product(alg: &SymAlgebra, profile: &ValenceProfile, mode: Mode) -> Result<Rational> {
    if mode == Mode::Ordinary && alg.kind() != Kind::Symmetric {
        return Err(Error::domain("ordinary averages need a symmetric algebra"));
    }
    let mut tensors = Vec::new();
    let mut counts = Vec::new();
    for (sort, l) in profile.sorts() {
        tensors.push(alg.tensor_for(sort.valence, sort.decoration)?);
        counts.push(l);
    }
    let mut moments = ProductMoments::new(alg.metric().inverse().to_vec(), &tensors);
    let direct = moments.expectation(&counts);

    let k = profile.group_order(mode);
    let mut graphs = Rational::zero();
    for class in graphs_with_profile(profile, mode) {
        let aut = class.graph.automorphism_count(mode)?;
        let alpha = (&k / BigInt::from(aut)).to_u64().unwrap_or(0);
        if alpha != class.occurrences || &k % BigInt::from(aut) != BigInt::zero() {
            return Err(Error::InvariantViolation(format!(
                "profile {profile}: α = |K|/|Aut| = {k}/{aut} but {} occurrences",
                class.occurrences
            )));
        }
        graphs += evaluate_closed(&class.graph, alg, mode)? * Rational::from_integer(alpha.into());
    }
    if graphs != direct {
        return Err(Error::InvariantViolation(format!(
            "profile {profile}: graph sum {graphs} but Gaussian moment {direct}"
        )));
    }
    Ok(direct)
}
