//! The 't Hooft–Kontsevich matrix model.
//!
//! Hermitian `N × N` matrices are handled through the complex basis
//! `E_ij` (index `i·N + j`), in which the deformed trace pairing
//! `½ tr(Λ(XY + YX))` reads `g(E_ij, E_kl) = (Λ_i + Λ_j)/2 · δ_il δ_jk` and
//! the Casimir is `Σ 2/(Λ_i + Λ_j) E_ij ⊗ E_ji`. Gaussian moments in this
//! basis are the complexified moments of the Hermitian ensemble.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{Kind, Metric, SymAlgebra, Tensor, TensorKey};
use crate::enumerate::{VertexSort, SLOT_LIMIT};
use crate::error::{Error, Result};
use crate::evaluate::evaluate_closed;
use crate::expansion::{graph_sum, taylor_wick, Expansion, GraphSort, PairFactor, WickSort};
use crate::graph::{Mode, RibbonGraph};
use crate::scalar::{int, parse_rational, Rational};
use crate::series::MultiSeries;

/// Positive eigenvalues `Λ_1..Λ_N` of the deformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KontsevichSpectrum {
    lambdas: Vec<Rational>,
}

impl KontsevichSpectrum {
    pub fn new(lambdas: Vec<Rational>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::domain("the spectrum needs at least one eigenvalue"));
        }
        if let Some(bad) = lambdas.iter().find(|l| !l.is_positive()) {
            return Err(Error::domain(format!("eigenvalue {bad} is not positive")));
        }
        Ok(KontsevichSpectrum { lambdas })
    }

    /// `Λ = I` of size `n`.
    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Rational::one(); n])
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    /// Propagator `2/(Λ_i + Λ_j)`.
    pub fn propagator(&self, i: usize, j: usize) -> Rational {
        int(2) / (&self.lambdas[i] + &self.lambdas[j])
    }
}

impl FromStr for KontsevichSpectrum {
    type Err = Error;

    /// Comma-separated rationals, e.g. `1,2,3/2`.
    fn from_str(s: &str) -> Result<Self> {
        let lambdas = s
            .split(',')
            .map(|p| {
                parse_rational(p).ok_or_else(|| {
                    Error::domain(format!("`{}` is not a rational number", p.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(lambdas)
    }
}

impl fmt::Display for KontsevichSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambdas.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Basis index of `E_ij`.
pub fn basis_index(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

/// Cyclic algebra of dimension `N²` with the deformed metric and the
/// trace tensors `T_k(X_1..X_k) = tr(X_1⋯X_k)` for `0 ≤ k ≤ max_valence`
/// (`T_0 = N`, the trace of the empty product).
pub fn hermitian_algebra(spectrum: &KontsevichSpectrum, max_valence: usize) -> Result<SymAlgebra> {
    if max_valence == 0 {
        return Err(Error::domain("hermitian_algebra needs max_valence ≥ 1"));
    }
    let n = spectrum.n();
    let dim = n * n;
    let half = Rational::new(1.into(), 2.into());
    let mut g = vec![vec![Rational::zero(); dim]; dim];
    for i in 0..n {
        for j in 0..n {
            g[basis_index(n, i, j)][basis_index(n, j, i)] =
                (&spectrum.lambdas[i] + &spectrum.lambdas[j]) * &half;
        }
    }
    let mut alg = SymAlgebra::new(Metric::new(g)?, Kind::Cyclic);
    alg.insert(
        TensorKey::plain(0),
        Tensor::from_entries(dim, 0, [(vec![], int(n as i64))])?,
    )?;
    for k in 1..=max_valence {
        // tr(E_{i1 j1} ⋯ E_{ik jk}) = 1 iff j_m = i_{m+1} cyclically
        let mut entries = Vec::new();
        let mut rows = vec![0usize; k];
        loop {
            let ix: Vec<usize> = (0..k)
                .map(|m| basis_index(n, rows[m], rows[(m + 1) % k]))
                .collect();
            entries.push((ix, Rational::one()));
            let mut p = 0;
            while p < k && rows[p] + 1 == n {
                rows[p] = 0;
                p += 1;
            }
            if p == k {
                break;
            }
            rows[p] += 1;
        }
        alg.insert(TensorKey::plain(k), Tensor::from_entries(dim, k, entries)?)?;
    }
    Ok(alg)
}

/// `Z(Γ)` as a sum over colorings `c` of the holes by `1..N` of
/// `Π_edges 2/(Λ_{c(ℓ⁺)} + Λ_{c(ℓ⁻)})`. Holes that meet no edge side
/// (free circles, isolated vertices) contribute `N` each.
pub fn z_gamma_coloring(g: &RibbonGraph, spectrum: &KontsevichSpectrum) -> Result<Rational> {
    let incidence = g.edge_hole_incidence()?;
    let (_, flag_holes) = g.hole_of_flags()?;
    let bare = g.hole_count()? - flag_holes;
    let n = spectrum.n();
    let weights: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| spectrum.propagator(i, j)).collect())
        .collect();
    let total = (n as u64)
        .checked_pow(flag_holes as u32)
        .ok_or_else(|| Error::domain("too many hole colorings"))?;
    let sum = (0..total)
        .into_par_iter()
        .map(|mut code| {
            let mut color = vec![0usize; flag_holes];
            for c in color.iter_mut() {
                *c = (code % n as u64) as usize;
                code /= n as u64;
            }
            incidence.iter().fold(Rational::one(), |acc, &(a, b)| {
                acc * &weights[color[a]][color[b]]
            })
        })
        .reduce(Rational::zero, |a, b| a + b);
    Ok(sum * num_traits::pow(int(n as i64), bare))
}

/// `Z(Γ)` by contracting the trace tensors against the Casimir.
pub fn z_gamma_contraction(g: &RibbonGraph, spectrum: &KontsevichSpectrum) -> Result<Rational> {
    let k = g
        .vertices()
        .iter()
        .map(|v| v.flags.len())
        .max()
        .unwrap_or(0)
        .max(1);
    let alg = hermitian_algebra(spectrum, k)?;
    evaluate_closed(g, &alg, Mode::Ribbon)
}

fn check_slots(max_slots: usize) -> Result<()> {
    if max_slots > SLOT_LIMIT {
        Err(Error::CatalogBound {
            slots: max_slots,
            limit: SLOT_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Standard matrix model `Σ_Γ N^{#holes} / |Aut Γ| · ħ^{-V}` over closed
/// ribbon graphs with at most `max_slots` slots, all couplings equal to
/// `1/ħ`. Variables: `hbar_inv` (weight 0) and the slot counter `s`
/// (weight 1), so each graph contributes `hbar_inv^V s^{2E}`.
pub fn standard_model_series(n: usize, max_slots: u32) -> Result<Expansion> {
    check_slots(max_slots as usize)?;
    let space = MultiSeries::zero(&[("hbar_inv", 0), ("s", 1)], max_slots);
    let sorts: Vec<GraphSort> = (1..=max_slots)
        .map(|k| GraphSort {
            vertex: VertexSort::plain(k as usize),
            monomial: vec![1, k],
            coefficient: Rational::one(),
            fixed: None,
        })
        .collect();
    let nn = int(n as i64);
    graph_sum(
        &sorts,
        Mode::Ribbon,
        &space,
        &PairFactor::trivial(2),
        false,
        None,
        |g, _| Ok(num_traits::pow(nn.clone(), g.hole_count()?)),
    )
}

/// Taylor–Wick side of [`standard_model_series`] over the Hermitian
/// algebra at `Λ = I`.
pub fn standard_model_oracle(n: usize, max_slots: u32) -> Result<MultiSeries> {
    let space = MultiSeries::zero(&[("hbar_inv", 0), ("s", 1)], max_slots);
    if max_slots == 0 {
        return Ok(space.one_like());
    }
    let alg = hermitian_algebra(&KontsevichSpectrum::identity(n)?, max_slots as usize)?;
    let sorts: Vec<WickSort> = (1..=max_slots)
        .map(|k| WickSort {
            tensor: alg.tensor(TensorKey::plain(k as usize)).unwrap().clone(),
            monomial: vec![1, k],
            coefficient: Rational::one(),
            normalization: int(k as i64),
            fixed: None,
        })
        .collect();
    taylor_wick(alg.metric(), &sorts, &space, &PairFactor::trivial(2))
}

/// Maps a series in `u` (with `u² = t`) to one in `t`; odd powers of `u`
/// must vanish.
fn u_to_t(series: &MultiSeries, order: u32) -> Result<MultiSeries> {
    let u = series.index_of("u")?;
    let names: Vec<(String, u32)> = series
        .vars()
        .iter()
        .zip(series.weights())
        .map(|(v, w)| {
            if v == "u" {
                ("t".to_string(), 1)
            } else {
                (v.clone(), *w)
            }
        })
        .collect();
    let refs: Vec<(&str, u32)> = names.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let mut out = MultiSeries::zero(&refs, order);
    for (exps, c) in series.terms() {
        if exps[u] % 2 == 1 {
            return Err(Error::InvariantViolation(format!(
                "odd power u^{} with coefficient {c}",
                exps[u]
            )));
        }
        let mut e = exps.clone();
        e[u] /= 2;
        out.add_term(e, c.clone());
    }
    Ok(out)
}

/// Largest valence with `(k - 2)/2 ≤ order`.
fn euler_max_valence(order: u32) -> u32 {
    2 * order + 2
}

/// `Σ_{g,n} Σ_Γ (−1)^{E}/|Aut Γ| · t^{2g−2+n} N^n` over connected ribbon
/// graphs with every valence at least 3 and `t`-degree `E − V ≤ order`.
/// `N` has weight 0.
pub fn euler_series(order: u32) -> Result<Expansion> {
    let kmax = euler_max_valence(order);
    // u counts Σ (k_v − 2) = 2(E − V)
    let space = MultiSeries::zero(&[("u", 1), ("N", 0)], 2 * order);
    let sorts: Vec<GraphSort> = (3..=kmax)
        .map(|k| GraphSort {
            vertex: VertexSort::plain(k as usize),
            monomial: vec![k - 2, 0],
            coefficient: Rational::one(),
            fixed: None,
        })
        .collect();
    let pair = PairFactor {
        monomial: vec![0, 0],
        coefficient: -Rational::one(),
    };
    let e = graph_sum(
        &sorts,
        Mode::Ribbon,
        &space,
        &pair,
        true,
        None,
        |g, exps| {
            exps[1] += g.hole_count()? as u32;
            Ok(Rational::one())
        },
    )?;
    let series = u_to_t(&e.series, order)?;
    Ok(Expansion {
        series,
        ledger: e.ledger,
    })
}

/// `log` of the Taylor–Wick expansion of the matrix integral with
/// couplings `u^{k−2}` on `tr X^k / k` (`k ≥ 3`) and Wick pairs weighted
/// by `−1`, at `Λ = I` of size `n`, as a series in `t = u²`.
pub fn euler_series_oracle(order: u32, n: usize) -> Result<MultiSeries> {
    let kmax = euler_max_valence(order);
    let space = MultiSeries::zero(&[("u", 1)], 2 * order);
    let alg = hermitian_algebra(&KontsevichSpectrum::identity(n)?, kmax as usize)?;
    let sorts: Vec<WickSort> = (3..=kmax)
        .map(|k| WickSort {
            tensor: alg.tensor(TensorKey::plain(k as usize)).unwrap().clone(),
            monomial: vec![k - 2],
            coefficient: Rational::one(),
            normalization: int(k as i64),
            fixed: None,
        })
        .collect();
    let pair = PairFactor {
        monomial: vec![0],
        coefficient: -Rational::one(),
    };
    let z = taylor_wick(alg.metric(), &sorts, &space, &pair)?;
    u_to_t(&z.log()?, order)
}
