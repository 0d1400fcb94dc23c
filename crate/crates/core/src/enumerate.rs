//! Wick pairings, closed graphs with a prescribed valence profile, and the
//! symmetry coefficients `α_Γ = |K| / |Aut Γ|`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{CanonicalForm, Decoration, Mode, RibbonGraph, Vertex};
use crate::scalar::factorial;

/// Largest slot count the catalog builders accept.
pub const SLOT_LIMIT: usize = 12;

/// Perfect matching of the slots `0..2n`, as pairs `(a, b)` with `a < b`
/// listed by increasing `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pairing {
    blocks: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn slots(&self) -> usize {
        2 * self.blocks.len()
    }

    /// The pairing as an involution on `0..2n`.
    pub fn as_matching(&self) -> Vec<usize> {
        let mut m = vec![0; self.slots()];
        for &(a, b) in &self.blocks {
            m[a] = b;
            m[b] = a;
        }
        m
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|(a, b)| format!("{{{},{}}}", a + 1, b + 1))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Streams every pairing of `slots` slots exactly once. The lowest
/// unmatched slot is paired in turn with each remaining slot, so the order
/// is deterministic.
pub struct Pairings {
    n: usize,
    // choice[k] indexes the partner of the lowest free slot at step k
    choice: Vec<usize>,
    done: bool,
}

impl Iterator for Pairings {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        if self.done {
            return None;
        }
        let mut free: Vec<usize> = (0..2 * self.n).collect();
        let mut blocks = Vec::with_capacity(self.n);
        for &c in &self.choice {
            let a = free.remove(0);
            let b = free.remove(c);
            blocks.push((a, b));
        }
        // advance the mixed-radix counter; digit k has radix 2(n-k)-1
        self.done = true;
        for k in (0..self.n).rev() {
            let radix = 2 * (self.n - k) - 1;
            if self.choice[k] + 1 < radix {
                self.choice[k] += 1;
                self.done = false;
                break;
            }
            self.choice[k] = 0;
        }
        Some(Pairing { blocks })
    }
}

pub fn pairings(slots: usize) -> Result<Pairings> {
    if slots % 2 == 1 {
        return Err(Error::domain(format!(
            "cannot pair an odd number ({slots}) of slots"
        )));
    }
    Ok(Pairings {
        n: slots / 2,
        choice: vec![0; slots / 2],
        done: false,
    })
}

/// Valence and decoration of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSort {
    pub valence: usize,
    pub decoration: Decoration,
}

impl VertexSort {
    pub fn plain(valence: usize) -> Self {
        VertexSort {
            valence,
            decoration: Decoration::Ordinary,
        }
    }

    pub fn new(valence: usize, decoration: Decoration) -> Self {
        VertexSort {
            valence,
            decoration,
        }
    }
}

impl fmt::Display for VertexSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}", self.valence)?;
        if self.decoration != Decoration::Ordinary {
            write!(f, "/{}", self.decoration)?;
        }
        Ok(())
    }
}

/// Number of vertices of each sort.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValenceProfile {
    counts: BTreeMap<VertexSort, usize>,
}

impl ValenceProfile {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `counts[i]` undecorated vertices of valence `i + 1`.
    pub fn from_counts(counts: &[usize]) -> Self {
        Self::new(
            counts
                .iter()
                .enumerate()
                .map(|(i, &l)| (VertexSort::plain(i + 1), l)),
        )
    }

    pub fn new(counts: impl IntoIterator<Item = (VertexSort, usize)>) -> Self {
        let mut map = BTreeMap::new();
        for (s, l) in counts {
            if l > 0 {
                *map.entry(s).or_insert(0) += l;
            }
        }
        ValenceProfile { counts: map }
    }

    pub fn of_graph(g: &RibbonGraph) -> Self {
        Self::new(
            g.vertices()
                .iter()
                .map(|v| (VertexSort::new(v.valence(), v.decoration), 1)),
        )
    }

    pub fn sorts(&self) -> impl Iterator<Item = (VertexSort, usize)> + '_ {
        self.counts.iter().map(|(&s, &l)| (s, l))
    }

    pub fn count(&self, sort: VertexSort) -> usize {
        self.counts.get(&sort).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn slots(&self) -> usize {
        self.sorts().map(|(s, l)| s.valence * l).sum()
    }

    pub fn num_vertices(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn merged(&self, other: &Self) -> Self {
        Self::new(self.sorts().chain(other.sorts()))
    }

    /// `|K|`: `prod k^{l} l!` in ribbon mode, `prod (k!)^{l} l!` in ordinary
    /// mode, one factor per sort.
    pub fn group_order(&self, mode: Mode) -> BigInt {
        self.sorts().fold(BigInt::one(), |acc, (s, l)| {
            let local = match mode {
                Mode::Ribbon => BigInt::from(s.valence),
                Mode::Ordinary => factorial(s.valence),
            };
            acc * num_traits::pow(local, l) * factorial(l)
        })
    }

    /// Vertices in sort order, each on a contiguous block of slots.
    pub fn layout(&self) -> Vec<Vertex> {
        let mut next = 0;
        let mut out = Vec::with_capacity(self.num_vertices());
        for (s, l) in self.sorts() {
            for _ in 0..l {
                out.push(Vertex::decorated(
                    (next..next + s.valence).collect(),
                    s.decoration,
                ));
                next += s.valence;
            }
        }
        out
    }
}

impl fmt::Display for ValenceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        let parts: Vec<String> = self.sorts().map(|(s, l)| format!("{s}={l}")).collect();
        f.write_str(&parts.join(" "))
    }
}

impl std::str::FromStr for ValenceProfile {
    type Err = Error;

    /// Comma-separated `l_1,l_2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split(',')
            .map(|w| {
                w.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::domain(format!("bad profile entry `{w}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_counts(&counts))
    }
}

/// One isomorphism class produced by pairing up a profile's slots.
#[derive(Debug, Clone)]
pub struct ClassCount {
    pub form: CanonicalForm,
    pub graph: RibbonGraph,
    /// Number of pairings producing this class.
    pub occurrences: u64,
}

/// Applies every pairing to the profile's slot layout and buckets the
/// resulting closed graphs by canonical form. Classes come in canonical
/// form order; an odd slot count yields no classes.
pub fn graphs_with_profile(profile: &ValenceProfile, mode: Mode) -> Vec<ClassCount> {
    let slots = profile.slots();
    if slots % 2 == 1 {
        return Vec::new();
    }
    let layout = profile.layout();
    let mut buckets: BTreeMap<CanonicalForm, ClassCount> = BTreeMap::new();
    for p in pairings(slots).expect("even slot count") {
        let g = RibbonGraph::new(layout.clone(), p.as_matching(), vec![], vec![], 0)
            .expect("a pairing of a layout is a closed graph");
        let form = g.canonical_form(mode);
        buckets
            .entry(form.clone())
            .and_modify(|c| c.occurrences += 1)
            .or_insert(ClassCount {
                form,
                graph: g,
                occurrences: 1,
            });
    }
    buckets.into_values().collect()
}

/// `|K| / |Aut Γ|` for a closed graph realizing `profile`.
pub fn alpha_coefficient(g: &RibbonGraph, profile: &ValenceProfile, mode: Mode) -> Result<u64> {
    if &ValenceProfile::of_graph(g) != profile {
        return Err(Error::domain(format!(
            "graph has profile {}, not {profile}",
            ValenceProfile::of_graph(g)
        )));
    }
    let aut = BigInt::from(g.automorphism_count(mode)?);
    let k = profile.group_order(mode);
    if &k % &aut != BigInt::from(0) {
        return Err(Error::InvariantViolation(format!(
            "|Aut| = {aut} does not divide |K| = {k}"
        )));
    }
    (k / aut)
        .to_u64()
        .ok_or_else(|| Error::domain("coefficient exceeds 64 bits"))
}

/// Every count vector over `sorts` whose slot total is even and at most
/// `max_slots`, ordered by slot total, then lexicographically.
pub fn profiles_up_to(sorts: &[VertexSort], max_slots: usize) -> Vec<ValenceProfile> {
    let mut sorts = sorts.to_vec();
    sorts.sort();
    sorts.dedup();
    let mut out = Vec::new();
    let mut counts = vec![0usize; sorts.len()];
    fn rec(
        i: usize,
        used: usize,
        max: usize,
        sorts: &[VertexSort],
        counts: &mut Vec<usize>,
        out: &mut Vec<ValenceProfile>,
    ) {
        if i == sorts.len() {
            if used.is_multiple_of(2) {
                out.push(ValenceProfile::new(
                    sorts.iter().copied().zip(counts.iter().copied()),
                ));
            }
            return;
        }
        let k = sorts[i].valence;
        let mut l = 0;
        loop {
            counts[i] = l;
            rec(i + 1, used + k * l, max, sorts, counts, out);
            if k == 0 || used + k * (l + 1) > max {
                break;
            }
            l += 1;
        }
        counts[i] = 0;
    }
    rec(0, 0, max_slots, &sorts, &mut counts, &mut out);
    out.sort_by(|a, b| a.slots().cmp(&b.slots()).then_with(|| a.cmp(b)));
    out
}

/// Genus and hole count of a connected ribbon component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentTopology {
    pub genus: u32,
    pub holes: usize,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub profile: ValenceProfile,
    pub graph: RibbonGraph,
    pub form: CanonicalForm,
    pub automorphisms: u64,
    pub occurrences: u64,
    pub b0: usize,
    /// Per component, ribbon mode only.
    pub components: Option<Vec<ComponentTopology>>,
    /// Ribbon mode only.
    pub holes: Option<usize>,
}

impl CatalogEntry {
    pub fn is_connected(&self) -> bool {
        self.b0 == 1
    }
}

/// Closed isomorphism classes grouped by profile.
#[derive(Debug, Clone)]
pub struct Catalog {
    mode: Mode,
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// All classes for all profiles over `sorts` with at most `max_slots`
    /// slots, the empty graph included.
    pub fn build(max_slots: usize, mode: Mode, sorts: &[VertexSort]) -> Result<Self> {
        if max_slots > SLOT_LIMIT {
            return Err(Error::CatalogBound {
                slots: max_slots,
                limit: SLOT_LIMIT,
            });
        }
        Self::for_profiles(profiles_up_to(sorts, max_slots), mode)
    }

    pub fn for_profiles(profiles: Vec<ValenceProfile>, mode: Mode) -> Result<Self> {
        if let Some(p) = profiles.iter().find(|p| p.slots() > SLOT_LIMIT) {
            return Err(Error::CatalogBound {
                slots: p.slots(),
                limit: SLOT_LIMIT,
            });
        }
        let per_profile: Vec<Result<Vec<CatalogEntry>>> = profiles
            .into_par_iter()
            .map(|profile| {
                graphs_with_profile(&profile, mode)
                    .into_iter()
                    .map(|c| entry(profile.clone(), c, mode))
                    .collect()
            })
            .collect();
        let mut entries = Vec::new();
        for r in per_profile {
            entries.extend(r?);
        }
        Ok(Catalog { mode, entries })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn connected(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(|e| e.is_connected())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn entry(profile: ValenceProfile, c: ClassCount, mode: Mode) -> Result<CatalogEntry> {
    let g = c.graph;
    let automorphisms = g.automorphism_count(mode)?;
    let (components, holes) = match mode {
        Mode::Ribbon => {
            let comps = g
                .connected_components()
                .iter()
                .map(|h| {
                    Ok(ComponentTopology {
                        genus: h.genus()?,
                        holes: h.hole_count()?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            (Some(comps), Some(g.hole_count()?))
        }
        Mode::Ordinary => (None, None),
    };
    Ok(CatalogEntry {
        b0: g.b0(),
        profile,
        form: c.form,
        automorphisms,
        occurrences: c.occurrences,
        components,
        holes,
        graph: g,
    })
}

/// Catalog over undecorated-or-`decorations` vertices of every valence
/// `1..=max_total_valence`.
pub fn graphs_up_to_order(
    max_total_valence: usize,
    mode: Mode,
    decorations: &[Decoration],
) -> Result<Catalog> {
    let decorations = if decorations.is_empty() {
        &[Decoration::Ordinary][..]
    } else {
        decorations
    };
    let sorts: Vec<VertexSort> = (1..=max_total_valence)
        .flat_map(|k| decorations.iter().map(move |&d| VertexSort::new(k, d)))
        .collect();
    Catalog::build(max_total_valence, mode, &sorts)
}
