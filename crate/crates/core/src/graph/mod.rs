//! Ribbon graphs, ordinary graphs and their decorated variants, encoded as
//! combinatorial maps with legs.
//!
//! A graph lives on flags (half-edges) `0..H`. Every flag is either attached
//! to a vertex or is a *leg-end*. Vertices list their flags in cyclic order,
//! which is the rotation permutation. The matching is a fixed-point-free
//! involution on all flags: a 2-cycle between two vertex flags is an internal
//! edge, a 2-cycle touching a leg-end is a leg or a bare strand. Leg-ends are
//! ordered into inputs and outputs, giving the graph its type `(p, q)`.
//! Vertex-free closed loops, produced by welding bare strands into a circle,
//! are kept as a count of free circles.

mod canon;
mod format;
pub mod named;
mod prop;
pub mod random;
mod topology;

use std::fmt;

use crate::error::{Error, Result};

pub use canon::{automorphism_count, count_isomorphisms, CanonicalForm};
pub use format::{parse_graph, write_graph};
pub use prop::{cap, compose, corolla, cup, identity, tensor};

/// Which isomorphism notion applies: ribbon isomorphisms preserve the cyclic
/// order at every vertex, ordinary ones only the incidence structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Ribbon,
    Ordinary,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Ribbon => f.write_str("ribbon"),
            Mode::Ordinary => f.write_str("ordinary"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ribbon" => Ok(Mode::Ribbon),
            "ordinary" => Ok(Mode::Ordinary),
            other => Err(Error::domain(format!("unknown mode `{other}`"))),
        }
    }
}

/// Vertex sort. Automorphisms and canonical forms never mix sorts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Decoration {
    #[default]
    Ordinary,
    Special,
    Label(u32),
    Genus(u32),
}

impl Decoration {
    pub(crate) fn code(self) -> u64 {
        match self {
            Decoration::Ordinary => 0,
            Decoration::Special => 1,
            Decoration::Label(a) => (2 << 32) | u64::from(a),
            Decoration::Genus(g) => (3 << 32) | u64::from(g),
        }
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoration::Ordinary => f.write_str("ordinary"),
            Decoration::Special => f.write_str("special"),
            Decoration::Label(a) => write!(f, "label:{a}"),
            Decoration::Genus(g) => write!(f, "genus:{g}"),
        }
    }
}

impl std::str::FromStr for Decoration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("unknown decoration `{s}`"));
        match s {
            "ordinary" => Ok(Decoration::Ordinary),
            "special" => Ok(Decoration::Special),
            _ => {
                let (kind, value) = s.split_once(':').ok_or_else(bad)?;
                let value: u32 = value.parse().map_err(|_| bad())?;
                match kind {
                    "label" => Ok(Decoration::Label(value)),
                    "genus" => Ok(Decoration::Genus(value)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphType {
    pub inputs: usize,
    pub outputs: usize,
}

impl fmt::Display for GraphType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.inputs, self.outputs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    /// Flags in cyclic order.
    pub flags: Vec<usize>,
    pub decoration: Decoration,
}

impl Vertex {
    pub fn new(flags: Vec<usize>) -> Self {
        Vertex {
            flags,
            decoration: Decoration::Ordinary,
        }
    }

    pub fn decorated(flags: Vec<usize>, decoration: Decoration) -> Self {
        Vertex { flags, decoration }
    }

    pub fn valence(&self) -> usize {
        self.flags.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FlagRole {
    Vertex { vertex: usize, position: usize },
    In(usize),
    Out(usize),
}

/// A possibly open, possibly decorated ribbon graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonGraph {
    vertices: Vec<Vertex>,
    matching: Vec<usize>,
    in_legs: Vec<usize>,
    out_legs: Vec<usize>,
    free_circles: usize,
    roles: Vec<FlagRole>,
}

impl RibbonGraph {
    /// Builds a graph and checks every structural invariant.
    pub fn new(
        vertices: Vec<Vertex>,
        matching: Vec<usize>,
        in_legs: Vec<usize>,
        out_legs: Vec<usize>,
        free_circles: usize,
    ) -> Result<Self> {
        let n = matching.len();
        let mut roles: Vec<Option<FlagRole>> = vec![None; n];
        let mut claim = |flag: usize, role: FlagRole| -> Result<()> {
            let slot = roles
                .get_mut(flag)
                .ok_or_else(|| Error::InvalidGraph(format!("flag {flag} out of range 0..{n}")))?;
            if slot.is_some() {
                return Err(Error::InvalidGraph(format!("flag {flag} used twice")));
            }
            *slot = Some(role);
            Ok(())
        };
        for (v, vertex) in vertices.iter().enumerate() {
            for (position, &f) in vertex.flags.iter().enumerate() {
                claim(
                    f,
                    FlagRole::Vertex {
                        vertex: v,
                        position,
                    },
                )?;
            }
        }
        for (i, &f) in in_legs.iter().enumerate() {
            claim(f, FlagRole::In(i))?;
        }
        for (i, &f) in out_legs.iter().enumerate() {
            claim(f, FlagRole::Out(i))?;
        }
        let roles = roles
            .into_iter()
            .enumerate()
            .map(|(f, r)| {
                r.ok_or_else(|| {
                    Error::InvalidGraph(format!("flag {f} is neither on a vertex nor a leg-end"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for (f, &m) in matching.iter().enumerate() {
            if m >= n {
                return Err(Error::InvalidGraph(format!(
                    "flag {f} matched out of range"
                )));
            }
            if m == f {
                return Err(Error::InvalidGraph(format!(
                    "flag {f} is matched to itself"
                )));
            }
            if matching[m] != f {
                return Err(Error::InvalidGraph(format!(
                    "matching is not an involution at flag {f}"
                )));
            }
        }
        Ok(RibbonGraph {
            vertices,
            matching,
            in_legs,
            out_legs,
            free_circles,
            roles,
        })
    }

    /// Closed graph from cyclic vertex lists and internal edges.
    pub fn closed(vertices: Vec<Vec<usize>>, edges: &[(usize, usize)]) -> Result<Self> {
        Self::closed_decorated(vertices.into_iter().map(Vertex::new).collect(), edges)
    }

    pub fn closed_decorated(vertices: Vec<Vertex>, edges: &[(usize, usize)]) -> Result<Self> {
        let n: usize = vertices.iter().map(Vertex::valence).sum();
        let matching = matching_from_pairs(n, edges)?;
        Self::new(vertices, matching, Vec::new(), Vec::new(), 0)
    }

    /// The empty graph of type (0,0).
    pub fn empty() -> Self {
        RibbonGraph {
            vertices: Vec::new(),
            matching: Vec::new(),
            in_legs: Vec::new(),
            out_legs: Vec::new(),
            free_circles: 0,
            roles: Vec::new(),
        }
    }

    /// `n` vertex-free closed circles.
    pub fn circles(n: usize) -> Self {
        RibbonGraph {
            free_circles: n,
            ..Self::empty()
        }
    }

    pub fn num_flags(&self) -> usize {
        self.matching.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    pub fn partner(&self, flag: usize) -> usize {
        self.matching[flag]
    }

    pub fn in_legs(&self) -> &[usize] {
        &self.in_legs
    }

    pub fn out_legs(&self) -> &[usize] {
        &self.out_legs
    }

    pub fn free_circles(&self) -> usize {
        self.free_circles
    }

    pub fn graph_type(&self) -> GraphType {
        GraphType {
            inputs: self.in_legs.len(),
            outputs: self.out_legs.len(),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.in_legs.is_empty() && self.out_legs.is_empty()
    }

    pub(crate) fn role(&self, flag: usize) -> FlagRole {
        self.roles[flag]
    }

    /// Vertex owning `flag`, if it is vertex-attached.
    pub fn vertex_of(&self, flag: usize) -> Option<usize> {
        match self.roles[flag] {
            FlagRole::Vertex { vertex, .. } => Some(vertex),
            _ => None,
        }
    }

    pub fn is_vertex_flag(&self, flag: usize) -> bool {
        self.vertex_of(flag).is_some()
    }

    /// Rotation permutation: the next flag in cyclic order around the vertex.
    /// Leg-ends are fixed points.
    pub fn rotation(&self, flag: usize) -> usize {
        match self.roles[flag] {
            FlagRole::Vertex { vertex, position } => {
                let flags = &self.vertices[vertex].flags;
                flags[(position + 1) % flags.len()]
            }
            _ => flag,
        }
    }

    /// Internal edges as `(f, g)` with `f < g`, both vertex-attached.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.num_flags())
            .filter_map(|f| {
                let g = self.matching[f];
                (f < g && self.is_vertex_flag(f) && self.is_vertex_flag(g)).then_some((f, g))
            })
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    /// Total number of vertex slots, i.e. the sum of valences.
    pub fn num_slots(&self) -> usize {
        self.vertices.iter().map(Vertex::valence).sum()
    }

    /// Same graph with vertex `v` re-rooted: its cyclic list starts `shift`
    /// positions later. The ribbon structure is unchanged.
    pub fn rerooted(&self, v: usize, shift: usize) -> Self {
        let mut vertices = self.vertices.clone();
        let k = vertices[v].flags.len().max(1);
        vertices[v].flags.rotate_left(shift % k);
        Self::new(
            vertices,
            self.matching.clone(),
            self.in_legs.clone(),
            self.out_legs.clone(),
            self.free_circles,
        )
        .expect("rerooting preserves invariants")
    }

    /// Same graph with the flags of vertex `v` listed in the order
    /// `perm` (a permutation of positions). Changes the ribbon structure
    /// unless `perm` is a rotation.
    pub fn with_vertex_order(&self, v: usize, perm: &[usize]) -> Self {
        let mut vertices = self.vertices.clone();
        let old = &self.vertices[v].flags;
        assert_eq!(perm.len(), old.len());
        vertices[v].flags = perm.iter().map(|&p| old[p]).collect();
        Self::new(
            vertices,
            self.matching.clone(),
            self.in_legs.clone(),
            self.out_legs.clone(),
            self.free_circles,
        )
        .expect("reordering a vertex preserves invariants")
    }

    /// Renames flag `f` to `perm[f]` everywhere.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.num_flags());
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex::decorated(v.flags.iter().map(|&f| perm[f]).collect(), v.decoration))
            .collect();
        let mut matching = vec![0; self.num_flags()];
        for (f, &g) in self.matching.iter().enumerate() {
            matching[perm[f]] = perm[g];
        }
        Self::new(
            vertices,
            matching,
            self.in_legs.iter().map(|&f| perm[f]).collect(),
            self.out_legs.iter().map(|&f| perm[f]).collect(),
            self.free_circles,
        )
        .expect("relabeling preserves invariants")
    }

    /// Reorders vertices (vertex `i` moves to position `order[i]`).
    pub fn with_vertices_permuted(&self, order: &[usize]) -> Self {
        let mut vertices = vec![None; self.vertices.len()];
        for (i, v) in self.vertices.iter().enumerate() {
            vertices[order[i]] = Some(v.clone());
        }
        Self::new(
            vertices.into_iter().map(Option::unwrap).collect(),
            self.matching.clone(),
            self.in_legs.clone(),
            self.out_legs.clone(),
            self.free_circles,
        )
        .expect("vertex permutation preserves invariants")
    }

    pub fn with_decorations(&self, decorations: &[Decoration]) -> Self {
        let mut g = self.clone();
        for (v, &d) in g.vertices.iter_mut().zip(decorations) {
            v.decoration = d;
        }
        g
    }

    pub fn canonical_form(&self, mode: Mode) -> CanonicalForm {
        canon::canonical_form(self, mode)
    }

    pub fn is_isomorphic(&self, other: &Self, mode: Mode) -> bool {
        self.canonical_form(mode) == other.canonical_form(mode)
    }

    pub fn forget_cyclic(&self) -> OrdinaryGraph {
        OrdinaryGraph::from_ribbon(self)
    }
}

/// An ordinary graph: vertices are unordered flag sets.
///
/// Stored as a ribbon graph whose vertex lists are sorted, which picks one
/// representative of the symmetric-group orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinaryGraph(RibbonGraph);

impl OrdinaryGraph {
    pub fn from_ribbon(g: &RibbonGraph) -> Self {
        let mut inner = g.clone();
        for v in &mut inner.vertices {
            v.flags.sort_unstable();
        }
        let inner = RibbonGraph::new(
            inner.vertices,
            inner.matching,
            inner.in_legs,
            inner.out_legs,
            inner.free_circles,
        )
        .expect("sorting vertex flags preserves invariants");
        OrdinaryGraph(inner)
    }

    pub fn as_ribbon(&self) -> &RibbonGraph {
        &self.0
    }

    pub fn into_ribbon(self) -> RibbonGraph {
        self.0
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.0.canonical_form(Mode::Ordinary)
    }

    pub fn automorphism_count(&self) -> Result<u64> {
        automorphism_count(&self.0, Mode::Ordinary)
    }

    pub fn modular_genus(&self) -> Result<u32> {
        self.0.modular_genus()
    }
}

pub(crate) fn matching_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Vec<usize>> {
    let mut matching = vec![usize::MAX; n];
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(Error::InvalidGraph(format!("edge ({a},{b}) out of range")));
        }
        if a == b {
            return Err(Error::InvalidGraph(format!("edge ({a},{b}) is degenerate")));
        }
        if matching[a] != usize::MAX || matching[b] != usize::MAX {
            return Err(Error::InvalidGraph(format!("edge ({a},{b}) reuses a flag")));
        }
        matching[a] = b;
        matching[b] = a;
    }
    if let Some(f) = matching.iter().position(|&m| m == usize::MAX) {
        return Err(Error::InvalidGraph(format!("flag {f} is unmatched")));
    }
    Ok(matching)
}
