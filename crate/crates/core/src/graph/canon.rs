//! Canonical forms and flag-level isomorphism counting.
//!
//! Ribbon mode: a connected ribbon component is determined by where one
//! root flag goes, so the canonical code of a closed component is the
//! minimum over root flags of a breadth-first relabeling; components that
//! carry legs are rooted at the (ordered) leg-ends and need no search.
//!
//! Ordinary mode: graphs become vertex-colored multigraphs (leg-ends are
//! extra nodes with unique colors) and are canonized by individualization
//! and color refinement, keeping the minimal leaf code.

use std::collections::VecDeque;
use std::fmt;

use super::{FlagRole, Mode, RibbonGraph};
use crate::error::{Error, Result};

/// Canonical encoding: equal iff the graphs are isomorphic in the mode the
/// form was computed in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u64>);

impl CanonicalForm {
    pub fn words(&self) -> &[u64] {
        &self.0
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|w| w.to_le_bytes()).collect()
    }

    /// Short stable digest (FNV-1a over the bytes) for display.
    pub fn digest(&self) -> u64 {
        self.to_bytes()
            .iter()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
                (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
            })
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.digest())
    }
}

const NONE: usize = usize::MAX;

fn role_code(role: FlagRole) -> u64 {
    match role {
        FlagRole::Vertex { .. } => 0,
        FlagRole::In(i) => (1 << 40) | i as u64,
        FlagRole::Out(i) => (2 << 40) | i as u64,
    }
}

pub(crate) fn canonical_form(g: &RibbonGraph, mode: Mode) -> CanonicalForm {
    let mut code = vec![
        match mode {
            Mode::Ribbon => 0xA,
            Mode::Ordinary => 0xB,
        },
        g.free_circles as u64,
        g.in_legs.len() as u64,
        g.out_legs.len() as u64,
    ];
    let mut isolated: Vec<u64> = g.isolated_vertices().map(|v| v.decoration.code()).collect();
    isolated.sort_unstable();
    code.push(isolated.len() as u64);
    code.extend(isolated);

    let components = flag_components(g);
    let (anchored, closed): (Vec<_>, Vec<_>) = components
        .into_iter()
        .partition(|c| c.iter().any(|&f| g.is_leg_end(f)));
    let anchored: Vec<usize> = anchored.into_iter().flatten().collect();

    let anchored_code = match mode {
        Mode::Ribbon => {
            let roots: Vec<usize> = g.leg_ends().collect();
            encode_ribbon(g, &roots)
        }
        Mode::Ordinary => ordinary_code(g, &anchored),
    };
    code.push(anchored_code.len() as u64);
    code.extend(anchored_code);

    let mut closed_codes: Vec<Vec<u64>> = closed
        .iter()
        .map(|flags| match mode {
            Mode::Ribbon => flags
                .iter()
                .map(|&root| encode_ribbon(g, &[root]))
                .min()
                .expect("components are nonempty"),
            Mode::Ordinary => ordinary_code(g, flags),
        })
        .collect();
    closed_codes.sort();
    for c in closed_codes {
        code.push(c.len() as u64);
        code.extend(c);
    }
    CanonicalForm(code)
}

fn flag_components(g: &RibbonGraph) -> Vec<Vec<usize>> {
    let n = g.num_flags();
    let mut comp = vec![NONE; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != NONE {
            continue;
        }
        let id = out.len();
        let mut members = Vec::new();
        let mut stack = vec![start];
        comp[start] = id;
        while let Some(f) = stack.pop() {
            members.push(f);
            let mut push = |x: usize, stack: &mut Vec<usize>| {
                if comp[x] == NONE {
                    comp[x] = id;
                    stack.push(x);
                }
            };
            push(g.matching[f], &mut stack);
            if let Some(v) = g.vertex_of(f) {
                for &x in &g.vertices[v].flags {
                    push(x, &mut stack);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Breadth-first relabeling from `roots`, visiting whole vertices in
/// rotation order, then the per-flag record
/// `(role, decoration, partner label, rotation successor label)`.
fn encode_ribbon(g: &RibbonGraph, roots: &[usize]) -> Vec<u64> {
    let n = g.num_flags();
    let mut label = vec![NONE; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();

    let visit =
        |f: usize, label: &mut Vec<usize>, order: &mut Vec<usize>, queue: &mut VecDeque<usize>| {
            if label[f] != NONE {
                return;
            }
            match g.vertex_of(f) {
                Some(_) => {
                    let mut x = f;
                    loop {
                        label[x] = order.len();
                        order.push(x);
                        queue.push_back(x);
                        x = g.rotation(x);
                        if x == f {
                            break;
                        }
                    }
                }
                None => {
                    label[f] = order.len();
                    order.push(f);
                    queue.push_back(f);
                }
            }
        };

    for &root in roots {
        visit(root, &mut label, &mut order, &mut queue);
        while let Some(x) = queue.pop_front() {
            visit(g.matching[x], &mut label, &mut order, &mut queue);
        }
    }

    let mut code = Vec::with_capacity(4 * order.len());
    for &f in &order {
        let role = g.role(f);
        code.push(role_code(role));
        code.push(match g.vertex_of(f) {
            Some(v) => g.vertices[v].decoration.code(),
            None => 0,
        });
        code.push(label[g.matching[f]] as u64);
        code.push(label[g.rotation(f)] as u64);
    }
    code
}

/// Ordinary-mode code of the part of `g` spanned by `flags` (a union of
/// whole components).
fn ordinary_code(g: &RibbonGraph, flags: &[usize]) -> Vec<u64> {
    // Nodes: vertices touched by `flags`, then leg-ends among `flags`.
    let mut node_of = vec![NONE; g.num_flags()];
    let mut colors: Vec<[u64; 3]> = Vec::new();
    let mut vertex_node = vec![NONE; g.vertices.len()];
    for &f in flags {
        match g.role(f) {
            FlagRole::Vertex { vertex, .. } => {
                if vertex_node[vertex] == NONE {
                    vertex_node[vertex] = colors.len();
                    let v = &g.vertices[vertex];
                    colors.push([0, v.valence() as u64, v.decoration.code()]);
                }
                node_of[f] = vertex_node[vertex];
            }
            role => {
                node_of[f] = colors.len();
                colors.push([1, role_code(role), 0]);
            }
        }
    }
    let m = colors.len();
    let mut adj = vec![vec![0u32; m]; m];
    for &f in flags {
        let p = g.matching[f];
        if f < p {
            let (a, b) = (node_of[f], node_of[p]);
            if a == b {
                adj[a][a] += 1;
            } else {
                adj[a][b] += 1;
                adj[b][a] += 1;
            }
        }
    }
    canonical_multigraph(&colors, &adj)
}

fn rank_by<K: Ord + Clone>(keys: &[K]) -> (Vec<usize>, usize) {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    let ranks = keys
        .iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect();
    (ranks, sorted.len())
}

fn refine(cells: &[usize], adj: &[Vec<u32>]) -> (Vec<usize>, usize) {
    let n = cells.len();
    let (mut current, mut count) = rank_by(cells);
    loop {
        let keys: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, u32)> = (0..n)
                    .filter(|&u| adj[v][u] > 0)
                    .map(|u| (current[u], adj[v][u]))
                    .collect();
                nb.sort_unstable();
                (current[v], nb)
            })
            .collect();
        let (next, next_count) = rank_by(&keys);
        if next_count == count {
            return (next, next_count);
        }
        current = next;
        count = next_count;
    }
}

fn canonical_multigraph(colors: &[[u64; 3]], adj: &[Vec<u32>]) -> Vec<u64> {
    let (cells, _) = rank_by(colors);
    let mut best: Option<Vec<u64>> = None;
    search(&cells, colors, adj, &mut best);
    best.unwrap_or_default()
}

fn search(cells: &[usize], colors: &[[u64; 3]], adj: &[Vec<u32>], best: &mut Option<Vec<u64>>) {
    let n = cells.len();
    let (cells, count) = refine(cells, adj);
    if count == n {
        let mut order = vec![0; n];
        for (v, &c) in cells.iter().enumerate() {
            order[c] = v;
        }
        let mut code = Vec::with_capacity(1 + 3 * n + n * n);
        code.push(n as u64);
        code.extend(order.iter().flat_map(|&v| colors[v]));
        for &a in &order {
            code.extend(order.iter().map(|&b| u64::from(adj[a][b])));
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    }
    let mut sizes = vec![0usize; count];
    for &c in &cells {
        sizes[c] += 1;
    }
    let target = (0..count)
        .find(|&c| sizes[c] > 1)
        .expect("some cell splits");
    for v in (0..n).filter(|&v| cells[v] == target) {
        let keys: Vec<(usize, bool)> = (0..n).map(|u| (cells[u], u != v)).collect();
        let (split, _) = rank_by(&keys);
        search(&split, colors, adj, best);
    }
}

/// Number of flag bijections `a -> b` that carry vertices to vertices of
/// the same valence and decoration, commute with the matching, and (ribbon
/// mode) with the rotation. Both graphs must be closed.
pub fn count_isomorphisms(a: &RibbonGraph, b: &RibbonGraph, mode: Mode) -> Result<u64> {
    if !a.is_closed() || !b.is_closed() {
        return Err(Error::domain(
            "isomorphism counting is defined for closed graphs only",
        ));
    }
    if a.num_flags() != b.num_flags() || a.vertices.len() != b.vertices.len() {
        return Ok(0);
    }
    let order = vertex_order(a);
    let mut state = IsoState {
        a,
        b,
        mode,
        phi: vec![NONE; a.num_flags()],
        inv: vec![NONE; b.num_flags()],
        used: vec![false; b.vertices.len()],
        order,
    };
    Ok(state.extend(0))
}

/// `|Aut Γ|` as the stabilizer of Γ in the group that permutes vertices of
/// equal sort and rotates (ribbon) or permutes (ordinary) their flags.
pub fn automorphism_count(g: &RibbonGraph, mode: Mode) -> Result<u64> {
    if !g.is_closed() {
        return Err(Error::domain(
            "automorphisms are defined for closed graphs only",
        ));
    }
    count_isomorphisms(g, g, mode)
}

impl RibbonGraph {
    pub fn automorphism_count(&self, mode: Mode) -> Result<u64> {
        automorphism_count(self, mode)
    }
}

/// Vertices in breadth-first order along edges, so that most vertices
/// after the first of each component have a flag matched into the already
/// placed part.
fn vertex_order(g: &RibbonGraph) -> Vec<usize> {
    let mut seen = vec![false; g.vertices.len()];
    let mut order = Vec::new();
    for start in 0..g.vertices.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &f in &g.vertices[v].flags {
                if let Some(w) = g.vertex_of(g.matching[f]) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    order
}

struct IsoState<'g> {
    a: &'g RibbonGraph,
    b: &'g RibbonGraph,
    mode: Mode,
    phi: Vec<usize>,
    inv: Vec<usize>,
    used: Vec<bool>,
    order: Vec<usize>,
}

impl IsoState<'_> {
    fn extend(&mut self, i: usize) -> u64 {
        if i == self.order.len() {
            return 1;
        }
        let v = self.order[i];
        let va = &self.a.vertices[v];
        let forced = va.flags.iter().find_map(|&f| {
            let p = self.a.matching[f];
            (self.phi[p] != NONE).then(|| self.b.matching[self.phi[p]])
        });
        let candidates: Vec<usize> = match forced {
            Some(t) => match self.b.vertex_of(t) {
                Some(w) if !self.used[w] => vec![w],
                _ => return 0,
            },
            None => (0..self.b.vertices.len())
                .filter(|&w| !self.used[w])
                .collect(),
        };
        let mut total = 0;
        for w in candidates {
            let vb = &self.b.vertices[w];
            if vb.valence() != va.valence() || vb.decoration != va.decoration {
                continue;
            }
            self.used[w] = true;
            total += match self.mode {
                Mode::Ribbon => self.ribbon_maps(i, v, w),
                Mode::Ordinary => self.ordinary_maps(i, v, w, 0, &mut vec![false; vb.valence()]),
            };
            self.used[w] = false;
        }
        total
    }

    fn try_assign(&mut self, f: usize, t: usize) -> bool {
        let p = self.a.matching[f];
        let q = self.b.matching[t];
        let ok = if self.phi[p] != NONE {
            self.phi[p] == q
        } else {
            self.inv[q] == NONE
        };
        if ok {
            self.phi[f] = t;
            self.inv[t] = f;
        }
        ok
    }

    fn unassign(&mut self, f: usize) {
        let t = self.phi[f];
        self.inv[t] = NONE;
        self.phi[f] = NONE;
    }

    fn ribbon_maps(&mut self, i: usize, v: usize, w: usize) -> u64 {
        let fa = self.a.vertices[v].flags.clone();
        let fb = self.b.vertices[w].flags.clone();
        let k = fa.len();
        if k == 0 {
            return self.extend(i + 1);
        }
        let mut total = 0;
        for shift in 0..k {
            let mut assigned = Vec::with_capacity(k);
            let mut ok = true;
            for j in 0..k {
                if self.try_assign(fa[j], fb[(j + shift) % k]) {
                    assigned.push(fa[j]);
                } else {
                    ok = false;
                    break;
                }
            }
            if ok {
                total += self.extend(i + 1);
            }
            for f in assigned {
                self.unassign(f);
            }
        }
        total
    }

    fn ordinary_maps(
        &mut self,
        i: usize,
        v: usize,
        w: usize,
        j: usize,
        taken: &mut Vec<bool>,
    ) -> u64 {
        let k = self.a.vertices[v].flags.len();
        if j == k {
            return self.extend(i + 1);
        }
        let f = self.a.vertices[v].flags[j];
        let mut total = 0;
        for slot in 0..k {
            if taken[slot] {
                continue;
            }
            let t = self.b.vertices[w].flags[slot];
            if self.try_assign(f, t) {
                taken[slot] = true;
                total += self.ordinary_maps(i, v, w, j + 1, taken);
                taken[slot] = false;
                self.unassign(f);
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn relabeled_theta_has_same_form() {
        let g = named::planar_theta();
        let perm = [4, 2, 0, 5, 1, 3];
        let h = g.relabeled(&perm);
        for mode in [Mode::Ribbon, Mode::Ordinary] {
            assert_eq!(g.canonical_form(mode), h.canonical_form(mode));
        }
    }

    #[test]
    fn thetas_differ_only_as_ribbon_graphs() {
        let p = named::planar_theta();
        let t = named::twisted_theta();
        assert_ne!(
            p.canonical_form(Mode::Ribbon),
            t.canonical_form(Mode::Ribbon)
        );
        assert_eq!(
            p.canonical_form(Mode::Ordinary),
            t.canonical_form(Mode::Ordinary)
        );
    }

    #[test]
    fn automorphism_examples() {
        for mode in [Mode::Ribbon, Mode::Ordinary] {
            assert_eq!(named::loop_graph().automorphism_count(mode).unwrap(), 2);
        }
        assert_eq!(
            named::double_edge()
                .automorphism_count(Mode::Ordinary)
                .unwrap(),
            4
        );
        assert_eq!(
            named::crossed_petals()
                .automorphism_count(Mode::Ribbon)
                .unwrap(),
            4
        );
        assert_eq!(
            named::planar_petals()
                .automorphism_count(Mode::Ribbon)
                .unwrap(),
            2
        );
        assert_eq!(
            named::planar_petals()
                .automorphism_count(Mode::Ordinary)
                .unwrap(),
            8
        );
        assert_eq!(
            named::two_loops()
                .automorphism_count(Mode::Ordinary)
                .unwrap(),
            8
        );
        // theta: swap the vertices, and 3! (ordinary) or 3 rotations (ribbon)
        assert_eq!(
            named::planar_theta()
                .automorphism_count(Mode::Ordinary)
                .unwrap(),
            12
        );
        assert_eq!(
            named::planar_theta()
                .automorphism_count(Mode::Ribbon)
                .unwrap(),
            6
        );
        assert_eq!(
            named::twisted_theta()
                .automorphism_count(Mode::Ribbon)
                .unwrap(),
            6
        );
    }

    #[test]
    fn open_graphs_have_no_automorphism_count() {
        assert!(named::triangle().automorphism_count(Mode::Ribbon).is_err());
    }

    #[test]
    fn decorations_separate_classes() {
        use crate::graph::Decoration;
        let a = named::double_edge().with_decorations(&[Decoration::Special, Decoration::Ordinary]);
        let b = named::double_edge().with_decorations(&[Decoration::Ordinary, Decoration::Special]);
        let c = named::double_edge();
        assert_eq!(
            a.canonical_form(Mode::Ordinary),
            b.canonical_form(Mode::Ordinary)
        );
        assert_ne!(
            a.canonical_form(Mode::Ordinary),
            c.canonical_form(Mode::Ordinary)
        );
        // The special vertex cannot be swapped with the ordinary one.
        assert_eq!(a.automorphism_count(Mode::Ordinary).unwrap(), 2);
    }

    #[test]
    fn legs_are_distinguished() {
        use crate::graph::{cap, cup, identity, tensor};
        assert_ne!(
            cup().canonical_form(Mode::Ribbon),
            cap().canonical_form(Mode::Ribbon)
        );
        // two crossing strands: first input to second output
        let swapped =
            RibbonGraph::new(vec![], vec![3, 2, 1, 0], vec![0, 1], vec![2, 3], 0).unwrap();
        for mode in [Mode::Ribbon, Mode::Ordinary] {
            assert_ne!(
                swapped.canonical_form(mode),
                tensor(&identity(1), &identity(1)).canonical_form(mode)
            );
        }
    }
}
