//! Connectivity, holes, genus.

use super::{Decoration, RibbonGraph, Vertex};
use crate::error::{Error, Result};

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

impl RibbonGraph {
    /// Flag classes under the rotation and the matching, ordered by their
    /// smallest flag.
    fn flag_components(&self) -> Vec<Vec<usize>> {
        let n = self.num_flags();
        let mut parent: Vec<usize> = (0..n).collect();
        for v in &self.vertices {
            for w in v.flags.windows(2) {
                union(&mut parent, w[0], w[1]);
            }
        }
        for f in 0..n {
            union(&mut parent, f, self.matching[f]);
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = vec![usize::MAX; n];
        for f in 0..n {
            let r = find(&mut parent, f);
            if class_of[r] == usize::MAX {
                class_of[r] = classes.len();
                classes.push(Vec::new());
            }
            classes[class_of[r]].push(f);
        }
        classes
    }

    /// Vertices without flags; each is a component of its own.
    pub fn isolated_vertices(&self) -> impl Iterator<Item = &Vertex> + '_ {
        self.vertices.iter().filter(|v| v.flags.is_empty())
    }

    /// Number of connected components, isolated vertices and free circles
    /// included.
    pub fn b0(&self) -> usize {
        self.flag_components().len() + self.isolated_vertices().count() + self.free_circles
    }

    pub fn is_connected(&self) -> bool {
        self.b0() == 1
    }

    /// Connected components as standalone graphs. Components carrying
    /// legs keep their legs in the original relative order. Isolated
    /// vertices follow the flag-carrying components; free circles come
    /// last, one per circle.
    pub fn connected_components(&self) -> Vec<RibbonGraph> {
        let mut out: Vec<RibbonGraph> = self
            .flag_components()
            .into_iter()
            .map(|flags| self.subgraph(&flags))
            .collect();
        out.extend(self.isolated_vertices().map(|v| {
            RibbonGraph::new(vec![v.clone()], Vec::new(), Vec::new(), Vec::new(), 0)
                .expect("an isolated vertex is a valid graph")
        }));
        out.extend((0..self.free_circles).map(|_| RibbonGraph::circles(1)));
        out
    }

    fn subgraph(&self, flags: &[usize]) -> RibbonGraph {
        let mut index = vec![usize::MAX; self.num_flags()];
        for (i, &f) in flags.iter().enumerate() {
            index[f] = i;
        }
        let vertices = self
            .vertices
            .iter()
            .filter(|v| v.flags.first().is_some_and(|&f| index[f] != usize::MAX))
            .map(|v| Vertex::decorated(v.flags.iter().map(|&f| index[f]).collect(), v.decoration))
            .collect();
        let matching = flags.iter().map(|&f| index[self.matching[f]]).collect();
        let keep = |legs: &[usize]| -> Vec<usize> {
            legs.iter()
                .filter(|&&f| index[f] != usize::MAX)
                .map(|&f| index[f])
                .collect()
        };
        RibbonGraph::new(
            vertices,
            matching,
            keep(&self.in_legs),
            keep(&self.out_legs),
            0,
        )
        .expect("a component of a valid graph is valid")
    }

    fn require_closed(&self, what: &str) -> Result<()> {
        if self.is_closed() {
            Ok(())
        } else {
            Err(Error::domain(format!("{what} requires a closed graph")))
        }
    }

    /// Face permutation `rotation ∘ matching`; its orbits are the holes.
    pub fn face_permutation(&self, flag: usize) -> usize {
        self.rotation(self.matching[flag])
    }

    /// Boundary cycles of the fattened surface, each as the flag sequence
    /// visited by the face permutation. Free circles and isolated vertices
    /// have no flags and are not listed here; see [`Self::hole_count`].
    pub fn holes(&self) -> Result<Vec<Vec<usize>>> {
        self.require_closed("hole tracing")?;
        let n = self.num_flags();
        let mut seen = vec![false; n];
        let mut holes = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut f = start;
            while !seen[f] {
                seen[f] = true;
                cycle.push(f);
                f = self.face_permutation(f);
            }
            holes.push(cycle);
        }
        Ok(holes)
    }

    /// Number of holes. A free circle fattens to an annulus (two holes), an
    /// isolated vertex to a disk (one hole).
    pub fn hole_count(&self) -> Result<usize> {
        Ok(self.holes()?.len() + 2 * self.free_circles + self.isolated_vertices().count())
    }

    /// Hole index of every flag, with the number of flag-carrying holes.
    pub fn hole_of_flags(&self) -> Result<(Vec<usize>, usize)> {
        let holes = self.holes()?;
        let mut hole_of = vec![0; self.num_flags()];
        for (h, cycle) in holes.iter().enumerate() {
            for &f in cycle {
                hole_of[f] = h;
            }
        }
        Ok((hole_of, holes.len()))
    }

    /// For every internal edge `(f, g)`, the holes on its two sides: the
    /// hole through `f` and the hole through `g`. They may coincide.
    pub fn edge_hole_incidence(&self) -> Result<Vec<(usize, usize)>> {
        let (hole_of, _) = self.hole_of_flags()?;
        Ok(self
            .edges()
            .into_iter()
            .map(|(f, g)| (hole_of[f], hole_of[g]))
            .collect())
    }

    /// Euler characteristic `V - E + #holes` of the fattened closed surface.
    pub fn euler_characteristic(&self) -> Result<i64> {
        Ok(self.num_vertices() as i64 - self.num_edges() as i64 + self.hole_count()? as i64)
    }

    /// Genus of the surface of a closed connected ribbon graph.
    pub fn genus(&self) -> Result<u32> {
        self.require_closed("genus")?;
        if self.b0() != 1 {
            return Err(Error::domain("genus requires a connected graph"));
        }
        let chi = self.euler_characteristic()?;
        debug_assert!(chi <= 2 && (2 - chi) % 2 == 0);
        Ok(((2 - chi) / 2) as u32)
    }

    /// First Betti number `E - V + b0` of the underlying 1-complex. Free
    /// circles count as one cycle each.
    pub fn first_betti(&self) -> usize {
        self.num_edges() + self.b0() - self.num_vertices()
    }

    /// Genus of a closed modular graph: vertex genera plus the first Betti
    /// number.
    pub fn modular_genus(&self) -> Result<u32> {
        self.require_closed("modular genus")?;
        let mut total = 0;
        for (v, vertex) in self.vertices.iter().enumerate() {
            match vertex.decoration {
                Decoration::Genus(g) => total += g,
                other => {
                    return Err(Error::domain(format!(
                        "vertex {v} carries `{other}`, not a genus decoration"
                    )))
                }
            }
        }
        Ok(total + self.first_betti() as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{compose, cup, identity, named, tensor, Decoration, RibbonGraph, Vertex};

    #[test]
    fn empty_graph_has_no_components() {
        let e = RibbonGraph::empty();
        assert!(e.connected_components().is_empty());
        assert_eq!(e.b0(), 0);
    }

    #[test]
    fn loops_split_into_components() {
        let two = tensor(&named::loop_graph(), &named::loop_graph());
        assert_eq!(two.b0(), 2);
        let comps = two.connected_components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c == &named::loop_graph()));
        assert_eq!(named::planar_theta().connected_components().len(), 1);
    }

    #[test]
    fn hole_counts() {
        assert_eq!(named::loop_graph().hole_count().unwrap(), 2);
        assert_eq!(named::planar_theta().hole_count().unwrap(), 3);
        assert_eq!(named::twisted_theta().hole_count().unwrap(), 1);
    }

    #[test]
    fn genera() {
        assert_eq!(named::planar_theta().genus().unwrap(), 0);
        assert_eq!(named::twisted_theta().genus().unwrap(), 1);
        assert_eq!(named::loop_graph().genus().unwrap(), 0);
        assert_eq!(named::crossed_petals().genus().unwrap(), 1);
        assert_eq!(named::planar_petals().genus().unwrap(), 0);
    }

    #[test]
    fn genus_rejects_open_and_disconnected() {
        assert!(identity(1).genus().is_err());
        assert!(named::two_loops().genus().is_err());
        assert!(identity(1).holes().is_err());
    }

    #[test]
    fn modular_genus_examples() {
        let lone = RibbonGraph::closed_decorated(
            vec![Vertex::decorated(vec![0, 1], Decoration::Genus(2))],
            &[(0, 1)],
        )
        .unwrap();
        // loop at a genus-2 vertex: 2 + 1
        assert_eq!(lone.modular_genus().unwrap(), 3);

        let theta = named::planar_theta().with_decorations(&[Decoration::Genus(0); 2]);
        assert_eq!(theta.modular_genus().unwrap(), 2);

        let looped = named::loop_graph().with_decorations(&[Decoration::Genus(1)]);
        assert_eq!(looped.modular_genus().unwrap(), 2);

        assert!(named::loop_graph().modular_genus().is_err());
    }

    #[test]
    fn single_genus_two_vertex_without_edges() {
        let g = RibbonGraph::closed_decorated(
            vec![Vertex::decorated(vec![], Decoration::Genus(2))],
            &[],
        )
        .unwrap();
        assert_eq!(g.modular_genus().unwrap(), 2);
        assert_eq!(g.b0(), 1);
        assert_eq!(g.first_betti(), 0);
        assert_eq!(g.hole_count().unwrap(), 1);
        assert_eq!(g.genus().unwrap(), 0);
    }

    #[test]
    fn free_circle_holes() {
        let c = compose(&super::super::cap(), &cup()).unwrap();
        assert_eq!(c.hole_count().unwrap(), 2);
        assert_eq!(c.genus().unwrap(), 0);
        assert_eq!(c.b0(), 1);
    }

    #[test]
    fn edge_sides_of_the_loop() {
        let inc = named::loop_graph().edge_hole_incidence().unwrap();
        assert_eq!(inc.len(), 1);
        assert_ne!(inc[0].0, inc[0].1);
        let inc = named::twisted_theta().edge_hole_incidence().unwrap();
        assert!(inc.iter().all(|&(a, b)| a == b));
    }
}
