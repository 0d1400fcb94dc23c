//! PROP structure: composition by welding legs and juxtaposition.

use super::{FlagRole, RibbonGraph, Vertex};
use crate::error::{Error, Result};

/// `n` parallel bare strands, type (n,n).
pub fn identity(n: usize) -> RibbonGraph {
    let in_legs: Vec<usize> = (0..n).collect();
    let out_legs: Vec<usize> = (n..2 * n).collect();
    let mut matching = vec![0; 2 * n];
    for i in 0..n {
        matching[i] = n + i;
        matching[n + i] = i;
    }
    RibbonGraph::new(Vec::new(), matching, in_legs, out_legs, 0).unwrap()
}

/// The bare strand of type (0,2).
pub fn cup() -> RibbonGraph {
    RibbonGraph::new(Vec::new(), vec![1, 0], vec![], vec![0, 1], 0).unwrap()
}

/// The bare strand of type (2,0).
pub fn cap() -> RibbonGraph {
    RibbonGraph::new(Vec::new(), vec![1, 0], vec![0, 1], vec![], 0).unwrap()
}

/// A single `k`-valent vertex with `inputs` legs on its first slots and the
/// remaining legs as outputs, type `(inputs, k - inputs)`.
pub fn corolla(k: usize, inputs: usize) -> RibbonGraph {
    assert!(inputs <= k);
    let mut matching = vec![0; 2 * k];
    for i in 0..k {
        matching[i] = k + i;
        matching[k + i] = i;
    }
    RibbonGraph::new(
        vec![Vertex::new((0..k).collect())],
        matching,
        (k..k + inputs).collect(),
        (k + inputs..2 * k).collect(),
        0,
    )
    .unwrap()
}

/// Juxtaposition. Flags of `right` are shifted past those of `left`; legs
/// are concatenated left then right.
pub fn tensor(left: &RibbonGraph, right: &RibbonGraph) -> RibbonGraph {
    let shift = left.num_flags();
    let mut vertices = left.vertices.clone();
    vertices.extend(
        right
            .vertices
            .iter()
            .map(|v| Vertex::decorated(v.flags.iter().map(|&f| f + shift).collect(), v.decoration)),
    );
    let mut matching = left.matching.clone();
    matching.extend(right.matching.iter().map(|&m| m + shift));
    let mut in_legs = left.in_legs.clone();
    in_legs.extend(right.in_legs.iter().map(|&f| f + shift));
    let mut out_legs = left.out_legs.clone();
    out_legs.extend(right.out_legs.iter().map(|&f| f + shift));
    RibbonGraph::new(
        vertices,
        matching,
        in_legs,
        out_legs,
        left.free_circles + right.free_circles,
    )
    .expect("juxtaposition preserves invariants")
}

/// Stacks `top` on `bottom`: the i-th output of `bottom` is welded to the
/// i-th input of `top`. Welded leg-ends disappear and the strands through
/// them are spliced; strands that close up on themselves become free
/// circles.
pub fn compose(top: &RibbonGraph, bottom: &RibbonGraph) -> Result<RibbonGraph> {
    if top.in_legs.len() != bottom.out_legs.len() {
        return Err(Error::Composition {
            top_inputs: top.in_legs.len(),
            bottom_outputs: bottom.out_legs.len(),
        });
    }
    let shift = bottom.num_flags();
    let total = shift + top.num_flags();
    let combined_match = |f: usize| -> usize {
        if f < shift {
            bottom.matching[f]
        } else {
            top.matching[f - shift] + shift
        }
    };
    // weld[f] is the leg-end glued to f, for welded leg-ends only.
    let mut weld = vec![usize::MAX; total];
    for (&b, &t) in bottom.out_legs.iter().zip(&top.in_legs) {
        weld[b] = t + shift;
        weld[t + shift] = b;
    }
    let survives = |f: usize| weld[f] == usize::MAX;

    let mut new_index = vec![usize::MAX; total];
    let mut next = 0;
    for (f, slot) in new_index.iter_mut().enumerate() {
        if survives(f) {
            *slot = next;
            next += 1;
        }
    }

    let mut matching = vec![usize::MAX; next];
    let mut visited = vec![false; total];
    for f in (0..total).filter(|&f| survives(f)) {
        let mut g = combined_match(f);
        while !survives(g) {
            visited[g] = true;
            let w = weld[g];
            visited[w] = true;
            g = combined_match(w);
        }
        matching[new_index[f]] = new_index[g];
    }

    let mut circles = bottom.free_circles + top.free_circles;
    for start in 0..total {
        if survives(start) || visited[start] {
            continue;
        }
        circles += 1;
        let mut g = start;
        loop {
            visited[g] = true;
            let w = weld[g];
            visited[w] = true;
            g = combined_match(w);
            if g == start {
                break;
            }
        }
    }

    let remap = |flags: &[usize], offset: usize| -> Vec<usize> {
        flags.iter().map(|&f| new_index[f + offset]).collect()
    };
    let mut vertices: Vec<Vertex> = bottom
        .vertices
        .iter()
        .map(|v| Vertex::decorated(remap(&v.flags, 0), v.decoration))
        .collect();
    vertices.extend(
        top.vertices
            .iter()
            .map(|v| Vertex::decorated(remap(&v.flags, shift), v.decoration)),
    );
    RibbonGraph::new(
        vertices,
        matching,
        remap(&bottom.in_legs, 0),
        remap(&top.out_legs, shift),
        circles,
    )
}

impl RibbonGraph {
    pub fn compose(&self, bottom: &RibbonGraph) -> Result<RibbonGraph> {
        compose(self, bottom)
    }

    pub fn tensor(&self, right: &RibbonGraph) -> RibbonGraph {
        tensor(self, right)
    }

    /// Flags of leg-ends, in order: inputs then outputs.
    pub(crate) fn leg_ends(&self) -> impl Iterator<Item = usize> + '_ {
        self.in_legs.iter().chain(&self.out_legs).copied()
    }

    pub(crate) fn is_leg_end(&self, flag: usize) -> bool {
        !matches!(self.roles[flag], FlagRole::Vertex { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named, Mode};

    #[test]
    fn identity_is_idempotent() {
        let id = identity(1);
        let composed = compose(&id, &id).unwrap();
        assert!(composed.is_isomorphic(&id, Mode::Ribbon));
    }

    #[test]
    fn cap_after_cup_is_a_circle() {
        let c = compose(&cap(), &cup()).unwrap();
        assert!(c.is_closed());
        assert_eq!(c.num_flags(), 0);
        assert_eq!(c.free_circles(), 1);
    }

    #[test]
    fn trivalent_corollas_compose_to_theta() {
        let bottom = corolla(3, 0);
        let top = corolla(3, 3);
        let theta = compose(&top, &bottom).unwrap();
        assert!(theta.is_closed());
        assert_eq!(theta.num_vertices(), 2);
        assert_eq!(theta.num_edges(), 3);
        assert_eq!(theta.free_circles(), 0);
        // Slot i of the bottom vertex meets slot i of the top vertex.
        assert!(theta.is_isomorphic(&named::twisted_theta(), Mode::Ribbon));
        assert!(theta.is_isomorphic(&named::planar_theta(), Mode::Ordinary));
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        assert_eq!(
            compose(&identity(2), &identity(1)),
            Err(Error::Composition {
                top_inputs: 2,
                bottom_outputs: 1
            })
        );
    }

    #[test]
    fn tensor_with_empty_is_neutral() {
        let g = named::triangle();
        assert_eq!(tensor(&g, &RibbonGraph::empty()), g);
        assert!(tensor(&RibbonGraph::empty(), &g).is_isomorphic(&g, Mode::Ribbon));
    }

    #[test]
    fn parallel_strands() {
        let two = tensor(&identity(1), &identity(1));
        assert_eq!(two.graph_type().inputs, 2);
        assert!(two.is_isomorphic(&identity(2), Mode::Ribbon));
    }

    #[test]
    fn strand_bent_back_on_itself() {
        // cup then (id ⊗ cap)... the zig-zag identity: (id ⊗ cap) ∘ (cup ⊗ id) = id
        let lower = tensor(&cup(), &identity(1));
        let upper = tensor(&identity(1), &cap());
        let zigzag = compose(&upper, &lower).unwrap();
        assert_eq!(zigzag.free_circles(), 0);
        assert!(zigzag.is_isomorphic(&identity(1), Mode::Ribbon));
    }
}
