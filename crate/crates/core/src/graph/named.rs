//! Small graphs that recur in examples and tests.

use super::{RibbonGraph, Vertex};

/// One bivalent vertex whose two flags are joined: the circle graph.
pub fn loop_graph() -> RibbonGraph {
    RibbonGraph::closed(vec![vec![0, 1]], &[(0, 1)]).unwrap()
}

/// Two trivalent vertices with opposite cyclic orders: three holes, genus 0.
pub fn planar_theta() -> RibbonGraph {
    RibbonGraph::closed(
        vec![vec![0, 1, 2], vec![3, 4, 5]],
        &[(0, 3), (1, 5), (2, 4)],
    )
    .unwrap()
}

/// Two trivalent vertices with matching cyclic orders: one hole, genus 1.
pub fn twisted_theta() -> RibbonGraph {
    RibbonGraph::closed(
        vec![vec![0, 1, 2], vec![3, 4, 5]],
        &[(0, 3), (1, 4), (2, 5)],
    )
    .unwrap()
}

/// Two bivalent vertices joined by two parallel edges.
pub fn double_edge() -> RibbonGraph {
    RibbonGraph::closed(vec![vec![0, 1], vec![2, 3]], &[(0, 2), (1, 3)]).unwrap()
}

/// Two disjoint loops.
pub fn two_loops() -> RibbonGraph {
    RibbonGraph::closed(vec![vec![0, 1], vec![2, 3]], &[(0, 1), (2, 3)]).unwrap()
}

/// One 4-valent vertex with two adjacent-slot loops (planar).
pub fn planar_petals() -> RibbonGraph {
    RibbonGraph::closed(vec![vec![0, 1, 2, 3]], &[(0, 1), (2, 3)]).unwrap()
}

/// One 4-valent vertex with loops on opposite slots (genus 1).
pub fn crossed_petals() -> RibbonGraph {
    RibbonGraph::closed(vec![vec![0, 1, 2, 3]], &[(0, 2), (1, 3)]).unwrap()
}

/// Three trivalent vertices in a triangle, one input leg on each, type (3,0).
///
/// Slot layout follows the index pattern
/// `g^{δε} g^{ζη} g^{θι} S_{αδζ} S_{ηβθ} S_{ιεγ}` with inputs α, β, γ.
pub fn triangle() -> RibbonGraph {
    let vertices = vec![
        Vertex::new(vec![0, 1, 2]),
        Vertex::new(vec![3, 4, 5]),
        Vertex::new(vec![6, 7, 8]),
    ];
    let pairs = [(1, 7), (2, 3), (5, 6), (0, 9), (4, 10), (8, 11)];
    let matching = super::matching_from_pairs(12, &pairs).unwrap();
    RibbonGraph::new(vertices, matching, vec![9, 10, 11], vec![], 0).unwrap()
}
