//! Random graphs for property tests and the `check` command.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{RibbonGraph, Vertex};

/// Random ribbon graph of type `(inputs, outputs)` with up to `max_vertices`
/// vertices of valence `1..=max_valence`. All flags, vertex-attached and
/// leg-ends alike, are paired uniformly at random, so bare strands, loops
/// and multi-edges all occur. One extra univalent vertex is added when the
/// flag count would be odd.
pub fn random_graph<R: Rng + ?Sized>(
    rng: &mut R,
    inputs: usize,
    outputs: usize,
    max_vertices: usize,
    max_valence: usize,
) -> RibbonGraph {
    let nv = rng.gen_range(0..=max_vertices);
    let mut valences: Vec<usize> = (0..nv).map(|_| rng.gen_range(1..=max_valence)).collect();
    let mut slots: usize = valences.iter().sum::<usize>() + inputs + outputs;
    if slots % 2 == 1 {
        valences.push(1);
        slots += 1;
    }
    let mut next = 0;
    let mut vertices = Vec::with_capacity(valences.len());
    for k in valences {
        vertices.push(Vertex::new((next..next + k).collect()));
        next += k;
    }
    let in_legs: Vec<usize> = (next..next + inputs).collect();
    let out_legs: Vec<usize> = (next + inputs..slots).collect();

    let mut order: Vec<usize> = (0..slots).collect();
    order.shuffle(rng);
    let mut matching = vec![0; slots];
    for pair in order.chunks(2) {
        matching[pair[0]] = pair[1];
        matching[pair[1]] = pair[0];
    }
    let g = RibbonGraph::new(vertices, matching, in_legs, out_legs, 0)
        .expect("random construction respects the invariants");
    // Scramble flag names so nothing downstream relies on the layout.
    let mut perm: Vec<usize> = (0..slots).collect();
    perm.shuffle(rng);
    g.relabeled(&perm)
}

/// Random closed graph with exactly the given vertex valences.
pub fn random_closed<R: Rng + ?Sized>(rng: &mut R, valences: &[usize]) -> RibbonGraph {
    let slots: usize = valences.iter().sum();
    assert!(slots.is_multiple_of(2), "odd slot count");
    let mut next = 0;
    let vertices = valences
        .iter()
        .map(|&k| {
            let v = Vertex::new((next..next + k).collect());
            next += k;
            v
        })
        .collect();
    let mut order: Vec<usize> = (0..slots).collect();
    order.shuffle(rng);
    let mut matching = vec![0; slots];
    for pair in order.chunks(2) {
        matching[pair[0]] = pair[1];
        matching[pair[1]] = pair[0];
    }
    RibbonGraph::new(vertices, matching, vec![], vec![], 0).unwrap()
}
