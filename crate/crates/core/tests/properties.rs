use graphcalc_core::algebra::random::{invariant_tensor, positive_metric, small_rational};
use graphcalc_core::algebra::{gaussian_moment, Kind, SymAlgebra, Tensor, TensorKey};
use graphcalc_core::enumerate::{alpha_coefficient, graphs_with_profile, ValenceProfile};
use graphcalc_core::evaluate::{evaluate, evaluate_closed, ContractionSchedule};
use graphcalc_core::graph::random::{random_closed, random_graph};
use graphcalc_core::graph::{
    compose, count_isomorphisms, identity, parse_graph, tensor, write_graph, Mode,
};
use graphcalc_core::scalar::{int, Rational};
use graphcalc_core::series::MultiSeries;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn algebra(seed: u64, dim: usize, kind: Kind) -> SymAlgebra {
    let mut r = rng(seed);
    let mut a = SymAlgebra::new(positive_metric(&mut r, dim), kind);
    for k in 1..=4 {
        a.insert(TensorKey::plain(k), invariant_tensor(&mut r, dim, k, kind))
            .unwrap();
    }
    a
}

/// Series in `x` (weight 1) and `y` (weight 2) with random coefficients and
/// no constant term.
fn nilpotent(seed: u64, order: u32) -> MultiSeries {
    let mut r = rng(seed);
    let mut s = MultiSeries::zero(&[("x", 1), ("y", 2)], order);
    for i in 0..=order {
        for j in 0..=order / 2 {
            if i + j > 0 {
                s.add_term(vec![i, j], small_rational(&mut r));
            }
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_form_ignores_flag_names(seed in any::<u64>(), i in 0usize..3, o in 0usize..3) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, i, o, 4, 4);
        let mut perm: Vec<usize> = (0..g.num_flags()).collect();
        perm.shuffle(&mut r);
        let h = g.relabeled(&perm);
        let mut order: Vec<usize> = (0..g.num_vertices()).collect();
        order.shuffle(&mut r);
        let h = h.with_vertices_permuted(&order);
        for mode in [Mode::Ribbon, Mode::Ordinary] {
            prop_assert_eq!(g.canonical_form(mode), h.canonical_form(mode));
        }
    }

    #[test]
    fn graph_files_round_trip(seed in any::<u64>(), i in 0usize..3, o in 0usize..3) {
        let g = random_graph(&mut rng(seed), i, o, 4, 4);
        let back = parse_graph(&write_graph(&g)).unwrap();
        prop_assert_eq!(g.canonical_form(Mode::Ribbon), back.canonical_form(Mode::Ribbon));
    }

    #[test]
    fn prop_laws(seed in any::<u64>(), n in proptest::collection::vec(0usize..3, 4)) {
        let mut r = rng(seed);
        let c = random_graph(&mut r, n[0], n[1], 3, 3);
        let b = random_graph(&mut r, n[1], n[2], 3, 3);
        let a = random_graph(&mut r, n[2], n[3], 3, 3);
        let ab_c = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let a_bc = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert!(ab_c.is_isomorphic(&a_bc, Mode::Ribbon));
        let unit = compose(&identity(n[3]), &a).unwrap();
        prop_assert!(unit.is_isomorphic(&a, Mode::Ribbon));
        let left = compose(&tensor(&a, &b), &tensor(&b, &c)).unwrap();
        let right = tensor(&compose(&a, &b).unwrap(), &compose(&b, &c).unwrap());
        prop_assert!(left.is_isomorphic(&right, Mode::Ribbon));
    }

    #[test]
    fn alpha_three_ways(seed in any::<u64>(), valences in proptest::collection::vec(1usize..5, 1..4)) {
        let mut valences = valences;
        if valences.iter().sum::<usize>() % 2 == 1 {
            valences.push(1);
        }
        let g = random_closed(&mut rng(seed), &valences);
        let profile = ValenceProfile::of_graph(&g);
        for mode in [Mode::Ribbon, Mode::Ordinary] {
            let form = g.canonical_form(mode);
            let occurrences = graphs_with_profile(&profile, mode)
                .into_iter()
                .find(|c| c.form == form)
                .map(|c| c.occurrences)
                .unwrap();
            let alpha = alpha_coefficient(&g, &profile, mode).unwrap();
            let by_isos = profile.group_order(mode) / BigInt::from(count_isomorphisms(&g, &g, mode).unwrap());
            prop_assert_eq!(occurrences, alpha);
            prop_assert_eq!(BigInt::from(alpha), by_isos);
        }
    }

    #[test]
    fn schedules_agree(seed in any::<u64>(), dim in 1usize..3, i in 0usize..3, o in 0usize..3) {
        let alg = algebra(seed, dim, Kind::Cyclic);
        let g = random_graph(&mut rng(seed ^ 0x5eed), i, o, 4, 4);
        let a = evaluate(&g, &alg, Mode::Ribbon, &ContractionSchedule::Greedy).unwrap();
        let b = evaluate(&g, &alg, Mode::Ribbon, &ContractionSchedule::Random(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn evaluation_ignores_flag_names(seed in any::<u64>(), dim in 1usize..3) {
        let alg = algebra(seed, dim, Kind::Symmetric);
        let mut r = rng(seed);
        let g = random_graph(&mut r, 0, 0, 5, 4);
        let mut perm: Vec<usize> = (0..g.num_flags()).collect();
        perm.shuffle(&mut r);
        for mode in [Mode::Ribbon, Mode::Ordinary] {
            prop_assert_eq!(
                evaluate_closed(&g, &alg, mode).unwrap(),
                evaluate_closed(&g.relabeled(&perm), &alg, mode).unwrap()
            );
        }
    }

    #[test]
    fn linear_in_a_single_vertex_tensor(seed in any::<u64>(), k in 1usize..5) {
        // exactly one k-valent vertex
        let mut r = rng(seed);
        let valences = match k {
            1 => vec![1, 3, 4],
            2 => vec![2, 3, 3],
            3 => vec![3, 4, 1],
            _ => vec![4, 2, 2],
        };
        let g = random_closed(&mut r, &valences);
        let base = algebra(seed, 2, Kind::Cyclic);
        let t = base.tensor(TensorKey::plain(k)).unwrap().clone();
        let u = invariant_tensor(&mut r, 2, k, Kind::Cyclic);
        let (a, b) = (small_rational(&mut r), small_rational(&mut r));
        let combo = t.scaled(&a).add(&u.scaled(&b));
        let with = |x: Tensor| {
            let mut alg = base.clone();
            alg.insert(TensorKey::plain(k), x).unwrap();
            evaluate_closed(&g, &alg, Mode::Ribbon).unwrap()
        };
        let lhs = with(combo);
        let rhs: Rational = &a * with(t) + &b * with(u);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn moments_are_symmetric(seed in any::<u64>(), dim in 1usize..4, len in 0usize..7) {
        let mut r = rng(seed);
        let m = positive_metric(&mut r, dim);
        let mut ix: Vec<usize> = (0..len).map(|i| (i * 7 + seed as usize) % dim).collect();
        let before = gaussian_moment(&ix, &m);
        ix.shuffle(&mut r);
        prop_assert_eq!(before.clone(), gaussian_moment(&ix, &m));
        if len % 2 == 1 {
            prop_assert_eq!(before, int(0));
        }
    }

    #[test]
    fn series_identities(s1 in any::<u64>(), s2 in any::<u64>(), order in 1u32..6) {
        let a = nilpotent(s1, order);
        let b = nilpotent(s2, order);
        let one = a.one_like();
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a.clone());
        let one_plus = one.add(&a).unwrap();
        prop_assert_eq!(one_plus.log().unwrap().exp().unwrap(), one_plus);
        prop_assert_eq!(
            a.add(&b).unwrap().exp().unwrap(),
            a.exp().unwrap().mul(&b.exp().unwrap()).unwrap()
        );
        let c = nilpotent(s1 ^ s2, order).add(&one).unwrap();
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
    }
}
