//! Acceptance checks, one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the report is always printed.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use graphcalc_core::algebra::quadrature::quadrature_moment;
use graphcalc_core::algebra::random::{invariant_tensor, positive_metric, small_rational};
use graphcalc_core::algebra::{gaussian_moment, Kind, Metric, SymAlgebra, Tensor, TensorKey};
use graphcalc_core::enumerate::{
    graphs_up_to_order, graphs_with_profile, profiles_up_to, ValenceProfile, VertexSort,
};
use graphcalc_core::evaluate::{evaluate, evaluate_closed, ContractionSchedule};
use graphcalc_core::expansion::{
    connected_sum, hbar_slice, modular_expansion, partition_function, partition_function_oracle,
    partition_function_oracle_sequences, ExpansionMode, ExpansionRequest,
};
use graphcalc_core::graph::random::random_graph;
use graphcalc_core::graph::{compose, identity, named, tensor, Decoration, Mode, RibbonGraph};
use graphcalc_core::kontsevich::{
    euler_series, euler_series_oracle, z_gamma_coloring, z_gamma_contraction, KontsevichSpectrum,
};
use graphcalc_core::scalar::{double_factorial_pairings, int, ratio, Rational};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Nondecreasing index tuples of length `len` over `0..dim`.
fn multisets(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(start: usize, dim: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i, dim, len, cur, out);
            cur.pop();
        }
    }
    rec(0, dim, len, &mut cur, &mut out);
    out
}

fn random_algebra(rng: &mut ChaCha8Rng, dim: usize, kind: Kind, arities: &[usize]) -> SymAlgebra {
    let mut a = SymAlgebra::new(positive_metric(rng, dim), kind);
    for &k in arities {
        a.insert(TensorKey::plain(k), invariant_tensor(rng, dim, k, kind))
            .expect("symmetrized tensors are invariant");
    }
    a
}

fn c1_wick_vs_quadrature() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for dim in 1..=3 {
        for _ in 0..20 {
            let m = positive_metric(&mut rng, dim);
            for deg in 0..=6 {
                for ix in multisets(dim, deg) {
                    let exact = gaussian_moment(&ix, &m);
                    let q = quadrature_moment(&ix, &m).ok_or("metric not positive definite")?;
                    let e = graphcalc_core::scalar::to_f64(&exact);
                    // relative error, against 1 for vanishing moments
                    let rel = (q - e).abs() / e.abs().max(1.0);
                    ensure(rel <= 1e-8, || {
                        format!("dim {dim} moment {ix:?}: exact {exact}, quadrature {q}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    ensure(checked > 0, || "nothing checked".into())
}

fn c2_displayed_coefficients() -> Check {
    let two_bivalent = ValenceProfile::from_counts(&[0, 2]);
    for mode in [Mode::Ordinary, Mode::Ribbon] {
        let classes = graphs_with_profile(&two_bivalent, mode);
        let mut found: Vec<(usize, u64)> = classes
            .iter()
            .map(|c| (c.graph.b0(), c.occurrences))
            .collect();
        found.sort();
        // b0 = 1 is the double edge, b0 = 2 the two disjoint loops
        ensure(found == vec![(1, 2), (2, 1)], || {
            format!("(T_2)^2 in {mode} mode: {found:?}")
        })?;
    }
    let quartic = ValenceProfile::from_counts(&[0, 0, 0, 1]);
    let mut coeffs: Vec<u64> = graphs_with_profile(&quartic, Mode::Ribbon)
        .iter()
        .map(|c| c.occurrences)
        .collect();
    coeffs.sort();
    ensure(coeffs == vec![1, 2], || {
        format!("T_4 ribbon coefficients {coeffs:?}")
    })
}

fn c3_occurrence_counts() -> Check {
    let sorts: Vec<VertexSort> = (1..=8).map(VertexSort::plain).collect();
    for mode in [Mode::Ribbon, Mode::Ordinary] {
        for profile in profiles_up_to(&sorts, 8) {
            let k = profile.group_order(mode);
            let mut total = 0u64;
            for class in graphs_with_profile(&profile, mode) {
                let aut = class.graph.automorphism_count(mode).map_err(err)?;
                ensure(
                    BigInt::from(class.occurrences) * BigInt::from(aut) == k,
                    || {
                        format!(
                            "{mode} {profile}: occurrences {} · |Aut| {aut} ≠ |K| {k}",
                            class.occurrences
                        )
                    },
                )?;
                total += class.occurrences;
            }
            let pairings = double_factorial_pairings(profile.slots());
            ensure(BigInt::from(total) == pairings, || {
                format!("{mode} {profile}: {total} pairings counted, expected {pairings}")
            })?;
        }
    }
    Ok(())
}

/// Configurations shared by criteria 4 and 5.
fn expansion_requests() -> Vec<(String, ExpansionRequest)> {
    let mut out = Vec::new();
    for seed in 0..10u64 {
        for dim in 1..=2 {
            for (mode, kind) in [
                (ExpansionMode::Ribbon, Kind::Cyclic),
                (ExpansionMode::Ribbon, Kind::Symmetric),
                (ExpansionMode::Ordinary, Kind::Symmetric),
            ] {
                let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
                let mut alg = random_algebra(&mut rng, dim, kind, &[1, 2, 3, 4]);
                if mode == ExpansionMode::Ordinary {
                    alg.insert(
                        TensorKey::labeled(3, 7),
                        invariant_tensor(&mut rng, dim, 3, kind),
                    )
                    .expect("invariant");
                }
                let name = format!("seed {seed}, dim {dim}, {mode}, {kind}");
                out.push((name, ExpansionRequest::new(alg, mode, 8)));
            }
        }
    }
    out
}

fn c4_partition_function() -> Check {
    for (name, req) in expansion_requests() {
        let graphs = partition_function(&req).map_err(err)?.series;
        let oracle = partition_function_oracle(&req).map_err(err)?;
        ensure(graphs == oracle, || {
            format!("{name}: graph sum\n{graphs}\n≠ Taylor–Wick\n{oracle}")
        })?;
        let sequences = partition_function_oracle_sequences(&req).map_err(err)?;
        ensure(sequences == oracle, || {
            format!("{name}: sequence form differs")
        })?;
        ensure(!graphs.is_zero(), || format!("{name}: empty series"))?;
    }
    Ok(())
}

fn c5_free_energy() -> Check {
    for (name, req) in expansion_requests() {
        let log_z = partition_function(&req)
            .map_err(err)?
            .series
            .log()
            .map_err(err)?;
        let connected = connected_sum(&req).map_err(err)?.series;
        ensure(log_z == connected, || {
            format!("{name}: log Z\n{log_z}\n≠ connected sum\n{connected}")
        })?;
    }
    Ok(())
}

fn c6_special_vertices() -> Check {
    // every nonempty profile with at most 4 special slots, odd ones included
    let mut specials = Vec::new();
    for l1 in 0..=4usize {
        for l2 in 0..=2usize {
            for l3 in 0..=1usize {
                for l4 in 0..=1usize {
                    let slots = l1 + 2 * l2 + 3 * l3 + 4 * l4;
                    if slots > 0 && slots <= 4 {
                        specials.push(ValenceProfile::from_counts(&[l1, l2, l3, l4]));
                    }
                }
            }
        }
    }
    let mut odd_checked = false;
    for seed in 0..3u64 {
        for dim in 1..=2 {
            for (mode, kind) in [
                (ExpansionMode::Ribbon, Kind::Cyclic),
                (ExpansionMode::Ordinary, Kind::Symmetric),
            ] {
                let mut rng = ChaCha8Rng::seed_from_u64(200 + seed);
                let alg = random_algebra(&mut rng, dim, kind, &[1, 2, 3, 4]);
                for sp in &specials {
                    let counts: Vec<(usize, usize)> =
                        sp.sorts().map(|(s, l)| (s.valence, l)).collect();
                    let req = ExpansionRequest::new(alg.clone(), mode, 4).with_special(&counts);
                    let graphs = partition_function(&req).map_err(err)?.series;
                    let oracle = partition_function_oracle(&req).map_err(err)?;
                    ensure(graphs == oracle, || {
                        format!("seed {seed}, dim {dim}, {mode}, special {sp}: graphs\n{graphs}\n≠ oracle\n{oracle}")
                    })?;
                    odd_checked |= sp.slots() % 2 == 1;
                }
            }
        }
    }
    ensure(odd_checked, || "no odd special profile".into())
}

fn stable(k: usize, g: u32) -> bool {
    3 * g as i64 - 3 + k as i64 > 0
}

fn c7_modular() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut alg = SymAlgebra::new(
        Metric::diagonal(vec![ratio(3, 2)]).map_err(err)?,
        Kind::Symmetric,
    );
    let mut decorated = Vec::new();
    for k in 1..=6 {
        for g in 0..=2 {
            if stable(k, g) {
                let mut c = small_rational(&mut rng);
                if c == int(0) {
                    c = int(1);
                }
                alg.insert(
                    TensorKey::labeled(k, g),
                    Tensor::from_fn(1, k, |_| c.clone()),
                )
                .map_err(err)?;
                decorated.push(VertexSort::new(k, Decoration::Genus(g)));
            }
        }
    }
    decorated.push(VertexSort::new(1, Decoration::Genus(0)));
    let req = ExpansionRequest::new(alg, ExpansionMode::Modular, 6).with_zeta(vec![ratio(-1, 2)]);
    let e = modular_expansion(&req).map_err(err)?;
    for row in &e.ledger {
        let expected = i64::from(row.graph.modular_genus().map_err(err)?) - row.graph.b0() as i64;
        ensure(row.hbar_exponent == Some(expected), || {
            format!(
                "class {}: ħ exponent {:?}, modular genus − b0 = {expected}",
                row.class, row.hbar_exponent
            )
        })?;
    }
    // the ledger covers every decorated graph with at most 3 edges
    let catalog = graphs_up_to_order(
        6,
        Mode::Ordinary,
        &[
            Decoration::Genus(0),
            Decoration::Genus(1),
            Decoration::Genus(2),
        ],
    )
    .map_err(err)?;
    let allowed: Vec<VertexSort> = decorated;
    let mut expected = 0;
    for entry in catalog.entries() {
        if entry.profile.sorts().all(|(s, _)| allowed.contains(&s)) {
            expected += 1;
            ensure(e.ledger.iter().any(|r| r.class == entry.form), || {
                format!(
                    "catalog class {} ({}) missing from the ledger",
                    entry.form, entry.profile
                )
            })?;
        }
    }
    ensure(e.ledger.len() == expected, || {
        format!("ledger has {} rows, catalog {expected}", e.ledger.len())
    })?;
    let oracle = partition_function_oracle(&req).map_err(err)?;
    let g1 = hbar_slice(&e.series, 1).map_err(err)?;
    let o1 = hbar_slice(&oracle, 1).map_err(err)?;
    ensure(!g1.is_zero() && g1 == o1, || {
        format!("ħ¹ coefficient: graphs\n{g1}\nvs oracle\n{o1}")
    })?;
    ensure(e.series == oracle, || {
        "full modular series differs from the oracle".into()
    })
}

fn random_spectrum(rng: &mut ChaCha8Rng, n: usize) -> KontsevichSpectrum {
    KontsevichSpectrum::new(
        (0..n)
            .map(|_| ratio(rng.gen_range(1..=5), rng.gen_range(1..=4)))
            .collect(),
    )
    .expect("positive")
}

fn c8_hole_colorings() -> Check {
    let catalog = graphs_up_to_order(6, Mode::Ribbon, &[]).map_err(err)?;
    let graphs: Vec<&RibbonGraph> = catalog.connected().map(|e| &e.graph).collect();
    ensure(graphs.len() > 10, || "catalog too small".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 1..=3 {
        for _ in 0..5 {
            let spectrum = random_spectrum(&mut rng, n);
            for g in &graphs {
                let a = z_gamma_coloring(g, &spectrum).map_err(err)?;
                let b = z_gamma_contraction(g, &spectrum).map_err(err)?;
                ensure(a == b, || {
                    format!("N = {n}, Λ = {spectrum}: coloring {a} ≠ contraction {b}")
                })?;
            }
        }
    }
    Ok(())
}

fn c9_standard_model() -> Check {
    let catalog = graphs_up_to_order(8, Mode::Ribbon, &[]).map_err(err)?;
    for n in 1..=4 {
        let spectrum = KontsevichSpectrum::identity(n).map_err(err)?;
        for entry in catalog.entries() {
            let z = z_gamma_coloring(&entry.graph, &spectrum).map_err(err)?;
            let holes = entry.graph.hole_count().map_err(err)?;
            let expected = num_traits::pow(int(n as i64), holes);
            ensure(z == expected, || {
                format!("N = {n}, class {}: {z} ≠ N^{holes}", entry.form)
            })?;
        }
    }
    Ok(())
}

fn c10_euler() -> Check {
    let series = euler_series(2).map_err(err)?.series;
    let t = series.index_of("t").map_err(err)?;
    ensure(series.terms().any(|(e, _)| e[t] == 2), || {
        "no t² terms".into()
    })?;
    for n in 1..=2 {
        let graphs = series.evaluate_at("N", &int(n)).map_err(err)?;
        let oracle = euler_series_oracle(2, n as usize).map_err(err)?;
        ensure(graphs == oracle, || {
            format!("N = {n}: graphs\n{graphs}\n≠ log oracle\n{oracle}")
        })?;
    }
    Ok(())
}

fn canon_eq(a: &RibbonGraph, b: &RibbonGraph) -> bool {
    a.is_isomorphic(b, Mode::Ribbon) && a.is_isomorphic(b, Mode::Ordinary)
}

fn c11_prop_laws() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..100 {
        let n: Vec<usize> = (0..5).map(|_| rng.gen_range(0..=3)).collect();
        // c: n0 -> n1, b: n1 -> n2, a: n2 -> n3
        let c = random_graph(&mut rng, n[0], n[1], 3, 4);
        let b = random_graph(&mut rng, n[1], n[2], 3, 4);
        let a = random_graph(&mut rng, n[2], n[3], 3, 4);
        let d = random_graph(&mut rng, n[3], n[4], 3, 4);
        let left = compose(&compose(&a, &b).map_err(err)?, &c).map_err(err)?;
        let right = compose(&a, &compose(&b, &c).map_err(err)?).map_err(err)?;
        ensure(canon_eq(&left, &right), || {
            format!("trial {trial}: composition is not associative")
        })?;

        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        ensure(canon_eq(&left, &right), || {
            format!("trial {trial}: ⊗ is not associative")
        })?;

        // interchange with c2: n1 -> n3 and d: n3 -> n4
        let c2 = random_graph(&mut rng, n[1], n[3], 3, 4);
        let left = compose(&tensor(&d, &a), &tensor(&c2, &b)).map_err(err)?;
        let right = tensor(
            &compose(&d, &c2).map_err(err)?,
            &compose(&a, &b).map_err(err)?,
        );
        ensure(canon_eq(&left, &right), || {
            format!("trial {trial}: interchange law fails")
        })?;

        let t = a.graph_type();
        let l = compose(&identity(t.outputs), &a).map_err(err)?;
        let r = compose(&a, &identity(t.inputs)).map_err(err)?;
        ensure(canon_eq(&l, &a) && canon_eq(&r, &a), || {
            format!("trial {trial}: identity is not a unit")
        })?;
        let e = RibbonGraph::empty();
        ensure(
            canon_eq(&tensor(&a, &e), &a) && canon_eq(&tensor(&e, &a), &a),
            || format!("trial {trial}: the empty graph is not a ⊗-unit"),
        )?;
    }
    Ok(())
}

/// Outer product laid out as `evaluate` lays out `a ⊗ b`: inputs of `a`,
/// inputs of `b`, outputs of `a`, outputs of `b`.
fn juxtaposed(ta: &Tensor, ia: usize, tb: &Tensor, ib: usize) -> Tensor {
    let oa = ta.arity() - ia;
    let ob = tb.arity() - ib;
    Tensor::from_fn(ta.dim(), ta.arity() + tb.arity(), |ix| {
        let mut xa = ix[..ia].to_vec();
        xa.extend_from_slice(&ix[ia + ib..ia + ib + oa]);
        let mut xb = ix[ia..ia + ib].to_vec();
        xb.extend_from_slice(&ix[ia + ib + oa..ia + ib + oa + ob]);
        ta.get(&xa) * tb.get(&xb)
    })
}

fn c12_evaluator() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (mode, kind) in [
        (Mode::Ribbon, Kind::Cyclic),
        (Mode::Ordinary, Kind::Symmetric),
    ] {
        let alg = random_algebra(&mut rng, 2, kind, &[1, 2, 3, 4]);
        let mut graphs = Vec::new();
        for _ in 0..20 {
            let (i, o) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
            graphs.push(random_graph(&mut rng, i, o, 4, 4));
        }
        for (gi, g) in graphs.iter().enumerate() {
            let base = evaluate(g, &alg, mode, &ContractionSchedule::Greedy).map_err(err)?;
            for _ in 0..10 {
                let s = ContractionSchedule::Random(rng.gen());
                let v = evaluate(g, &alg, mode, &s).map_err(err)?;
                ensure(v == base, || {
                    format!("{mode} graph {gi}: schedule {s:?} differs")
                })?;
            }
            for v in 0..g.num_vertices() {
                let k = g.vertices()[v].flags.len();
                let moved = match mode {
                    Mode::Ribbon => g.rerooted(v, rng.gen_range(0..k.max(1))),
                    Mode::Ordinary => {
                        let mut perm: Vec<usize> = (0..k).collect();
                        perm.shuffle(&mut rng);
                        g.with_vertex_order(v, &perm)
                    }
                };
                let w = evaluate(&moved, &alg, mode, &ContractionSchedule::Greedy).map_err(err)?;
                ensure(w == base, || {
                    format!("{mode} graph {gi}: vertex {v} reordering changes Z")
                })?;
            }
            let h = &graphs[(gi + 7) % graphs.len()];
            let hv = evaluate(h, &alg, mode, &ContractionSchedule::Greedy).map_err(err)?;
            let both =
                evaluate(&tensor(g, h), &alg, mode, &ContractionSchedule::Greedy).map_err(err)?;
            let expected = juxtaposed(&base, g.in_legs().len(), &hv, h.in_legs().len());
            ensure(both == expected, || {
                format!("{mode} graph {gi}: Z(Γ ⊗ Γ') ≠ Z(Γ) ⊗ Z(Γ')")
            })?;
        }
        // closed multiplicativity on a named pair
        let (p, q) = (named::twisted_theta(), named::crossed_petals());
        let alg4 = random_algebra(&mut rng, 2, kind, &[3, 4]);
        let pq = evaluate_closed(&tensor(&p, &q), &alg4, mode).map_err(err)?;
        let sep: Rational = evaluate_closed(&p, &alg4, mode).map_err(err)?
            * evaluate_closed(&q, &alg4, mode).map_err(err)?;
        ensure(pq == sep, || format!("{mode}: closed product fails"))?;
    }
    Ok(())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "Wick moments vs Gauss-Hermite quadrature",
            limit: Duration::from_secs(10),
            run: c1_wick_vs_quadrature,
        },
        Criterion {
            id: 2,
            name: "displayed pairing coefficients",
            limit: Duration::from_secs(1),
            run: c2_displayed_coefficients,
        },
        Criterion {
            id: 3,
            name: "occurrences = |K|/|Aut|, pairings sum to (n-1)!!",
            limit: Duration::from_secs(60),
            run: c3_occurrence_counts,
        },
        Criterion {
            id: 4,
            name: "partition function: graph sum = Taylor-Wick",
            limit: Duration::from_secs(300),
            run: c4_partition_function,
        },
        Criterion {
            id: 5,
            name: "log Z = connected graph sum",
            limit: Duration::from_secs(300),
            run: c5_free_energy,
        },
        Criterion {
            id: 6,
            name: "special vertices: two-sort graph sum = Taylor-Wick",
            limit: Duration::from_secs(60),
            run: c6_special_vertices,
        },
        Criterion {
            id: 7,
            name: "modular hbar bookkeeping and hbar^1 oracle",
            limit: Duration::from_secs(60),
            run: c7_modular,
        },
        Criterion {
            id: 8,
            name: "hole colorings = tensor contraction",
            limit: Duration::from_secs(60),
            run: c8_hole_colorings,
        },
        Criterion {
            id: 9,
            name: "Lambda = I gives N^holes",
            limit: Duration::from_secs(30),
            run: c9_standard_model,
        },
        Criterion {
            id: 10,
            name: "Euler series = log of matrix-integral expansion",
            limit: Duration::from_secs(300),
            run: c10_euler,
        },
        Criterion {
            id: 11,
            name: "PROP associativity, interchange and unit laws",
            limit: Duration::from_secs(30),
            run: c11_prop_laws,
        },
        Criterion {
            id: 12,
            name: "evaluator schedule, product and reordering invariance",
            limit: Duration::from_secs(60),
            run: c12_evaluator,
        },
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failures = 0;
    let mut report = BTreeMap::new();
    for c in &criteria {
        let tag = format!("criterion {:>2}", c.id);
        if !filter.is_empty()
            && !filter
                .iter()
                .any(|f| tag.contains(f.as_str()) || c.name.contains(f.as_str()))
        {
            continue;
        }
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let verdict = match &outcome {
            Ok(()) if elapsed <= c.limit => "PASS".to_string(),
            Ok(()) => format!("FAIL (took {elapsed:.2?}, limit {:?})", c.limit),
            Err(e) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failures += 1;
        }
        println!("{tag} {:<55} {verdict} [{elapsed:.2?}]", c.name);
        report.insert(c.id, verdict);
    }
    println!("acceptance: {} run, {failures} failed", report.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
