use std::collections::BTreeSet;

use proptest::prelude::*;

use percolab_core::decode::{witness_from_text, witness_to_text};
use percolab_core::instances::format::{
    parse_csp, parse_graph, parse_subset_sum, serialize_csp, serialize_graph, serialize_subset_sum,
};
use percolab_core::lab::{wilson_interval, Z95};
use percolab_core::percolate::{clause_percolate, edge_key, edge_percolate, item_percolate, vertex_percolate};
use percolab_core::reduce::{
    blowup_graph, csp_cloud_blowup, ham_gadget, minimal_c_prime, subset_sum_gadget, GadgetCheck,
};
use percolab_core::solve::max_csp_value;
use percolab_core::{Clause, CloudMap, CspInstance, Graph, Mode, PercolationSpec, SubsetSumInstance, SurvivorMap};

fn graph(max_n: usize, directed: bool) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|u| (1..=n).map(move |v| (u, v)))
            .filter(|&(u, v)| if directed { u != v } else { u < v })
            .collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
            let edges = pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e);
            Graph::new(n, directed, edges).unwrap()
        })
    })
}

/// Uniform-arity formulas with distinct clauses.
fn formula(max_n: usize, max_m: usize) -> impl Strategy<Value = CspInstance> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), 1..=n.min(2)))
        .prop_flat_map(move |(n, k)| {
            let clause = (
                proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), k).prop_shuffle(),
                proptest::collection::vec(any::<bool>(), 1 << k),
            );
            (Just(n), proptest::collection::vec(clause, 1..=max_m))
        })
        .prop_map(|(n, raw)| {
            let mut clauses: Vec<Clause> = Vec::new();
            for (vars, table) in raw {
                let c = Clause::new(vars, table).unwrap();
                if !clauses.contains(&c) {
                    clauses.push(c);
                }
            }
            CspInstance::from_clauses(n, clauses).unwrap()
        })
}

fn subset_sum() -> impl Strategy<Value = SubsetSumInstance> {
    (proptest::collection::vec(0u64..1000, 0..8), 0u64..4000)
        .prop_map(|(items, target)| SubsetSumInstance::from_u64(&items, target))
}

proptest! {
    #[test]
    fn graph_text_round_trips(g in graph(8, false)) {
        prop_assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn digraph_text_round_trips(g in graph(6, true)) {
        prop_assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn csp_text_round_trips(f in formula(5, 6)) {
        prop_assert_eq!(parse_csp(&serialize_csp(&f)).unwrap(), f);
    }

    #[test]
    fn subset_sum_text_round_trips(s in subset_sum()) {
        prop_assert_eq!(parse_subset_sum(&serialize_subset_sum(&s)).unwrap(), s);
    }

    #[test]
    fn witness_text_round_trips(w in proptest::collection::vec(1usize..100, 0..20)) {
        let (rule, back) = witness_from_text(&witness_to_text("x", &w)).unwrap();
        prop_assert_eq!(rule, "x");
        prop_assert_eq!(back, w);
    }

    #[test]
    fn survivor_map_round_trips(g in graph(7, false), p in 0.0f64..=1.0, seed: u64, trial in 0u64..50) {
        for mode in [Mode::Edge, Mode::Vertex] {
            let spec = PercolationSpec::new(mode, p, seed, trial).unwrap();
            let (_, s) = if mode == Mode::Edge { edge_percolate(&g, &spec) } else { vertex_percolate(&g, &spec) }.unwrap();
            prop_assert_eq!(SurvivorMap::from_text(&s.to_text()).unwrap(), s);
        }
    }

    #[test]
    fn percolation_is_monotone_in_p(g in graph(8, false), a in 0.0f64..=1.0, b in 0.0f64..=1.0, seed: u64, trial in 0u64..50) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let run = |p| {
            let spec = PercolationSpec::new(Mode::Edge, p, seed, trial).unwrap();
            edge_percolate(&g, &spec).unwrap().0.edges().iter().copied().collect::<BTreeSet<_>>()
        };
        prop_assert!(run(lo).is_subset(&run(hi)));
    }

    #[test]
    fn survival_depends_only_on_the_element(g in graph(8, false), p in 0.0f64..=1.0, seed: u64, trial in 0u64..50) {
        // Removing other edges must not change whether an edge survives.
        let spec = PercolationSpec::new(Mode::Edge, p, seed, trial).unwrap();
        let (h, _) = edge_percolate(&g, &spec).unwrap();
        for &(u, v) in g.edges() {
            prop_assert_eq!(h.has_edge(u, v), spec.survives(edge_key(u, v)));
            let single = Graph::undirected(g.vertex_count(), [(u, v)]).unwrap();
            prop_assert_eq!(edge_percolate(&single, &spec).unwrap().0.edge_count() == 1, h.has_edge(u, v));
        }
    }

    #[test]
    fn extreme_probabilities(g in graph(8, false), seed: u64) {
        let all = PercolationSpec::new(Mode::Vertex, 1.0, seed, 0).unwrap();
        prop_assert_eq!(vertex_percolate(&g, &all).unwrap().0, g.clone());
        let none = PercolationSpec::new(Mode::Vertex, 0.0, seed, 0).unwrap();
        prop_assert_eq!(vertex_percolate(&g, &none).unwrap().0.vertex_count(), 0);
    }

    #[test]
    fn clause_and_item_survival_match_spec(f in formula(4, 6), s in subset_sum(), p in 0.0f64..=1.0, seed: u64) {
        let spec = PercolationSpec::new(Mode::Clause, p, seed, 3).unwrap();
        let (_, map) = clause_percolate(&f, &spec).unwrap();
        let expected: Vec<usize> = (1..=f.clause_count()).filter(|&i| spec.survives(i as u64)).collect();
        prop_assert_eq!(map.kept_indices(), expected);
        let spec = PercolationSpec::new(Mode::Item, p, seed, 3).unwrap();
        let (kept, map) = item_percolate(&s, &spec).unwrap();
        prop_assert_eq!(kept.len(), map.kept_count());
        for (new, old) in map.kept_indices().into_iter().enumerate() {
            prop_assert_eq!(&kept.items()[new], &s.items()[old - 1]);
        }
    }

    #[test]
    fn blowup_shape(g in graph(6, false), r in 1usize..4) {
        let out = blowup_graph(&g, r).unwrap();
        prop_assert_eq!(out.instance.vertex_count(), g.vertex_count() * r);
        prop_assert_eq!(out.instance.edge_count(), g.edge_count() * r * r);
        for i in 1..=g.vertex_count() {
            prop_assert!(out.instance.is_independent(out.clouds.cloud(i)));
        }
        let owners = out.clouds.owners();
        for &(x, y) in out.instance.edges() {
            prop_assert!(g.has_edge(owners[x], owners[y]));
        }
        prop_assert_eq!(CloudMap::from_text(&out.clouds.to_text()).unwrap(), out.clouds);
    }

    #[test]
    fn ham_gadget_shape(g in graph(5, true), r in 1usize..4) {
        let out = ham_gadget(&g, r).unwrap();
        prop_assert_eq!(out.instance.vertex_count(), g.vertex_count() * (r + 1));
        prop_assert!(out.instance.is_directed());
    }

    #[test]
    fn csp_blowup_shape_and_value(f in formula(3, 4), r in 1usize..4) {
        let b = csp_cloud_blowup(&f, r).unwrap();
        let k = f.uniform_arity().unwrap();
        prop_assert_eq!(b.instance.n_vars(), f.n_vars() * r);
        prop_assert_eq!(b.instance.clause_count(), f.clause_count() * r.pow(k as u32));
        prop_assert_eq!(max_csp_value(&b.instance).unwrap().value, max_csp_value(&f).unwrap().value);
    }

    #[test]
    fn gadget_layout(items in proptest::collection::vec(1u64..50, 1..5), target in 0u64..100, r in 1usize..3) {
        let s = SubsetSumInstance::from_u64(&items, target);
        let c = minimal_c_prime(&s, r).unwrap();
        let g = subset_sum_gadget(&s, r, c, GadgetCheck::Strict).unwrap();
        prop_assert_eq!(g.instance.len(), 2 * g.n * (2 * r + 1));
        prop_assert_eq!(g.n % 2, 0);
        for item in 1..=g.instance.len() {
            let l = g.label(item);
            prop_assert_eq!(g.item_index(l.index, l.primed, l.offset), item);
        }
    }

    #[test]
    fn wilson_interval_is_sane(trials in 0u64..500, frac in 0.0f64..=1.0) {
        let s = (trials as f64 * frac).floor() as u64;
        let (lo, hi) = wilson_interval(s, trials, Z95);
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi) && lo <= hi);
        if trials > 0 {
            let est = s as f64 / trials as f64;
            prop_assert!(lo <= est + 1e-12 && est <= hi + 1e-12);
        }
    }
}
