mod common;

use arbortile::graph::io::{emit_edge_list, emit_graph6, parse_edge_list, parse_graph, parse_graph6, GraphFormat};
use arbortile::graph::{components, girth, independence_bounds, independence_number, is_forest, Girth};
use arbortile::{Graph, VertexSet};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n, 0.0f64..1.0, any::<u64>()).prop_map(|(n, p, seed)| common::random_graph(&mut common::rng(seed), n, p))
}

/// Shortest cycle through each edge: remove it and take the BFS distance.
fn girth_brute(g: &Graph) -> Option<usize> {
    let mut best = None;
    for (u, v) in g.edges() {
        let mut dist = vec![usize::MAX; g.n()];
        dist[u] = 0;
        let mut queue = std::collections::VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for y in g.neighbors(x) {
                if (x, y) == (u, v) || (x, y) == (v, u) || dist[y] != usize::MAX {
                    continue;
                }
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
        if dist[v] != usize::MAX {
            let len = dist[v] + 1;
            best = Some(best.map_or(len, |b: usize| b.min(len)));
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn independence_number_matches_subsets(g in graph_strategy(14)) {
        let (alpha, witness) = independence_number(&g, 80).unwrap();
        prop_assert_eq!(alpha, common::alpha_brute(&g));
        prop_assert_eq!(witness.len(), alpha);
        prop_assert_eq!(g.induced_edge_count(&witness), 0);
        let b = independence_bounds(&g);
        prop_assert!(b.lower <= alpha && alpha <= b.upper);
    }

    #[test]
    fn girth_matches_edge_removal(g in graph_strategy(14)) {
        match girth(&g) {
            Girth::Finite(k) => prop_assert_eq!(Some(k), girth_brute(&g)),
            Girth::Infinite => prop_assert_eq!(None, girth_brute(&g)),
        }
    }

    #[test]
    fn forests_have_n_minus_c_edges(g in graph_strategy(12)) {
        let all = VertexSet::range(g.n());
        let c = components(&g).len();
        prop_assert_eq!(is_forest(&g, &all), g.edge_count() + c == g.n());
        prop_assert_eq!(is_forest(&g, &all), common::induces_forest(&g, all.as_slice()));
    }

    #[test]
    fn text_formats_round_trip(g in graph_strategy(70)) {
        let el = parse_edge_list(&emit_edge_list(&g)).unwrap();
        prop_assert_eq!(el.edges(), g.edges());
        let text = emit_graph6(&g);
        let g6 = parse_graph6(&text).unwrap();
        prop_assert_eq!(g6.n(), g.n());
        prop_assert_eq!(g6.edges(), g.edges());
        prop_assert_eq!(parse_graph(&text, GraphFormat::sniff(&text)).unwrap().edges(), g.edges());
    }
}

#[test]
fn known_graph6_strings() {
    assert_eq!(emit_graph6(&Graph::complete(4)), "C~");
    assert_eq!(emit_graph6(&Graph::path(3)), "Bg");
    let petersen = parse_graph6("IheA@GUAo").unwrap();
    assert_eq!((petersen.n(), petersen.edge_count()), (10, 15));
    assert_eq!(girth(&petersen), Girth::Finite(5));
    assert_eq!(independence_number(&petersen, 80).unwrap().0, 4);
}

#[test]
fn parse_errors_point_at_the_line() {
    let err = parse_edge_list("3\n0 1\n0 5\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
    assert!(parse_edge_list("3\n0 0\n").is_err());
    assert!(parse_graph6("C~~").is_err());
}
