use folkman::constructions::NamedGraph;
use folkman::graph::{Graph, VertexSet};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

/// Every k-subset of the vertices, tested pair by pair.
fn brute_force_cliques(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if vs
            .iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
        {
            out.push(vs);
        }
    }
    out.sort();
    out
}

fn brute_force_clique_number(g: &Graph) -> usize {
    (0..=g.n())
        .rev()
        .find(|&k| !brute_force_cliques(g, k).is_empty())
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn zykov_sum_adds_clique_numbers(g1 in graph_strategy(8), g2 in graph_strategy(8)) {
        let s = g1.zykov_sum(&g2).unwrap();
        prop_assert_eq!(s.m(), g1.m() + g2.m() + g1.n() * g2.n());
        prop_assert_eq!(s.clique_number(), g1.clique_number() + g2.clique_number());
    }

    #[test]
    fn enumeration_matches_brute_force(g in graph_strategy(10), k in 1usize..6) {
        let listed: Vec<Vec<usize>> = g.enumerate_cliques(k).iter().map(VertexSet::to_vec).collect();
        prop_assert_eq!(listed, brute_force_cliques(&g, k));
    }

    #[test]
    fn clique_number_is_largest_nonempty_level(g in graph_strategy(10)) {
        let cl = g.clique_number();
        prop_assert_eq!(cl, brute_force_clique_number(&g));
        prop_assert!(!g.enumerate_cliques(cl).is_empty());
        prop_assert!(g.enumerate_cliques(cl + 1).is_empty());
    }

    #[test]
    fn induced_edges_match_edges_between(g in graph_strategy(10), mask in any::<u16>()) {
        let s: VertexSet = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
        let (sub, map) = g.induced(&s).unwrap();
        let mut lifted: Vec<(usize, usize)> = sub.edges().iter().map(|&(a, b)| (map[a], map[b])).collect();
        lifted.sort();
        let mut between = g.edges_between(&s, &s).unwrap();
        between.sort();
        prop_assert_eq!(lifted, between);
        prop_assert!(sub.check_invariants());
    }
}

#[test]
fn h_triangles_match_triple_scan() {
    let h = NamedGraph::H.build().graph;
    let n = h.n();
    let mut count = 0;
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                if h.has_edge(u, v) && h.has_edge(u, w) && h.has_edge(v, w) {
                    count += 1;
                }
            }
        }
    }
    // 6*5*25 triangles use one C5 edge and a vertex from another block,
    // C(6,3)*5^3 take one vertex from each of three blocks
    assert_eq!(count, 6 * 5 * 25 + 20 * 125);
    assert_eq!(h.enumerate_cliques(3).len(), count);
}

#[test]
fn h_neighborhoods_have_27_vertices() {
    let h = NamedGraph::H.build().graph;
    for v in 0..h.n() {
        assert_eq!(h.neighborhood(v).unwrap().len(), 27);
    }
}

#[test]
fn named_clique_numbers_match_brute_force_blocks() {
    // additivity: C5 contributes 2, K4 4, K4-e 3, K1 1
    let expected = [
        (NamedGraph::H, 12),
        (NamedGraph::S, 10),
        (NamedGraph::T, 12),
        (NamedGraph::L, 11),
        (NamedGraph::Q, 12),
    ];
    for (name, cl) in expected {
        let sg = name.build();
        let additive: usize = sg
            .blocks
            .iter()
            .map(|b| brute_force_clique_number(&b.kind.graph().unwrap()))
            .sum();
        assert_eq!(additive, cl, "{name}");
        assert_eq!(sg.graph.clique_number(), cl, "{name}");
    }
}
