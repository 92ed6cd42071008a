use folkman::arrowing::{check_coloring, ArrowingProblem};
use folkman::cnf::{
    decode_model, encode_arrowing, encode_lemma1, encode_lemma3, parse_solver_output,
    parse_var_map, write_dimacs, write_var_map, Assignment, Cnf, DecodedCertificate,
    PartialAssignment, VarMeaning,
};
use folkman::constructions::{parse_expression, NamedGraph};
use folkman::graph::Graph;
use folkman::sat::{solve, Limits, SolverResult};

fn triangles(g: &Graph) -> usize {
    let n = g.n();
    let mut t = 0;
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                t += (g.has_edge(u, v) && g.has_edge(u, w) && g.has_edge(v, w)) as usize;
            }
        }
    }
    t
}

fn header(cnf: &Cnf) -> String {
    write_dimacs(cnf, true)
        .lines()
        .find(|l| l.starts_with("p cnf"))
        .unwrap()
        .to_string()
}

/// Builds a partial assignment from the written var map, so the injection
/// does not depend on the encoder's numbering.
fn inject(cnf: &Cnf, mut value: impl FnMut(&VarMeaning) -> Option<bool>) -> PartialAssignment {
    let mut pa = PartialAssignment::new(cnf.num_vars());
    for (var, meaning) in parse_var_map(&write_var_map(cnf)).unwrap() {
        if let Some(b) = value(&meaning) {
            pa.set(var, b);
        }
    }
    pa
}

fn inject_coloring(cnf: &Cnf, color: impl Fn(usize, usize) -> Option<u8>) -> PartialAssignment {
    inject(cnf, |m| match *m {
        VarMeaning::EdgeColor { u, v, color: c } => color(u, v).map(|x| x == c),
        _ => None,
    })
}

fn clause_set(cnf: &Cnf, idx: &[usize]) -> Vec<Vec<i32>> {
    idx.iter()
        .map(|&i| {
            let mut c = cnf.clauses()[i].clone();
            c.sort();
            c
        })
        .collect()
}

#[test]
fn h_header_matches_closed_form() {
    let h = NamedGraph::H.build().graph;
    let enc = encode_arrowing(&ArrowingProblem::new(h.clone(), vec![3, 3, 3]).unwrap());
    let (m, t) = (h.m(), triangles(&h));
    assert_eq!((m, t), (405, 3250));
    assert_eq!(header(&enc.cnf), format!("p cnf {} {}", 3 * m, m + 3 * t));
    assert_eq!(header(&enc.cnf), "p cnf 1215 10155");
}

#[test]
fn lemma3_header_matches_closed_form() {
    let q = NamedGraph::Q.build().graph;
    let enc = encode_lemma3();
    let (m, t) = (q.m(), triangles(&q));
    assert_eq!(m, 279);
    // at-least-one + 3 pairwise at-most-one per edge, 3 colors per
    // triangle, 3 coverage + 3 distinctness side clauses
    assert_eq!(
        header(&enc.cnf),
        format!("p cnf {} {}", 3 * m, 4 * m + 3 * t + 6)
    );
    assert_eq!(enc.cnf.num_vars(), 837);
}

#[test]
fn lemma1_header_matches_closed_form() {
    let t_graph = NamedGraph::T.build().graph;
    let enc = encode_lemma1();
    let (n, m, t) = (t_graph.n(), t_graph.m(), triangles(&t_graph));
    assert_eq!((n, m), (24, 256));
    // exactly-one part per vertex (1 + 3 clauses), 3 hitting clauses,
    // 2 clauses per triangle per part
    assert_eq!(
        header(&enc.cnf),
        format!("p cnf {} {}", 3 * n + m, 4 * n + 3 + 6 * t)
    );
}

#[test]
fn pentagon_injection_satisfies_and_a_flip_violates_one_clause() {
    let k5 = Graph::complete(5).unwrap();
    let enc = encode_arrowing(&ArrowingProblem::new(k5, vec![3, 3]).unwrap());
    let pentagon = |u: usize, v: usize| {
        if (v - u) % 5 == 1 || (v - u) % 5 == 4 {
            1
        } else {
            2
        }
    };
    let good = inject_coloring(&enc.cnf, |u, v| Some(pentagon(u, v)));
    assert!(enc.cnf.violated_clauses(&good).is_empty());

    // recolor chord 0-2 with color 1: closes the color-1 triangle {0,1,2}
    let bad = inject_coloring(&enc.cnf, |u, v| {
        Some(if (u, v) == (0, 2) { 1 } else { pentagon(u, v) })
    });
    let violated = enc.cnf.violated_clauses(&bad);
    let x = |e: usize| -(2 * e as i32 + 1);
    let g = &enc.graph;
    let mut expected = vec![
        x(g.edge_index(0, 1).unwrap()),
        x(g.edge_index(0, 2).unwrap()),
        x(g.edge_index(1, 2).unwrap()),
    ];
    expected.sort();
    assert_eq!(clause_set(&enc.cnf, &violated), vec![expected]);
}

#[test]
fn monochromatic_k3_violates() {
    let enc =
        encode_arrowing(&ArrowingProblem::new(Graph::complete(3).unwrap(), vec![3, 3]).unwrap());
    for c in 1..=2 {
        let pa = inject_coloring(&enc.cnf, |_, _| Some(c));
        assert_eq!(enc.cnf.violated_clauses(&pa).len(), 1);
    }
}

#[test]
fn lemma1_injections_hit_only_hitting_clauses() {
    let enc = encode_lemma1();
    let part_of = |m: &VarMeaning, f: &dyn Fn(usize) -> Option<u8>| match *m {
        VarMeaning::VertexPart { vertex, part } => f(vertex).map(|p| p == part),
        _ => None,
    };
    let hitting = |part: u8| {
        let mut lits: Vec<i32> = Vec::new();
        for (var, m) in enc.cnf.var_map() {
            if let VarMeaning::VertexPart { vertex, part: p } = m {
                if vertex < 4 && p == part {
                    lits.push(var as i32);
                }
            }
        }
        lits.sort();
        lits
    };

    let all_in_one = inject(&enc.cnf, |m| part_of(m, &|_| Some(1)));
    let violated = enc.cnf.violated_clauses(&all_in_one);
    assert_eq!(
        clause_set(&enc.cnf, &violated),
        vec![hitting(2), hitting(3)]
    );

    // the K4 block split over parts 1 and 2 only
    let two_parts = inject(&enc.cnf, |m| {
        part_of(m, &|v| (v < 4).then_some(if v < 2 { 1 } else { 2 }))
    });
    let violated = enc.cnf.violated_clauses(&two_parts);
    assert_eq!(clause_set(&enc.cnf, &violated), vec![hitting(3)]);
}

#[test]
fn lemma3_injection_hits_side_clauses() {
    let enc = encode_lemma3();
    // w = 0, the K4-e block is 1..=4 with a = 1, b = 2
    let pa = inject_coloring(&enc.cnf, |u, v| {
        (u == 0 && (1..=4).contains(&v)).then_some(1)
    });
    let violated = clause_set(&enc.cnf, &enc.cnf.violated_clauses(&pa));
    let var = |v: usize, c: u8| {
        enc.cnf
            .var_map()
            .find(|(_, m)| *m == VarMeaning::EdgeColor { u: 0, v, color: c })
            .map(|(i, _)| i as i32)
            .unwrap()
    };
    let coverage = |c: u8| (1..=4).map(|v| var(v, c)).collect::<Vec<_>>();
    let mut distinct = vec![-var(1, 1), -var(2, 1)];
    distinct.sort();
    let mut expected = vec![coverage(2), coverage(3), distinct];
    expected.sort();
    let mut violated = violated;
    violated.sort();
    assert_eq!(violated, expected);
}

#[test]
fn solver_models_decode_to_valid_certificates() {
    // K16 with three colors, through the competition text format
    let p = ArrowingProblem::new(Graph::complete(16).unwrap(), vec![3, 3, 3]).unwrap();
    let enc = encode_arrowing(&p);
    let out = solve(&enc.cnf, Limits::default()).unwrap();
    let parsed = parse_solver_output(&out.to_competition_output()).unwrap();
    let model = Assignment::from_literals(enc.cnf.num_vars(), &parsed.literals).unwrap();
    let DecodedCertificate::Coloring(c) = decode_model(&enc, &model).unwrap() else {
        panic!()
    };
    assert_eq!(check_coloring(&p, &c).unwrap(), None);

    // small structured instances of the lemma encodings
    for expr in ["K4+C5", "K4+C5+C5"] {
        let sg = parse_expression(expr).unwrap();
        let enc = folkman::cnf::encode_partition_lemma(&sg).unwrap();
        if let SolverResult::Sat(m) = solve(&enc.cnf, Limits::default()).unwrap().result {
            assert!(matches!(
                decode_model(&enc, &m).unwrap(),
                DecodedCertificate::PartitionAndColoring { .. }
            ));
        }
    }
    for expr in ["K1+K4-e+C5", "K1+K4-e+C5+C5"] {
        let sg = parse_expression(expr).unwrap();
        let enc = folkman::cnf::encode_apex_lemma(&sg).unwrap();
        if let SolverResult::Sat(m) = solve(&enc.cnf, Limits::default()).unwrap().result {
            let DecodedCertificate::Coloring(c) = decode_model(&enc, &m).unwrap() else {
                panic!()
            };
            let p = ArrowingProblem::new(sg.graph.clone(), vec![3, 3, 3]).unwrap();
            assert_eq!(check_coloring(&p, &c).unwrap(), None);
        }
    }
}

#[test]
fn tampered_models_are_rejected() {
    let p = ArrowingProblem::new(Graph::complete(5).unwrap(), vec![3, 3]).unwrap();
    let enc = encode_arrowing(&p);
    let SolverResult::Sat(model) = solve(&enc.cnf, Limits::default()).unwrap().result else {
        panic!()
    };
    // force every edge to color 1 only: a monochromatic K5
    let all_one = Assignment((0..enc.cnf.num_vars()).map(|i| i % 2 == 0).collect());
    assert!(decode_model(&enc, &all_one).is_err());
    assert!(decode_model(&enc, &model).is_ok());
}
