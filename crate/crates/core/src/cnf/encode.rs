use std::collections::HashMap;

use super::{Cnf, CnfError, VarMeaning};
use crate::arrowing::ArrowingProblem;
use crate::constructions::{BlockKind, NamedGraph, StructuredGraph};
use crate::graph::{Graph, VertexSet};

/// Which question a [`Cnf`] answers, with whatever the decoder needs to map a
/// model back onto the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EncodingKind {
    /// SAT iff a good coloring for `targets` exists. With `exact` each edge
    /// gets exactly one color; otherwise at least one.
    Arrowing { targets: Vec<usize>, exact: bool },
    /// SAT iff some partition into three parts, each meeting the `K_4` block,
    /// has a 2-coloring with no triangle inside a part all one color.
    PartitionLemma { k4: Vec<usize> },
    /// SAT iff a 3-coloring with no monochromatic triangle gives the edges
    /// from `w` to the `K̂_4` block all three colors, with `wa` and `wb`
    /// colored differently.
    ApexLemma {
        w: usize,
        a: usize,
        b: usize,
        k4_minus: Vec<usize>,
    },
}

#[derive(Clone, Debug)]
pub struct Encoding {
    pub cnf: Cnf,
    pub graph: Graph,
    pub kind: EncodingKind,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ArrowingEncodingOptions {
    /// Adds pairwise at-most-one clauses per edge.
    pub exact: bool,
    /// Adds the unit clause "edge 0 has color 1". Only applied when all
    /// targets are equal, where every color is interchangeable.
    pub symmetry_breaking: bool,
}

/// Variable for "edge `edge` has color `color`" (1-based color), with `r`
/// colors: edges in index order, colors innermost.
#[inline]
pub fn edge_color_var(edge: usize, color: usize, r: usize) -> i32 {
    (edge * r + color) as i32
}

pub fn encode_arrowing(p: &ArrowingProblem) -> Encoding {
    encode_arrowing_with(p, ArrowingEncodingOptions::default())
}

pub fn encode_arrowing_with(p: &ArrowingProblem, opts: ArrowingEncodingOptions) -> Encoding {
    let g = p.graph();
    let mut cnf = Cnf::new(0);
    add_edge_color_vars(&mut cnf, g, p.colors(), opts.exact);
    add_mono_clique_clauses(&mut cnf, g, p.targets());
    if opts.symmetry_breaking && p.all_targets_equal() && g.m() > 0 {
        cnf.push(vec![edge_color_var(0, 1, p.colors())]);
    }
    Encoding {
        cnf,
        graph: g.clone(),
        kind: EncodingKind::Arrowing {
            targets: p.targets().to_vec(),
            exact: opts.exact,
        },
    }
}

fn add_edge_color_vars(cnf: &mut Cnf, g: &Graph, r: usize, exact: bool) {
    for &(u, v) in g.edges() {
        for color in 1..=r {
            cnf.new_var(VarMeaning::EdgeColor {
                u,
                v,
                color: color as u8,
            });
        }
    }
    for e in 0..g.m() {
        cnf.push((1..=r).map(|c| edge_color_var(e, c, r)).collect());
    }
    if exact {
        for e in 0..g.m() {
            for c in 1..=r {
                for d in c + 1..=r {
                    cnf.push(vec![-edge_color_var(e, c, r), -edge_color_var(e, d, r)]);
                }
            }
        }
    }
}

/// Edge indices of a clique, in ascending order.
fn clique_edges(g: &Graph, clique: &VertexSet) -> Vec<usize> {
    let members = clique.to_vec();
    let mut edges = Vec::with_capacity(members.len() * (members.len() - 1) / 2);
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            edges.push(g.edge_index(u, v).expect("clique members are adjacent"));
        }
    }
    edges.sort_unstable();
    edges
}

fn add_mono_clique_clauses(cnf: &mut Cnf, g: &Graph, targets: &[usize]) {
    let r = targets.len();
    let mut cache: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
    for (i, &a) in targets.iter().enumerate() {
        let cliques = cache.entry(a).or_insert_with(|| {
            g.enumerate_cliques(a)
                .iter()
                .map(|q| clique_edges(g, q))
                .collect()
        });
        for edges in cliques.iter() {
            cnf.push(
                edges
                    .iter()
                    .map(|&e| -edge_color_var(e, i + 1, r))
                    .collect(),
            );
        }
    }
}

/// The partition statement for `T = K_4 + 4 C_5`, negated.
pub fn encode_lemma1() -> Encoding {
    encode_partition_lemma(&NamedGraph::T.build()).expect("T has a K4 block")
}

/// Negated partition statement for any structured graph with a `K_4` block:
/// SAT iff there is a partition `V1 ∪ V2 ∪ V3` with every part meeting the
/// block and every `G[Vi]` admitting a 2-coloring without a monochromatic
/// triangle. Edge variables `y(e)` come first, then `p(v, i)`.
pub fn encode_partition_lemma(sg: &StructuredGraph) -> Result<Encoding, CnfError> {
    let k4 = sg
        .blocks_of(BlockKind::K4)
        .next()
        .ok_or_else(|| CnfError::NotApplicable("graph has no K4 block".into()))?
        .vertices
        .to_vec();
    let g = &sg.graph;
    let m = g.m();
    let mut cnf = Cnf::new(0);
    for &(u, v) in g.edges() {
        cnf.new_var(VarMeaning::EdgeBinary { u, v });
    }
    for vertex in 0..g.n() {
        for part in 1..=3 {
            cnf.new_var(VarMeaning::VertexPart { vertex, part });
        }
    }
    let y = |e: usize| (e + 1) as i32;
    let part = |v: usize, i: usize| (m + 3 * v + i) as i32;

    for v in 0..g.n() {
        cnf.push((1..=3).map(|i| part(v, i)).collect());
        for i in 1..=3 {
            for j in i + 1..=3 {
                cnf.push(vec![-part(v, i), -part(v, j)]);
            }
        }
    }
    for i in 1..=3 {
        cnf.push(k4.iter().map(|&v| part(v, i)).collect());
    }
    for tri in g.enumerate_cliques(3) {
        let vs = tri.to_vec();
        let es = clique_edges(g, &tri);
        for i in 1..=3 {
            let in_part: Vec<i32> = vs.iter().map(|&v| -part(v, i)).collect();
            let mut all_one = in_part.clone();
            all_one.extend(es.iter().map(|&e| -y(e)));
            cnf.push(all_one);
            let mut all_two = in_part;
            all_two.extend(es.iter().map(|&e| y(e)));
            cnf.push(all_two);
        }
    }
    Ok(Encoding {
        cnf,
        graph: g.clone(),
        kind: EncodingKind::PartitionLemma { k4 },
    })
}

/// The constrained 3-coloring statement for `Q = K_1 + L`, negated.
pub fn encode_lemma3() -> Encoding {
    encode_apex_lemma(&NamedGraph::Q.build()).expect("Q starts with K1 and has a K4-e block")
}

/// Negated apex statement for a structured graph whose first block is `K_1`
/// (the apex `w`) and which has a `K̂_4` block with non-adjacent pair `a, b`
/// (its first two vertices). Uses the exactly-one color encoding so that the
/// color of `wa` is well defined.
pub fn encode_apex_lemma(sg: &StructuredGraph) -> Result<Encoding, CnfError> {
    let w = match sg.blocks.first() {
        Some(b) if b.kind == BlockKind::K1 => b.vertices.first().expect("K1 block has a vertex"),
        _ => return Err(CnfError::NotApplicable("first block must be K1".into())),
    };
    let k4_minus = sg
        .blocks_of(BlockKind::K4Minus)
        .next()
        .ok_or_else(|| CnfError::NotApplicable("graph has no K4-e block".into()))?
        .vertices
        .to_vec();
    let (a, b) = (k4_minus[0], k4_minus[1]);
    let g = &sg.graph;
    let p = ArrowingProblem::new(g.clone(), vec![3, 3, 3]).expect("valid targets");
    let mut enc = encode_arrowing_with(
        &p,
        ArrowingEncodingOptions {
            exact: true,
            symmetry_breaking: false,
        },
    );
    let edge = |x: usize, y: usize| g.edge_index(x, y).expect("w is joined to every vertex");
    for color in 1..=3 {
        enc.cnf.push(
            k4_minus
                .iter()
                .map(|&t| edge_color_var(edge(w, t), color, 3))
                .collect(),
        );
    }
    for color in 1..=3 {
        enc.cnf.push(vec![
            -edge_color_var(edge(w, a), color, 3),
            -edge_color_var(edge(w, b), color, 3),
        ]);
    }
    enc.kind = EncodingKind::ApexLemma { w, a, b, k4_minus };
    Ok(enc)
}
