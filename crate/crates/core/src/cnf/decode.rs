use super::{edge_color_var, Assignment, CnfError, Encoding, EncodingKind};
use crate::arrowing::{check_coloring, ArrowingProblem, EdgeColoring};
use crate::graph::Graph;
use crate::sat::verify_model;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodedCertificate {
    Coloring(EdgeColoring),
    /// `partition[v]` is the 1-based part of vertex `v`; the coloring uses
    /// colors 1 and 2.
    PartitionAndColoring {
        partition: Vec<u8>,
        coloring: EdgeColoring,
    },
}

/// Turns a model into a combinatorial certificate and re-checks that
/// certificate without reference to the clauses.
///
/// A model that fails the clause check is the caller's problem
/// ([`CnfError::UnsatisfiedClause`]); a satisfying model whose certificate
/// fails the combinatorial check means the encoder is wrong
/// ([`CnfError::CertificateRejected`]).
pub fn decode_model(enc: &Encoding, model: &Assignment) -> Result<DecodedCertificate, CnfError> {
    let cnf = &enc.cnf;
    if model.len() < cnf.num_vars() {
        return Err(CnfError::IncompleteModel {
            expected: cnf.num_vars(),
            found: model.len(),
        });
    }
    if !verify_model(cnf, model) {
        let bad = cnf
            .clauses()
            .iter()
            .position(|c| !c.iter().any(|&l| model.lit_value(l)))
            .expect("verify_model found a falsified clause");
        return Err(CnfError::UnsatisfiedClause(bad));
    }
    let g = &enc.graph;
    match &enc.kind {
        EncodingKind::Arrowing { targets, exact } => {
            let coloring = multi_valued_coloring(g, model, targets.len(), *exact)?;
            let p = ArrowingProblem::new(g.clone(), targets.clone()).map_err(reject)?;
            if let Some(w) = check_coloring(&p, &coloring).map_err(reject)? {
                return Err(rejected(format!(
                    "color {} clique {} survives decoding",
                    w.color, w.vertices
                )));
            }
            Ok(DecodedCertificate::Coloring(coloring))
        }
        EncodingKind::ApexLemma { w, a, b, k4_minus } => {
            let coloring = multi_valued_coloring(g, model, 3, true)?;
            let p = ArrowingProblem::new(g.clone(), vec![3, 3, 3]).map_err(reject)?;
            if let Some(wit) = check_coloring(&p, &coloring).map_err(reject)? {
                return Err(rejected(format!(
                    "color {} triangle {} survives decoding",
                    wit.color, wit.vertices
                )));
            }
            let color = |x: usize| {
                coloring
                    .color_of(g, *w, x)
                    .expect("apex is adjacent to the block")
            };
            let mut seen = [false; 3];
            for &t in k4_minus {
                seen[color(t) as usize - 1] = true;
            }
            if seen != [true; 3] {
                return Err(rejected(format!(
                    "edges from {w} to the K4-e block miss a color"
                )));
            }
            if color(*a) == color(*b) {
                return Err(rejected(format!(
                    "edges {w}-{a} and {w}-{b} share color {}",
                    color(*a)
                )));
            }
            Ok(DecodedCertificate::Coloring(coloring))
        }
        EncodingKind::PartitionLemma { k4 } => {
            let m = g.m();
            let coloring = EdgeColoring::new(
                (0..m)
                    .map(|e| if model.value(e + 1) { 1 } else { 2 })
                    .collect(),
            );
            let mut partition = Vec::with_capacity(g.n());
            for v in 0..g.n() {
                let parts: Vec<u8> = (1..=3u8)
                    .filter(|&i| model.value(m + 3 * v + i as usize))
                    .collect();
                match parts.as_slice() {
                    [p] => partition.push(*p),
                    _ => return Err(rejected(format!("vertex {v} lies in parts {parts:?}"))),
                }
            }
            check_partition(g, k4, &partition, &coloring)?;
            Ok(DecodedCertificate::PartitionAndColoring {
                partition,
                coloring,
            })
        }
    }
}

/// Lowest true color per edge. In exact mode exactly one must be true.
fn multi_valued_coloring(
    g: &Graph,
    model: &Assignment,
    r: usize,
    exact: bool,
) -> Result<EdgeColoring, CnfError> {
    let mut colors = Vec::with_capacity(g.m());
    for e in 0..g.m() {
        let on: Vec<usize> = (1..=r)
            .filter(|&c| model.value(edge_color_var(e, c, r) as usize))
            .collect();
        if on.is_empty() || (exact && on.len() > 1) {
            let (u, v) = g.edges()[e];
            return Err(rejected(format!("edge ({u}, {v}) has colors {on:?}")));
        }
        colors.push(on[0] as u8);
    }
    Ok(EdgeColoring::new(colors))
}

/// Every part meets `k4`, and no triangle inside one part is monochromatic.
/// Brute-force triple scan, independent of the clique enumerator.
fn check_partition(
    g: &Graph,
    k4: &[usize],
    partition: &[u8],
    coloring: &EdgeColoring,
) -> Result<(), CnfError> {
    for part in 1..=3u8 {
        if !k4.iter().any(|&v| partition[v] == part) {
            return Err(rejected(format!("part {part} misses the K4 block")));
        }
    }
    let n = g.n();
    for u in 0..n {
        for v in u + 1..n {
            if partition[u] != partition[v] || !g.has_edge(u, v) {
                continue;
            }
            for w in v + 1..n {
                if partition[w] != partition[u] || !g.has_edge(u, w) || !g.has_edge(v, w) {
                    continue;
                }
                let c = coloring.color_of(g, u, v);
                if c == coloring.color_of(g, u, w) && c == coloring.color_of(g, v, w) {
                    return Err(rejected(format!(
                        "triangle {{{u}, {v}, {w}}} in part {} has one color",
                        partition[u]
                    )));
                }
            }
        }
    }
    Ok(())
}

fn rejected(msg: String) -> CnfError {
    CnfError::CertificateRejected(msg)
}

fn reject(e: impl std::fmt::Display) -> CnfError {
    CnfError::CertificateRejected(e.to_string())
}
