//! Edge arrowing `G →e (a1, ..., ar)`: every `r`-coloring of the edges of `G`
//! contains, for some color `i`, a clique on `a_i` vertices whose edges all
//! have color `i`.
//!
//! A coloring without such a clique is called *good*. Everything here either
//! checks a proposed good coloring ([`check_coloring`]) or looks for one
//! ([`find_good_coloring`], or the SAT route inside [`arrows`]).
//!
//! Colors are 1-based throughout the public API.

mod certificate;
mod search;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

pub use certificate::{parse_certificate, write_certificate};
pub use search::{find_good_coloring, EdgeOrdering, SearchConfig, SearchOutcome, SearchResult};

use crate::cnf::{decode_model, encode_arrowing, CnfError, DecodedCertificate};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::sat::{self, Limits, SolverError, SolverResult};

/// Above this many edges [`Method::Auto`] switches from search to SAT.
pub const AUTO_SEARCH_MAX_EDGES: usize = 48;

#[derive(Debug, Error)]
pub enum ArrowingError {
    #[error("invalid targets: {0}")]
    InvalidTargets(String),
    #[error("coloring has {found} entries but the graph has {expected} edges")]
    Mismatch { expected: usize, found: usize },
    #[error("edge {edge} has color {color}, outside 1..={r}")]
    ColorOutOfRange { edge: usize, color: u8, r: usize },
    #[error("certificate line {line}: {message}")]
    Certificate { line: usize, message: String },
    #[error("certificate does not color edge ({0}, {1})")]
    MissingEdge(usize, usize),
    #[error("certificate failed re-validation: {0}")]
    InvalidCertificate(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// A graph with target clique sizes `(a1, ..., ar)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowingProblem {
    graph: Graph,
    targets: Vec<usize>,
}

impl ArrowingProblem {
    /// Requires at least one target, every target at least 2, and at most
    /// 255 colors. Targets larger than the vertex count are allowed; such a
    /// color simply never closes a clique.
    pub fn new(graph: Graph, targets: Vec<usize>) -> Result<ArrowingProblem, ArrowingError> {
        if targets.is_empty() {
            return Err(ArrowingError::InvalidTargets(
                "need at least one color".into(),
            ));
        }
        if targets.len() > u8::MAX as usize {
            return Err(ArrowingError::InvalidTargets(format!(
                "{} colors exceed the limit of 255",
                targets.len()
            )));
        }
        if let Some(&a) = targets.iter().find(|&&a| a < 2) {
            return Err(ArrowingError::InvalidTargets(format!(
                "target {a} is below 2"
            )));
        }
        Ok(ArrowingProblem { graph, targets })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Number of colors `r`.
    pub fn colors(&self) -> usize {
        self.targets.len()
    }

    /// For each color (0-based), the previous color with the same target, if
    /// any. Colors sharing a target are interchangeable.
    pub(crate) fn previous_in_group(&self) -> Vec<Option<usize>> {
        (0..self.targets.len())
            .map(|c| (0..c).rev().find(|&d| self.targets[d] == self.targets[c]))
            .collect()
    }

    pub(crate) fn all_targets_equal(&self) -> bool {
        self.targets.windows(2).all(|w| w[0] == w[1])
    }
}

/// One color per edge, indexed by the host graph's edge index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    colors: Vec<u8>,
}

impl EdgeColoring {
    pub fn new(colors: Vec<u8>) -> EdgeColoring {
        EdgeColoring { colors }
    }

    /// Every one of `m` edges gets `color`.
    pub fn uniform(m: usize, color: u8) -> EdgeColoring {
        EdgeColoring {
            colors: vec![color; m],
        }
    }

    /// Colors each edge of `g` by a function of its endpoints.
    pub fn from_fn(g: &Graph, mut f: impl FnMut(usize, usize) -> u8) -> EdgeColoring {
        EdgeColoring {
            colors: g.edges().iter().map(|&(u, v)| f(u, v)).collect(),
        }
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, edge: usize) -> u8 {
        self.colors[edge]
    }

    pub fn color_of(&self, g: &Graph, u: usize, v: usize) -> Option<u8> {
        g.edge_index(u, v).map(|e| self.colors[e])
    }

    /// Renames colors: color `c` becomes `perm[c - 1]`.
    pub fn permuted(&self, perm: &[u8]) -> EdgeColoring {
        EdgeColoring {
            colors: self.colors.iter().map(|&c| perm[c as usize - 1]).collect(),
        }
    }

    pub fn check_shape(&self, g: &Graph, r: usize) -> Result<(), ArrowingError> {
        if self.colors.len() != g.m() {
            return Err(ArrowingError::Mismatch {
                expected: g.m(),
                found: self.colors.len(),
            });
        }
        if let Some((edge, &color)) = self
            .colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c as usize > r)
        {
            return Err(ArrowingError::ColorOutOfRange { edge, color, r });
        }
        Ok(())
    }

    /// Adjacency rows of the spanning subgraph formed by one color.
    pub fn color_class(&self, g: &Graph, color: u8) -> Vec<VertexSet> {
        let mut adj = vec![VertexSet::new(); g.n()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if self.colors[e] == color {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        adj
    }
}

/// A clique on `a_color` vertices whose edges all carry `color`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonochromaticWitness {
    pub color: u8,
    #[serde(serialize_with = "serialize_set")]
    pub vertices: VertexSet,
}

fn serialize_set<S: serde::Serializer>(s: &VertexSet, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(s.iter())
}

/// Returns the first monochromatic target clique, ordering by color and then
/// lexicographically by vertex set, or `None` when the coloring is good.
pub fn check_coloring(
    p: &ArrowingProblem,
    c: &EdgeColoring,
) -> Result<Option<MonochromaticWitness>, ArrowingError> {
    c.check_shape(&p.graph, p.colors())?;
    for (i, &a) in p.targets.iter().enumerate() {
        let color = (i + 1) as u8;
        let class = Graph::from_edges(
            p.graph.n(),
            p.graph
                .edges()
                .iter()
                .enumerate()
                .filter(|(e, _)| c.color(*e) == color)
                .map(|(_, &uv)| uv),
        )?;
        if let Some(vertices) = class.first_clique(a) {
            return Ok(Some(MonochromaticWitness { color, vertices }));
        }
    }
    Ok(None)
}

/// `N_i(v)`: neighbors of `v` joined to it by an edge of color `i`.
pub fn color_neighborhood(
    g: &Graph,
    c: &EdgeColoring,
    v: usize,
    color: u8,
    r: usize,
) -> Result<VertexSet, ArrowingError> {
    c.check_shape(g, r)?;
    if color == 0 || color as usize > r {
        return Err(ArrowingError::ColorOutOfRange {
            edge: usize::MAX,
            color,
            r,
        });
    }
    Ok(g.neighborhood(v)?
        .iter()
        .filter(|&u| c.color_of(g, u, v) == Some(color))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    Search,
    Sat,
    Auto,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "search" => Ok(Method::Search),
            "sat" => Ok(Method::Sat),
            "auto" => Ok(Method::Auto),
            _ => Err(format!(
                "unknown method {s:?} (expected search, sat or auto)"
            )),
        }
    }
}

/// Resource limits for one arrowing decision. `nodes` bounds the search
/// route, `conflicts` the SAT route; `time` applies to both.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub nodes: Option<u64>,
    pub conflicts: Option<u64>,
    pub time: Option<Duration>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget {
        nodes: None,
        conflicts: None,
        time: None,
    };

    pub fn time(limit: Duration) -> Budget {
        Budget {
            time: Some(limit),
            ..Budget::UNLIMITED
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrowsVerdict {
    Arrows,
    /// Carries a good coloring, already re-validated.
    NotArrows(EdgeColoring),
    Unknown(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub nodes: Option<u64>,
    pub conflicts: Option<u64>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct ArrowsReport {
    pub verdict: ArrowsVerdict,
    /// The route actually taken; never `Auto`.
    pub method: Method,
    pub stats: Stats,
}

pub fn arrows(
    p: &ArrowingProblem,
    method: Method,
    budget: Budget,
) -> Result<ArrowsReport, ArrowingError> {
    let method = match method {
        Method::Auto if p.graph.m() <= AUTO_SEARCH_MAX_EDGES => Method::Search,
        Method::Auto => Method::Sat,
        m => m,
    };
    let start = Instant::now();
    let (verdict, mut stats) = match method {
        Method::Search => {
            let config = SearchConfig {
                node_limit: budget.nodes,
                time_limit: budget.time,
                ..SearchConfig::default()
            };
            let res = find_good_coloring(p, &config);
            let stats = Stats {
                nodes: Some(res.nodes),
                ..Stats::default()
            };
            let verdict = match res.outcome {
                SearchOutcome::Good(c) => ArrowsVerdict::NotArrows(c),
                SearchOutcome::NoGoodColoring => ArrowsVerdict::Arrows,
                SearchOutcome::BudgetExhausted { nodes } => {
                    ArrowsVerdict::Unknown(format!("search budget exhausted after {nodes} nodes"))
                }
            };
            (verdict, stats)
        }
        Method::Sat | Method::Auto => {
            let enc = encode_arrowing(p);
            let out = sat::solve(
                &enc.cnf,
                Limits {
                    time: budget.time,
                    conflicts: budget.conflicts,
                },
            )?;
            let stats = Stats {
                conflicts: Some(out.stats.conflicts),
                ..Stats::default()
            };
            let verdict = match out.result {
                SolverResult::Sat(model) => match decode_model(&enc, &model)? {
                    DecodedCertificate::Coloring(c) => ArrowsVerdict::NotArrows(c),
                    other => unreachable!("arrowing encoding decoded to {other:?}"),
                },
                SolverResult::Unsat => ArrowsVerdict::Arrows,
                SolverResult::Timeout { conflicts, .. } => ArrowsVerdict::Unknown(format!(
                    "solver limit reached after {conflicts} conflicts"
                )),
            };
            (verdict, stats)
        }
    };
    if let ArrowsVerdict::NotArrows(c) = &verdict {
        if let Some(w) = check_coloring(p, c)? {
            return Err(ArrowingError::InvalidCertificate(format!(
                "color {} clique {} in a coloring reported as good",
                w.color, w.vertices
            )));
        }
    }
    stats.elapsed = start.elapsed();
    Ok(ArrowsReport {
        verdict,
        method,
        stats,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessVerdict {
    /// Arrows and the clique number is below `q`.
    Holds,
    Fails,
    /// Clique bound holds but the arrowing question was not settled.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub clique_number: usize,
    pub q: usize,
    /// `None` when the clique bound already fails and arrowing was skipped.
    pub arrowing: Option<ArrowsReport>,
    pub verdict: WitnessVerdict,
}

/// Checks that `g` witnesses `F_e(targets; q) <= |V(g)|`: `cl(g) < q` and
/// `g` arrows the targets.
pub fn folkman_witness_check(
    g: &Graph,
    targets: &[usize],
    q: usize,
    method: Method,
    budget: Budget,
) -> Result<WitnessReport, ArrowingError> {
    if q < 2 {
        return Err(ArrowingError::InvalidTargets(format!(
            "clique bound q = {q} must be at least 2"
        )));
    }
    let p = ArrowingProblem::new(g.clone(), targets.to_vec())?;
    let clique_number = g.clique_number();
    if clique_number >= q {
        return Ok(WitnessReport {
            clique_number,
            q,
            arrowing: None,
            verdict: WitnessVerdict::Fails,
        });
    }
    let report = arrows(&p, method, budget)?;
    let verdict = match report.verdict {
        ArrowsVerdict::Arrows => WitnessVerdict::Holds,
        ArrowsVerdict::NotArrows(_) => WitnessVerdict::Fails,
        ArrowsVerdict::Unknown(_) => WitnessVerdict::Inconclusive,
    };
    Ok(WitnessReport {
        clique_number,
        q,
        arrowing: Some(report),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{parse_expression, NamedGraph};

    pub(crate) fn pentagon_coloring(k5: &Graph) -> EdgeColoring {
        EdgeColoring::from_fn(k5, |u, v| {
            if (v - u) % 5 == 1 || (v - u) % 5 == 4 {
                1
            } else {
                2
            }
        })
    }

    fn problem(g: Graph, targets: &[usize]) -> ArrowingProblem {
        ArrowingProblem::new(g, targets.to_vec()).unwrap()
    }

    #[test]
    fn monochromatic_k3() {
        let k3 = Graph::complete(3).unwrap();
        let p = problem(k3, &[3, 3]);
        let w = check_coloring(&p, &EdgeColoring::uniform(3, 1))
            .unwrap()
            .unwrap();
        assert_eq!(w.color, 1);
        assert_eq!(w.vertices.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn pentagon_coloring_is_good() {
        let k5 = Graph::complete(5).unwrap();
        let c = pentagon_coloring(&k5);
        assert_eq!(
            check_coloring(&problem(k5.clone(), &[3, 3]), &c).unwrap(),
            None
        );
        let n1 = color_neighborhood(&k5, &c, 0, 1, 2).unwrap();
        assert_eq!(n1.to_vec(), vec![1, 4]);
    }

    #[test]
    fn c5_never_has_triangles() {
        let c5 = Graph::cycle(5).unwrap();
        let p = problem(c5, &[3, 3]);
        for bits in 0..32u8 {
            let c = EdgeColoring::new((0..5).map(|i| 1 + ((bits >> i) & 1)).collect());
            assert_eq!(check_coloring(&p, &c).unwrap(), None);
        }
    }

    #[test]
    fn color_neighborhoods() {
        let k4 = Graph::complete(4).unwrap();
        let c = EdgeColoring::uniform(6, 1);
        assert_eq!(
            color_neighborhood(&k4, &c, 0, 1, 2).unwrap().to_vec(),
            vec![1, 2, 3]
        );
        assert!(color_neighborhood(&k4, &c, 0, 2, 2).unwrap().is_empty());
        assert!(color_neighborhood(&k4, &c, 4, 1, 2).is_err());
        assert!(color_neighborhood(&k4, &c, 0, 3, 2).is_err());
    }

    #[test]
    fn shape_errors() {
        let k3 = Graph::complete(3).unwrap();
        let p = problem(k3, &[3, 3]);
        assert!(matches!(
            check_coloring(&p, &EdgeColoring::uniform(2, 1)),
            Err(ArrowingError::Mismatch {
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            check_coloring(&p, &EdgeColoring::new(vec![1, 3, 1])),
            Err(ArrowingError::ColorOutOfRange {
                edge: 1,
                color: 3,
                r: 2
            })
        ));
        assert!(ArrowingProblem::new(Graph::complete(3).unwrap(), vec![]).is_err());
        assert!(ArrowingProblem::new(Graph::complete(3).unwrap(), vec![3, 1]).is_err());
    }

    #[test]
    fn ramsey_r33() {
        let k6 = problem(Graph::complete(6).unwrap(), &[3, 3]);
        assert_eq!(
            arrows(&k6, Method::Search, Budget::UNLIMITED)
                .unwrap()
                .verdict,
            ArrowsVerdict::Arrows
        );
        assert_eq!(
            arrows(&k6, Method::Sat, Budget::UNLIMITED).unwrap().verdict,
            ArrowsVerdict::Arrows
        );
        let k5 = problem(Graph::complete(5).unwrap(), &[3, 3]);
        for method in [Method::Search, Method::Sat, Method::Auto] {
            let r = arrows(&k5, method, Budget::UNLIMITED).unwrap();
            let ArrowsVerdict::NotArrows(c) = r.verdict else {
                panic!("K5 has a good coloring")
            };
            assert_eq!(check_coloring(&k5, &c).unwrap(), None);
        }
    }

    #[test]
    fn graham_graph_arrows() {
        let g = parse_expression("K3+C5").unwrap().graph;
        let p = problem(g.clone(), &[3, 3]);
        for method in [Method::Search, Method::Sat] {
            assert_eq!(
                arrows(&p, method, Budget::UNLIMITED).unwrap().verdict,
                ArrowsVerdict::Arrows
            );
        }
        let w = folkman_witness_check(&g, &[3, 3], 6, Method::Auto, Budget::UNLIMITED).unwrap();
        assert_eq!(w.clique_number, 5);
        assert_eq!(w.verdict, WitnessVerdict::Holds);
    }

    #[test]
    fn witness_check_fails_on_clique_bound() {
        let k6 = Graph::complete(6).unwrap();
        let w = folkman_witness_check(&k6, &[3, 3], 6, Method::Auto, Budget::UNLIMITED).unwrap();
        assert_eq!(w.verdict, WitnessVerdict::Fails);
        assert!(w.arrowing.is_none());
        assert!(folkman_witness_check(&k6, &[3, 3], 1, Method::Auto, Budget::UNLIMITED).is_err());
    }

    #[test]
    fn witness_check_propagates_unknown() {
        let h = NamedGraph::H.build().graph;
        let budget = Budget {
            conflicts: Some(50),
            ..Budget::UNLIMITED
        };
        let w = folkman_witness_check(&h, &[3, 3, 3], 13, Method::Sat, budget).unwrap();
        assert_eq!(w.clique_number, 12);
        assert_eq!(w.verdict, WitnessVerdict::Inconclusive);
    }

    #[test]
    fn k5_witness_is_not_arrowing() {
        let k5 = Graph::complete(5).unwrap();
        let w = folkman_witness_check(&k5, &[3, 3], 6, Method::Search, Budget::UNLIMITED).unwrap();
        assert_eq!(w.verdict, WitnessVerdict::Fails);
        assert!(matches!(
            w.arrowing.unwrap().verdict,
            ArrowsVerdict::NotArrows(_)
        ));
    }
}
