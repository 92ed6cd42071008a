//! Depth-first search for a good coloring.
//!
//! Edges are colored one at a time in a fixed order. A branch dies as soon as
//! the edge just colored closes a monochromatic target clique; only cliques
//! through that edge need checking, since everything else was checked when its
//! own last edge was colored. Colors that share a target are interchangeable,
//! so color `j` of such a group is tried only once color `j - 1` of the same
//! group already occurs in the partial coloring.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{ArrowingProblem, EdgeColoring};
use crate::graph::{has_clique_within, Graph, VertexSet};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EdgeOrdering {
    /// Descending number of target-size cliques through the edge, ties by
    /// edge index.
    #[default]
    MostConstrained,
    Lexicographic,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub ordering: EdgeOrdering,
    pub symmetry_breaking: bool,
    /// Rejects a branch once some color-`i` neighborhood `N_i(v)` spans a
    /// clique large enough to force a monochromatic triangle in the other
    /// colors. Only used when every target is 3 and there are at most three
    /// colors.
    pub neighborhood_pruning: bool,
    /// Split the tree at this many colored edges and search the subtrees on
    /// the rayon pool.
    pub parallel_depth: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_limit: None,
            time_limit: None,
            ordering: EdgeOrdering::MostConstrained,
            symmetry_breaking: true,
            neighborhood_pruning: false,
            parallel_depth: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Good(EdgeColoring),
    NoGoodColoring,
    BudgetExhausted { nodes: u64 },
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    /// Search-tree nodes expanded (partial colorings extended by one edge).
    pub nodes: u64,
    pub elapsed: Duration,
}

pub fn find_good_coloring(p: &ArrowingProblem, config: &SearchConfig) -> SearchResult {
    let start = Instant::now();
    let order = edge_order(p, config.ordering);
    let shared = Shared {
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        node_limit: config.node_limit,
        deadline: config.time_limit.map(|t| start + t),
    };
    let outcome = match config.parallel_depth {
        Some(depth) if depth > 0 && depth < order.len() => {
            parallel(p, config, &order, depth, &shared)
        }
        _ => {
            let mut s = Searcher::new(p, config, &order, &shared);
            let flow = s.dfs(0);
            s.flush();
            match flow {
                Flow::Found => SearchOutcome::Good(s.coloring()),
                Flow::Exhausted => SearchOutcome::NoGoodColoring,
                Flow::Aborted => SearchOutcome::BudgetExhausted {
                    nodes: shared.nodes.load(Ordering::Relaxed),
                },
            }
        }
    };
    SearchResult {
        outcome,
        nodes: shared.nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    }
}

fn parallel(
    p: &ArrowingProblem,
    config: &SearchConfig,
    order: &[usize],
    depth: usize,
    shared: &Shared,
) -> SearchOutcome {
    let mut prefixes = Vec::new();
    {
        let mut s = Searcher::new(p, config, order, shared);
        s.collect_prefixes(0, depth, &mut prefixes);
        s.flush();
    }
    // find_map_first keeps the answer from the smallest prefix that succeeds
    let found = prefixes.par_iter().find_map_first(|prefix| {
        let mut s = Searcher::new(p, config, order, shared);
        for (pos, &c) in prefix.iter().enumerate() {
            s.assign(order[pos], c);
        }
        let flow = s.dfs(depth);
        s.flush();
        match flow {
            Flow::Found => Some(s.coloring()),
            Flow::Aborted => {
                shared.aborted.store(true, Ordering::Relaxed);
                None
            }
            Flow::Exhausted => None,
        }
    });
    match found {
        Some(c) => SearchOutcome::Good(c),
        None if shared.aborted.load(Ordering::Relaxed) => SearchOutcome::BudgetExhausted {
            nodes: shared.nodes.load(Ordering::Relaxed),
        },
        None => SearchOutcome::NoGoodColoring,
    }
}

/// Edge indices in the order they are colored.
pub(crate) fn edge_order(p: &ArrowingProblem, ordering: EdgeOrdering) -> Vec<usize> {
    let g = p.graph();
    let mut order: Vec<usize> = (0..g.m()).collect();
    if ordering == EdgeOrdering::MostConstrained {
        let mut weight = vec![0u64; g.m()];
        let mut sizes = p.targets().to_vec();
        sizes.sort_unstable();
        sizes.dedup();
        for k in sizes {
            for clique in g.enumerate_cliques(k) {
                let members = clique.to_vec();
                for (i, &u) in members.iter().enumerate() {
                    for &v in &members[i + 1..] {
                        weight[g.edge_index(u, v).expect("clique edge")] += 1;
                    }
                }
            }
        }
        order.sort_by_key(|&e| std::cmp::Reverse(weight[e]));
    }
    order
}

struct Shared {
    nodes: AtomicU64,
    aborted: AtomicBool,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Flow {
    Found,
    Exhausted,
    Aborted,
}

const FLUSH_EVERY: u64 = 256;

struct Searcher<'a> {
    graph: &'a Graph,
    targets: &'a [usize],
    order: &'a [usize],
    shared: &'a Shared,
    prev_in_group: Vec<Option<usize>>,
    symmetry_breaking: bool,
    /// Clique size inside `N_i(v)` that forces a monochromatic triangle.
    forcing_clique: Option<usize>,
    /// `mono[c][v]`: neighbors of `v` along edges already given color `c`.
    mono: Vec<Vec<VertexSet>>,
    colors: Vec<u8>,
    used: Vec<u32>,
    pending: u64,
}

impl<'a> Searcher<'a> {
    fn new(
        p: &'a ArrowingProblem,
        config: &SearchConfig,
        order: &'a [usize],
        shared: &'a Shared,
    ) -> Self {
        let r = p.colors();
        let forcing_clique = if config.neighborhood_pruning && p.targets().iter().all(|&a| a == 3) {
            // smallest complete graph arrowing triangles in r - 1 colors
            match r {
                1 => Some(2),
                2 => Some(3),
                3 => Some(6),
                _ => None,
            }
        } else {
            None
        };
        Searcher {
            graph: p.graph(),
            targets: p.targets(),
            order,
            shared,
            prev_in_group: p.previous_in_group(),
            symmetry_breaking: config.symmetry_breaking,
            forcing_clique,
            mono: vec![vec![VertexSet::new(); p.graph().n()]; r],
            colors: vec![0; p.graph().m()],
            used: vec![0; r],
            pending: 0,
        }
    }

    fn coloring(&self) -> EdgeColoring {
        EdgeColoring::new(self.colors.iter().map(|&c| c + 1).collect())
    }

    fn flush(&mut self) {
        self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed);
        self.pending = 0;
    }

    /// Counts one node; returns `false` when the budget is spent.
    fn tick(&mut self) -> bool {
        self.pending += 1;
        if !self.budget_left() {
            return false;
        }
        if self.pending < FLUSH_EVERY {
            return true;
        }
        self.flush();
        !self.shared.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn budget_left(&self) -> bool {
        let total = self.shared.nodes.load(Ordering::Relaxed) + self.pending;
        !self.shared.node_limit.is_some_and(|limit| total > limit)
    }

    #[inline]
    fn allowed(&self, c: usize) -> bool {
        !self.symmetry_breaking || self.prev_in_group[c].is_none_or(|d| self.used[d] > 0)
    }

    /// Whether coloring `{u, v}` with `c` would close a monochromatic
    /// `targets[c]`-clique.
    fn closes_clique(&self, c: usize, u: usize, v: usize) -> bool {
        let a = self.targets[c];
        if a > self.graph.n() {
            return false;
        }
        let common = self.mono[c][u].intersection(&self.mono[c][v]);
        has_clique_within(&self.mono[c], &common, a - 2)
    }

    fn neighborhood_forces_triangle(&self, c: usize, u: usize, v: usize) -> bool {
        let Some(k) = self.forcing_clique else {
            return false;
        };
        [u, v]
            .into_iter()
            .any(|x| has_clique_within(self.graph.adjacency(), &self.mono[c][x], k))
    }

    fn assign(&mut self, e: usize, c: usize) {
        let (u, v) = self.graph.edges()[e];
        self.mono[c][u].insert(v);
        self.mono[c][v].insert(u);
        self.colors[e] = c as u8;
        self.used[c] += 1;
    }

    fn unassign(&mut self, e: usize, c: usize) {
        let (u, v) = self.graph.edges()[e];
        self.mono[c][u].remove(v);
        self.mono[c][v].remove(u);
        self.used[c] -= 1;
    }

    fn dfs(&mut self, pos: usize) -> Flow {
        if pos == self.order.len() {
            return Flow::Found;
        }
        if !self.tick() {
            return Flow::Aborted;
        }
        let e = self.order[pos];
        let (u, v) = self.graph.edges()[e];
        for c in 0..self.targets.len() {
            if !self.allowed(c) || self.closes_clique(c, u, v) {
                continue;
            }
            self.assign(e, c);
            if !self.neighborhood_forces_triangle(c, u, v) {
                match self.dfs(pos + 1) {
                    Flow::Found => return Flow::Found,
                    Flow::Aborted => {
                        self.unassign(e, c);
                        return Flow::Aborted;
                    }
                    Flow::Exhausted => {}
                }
            }
            self.unassign(e, c);
        }
        Flow::Exhausted
    }

    /// Valid partial colorings of the first `depth` edges, in the order the
    /// sequential search would visit them.
    fn collect_prefixes(&mut self, pos: usize, depth: usize, out: &mut Vec<Vec<usize>>) {
        if pos == depth {
            out.push(
                self.order[..depth]
                    .iter()
                    .map(|&e| self.colors[e] as usize)
                    .collect(),
            );
            return;
        }
        self.pending += 1;
        let e = self.order[pos];
        let (u, v) = self.graph.edges()[e];
        for c in 0..self.targets.len() {
            if !self.allowed(c) || self.closes_clique(c, u, v) {
                continue;
            }
            self.assign(e, c);
            if !self.neighborhood_forces_triangle(c, u, v) && self.budget_left() {
                self.collect_prefixes(pos + 1, depth, out);
            }
            self.unassign(e, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrowing::check_coloring;
    use crate::constructions::parse_expression;

    fn problem(expr: &str, targets: &[usize]) -> ArrowingProblem {
        ArrowingProblem::new(parse_expression(expr).unwrap().graph, targets.to_vec()).unwrap()
    }

    fn outcome(p: &ArrowingProblem, config: &SearchConfig) -> SearchOutcome {
        find_good_coloring(p, config).outcome
    }

    #[test]
    fn k6_has_no_good_coloring() {
        assert_eq!(
            outcome(&problem("K6", &[3, 3]), &SearchConfig::default()),
            SearchOutcome::NoGoodColoring
        );
    }

    #[test]
    fn k5_good_coloring_is_pentagonal() {
        let p = problem("K5", &[3, 3]);
        let SearchOutcome::Good(c) = outcome(&p, &SearchConfig::default()) else {
            panic!()
        };
        assert_eq!(check_coloring(&p, &c).unwrap(), None);
        // both color classes of a good 2-coloring of K5 are 5-cycles
        for color in [1, 2] {
            let class = c.color_class(p.graph(), color);
            assert!(class.iter().all(|row| row.len() == 2));
        }
    }

    #[test]
    fn k2_any_color_is_good() {
        let p = problem("K2", &[3, 3]);
        let SearchOutcome::Good(c) = outcome(&p, &SearchConfig::default()) else {
            panic!()
        };
        assert_eq!(c.colors(), &[1]);
    }

    #[test]
    fn empty_graph_is_trivially_good() {
        let p = ArrowingProblem::new(Graph::empty(3).unwrap(), vec![3, 3]).unwrap();
        assert_eq!(
            outcome(&p, &SearchConfig::default()),
            SearchOutcome::Good(EdgeColoring::new(vec![]))
        );
    }

    #[test]
    fn target_two_forbids_the_color() {
        // (2, 3): color 1 may not be used at all, so K3 arrows
        assert_eq!(
            outcome(&problem("K3", &[2, 3]), &SearchConfig::default()),
            SearchOutcome::NoGoodColoring
        );
        assert_eq!(
            outcome(&problem("K3", &[3, 2]), &SearchConfig::default()),
            SearchOutcome::NoGoodColoring
        );
        assert!(matches!(
            outcome(&problem("K2", &[3, 2]), &SearchConfig::default()),
            SearchOutcome::Good(_)
        ));
        assert!(matches!(
            outcome(&problem("C5", &[2, 3]), &SearchConfig::default()),
            SearchOutcome::Good(_)
        ));
    }

    #[test]
    fn mixed_targets() {
        // R(3,4) = 9
        assert!(matches!(
            outcome(&problem("K8", &[3, 4]), &SearchConfig::default()),
            SearchOutcome::Good(_)
        ));
        assert_eq!(
            outcome(&problem("K9", &[4, 3]), &SearchConfig::default()),
            SearchOutcome::NoGoodColoring
        );
    }

    #[test]
    fn node_budget_is_reported() {
        let p = problem("K3+C5", &[3, 3]);
        let config = SearchConfig {
            node_limit: Some(10),
            ..SearchConfig::default()
        };
        let res = find_good_coloring(&p, &config);
        assert!(matches!(res.outcome, SearchOutcome::BudgetExhausted { nodes } if nodes > 10));
    }

    #[test]
    fn neighborhood_pruning_keeps_verdicts() {
        let config = SearchConfig {
            neighborhood_pruning: true,
            ..SearchConfig::default()
        };
        for (expr, targets, arrows) in [
            ("K6", vec![3, 3], true),
            ("K5", vec![3, 3], false),
            ("K3+C5", vec![3, 3], true),
            // clique number 4 on 10 vertices, below F_e(3,3;5) = 15
            ("C5+C5", vec![3, 3], false),
            ("K16", vec![3, 3, 3], false),
        ] {
            if targets.len() == 3 {
                // K16 is left to the SAT route; just check the prune is wired for r = 3
                let (p, shared) = (problem(expr, &targets), dummy_shared());
                let s = Searcher::new(&p, &config, &[], &shared);
                assert_eq!(s.forcing_clique, Some(6));
                continue;
            }
            let p = problem(expr, &targets);
            let got = outcome(&p, &config);
            assert_eq!(got == SearchOutcome::NoGoodColoring, arrows, "{expr}");
            let plain = find_good_coloring(&p, &SearchConfig::default());
            assert!(
                find_good_coloring(&p, &config).nodes <= plain.nodes,
                "{expr}"
            );
        }
    }

    fn dummy_shared() -> Shared {
        Shared {
            nodes: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
            node_limit: None,
            deadline: None,
        }
    }

    #[test]
    fn parallel_split_matches_sequential() {
        for (expr, targets) in [
            ("K5", vec![3, 3]),
            ("K8", vec![3, 4]),
            ("K3+C5", vec![3, 3]),
            ("C5+C5", vec![3, 3, 3]),
        ] {
            let p = problem(expr, &targets);
            let seq = outcome(&p, &SearchConfig::default());
            for depth in [1, 3, 6] {
                let config = SearchConfig {
                    parallel_depth: Some(depth),
                    ..SearchConfig::default()
                };
                assert_eq!(outcome(&p, &config), seq, "{expr} depth {depth}");
            }
        }
    }

    #[test]
    fn lexicographic_ordering_agrees() {
        let config = SearchConfig {
            ordering: EdgeOrdering::Lexicographic,
            ..SearchConfig::default()
        };
        assert_eq!(
            outcome(&problem("K6", &[3, 3]), &config),
            SearchOutcome::NoGoodColoring
        );
        assert_eq!(
            outcome(&problem("K3+C5", &[3, 3]), &config),
            SearchOutcome::NoGoodColoring
        );
        assert!(matches!(
            outcome(&problem("K5", &[3, 3]), &config),
            SearchOutcome::Good(_)
        ));
    }

    #[test]
    fn most_constrained_puts_clique_edges_first() {
        let p = problem("K3+C5", &[3, 3]);
        let order = edge_order(&p, EdgeOrdering::MostConstrained);
        let (u, v) = p.graph().edges()[order[0]];
        assert!(u < 3 && v < 3);
        let (u, v) = p.graph().edges()[*order.last().unwrap()];
        assert!(u >= 3 && v >= 3);
    }
}
