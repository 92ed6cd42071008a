//! Test corpus and brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use folkman::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every labelled graph on 1..=5 vertices, then 200 random 6-vertex graphs
/// (edge probability 1/2, fixed seed).
pub fn corpus() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=5 {
        let pairs = all_pairs(n);
        for mask in 0u32..(1 << pairs.len()) {
            out.push(graph_from_mask(n, &pairs, mask as u64));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f01c);
    let pairs = all_pairs(6);
    for _ in 0..200 {
        let mask: u64 = rng.gen_range(0..1u64 << pairs.len());
        out.push(graph_from_mask(6, &pairs, mask));
    }
    out
}

pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

pub fn graph_from_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> Graph {
    let edges = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e);
    Graph::from_edges(n, edges).unwrap()
}

/// Vertex subsets of size `k` that are cliques, found by scanning all
/// subsets. Returned as edge-index lists.
pub fn clique_edge_sets(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let mut edges = Vec::new();
        let mut ok = true;
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                match g.edges().iter().position(|&e| e == (u, v)) {
                    Some(e) => edges.push(e),
                    None => ok = false,
                }
            }
        }
        if ok {
            out.push(edges);
        }
    }
    out
}

/// Plain enumeration of all r^m colorings: the graph arrows iff none of
/// them avoids every monochromatic target clique.
pub fn brute_force_arrows(g: &Graph, targets: &[usize]) -> bool {
    let r = targets.len();
    let m = g.m();
    let cliques: Vec<Vec<Vec<usize>>> = targets.iter().map(|&a| clique_edge_sets(g, a)).collect();
    let mut colors = vec![0usize; m];
    loop {
        let good = (0..r).all(|i| cliques[i].iter().all(|q| q.iter().any(|&e| colors[e] != i)));
        if good {
            return false;
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == m {
                return true;
            }
            colors[pos] += 1;
            if colors[pos] < r {
                break;
            }
            colors[pos] = 0;
            pos += 1;
        }
    }
}

/// Nodes of the full r-ary tree over m edges: what plain enumeration visits.
pub fn plain_tree_nodes(r: usize, m: usize) -> u64 {
    (0..=m as u32).map(|d| (r as u64).pow(d)).sum()
}

/// Satisfying assignments of a CNF as a bitmap over all 2^n assignments
/// (bit `a` set iff assignment `a` satisfies every clause, where variable
/// `i` takes bit `i - 1` of `a`).
pub fn truth_table(num_vars: usize, clauses: &[Vec<i32>]) -> Vec<u64> {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let total = 1u64 << num_vars;
    let words = total.div_ceil(64) as usize;
    let tail = if total < 64 {
        (1u64 << total) - 1
    } else {
        u64::MAX
    };
    let var_true = |var: usize, w: usize| -> u64 {
        if var < 6 {
            LOW[var]
        } else if (w >> (var - 6)) & 1 == 1 {
            u64::MAX
        } else {
            0
        }
    };
    let mut sat = vec![tail; words];
    for clause in clauses {
        for (w, word) in sat.iter_mut().enumerate() {
            let mut falsified = u64::MAX;
            for &lit in clause {
                let t = var_true(lit.unsigned_abs() as usize - 1, w);
                falsified &= if lit > 0 { !t } else { t };
            }
            *word &= !falsified;
        }
    }
    sat
}

pub fn table_has(table: &[u64], assignment: u64) -> bool {
    table[(assignment / 64) as usize] >> (assignment % 64) & 1 == 1
}

/// Random CNFs with 1..=20 variables and clause/variable ratios around the
/// 3-SAT threshold, so both verdicts are common.
pub fn random_cnfs(count: usize, seed: u64) -> Vec<(usize, Vec<Vec<i32>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=20usize);
            let ratio = rng.gen_range(2.0..6.5);
            let m = ((n as f64) * ratio).round() as usize;
            let clauses = (0..m)
                .map(|_| {
                    // mostly 3-literal clauses, with some units, binaries and 4-clauses
                    let width = [1, 2, 3, 3, 3, 3, 4][rng.gen_range(0..7)].min(n);
                    let mut vars: Vec<i32> = Vec::with_capacity(width);
                    while vars.len() < width {
                        let v = rng.gen_range(1..=n as i32);
                        if !vars.contains(&v) {
                            vars.push(v);
                        }
                    }
                    vars.into_iter()
                        .map(|v| if rng.gen_bool(0.5) { v } else { -v })
                        .collect()
                })
                .collect();
            (n, clauses)
        })
        .collect()
}
