use super::{Graph, VertexSet};

/// Maximum clique by branch and bound. Vertices are relabelled so that bit
/// order follows reverse degeneracy order, and each node bounds its subtree by
/// a greedy coloring of the candidate set.
pub(super) fn clique_number(g: &Graph) -> usize {
    if g.n() == 0 {
        return 0;
    }
    let order = degeneracy_order(g);
    // position in the relabelled graph: last-removed vertex first
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().rev().enumerate() {
        pos[v] = i;
    }
    let mut adj = vec![VertexSet::new(); g.n()];
    for v in 0..g.n() {
        adj[pos[v]] = g.adjacency()[v].iter().map(|u| pos[u]).collect();
    }
    let mut best = 1;
    expand(&adj, VertexSet::full(g.n()), 0, &mut best, usize::MAX);
    best
}

/// Repeatedly removes a minimum-degree vertex; returns the removal order.
fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let mut alive = g.vertices();
    let mut order = Vec::with_capacity(g.n());
    while !alive.is_empty() {
        let v = alive
            .iter()
            .min_by_key(|&v| (g.adjacency()[v].intersection(&alive).len(), v))
            .expect("non-empty");
        alive.remove(v);
        order.push(v);
    }
    order
}

/// Greedy sequential coloring of `cand`; returns vertices with their color
/// numbers, in non-decreasing color order.
fn color_sort(adj: &[VertexSet], cand: VertexSet) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(cand.len());
    let mut uncolored = cand;
    let mut color = 0;
    while !uncolored.is_empty() {
        color += 1;
        let mut q = uncolored;
        while let Some(v) = q.first() {
            q.remove(v);
            q = q.difference(&adj[v]);
            uncolored.remove(v);
            out.push((v, color));
        }
    }
    out
}

/// Returns `true` as soon as `stop_at` is reached.
fn expand(
    adj: &[VertexSet],
    mut cand: VertexSet,
    size: usize,
    best: &mut usize,
    stop_at: usize,
) -> bool {
    let colored = color_sort(adj, cand);
    for &(v, color) in colored.iter().rev() {
        if size + color <= *best {
            return false;
        }
        let next = cand.intersection(&adj[v]);
        if next.is_empty() {
            if size + 1 > *best {
                *best = size + 1;
                if *best >= stop_at {
                    return true;
                }
            }
        } else if expand(adj, next, size + 1, best, stop_at) {
            return true;
        }
        cand.remove(v);
    }
    false
}

/// Whether the graph given by `adj` has a clique of size `k` inside `cand`.
pub fn has_clique_within(adj: &[VertexSet], cand: &VertexSet, k: usize) -> bool {
    match k {
        0 => true,
        1 => !cand.is_empty(),
        2 => cand.iter().any(|v| adj[v].intersects(cand)),
        _ => {
            if cand.len() < k {
                return false;
            }
            let mut best = 0;
            expand(adj, *cand, 0, &mut best, k)
        }
    }
}

pub(super) fn enumerate(g: &Graph, k: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    walk(g.adjacency(), VertexSet::new(), g.vertices(), k, &mut |c| {
        out.push(c);
        true
    });
    out
}

pub(super) fn first(g: &Graph, k: usize) -> Option<VertexSet> {
    if k == 0 {
        return None;
    }
    let mut found = None;
    walk(g.adjacency(), VertexSet::new(), g.vertices(), k, &mut |c| {
        found = Some(c);
        false
    });
    found
}

/// Depth-first clique extension in ascending vertex order, which yields
/// cliques in lexicographic order. The visitor returns `false` to stop.
fn walk<F>(
    adj: &[VertexSet],
    current: VertexSet,
    cand: VertexSet,
    remaining: usize,
    visit: &mut F,
) -> bool
where
    F: FnMut(VertexSet) -> bool,
{
    if remaining == 0 {
        return visit(current);
    }
    if cand.len() < remaining {
        return true;
    }
    for v in cand.iter() {
        let mut next = current;
        next.insert(v);
        if !walk(
            adj,
            next,
            cand.intersection(&adj[v]).above(v),
            remaining - 1,
            visit,
        ) {
            return false;
        }
    }
    true
}
