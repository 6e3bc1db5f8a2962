//! Named graph families and exhaustive small-graph catalogues (one
//! representative per isomorphism class).

use std::collections::BTreeSet;

use crate::graph::Graph;

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    named(n, &edges, |i| (i + 1).to_string())
}

/// `K_{m,n}`. For `K_{3,3}` the sides are named `a b c` and `a' b' c'`.
pub fn complete_bipartite(m: usize, n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..m {
        for v in 0..n {
            edges.push((u, m + v));
        }
    }
    let letters = |i: usize| ((b'a' + (i % 26) as u8) as char).to_string();
    named(m + n, &edges, |i| {
        if i < m {
            letters(i)
        } else {
            format!("{}'", letters(i - m))
        }
    })
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    named(n, &edges, |i| (i + 1).to_string())
}

pub fn cycle(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    if n >= 3 {
        edges.push((n - 1, 0));
    }
    named(n, &edges, |i| (i + 1).to_string())
}

pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    named(leaves + 1, &edges, |i| i.to_string())
}

pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    named(rows * cols, &edges, |i| format!("{}_{}", i / cols, i % cols))
}

fn named(n: usize, edges: &[(usize, usize)], name: impl Fn(usize) -> String) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(&name(i));
    }
    for &(u, v) in edges {
        g.add_edge(u, v).expect("valid edge");
    }
    g
}

/// Simple graph on at most 8 vertices as an adjacency bitmask over pairs.
fn pair_bit(n: usize, u: usize, v: usize) -> u32 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    // index of (a, b) in the row-major upper triangle
    (a * (2 * n - a - 1) / 2 + (b - a - 1)) as u32
}

fn mask_of(n: usize, edges: &[(usize, usize)]) -> u64 {
    edges
        .iter()
        .fold(0u64, |m, &(u, v)| m | 1 << pair_bit(n, u, v))
}

fn edges_of(n: usize, mask: u64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if mask >> pair_bit(n, u, v) & 1 == 1 {
                out.push((u, v));
            }
        }
    }
    out
}

/// Canonical bitmask: minimum over vertex relabelings that respect an
/// iteratively refined degree partition.
fn canonical_mask(n: usize, mask: u64) -> u64 {
    let edges = edges_of(n, mask);
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut color: Vec<usize> = (0..n).map(|v| adj[v].len()).collect();
    for _ in 0..n {
        let sig: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut s: Vec<usize> = adj[v].iter().map(|&w| color[w]).collect();
                s.sort_unstable();
                (color[v], s)
            })
            .collect();
        let distinct: BTreeSet<_> = sig.iter().cloned().collect();
        let ranked: Vec<_> = distinct.into_iter().collect();
        let next: Vec<usize> = sig
            .iter()
            .map(|s| ranked.binary_search(s).expect("present"))
            .collect();
        let before = color.iter().collect::<BTreeSet<_>>().len();
        color = next;
        if color.iter().collect::<BTreeSet<_>>().len() == before {
            break;
        }
    }
    // vertices grouped by colour; new labels are assigned class by class
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| color[v]);
    for v in order {
        match classes.last_mut() {
            Some(c) if color[c[0]] == color[v] => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut perm = vec![0usize; n];
    permute_classes(&classes, 0, &mut Vec::new(), &mut perm, &edges, n, &mut best);
    best
}

fn permute_classes(
    classes: &[Vec<usize>],
    ci: usize,
    placed: &mut Vec<usize>,
    perm: &mut [usize],
    edges: &[(usize, usize)],
    n: usize,
    best: &mut u64,
) {
    if ci == classes.len() {
        for (new, &old) in placed.iter().enumerate() {
            perm[old] = new;
        }
        let m = edges
            .iter()
            .fold(0u64, |m, &(u, v)| m | 1 << pair_bit(n, perm[u], perm[v]));
        *best = (*best).min(m);
        return;
    }
    let class = &classes[ci];
    let start = placed.len();
    let mut items = class.clone();
    heap_permutations(&mut items, class.len(), &mut |p| {
        placed.truncate(start);
        placed.extend_from_slice(p);
        permute_classes(classes, ci + 1, placed, perm, edges, n, best);
    });
    placed.truncate(start);
}

fn heap_permutations(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        f(items);
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, f);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

fn is_connected_mask(n: usize, mask: u64) -> bool {
    if n == 0 {
        return true;
    }
    let edges = edges_of(n, mask);
    let mut seen = 1u32;
    loop {
        let before = seen;
        for &(u, v) in &edges {
            if seen >> u & 1 == 1 || seen >> v & 1 == 1 {
                seen |= 1 << u | 1 << v;
            }
        }
        if seen == before {
            break;
        }
    }
    seen.count_ones() as usize == n
}

fn to_graph(n: usize, mask: u64) -> Graph {
    Graph::from_edges(n, &edges_of(n, mask)).expect("simple graph")
}

/// All simple graphs on `n <= 6` vertices up to isomorphism.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 6, "exhaustive catalogue limited to 6 vertices");
    let pairs = n * n.saturating_sub(1) / 2;
    let mut seen = BTreeSet::new();
    for mask in 0..(1u64 << pairs) {
        seen.insert(canonical_mask(n, mask));
    }
    seen.into_iter().map(|m| to_graph(n, m)).collect()
}

/// All connected simple graphs on `n <= 7` vertices up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "exhaustive catalogue limited to 7 vertices");
    if n <= 6 {
        let pairs = n * n.saturating_sub(1) / 2;
        let mut seen = BTreeSet::new();
        for mask in 0..(1u64 << pairs) {
            if is_connected_mask(n, mask) {
                seen.insert(canonical_mask(n, mask));
            }
        }
        return seen.into_iter().map(|m| to_graph(n, m)).collect();
    }
    // every connected graph has a vertex whose removal keeps it connected
    let mut seen = BTreeSet::new();
    for base in connected_graphs(n - 1) {
        let mut edges: Vec<(usize, usize)> = base.edges().to_vec();
        let k = edges.len();
        for subset in 1u32..(1 << (n - 1)) {
            edges.truncate(k);
            edges.extend((0..n - 1).filter(|v| subset >> v & 1 == 1).map(|v| (v, n - 1)));
            seen.insert(canonical_mask(n, mask_of(n, &edges)));
        }
    }
    seen.into_iter().map(|m| to_graph(n, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_sizes_match_known_counts() {
        let all: Vec<usize> = (0..=5).map(|n| all_graphs(n).len()).collect();
        assert_eq!(all, vec![1, 1, 2, 4, 11, 34]);
        let conn: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(conn, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn families() {
        assert_eq!(complete(6).edge_count(), 15);
        let k33 = complete_bipartite(3, 3);
        assert_eq!(k33.name(3), "a'");
        assert_eq!(grid(3, 3).edge_count(), 12);
        assert_eq!(cycle(6).edge_count(), 6);
        assert_eq!(star(4).degree(0), 4);
    }
}
