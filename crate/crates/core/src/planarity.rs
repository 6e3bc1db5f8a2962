//! Planarity testing by path addition (Demoucron, Malgrange, Pertuiset)
//! on each biconnected block, with planar rotation systems as witnesses.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::Graph;

/// Kuratowski subgraph found inside a non-planar graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kuratowski {
    pub kind: KuratowskiKind,
    /// Edge ids of the subdivision.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KuratowskiKind {
    K5,
    K33,
}

pub fn is_planar(g: &Graph) -> bool {
    planar_rotation(g).is_some()
}

/// Outerplanar iff adding a universal vertex keeps the graph planar.
pub fn is_outerplanar(g: &Graph) -> bool {
    is_planar(&g.with_apex())
}

/// Cyclic neighbour order around every vertex of a planar embedding of
/// the underlying simple graph, or `None` when `g` is not planar.
pub fn planar_rotation(g: &Graph) -> Option<Vec<Vec<usize>>> {
    let simple = g.simplified();
    let n = simple.vertex_count();
    let m = simple.edge_count();
    if n >= 3 && m > 3 * n - 6 {
        return None;
    }
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); n];
    for block in biconnected_blocks(&simple) {
        let block_rot = embed_block(&simple, &block)?;
        for (v, order) in block_rot {
            rotation[v].extend(order);
        }
    }
    Some(rotation)
}

/// Edge-minimal non-planar subgraph classified as a K5 or K3,3 subdivision.
pub fn kuratowski_witness(g: &Graph) -> Option<Kuratowski> {
    let simple = g.simplified();
    if is_planar(&simple) {
        return None;
    }
    let mut keep: Vec<usize> = (0..simple.edge_count()).collect();
    let mut i = 0;
    while i < keep.len() {
        let mut trial = keep.clone();
        trial.remove(i);
        if is_planar(&simple.edge_subgraph(&trial)) {
            i += 1;
        } else {
            keep = trial;
        }
    }
    let sub = simple.edge_subgraph(&keep);
    let branch: Vec<usize> = (0..sub.vertex_count())
        .filter(|&v| sub.degree(v) >= 3)
        .collect();
    let kind = if branch.len() == 5 && branch.iter().all(|&v| sub.degree(v) == 4) {
        KuratowskiKind::K5
    } else {
        KuratowskiKind::K33
    };
    // map back to the caller's edge ids
    let edges = keep
        .iter()
        .map(|&e| {
            let (u, v) = simple.edge(e);
            g.edges_between(u, v)[0]
        })
        .collect();
    Some(Kuratowski { kind, edges })
}

/// Edge sets of the biconnected blocks (parallel edges stay together).
pub(crate) fn biconnected_blocks(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut blocks = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // iterative DFS: (vertex, parent edge, next incidence index)
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(top) = frames.len().checked_sub(1) {
            let (v, pe, idx) = frames[top];
            if idx < g.incident(v).len() {
                let e = g.incident(v)[idx];
                frames[top].2 += 1;
                if e == pe {
                    continue;
                }
                let w = g.other(e, v);
                if disc[w] == usize::MAX {
                    stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = stack.pop() {
                            block.push(e);
                            if e == pe {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Embeds one block; returns per-vertex rotation fragments.
fn embed_block(g: &Graph, block: &[usize]) -> Option<Vec<(usize, Vec<usize>)>> {
    if block.len() == 1 {
        let (u, v) = g.edge(block[0]);
        return Some(vec![(u, vec![v]), (v, vec![u])]);
    }
    let mut verts: BTreeSet<usize> = BTreeSet::new();
    for &e in block {
        let (u, v) = g.edge(e);
        verts.insert(u);
        verts.insert(v);
    }
    let verts: Vec<usize> = verts.into_iter().collect();
    let local = |v: usize| verts.binary_search(&v).expect("block vertex");
    let bn = verts.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); bn];
    let mut edges = Vec::with_capacity(block.len());
    for &e in block {
        let (u, v) = g.edge(e);
        let (a, b) = (local(u), local(v));
        adj[a].push(edges.len());
        adj[b].push(edges.len());
        edges.push((a, b));
    }
    let faces = dmp(bn, &edges, &adj)?;
    let mut succ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); bn];
    for f in &faces {
        let l = f.len();
        for i in 0..l {
            let (u, v, w) = (f[i], f[(i + 1) % l], f[(i + 2) % l]);
            succ[v].push((u, w));
        }
    }
    let mut out = Vec::with_capacity(bn);
    for v in 0..bn {
        let start = succ[v][0].0;
        let mut order = vec![verts[start]];
        let mut cur = start;
        loop {
            let next = succ[v].iter().find(|&&(a, _)| a == cur).expect("rotation").1;
            if next == start {
                break;
            }
            order.push(verts[next]);
            cur = next;
        }
        out.push((verts[v], order));
    }
    Some(out)
}

/// Path-addition on a biconnected simple graph. Returns consistently
/// oriented facial cycles, or `None` if some fragment has no admissible face.
fn dmp(n: usize, edges: &[(usize, usize)], adj: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    let other = |e: usize, v: usize| {
        let (a, b) = edges[e];
        if a == v {
            b
        } else {
            a
        }
    };
    let cycle = find_cycle(n, edges, adj)?;
    let mut in_h = vec![false; n];
    let mut edge_in = vec![false; edges.len()];
    for i in 0..cycle.len() {
        let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        in_h[u] = true;
        let e = adj[u].iter().copied().find(|&e| other(e, u) == v)?;
        edge_in[e] = true;
    }
    let mut faces = vec![cycle.clone(), cycle.iter().rev().copied().collect::<Vec<_>>()];
    let mut remaining = edges.len() - cycle.len();
    while remaining > 0 {
        let fragments = fragments(n, edges, adj, &in_h, &edge_in);
        let mut chosen: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| frag.attachments.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    chosen = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if chosen.is_none() {
                        chosen = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = chosen.expect("fragment exists");
        let frag = &fragments[fi];
        let path = fragment_path(frag, edges, adj, &in_h, &edge_in);
        for w in path.windows(2) {
            let e = adj[w[0]]
                .iter()
                .copied()
                .find(|&e| !edge_in[e] && other(e, w[0]) == w[1])
                .expect("path edge");
            edge_in[e] = true;
            remaining -= 1;
        }
        for &v in &path {
            in_h[v] = true;
        }
        let face = faces.swap_remove(face_idx);
        let (a, b) = (path[0], *path.last().expect("non-empty"));
        let i = face.iter().position(|&x| x == a).expect("attachment");
        let j = face.iter().position(|&x| x == b).expect("attachment");
        let l = face.len();
        let mut f1 = Vec::new();
        let mut k = i;
        loop {
            f1.push(face[k]);
            if k == j {
                break;
            }
            k = (k + 1) % l;
        }
        f1.extend(path[1..path.len() - 1].iter().rev());
        let mut f2 = Vec::new();
        let mut k = j;
        loop {
            f2.push(face[k]);
            if k == i {
                break;
            }
            k = (k + 1) % l;
        }
        f2.extend(path[1..path.len() - 1].iter());
        faces.push(f1);
        faces.push(f2);
    }
    Some(faces)
}

struct Fragment {
    /// Internal (not yet embedded) vertices; empty for a single chord edge.
    inner: Vec<usize>,
    edge: Option<usize>,
    attachments: Vec<usize>,
}

fn fragments(
    n: usize,
    edges: &[(usize, usize)],
    adj: &[Vec<usize>],
    in_h: &[bool],
    edge_in: &[bool],
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (e, &(u, v)) in edges.iter().enumerate() {
        if !edge_in[e] && in_h[u] && in_h[v] {
            out.push(Fragment {
                inner: Vec::new(),
                edge: Some(e),
                attachments: vec![u, v],
            });
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if in_h[s] || seen[s] || adj[s].is_empty() {
            continue;
        }
        seen[s] = true;
        let mut inner = vec![s];
        let mut att = BTreeSet::new();
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &adj[v] {
                let (a, b) = edges[e];
                let w = if a == v { b } else { a };
                if in_h[w] {
                    att.insert(w);
                } else if !seen[w] {
                    seen[w] = true;
                    inner.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.push(Fragment {
            inner,
            edge: None,
            attachments: att.into_iter().collect(),
        });
    }
    out
}

/// A path through the fragment joining two distinct attachments.
fn fragment_path(
    frag: &Fragment,
    edges: &[(usize, usize)],
    adj: &[Vec<usize>],
    in_h: &[bool],
    edge_in: &[bool],
) -> Vec<usize> {
    if let Some(e) = frag.edge {
        let (u, v) = edges[e];
        return vec![u, v];
    }
    let a = frag.attachments[0];
    // BFS from `a` through inner vertices to any other attachment
    let mut prev: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let inner: BTreeSet<usize> = frag.inner.iter().copied().collect();
    let mut queue = VecDeque::new();
    for &e in &adj[a] {
        if edge_in[e] {
            continue;
        }
        let (x, y) = edges[e];
        let w = if x == a { y } else { x };
        if inner.contains(&w) && !prev.contains_key(&w) {
            prev.insert(w, a);
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &e in &adj[v] {
            let (x, y) = edges[e];
            let w = if x == v { y } else { x };
            if in_h[w] && w != a {
                let mut path = vec![w, v];
                let mut cur = v;
                while let Some(&p) = prev.get(&cur) {
                    path.push(p);
                    if p == a {
                        break;
                    }
                    cur = p;
                }
                path.reverse();
                return path;
            }
            if inner.contains(&w) && !prev.contains_key(&w) {
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment of a biconnected block has two attachments")
}

fn find_cycle(n: usize, edges: &[(usize, usize)], adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let start = (0..n).find(|&v| !adj[v].is_empty())?;
    let mut parent = vec![usize::MAX; n];
    let mut pedge = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut stack = vec![start];
    depth[start] = 0;
    while let Some(v) = stack.pop() {
        for &e in &adj[v] {
            if e == pedge[v] {
                continue;
            }
            let (a, b) = edges[e];
            let w = if a == v { b } else { a };
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                pedge[w] = e;
                stack.push(w);
            } else {
                // back or cross edge closes a cycle through the tree
                let (mut x, mut y) = (v, w);
                let mut left = vec![x];
                let mut right = vec![y];
                while x != y {
                    if depth[x] >= depth[y] {
                        x = parent[x];
                        left.push(x);
                    } else {
                        y = parent[y];
                        right.push(y);
                    }
                }
                right.pop();
                right.reverse();
                left.extend(right);
                if left.len() >= 3 {
                    return Some(left);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn small_examples() {
        assert!(is_planar(&catalog::complete(4)));
        assert!(!is_planar(&catalog::complete(5)));
        assert!(!is_planar(&catalog::complete_bipartite(3, 3)));
        assert!(is_planar(&catalog::grid(4, 4)));
        assert!(is_planar(&Graph::new()));
    }

    #[test]
    fn outerplanar_examples() {
        assert!(is_outerplanar(&catalog::path(6)));
        assert!(is_outerplanar(&catalog::cycle(6)));
        assert!(!is_outerplanar(&catalog::complete(4)));
        assert!(!is_outerplanar(&catalog::complete_bipartite(2, 3)));
    }

    #[test]
    fn witnesses_name_the_right_minor() {
        let w = kuratowski_witness(&catalog::complete(5)).unwrap();
        assert_eq!(w.kind, KuratowskiKind::K5);
        assert_eq!(w.edges.len(), 10);
        let w = kuratowski_witness(&catalog::complete_bipartite(3, 3)).unwrap();
        assert_eq!(w.kind, KuratowskiKind::K33);
        let w = kuratowski_witness(&catalog::complete(6)).unwrap();
        assert!(!is_planar(&catalog::complete(6).edge_subgraph(&w.edges)));
        assert!(kuratowski_witness(&catalog::complete(4)).is_none());
    }

    #[test]
    fn petersen_is_not_planar() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        let g = Graph::from_edges(10, &edges).unwrap();
        assert!(!is_planar(&g));
        assert_eq!(kuratowski_witness(&g).unwrap().kind, KuratowskiKind::K33);
    }
}
