//! Undirected multigraphs with string vertex ids and dense integer indices.
//!
//! Vertices and edges are addressed by their insertion index. Loops are
//! rejected at construction; parallel edges are allowed.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Default for Graph {
    fn default() -> Self {
        Self::new()
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph {
            names: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            adj: Vec::new(),
        }
    }

    /// Graph on vertices `0..n` named by their decimal index.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Graph::new();
        for v in 0..n {
            g.add_vertex(&v.to_string());
        }
        g
    }

    /// Builds a graph on `0..n` from index pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Returns the index of `name`, creating the vertex if needed.
    pub fn add_vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.adj.push(Vec::new());
        i
    }

    fn fresh_vertex(&mut self, hint: &str) -> usize {
        let mut name = hint.to_string();
        let mut k = 0;
        while self.index.contains_key(&name) {
            k += 1;
            name = format!("{hint}{k}");
        }
        self.add_vertex(&name)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        let n = self.names.len();
        if u >= n || v >= n {
            return Err(Error::UnknownVertex(format!("{}", u.max(v))));
        }
        if u == v {
            return Err(Error::Loop(self.names[u].clone()));
        }
        let e = self.edges.len();
        self.edges.push((u, v));
        self.adj[u].push(e);
        self.adj[v].push(e);
        Ok(e)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Edge ids incident to `v`, in insertion order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Distinct neighbours of `v`, sorted.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.adj[v].iter().map(|&e| self.other(e, v)).collect();
        set.into_iter().collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].iter().any(|&e| self.other(e, u) == v)
    }

    /// Edge ids joining `u` and `v`, in id order.
    pub fn edges_between(&self, u: usize, v: usize) -> Vec<usize> {
        self.adj[u]
            .iter()
            .copied()
            .filter(|&e| self.other(e, u) == v)
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .all(|&(u, v)| seen.insert((u.min(v), u.max(v))))
    }

    /// Underlying simple graph (same vertices, one edge per adjacent pair).
    pub fn simplified(&self) -> Graph {
        let mut g = Graph::new();
        for name in &self.names {
            g.add_vertex(name);
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in &self.edges {
            if seen.insert((u.min(v), u.max(v))) {
                g.add_edge(u, v).expect("valid edge");
            }
        }
        g
    }

    /// Subgraph induced by `keep` (vertices renumbered in the given order).
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut g = Graph::new();
        let mut map = vec![usize::MAX; self.vertex_count()];
        for &v in keep {
            map[v] = g.add_vertex(&self.names[v]);
        }
        for &(u, v) in &self.edges {
            if map[u] != usize::MAX && map[v] != usize::MAX {
                g.add_edge(map[u], map[v]).expect("valid edge");
            }
        }
        g
    }

    /// Subgraph keeping all vertices and only the listed edges.
    pub fn edge_subgraph(&self, keep: &[usize]) -> Graph {
        let mut g = Graph::new();
        for name in &self.names {
            g.add_vertex(name);
        }
        for &e in keep {
            let (u, v) = self.edges[e];
            g.add_edge(u, v).expect("valid edge");
        }
        g
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_avoiding(self, &vec![false; self.vertex_count()])
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Components of `self - excluded`, each with the edges that touch it,
    /// including edges running to excluded vertices.
    pub fn components_excluding(&self, excluded: &[usize]) -> Vec<AnchoredComponent> {
        let mut mask = vec![false; self.vertex_count()];
        for &v in excluded {
            mask[v] = true;
        }
        components_avoiding(self, &mask)
            .into_iter()
            .map(|vertices| {
                let mut edges = BTreeSet::new();
                let mut anchors = BTreeSet::new();
                for &v in &vertices {
                    for &e in &self.adj[v] {
                        edges.insert(e);
                        let w = self.other(e, v);
                        if mask[w] {
                            anchors.insert(w);
                        }
                    }
                }
                AnchoredComponent {
                    vertices,
                    edges: edges.into_iter().collect(),
                    anchors: anchors.into_iter().collect(),
                }
            })
            .collect()
    }

    /// `self` plus a fresh vertex adjacent to every existing vertex once.
    /// The apex is the last vertex.
    pub fn with_apex(&self) -> Graph {
        let mut g = self.clone();
        let apex = g.fresh_vertex("*");
        for v in 0..self.vertex_count() {
            g.add_edge(apex, v).expect("valid edge");
        }
        g
    }

    /// Replaces edge `e` by a path with `t` fresh internal vertices. The
    /// first path edge keeps id `e`; the others are appended.
    pub fn subdivide(&self, e: usize, t: usize) -> Result<Graph> {
        if e >= self.edge_count() {
            return Err(Error::UnknownEdge(e));
        }
        let mut g = self.clone();
        let (u, v) = g.edges[e];
        let mut prev = u;
        let mut first = true;
        for i in 0..t {
            let w = g.fresh_vertex(&format!("s{e}_{i}"));
            if first {
                g.retarget(e, prev, w);
                first = false;
            } else {
                g.add_edge(prev, w)?;
            }
            prev = w;
        }
        if !first {
            g.add_edge(prev, v)?;
        }
        Ok(g)
    }

    /// Subdivides every edge `t` times.
    pub fn subdivide_all(&self, t: usize) -> Graph {
        let mut g = self.clone();
        for e in 0..self.edge_count() {
            g = g.subdivide(e, t).expect("edge exists");
        }
        g
    }

    fn retarget(&mut self, e: usize, u: usize, w: usize) {
        let (a, b) = self.edges[e];
        let old = if a == u { b } else { a };
        self.adj[old].retain(|&x| x != e);
        self.edges[e] = (u, w);
        self.adj[w].push(e);
    }

    /// Largest minimum degree over all subgraphs (multi-edges counted once).
    pub fn degeneracy(&self) -> usize {
        let simple = self.simplified();
        let n = simple.vertex_count();
        let mut deg: Vec<usize> = (0..n).map(|v| simple.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut best = 0;
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| deg[v])
                .expect("vertex left");
            best = best.max(deg[v]);
            removed[v] = true;
            for w in simple.neighbors(v) {
                if !removed[w] {
                    deg[w] -= 1;
                }
            }
        }
        best
    }

    /// A value never larger than the treewidth. Currently the degeneracy.
    pub fn treewidth_lower_bound(&self) -> usize {
        self.degeneracy()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchoredComponent {
    pub vertices: Vec<usize>,
    /// Every edge with at least one endpoint in `vertices`.
    pub edges: Vec<usize>,
    /// Excluded vertices adjacent to the component.
    pub anchors: Vec<usize>,
}

fn components_avoiding(g: &Graph, excluded: &[bool]) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = excluded.to_vec();
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in g.incident(v) {
                let w = g.other(e, v);
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Parses the edge-list format: one `u v` pair per line, `#` comments.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut g = Graph::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected two vertex ids, found {}", tokens.len()),
            });
        }
        if tokens[0] == tokens[1] {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("loop at vertex {}", tokens[0]),
            });
        }
        let u = g.add_vertex(tokens[0]);
        let v = g.add_vertex(tokens[1]);
        g.add_edge(u, v)?;
    }
    Ok(g)
}

/// Serializes back to the edge-list format.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    for &(u, v) in g.edges() {
        out.push_str(g.name(u));
        out.push(' ');
        out.push_str(g.name(v));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn parse_path_and_empty() {
        let g = parse_graph("1 2\n2 3").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        let e = parse_graph("").unwrap();
        assert_eq!(e.vertex_count(), 0);
    }

    #[test]
    fn parse_parallel_edges_and_comments() {
        let g = parse_graph("# header\na b\n\na b # again\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges_between(0, 1), vec![0, 1]);
        assert!(!g.is_simple());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_graph("1 2\n3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_graph("1 2\n\nx x") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn components_keep_anchor_edges() {
        let g = catalog::path(3);
        let comps = g.components_excluding(&[1]);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].vertices, vec![0]);
        assert_eq!(comps[0].edges, vec![0]);
        assert_eq!(comps[0].anchors, vec![1]);
        assert_eq!(comps[1].edges, vec![1]);
        assert_eq!(catalog::complete(4).components_excluding(&[]).len(), 1);
    }

    #[test]
    fn apex_shapes() {
        assert_eq!(Graph::new().with_apex().vertex_count(), 1);
        let k4 = catalog::cycle(3).with_apex();
        assert_eq!((k4.vertex_count(), k4.edge_count()), (4, 6));
        let k33 = catalog::complete_bipartite(3, 3).with_apex();
        assert_eq!((k33.vertex_count(), k33.edge_count()), (7, 15));
    }

    #[test]
    fn subdivision_shapes() {
        let k4 = catalog::complete(4);
        assert_eq!(k4.subdivide(2, 0).unwrap(), k4);
        let p = catalog::path(2).subdivide(0, 2).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count()), (4, 3));
        assert_eq!(p.degeneracy(), 1);
        assert!(p.is_connected());
        assert!(matches!(k4.subdivide(9, 1), Err(Error::UnknownEdge(9))));
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(catalog::path(5).treewidth_lower_bound(), 1);
        assert_eq!(catalog::complete(5).treewidth_lower_bound(), 4);
        assert_eq!(catalog::grid(3, 3).treewidth_lower_bound(), 2);
    }
}
