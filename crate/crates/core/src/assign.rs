//! Assignments of a graph onto a frame drawing, augmented region graphs
//! and the property check that makes an assignment a certificate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::frames::FrameDrawing;
use crate::graph::Graph;
use crate::planarity::is_planar;
use crate::surface::{ArcRef, Region, RegionDecomposition};

/// Image of a frame chord: an edge of the graph, or a fresh parallel copy
/// of one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameImage {
    Edge(usize),
    Copy(usize),
}

impl FrameImage {
    pub fn edge(self) -> usize {
        match self {
            FrameImage::Edge(e) | FrameImage::Copy(e) => e,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    /// Graph vertex at each frame position; equal vertices form one run.
    pub position_vertex: Vec<usize>,
    pub frame_images: Vec<FrameImage>,
    /// Vertices along the arc from position `p` to `p + 1`, in that
    /// direction. Without frames there is a single arc, the whole circle.
    pub arc_vertices: Vec<Vec<usize>>,
    /// Region of every edge that is not a frame image.
    pub edge_regions: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub property: u8,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "property {}: {}", self.property, self.message)
    }
}

/// An arc with its end vertices (`None` for the whole circle) and the
/// vertices placed on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchoredArc {
    pub anchors: Option<(usize, usize)>,
    pub vertices: Vec<usize>,
}

impl AnchoredArc {
    pub fn is_degenerate(&self) -> bool {
        matches!(self.anchors, Some((u, v)) if u == v)
    }
}

#[derive(Debug, Clone)]
pub struct AugmentedRegionGraph {
    pub graph: Graph,
    pub hub: usize,
    /// Boundary vertex of each arc; the anchor itself for degenerate arcs.
    pub boundary_vertices: Vec<usize>,
}

/// Adds the hub, one boundary vertex per arc and the connector edges to
/// the region subgraph formed by `edges`.
pub fn augment(g: &Graph, edges: &[usize], arcs: &[AnchoredArc]) -> AugmentedRegionGraph {
    let mut out = Graph::with_vertices(g.vertex_count());
    for &e in edges {
        let (u, v) = g.edge(e);
        out.add_edge(u, v).expect("graph edge");
    }
    let hub = out.add_vertex("h");
    let mut boundary_vertices = Vec::with_capacity(arcs.len());
    for (i, arc) in arcs.iter().enumerate() {
        match arc.anchors {
            Some((u, _)) if arc.is_degenerate() => {
                boundary_vertices.push(u);
                out.add_edge(hub, u).expect("fresh hub");
            }
            anchors => {
                let b = out.add_vertex(&format!("b{i}"));
                boundary_vertices.push(b);
                out.add_edge(hub, b).expect("fresh vertex");
                for &x in &arc.vertices {
                    out.add_edge(b, x).expect("fresh vertex");
                }
                if let Some((u, w)) = anchors {
                    for a in [u, w] {
                        out.add_edge(b, a).expect("fresh vertex");
                        out.add_edge(hub, a).expect("fresh hub");
                    }
                }
            }
        }
        if let (Some((_, w)), Some((u_next, _))) = (arc.anchors, arcs[(i + 1) % arcs.len()].anchors) {
            if w != u_next && !out.has_edge(w, u_next) {
                out.add_edge(w, u_next).expect("distinct ends");
            }
        }
    }
    AugmentedRegionGraph {
        graph: out,
        hub,
        boundary_vertices,
    }
}

/// End vertices of an arc under an assignment.
pub fn arc_anchors(a: &Assignment, positions: usize, arc: ArcRef) -> Option<(usize, usize)> {
    (positions > 0).then(|| (a.position_vertex[arc.from], a.position_vertex[arc.to]))
}

/// The arcs of `region` with anchors and vertices under `a`.
pub fn anchored_arcs(a: &Assignment, positions: usize, region: &Region) -> Vec<AnchoredArc> {
    region
        .arcs()
        .map(|arc| AnchoredArc {
            anchors: arc_anchors(a, positions, arc),
            vertices: a.arc_vertices.get(arc.from).cloned().unwrap_or_default(),
        })
        .collect()
}

/// Vertices appearing as anchors on the boundary of `region`.
pub fn region_anchors(a: &Assignment, positions: usize, region: &Region) -> BTreeSet<usize> {
    region
        .arcs()
        .filter_map(|arc| arc_anchors(a, positions, arc))
        .flat_map(|(u, v)| [u, v])
        .collect()
}

pub fn check_properties(
    g: &Graph,
    fd: &FrameDrawing,
    rd: &RegionDecomposition,
    a: &Assignment,
) -> Result<(), Violation> {
    let fail = |property: u8, message: String| Err(Violation { property, message });
    let arr = &fd.arrangement;
    let p = arr.positions();
    let n = g.vertex_count();
    let m = g.edge_count();

    // vertex partition
    if a.position_vertex.len() != p || a.arc_vertices.len() != p.max(1) {
        return fail(1, "assignment does not match the frame drawing".into());
    }
    let mut is_frame = vec![false; n];
    for &v in &a.position_vertex {
        if v >= n {
            return fail(1, format!("unknown vertex {v}"));
        }
        is_frame[v] = true;
    }
    for v in (0..n).filter(|&v| is_frame[v]) {
        let starts = (0..p)
            .filter(|&s| a.position_vertex[s] == v && a.position_vertex[(s + p - 1) % p] != v)
            .count();
        if starts != 1 {
            return fail(1, format!("positions of vertex {v} are not consecutive"));
        }
    }
    let mut arc_of = vec![usize::MAX; n];
    for (q, list) in a.arc_vertices.iter().enumerate() {
        if p > 0 && a.position_vertex[q] == a.position_vertex[(q + 1) % p] && !list.is_empty() {
            return fail(1, format!("vertices on degenerate arc {q}"));
        }
        for &x in list {
            if x >= n || is_frame[x] || arc_of[x] != usize::MAX {
                return fail(1, format!("vertex {x} placed twice or on a frame"));
            }
            arc_of[x] = q;
        }
    }
    if let Some(v) = (0..n).find(|&v| !is_frame[v] && arc_of[v] == usize::MAX) {
        return fail(1, format!("vertex {v} is not placed"));
    }

    // frames map onto frame images
    if a.frame_images.len() != arr.chord_count() {
        return fail(3, "one image per frame chord required".into());
    }
    let mut used = vec![false; m];
    for (c, img) in a.frame_images.iter().enumerate() {
        let [s, t] = arr.chord(c);
        let (u, v) = (a.position_vertex[s], a.position_vertex[t]);
        let e = img.edge();
        if e >= m {
            return fail(3, format!("unknown edge {e}"));
        }
        let (x, y) = g.edge(e);
        if u == v || !((x, y) == (u, v) || (x, y) == (v, u)) {
            return fail(3, format!("chord {c} does not map onto edge {e}"));
        }
        if let FrameImage::Edge(e) = *img {
            if std::mem::replace(&mut used[e], true) {
                return fail(3, format!("edge {e} is the image of two chords"));
            }
        }
    }
    for &(c1, c2) in arr.crossings() {
        let shares = arr.chord(c1).iter().any(|&s| {
            arr.chord(c2)
                .iter()
                .any(|&t| a.position_vertex[s] == a.position_vertex[t])
        });
        if shares {
            return fail(3, format!("chords {c1} and {c2} share a vertex and cross"));
        }
    }

    // edge partition
    if a.edge_regions.len() != m {
        return fail(2, "one entry per edge required".into());
    }
    for e in 0..m {
        match (used[e], a.edge_regions[e]) {
            (true, None) => {}
            (false, Some(r)) if r < rd.regions.len() => {}
            _ => return fail(2, format!("edge {e} is neither a frame nor in a region")),
        }
    }

    // local conditions
    let anchors: Vec<BTreeSet<usize>> = rd.regions.iter().map(|r| region_anchors(a, p, r)).collect();
    for v in 0..n {
        let regions: BTreeSet<usize> = g.incident(v).iter().filter_map(|&e| a.edge_regions[e]).collect();
        if is_frame[v] {
            if let Some(&r) = regions.iter().find(|&&r| !anchors[r].contains(&v)) {
                return fail(5, format!("vertex {v} has an edge in region {r}, whose boundary misses it"));
            }
        } else {
            if regions.len() > 1 {
                return fail(4, format!("vertex {v} has edges in two regions"));
            }
            let home = rd.arc_region[arc_of[v]];
            if regions.iter().any(|&r| r != home) {
                return fail(6, format!("vertex {v} has an edge outside the region of its arc"));
            }
        }
    }
    if (0..a.arc_vertices.len()).any(|q| !a.arc_vertices[q].is_empty() && rd.arc_region[q] >= rd.regions.len()) {
        return fail(6, "arc without a region".into());
    }

    // augmented region graphs
    for (r, region) in rd.regions.iter().enumerate() {
        let edges: Vec<usize> = (0..m).filter(|&e| a.edge_regions[e] == Some(r)).collect();
        let aug = augment(g, &edges, &anchored_arcs(a, p, region));
        if !is_planar(&aug.graph) {
            return fail(7, format!("augmented graph of region {r} is not planar"));
        }
    }
    Ok(())
}
