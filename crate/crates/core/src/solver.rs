//! Deciding `bc°(G) <= k` with checkable certificates.
//!
//! Two searches produce certificates. The layout search reads a frame
//! drawing and an assignment off every straight-chord layout that bundles
//! into `k` classes. The exhaustive search runs over enumerated frame
//! drawings and backtracks over assignments. Every certificate must pass
//! the property check and realize as a layout whose bundling validates.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{in_open_interval, DiskArrangement};
use crate::assign::{
    anchored_arcs, augment, check_properties, region_anchors, AnchoredArc, Assignment, FrameImage,
};
use crate::budget::{Budget, Exhausted};
use crate::bundling::{
    bundles_within, is_valid_bundling, min_bundling_exact, BundledCrossing, Bundling,
};
use crate::circular::{build_chord_arrangement, enumerate_cyclic_orders, CyclicOrder};
use crate::error::{Error, Result};
use crate::frames::{enumerate_frame_arrangements, for_each_grouping, ordered, FrameDoc, FrameDrawing};
use crate::graph::Graph;
use crate::planarity::{is_outerplanar, is_planar, planar_rotation};
use crate::surface::{lift_and_decompose, verify_disk_regions, RegionDecomposition};

/// Largest frame arrangement the exhaustive search enumerates.
pub const MAX_ENUMERATED_FRAMES: usize = 6;

/// A circular layout with a bundling of its straight-chord arrangement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub order: Vec<usize>,
    /// Classes over the chords of `build_chord_arrangement(g, order)`.
    pub bundling: Bundling,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: usize,
    pub vertices: Vec<String>,
    pub frame: FrameDoc,
    pub assignment: Assignment,
    pub layout: Layout,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Yes(Box<Certificate>),
    No,
    Inconclusive,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }
}

/// Regions of `fd`, insisting that each is a disk.
pub fn decompose(fd: &FrameDrawing) -> Result<RegionDecomposition> {
    let rd = lift_and_decompose(fd)?;
    if !verify_disk_regions(&rd) {
        return Err(Error::InvalidFrame("a region is not a disk".into()));
    }
    Ok(rd)
}

/// Cyclic vertex order encoded by an assignment: frame vertices at their
/// positions, arc vertices in between.
pub fn order_from_assignment(a: &Assignment) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    if a.position_vertex.is_empty() {
        return a.arc_vertices.first().cloned().unwrap_or_default();
    }
    for (s, &v) in a.position_vertex.iter().enumerate() {
        if !out.contains(&v) {
            out.push(v);
        }
        out.extend_from_slice(&a.arc_vertices[s]);
    }
    out
}

/// The layout described by an assignment, with a bundling of at most `k`
/// classes. Straight chords depend on where the order starts on the
/// circle, so every rotation is tried.
pub fn realize_drawing(g: &Graph, a: &Assignment, k: usize, budget: &Budget) -> Result<(CyclicOrder, Bundling)> {
    let base = order_from_assignment(a);
    CyclicOrder::new(g, base.clone())?;
    let mut best = usize::MAX;
    for r in 0..base.len().max(1) {
        let rotated: Vec<usize> = base[r..].iter().chain(&base[..r]).copied().collect();
        let ord = CyclicOrder::new(g, rotated)?;
        let arr = build_chord_arrangement(g, &ord);
        let exact = min_bundling_exact(&arr, budget);
        if exact.bundling.len() <= k && is_valid_bundling(&arr, &exact.bundling) {
            return Ok((ord, exact.bundling));
        }
        best = best.min(exact.bundling.len());
    }
    Err(Error::InvalidCertificate(format!("realized layout needs {best} bundled crossings")))
}

/// Full re-validation of a certificate against `g`.
pub fn verify_certificate(g: &Graph, cert: &Certificate) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidCertificate(m));
    if cert.vertices != g.names() {
        return bad("vertex names do not match the graph".into());
    }
    let fd = FrameDrawing::from_doc(&cert.frame)?;
    if fd.k() > cert.k {
        return bad(format!("{} groups exceed k = {}", fd.k(), cert.k));
    }
    let rd = decompose(&fd)?;
    if let Err(v) = check_properties(g, &fd, &rd, &cert.assignment) {
        return bad(v.to_string());
    }
    let order = order_from_assignment(&cert.assignment);
    if !is_rotation(&order, &cert.layout.order) {
        return bad("layout order differs from the assignment".into());
    }
    let arr = build_chord_arrangement(g, &CyclicOrder::new(g, cert.layout.order.clone())?);
    if cert.layout.bundling.len() > cert.k || !is_valid_bundling(&arr, &cert.layout.bundling) {
        return bad("layout bundling is invalid".into());
    }
    Ok(())
}

fn is_rotation(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|r| a[r..].iter().chain(&a[..r]).eq(b.iter())))
}

fn certificate(g: &Graph, k: usize, fd: &FrameDrawing, assignment: Assignment, ord: CyclicOrder, bundling: Bundling) -> Certificate {
    Certificate {
        k,
        vertices: g.names().to_vec(),
        frame: fd.to_doc(),
        assignment,
        layout: Layout {
            order: ord.as_slice().to_vec(),
            bundling,
        },
    }
}

/// Frame drawing and assignment read off a bundled straight-chord layout,
/// before lifts are chosen.
struct LayoutFrames {
    arrangement: DiskArrangement,
    groups: Vec<BundledCrossing>,
    position_vertex: Vec<usize>,
    images: Vec<FrameImage>,
    arc_vertices: Vec<Vec<usize>>,
    /// Arc whose region holds each non-frame edge.
    slot: Vec<Option<usize>>,
}

fn layout_frames(g: &Graph, ord: &CyclicOrder, arr: &DiskArrangement, bundling: &[BundledCrossing]) -> Result<LayoutFrames> {
    let n = g.vertex_count();
    let vpos = ord.positions();
    let chord_count = arr.chord_count();
    // frames, and chords that need a parallel copy to frame a thin bundle
    let mut is_frame = vec![false; chord_count];
    let mut copied = vec![false; chord_count];
    let mut classes = Vec::with_capacity(bundling.len());
    for class in bundling {
        let class = ordered(arr, class.clone());
        for bundle in [&class.bundle1, &class.bundle2] {
            is_frame[bundle[0]] = true;
            is_frame[bundle[bundle.len() - 1]] = true;
            if bundle.len() == 1 {
                copied[bundle[0]] = true;
            }
        }
        classes.push(class);
    }
    let mut instances: Vec<(usize, bool)> = Vec::new();
    let mut instance_of = HashMap::new();
    for c in (0..chord_count).filter(|&c| is_frame[c]) {
        for cp in [false, true] {
            if !cp || copied[c] {
                instance_of.insert((c, cp), instances.len());
                instances.push((c, cp));
            }
        }
    }
    // chord ends grouped by layout position; a copy nests inside its
    // original on the side of the arc from its first to its second end
    let ccw = |x: usize, y: usize| (y + n - x) % n;
    let mut ends_at: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(c, _)) in instances.iter().enumerate() {
        for end in 0..2 {
            ends_at[arr.chord(c)[end]].push((i, end));
        }
    }
    for (x, list) in ends_at.iter_mut().enumerate() {
        list.sort_by_key(|&(i, end)| {
            let (c, cp) = instances[i];
            let other = arr.chord(c)[1 - end];
            (std::cmp::Reverse(ccw(x, other)), if end == 0 { cp } else { !cp })
        });
    }
    let mut position_vertex = Vec::new();
    let mut new_end = vec![[0usize; 2]; instances.len()];
    let mut block_start = vec![usize::MAX; n];
    let mut arc_of = vec![usize::MAX; n];
    let mut pending: Vec<Vec<usize>> = Vec::new();
    let mut before_first = Vec::new();
    for x in 0..n {
        let v = ord.as_slice()[x];
        if ends_at[x].is_empty() {
            match pending.last_mut() {
                Some(list) => list.push(v),
                None => before_first.push(v),
            }
            continue;
        }
        block_start[x] = position_vertex.len();
        for &(i, end) in &ends_at[x] {
            new_end[i][end] = position_vertex.len();
            position_vertex.push(v);
            pending.push(Vec::new());
        }
    }
    let p = position_vertex.len();
    let mut arc_vertices = pending;
    if p == 0 {
        arc_vertices.push(before_first);
    } else {
        arc_vertices[p - 1].extend(before_first);
    }
    for (q, list) in arc_vertices.iter().enumerate() {
        for &v in list {
            arc_of[v] = q;
        }
    }
    // crossing orders, copies met in the order their side dictates
    let partners: Vec<Vec<usize>> = instances
        .iter()
        .map(|&(c, _)| {
            let start = arr.chord(c)[0];
            let mut seq = Vec::new();
            for other in arr.partners(c).into_iter().filter(|&o| is_frame[o]) {
                let orig = instance_of[&(other, false)];
                if copied[other] {
                    let [a, b] = arr.chord(other);
                    let copy = instance_of[&(other, true)];
                    if in_open_interval(n, a, b, start) {
                        seq.extend([copy, orig]);
                    } else {
                        seq.extend([orig, copy]);
                    }
                } else {
                    seq.push(orig);
                }
            }
            seq
        })
        .collect();
    let labels = instances.iter().map(|&(c, _)| arr.label(c)).collect();
    let arrangement = DiskArrangement::with_labels(p, new_end.clone(), labels, partners)?;
    let groups = classes
        .iter()
        .map(|class| {
            let pick = |bundle: &[usize]| -> Vec<usize> {
                (0..instances.len()).filter(|&i| bundle.contains(&instances[i].0)).collect()
            };
            BundledCrossing {
                bundle1: pick(&class.bundle1),
                bundle2: pick(&class.bundle2),
            }
        })
        .collect();
    let images: Vec<FrameImage> = instances
        .iter()
        .map(|&(c, cp)| {
            if cp {
                FrameImage::Copy(arr.label(c))
            } else {
                FrameImage::Edge(arr.label(c))
            }
        })
        .collect();
    let frame_edges: BTreeSet<usize> = images
        .iter()
        .filter_map(|im| match im {
            FrameImage::Edge(e) => Some(*e),
            FrameImage::Copy(_) => None,
        })
        .collect();
    // the arc next to where an edge leaves a frame vertex
    let slot = (0..g.edge_count())
        .map(|e| {
            if frame_edges.contains(&e) {
                return None;
            }
            let (u, v) = g.edge(e);
            if arc_of[u] != usize::MAX {
                return Some(arc_of[u]);
            }
            if arc_of[v] != usize::MAX {
                return Some(arc_of[v]);
            }
            let (x, y) = (vpos[u], vpos[v]);
            let before = ends_at[x]
                .iter()
                .filter(|&&(i, end)| ccw(x, arr.chord(instances[i].0)[1 - end]) > ccw(x, y))
                .count();
            Some(if before == 0 {
                (block_start[x] + p - 1) % p
            } else {
                block_start[x] + before - 1
            })
        })
        .collect();
    Ok(LayoutFrames {
        arrangement,
        groups,
        position_vertex,
        images,
        arc_vertices,
        slot,
    })
}

/// Certificate from a straight-chord layout and a bundling of it with at
/// most `k` classes, trying every lift.
pub fn certificate_from_layout(
    g: &Graph,
    ord: &CyclicOrder,
    arr: &DiskArrangement,
    bundling: &[BundledCrossing],
    k: usize,
) -> Result<Certificate> {
    if bundling.len() > k || !is_valid_bundling(arr, bundling) {
        return Err(Error::InvalidBundling("layout bundling does not fit".into()));
    }
    let lf = layout_frames(g, ord, arr, bundling)?;
    let j = lf.groups.len();
    let mut last = None;
    for mask in 0u32..1 << j {
        let lifts = (0..j).map(|i| mask >> i & 1 == 1).collect();
        let fd = FrameDrawing::new(lf.arrangement.clone(), lf.groups.clone(), lifts)?;
        let rd = decompose(&fd)?;
        let assignment = Assignment {
            position_vertex: lf.position_vertex.clone(),
            frame_images: lf.images.clone(),
            arc_vertices: lf.arc_vertices.clone(),
            edge_regions: lf.slot.iter().map(|s| s.map(|q| rd.arc_region[q])).collect(),
        };
        match check_properties(g, &fd, &rd, &assignment) {
            Ok(()) => {
                return Ok(certificate(g, k, &fd, assignment, ord.clone(), bundling.to_vec()));
            }
            Err(v) => last = Some(v),
        }
    }
    Err(Error::InvalidCertificate(format!(
        "no lift certifies the layout: {}",
        last.map_or_else(String::new, |v| v.to_string())
    )))
}

enum Outcome {
    Found(Box<Certificate>),
    NotFound { complete: bool },
}

/// Straight-chord layouts bundling into at most `k` classes, first in
/// enumeration order.
fn layout_search(g: &Graph, k: usize, budget: &Budget) -> Outcome {
    let orders: Vec<CyclicOrder> = enumerate_cyclic_orders(g.vertex_count()).collect();
    let share = budget.limit().saturating_sub(budget.used());
    let unsure = AtomicBool::new(false);
    let found = orders.par_iter().find_map_first(|ord| {
        let local = Budget::new(share);
        let arr = build_chord_arrangement(g, ord);
        match bundles_within(&arr, k, &local) {
            Some(true) => {}
            Some(false) => return None,
            None => {
                unsure.store(true, Ordering::Relaxed);
                return None;
            }
        }
        let exact = min_bundling_exact(&arr, &local);
        match certificate_from_layout(g, ord, &arr, &exact.bundling, k) {
            Ok(c) => Some(c),
            Err(_) => {
                unsure.store(true, Ordering::Relaxed);
                None
            }
        }
    });
    match found {
        Some(c) => Outcome::Found(Box::new(c)),
        None => Outcome::NotFound {
            complete: !unsure.load(Ordering::Relaxed),
        },
    }
}

/// Frame drawings with exactly `k` groups and assignments onto them.
fn exhaustive_search(g: &Graph, k: usize, budget: &Budget) -> Outcome {
    let mut complete = 4 * k <= MAX_ENUMERATED_FRAMES;
    let mut found = None;
    'beta: for beta in 4..=(4 * k).min(MAX_ENUMERATED_FRAMES) {
        for arr in enumerate_frame_arrangements(beta) {
            let mut failed = false;
            let r = for_each_grouping(&arr, k, budget, &mut |fd| {
                let Ok(rd) = decompose(&fd) else {
                    failed = true;
                    return false;
                };
                match solve_assignment(g, &fd, &rd, budget) {
                    Ok(Some(a)) => match realize_drawing(g, &a, k, budget) {
                        Ok((ord, bundling)) => {
                            found = Some(certificate(g, k, &fd, a, ord, bundling));
                            false
                        }
                        Err(_) => {
                            failed = true;
                            true
                        }
                    },
                    Ok(None) => true,
                    Err(Exhausted) => {
                        failed = true;
                        false
                    }
                }
            });
            complete &= !failed && r.is_ok();
            if found.is_some() || r.is_err() {
                break 'beta;
            }
        }
    }
    match found {
        Some(c) => Outcome::Found(Box::new(c)),
        None => Outcome::NotFound { complete },
    }
}

/// Whether `g` has a circular layout with at most `k` bundled crossings.
pub fn decide_bco(g: &Graph, k: usize, budget: &Budget) -> Decision {
    if is_outerplanar(g) {
        let ord = outerplanar_order(g);
        let arr = build_chord_arrangement(g, &ord);
        return match certificate_from_layout(g, &ord, &arr, &[], k) {
            Ok(c) => Decision::Yes(Box::new(c)),
            Err(_) => Decision::Inconclusive,
        };
    }
    let tw = g.treewidth_lower_bound();
    let planar = is_planar(g);
    let allowed = |j: usize| j >= 1 && tw <= 8 * j + 2 && (j > 1 || planar);
    let mut unsure = false;
    if allowed(k) {
        match layout_search(g, k, budget) {
            Outcome::Found(c) => return Decision::Yes(c),
            Outcome::NotFound { complete } => unsure |= !complete,
        }
    }
    for j in (1..=k).filter(|&j| allowed(j)) {
        match exhaustive_search(g, j, budget) {
            Outcome::Found(mut c) => {
                c.k = k;
                return Decision::Yes(c);
            }
            Outcome::NotFound { complete } => unsure |= !complete,
        }
    }
    if unsure {
        Decision::Inconclusive
    } else {
        Decision::No
    }
}

/// Crossing-free cyclic order of an outerplanar graph: the rotation
/// around an added universal vertex.
pub fn outerplanar_order(g: &Graph) -> CyclicOrder {
    let n = g.vertex_count();
    let rot = planar_rotation(&g.with_apex()).expect("outerplanar");
    CyclicOrder::new(g, rot[n].clone()).expect("apex sees every vertex")
}

/// An assignment of `g` onto `fd` satisfying every property, found by
/// backtracking over frame images, regions of the pieces of `g` off the
/// frames, and arcs of their vertices.
pub fn solve_assignment(
    g: &Graph,
    fd: &FrameDrawing,
    rd: &RegionDecomposition,
    budget: &Budget,
) -> std::result::Result<Option<Assignment>, Exhausted> {
    let arr = &fd.arrangement;
    let p = arr.positions();
    let mut chord_at = vec![0; p];
    for c in 0..arr.chord_count() {
        for s in arr.chord(c) {
            chord_at[s] = c;
        }
    }
    let mut search = Search {
        g,
        fd,
        rd,
        budget,
        chord_at,
        pv: Vec::with_capacity(p),
        images: Vec::new(),
        memo: HashMap::new(),
    };
    search.positions()
}

struct Search<'a> {
    g: &'a Graph,
    fd: &'a FrameDrawing,
    rd: &'a RegionDecomposition,
    budget: &'a Budget,
    chord_at: Vec<usize>,
    pv: Vec<usize>,
    images: Vec<FrameImage>,
    /// Feasibility of a region holding a set of pieces, with arcs of their
    /// vertices (indices into the region's arcs) when feasible.
    memo: HashMap<(usize, Vec<usize>), Option<Vec<(usize, usize)>>>,
}

/// A component of `g` minus the frame vertices, or an edge between frame
/// vertices that no frame maps to.
struct Piece {
    vertices: Vec<usize>,
    edges: Vec<usize>,
    anchors: BTreeSet<usize>,
}

type Found = std::result::Result<Option<Assignment>, Exhausted>;

impl Search<'_> {
    fn arr(&self) -> &DiskArrangement {
        &self.fd.arrangement
    }

    fn positions(&mut self) -> Found {
        self.budget.tick()?;
        let p = self.arr().positions();
        let s = self.pv.len();
        if s == p {
            return if self.frame_ok() { self.images_rec(0) } else { Ok(None) };
        }
        let n = self.g.vertex_count();
        let wrapping = s > 0 && self.pv[s - 1] == self.pv[0] && self.pv.iter().any(|&v| v != self.pv[0]);
        let candidates: Vec<usize> = if wrapping {
            vec![self.pv[0]]
        } else {
            (0..n)
                .filter(|&v| {
                    s == 0 || v == self.pv[s - 1] || v == self.pv[0] || !self.pv.contains(&v)
                })
                .collect()
        };
        for v in candidates {
            self.pv.push(v);
            if self.position_ok(s) {
                if let Some(a) = self.positions()? {
                    return Ok(Some(a));
                }
            }
            self.pv.pop();
        }
        Ok(None)
    }

    /// The chord at position `s` against everything assigned before it.
    fn position_ok(&self, s: usize) -> bool {
        let arr = self.arr();
        let c = self.chord_at[s];
        let [a, b] = arr.chord(c);
        let t = if a == s { b } else { a };
        if t < s && (self.pv[t] == self.pv[s] || !self.g.has_edge(self.pv[t], self.pv[s])) {
            return false;
        }
        (0..s).all(|r| self.pv[r] != self.pv[s] || arr.crossing_between(c, self.chord_at[r]).is_none())
    }

    fn frame_ok(&self) -> bool {
        let p = self.pv.len();
        let arr = self.arr();
        let runs = (0..p).filter(|&s| self.pv[s] != self.pv[(s + p - 1) % p]).count();
        let blocks: BTreeSet<usize> = self.pv.iter().copied().collect();
        runs == blocks.len()
            && arr.crossings().iter().all(|&(c1, c2)| {
                arr.chord(c1)
                    .iter()
                    .all(|&s| arr.chord(c2).iter().all(|&t| self.pv[s] != self.pv[t]))
            })
    }

    fn images_rec(&mut self, c: usize) -> Found {
        self.budget.tick()?;
        if c == self.arr().chord_count() {
            return self.place_pieces();
        }
        let [s, t] = self.arr().chord(c);
        let between = self.g.edges_between(self.pv[s], self.pv[t]);
        let mut options: Vec<FrameImage> = between
            .iter()
            .filter(|&&e| !self.images.contains(&FrameImage::Edge(e)))
            .map(|&e| FrameImage::Edge(e))
            .collect();
        options.push(FrameImage::Copy(between[0]));
        for img in options {
            self.images.push(img);
            if let Some(a) = self.images_rec(c + 1)? {
                return Ok(Some(a));
            }
            self.images.pop();
        }
        Ok(None)
    }

    fn place_pieces(&mut self) -> Found {
        let g = self.g;
        let p = self.arr().positions();
        let frame_vertices: BTreeSet<usize> = self.pv.iter().copied().collect();
        let excluded: Vec<usize> = frame_vertices.iter().copied().collect();
        let frame_edges: BTreeSet<usize> = self
            .images
            .iter()
            .filter_map(|im| match im {
                FrameImage::Edge(e) => Some(*e),
                FrameImage::Copy(_) => None,
            })
            .collect();
        let mut pieces: Vec<Piece> = g
            .components_excluding(&excluded)
            .into_iter()
            .map(|c| Piece {
                vertices: c.vertices,
                edges: c.edges,
                anchors: c.anchors.into_iter().collect(),
            })
            .collect();
        pieces.sort_by_key(|pc| std::cmp::Reverse(pc.vertices.len()));
        for e in 0..g.edge_count() {
            let (u, v) = g.edge(e);
            if frame_vertices.contains(&u) && frame_vertices.contains(&v) && !frame_edges.contains(&e) {
                pieces.push(Piece {
                    vertices: Vec::new(),
                    edges: vec![e],
                    anchors: [u, v].into_iter().collect(),
                });
            }
        }
        let partial = self.partial_assignment();
        let anchors: Vec<BTreeSet<usize>> = self
            .rd
            .regions
            .iter()
            .map(|r| region_anchors(&partial, p, r))
            .collect();
        let candidates: Vec<Vec<usize>> = pieces
            .iter()
            .map(|pc| {
                (0..self.rd.regions.len())
                    .filter(|&r| pc.anchors.is_subset(&anchors[r]))
                    .filter(|&r| pc.vertices.is_empty() || !self.open_arcs(&partial, r).is_empty())
                    .collect()
            })
            .collect();
        let mut chosen = vec![usize::MAX; pieces.len()];
        self.memo.clear();
        self.pieces_rec(&pieces, &candidates, &mut chosen, 0, &partial)
    }

    fn partial_assignment(&self) -> Assignment {
        let p = self.arr().positions();
        Assignment {
            position_vertex: self.pv.clone(),
            frame_images: self.images.clone(),
            arc_vertices: vec![Vec::new(); p.max(1)],
            edge_regions: vec![None; self.g.edge_count()],
        }
    }

    /// Indices, within region `r`'s boundary, of arcs that can hold vertices.
    fn open_arcs(&self, partial: &Assignment, r: usize) -> Vec<usize> {
        anchored_arcs(partial, self.arr().positions(), &self.rd.regions[r])
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_degenerate())
            .map(|(i, _)| i)
            .collect()
    }

    fn pieces_rec(
        &mut self,
        pieces: &[Piece],
        candidates: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        i: usize,
        partial: &Assignment,
    ) -> Found {
        self.budget.tick()?;
        if i == pieces.len() {
            return Ok(Some(self.assemble(pieces, chosen, partial)));
        }
        for &r in &candidates[i] {
            chosen[i] = r;
            let members: Vec<usize> = (0..=i).filter(|&j| chosen[j] == r).collect();
            if self.region_fits(pieces, r, &members, partial)?.is_some() {
                if let Some(a) = self.pieces_rec(pieces, candidates, chosen, i + 1, partial)? {
                    return Ok(Some(a));
                }
            }
        }
        chosen[i] = usize::MAX;
        Ok(None)
    }

    /// Arcs for the vertices of `members` inside region `r` that keep its
    /// augmented graph planar, as `(vertex, arc index)` pairs.
    fn region_fits(
        &mut self,
        pieces: &[Piece],
        r: usize,
        members: &[usize],
        partial: &Assignment,
    ) -> std::result::Result<Option<Vec<(usize, usize)>>, Exhausted> {
        let key = (r, members.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let p = self.arr().positions();
        let base = anchored_arcs(partial, p, &self.rd.regions[r]);
        let open = self.open_arcs(partial, r);
        let vertices: Vec<usize> = members.iter().flat_map(|&j| pieces[j].vertices.iter().copied()).collect();
        let edges: Vec<usize> = members.iter().flat_map(|&j| pieces[j].edges.iter().copied()).collect();
        let mut choice = vec![0usize; vertices.len()];
        let mut result = None;
        if open.is_empty() && !vertices.is_empty() {
            self.memo.insert(key, None);
            return Ok(None);
        }
        loop {
            self.budget.tick()?;
            let mut arcs = base.clone();
            for (x, &c) in vertices.iter().zip(&choice) {
                arcs[open[c]].vertices.push(*x);
            }
            if is_planar(&augment(self.g, &edges, &arcs).graph) {
                result = Some(vertices.iter().zip(&choice).map(|(&x, &c)| (x, open[c])).collect());
                break;
            }
            // next arc choice, odometer style
            let mut d = 0;
            while d < choice.len() {
                choice[d] += 1;
                if choice[d] < open.len() {
                    break;
                }
                choice[d] = 0;
                d += 1;
            }
            if d == choice.len() {
                break;
            }
        }
        self.memo.insert(key, result.clone());
        Ok(result)
    }

    fn assemble(&mut self, pieces: &[Piece], chosen: &[usize], partial: &Assignment) -> Assignment {
        let p = self.arr().positions();
        let mut a = partial.clone();
        for r in 0..self.rd.regions.len() {
            let members: Vec<usize> = (0..pieces.len()).filter(|&j| chosen[j] == r).collect();
            if members.is_empty() {
                continue;
            }
            let placed = self.memo[&(r, members.clone())].clone().expect("feasible region");
            let region = &self.rd.regions[r];
            let mut arcs: Vec<AnchoredArc> = anchored_arcs(partial, p, region);
            for &(x, i) in &placed {
                arcs[i].vertices.push(x);
            }
            let edges: Vec<usize> = members.iter().flat_map(|&j| pieces[j].edges.iter().copied()).collect();
            for &e in &edges {
                a.edge_regions[e] = Some(r);
            }
            let ordered_arcs = arc_orders(self.g, &edges, &arcs);
            for (i, arc) in region.arcs().enumerate() {
                if !ordered_arcs[i].is_empty() {
                    a.arc_vertices[arc.from] = ordered_arcs[i].clone();
                }
            }
        }
        a
    }
}

/// Vertex order along each arc, read from a planar embedding of the
/// augmented region graph around the arc's boundary vertex.
fn arc_orders(g: &Graph, edges: &[usize], arcs: &[AnchoredArc]) -> Vec<Vec<usize>> {
    let aug = augment(g, edges, arcs);
    let rot = planar_rotation(&aug.graph).expect("planar region");
    arcs.iter()
        .enumerate()
        .map(|(i, arc)| {
            if arc.vertices.len() < 2 {
                return arc.vertices.clone();
            }
            let b = aug.boundary_vertices[i];
            let around: Vec<usize> = rot[b].clone();
            let on_arc = |x: &usize| arc.vertices.contains(x);
            let Some((u, w)) = arc.anchors else {
                return around.into_iter().filter(on_arc).collect();
            };
            let start = around.iter().position(|&x| x == u).expect("anchor next to b");
            let turned: Vec<usize> = around[start..].iter().chain(&around[..start]).copied().collect();
            let iw = turned.iter().position(|&x| x == w).expect("anchor next to b");
            let ih = turned.iter().position(|&x| x == aug.hub).expect("hub next to b");
            if ih > iw {
                turned[1..iw].iter().copied().filter(on_arc).collect()
            } else {
                turned[iw + 1..].iter().rev().copied().filter(on_arc).collect()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn k4_layout() -> (Graph, CyclicOrder, DiskArrangement, Bundling) {
        let g = catalog::complete(4);
        let ord = CyclicOrder::identity(4);
        let arr = build_chord_arrangement(&g, &ord);
        let b = min_bundling_exact(&arr, &Budget::default()).bundling;
        (g, ord, arr, b)
    }

    #[test]
    fn k4_layout_certificate_checks() {
        let (g, ord, arr, b) = k4_layout();
        assert_eq!(b.len(), 1);
        let cert = certificate_from_layout(&g, &ord, &arr, &b, 1).unwrap();
        verify_certificate(&g, &cert).unwrap();
        // both diagonals get a parallel copy
        assert_eq!(cert.frame.chords.len(), 4);
        let copies = cert
            .assignment
            .frame_images
            .iter()
            .filter(|im| matches!(im, FrameImage::Copy(_)))
            .count();
        assert_eq!(copies, 2);
    }

    #[test]
    fn misplaced_component_violates_arc_regions() {
        let mut g = catalog::complete(4);
        let x = g.add_vertex("x");
        g.add_edge(x, 0).unwrap();
        let ord = CyclicOrder::new(&g, vec![0, 4, 1, 2, 3]).unwrap();
        let arr = build_chord_arrangement(&g, &ord);
        let b = min_bundling_exact(&arr, &Budget::default()).bundling;
        let cert = certificate_from_layout(&g, &ord, &arr, &b, 1).unwrap();
        let fd = FrameDrawing::from_doc(&cert.frame).unwrap();
        let rd = decompose(&fd).unwrap();
        let mut a = cert.assignment.clone();
        let e = g.incident(x)[0];
        let home = a.edge_regions[e].unwrap();
        a.edge_regions[e] = Some((home + 1) % rd.regions.len());
        let err = check_properties(&g, &fd, &rd, &a).unwrap_err();
        assert!(matches!(err.property, 5 | 6), "{err}");
    }

    #[test]
    fn outerplanar_graphs_certify_at_zero() {
        for g in [catalog::cycle(6), catalog::path(4), catalog::star(5)] {
            let d = decide_bco(&g, 0, &Budget::default());
            let Decision::Yes(c) = d else { panic!() };
            verify_certificate(&g, &c).unwrap();
            assert!(c.layout.bundling.is_empty());
        }
        assert_eq!(decide_bco(&catalog::complete(4), 0, &Budget::default()), Decision::No);
    }

    #[test]
    fn k4_one_and_k33_not_one() {
        let Decision::Yes(c) = decide_bco(&catalog::complete(4), 1, &Budget::default()) else {
            panic!()
        };
        verify_certificate(&catalog::complete(4), &c).unwrap();
        let k33 = catalog::complete_bipartite(3, 3);
        assert_eq!(decide_bco(&k33, 1, &Budget::default()), Decision::No);
    }

    fn one_group_drawings() -> Vec<FrameDrawing> {
        enumerate_frame_arrangements(4)
            .iter()
            .flat_map(|arr| crate::frames::enumerate_groupings(arr, 1))
            .collect()
    }

    #[test]
    fn exhaustive_search_finds_k4() {
        let g = catalog::complete(4);
        let mut hits = 0;
        for fd in one_group_drawings() {
            let rd = decompose(&fd).unwrap();
            let a = solve_assignment(&g, &fd, &rd, &Budget::default()).unwrap().unwrap();
            check_properties(&g, &fd, &rd, &a).unwrap();
            realize_drawing(&g, &a, 1, &Budget::default()).unwrap();
            hits += 1;
        }
        assert_eq!(hits, 2);
    }

    #[test]
    fn k5_has_no_assignment_on_one_group() {
        let g = catalog::complete(5);
        for fd in one_group_drawings() {
            let rd = decompose(&fd).unwrap();
            assert_eq!(solve_assignment(&g, &fd, &rd, &Budget::default()).unwrap(), None);
        }
    }
}
