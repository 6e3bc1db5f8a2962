//! Orientable genus by rotation-system search, and the bundled crossing
//! numbers it determines.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::arrangement::DiskArrangement;
use crate::budget::Budget;
use crate::bundling::{min_bundling_exact, Bundling};
use crate::circular::{build_chord_arrangement, enumerate_cyclic_orders, CyclicOrder};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::planarity::{biconnected_blocks, planar_rotation};

/// Cyclic order of incident edge ids around each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSystem(pub Vec<Vec<usize>>);

impl RotationSystem {
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.0.len() != g.vertex_count() {
            return Err(Error::InvalidCertificate("one rotation per vertex required".into()));
        }
        for v in 0..g.vertex_count() {
            let mut a = self.0[v].clone();
            let mut b = g.incident(v).to_vec();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::InvalidCertificate(format!(
                    "rotation at {} does not list its incident edges",
                    g.name(v)
                )));
            }
        }
        Ok(())
    }
}

/// Faces of the embedding given by `rot`. Dart `2e` runs along edge `e`
/// as stored, `2e + 1` against it; the face after a dart `u -> v` leaves
/// `v` along the successor of the edge in the rotation at `v`.
pub fn trace_faces(g: &Graph, rot: &RotationSystem) -> Vec<Vec<usize>> {
    let slot = slots(g, &rot.0);
    let m = g.edge_count();
    let mut seen = vec![false; 2 * m];
    let mut faces = Vec::new();
    for start in 0..2 * m {
        if seen[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            face.push(d);
            d = next_dart(g, &rot.0, &slot, d);
        }
        faces.push(face);
    }
    faces
}

fn slots(g: &Graph, rot: &[Vec<usize>]) -> Vec<HashMap<usize, usize>> {
    (0..g.vertex_count())
        .map(|v| rot[v].iter().enumerate().map(|(i, &e)| (e, i)).collect())
        .collect()
}

fn head(g: &Graph, d: usize) -> usize {
    let (u, v) = g.edge(d / 2);
    if d % 2 == 0 {
        v
    } else {
        u
    }
}

fn leaving(g: &Graph, e: usize, v: usize) -> usize {
    if g.edge(e).0 == v {
        2 * e
    } else {
        2 * e + 1
    }
}

fn next_dart(g: &Graph, rot: &[Vec<usize>], slot: &[HashMap<usize, usize>], d: usize) -> usize {
    let v = head(g, d);
    let r = &rot[v];
    let i = slot[v][&(d / 2)];
    leaving(g, r[(i + 1) % r.len()], v)
}

/// Genus of the embedding of a connected graph given by `rot`.
pub fn genus_of_rotation(g: &Graph, rot: &RotationSystem) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    rot.validate(g)?;
    let n = g.vertex_count() as i64;
    let m = g.edge_count() as i64;
    let f = if m == 0 { 1 } else { trace_faces(g, rot).len() as i64 };
    let twice = 2 - n + m - f;
    debug_assert!(twice >= 0 && twice % 2 == 0);
    Ok((twice / 2) as usize)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusResult {
    /// The genus if `exact`, otherwise the best upper bound found.
    pub genus: usize,
    pub exact: bool,
    /// Embedding attaining `genus`, per component merged into one system.
    pub rotation: RotationSystem,
}

/// Minimum genus, summed over components.
pub fn min_genus(g: &Graph, budget: &Budget) -> GenusResult {
    let mut total = 0;
    let mut exact = true;
    let mut rotation = vec![Vec::new(); g.vertex_count()];
    for comp in g.components() {
        let sub = g.induced(&comp);
        let Capped::Done(r) = min_genus_connected(&sub, None, budget) else {
            unreachable!("uncapped search always finishes")
        };
        total += r.genus;
        exact &= r.exact;
        // induced keeps edge order, so sub edge i is the i-th edge touching comp
        let edge_map: Vec<usize> = (0..g.edge_count())
            .filter(|&e| comp.binary_search(&g.edge(e).0).is_ok())
            .collect();
        for (i, &v) in comp.iter().enumerate() {
            rotation[v] = r.rotation.0[i].iter().map(|&e| edge_map[e]).collect();
        }
    }
    GenusResult {
        genus: total,
        exact,
        rotation: RotationSystem(rotation),
    }
}

/// `Some(true)` if `g` embeds with genus at most `limit`, `Some(false)` if
/// it does not, `None` if the budget ran out first.
pub fn min_genus_at_most(g: &Graph, limit: usize, budget: &Budget) -> Option<bool> {
    let mut total = 0;
    for comp in g.components() {
        let sub = g.induced(&comp);
        match min_genus_connected(&sub, Some(limit - total), budget) {
            Capped::Done(r) if r.exact => total += r.genus,
            Capped::Done(_) => return None,
            Capped::Above => return Some(false),
        }
        if total > limit {
            return Some(false);
        }
    }
    Some(true)
}

enum Capped {
    Done(GenusResult),
    /// The genus exceeds the cap.
    Above,
}

/// Search for a connected graph by increasing target genus. With `cap`,
/// gives up as soon as every genus up to the cap is ruled out.
fn min_genus_connected(g: &Graph, cap: Option<usize>, budget: &Budget) -> Capped {
    let n = g.vertex_count();
    let m = g.edge_count();
    let blocks = biconnected_blocks(g);
    if blocks.len() > 1 {
        return by_blocks(g, &blocks, cap, budget);
    }
    if let Some(rot) = planar_embedding(g) {
        return Capped::Done(GenusResult {
            genus: 0,
            exact: true,
            rotation: rot,
        });
    }
    let default = RotationSystem((0..n).map(|v| g.incident(v).to_vec()).collect());
    let upper = genus_of_rotation(g, &default).expect("connected");
    let min_face = if g.is_simple() { 3 } else { 2 };
    let f_max = (2 * m / min_face) as i64;
    let euler = (2 - n as i64 + m as i64 - f_max + 1) / 2;
    let planar = planar_rotation(g).is_some();
    let mut target = euler.max(if planar { 0 } else { 1 }) as usize;
    while target < upper {
        if cap.map_or(false, |c| target > c) {
            return Capped::Above;
        }
        match search(g, target, budget) {
            Search::Found(rot) => {
                let found = genus_of_rotation(g, &rot).expect("connected");
                return Capped::Done(GenusResult {
                    genus: found,
                    exact: true,
                    rotation: rot,
                });
            }
            Search::None => target += 1,
            Search::Exhausted => {
                return Capped::Done(GenusResult {
                    genus: upper,
                    exact: false,
                    rotation: default,
                })
            }
        }
    }
    if cap.map_or(false, |c| upper > c) {
        return Capped::Above;
    }
    Capped::Done(GenusResult {
        genus: upper,
        exact: true,
        rotation: default,
    })
}

/// Genus is additive over blocks; block rotations are concatenated at cut
/// vertices, which merges one face of each block.
fn by_blocks(g: &Graph, blocks: &[Vec<usize>], cap: Option<usize>, budget: &Budget) -> Capped {
    let mut total = 0;
    let mut exact = true;
    let mut rotation = vec![Vec::new(); g.vertex_count()];
    for block in blocks {
        let mut verts: Vec<usize> = block
            .iter()
            .flat_map(|&e| {
                let (u, v) = g.edge(e);
                [u, v]
            })
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let mut sub = Graph::new();
        for &v in &verts {
            sub.add_vertex(g.name(v));
        }
        for &e in block {
            let (u, v) = g.edge(e);
            let lu = verts.binary_search(&u).expect("block vertex");
            let lv = verts.binary_search(&v).expect("block vertex");
            sub.add_edge(lu, lv).expect("no loops");
        }
        let r = match min_genus_connected(&sub, cap.map(|c| c.saturating_sub(total)), budget) {
            Capped::Done(r) => r,
            Capped::Above => return Capped::Above,
        };
        total += r.genus;
        exact &= r.exact;
        if cap.map_or(false, |c| total > c) && exact {
            return Capped::Above;
        }
        for (i, &v) in verts.iter().enumerate() {
            rotation[v].extend(r.rotation.0[i].iter().map(|&e| block[e]));
        }
    }
    Capped::Done(GenusResult {
        genus: total,
        exact,
        rotation: RotationSystem(rotation),
    })
}

/// Planar rotation of the simple graph with parallel copies inserted next
/// to their first copy, checked by face tracing.
fn planar_embedding(g: &Graph) -> Option<RotationSystem> {
    let nbrs = planar_rotation(g)?;
    let n = g.vertex_count();
    let mut rot = Vec::with_capacity(n);
    for v in 0..n {
        let mut r = Vec::new();
        for &w in &nbrs[v] {
            let mut es = g.edges_between(v, w);
            // copies sit on the same side at both ends only in mirrored order
            es.sort_unstable();
            if v > w {
                es.reverse();
            }
            r.extend(es);
        }
        rot.push(r);
    }
    let rot = RotationSystem(rot);
    if rot.validate(g).is_ok() && genus_of_rotation(g, &rot).ok() == Some(0) {
        Some(rot)
    } else {
        None
    }
}

enum Search {
    Found(RotationSystem),
    None,
    Exhausted,
}

/// Branch and bound for an embedding of genus at most `target`.
fn search(g: &Graph, target: usize, budget: &Budget) -> Search {
    let n = g.vertex_count();
    let m = g.edge_count();
    let min_face = if g.is_simple() && m >= 3 { 3 } else { 2 };
    // faces needed: f >= 2 - n + m - 2 * target
    let need = 2 - n as i64 + m as i64 - 2 * target as i64;
    let start = (0..n).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap_or(0);
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    let mut st = State {
        g,
        order,
        rot: vec![Vec::new(); n],
        slot: vec![HashMap::new(); n],
        assigned: vec![false; n],
        need,
        min_face,
        budget,
        marks: vec![0; 2 * m],
        stamp: 0,
    };
    st.rec(0)
}

struct State<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    rot: Vec<Vec<usize>>,
    slot: Vec<HashMap<usize, usize>>,
    assigned: Vec<bool>,
    need: i64,
    min_face: usize,
    budget: &'a Budget,
    marks: Vec<u32>,
    stamp: u32,
}

impl State<'_> {
    fn rec(&mut self, depth: usize) -> Search {
        if self.budget.tick().is_err() {
            return Search::Exhausted;
        }
        if !self.feasible() {
            return Search::None;
        }
        if depth == self.order.len() {
            return Search::Found(RotationSystem(self.rot.clone()));
        }
        let v = self.order[depth];
        let inc = self.g.incident(v).to_vec();
        let d = inc.len();
        let mut rest: Vec<usize> = (1..d).collect();
        let mut result = Search::None;
        permute(&mut rest, 0, &mut |perm| {
            if matches!(result, Search::Found(_) | Search::Exhausted) {
                return;
            }
            // the first vertex is fixed up to mirror image
            if depth == 0 && perm.len() >= 2 && perm[0] > perm[perm.len() - 1] {
                return;
            }
            let mut r = vec![inc[0]];
            r.extend(perm.iter().map(|&i| inc[i]));
            self.slot[v] = r.iter().enumerate().map(|(i, &e)| (e, i)).collect();
            self.rot[v] = r;
            self.assigned[v] = true;
            let sub = self.rec(depth + 1);
            self.assigned[v] = false;
            if !matches!(sub, Search::None) {
                result = sub;
            }
        });
        result
    }

    /// Whether the closed faces so far still allow enough faces in total.
    fn feasible(&mut self) -> bool {
        let g = self.g;
        let m = g.edge_count();
        self.stamp += 1;
        let stamp = self.stamp;
        let mut closed = 0i64;
        let mut in_closed = 0usize;
        for start in 0..2 * m {
            if self.marks[start] == stamp {
                continue;
            }
            let mut d = start;
            let mut len = 0;
            let ok = loop {
                let v = head(g, d);
                if !self.assigned[v] {
                    break false;
                }
                self.marks[d] = stamp;
                len += 1;
                let r = &self.rot[v];
                let i = self.slot[v][&(d / 2)];
                d = leaving(g, r[(i + 1) % r.len()], v);
                if d == start {
                    break true;
                }
                if self.marks[d] == stamp {
                    // joined a walk already known to be open
                    break false;
                }
            };
            if ok {
                closed += 1;
                in_closed += len;
            }
        }
        let open = 2 * m - in_closed;
        closed + (open / self.min_face) as i64 >= self.need
    }
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// `bc'(G)`: the genus of `G`.
pub fn bc_prime(g: &Graph, budget: &Budget) -> GenusResult {
    min_genus(g, budget)
}

/// `bc°'(G)`: the genus of `G` plus a vertex adjacent to all others.
pub fn bco_prime(g: &Graph, budget: &Budget) -> GenusResult {
    min_genus(&g.with_apex(), budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleBound {
    /// Smallest bundling over all straight-chord layouts, with a witness.
    Value {
        k: usize,
        order: CyclicOrder,
        arrangement: DiskArrangement,
        bundling: Bundling,
    },
    /// Every layout needs more than the cap.
    Exceeds,
    Inconclusive,
}

/// Minimum over all cyclic orders of the exact bundling number of the
/// straight-chord layout; an upper bound on `bc°(G)`.
pub fn chord_oracle_bco_upper(g: &Graph, max_k: usize, budget: &Budget) -> OracleBound {
    let mut best: Option<(usize, CyclicOrder, DiskArrangement, Bundling)> = None;
    let mut unsure = false;
    for ord in enumerate_cyclic_orders(g.vertex_count()) {
        let arr = build_chord_arrangement(g, &ord);
        let cap = best.as_ref().map_or(max_k + 1, |b| b.0);
        if arr.crossing_count() == 0 {
            best = Some((0, ord, arr, Vec::new()));
            break;
        }
        let r = crate::bundling::bundles_within(&arr, cap.saturating_sub(1), budget);
        match r {
            Some(true) => {
                let exact = min_bundling_exact(&arr, budget);
                unsure |= !exact.optimal;
                let k = exact.bundling.len();
                if k < cap {
                    best = Some((k, ord, arr, exact.bundling));
                }
            }
            Some(false) => {}
            None => unsure = true,
        }
        if budget.is_exhausted() {
            unsure = true;
            break;
        }
    }
    match best {
        Some((k, order, arrangement, bundling)) if !unsure || k == 0 => OracleBound::Value {
            k,
            order,
            arrangement,
            bundling,
        },
        Some(_) | None if unsure => OracleBound::Inconclusive,
        _ => OracleBound::Exceeds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::planarity::is_planar;

    fn genus(g: &Graph) -> usize {
        let r = min_genus(g, &Budget::default());
        assert!(r.exact);
        assert_eq!(genus_of_rotation(g, &r.rotation).unwrap(), r.genus);
        r.genus
    }

    #[test]
    fn rotation_genus_basics() {
        let edge = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(genus_of_rotation(&edge, &RotationSystem(vec![vec![0], vec![0]])).unwrap(), 0);
        let k4 = catalog::complete(4);
        let rot = min_genus(&k4, &Budget::default()).rotation;
        assert_eq!(trace_faces(&k4, &rot).len(), 4);
        let disconnected = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let r = RotationSystem(vec![vec![0], vec![0], vec![1], vec![1]]);
        assert!(genus_of_rotation(&disconnected, &r).is_err());
    }

    #[test]
    fn small_nonplanar_graphs_are_toroidal() {
        assert_eq!(genus(&catalog::complete(5)), 1);
        assert_eq!(genus(&catalog::complete_bipartite(3, 3)), 1);
        assert_eq!(genus(&catalog::complete(6)), 1);
        assert_eq!(genus(&catalog::complete(4)), 0);
    }

    #[test]
    fn two_toroidal_blocks_need_genus_two() {
        // K5 and K3,3 glued at a vertex; the Euler bound only gives 1
        let mut g = catalog::complete(5);
        let base = g.vertex_count();
        for _ in 0..5 {
            g.add_vertex(&format!("x{}", g.vertex_count()));
        }
        // K3,3 on {0, base..base+5} with sides {0, base, base+1} and the rest
        for a in [0, base, base + 1] {
            for b in [base + 2, base + 3, base + 4] {
                g.add_edge(a, b).unwrap();
            }
        }
        assert_eq!(genus(&g), 2);
    }

    #[test]
    fn parallel_edges_keep_planarity() {
        let mut g = catalog::complete(4);
        g.add_edge(0, 1).unwrap();
        g.add_edge(2, 3).unwrap();
        assert_eq!(genus(&g), 0);
    }

    #[test]
    fn genus_exact_against_all_rotations() {
        // exhaustive oracle over every rotation system of small graphs
        for g in catalog::connected_graphs(5) {
            let n = g.vertex_count();
            let mut best = usize::MAX;
            let mut rot: Vec<Vec<usize>> = (0..n).map(|v| g.incident(v).to_vec()).collect();
            all_rotations(&g, 0, &mut rot, &mut best);
            assert_eq!(genus(&g), best);
            assert_eq!(best == 0, is_planar(&g));
        }
    }

    fn all_rotations(g: &Graph, v: usize, rot: &mut Vec<Vec<usize>>, best: &mut usize) {
        if v == g.vertex_count() {
            let x = genus_of_rotation(g, &RotationSystem(rot.clone())).unwrap();
            *best = (*best).min(x);
            return;
        }
        let inc = g.incident(v).to_vec();
        if inc.len() <= 2 {
            all_rotations(g, v + 1, rot, best);
            return;
        }
        let rest: Vec<usize> = inc[1..].to_vec();
        let mut idx: Vec<usize> = (0..rest.len()).collect();
        permute(&mut idx, 0, &mut |p| {
            let mut r = vec![inc[0]];
            r.extend(p.iter().map(|&i| rest[i]));
            rot[v] = r;
            all_rotations(g, v + 1, rot, best);
        });
    }

    #[test]
    fn apex_variants() {
        let b = Budget::default();
        assert_eq!(bco_prime(&catalog::complete_bipartite(3, 3), &b).genus, 1);
        assert_eq!(bco_prime(&catalog::complete(4), &b).genus, 1);
        assert_eq!(bco_prime(&catalog::cycle(5), &b).genus, 0);
        assert_eq!(bc_prime(&catalog::complete(6), &b).genus, 1);
        assert_eq!(min_genus_at_most(&catalog::complete(5), 0, &b), Some(false));
        assert_eq!(min_genus_at_most(&catalog::complete(5), 1, &b), Some(true));
    }

    #[test]
    fn subdivision_keeps_genus() {
        for g in [catalog::complete(5), catalog::complete_bipartite(3, 3)] {
            assert_eq!(genus(&g.subdivide_all(1)), genus(&g));
        }
    }

    #[test]
    fn inconclusive_when_budget_is_tiny() {
        let r = min_genus(&catalog::complete(7), &Budget::new(10));
        assert!(!r.exact);
        assert!(r.genus >= 1);
    }

    #[test]
    fn chord_oracle_small_cases() {
        let b = Budget::default();
        match chord_oracle_bco_upper(&catalog::complete(4), 5, &b) {
            OracleBound::Value { k, .. } => assert_eq!(k, 1),
            other => panic!("{other:?}"),
        }
        match chord_oracle_bco_upper(&catalog::cycle(5), 5, &b) {
            OracleBound::Value { k, .. } => assert_eq!(k, 0),
            other => panic!("{other:?}"),
        }
        assert_eq!(chord_oracle_bco_upper(&catalog::complete(6), 0, &b), OracleBound::Exceeds);
    }
}
