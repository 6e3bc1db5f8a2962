//! Circular layouts: cyclic vertex orders and their straight-chord
//! arrangements.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::arrangement::{interleaved, DiskArrangement};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Vertices in counterclockwise order around the circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicOrder {
    order: Vec<usize>,
}

impl CyclicOrder {
    pub fn new(g: &Graph, order: Vec<usize>) -> Result<Self> {
        let n = g.vertex_count();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::InvalidOrder(format!(
                "order has {} entries, graph has {n} vertices",
                order.len()
            )));
        }
        for &v in &order {
            if v >= n || seen[v] {
                return Err(Error::InvalidOrder(format!("vertex {v} missing or repeated")));
            }
            seen[v] = true;
        }
        Ok(CyclicOrder { order })
    }

    /// Identity order `0, 1, ..., n-1`.
    pub fn identity(n: usize) -> Self {
        CyclicOrder {
            order: (0..n).collect(),
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `positions()[v]` is the index of vertex `v` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// Lexicographically smallest rotation or reflection.
    pub fn canonical(&self) -> CyclicOrder {
        let n = self.order.len();
        let mut best = self.order.clone();
        for reflect in [false, true] {
            for shift in 0..n {
                let cand: Vec<usize> = (0..n)
                    .map(|i| {
                        let j = if reflect { (shift + n - i) % n } else { (shift + i) % n };
                        self.order[j]
                    })
                    .collect();
                if cand < best {
                    best = cand;
                }
            }
        }
        CyclicOrder { order: best }
    }

    pub fn equivalent(&self, other: &CyclicOrder) -> bool {
        self.canonical() == other.canonical()
    }
}

/// Edge pairs `(e, f)`, `e < f`, whose endpoints interleave in `ord`.
pub fn crossing_pairs(g: &Graph, ord: &CyclicOrder) -> Vec<(usize, usize)> {
    let pos = ord.positions();
    let n = ord.len();
    let mut out = Vec::new();
    for e in 0..g.edge_count() {
        let (a, b) = g.edge(e);
        for f in e + 1..g.edge_count() {
            let (c, d) = g.edge(f);
            if interleaved(n, pos[a], pos[b], pos[c], pos[d]) {
                out.push((e, f));
            }
        }
    }
    out
}

/// Straight-chord drawing of `g` in order `ord`. Chords are labeled by edge
/// id; of several parallel edges only the first is drawn.
pub fn build_chord_arrangement(g: &Graph, ord: &CyclicOrder) -> DiskArrangement {
    let pos = ord.positions();
    let mut seen = HashSet::new();
    let mut chords = Vec::new();
    let mut labels = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if seen.insert((u.min(v), u.max(v))) {
            chords.push([pos[u], pos[v]]);
            labels.push(e);
        }
    }
    straight_chords(ord.len(), chords, labels)
}

/// Arrangement of straight chords between boundary positions, with crossing
/// orders fixed by exact geometry. Chords must join distinct position pairs.
pub fn straight_chords(positions: usize, chords: Vec<[usize; 2]>, labels: Vec<usize>) -> DiskArrangement {
    for seed in 0u64.. {
        if let Some(partners) = straight_partners(positions, &chords, seed) {
            return DiskArrangement::with_labels(positions, chords, labels, partners)
                .expect("straight chords are realizable");
        }
    }
    unreachable!()
}

type Point = (i128, i128);

fn place(positions: usize, seed: u64) -> Vec<Point> {
    // strictly increasing abscissae on a parabola keep the points in
    // convex position, in counterclockwise order
    (0..positions as u64)
        .map(|p| {
            let jitter = (p * p * 7919 * (seed + 1) + seed * 31 + p * seed * 13) % 997;
            let x = (p * 1000 + jitter) as i128;
            (x, x * x)
        })
        .collect()
}

fn cross(a: Point, b: Point) -> i128 {
    a.0 * b.1 - a.1 * b.0
}

fn sub(a: Point, b: Point) -> Point {
    (a.0 - b.0, a.1 - b.1)
}

/// Partner lists along each chord, or `None` if three chords meet in a
/// point for this placement.
fn straight_partners(positions: usize, chords: &[[usize; 2]], seed: u64) -> Option<Vec<Vec<usize>>> {
    let pts = place(positions, seed);
    let mut out = Vec::with_capacity(chords.len());
    for (i, &[a, b]) in chords.iter().enumerate() {
        let (pa, pb) = (pts[a], pts[b]);
        let dir = sub(pb, pa);
        // (numerator, positive denominator) of the crossing parameter
        let mut hits: Vec<(i128, i128, usize)> = Vec::new();
        for (j, &[c, d]) in chords.iter().enumerate() {
            if i == j || !interleaved(positions, a, b, c, d) {
                continue;
            }
            let (pc, pd) = (pts[c], pts[d]);
            let other = sub(pd, pc);
            let mut num = cross(sub(pc, pa), other);
            let mut den = cross(dir, other);
            if den < 0 {
                num = -num;
                den = -den;
            }
            hits.push((num, den, j));
        }
        let cmp = |x: &(i128, i128, usize), y: &(i128, i128, usize)| (x.0 * y.1).cmp(&(y.0 * x.1));
        hits.sort_by(cmp);
        if hits.windows(2).any(|w| cmp(&w[0], &w[1]) == Ordering::Equal) {
            return None;
        }
        out.push(hits.into_iter().map(|h| h.2).collect());
    }
    Some(out)
}

/// One representative per rotation/reflection class, each in canonical
/// form: vertex 0 first and its successor smaller than its predecessor.
pub fn enumerate_cyclic_orders(n: usize) -> CyclicOrders {
    CyclicOrders {
        n,
        rest: if n == 0 { None } else { Some((1..n).collect()) },
    }
}

/// Canonical orders whose second vertex is `second`; these partition the
/// full enumeration and can be consumed in parallel.
pub fn cyclic_orders_starting(n: usize, second: usize) -> impl Iterator<Item = CyclicOrder> {
    enumerate_cyclic_orders(n).filter(move |o| n < 2 || o.order[1] == second)
}

pub struct CyclicOrders {
    n: usize,
    rest: Option<Vec<usize>>,
}

impl Iterator for CyclicOrders {
    type Item = CyclicOrder;

    fn next(&mut self) -> Option<CyclicOrder> {
        loop {
            let rest = self.rest.as_mut()?;
            let keep = rest.len() < 2 || rest[0] < rest[rest.len() - 1];
            let current = if keep {
                let mut order = Vec::with_capacity(self.n);
                order.push(0);
                order.extend_from_slice(rest);
                Some(CyclicOrder { order })
            } else {
                None
            };
            if !next_permutation(rest) {
                self.rest = None;
            }
            if current.is_some() {
                return current;
            }
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
