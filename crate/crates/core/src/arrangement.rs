//! Chords in a disk anchored at boundary positions, with explicit crossing
//! orders, and the plane map they induce.
//!
//! Boundary positions `0..P` run counterclockwise. Two chords cross iff
//! their endpoints interleave; each chord lists its crossings in order
//! from `ends[0]` to `ends[1]`. The plane map treats boundary positions
//! and crossings as vertices and boundary arcs and chord segments as
//! edges; face tracing plus Euler's formula certifies that the crossing
//! orders are realizable.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskArrangement {
    positions: usize,
    chords: Vec<[usize; 2]>,
    labels: Vec<usize>,
    crossings: Vec<(usize, usize)>,
    sequences: Vec<Vec<usize>>,
    lookup: HashMap<(usize, usize), usize>,
}

/// `c` or `d` strictly inside the counterclockwise interval `(a, b)`,
/// but not both; shared endpoints never interleave.
pub fn interleaved(positions: usize, a: usize, b: usize, c: usize, d: usize) -> bool {
    if c == a || c == b || d == a || d == b {
        return false;
    }
    in_open_interval(positions, a, b, c) != in_open_interval(positions, a, b, d)
}

/// Whether `x` lies strictly inside the counterclockwise interval `(a, b)`.
pub fn in_open_interval(positions: usize, a: usize, b: usize, x: usize) -> bool {
    let span = (b + positions - a) % positions;
    let off = (x + positions - a) % positions;
    off > 0 && off < span
}

impl DiskArrangement {
    /// Builds an arrangement from per-chord partner sequences (chord ids in
    /// the order met from `ends[0]`). Rejects anything that is not a simple,
    /// realizable arrangement.
    pub fn new(positions: usize, chords: Vec<[usize; 2]>, partners: Vec<Vec<usize>>) -> Result<Self> {
        let labels = (0..chords.len()).collect();
        Self::with_labels(positions, chords, labels, partners)
    }

    pub fn with_labels(
        positions: usize,
        chords: Vec<[usize; 2]>,
        labels: Vec<usize>,
        partners: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidArrangement(m));
        if partners.len() != chords.len() || labels.len() != chords.len() {
            return bad("one partner list and label per chord required".into());
        }
        for (i, c) in chords.iter().enumerate() {
            if c[0] >= positions || c[1] >= positions || c[0] == c[1] {
                return bad(format!("chord {i} has invalid ends {c:?}"));
            }
        }
        let mut crossings = Vec::new();
        let mut lookup = HashMap::new();
        for i in 0..chords.len() {
            for j in i + 1..chords.len() {
                let [a, b] = chords[i];
                let [c, d] = chords[j];
                if interleaved(positions, a, b, c, d) {
                    lookup.insert((i, j), crossings.len());
                    crossings.push((i, j));
                }
            }
        }
        let mut sequences = Vec::with_capacity(chords.len());
        for (i, list) in partners.iter().enumerate() {
            let mut seq = Vec::with_capacity(list.len());
            for &j in list {
                let key = (i.min(j), i.max(j));
                match lookup.get(&key) {
                    Some(&x) if !seq.contains(&x) => seq.push(x),
                    Some(_) => return bad(format!("chord {i} lists {j} twice")),
                    None => return bad(format!("chords {i} and {j} do not interleave")),
                }
            }
            sequences.push(seq);
        }
        for (x, &(i, j)) in crossings.iter().enumerate() {
            if !sequences[i].contains(&x) || !sequences[j].contains(&x) {
                return bad(format!("crossing of chords {i} and {j} missing from a sequence"));
            }
        }
        let arr = DiskArrangement {
            positions,
            chords,
            labels,
            crossings,
            sequences,
            lookup,
        };
        let map = arr.plane_map();
        if !map.satisfies_euler() {
            return bad("crossing orders are not realizable in the disk".into());
        }
        Ok(arr)
    }

    pub fn empty(positions: usize) -> Self {
        DiskArrangement {
            positions,
            chords: Vec::new(),
            labels: Vec::new(),
            crossings: Vec::new(),
            sequences: Vec::new(),
            lookup: HashMap::new(),
        }
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    pub fn chord_count(&self) -> usize {
        self.chords.len()
    }

    pub fn chords(&self) -> &[[usize; 2]] {
        &self.chords
    }

    pub fn chord(&self, c: usize) -> [usize; 2] {
        self.chords[c]
    }

    pub fn label(&self, c: usize) -> usize {
        self.labels[c]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Chord pair `(i, j)`, `i < j`, of crossing `x`.
    pub fn crossing(&self, x: usize) -> (usize, usize) {
        self.crossings[x]
    }

    pub fn crossings(&self) -> &[(usize, usize)] {
        &self.crossings
    }

    pub fn crossing_between(&self, a: usize, b: usize) -> Option<usize> {
        self.lookup.get(&(a.min(b), a.max(b))).copied()
    }

    /// Crossing ids along chord `c` from `ends[0]`.
    pub fn sequence(&self, c: usize) -> &[usize] {
        &self.sequences[c]
    }

    /// Partner chords along chord `c` from `ends[0]`.
    pub fn partners(&self, c: usize) -> Vec<usize> {
        self.sequences[c]
            .iter()
            .map(|&x| self.partner(x, c))
            .collect()
    }

    pub fn partner(&self, x: usize, c: usize) -> usize {
        let (i, j) = self.crossings[x];
        if i == c {
            j
        } else {
            i
        }
    }

    pub fn index_on(&self, c: usize, x: usize) -> Option<usize> {
        self.sequences[c].iter().position(|&y| y == x)
    }

    pub fn chords_at(&self, p: usize) -> Vec<usize> {
        (0..self.chords.len())
            .filter(|&c| self.chords[c].contains(&p))
            .collect()
    }

    /// The arrangement restricted to `keep` (in that order), keeping all
    /// boundary positions.
    pub fn restrict(&self, keep: &[usize]) -> DiskArrangement {
        let mut map = vec![usize::MAX; self.chords.len()];
        for (i, &c) in keep.iter().enumerate() {
            map[c] = i;
        }
        let chords = keep.iter().map(|&c| self.chords[c]).collect();
        let labels = keep.iter().map(|&c| self.labels[c]).collect();
        let partners = keep
            .iter()
            .map(|&c| {
                self.partners(c)
                    .into_iter()
                    .filter(|&p| map[p] != usize::MAX)
                    .map(|p| map[p])
                    .collect()
            })
            .collect();
        DiskArrangement::with_labels(self.positions, chords, labels, partners)
            .expect("sub-arrangement of a realizable arrangement is realizable")
    }

    /// Canonical form under rotation and reflection of the boundary.
    pub fn canonical_code(&self) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        for t in dihedral(self.positions) {
            let code = self.code_under(&t).0;
            if best.as_ref().map_or(true, |b| code < *b) {
                best = Some(code);
            }
        }
        best.unwrap_or_default()
    }

    /// Code and chord relabeling under a boundary transformation.
    pub(crate) fn code_under(&self, t: &Dihedral) -> (Vec<u32>, Vec<usize>) {
        let p = self.positions;
        let moved: Vec<[usize; 2]> = self
            .chords
            .iter()
            .map(|c| [t.apply(p, c[0]), t.apply(p, c[1])])
            .collect();
        let mut order: Vec<usize> = (0..self.chords.len()).collect();
        order.sort_by_key(|&c| {
            let [a, b] = moved[c];
            (a.min(b), a.max(b))
        });
        let mut rank = vec![0usize; order.len()];
        for (r, &c) in order.iter().enumerate() {
            rank[c] = r;
        }
        let mut code = vec![p as u32, self.chords.len() as u32];
        for &c in &order {
            let [a, b] = moved[c];
            let mut partners: Vec<u32> = self.partners(c).iter().map(|&x| rank[x] as u32).collect();
            if a > b {
                partners.reverse();
            }
            code.push(a.min(b) as u32);
            code.push(a.max(b) as u32);
            code.push(partners.len() as u32);
            code.extend(partners);
        }
        (code, rank)
    }

    pub fn plane_map(&self) -> PlaneMap {
        PlaneMap::build(self)
    }
}

/// Rotation by `shift`, optionally preceded by reflection `p -> -p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Dihedral {
    pub shift: usize,
    pub reflect: bool,
}

impl Dihedral {
    pub fn apply(&self, positions: usize, x: usize) -> usize {
        let base = if self.reflect { (positions - x) % positions } else { x };
        (base + self.shift) % positions
    }
}

pub(crate) fn dihedral(positions: usize) -> Vec<Dihedral> {
    if positions == 0 {
        return vec![Dihedral { shift: 0, reflect: false }];
    }
    let mut out = Vec::with_capacity(2 * positions);
    for reflect in [false, true] {
        for shift in 0..positions {
            out.push(Dihedral { shift, reflect });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Boundary arc from position `p` to `p + 1`.
    Arc(usize),
    /// Piece `index` of a chord, between its `index`-th and
    /// `index + 1`-th point counting `ends[0]` as point 0.
    Segment { chord: usize, index: usize },
}

/// Plane graph of an arrangement. Half-edge `2e` runs along edge `e` in its
/// stored direction and `2e + 1` against it; faces lie to the left of
/// their half-edges.
#[derive(Debug, Clone)]
pub struct PlaneMap {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub kinds: Vec<EdgeKind>,
    pub rotation: Vec<Vec<usize>>,
    pub faces: Vec<Vec<usize>>,
    pub face_of: Vec<usize>,
    /// Face outside the disk, if the disk has a boundary.
    pub outer: Option<usize>,
}

impl PlaneMap {
    fn build(arr: &DiskArrangement) -> PlaneMap {
        let p = arr.positions;
        let mut edges = Vec::new();
        let mut kinds = Vec::new();
        for i in 0..p {
            edges.push((i, (i + 1) % p));
            kinds.push(EdgeKind::Arc(i));
        }
        // point k on chord c as a plane vertex
        let point = |c: usize, k: usize| -> usize {
            let seq = &arr.sequences[c];
            if k == 0 {
                arr.chords[c][0]
            } else if k == seq.len() + 1 {
                arr.chords[c][1]
            } else {
                p + seq[k - 1]
            }
        };
        let mut seg_base = Vec::with_capacity(arr.chords.len());
        for c in 0..arr.chords.len() {
            seg_base.push(edges.len());
            for k in 0..=arr.sequences[c].len() {
                edges.push((point(c, k), point(c, k + 1)));
                kinds.push(EdgeKind::Segment { chord: c, index: k });
            }
        }
        let vertex_count = p + arr.crossings.len();
        let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        for v in 0..p {
            let mut rot = vec![2 * v];
            let mut at: Vec<(usize, usize)> = Vec::new();
            for c in arr.chords_at(v) {
                let [a, b] = arr.chords[c];
                let (other, half) = if a == v {
                    (b, 2 * seg_base[c])
                } else {
                    (a, 2 * (seg_base[c] + arr.sequences[c].len()) + 1)
                };
                at.push(((other + p - v) % p, half));
            }
            at.sort_unstable();
            rot.extend(at.into_iter().map(|(_, h)| h));
            rot.push(2 * ((v + p - 1) % p) + 1);
            rotation[v] = rot;
        }
        for (x, &(c1, c2)) in arr.crossings.iter().enumerate() {
            let i1 = arr.index_on(c1, x).expect("on chord");
            let i2 = arr.index_on(c2, x).expect("on chord");
            let fwd1 = 2 * (seg_base[c1] + i1 + 1);
            let back1 = 2 * (seg_base[c1] + i1) + 1;
            let fwd2 = 2 * (seg_base[c2] + i2 + 1);
            let back2 = 2 * (seg_base[c2] + i2) + 1;
            let [a, b] = arr.chords[c1];
            // ends of c2 inside (a, b) lie to the right of c1
            let end1_right = in_open_interval(p, a, b, arr.chords[c2][1]);
            let (left, right) = if end1_right { (back2, fwd2) } else { (fwd2, back2) };
            rotation[p + x] = vec![fwd1, left, back1, right];
        }
        let mut slot = vec![(0usize, 0usize); 2 * edges.len()];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &h) in rot.iter().enumerate() {
                slot[h] = (v, i);
            }
        }
        let head = |h: usize| -> usize {
            let (u, v) = edges[h / 2];
            if h % 2 == 0 {
                v
            } else {
                u
            }
        };
        let mut face_of = vec![usize::MAX; 2 * edges.len()];
        let mut faces = Vec::new();
        for start in 0..2 * edges.len() {
            if face_of[start] != usize::MAX {
                continue;
            }
            let f = faces.len();
            let mut face = Vec::new();
            let mut h = start;
            loop {
                face_of[h] = f;
                face.push(h);
                let v = head(h);
                let twin = h ^ 1;
                let (tv, ti) = slot[twin];
                debug_assert_eq!(tv, v);
                let rot = &rotation[v];
                h = rot[(ti + rot.len() - 1) % rot.len()];
                if h == start {
                    break;
                }
            }
            faces.push(face);
        }
        let outer = if p > 0 { Some(face_of[1]) } else { None };
        PlaneMap {
            vertex_count,
            edges,
            kinds,
            rotation,
            faces,
            face_of,
            outer,
        }
    }

    pub fn satisfies_euler(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let v = self.vertex_count as i64;
        let e = self.edges.len() as i64;
        let f = self.faces.len() as i64;
        v - e + f == 2
    }

    /// Faces inside the disk.
    pub fn inner_faces(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| Some(f) != self.outer).collect()
    }

    pub fn tail(&self, h: usize) -> usize {
        let (u, v) = self.edges[h / 2];
        if h % 2 == 0 {
            u
        } else {
            v
        }
    }

    pub fn head(&self, h: usize) -> usize {
        self.tail(h ^ 1)
    }
}
