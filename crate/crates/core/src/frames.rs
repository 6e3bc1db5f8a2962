//! Frame drawings: small chord arrangements whose crossings are grouped
//! into non-degenerate bundled crossings, one lift choice per group.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arrangement::{dihedral, DiskArrangement, EdgeKind};
use crate::budget::{Budget, Exhausted};
use crate::bundling::{blocks_through, is_valid_bundling, BundledCrossing};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameDrawing {
    pub arrangement: DiskArrangement,
    /// Bundles listed in the order met along the other bundle.
    pub groups: Vec<BundledCrossing>,
    /// `true` if `bundle1` of the group goes over its handle.
    pub lifts: Vec<bool>,
}

/// Serializable form of a frame drawing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameDoc {
    pub positions: usize,
    pub chords: Vec<[usize; 2]>,
    pub partners: Vec<Vec<usize>>,
    pub groups: Vec<BundledCrossing>,
    pub lifts: Vec<bool>,
}

impl FrameDrawing {
    pub fn new(arrangement: DiskArrangement, groups: Vec<BundledCrossing>, lifts: Vec<bool>) -> Result<Self> {
        let groups: Vec<BundledCrossing> = groups.into_iter().map(|g| ordered(&arrangement, g)).collect();
        let fd = FrameDrawing {
            arrangement,
            groups,
            lifts,
        };
        fd.validate()?;
        Ok(fd)
    }

    pub fn empty(positions: usize) -> Self {
        FrameDrawing {
            arrangement: DiskArrangement::empty(positions),
            groups: Vec::new(),
            lifts: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.groups.len()
    }

    /// The four frame chords of group `i`: first and last of each bundle.
    pub fn frames(&self, i: usize) -> [usize; 4] {
        let g = &self.groups[i];
        [
            g.bundle1[0],
            g.bundle1[g.bundle1.len() - 1],
            g.bundle2[0],
            g.bundle2[g.bundle2.len() - 1],
        ]
    }

    /// The over and under bundle of group `i`.
    pub fn over_under(&self, i: usize) -> (&[usize], &[usize]) {
        let g = &self.groups[i];
        if self.lifts[i] {
            (&g.bundle1, &g.bundle2)
        } else {
            (&g.bundle2, &g.bundle1)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidFrame(m.to_string()));
        let arr = &self.arrangement;
        if self.lifts.len() != self.groups.len() {
            return bad("one lift per group required");
        }
        if arr.chord_count() > 4 * self.groups.len() {
            return bad("more than four chords per group");
        }
        for c in 0..arr.chord_count() {
            if arr.chords_at(arr.chord(c)[0]).len() != 1 || arr.chords_at(arr.chord(c)[1]).len() != 1 {
                return bad("frame chords must have distinct endpoints");
            }
        }
        if self.groups.iter().any(|g| g.bundle1.len() < 2 || g.bundle2.len() < 2) {
            return bad("every group needs two chords per bundle");
        }
        if !is_valid_bundling(arr, &self.groups) {
            return bad("groups do not partition the crossings into bundled crossings");
        }
        let mut framed = vec![false; arr.chord_count()];
        for i in 0..self.groups.len() {
            let f = self.frames(i);
            for &c in &f {
                framed[c] = true;
            }
            let distinct: BTreeSet<_> = f.iter().collect();
            if distinct.len() != 4 {
                return bad("group frames are not distinct");
            }
        }
        if framed.iter().any(|f| !f) {
            return bad("chord is not a frame of any group");
        }
        Ok(())
    }

    pub fn to_doc(&self) -> FrameDoc {
        let arr = &self.arrangement;
        FrameDoc {
            positions: arr.positions(),
            chords: arr.chords().to_vec(),
            partners: (0..arr.chord_count()).map(|c| arr.partners(c)).collect(),
            groups: self.groups.clone(),
            lifts: self.lifts.clone(),
        }
    }

    pub fn from_doc(doc: &FrameDoc) -> Result<Self> {
        let arr = DiskArrangement::new(doc.positions, doc.chords.clone(), doc.partners.clone())?;
        FrameDrawing::new(arr, doc.groups.clone(), doc.lifts.clone())
    }

    /// Equal iff the drawings agree up to rotation and reflection of the disk.
    pub fn canonical_code(&self) -> Vec<u32> {
        let arr = &self.arrangement;
        let mut best: Option<Vec<u32>> = None;
        for t in dihedral(arr.positions()) {
            let (mut code, rank) = arr.code_under(&t);
            let mut groups: Vec<Vec<u32>> = (0..self.groups.len())
                .map(|i| {
                    let (over, under) = self.over_under(i);
                    let mut o: Vec<u32> = over.iter().map(|&c| rank[c] as u32).collect();
                    let mut u: Vec<u32> = under.iter().map(|&c| rank[c] as u32).collect();
                    o.sort_unstable();
                    u.sort_unstable();
                    let mut v = vec![o.len() as u32];
                    v.extend(o);
                    v.push(u.len() as u32);
                    v.extend(u);
                    v
                })
                .collect();
            groups.sort();
            code.push(groups.len() as u32);
            code.extend(groups.into_iter().flatten());
            if best.as_ref().map_or(true, |b| code < *b) {
                best = Some(code);
            }
        }
        best.unwrap_or_default()
    }
}

/// Lists each bundle in the order it is met along the other one.
pub(crate) fn ordered(arr: &DiskArrangement, mut g: BundledCrossing) -> BundledCrossing {
    if g.bundle1.is_empty() || g.bundle2.is_empty() {
        return g;
    }
    let along = |chord: usize, set: &[usize]| -> Vec<usize> {
        arr.partners(chord).into_iter().filter(|c| set.contains(c)).collect()
    };
    let b2 = along(g.bundle1[0], &g.bundle2);
    let b1 = along(g.bundle2[0], &g.bundle1);
    if b1.len() == g.bundle1.len() && b2.len() == g.bundle2.len() {
        g.bundle1 = b1;
        g.bundle2 = b2;
    }
    g
}

/// Every arrangement obtained by adding one chord to `arr`: the chord enters
/// through a boundary gap, passes through faces crossing each chord at most
/// once, and leaves through a gap of the face it ends in.
pub fn extensions(arr: &DiskArrangement) -> Vec<DiskArrangement> {
    let p = arr.positions();
    if p == 0 {
        return vec![DiskArrangement::new(2, vec![[0, 1]], vec![vec![]]).expect("single chord")];
    }
    let map = arr.plane_map();
    // gaps of each face; gap g lies between positions g and g + 1
    let mut gaps_of: Vec<Vec<usize>> = vec![Vec::new(); map.faces.len()];
    for g in 0..p {
        gaps_of[map.face_of[2 * g]].push(g);
    }
    let mut out = Vec::new();
    for g1 in 0..p {
        let start = map.face_of[2 * g1];
        let mut crossed: Vec<(usize, usize)> = Vec::new();
        let mut used = vec![false; arr.chord_count()];
        walk(arr, &map, &gaps_of, g1, start, &mut crossed, &mut used, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    arr: &DiskArrangement,
    map: &crate::arrangement::PlaneMap,
    gaps_of: &[Vec<usize>],
    g1: usize,
    face: usize,
    crossed: &mut Vec<(usize, usize)>,
    used: &mut [bool],
    out: &mut Vec<DiskArrangement>,
) {
    for &g2 in &gaps_of[face] {
        if g2 >= g1 {
            out.push(insert(arr, g1, g2, crossed));
        }
    }
    for &h in &map.faces[face] {
        if let EdgeKind::Segment { chord, index } = map.kinds[h / 2] {
            if used[chord] {
                continue;
            }
            used[chord] = true;
            crossed.push((chord, index));
            walk(arr, map, gaps_of, g1, map.face_of[h ^ 1], crossed, used, out);
            crossed.pop();
            used[chord] = false;
        }
    }
}

fn insert(arr: &DiskArrangement, g1: usize, g2: usize, crossed: &[(usize, usize)]) -> DiskArrangement {
    let p = arr.positions();
    let mut new_pos = vec![0usize; p];
    let (mut a, mut b) = (0, 0);
    let mut next = 0;
    for old in 0..p {
        new_pos[old] = next;
        next += 1;
        if old == g1 {
            a = next;
            next += 1;
        }
        if old == g2 {
            b = next;
            next += 1;
        }
    }
    let n = arr.chord_count();
    let mut chords: Vec<[usize; 2]> = arr.chords().iter().map(|c| [new_pos[c[0]], new_pos[c[1]]]).collect();
    chords.push([a, b]);
    let mut partners: Vec<Vec<usize>> = (0..n).map(|c| arr.partners(c)).collect();
    for &(c, index) in crossed {
        partners[c].insert(index, n);
    }
    partners.push(crossed.iter().map(|&(c, _)| c).collect());
    DiskArrangement::new(p + 2, chords, partners).expect("face paths give realizable arrangements")
}

/// All arrangements of `beta` chords with distinct endpoints, one per class
/// under rotation and reflection of the disk.
pub fn enumerate_frame_arrangements(beta: usize) -> Vec<DiskArrangement> {
    let mut level = vec![DiskArrangement::empty(0)];
    for _ in 0..beta {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for arr in &level {
            for ext in extensions(arr) {
                if seen.insert(ext.canonical_code()) {
                    next.push(ext);
                }
            }
        }
        level = next;
    }
    level
}

/// Groupings of all crossings of `arr` into exactly `k` non-degenerate
/// bundled crossings that make every chord a frame, each with every lift.
pub fn enumerate_groupings(arr: &DiskArrangement, k: usize) -> Vec<FrameDrawing> {
    let mut out = Vec::new();
    let _ = for_each_grouping(arr, k, &Budget::unlimited(), &mut |fd| {
        out.push(fd);
        true
    });
    out
}

/// Streams groupings to `f` until it returns `false`.
pub fn for_each_grouping(
    arr: &DiskArrangement,
    k: usize,
    budget: &Budget,
    f: &mut dyn FnMut(FrameDrawing) -> bool,
) -> std::result::Result<bool, Exhausted> {
    if arr.chord_count() > 4 * k || arr.chord_count() < 4 * k.min(1) {
        return Ok(true);
    }
    let blocks: Vec<Vec<(BundledCrossing, Vec<usize>)>> = (0..arr.crossing_count())
        .map(|x| {
            blocks_through(arr, x)
                .into_iter()
                .filter(|b| !b.is_degenerate())
                .map(|b| {
                    let xs = b.crossings(arr).expect("valid");
                    (ordered(arr, b), xs)
                })
                .collect()
        })
        .collect();
    let mut taken = vec![false; arr.crossing_count()];
    let mut current = Vec::new();
    group_rec(arr, k, &blocks, &mut taken, &mut current, budget, f)
}

fn group_rec(
    arr: &DiskArrangement,
    k: usize,
    blocks: &[Vec<(BundledCrossing, Vec<usize>)>],
    taken: &mut Vec<bool>,
    current: &mut Vec<BundledCrossing>,
    budget: &Budget,
    f: &mut dyn FnMut(FrameDrawing) -> bool,
) -> std::result::Result<bool, Exhausted> {
    budget.tick()?;
    let Some(x) = taken.iter().position(|t| !t) else {
        if current.len() != k {
            return Ok(true);
        }
        for mask in 0u32..(1 << k) {
            let lifts = (0..k).map(|i| mask >> i & 1 == 1).collect();
            if let Ok(fd) = FrameDrawing::new(arr.clone(), current.clone(), lifts) {
                if !f(fd) {
                    return Ok(false);
                }
            } else {
                break;
            }
        }
        return Ok(true);
    };
    if current.len() == k {
        return Ok(true);
    }
    for (b, xs) in &blocks[x] {
        if xs.iter().any(|&y| taken[y]) {
            continue;
        }
        for &y in xs {
            taken[y] = true;
        }
        current.push(b.clone());
        let go = group_rec(arr, k, blocks, taken, current, budget, f)?;
        current.pop();
        for &y in xs {
            taken[y] = false;
        }
        if !go {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Perfect matchings of `2 * beta` boundary points with every assignment
    /// of crossing orders, kept if realizable, deduplicated up to symmetry.
    fn brute_force_codes(beta: usize) -> HashSet<Vec<u32>> {
        let mut codes = HashSet::new();
        let mut matchings = Vec::new();
        matchings_of(&mut (0..2 * beta).collect(), &mut Vec::new(), &mut matchings);
        for m in matchings {
            // the partner sets are fixed by interleaving; only orders vary
            let sets: Vec<Vec<usize>> = (0..beta)
                .map(|i| {
                    (0..beta)
                        .filter(|&j| {
                            j != i && crate::arrangement::interleaved(2 * beta, m[i][0], m[i][1], m[j][0], m[j][1])
                        })
                        .collect()
                })
                .collect();
            let mut orders = vec![Vec::new(); beta];
            all_orders(&m, &sets, 0, &mut orders, &mut codes);
        }
        codes
    }

    fn all_orders(
        m: &[[usize; 2]],
        sets: &[Vec<usize>],
        i: usize,
        orders: &mut Vec<Vec<usize>>,
        codes: &mut HashSet<Vec<u32>>,
    ) {
        if i == sets.len() {
            if let Ok(arr) = DiskArrangement::new(2 * m.len(), m.to_vec(), orders.clone()) {
                codes.insert(arr.canonical_code());
            }
            return;
        }
        let mut perm = sets[i].clone();
        permutations(&mut perm, 0, &mut |p| {
            orders[i] = p.to_vec();
            all_orders(m, sets, i + 1, orders, codes);
        });
    }

    fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permutations(v, k + 1, f);
            v.swap(k, i);
        }
    }

    fn matchings_of(free: &mut Vec<usize>, cur: &mut Vec<[usize; 2]>, out: &mut Vec<Vec<[usize; 2]>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push([a, b]);
            matchings_of(free, cur, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_frame_arrangements(1).len(), 1);
        assert_eq!(enumerate_frame_arrangements(2).len(), 2);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for beta in 1..=4 {
            let ours: HashSet<Vec<u32>> = enumerate_frame_arrangements(beta)
                .iter()
                .map(|a| a.canonical_code())
                .collect();
            assert_eq!(ours.len(), enumerate_frame_arrangements(beta).len());
            assert_eq!(ours, brute_force_codes(beta), "beta = {beta}");
        }
    }

    fn two_by_two() -> DiskArrangement {
        crate::circular::straight_chords(8, vec![[0, 5], [1, 4], [2, 7], [3, 6]], (0..4).collect())
    }

    #[test]
    fn grid_has_one_grouping_with_two_lifts() {
        let fds = enumerate_groupings(&two_by_two(), 1);
        assert_eq!(fds.len(), 2);
        assert_ne!(fds[0].lifts, fds[1].lifts);
        // the k = 1 frame drawings among all 4-chord arrangements
        let all: Vec<FrameDrawing> = enumerate_frame_arrangements(4)
            .iter()
            .flat_map(|a| enumerate_groupings(a, 1))
            .collect();
        let codes: HashSet<_> = all.iter().map(|f| f.canonical_code()).collect();
        assert_eq!(all.len(), 2);
        assert_eq!(codes.len(), 1, "the two lifts are mirror images");
    }

    #[test]
    fn two_crossing_chords_have_no_grouping() {
        let arr = DiskArrangement::new(4, vec![[0, 2], [1, 3]], vec![vec![1], vec![0]]).unwrap();
        assert!(enumerate_groupings(&arr, 1).is_empty());
    }

    #[test]
    fn two_disjoint_grids() {
        let arr = crate::circular::straight_chords(
            16,
            vec![[0, 5], [1, 4], [2, 7], [3, 6], [8, 13], [9, 12], [10, 15], [11, 14]],
            (0..8).collect(),
        );
        assert_eq!(enumerate_groupings(&arr, 2).len(), 4);
    }

    #[test]
    fn codes_see_symmetry() {
        let fd = &enumerate_groupings(&two_by_two(), 1)[0];
        let rotated = crate::circular::straight_chords(8, vec![[1, 6], [2, 5], [3, 0], [4, 7]], (0..4).collect());
        let rot = enumerate_groupings(&rotated, 1);
        assert!(rot.iter().any(|r| r.canonical_code() == fd.canonical_code()));
        let doc = fd.to_doc();
        let back = FrameDrawing::from_doc(&doc).unwrap();
        assert_eq!(back.canonical_code(), fd.canonical_code());
    }
}
