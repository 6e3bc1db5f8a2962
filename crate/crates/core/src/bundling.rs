//! Bundled crossings on a fixed arrangement: validity checks and trivial,
//! greedy and exact minimum bundlings.

use serde::{Deserialize, Serialize};

use crate::arrangement::DiskArrangement;
use crate::budget::Budget;

/// Two bundles of chords forming a grid. A bundle with one chord is a
/// degenerate side; a 1×1 bundled crossing is a single crossing point.
/// Chord ids refer to the arrangement, each chord contributing the piece
/// that spans its crossings with the other bundle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundledCrossing {
    pub bundle1: Vec<usize>,
    pub bundle2: Vec<usize>,
}

impl BundledCrossing {
    pub fn single(arr: &DiskArrangement, x: usize) -> Self {
        let (a, b) = arr.crossing(x);
        BundledCrossing {
            bundle1: vec![a],
            bundle2: vec![b],
        }
    }

    /// Crossing ids covered, if every pair crosses.
    pub fn crossings(&self, arr: &DiskArrangement) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.bundle1.len() * self.bundle2.len());
        for &a in &self.bundle1 {
            for &b in &self.bundle2 {
                out.push(arr.crossing_between(a, b)?);
            }
        }
        Some(out)
    }

    pub fn size(&self) -> usize {
        self.bundle1.len() * self.bundle2.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.bundle1.len() < 2 || self.bundle2.len() < 2
    }
}

pub type Bundling = Vec<BundledCrossing>;

pub fn is_valid_bundled_crossing(arr: &DiskArrangement, b: &BundledCrossing) -> bool {
    let n = arr.chord_count();
    if b.bundle1.is_empty() || b.bundle2.is_empty() {
        return false;
    }
    let mut member = vec![0u8; n];
    for (side, bundle) in [(1u8, &b.bundle1), (2u8, &b.bundle2)] {
        for &c in bundle.iter() {
            if c >= n || member[c] != 0 {
                return false;
            }
            member[c] = side;
        }
    }
    if b.crossings(arr).is_none() {
        return false;
    }
    sides_consistent(arr, &b.bundle1, &member, 2) && sides_consistent(arr, &b.bundle2, &member, 1)
}

/// Along each chord of `bundle`, the crossings with chords marked `other`
/// are consecutive and meet them in one common order up to reversal.
fn sides_consistent(arr: &DiskArrangement, bundle: &[usize], member: &[u8], other: u8) -> bool {
    let mut reference: Option<Vec<usize>> = None;
    for &c in bundle {
        let partners = arr.partners(c);
        let hits: Vec<usize> = (0..partners.len())
            .filter(|&i| member[partners[i]] == other)
            .collect();
        let (first, last) = (hits[0], hits[hits.len() - 1]);
        if last - first + 1 != hits.len() {
            return false;
        }
        let seen = partners[first..=last].to_vec();
        match &reference {
            None => reference = Some(seen),
            Some(r) => {
                let rev: Vec<usize> = seen.iter().rev().copied().collect();
                if *r != seen && *r != rev {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_valid_bundling(arr: &DiskArrangement, bs: &[BundledCrossing]) -> bool {
    let mut covered = vec![false; arr.crossing_count()];
    for b in bs {
        if !is_valid_bundled_crossing(arr, b) {
            return false;
        }
        for x in b.crossings(arr).expect("valid") {
            if covered[x] {
                return false;
            }
            covered[x] = true;
        }
    }
    covered.into_iter().all(|c| c)
}

pub fn trivial_bundling(arr: &DiskArrangement) -> Bundling {
    (0..arr.crossing_count())
        .map(|x| BundledCrossing::single(arr, x))
        .collect()
}

/// Grows each seed crossing by adding chords, smallest id first, while the
/// block stays valid and avoids crossings already taken.
pub fn greedy_bundling(arr: &DiskArrangement) -> Bundling {
    let mut taken = vec![false; arr.crossing_count()];
    let mut out = Vec::new();
    for seed in 0..arr.crossing_count() {
        if taken[seed] {
            continue;
        }
        let mut b = BundledCrossing::single(arr, seed);
        loop {
            let mut grown = false;
            for side in 0..2 {
                for c in 0..arr.chord_count() {
                    if b.bundle1.contains(&c) || b.bundle2.contains(&c) {
                        continue;
                    }
                    let mut cand = b.clone();
                    if side == 0 {
                        cand.bundle1.push(c);
                    } else {
                        cand.bundle2.push(c);
                    }
                    let fresh = cand
                        .crossings(arr)
                        .map_or(false, |xs| xs.iter().all(|&x| !taken[x]));
                    if fresh && is_valid_bundled_crossing(arr, &cand) {
                        b = cand;
                        grown = true;
                    }
                }
            }
            if !grown {
                break;
            }
        }
        for x in b.crossings(arr).expect("valid") {
            taken[x] = true;
        }
        out.push(normalize(arr, b));
    }
    out
}

/// Orders each bundle along the other one for stable output.
fn normalize(arr: &DiskArrangement, mut b: BundledCrossing) -> BundledCrossing {
    let along = |chord: usize, set: &[usize]| -> Vec<usize> {
        arr.partners(chord).into_iter().filter(|c| set.contains(c)).collect()
    };
    let b2 = along(b.bundle1[0], &b.bundle2);
    let b1 = along(b.bundle2[0], &b.bundle1);
    b.bundle1 = b1;
    b.bundle2 = b2;
    if b.bundle1.iter().min() > b.bundle2.iter().min() {
        std::mem::swap(&mut b.bundle1, &mut b.bundle2);
    }
    b
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactBundling {
    pub bundling: Bundling,
    /// False if the budget ran out; the bundling is then only the best found.
    pub optimal: bool,
}

/// All valid bundled crossings containing crossing `x`, largest first.
pub fn blocks_through(arr: &DiskArrangement, x: usize) -> Vec<BundledCrossing> {
    let (a, b) = arr.crossing(x);
    let pa = arr.partners(a);
    let pb = arr.partners(b);
    let ia = pa.iter().position(|&c| c == b).expect("crossing on chord");
    let ib = pb.iter().position(|&c| c == a).expect("crossing on chord");
    let mut out = Vec::new();
    for lo2 in 0..=ia {
        for hi2 in ia..pa.len() {
            for lo1 in 0..=ib {
                for hi1 in ib..pb.len() {
                    let cand = BundledCrossing {
                        bundle1: pb[lo1..=hi1].to_vec(),
                        bundle2: pa[lo2..=hi2].to_vec(),
                    };
                    if is_valid_bundled_crossing(arr, &cand) {
                        out.push(cand);
                    }
                }
            }
        }
    }
    out.sort_by_key(|b| std::cmp::Reverse(b.size()));
    out
}

/// Minimum bundling by branch and bound over the blocks through the first
/// unassigned crossing, seeded with the greedy bundling.
pub fn min_bundling_exact(arr: &DiskArrangement, budget: &Budget) -> ExactBundling {
    exact_below(arr, usize::MAX, budget)
}

/// Whether `arr` admits a bundling with at most `k` classes; `None` if the
/// budget ran out first.
pub fn bundles_within(arr: &DiskArrangement, k: usize, budget: &Budget) -> Option<bool> {
    let r = exact_below(arr, k + 1, budget);
    if r.bundling.len() <= k {
        Some(true)
    } else if r.optimal {
        Some(false)
    } else {
        None
    }
}

/// Searches only for bundlings smaller than `cap` (and than greedy). If
/// none exists the greedy bundling comes back with `optimal` meaning the
/// search completed.
fn exact_below(arr: &DiskArrangement, cap: usize, budget: &Budget) -> ExactBundling {
    let greedy = greedy_bundling(arr);
    let n = arr.crossing_count();
    let mut cap = cap.min(greedy.len());
    let blocks: Vec<Vec<(BundledCrossing, Vec<usize>)>> = (0..n)
        .map(|x| {
            blocks_through(arr, x)
                .into_iter()
                .map(|b| {
                    let xs = b.crossings(arr).expect("valid");
                    (b, xs)
                })
                .collect()
        })
        .collect();
    let mut search = Exact {
        blocks: &blocks,
        taken: vec![false; n],
        current: Vec::new(),
        best: None,
        budget,
        aborted: false,
    };
    search.recurse(0, n, &mut cap);
    let bundling = match search.best {
        Some(b) => b.into_iter().map(|b| normalize(arr, b)).collect(),
        None => greedy,
    };
    ExactBundling {
        bundling,
        optimal: !search.aborted,
    }
}

struct Exact<'a> {
    blocks: &'a [Vec<(BundledCrossing, Vec<usize>)>],
    taken: Vec<bool>,
    current: Vec<BundledCrossing>,
    best: Option<Vec<BundledCrossing>>,
    budget: &'a Budget,
    aborted: bool,
}

impl Exact<'_> {
    fn recurse(&mut self, from: usize, n: usize, cap: &mut usize) {
        if self.aborted {
            return;
        }
        if self.budget.tick().is_err() {
            self.aborted = true;
            return;
        }
        let Some(x) = (from..n).find(|&x| !self.taken[x]) else {
            if self.current.len() < *cap {
                *cap = self.current.len();
                self.best = Some(self.current.clone());
            }
            return;
        };
        if self.current.len() + 1 >= *cap {
            return;
        }
        for (b, xs) in &self.blocks[x] {
            if xs.iter().any(|&y| self.taken[y]) {
                continue;
            }
            for &y in xs {
                self.taken[y] = true;
            }
            self.current.push(b.clone());
            self.recurse(x + 1, n, cap);
            self.current.pop();
            for &y in xs {
                self.taken[y] = false;
            }
            if self.aborted {
                return;
            }
        }
    }
}
