//! The cut surface of a frame drawing and its regions.
//!
//! Every face of the frame arrangement becomes one sheet, except grid
//! cells of a group, which get an over sheet (on the handle) and an under
//! sheet (on the disk beneath it). Sheets are glued across chord segments
//! the lifted drawing does not cut: the handle continues over pieces of
//! the lower bundle and lands beyond the lower frames, and the disk
//! continues beneath pieces of the lifted bundle and past the lifted
//! frames. Components touching the disk boundary are the regions.

use serde::{Deserialize, Serialize};

use crate::arrangement::{EdgeKind, PlaneMap};
use crate::error::{Error, Result};
use crate::frames::FrameDrawing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    Flat,
    Over,
    Under,
}

/// Polygons glued along pairs of sides.
#[derive(Debug, Clone, Default)]
pub struct Complex {
    /// Side count of each polygon.
    pub sides: Vec<usize>,
    /// `glue[k][i]` is the side glued to side `i` of polygon `k`; the two
    /// sides run in opposite directions.
    pub glue: Vec<Vec<Option<(usize, usize)>>>,
}

impl Complex {
    pub fn new(sides: Vec<usize>) -> Self {
        let glue = sides.iter().map(|&s| vec![None; s]).collect();
        Complex { sides, glue }
    }

    pub fn glue(&mut self, a: (usize, usize), b: (usize, usize)) {
        self.glue[a.0][a.1] = Some(b);
        self.glue[b.0][b.1] = Some(a);
    }

    fn corner_ids(&self) -> Vec<usize> {
        let mut base = Vec::with_capacity(self.sides.len());
        let mut total = 0;
        for &s in &self.sides {
            base.push(total);
            total += s;
        }
        base
    }

    /// Euler characteristic `V - E + F`, corners identified through glued
    /// sides.
    pub fn euler_characteristic(&self) -> i64 {
        let base = self.corner_ids();
        let total: usize = self.sides.iter().sum();
        let mut uf = UnionFind::new(total);
        let mut glued = 0;
        let mut boundary = 0;
        for k in 0..self.sides.len() {
            let s = self.sides[k];
            for i in 0..s {
                match self.glue[k][i] {
                    Some((k2, j)) => {
                        glued += 1;
                        let s2 = self.sides[k2];
                        // side i runs corner i -> i+1, side j runs j -> j+1 backwards
                        uf.union(base[k] + i, base[k2] + (j + 1) % s2);
                        uf.union(base[k] + (i + 1) % s, base[k2] + j);
                    }
                    None => boundary += 1,
                }
            }
        }
        let v = uf.classes() as i64;
        let e = (glued / 2 + boundary) as i64;
        v - e + self.sides.len() as i64
    }

    /// Closed walks along unglued sides, each as `(polygon, side)` steps.
    pub fn boundary_cycles(&self) -> Vec<Vec<(usize, usize)>> {
        let mut seen: Vec<Vec<bool>> = self.sides.iter().map(|&s| vec![false; s]).collect();
        let mut cycles = Vec::new();
        for k in 0..self.sides.len() {
            for i in 0..self.sides[k] {
                if self.glue[k][i].is_some() || seen[k][i] {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut cur = (k, i);
                while !seen[cur.0][cur.1] {
                    seen[cur.0][cur.1] = true;
                    cycle.push(cur);
                    cur = self.next_boundary(cur);
                }
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// The boundary side following `side`, turning around its end corner.
    fn next_boundary(&self, side: (usize, usize)) -> (usize, usize) {
        let (mut k, mut j) = (side.0, (side.1 + 1) % self.sides[side.0]);
        let mut guard = 0;
        while let Some((k2, j2)) = self.glue[k][j] {
            k = k2;
            j = (j2 + 1) % self.sides[k2];
            guard += 1;
            assert!(guard <= self.sides.iter().sum::<usize>(), "corner walk does not end");
        }
        (k, j)
    }

    pub fn is_disk(&self) -> bool {
        self.euler_characteristic() == 1 && self.boundary_cycles().len() == 1
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub fn classes(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// One arc of the disk boundary, from position `from` to `from + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcRef {
    pub from: usize,
    pub to: usize,
}

/// A region boundary step: an arc followed by the connector leading to the
/// next arc, given as `(chord, segment index)` pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryStep {
    pub arc: ArcRef,
    pub connector: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub sheets: Vec<(usize, Level)>,
    pub boundary: Vec<BoundaryStep>,
    pub euler: i64,
    pub boundary_cycles: usize,
}

impl Region {
    pub fn is_disk(&self) -> bool {
        self.euler == 1 && self.boundary_cycles == 1
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcRef> + '_ {
        self.boundary.iter().map(|s| s.arc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDecomposition {
    pub regions: Vec<Region>,
    /// `arc_region[p]` is the region holding the arc from `p` to `p + 1`.
    pub arc_region: Vec<usize>,
    /// Components without boundary arcs, dropped from `regions`.
    pub discarded: usize,
}

/// Role of a chord segment inside a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Outside,
    OverFrame,
    UnderFrame,
    OverInterior,
    UnderInterior,
}

pub fn lift_and_decompose(fd: &FrameDrawing) -> Result<RegionDecomposition> {
    fd.validate()?;
    let arr = &fd.arrangement;
    if arr.positions() == 0 {
        // no frames: the whole disk, bounded by one arc around the circle
        return Ok(RegionDecomposition {
            regions: vec![Region {
                sheets: Vec::new(),
                boundary: vec![BoundaryStep {
                    arc: ArcRef { from: 0, to: 0 },
                    connector: Vec::new(),
                }],
                euler: 1,
                boundary_cycles: 1,
            }],
            arc_region: vec![0],
            discarded: 0,
        });
    }
    let map = arr.plane_map();
    let nf = map.faces.len();
    let outer = map.outer;
    // grid cells and segment roles
    let mut cell_of: Vec<Option<usize>> = vec![None; nf];
    let mut role = vec![Role::Outside; map.edges.len()];
    let seg_id = segment_index(&map);
    for (gi, g) in fd.groups.iter().enumerate() {
        let (over, under) = fd.over_under(gi);
        for (bundle, other, lifted) in [(over, under, true), (under, over, false)] {
            for (pos, &c) in bundle.iter().enumerate() {
                let frame = pos == 0 || pos + 1 == bundle.len();
                let xs: Vec<usize> = other
                    .iter()
                    .map(|&o| arr.index_on(c, arr.crossing_between(c, o).expect("grid")).expect("on chord"))
                    .collect();
                let (lo, hi) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
                for k in lo + 1..=hi {
                    let e = seg_id[c][k];
                    role[e] = match (lifted, frame) {
                        (true, true) => Role::OverFrame,
                        (false, true) => Role::UnderFrame,
                        (true, false) => Role::OverInterior,
                        (false, false) => Role::UnderInterior,
                    };
                }
            }
        }
        // the cell beside x_i between y_j and y_{j+1}, towards x_{i+1}
        let (xs, ys) = (&g.bundle1, &g.bundle2);
        for i in 0..xs.len() - 1 {
            for j in 0..ys.len() - 1 {
                let e = between(arr, &seg_id, xs[i], ys[j], ys[j + 1]);
                let e_next = between(arr, &seg_id, xs[i + 1], ys[j], ys[j + 1]);
                let f = [map.face_of[2 * e], map.face_of[2 * e + 1]]
                    .into_iter()
                    .find(|&f| map.faces[f].iter().any(|&h| h / 2 == e_next))
                    .ok_or_else(|| Error::InvalidFrame("grid cell is not a face".into()))?;
                if cell_of[f].is_some() {
                    return Err(Error::InvalidFrame("face lies in two grid cells".into()));
                }
                cell_of[f] = Some(gi);
            }
        }
    }
    // sheets
    let mut sheet_of: Vec<Vec<(Level, usize)>> = vec![Vec::new(); nf];
    let mut sheets: Vec<(usize, Level)> = Vec::new();
    for f in 0..nf {
        if Some(f) == outer {
            continue;
        }
        let levels: &[Level] = if cell_of[f].is_some() {
            &[Level::Over, Level::Under]
        } else {
            &[Level::Flat]
        };
        for &l in levels {
            sheet_of[f].push((l, sheets.len()));
            sheets.push((f, l));
        }
    }
    let sheet = |f: usize, l: Level| -> Option<usize> {
        sheet_of[f].iter().find(|(x, _)| *x == l).map(|&(_, s)| s)
    };
    // glued side pairs between sheets, by half-edge
    let mut glued: Vec<(usize, usize, usize)> = Vec::new(); // (sheet a, sheet b, half-edge on a)
    for e in 0..map.edges.len() {
        let (h, t) = (2 * e, 2 * e + 1);
        let (fa, fb) = (map.face_of[h], map.face_of[t]);
        if Some(fa) == outer || Some(fb) == outer {
            continue;
        }
        let pairs: Vec<(usize, usize)> = match role[e] {
            Role::Outside => Vec::new(),
            Role::OverInterior => vec![(sheet(fa, Level::Under).unwrap(), sheet(fb, Level::Under).unwrap())],
            Role::UnderInterior => vec![(sheet(fa, Level::Over).unwrap(), sheet(fb, Level::Over).unwrap())],
            Role::OverFrame | Role::UnderFrame => {
                let keep = if role[e] == Role::OverFrame { Level::Under } else { Level::Over };
                match (cell_of[fa].is_some(), cell_of[fb].is_some()) {
                    (true, false) => vec![(sheet(fa, keep).unwrap(), sheet(fb, Level::Flat).unwrap())],
                    (false, true) => vec![(sheet(fa, Level::Flat).unwrap(), sheet(fb, keep).unwrap())],
                    _ => return Err(Error::InvalidFrame("frame piece does not bound its grid".into())),
                }
            }
        };
        for (a, b) in pairs {
            glued.push((a, b, h));
        }
    }
    // complex
    let side_lists: Vec<&Vec<usize>> = sheets.iter().map(|&(f, _)| &map.faces[f]).collect();
    let mut complex = Complex::new(side_lists.iter().map(|s| s.len()).collect());
    let side_pos = |s: usize, h: usize| side_lists[s].iter().position(|&x| x == h).expect("side");
    let mut uf = UnionFind::new(sheets.len());
    for &(a, b, h) in &glued {
        complex.glue((a, side_pos(a, h)), (b, side_pos(b, h ^ 1)));
        uf.union(a, b);
    }
    // components
    let mut comp_index = vec![usize::MAX; sheets.len()];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..sheets.len() {
        let r = uf.find(s);
        if comp_index[r] == usize::MAX {
            comp_index[r] = comps.len();
            comps.push(Vec::new());
        }
        let c = comp_index[r];
        comps[c].push(s);
    }
    let p = arr.positions();
    let arc_sheet: Vec<usize> = (0..p).map(|a| sheet(map.face_of[2 * a], Level::Flat).expect("arc face")).collect();
    let mut regions = Vec::new();
    let mut arc_region = vec![usize::MAX; p];
    let mut discarded = 0;
    for comp in comps {
        let has_arc = (0..p).any(|a| comp.contains(&arc_sheet[a]));
        if !has_arc {
            discarded += 1;
            continue;
        }
        let r = regions.len();
        for a in 0..p {
            if comp.contains(&arc_sheet[a]) {
                arc_region[a] = r;
            }
        }
        let sub = sub_complex(&complex, &comp);
        let cycles = sub.boundary_cycles();
        let boundary = trace_boundary(&map, &side_lists, &comp, &cycles)?;
        regions.push(Region {
            sheets: comp.iter().map(|&s| sheets[s]).collect(),
            boundary,
            euler: sub.euler_characteristic(),
            boundary_cycles: cycles.len(),
        });
    }
    Ok(RegionDecomposition {
        regions,
        arc_region,
        discarded,
    })
}

/// `seg_id[c][k]` is the plane-map edge of segment `k` of chord `c`.
fn segment_index(map: &PlaneMap) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (e, kind) in map.kinds.iter().enumerate() {
        if let EdgeKind::Segment { chord, index } = *kind {
            if out.len() <= chord {
                out.resize(chord + 1, Vec::new());
            }
            if out[chord].len() <= index {
                out[chord].resize(index + 1, usize::MAX);
            }
            out[chord][index] = e;
        }
    }
    out
}

/// Segment of chord `c` between its consecutive crossings with `a` and `b`.
fn between(arr: &crate::arrangement::DiskArrangement, seg_id: &[Vec<usize>], c: usize, a: usize, b: usize) -> usize {
    let ia = arr.index_on(c, arr.crossing_between(c, a).expect("grid")).expect("on chord");
    let ib = arr.index_on(c, arr.crossing_between(c, b).expect("grid")).expect("on chord");
    seg_id[c][ia.max(ib)]
}

fn sub_complex(complex: &Complex, comp: &[usize]) -> Complex {
    let local = |s: usize| comp.iter().position(|&x| x == s).expect("member");
    let mut sub = Complex::new(comp.iter().map(|&s| complex.sides[s]).collect());
    for (i, &s) in comp.iter().enumerate() {
        for j in 0..complex.sides[s] {
            if let Some((s2, j2)) = complex.glue[s][j] {
                sub.glue[i][j] = Some((local(s2), j2));
            }
        }
    }
    sub
}

/// Converts the first boundary cycle into arcs and connectors, starting at
/// the arc with the smallest position.
fn trace_boundary(
    map: &PlaneMap,
    side_lists: &[&Vec<usize>],
    comp: &[usize],
    cycles: &[Vec<(usize, usize)>],
) -> Result<Vec<BoundaryStep>> {
    let Some(cycle) = cycles.iter().find(|c| {
        c.iter()
            .any(|&(k, i)| matches!(map.kinds[side_lists[comp[k]][i] / 2], EdgeKind::Arc(_)))
    }) else {
        return Ok(Vec::new());
    };
    let halfs: Vec<usize> = cycle.iter().map(|&(k, i)| side_lists[comp[k]][i]).collect();
    let arc_at = |h: usize| match map.kinds[h / 2] {
        EdgeKind::Arc(a) if h % 2 == 0 => Some(a),
        _ => None,
    };
    let start = (0..halfs.len())
        .filter(|&i| arc_at(halfs[i]).is_some())
        .min_by_key(|&i| arc_at(halfs[i]))
        .expect("cycle with an arc");
    let n = halfs.len();
    let mut steps: Vec<BoundaryStep> = Vec::new();
    for off in 0..n {
        let h = halfs[(start + off) % n];
        if let Some(a) = arc_at(h) {
            let (from, to) = map.edges[h / 2];
            steps.push(BoundaryStep {
                arc: ArcRef { from, to },
                connector: Vec::new(),
            });
            debug_assert_eq!(from, a);
        } else if let EdgeKind::Segment { chord, index } = map.kinds[h / 2] {
            steps
                .last_mut()
                .expect("starts with an arc")
                .connector
                .push((chord, index));
        } else {
            return Err(Error::InvalidFrame("boundary runs along the outside of an arc".into()));
        }
    }
    Ok(steps)
}

pub fn verify_disk_regions(rd: &RegionDecomposition) -> bool {
    rd.regions.iter().all(Region::is_disk)
}

pub fn region_boundary(rd: &RegionDecomposition, r: usize) -> Result<&[BoundaryStep]> {
    rd.regions
        .get(r)
        .map(|reg| reg.boundary.as_slice())
        .ok_or(Error::UnknownRegion(r))
}
