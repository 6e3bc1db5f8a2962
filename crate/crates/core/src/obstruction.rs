//! Detector for the crossing-cycle configurations that no simple circular
//! drawing contains.
//!
//! Curves `f_0..f_p` (`p >= 2`) cross cyclically, each only its two
//! neighbours, and their crossing points and the pieces between them form
//! a closed curve `C`. Pattern A: `f_1..f_{p-1}` have both endpoints inside
//! `C`, `f_0` and `f_p` one each. Pattern B: `f_1..f_{p-2}` both, `f_{p-1}`
//! and `f_0` one each, `f_p` none.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::arrangement::{DiskArrangement, EdgeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pattern {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionWitness {
    /// `f_0, ..., f_p` as curve ids.
    pub curves: Vec<usize>,
    pub pattern: Pattern,
    /// Crossing points of `C` as curve pairs `(f_i, f_{i+1})`.
    pub cycle: Vec<(usize, usize)>,
}

/// Curves with two free endpoints each.
pub trait CurveDrawing {
    fn curve_count(&self) -> usize;
    /// Number of crossings between two curves.
    fn crossings_between(&self, a: usize, b: usize) -> usize;
    /// For a cyclic sequence of curves crossing consecutively once each,
    /// how many endpoints (0, 1 or 2) of each lie inside the closed curve
    /// they form.
    fn endpoints_inside(&self, cycle: &[usize]) -> Vec<u8>;
}

pub fn detect_obstruction<D: CurveDrawing + ?Sized>(d: &D) -> Option<ObstructionWitness> {
    let mut found = None;
    induced_cycles(d, &mut |cycle| {
        let inside = d.endpoints_inside(cycle);
        if let Some((curves, pattern)) = match_pattern(cycle, &inside) {
            let q = curves.len();
            let pairs = (0..q).map(|i| (curves[i], curves[(i + 1) % q])).collect();
            found = Some(ObstructionWitness {
                curves,
                pattern,
                cycle: pairs,
            });
            return false;
        }
        true
    });
    found
}

/// Calls `f` on every induced cycle of length at least 3 in the crossing
/// graph whose consecutive curves cross exactly once, until `f` says stop.
fn induced_cycles<D: CurveDrawing + ?Sized>(d: &D, f: &mut dyn FnMut(&[usize]) -> bool) {
    let n = d.curve_count();
    let cross = |a: usize, b: usize| d.crossings_between(a, b) > 0;
    let once = |a: usize, b: usize| d.crossings_between(a, b) == 1;
    for s in 0..n {
        let mut path = vec![s];
        if !extend(n, s, &mut path, &cross, &once, f) {
            return;
        }
    }
}

fn extend(
    n: usize,
    s: usize,
    path: &mut Vec<usize>,
    cross: &dyn Fn(usize, usize) -> bool,
    once: &dyn Fn(usize, usize) -> bool,
    f: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let last = *path.last().expect("non-empty");
    for v in s + 1..n {
        if path.contains(&v) || !once(last, v) {
            continue;
        }
        // no chords to inner path vertices
        if path.len() > 2 && path[1..path.len() - 1].iter().any(|&w| cross(w, v)) {
            continue;
        }
        if path.len() >= 2 && cross(s, v) {
            if once(s, v) && path[1] < v {
                path.push(v);
                let go = f(path);
                path.pop();
                if !go {
                    return false;
                }
            }
            continue;
        }
        path.push(v);
        let go = extend(n, s, path, cross, once, f);
        path.pop();
        if !go {
            return false;
        }
    }
    true
}

/// Tries every rotation and reflection of the labeling.
fn match_pattern(cycle: &[usize], inside: &[u8]) -> Option<(Vec<usize>, Pattern)> {
    let q = cycle.len();
    let p = q - 1;
    for reflect in [false, true] {
        for shift in 0..q {
            let idx = |i: usize| if reflect { (shift + q - i) % q } else { (shift + i) % q };
            let c = |i: usize| inside[idx(i)];
            let middle = (1..p.saturating_sub(1)).all(|i| c(i) == 2);
            let a = middle && c(p - 1) == 2 && c(0) == 1 && c(p) == 1;
            let b = middle && c(p - 1) == 1 && c(0) == 1 && c(p) == 0;
            let curves = || (0..q).map(|i| cycle[idx(i)]).collect();
            if a {
                return Some((curves(), Pattern::A));
            }
            if b {
                return Some((curves(), Pattern::B));
            }
        }
    }
    None
}

impl CurveDrawing for DiskArrangement {
    fn curve_count(&self) -> usize {
        self.chord_count()
    }

    fn crossings_between(&self, a: usize, b: usize) -> usize {
        usize::from(a != b && self.crossing_between(a, b).is_some())
    }

    /// Faces reachable from outside the disk without crossing `C` are
    /// outside; an endpoint is inside iff no face at it is reachable.
    fn endpoints_inside(&self, cycle: &[usize]) -> Vec<u8> {
        let map = self.plane_map();
        let q = cycle.len();
        let mut on_cycle = vec![false; map.edges.len()];
        for i in 0..q {
            let c = cycle[i];
            let prev = self.crossing_between(c, cycle[(i + q - 1) % q]).expect("cycle crossing");
            let next = self.crossing_between(c, cycle[(i + 1) % q]).expect("cycle crossing");
            let a = self.index_on(c, prev).expect("on chord");
            let b = self.index_on(c, next).expect("on chord");
            for (e, kind) in map.kinds.iter().enumerate() {
                if let EdgeKind::Segment { chord, index } = *kind {
                    if chord == c && index > a.min(b) && index <= a.max(b) {
                        on_cycle[e] = true;
                    }
                }
            }
        }
        let mut reached = vec![false; map.faces.len()];
        let mut stack: Vec<usize> = map.outer.into_iter().collect();
        for &f in &stack {
            reached[f] = true;
        }
        while let Some(f) = stack.pop() {
            for &h in &map.faces[f] {
                if on_cycle[h / 2] {
                    continue;
                }
                let g = map.face_of[h ^ 1];
                if !reached[g] {
                    reached[g] = true;
                    stack.push(g);
                }
            }
        }
        cycle
            .iter()
            .map(|&c| {
                self.chord(c)
                    .iter()
                    .filter(|&&p| {
                        let around = map.rotation[p].iter().map(|&h| map.face_of[h]);
                        around.clone().all(|f| !reached[f])
                    })
                    .count() as u8
            })
            .collect()
    }
}

/// Curves as polylines with integer vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolylineDrawing {
    pub curves: Vec<Vec<(i64, i64)>>,
}

#[derive(Debug, Clone, Copy)]
struct Q {
    num: i128,
    den: i128,
}

impl Q {
    fn int(v: i64) -> Q {
        Q { num: v as i128, den: 1 }
    }
    fn sub(self, o: Q) -> Q {
        Q {
            num: self.num * o.den - o.num * self.den,
            den: self.den * o.den,
        }
    }
    fn add(self, o: Q) -> Q {
        Q {
            num: self.num * o.den + o.num * self.den,
            den: self.den * o.den,
        }
    }
    fn mul(self, o: Q) -> Q {
        Q {
            num: self.num * o.num,
            den: self.den * o.den,
        }
    }
    fn div(self, o: Q) -> Q {
        let (mut num, mut den) = (self.num * o.den, self.den * o.num);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Q { num, den }.reduced()
    }
    fn reduced(self) -> Q {
        let g = gcd(self.num.abs(), self.den.abs()).max(1);
        Q {
            num: self.num / g,
            den: self.den / g,
        }
    }
    fn cmp(self, o: Q) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

type P = (Q, Q);

/// Position along a curve: segment index and parameter within it.
#[derive(Debug, Clone, Copy)]
struct Spot {
    seg: usize,
    t: Q,
    point: P,
}

impl PolylineDrawing {
    fn seg(&self, c: usize, i: usize) -> ((i64, i64), (i64, i64)) {
        (self.curves[c][i], self.curves[c][i + 1])
    }

    /// Proper crossings of two curves, as spots on each.
    fn crossings(&self, a: usize, b: usize) -> Vec<(Spot, Spot)> {
        let mut out = Vec::new();
        for i in 0..self.curves[a].len() - 1 {
            for j in 0..self.curves[b].len() - 1 {
                let (p, p2) = self.seg(a, i);
                let (r, r2) = self.seg(b, j);
                let d1 = (p2.0 - p.0, p2.1 - p.1);
                let d2 = (r2.0 - r.0, r2.1 - r.1);
                let den = (d1.0 as i128) * (d2.1 as i128) - (d1.1 as i128) * (d2.0 as i128);
                if den == 0 {
                    continue;
                }
                let w = ((r.0 - p.0) as i128, (r.1 - p.1) as i128);
                let tn = w.0 * d2.1 as i128 - w.1 * d2.0 as i128;
                let un = w.0 * d1.1 as i128 - w.1 * d1.0 as i128;
                let inside = |x: i128| if den > 0 { x > 0 && x < den } else { x < 0 && x > den };
                if inside(tn) && inside(un) {
                    let t = Q { num: tn, den }.div(Q::int(1));
                    let u = Q { num: un, den }.div(Q::int(1));
                    let at = |o: (i64, i64), d: (i64, i64), s: Q| -> P {
                        (Q::int(o.0).add(Q::int(d.0).mul(s)), Q::int(o.1).add(Q::int(d.1).mul(s)))
                    };
                    out.push((
                        Spot { seg: i, t, point: at(p, d1, t) },
                        Spot { seg: j, t: u, point: at(r, d2, u) },
                    ));
                }
            }
        }
        out
    }
}

fn before(a: &Spot, b: &Spot) -> bool {
    a.seg < b.seg || (a.seg == b.seg && a.t.cmp(b.t) == Ordering::Less)
}

/// Crossing-number test for a point against a closed polygon.
fn point_in_polygon(pt: (i64, i64), poly: &[P]) -> bool {
    let (x, y) = (Q::int(pt.0), Q::int(pt.1));
    let mut inside = false;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let above_a = a.1.cmp(y) == Ordering::Greater;
        let above_b = b.1.cmp(y) == Ordering::Greater;
        if above_a != above_b {
            // x-coordinate of the edge at height y
            let t = y.sub(a.1).div(b.1.sub(a.1));
            let xe = a.0.add(b.0.sub(a.0).mul(t));
            if x.cmp(xe) == Ordering::Less {
                inside = !inside;
            }
        }
    }
    inside
}

impl CurveDrawing for PolylineDrawing {
    fn curve_count(&self) -> usize {
        self.curves.len()
    }

    fn crossings_between(&self, a: usize, b: usize) -> usize {
        if a == b {
            0
        } else {
            self.crossings(a, b).len()
        }
    }

    fn endpoints_inside(&self, cycle: &[usize]) -> Vec<u8> {
        let q = cycle.len();
        let mut poly: Vec<P> = Vec::new();
        for i in 0..q {
            let c = cycle[i];
            let from = self.crossings(c, cycle[(i + q - 1) % q])[0].0;
            let to = self.crossings(c, cycle[(i + 1) % q])[0].0;
            poly.push(from.point);
            let pts = &self.curves[c];
            if before(&from, &to) {
                for v in from.seg + 1..=to.seg {
                    poly.push((Q::int(pts[v].0), Q::int(pts[v].1)));
                }
            } else {
                for v in (to.seg + 1..=from.seg).rev() {
                    poly.push((Q::int(pts[v].0), Q::int(pts[v].1)));
                }
            }
        }
        cycle
            .iter()
            .map(|&c| {
                let pts = &self.curves[c];
                [pts[0], pts[pts.len() - 1]]
                    .iter()
                    .filter(|&&e| point_in_polygon(e, &poly))
                    .count() as u8
            })
            .collect()
    }
}

/// The configuration of the given pattern on `p + 1` curves: a star-shaped
/// cycle whose concave corners send both incident curve ends inside.
pub fn encode_configuration(pattern: Pattern, p: usize) -> PolylineDrawing {
    assert!(p >= 2);
    let q = p + 1;
    // corner j joins f_j and f_{j+1}; concave corners put ends inside
    let concave = |j: usize| match pattern {
        Pattern::A => j < p,
        Pattern::B => j + 1 < p,
    };
    let scale = 8000.0;
    let polar = |r: f64, k: f64| -> (i64, i64) {
        let a = std::f64::consts::TAU * k / q as f64;
        // multiples of 8 keep the extensions below integral
        let x = (r * scale * a.cos() / 8.0).round() as i64 * 8;
        let y = (r * scale * a.sin() / 8.0).round() as i64 * 8;
        (x, y)
    };
    let tips: Vec<(i64, i64)> = (0..q).map(|j| polar(1.0, j as f64)).collect();
    let corners: Vec<(i64, i64)> = (0..q)
        .map(|j| polar(if concave(j) { 0.45 } else { 1.0 }, j as f64 + 0.5))
        .collect();
    // corner point pushed past along the line from `from` through `x`
    let beyond = |x: (i64, i64), from: (i64, i64)| (x.0 + (x.0 - from.0) / 8, x.1 + (x.1 - from.1) / 8);
    let curves = (0..q)
        .map(|j| {
            let prev = corners[(j + q - 1) % q];
            let next = corners[j];
            vec![beyond(prev, tips[j]), tips[j], beyond(next, tips[j])]
        })
        .collect();
    PolylineDrawing { curves }
}
