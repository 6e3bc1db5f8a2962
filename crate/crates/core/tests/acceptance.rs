//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any failed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bcx::arrangement::DiskArrangement;
use bcx::bundling::{greedy_bundling, is_valid_bundled_crossing, min_bundling_exact, trivial_bundling, BundledCrossing};
use bcx::catalog::{self, all_graphs, connected_graphs};
use bcx::circular::{build_chord_arrangement, enumerate_cyclic_orders};
use bcx::frames::{enumerate_frame_arrangements, for_each_grouping};
use bcx::genus::{bco_prime, chord_oracle_bco_upper, min_genus, min_genus_at_most, OracleBound};
use bcx::obstruction::{detect_obstruction, encode_configuration, Pattern};
use bcx::planarity::{is_outerplanar, is_planar};
use bcx::solver::{decide_bco, realize_drawing, verify_certificate, Certificate, Decision};
use bcx::surface::{lift_and_decompose, verify_disk_regions};
use bcx::{Budget, Graph};

const GENUS_TIME_LIMIT: Duration = Duration::from_secs(300);
const ORACLE_SUITE_LIMIT: Duration = Duration::from_secs(3600);
const MAX_CATALOG_N: usize = 7;
const MAX_EXHAUSTIVE_N: usize = 6;
const ORACLE_MAX_K: usize = 8;
const BRUTE_FORCE_CROSSINGS: usize = 6;
const DETECTOR_P: [usize; 2] = [4, 6];
const MAX_FRAME_BETA: usize = 6;
const MAX_GROUPS_CHECKED: usize = 2;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    match failures.first() {
        None => Outcome { ok: true, detail: summary },
        Some(first) => Outcome {
            ok: false,
            detail: format!("{} failure(s), first: {first}", failures.len()),
        },
    }
}

fn edges_text(g: &Graph) -> String {
    let parts: Vec<String> = g.edges().iter().map(|&(u, v)| format!("{u}-{v}")).collect();
    format!("n={} [{}]", g.vertex_count(), parts.join(" "))
}

/// YES instances seen so far, kept for the certificate and treewidth checks.
#[derive(Default)]
struct Harvest {
    yes: Vec<(Graph, usize, Box<Certificate>)>,
}

impl Harvest {
    fn decide(&mut self, g: &Graph, k: usize) -> Decision {
        let d = decide_bco(g, k, &Budget::default());
        if let Decision::Yes(cert) = &d {
            self.yes.push((g.clone(), k, cert.clone()));
        }
        d
    }
}

fn graphs_up_to(n: usize, connected: bool) -> Vec<Graph> {
    (1..=n)
        .flat_map(|i| if connected { connected_graphs(i) } else { all_graphs(i) })
        .collect()
}

fn genus_identities() -> Outcome {
    let mut failures = Vec::new();
    let mut times = Vec::new();
    for (name, g) in [
        ("K6", catalog::complete(6)),
        ("K5", catalog::complete(5)),
        ("K3,3", catalog::complete_bipartite(3, 3)),
    ] {
        let start = Instant::now();
        let r = min_genus(&g, &Budget::unlimited());
        let t = start.elapsed();
        times.push(format!("{name} {:.2}s", t.as_secs_f64()));
        if !r.exact || r.genus != 1 {
            failures.push(format!("{name}: genus {} exact {}", r.genus, r.exact));
        }
        if t > GENUS_TIME_LIMIT {
            failures.push(format!("{name}: took {t:?}"));
        }
    }
    outcome(&failures, format!("genus 1 for K6, K5, K3,3 ({})", times.join(", ")))
}

fn apex_identity() -> Outcome {
    let mut failures = Vec::new();
    let r = bco_prime(&catalog::complete_bipartite(3, 3), &Budget::unlimited());
    if !r.exact || r.genus != 1 {
        failures.push(format!("K3,3: apex genus {} exact {}", r.genus, r.exact));
    }
    let graphs = graphs_up_to(MAX_CATALOG_N, true);
    for g in &graphs {
        match min_genus_at_most(&g.with_apex(), 0, &Budget::unlimited()) {
            Some(planar) if planar == is_outerplanar(g) => {}
            other => failures.push(format!("{}: apex planar {other:?}", edges_text(g))),
        }
    }
    outcome(
        &failures,
        format!("K3,3 apex genus 1; apex genus 0 iff outerplanar on {} graphs", graphs.len()),
    )
}

fn observation(h: &mut Harvest) -> Outcome {
    let mut failures = Vec::new();
    if !matches!(h.decide(&catalog::complete_bipartite(3, 3), 1), Decision::No) {
        failures.push("K3,3 at k=1 is not NO".into());
    }
    let graphs = graphs_up_to(MAX_EXHAUSTIVE_N, false);
    let mut yes = 0;
    let mut inconclusive = 0;
    for g in &graphs {
        match h.decide(g, 1) {
            Decision::Yes(_) => {
                yes += 1;
                if !is_planar(g) {
                    failures.push(format!("{}: YES at k=1 but not planar", edges_text(g)));
                }
            }
            Decision::No => {}
            Decision::Inconclusive => inconclusive += 1,
        }
    }
    outcome(
        &failures,
        format!(
            "K3,3 NO at k=1; {yes} YES of {} graphs all planar ({inconclusive} inconclusive)",
            graphs.len()
        ),
    )
}

fn zero_crossings(h: &mut Harvest) -> Outcome {
    let mut failures = Vec::new();
    let graphs = graphs_up_to(MAX_CATALOG_N, true);
    for g in &graphs {
        let yes = h.decide(g, 0).is_yes();
        if yes != is_outerplanar(g) {
            failures.push(format!("{}: decide {yes}, outerplanar {}", edges_text(g), !yes));
        }
    }
    outcome(&failures, format!("k=0 YES iff outerplanar on {} graphs", graphs.len()))
}

fn oracle_agreement(h: &mut Harvest) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let graphs = graphs_up_to(MAX_EXHAUSTIVE_N, true);
    let mut histogram = [0usize; ORACLE_MAX_K + 1];
    for g in &graphs {
        let k = match chord_oracle_bco_upper(g, ORACLE_MAX_K, &Budget::unlimited()) {
            OracleBound::Value { k, .. } => k,
            other => {
                failures.push(format!("{}: oracle {other:?}", edges_text(g)));
                continue;
            }
        };
        histogram[k] += 1;
        if !h.decide(g, k).is_yes() {
            failures.push(format!("{}: not YES at oracle k={k}", edges_text(g)));
        }
        if !is_outerplanar(g) && h.decide(g, 0).is_yes() {
            failures.push(format!("{}: YES at k=0 but not outerplanar", edges_text(g)));
        }
        if !is_planar(g) && h.decide(g, 1).is_yes() {
            failures.push(format!("{}: YES at k=1 but not planar", edges_text(g)));
        }
    }
    let t = start.elapsed();
    if t > ORACLE_SUITE_LIMIT {
        failures.push(format!("took {t:?}"));
    }
    let spread: Vec<String> = histogram
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, c)| format!("k={k}:{c}"))
        .collect();
    outcome(
        &failures,
        format!(
            "{} graphs YES at oracle k ({}) in {:.1}s",
            graphs.len(),
            spread.join(" "),
            t.as_secs_f64()
        ),
    )
}

fn round_trip(h: &Harvest) -> Outcome {
    let mut failures = Vec::new();
    for (g, k, cert) in &h.yes {
        if let Err(e) = verify_certificate(g, cert) {
            failures.push(format!("{} k={k}: {e}", edges_text(g)));
            continue;
        }
        if let Err(e) = realize_drawing(g, &cert.assignment, *k, &Budget::default()) {
            failures.push(format!("{} k={k}: realization {e}", edges_text(g)));
        }
    }
    let mut drawings = 0;
    for beta in 0..=MAX_FRAME_BETA {
        for arr in enumerate_frame_arrangements(beta) {
            for k in 0..=MAX_GROUPS_CHECKED {
                let _ = for_each_grouping(&arr, k, &Budget::unlimited(), &mut |fd| {
                    drawings += 1;
                    match lift_and_decompose(&fd) {
                        Ok(rd) if verify_disk_regions(&rd) => {}
                        Ok(_) => failures.push(format!("non-disk region in drawing {:?}", fd.to_doc())),
                        Err(e) => failures.push(format!("decomposition failed: {e}")),
                    }
                    true
                });
            }
        }
    }
    outcome(
        &failures,
        format!(
            "{} certificates verified and realized; {drawings} frame drawings decompose into disks",
            h.yes.len()
        ),
    )
}

fn treewidth_bound(h: &Harvest) -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0;
    for (g, k, _) in &h.yes {
        let tw = g.treewidth_lower_bound();
        worst = worst.max(tw);
        let cap = if *k == 1 { 10.min(8 * k + 2) } else { 8 * k + 2 };
        if tw > cap {
            failures.push(format!("{} k={k}: treewidth bound {tw}", edges_text(g)));
        }
    }
    outcome(
        &failures,
        format!("{} YES instances within 8k+2, largest bound {worst}", h.yes.len()),
    )
}

fn detector() -> Outcome {
    let mut failures = Vec::new();
    for p in DETECTOR_P {
        for pattern in [Pattern::A, Pattern::B] {
            if detect_obstruction(&encode_configuration(pattern, p)).is_none() {
                failures.push(format!("{pattern:?} with p={p} not detected"));
            }
        }
    }
    let mut checked = 0;
    for beta in 0..=MAX_FRAME_BETA {
        for arr in enumerate_frame_arrangements(beta) {
            checked += 1;
            if detect_obstruction(&arr).is_some() {
                failures.push(format!("fired on {:?}", arr.chords()));
            }
        }
    }
    outcome(
        &failures,
        format!("fires on both patterns for p=4,6; silent on {checked} frame arrangements"),
    )
}

/// Every partition of the crossings into blocks, each block a complete
/// bipartite set of chord pairs accepted as a bundled crossing.
fn brute_force_min_bundling(arr: &DiskArrangement) -> usize {
    fn block(arr: &DiskArrangement, xs: &[usize]) -> Option<BundledCrossing> {
        let (a0, _) = arr.crossing(xs[0]);
        // side of each chord: those crossing a0 are opposite to it
        let mut side1 = vec![a0];
        let mut side2 = Vec::new();
        for &x in xs {
            let (a, b) = arr.crossing(x);
            for (c, d) in [(a, b), (b, a)] {
                if c == a0 && !side2.contains(&d) {
                    side2.push(d);
                }
            }
        }
        for &x in xs {
            let (a, b) = arr.crossing(x);
            for (c, d) in [(a, b), (b, a)] {
                if side2.contains(&c) && !side1.contains(&d) {
                    side1.push(d);
                }
            }
        }
        if side1.len() * side2.len() != xs.len() {
            return None;
        }
        let mut covered: Vec<usize> = Vec::new();
        for &c in &side1 {
            for &d in &side2 {
                covered.push(arr.crossing_between(c, d)?);
            }
        }
        covered.sort_unstable();
        let mut want = xs.to_vec();
        want.sort_unstable();
        let b = BundledCrossing {
            bundle1: side1,
            bundle2: side2,
        };
        (covered == want && is_valid_bundled_crossing(arr, &b)).then_some(b)
    }
    fn go(arr: &DiskArrangement, x: usize, blocks: &mut Vec<Vec<usize>>, best: &mut usize) {
        if blocks.len() >= *best {
            return;
        }
        if x == arr.crossing_count() {
            if blocks.iter().all(|b| block(arr, b).is_some()) {
                *best = blocks.len();
            }
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(x);
            go(arr, x + 1, blocks, best);
            blocks[i].pop();
        }
        blocks.push(vec![x]);
        go(arr, x + 1, blocks, best);
        blocks.pop();
    }
    let mut best = usize::MAX;
    go(arr, 0, &mut Vec::new(), &mut best);
    best
}

fn bundling_bracket() -> Outcome {
    let mut failures = Vec::new();
    let mut layouts = 0;
    let mut brute = 0;
    for g in graphs_up_to(MAX_EXHAUSTIVE_N, false) {
        for ord in enumerate_cyclic_orders(g.vertex_count()) {
            layouts += 1;
            let arr = build_chord_arrangement(&g, &ord);
            let exact = min_bundling_exact(&arr, &Budget::unlimited());
            let (e, gr, tr) = (
                exact.bundling.len(),
                greedy_bundling(&arr).len(),
                trivial_bundling(&arr).len(),
            );
            if !exact.optimal || e > gr || gr > tr {
                failures.push(format!("{} order {:?}: {e} {gr} {tr}", edges_text(&g), ord.as_slice()));
            }
            if arr.crossing_count() <= BRUTE_FORCE_CROSSINGS {
                brute += 1;
                let b = brute_force_min_bundling(&arr);
                if b != e {
                    failures.push(format!(
                        "{} order {:?}: exact {e}, brute force {b}",
                        edges_text(&g),
                        ord.as_slice()
                    ));
                }
            }
        }
    }
    outcome(
        &failures,
        format!("bracket holds on {layouts} layouts; {brute} matched brute force"),
    )
}

fn subdivision() -> Outcome {
    let mut failures = Vec::new();
    for (name, g) in [("K5", catalog::complete(5)), ("K3,3", catalog::complete_bipartite(3, 3))] {
        let a = min_genus(&g, &Budget::unlimited());
        let b = min_genus(&g.subdivide_all(1), &Budget::unlimited());
        if !(a.exact && b.exact && a.genus == b.genus) {
            failures.push(format!("{name}: {} vs subdivided {}", a.genus, b.genus));
        }
    }
    outcome(&failures, "genus of K5 and K3,3 unchanged by subdivision".into())
}

fn main() -> ExitCode {
    let mut h = Harvest::default();
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();
    let mut run = |n: u8, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let status = if o.ok { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {n:>2} {name}: {} [{:.1}s]",
            o.detail,
            start.elapsed().as_secs_f64()
        );
        results.push((n, name, o));
    };
    run(1, "genus identities", &mut genus_identities);
    run(2, "apex identity", &mut apex_identity);
    run(3, "one crossing implies planar", &mut || observation(&mut h));
    run(4, "zero crossings iff outerplanar", &mut || zero_crossings(&mut h));
    run(5, "solver matches oracle", &mut || oracle_agreement(&mut h));
    run(6, "certificate round trip", &mut || round_trip(&h));
    run(7, "treewidth bound", &mut || treewidth_bound(&h));
    run(8, "obstruction detector", &mut detector);
    run(9, "bundling bracket", &mut bundling_bracket);
    run(10, "subdivision invariance", &mut subdivision);
    let failed = results.iter().filter(|r| !r.2.ok).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
