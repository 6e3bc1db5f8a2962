use proptest::prelude::*;

use bcx::bundling::is_valid_bundling;
use bcx::circular::{build_chord_arrangement, CyclicOrder};
use bcx::frames::{enumerate_frame_arrangements, for_each_grouping};
use bcx::genus::{bco_prime, genus_of_rotation, min_genus, RotationSystem};
use bcx::planarity::{is_outerplanar, is_planar};
use bcx::solver::{decide_bco, realize_drawing};
use bcx::surface::lift_and_decompose;
use bcx::{Budget, Graph};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges: Vec<(usize, usize)> = pairs.iter().zip(&keep).filter(|p| *p.1).map(|p| *p.0).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn with_order(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

/// Treewidth as the best elimination order over all permutations.
fn exact_treewidth(g: &Graph) -> usize {
    fn go(adj: &mut Vec<u32>, alive: u32, cur: usize, best: &mut usize) {
        if alive == 0 {
            *best = (*best).min(cur);
            return;
        }
        for v in 0..adj.len() {
            if alive >> v & 1 == 0 {
                continue;
            }
            let nb = adj[v] & alive;
            let width = cur.max(nb.count_ones() as usize);
            if width >= *best {
                continue;
            }
            let saved = adj.clone();
            for u in 0..adj.len() {
                if nb >> u & 1 == 1 {
                    adj[u] |= nb & !(1 << u);
                }
            }
            go(adj, alive & !(1 << v), width, best);
            *adj = saved;
        }
    }
    let n = g.vertex_count();
    let mut adj = vec![0u32; n];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut best = n;
    go(&mut adj, (1u32 << n) - 1, 0, &mut best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn outerplanar_iff_apex_planar(g in graph(8)) {
        prop_assert_eq!(is_outerplanar(&g), is_planar(&g.with_apex()));
    }

    #[test]
    fn subdivision_keeps_components(g in graph(7), pick in any::<prop::sample::Index>(), t in 0usize..4) {
        prop_assume!(g.edge_count() > 0);
        let e = pick.index(g.edge_count());
        let h = g.subdivide(e, t).unwrap();
        prop_assert_eq!(h.components().len(), g.components().len());
        prop_assert_eq!(h.is_connected(), g.is_connected());
    }

    #[test]
    fn treewidth_bound_is_sound(g in graph(8)) {
        let lb = g.treewidth_lower_bound();
        prop_assert!(lb <= exact_treewidth(&g));
        if is_outerplanar(&g) {
            prop_assert!(lb <= 2);
        }
    }

    #[test]
    fn crossings_are_symmetric_and_euler_holds((g, order) in with_order(8)) {
        let arr = build_chord_arrangement(&g, &CyclicOrder::new(&g, order).unwrap());
        for a in 0..arr.chord_count() {
            for b in 0..arr.chord_count() {
                prop_assert_eq!(arr.crossing_between(a, b).is_some(), arr.crossing_between(b, a).is_some());
            }
        }
        prop_assert!(arr.plane_map().satisfies_euler());
    }

    #[test]
    fn any_rotation_has_a_genus((g, seed) in (graph(7), any::<u64>())) {
        // rotate each vertex's edge list by a seeded amount
        let rot: Vec<Vec<usize>> = (0..g.vertex_count())
            .map(|v| {
                let mut es = g.incident(v).to_vec();
                if !es.is_empty() {
                    let s = (seed >> (v % 16 * 4)) as usize % es.len();
                    es.rotate_left(s);
                    if seed >> v & 1 == 1 {
                        es.reverse();
                    }
                }
                es
            })
            .collect();
        let genus = genus_of_rotation(&g, &RotationSystem(rot));
        if g.is_connected() {
            prop_assert!(genus.unwrap() >= min_genus(&g, &Budget::default()).genus);
        } else {
            prop_assert!(genus.is_err());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn genus_zero_iff_planar_and_apex_monotone(g in graph(5)) {
        let budget = Budget::default();
        let plain = min_genus(&g, &budget);
        let apex = bco_prime(&g, &Budget::default());
        prop_assert!(plain.exact && apex.exact);
        prop_assert_eq!(plain.genus == 0, is_planar(&g));
        prop_assert_eq!(apex.genus == 0, is_outerplanar(&g));
        prop_assert!(plain.genus <= apex.genus);
    }

    #[test]
    fn subdividing_one_edge_keeps_genus(g in graph(6), pick in any::<prop::sample::Index>(), t in 1usize..3) {
        prop_assume!(g.edge_count() > 0);
        let h = g.subdivide(pick.index(g.edge_count()), t).unwrap();
        let (a, b) = (min_genus(&g, &Budget::default()), min_genus(&h, &Budget::default()));
        prop_assert!(a.exact && b.exact);
        prop_assert_eq!(a.genus, b.genus);
    }

    #[test]
    fn decisions_are_monotone_and_sound(g in graph(6), k in 0usize..3) {
        let now = decide_bco(&g, k, &Budget::default());
        if let bcx::solver::Decision::Yes(cert) = &now {
            prop_assert!(realize_drawing(&g, &cert.assignment, k, &Budget::default()).is_ok());
            prop_assert!(decide_bco(&g, k + 1, &Budget::default()).is_yes());
        }
    }
}

#[test]
fn frame_drawings_bundle_and_bound_their_regions() {
    for beta in 0..=6 {
        for arr in enumerate_frame_arrangements(beta) {
            for k in 0..=2 {
                for_each_grouping(&arr, k, &Budget::unlimited(), &mut |fd| {
                    assert!(is_valid_bundling(&fd.arrangement, &fd.groups));
                    let rd = lift_and_decompose(&fd).unwrap();
                    let arcs: usize = rd.regions.iter().map(|r| r.arcs().count()).sum();
                    assert_eq!(arcs, beta.max(1) * 2 - usize::from(beta == 0));
                    assert!(rd.regions.len() <= (2 * beta).max(1));
                    assert!(rd.regions.len() <= (8 * k).max(1));
                    if k == 1 {
                        assert_eq!(rd.regions.len(), 6);
                    }
                    true
                })
                .unwrap();
            }
        }
    }
}
