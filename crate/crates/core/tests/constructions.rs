//! End-to-end checks of the constructions against values derived by hand and
//! against a breadth-first component count that ignores the blow-up structure.

use mcr_core::blowup::{build_perturbed_graph, columnless_plane_blowup, complete_plane_coloring, uniform_blowup};
use mcr_core::colorgraph::{analyze, design_coloring, known_bounds, EdgeColoredGraph};
use mcr_core::designs::{kirkman_15, rbibd_coloring_params};
use mcr_core::hypergraph::{build_h3_prime, build_hr};
use mcr_core::rational::{frac, int};
use mcr_core::search::{survey, SearchConfig, SymmetryGroup};

/// `(min degree, largest monochromatic component)` from adjacency lists.
fn bfs_audit(g: &EdgeColoredGraph) -> (usize, usize) {
    let n = g.n();
    let mut best = 0;
    for c in 0..g.num_colors() {
        let mut adj = vec![vec![]; n];
        for e in g.edges().iter().filter(|e| e.color == c) {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] || adj[s].is_empty() {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut size = 0;
            while let Some(x) = stack.pop() {
                size += 1;
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            best = best.max(size);
        }
    }
    let mut deg = vec![0; n];
    for e in g.edges() {
        deg[e.u] += 1;
        deg[e.v] += 1;
    }
    (deg.into_iter().min().unwrap(), best)
}

#[test]
fn perturbed_blowups_meet_the_formula() {
    for (r, c, n) in [
        (3usize, 1usize, 18usize),
        (3, 2, 42),
        (3, 1, 24),
        (4, 1, 84),
        (4, 2, 168),
    ] {
        let g = build_perturbed_graph(r, c, n).unwrap();
        let e = g.materialize();
        // (1 - (r-2)/(r^2-r)) n - c - 1
        let delta = n - (r - 2) * n / (r * r - r) - c - 1;
        let max = n / (r - 1) - c;
        assert_eq!(bfs_audit(&e), (delta, max), "(r, c, n) = ({r}, {c}, {n})");
        assert_eq!(g.quotient_report().min_degree, delta);
        assert_eq!(g.quotient_report().max_component, max);
    }
}

#[test]
fn perturbed_blowup_for_five_colors() {
    let g = build_perturbed_graph(5, 1, 260).unwrap();
    assert_eq!(bfs_audit(&g.materialize()), (219, 64));
}

#[test]
fn uniform_blowup_of_hr_has_critical_parameters() {
    // Uniform blow-ups sit exactly at the threshold: δ = (1 - (r-2)/(r^2-r)) n - 1
    // and every top-level edge gives a component of order n/(r-1).
    for r in 3..=5 {
        let h = build_hr(r).unwrap();
        let n = 2 * (r * r - r);
        let g = uniform_blowup(&h, n).unwrap();
        let (delta, max) = bfs_audit(&g.materialize());
        assert_eq!(delta, n - (r - 2) * 2 - 1);
        assert_eq!(max, n / (r - 1));
    }
}

#[test]
fn row_deleted_variant() {
    // δ = 5n/6 - 1 with every monochromatic component of order at most n/2.
    let h = build_h3_prime();
    for n in [6, 12, 24] {
        let g = uniform_blowup(&h, n).unwrap();
        assert_eq!(bfs_audit(&g.materialize()), (5 * n / 6 - 1, n / 2));
    }
}

#[test]
fn reference_constructions() {
    assert_eq!(
        bfs_audit(&columnless_plane_blowup(3, 18).unwrap().materialize()),
        (13, 6)
    );
    let g = complete_plane_coloring(3, 8).unwrap();
    let report = analyze(&g.materialize());
    assert!(report.per_color.iter().flatten().all(|&c| c == 4));
    assert_eq!(bfs_audit(&g.materialize()), (7, 4));
}

#[test]
fn kirkman_blowup() {
    let d = kirkman_15();
    assert_eq!((d.blocks.len(), d.num_classes()), (35, 7));
    assert!(d.verify().pair_coverage_exact);
    let e = design_coloring(&d, 105).unwrap().materialize();
    assert!(e.is_complete());
    assert_eq!(bfs_audit(&e), (104, 21));
}

#[test]
fn bounds_examples() {
    let b = known_bounds(7, 35, &[kirkman_15().params()]).unwrap();
    assert_eq!((b.lower, b.upper), (int(6), int(7)));
    let n = 231 * 2;
    let b = known_bounds(23, n, &[rbibd_coloring_params(11, 1)]).unwrap();
    assert_eq!(b.q, 19);
    assert_eq!(b.lower, frac(n as i64, 1) / (int(22) - frac(1, 22)));
    assert_eq!(b.upper, frac(n as i64, 21));
}

#[test]
fn search_for_three_and_four() {
    for r in [3, 4] {
        let s = survey(&SearchConfig::new(r)).unwrap();
        let subsets = [84, 1820][r - 3];
        assert_eq!(s.total_candidates, subsets);
        assert_eq!(s.orbit_count, 1);
        assert_eq!(s.standard_set_valid, Some(true));
        assert!(s.all_valid_transversal);
        assert!(s
            .valid
            .iter()
            .all(|c| c.chromatic_ok && c.rank_ok && c.delta_star_ok && c.top_level_perturbable));
    }
}

#[test]
fn semilinear_group_never_splits_orbits() {
    let affine = survey(&SearchConfig::new(4)).unwrap();
    let semilinear = survey(&SearchConfig {
        group: SymmetryGroup::Semilinear,
        ..SearchConfig::new(4)
    })
    .unwrap();
    assert_eq!(semilinear.valid_count, affine.valid_count);
    assert!(semilinear.orbit_count <= affine.orbit_count);
    assert_eq!(semilinear.group_order, 2 * affine.group_order);
}
