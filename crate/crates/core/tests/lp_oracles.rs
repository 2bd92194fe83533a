//! Cross-checks of the LP layer against a brute-force vertex enumeration.
//!
//! The oracle maximizes `c·m` over `{m >= 0, A m <= 1}` by trying every set
//! of `e` tight constraints, solving the square system by Gaussian
//! elimination and keeping the best feasible solution. It shares no code with
//! the simplex.

use itertools::Itertools;
use mcr_core::hypergraph::{build_h3_prime, build_hr, Hypergraph, WeightAssignment};
use mcr_core::lp::{self, Certificate, PfmOutcome};
use mcr_core::rational::{frac, int};
use mcr_core::Rational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Solves the square system `m x = rhs`; `None` when singular.
fn solve_square(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = rhs.len();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * p;
                }
                let d = &f * &rhs[col];
                rhs[r] -= d;
            }
        }
    }
    Some((0..k).map(|i| &rhs[i] / &m[i][i]).collect())
}

/// `max c·m` subject to `A m <= 1`, `m >= 0`, by vertex enumeration.
fn oracle_max(h: &Hypergraph, c: &[Rational]) -> Rational {
    let n = h.num_vertices();
    let e = h.num_edges();
    // Constraint rows `g·m <= b`: vertex rows, then `-m_j <= 0`.
    let mut rows: Vec<(Vec<Rational>, Rational)> = (0..n)
        .map(|v| {
            let g = h
                .edges()
                .iter()
                .map(|edge| if edge.contains(&v) { int(1) } else { int(0) })
                .collect();
            (g, int(1))
        })
        .collect();
    for j in 0..e {
        let g = (0..e).map(|i| if i == j { int(-1) } else { int(0) }).collect();
        rows.push((g, int(0)));
    }
    let mut best: Option<Rational> = None;
    for tight in (0..rows.len()).combinations(e) {
        let m: Vec<Vec<Rational>> = tight.iter().map(|&i| rows[i].0.clone()).collect();
        let rhs: Vec<Rational> = tight.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(x) = solve_square(m, rhs) else { continue };
        let feasible = rows.iter().all(|(g, b)| {
            let lhs: Rational = g.iter().zip(&x).map(|(a, b)| a * b).sum();
            lhs <= *b
        });
        if feasible {
            let value: Rational = c.iter().zip(&x).map(|(a, b)| a * b).sum();
            if best.as_ref().is_none_or(|b| value > *b) {
                best = Some(value);
            }
        }
    }
    best.expect("the origin is always a vertex")
}

fn oracle_nu_star(h: &Hypergraph) -> Rational {
    oracle_max(h, &vec![int(1); h.num_edges()])
}

/// A perfect fractional matching exists exactly when some feasible `m`
/// saturates every vertex, i.e. `max sum_e |e| m_e = n`.
fn oracle_has_pfm(h: &Hypergraph) -> bool {
    let sizes: Vec<Rational> = h.edges().iter().map(|e| int(e.len() as i64)).collect();
    oracle_max(h, &sizes) == int(h.num_vertices() as i64)
}

fn random_hypergraph(rng: &mut ChaCha8Rng, max_n: usize, max_e: usize) -> Hypergraph {
    let n = rng.gen_range(1..=max_n);
    let e = rng.gen_range(1..=max_e);
    let edges = (0..e)
        .map(|_| {
            let size = rng.gen_range(1..=n);
            let mut vs: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let j = rng.gen_range(i..n);
                vs.swap(i, j);
            }
            vs.truncate(size);
            vs
        })
        .collect();
    Hypergraph::new(n, edges).unwrap()
}

fn certificate_round_trip(c: &Certificate, h: &Hypergraph) {
    let back = Certificate::from_json(&c.to_json()).unwrap();
    assert_eq!(&back, c);
    back.check(h).unwrap();
}

/// Checks one hypergraph end to end; returns whether it had a PFM.
fn check_dichotomy(h: &Hypergraph) -> bool {
    let outcome = lp::perfect_fractional_matching(h).unwrap();
    let perturbation = lp::find_perturbation(h).unwrap();
    match (&outcome, &perturbation) {
        (PfmOutcome::Perfect(m), None) => {
            m.validate(h).unwrap();
            assert!(m.is_perfect(h));
            certificate_round_trip(&m.certificate(), h);
        }
        (PfmOutcome::Infeasible(w), Some(p)) => {
            w.validate(h).unwrap();
            p.validate(h).unwrap();
            certificate_round_trip(&w.certificate(), h);
            certificate_round_trip(&p.certificate(), h);
            let back = p.to_witness(h).unwrap();
            back.validate(h).unwrap();
            assert_eq!(lp::Perturbation::from_witness(&back), *p);
        }
        other => panic!("exactly one side of the dichotomy must hold: {other:?}"),
    }
    let (nu, matching) = lp::nu_star(h).unwrap();
    let (tau, cover) = lp::tau_star(h).unwrap();
    assert_eq!(nu, tau);
    assert_eq!(matching.total(), nu);
    assert_eq!(cover.total(), tau);
    matching.validate(h).unwrap();
    cover.validate(h).unwrap();
    certificate_round_trip(&matching.certificate(), h);
    certificate_round_trip(&cover.certificate(), h);
    outcome.matching().is_some()
}

#[test]
fn random_corpus_dichotomy() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut perfect = 0;
    for _ in 0..600 {
        let h = random_hypergraph(&mut rng, 8, 12);
        if check_dichotomy(&h) {
            perfect += 1;
        }
    }
    // The generator must exercise both outcomes.
    assert!(perfect > 20 && perfect < 580, "perfect = {perfect}");
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for _ in 0..150 {
        let h = random_hypergraph(&mut rng, 6, 6);
        let (nu, _) = lp::nu_star(&h).unwrap();
        assert_eq!(nu, oracle_nu_star(&h), "{}", h.to_text());
        let has_pfm = lp::perfect_fractional_matching(&h).unwrap().matching().is_some();
        assert_eq!(has_pfm, oracle_has_pfm(&h), "{}", h.to_text());
    }
}

#[test]
fn oracle_on_named_instances() {
    let w = WeightAssignment::uniform(6);
    let top = build_hr(3).unwrap().top_level(&w).unwrap();
    assert_eq!(oracle_nu_star(&top), frac(3, 2));
    assert!(!oracle_has_pfm(&top));
    assert!(!check_dichotomy(&top));

    let h3p = build_h3_prime();
    let top = h3p.top_level(&WeightAssignment::uniform(h3p.num_vertices())).unwrap();
    assert!(oracle_has_pfm(&top));
    assert!(check_dichotomy(&top));
}

#[test]
fn top_levels_of_hr_dichotomy() {
    for r in 3..=5 {
        let h = build_hr(r).unwrap();
        let top = h.top_level(&WeightAssignment::uniform(h.num_vertices())).unwrap();
        assert!(!check_dichotomy(&top));
        let (tau, _) = lp::tau_star(&top).unwrap();
        assert_eq!(tau, int(r as i64 - 2) + frac(1, r as i64 - 1));
    }
}

#[test]
fn perturbation_lowers_every_top_edge() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut checked = 0;
    while checked < 100 {
        let h = random_hypergraph(&mut rng, 7, 8);
        let w = WeightAssignment::uniform(h.num_vertices());
        let top_edges = h.top_level_edges(&w);
        let top = h.top_level(&w).unwrap();
        let Some(p) = lp::find_perturbation(&top).unwrap() else {
            continue;
        };
        let moved = lp::apply_perturbation(&w, &p, None).unwrap();
        assert_eq!(moved.weights().iter().sum::<Rational>(), Rational::one());
        assert!(moved.weights().iter().all(|x| !x.is_negative()));
        for &e in &top_edges {
            assert!(h.edge_weight(e, &moved) < h.edge_weight(e, &w));
        }
        checked += 1;
    }
}
