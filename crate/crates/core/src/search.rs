//! Exhaustive search over deletion sets.
//!
//! Fix one parallel class of AG(2, r) to delete. For every set `S` of `r`
//! points, remove the class and the points of `S`, and test the resulting
//! hypergraph for the structural properties of `H_r` and for a perturbable
//! top level under uniform weights. Valid sets are then grouped into orbits
//! under the affine maps of the plane that fix the deleted class.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::designs::AffinePlane;
use crate::error::{Error, Result};
use crate::galois::DEFAULT_ORDER_CAP;
use crate::hypergraph::{hr_deletion_set, Hypergraph, WeightAssignment};
use crate::lp::find_perturbation;

/// Largest `r` searched unless the caller raises the cap.
pub const DEFAULT_MAX_R: usize = 5;

/// Symmetries used for isomorphism reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryGroup {
    /// `x -> M x + t` with `M` invertible, fixing the deleted class.
    #[default]
    Affine,
    /// Affine maps composed with field automorphisms applied coordinatewise.
    Semilinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub r: usize,
    /// Class to delete; `None` means the columns.
    pub deleted_class: Option<usize>,
    pub max_r: usize,
    pub group: SymmetryGroup,
}

impl SearchConfig {
    pub fn new(r: usize) -> Self {
        SearchConfig {
            r,
            deleted_class: None,
            max_r: DEFAULT_MAX_R,
            group: SymmetryGroup::Affine,
        }
    }
}

/// One candidate deletion set with its test results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SChoice {
    /// Point ids, ascending.
    pub s: Vec<usize>,
    /// `(row, col)` of each point, 1-based.
    pub labels: Vec<(usize, usize)>,
    /// Edge chromatic number certified to be exactly `r`.
    pub chromatic_ok: bool,
    /// Rank `r`.
    pub rank_ok: bool,
    /// `δ* = (r^2 - r) - (r - 2)`.
    pub delta_star_ok: bool,
    pub top_level_perturbable: bool,
    /// One point of `S` on every line of the deleted class.
    pub transversal: bool,
    pub orbit_id: Option<usize>,
}

impl SChoice {
    pub fn is_valid(&self) -> bool {
        self.chromatic_ok && self.rank_ok && self.delta_star_ok && self.top_level_perturbable
    }
}

fn check_r(r: usize, max_r: usize) -> Result<()> {
    if !(3..=max_r).contains(&r) {
        return Err(Error::UnsupportedR { r, cap: max_r });
    }
    Ok(())
}

fn resolve_class(plane: &AffinePlane, deleted_class: Option<usize>) -> Result<usize> {
    let class = deleted_class.unwrap_or(plane.columns_class());
    if class > plane.order() {
        return Err(Error::InvalidInput(format!(
            "class {class} does not exist; AG(2,{}) has classes 0..={}",
            plane.order(),
            plane.order()
        )));
    }
    Ok(class)
}

/// Tests one deletion set from scratch.
pub fn evaluate(plane: &AffinePlane, deleted_class: usize, s: &[usize]) -> Result<SChoice> {
    let r = plane.order();
    let mut s = s.to_vec();
    s.sort_unstable();
    let h = Hypergraph::from_plane(plane, Some(deleted_class), &s);
    let cert = h.chromatic_certificate();
    let chromatic_ok = cert.exact() == Some(r);
    let rank_ok = h.rank() == r;
    let delta_star_ok = h.delta_star() == (r * r - r) - (r - 2);
    let top = h.top_level(&WeightAssignment::uniform(h.num_vertices()))?;
    let top_level_perturbable = find_perturbation(&top)?.is_some();
    let transversal = plane.parallel_classes()[deleted_class]
        .iter()
        .all(|&l| s.iter().filter(|p| plane.lines()[l].contains(p)).count() == 1);
    Ok(SChoice {
        labels: s.iter().map(|&p| plane.row_col(p)).collect(),
        s,
        chromatic_ok,
        rank_ok,
        delta_star_ok,
        top_level_perturbable,
        transversal,
        orbit_id: None,
    })
}

/// Every `r`-subset of the points, evaluated, in lexicographic order.
pub fn evaluate_all(config: &SearchConfig) -> Result<Vec<SChoice>> {
    check_r(config.r, config.max_r)?;
    let plane = AffinePlane::with_cap(config.r as u64, DEFAULT_ORDER_CAP.max(config.max_r as u64))?;
    let class = resolve_class(&plane, config.deleted_class)?;
    let subsets: Vec<Vec<usize>> = (0..plane.num_points()).combinations(config.r).collect();
    let mut out = subsets
        .par_iter()
        .map(|s| evaluate(&plane, class, s))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.s.cmp(&b.s));
    Ok(out)
}

/// The deletion sets passing every test, with columns deleted.
pub fn enumerate_s_choices(r: usize) -> Result<Vec<SChoice>> {
    let all = evaluate_all(&SearchConfig::new(r))?;
    Ok(all.into_iter().filter(SChoice::is_valid).collect())
}

/// Point permutations of the plane induced by the chosen group that map the
/// deleted class onto itself.
pub fn stabilizer(plane: &AffinePlane, deleted_class: usize, group: SymmetryGroup) -> Vec<Vec<usize>> {
    let q = plane.order();
    let f = plane.tables();
    let automorphisms = match group {
        SymmetryGroup::Affine => 1,
        SymmetryGroup::Semilinear => plane.field().degree(),
    };
    let class_lines: Vec<&Vec<usize>> = plane.parallel_classes()[deleted_class]
        .iter()
        .map(|&l| &plane.lines()[l])
        .collect();
    let fixes_class = |perm: &[usize]| {
        class_lines.iter().all(|line| {
            let mut image: Vec<usize> = line.iter().map(|&p| perm[p]).collect();
            image.sort_unstable();
            class_lines.iter().any(|l| **l == image)
        })
    };
    let frob = |mut a: usize, j: usize| {
        for _ in 0..j {
            a = f.frobenius(a);
        }
        a
    };
    let mut out = vec![];
    for j in 0..automorphisms {
        for (a, b, c, d) in itertools::iproduct!(0..q, 0..q, 0..q, 0..q) {
            let det = f.add(f.mul(a, d), f.neg(f.mul(b, c)));
            if det == 0 {
                continue;
            }
            let linear: Vec<usize> = (0..q * q)
                .map(|p| {
                    let (x, y) = plane.coords(p);
                    let (x, y) = (frob(x, j), frob(y, j));
                    plane.point_at(f.add(f.mul(a, x), f.mul(b, y)), f.add(f.mul(c, x), f.mul(d, y)))
                })
                .collect();
            if !fixes_class(&linear) {
                continue;
            }
            for (tx, ty) in itertools::iproduct!(0..q, 0..q) {
                let perm = linear
                    .iter()
                    .map(|&p| {
                        let (x, y) = plane.coords(p);
                        plane.point_at(f.add(x, tx), f.add(y, ty))
                    })
                    .collect();
                out.push(perm);
            }
        }
    }
    out
}

/// The lexicographically smallest image of `s` under `group`.
pub fn canonical_form(s: &[usize], group: &[Vec<usize>]) -> Vec<usize> {
    group
        .iter()
        .map(|g| {
            let mut image: Vec<usize> = s.iter().map(|&p| g[p]).collect();
            image.sort_unstable();
            image
        })
        .min()
        .unwrap_or_else(|| s.to_vec())
}

/// One orbit of valid deletion sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub id: usize,
    /// Lexicographically minimal member.
    pub representative: Vec<usize>,
    pub representative_labels: Vec<(usize, usize)>,
    pub size: usize,
}

/// Partitions `choices` into orbits, setting each choice's `orbit_id`.
/// Orbits are numbered in order of their representatives.
pub fn reduce_by_isomorphism(
    choices: &mut [SChoice],
    plane: &AffinePlane,
    deleted_class: usize,
    group: SymmetryGroup,
) -> Vec<Orbit> {
    let g = stabilizer(plane, deleted_class, group);
    let canon: Vec<Vec<usize>> = choices.par_iter().map(|c| canonical_form(&c.s, &g)).collect();
    let reps: Vec<Vec<usize>> = canon.iter().cloned().sorted().dedup().collect();
    let mut orbits: Vec<Orbit> = reps
        .iter()
        .enumerate()
        .map(|(id, rep)| Orbit {
            id,
            representative: rep.clone(),
            representative_labels: rep.iter().map(|&p| plane.row_col(p)).collect(),
            size: 0,
        })
        .collect();
    for (choice, c) in choices.iter_mut().zip(&canon) {
        let id = reps.binary_search(c).expect("representative listed");
        choice.orbit_id = Some(id);
        orbits[id].size += 1;
    }
    orbits
}

/// Result of a full search; serializes as the survey JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Survey {
    pub r: usize,
    pub deleted_class: usize,
    pub group: SymmetryGroup,
    pub group_order: usize,
    pub total_candidates: usize,
    pub chromatic_count: usize,
    pub rank_count: usize,
    pub delta_star_count: usize,
    pub perturbable_count: usize,
    pub valid_count: usize,
    pub orbit_count: usize,
    /// Whether every valid set meets each deleted line exactly once.
    pub all_valid_transversal: bool,
    /// Whether the standard `H_r` deletion set is valid (columns deleted only).
    pub standard_set_valid: Option<bool>,
    pub representatives: Vec<Orbit>,
    pub valid: Vec<SChoice>,
}

impl Survey {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("survey serializes")
    }
}

pub fn survey(config: &SearchConfig) -> Result<Survey> {
    let all = evaluate_all(config)?;
    let plane = AffinePlane::with_cap(config.r as u64, DEFAULT_ORDER_CAP.max(config.max_r as u64))?;
    let class = resolve_class(&plane, config.deleted_class)?;
    let count = |f: fn(&SChoice) -> bool| all.iter().filter(|c| f(c)).count();
    let (chromatic_count, rank_count, delta_star_count) = (
        count(|c| c.chromatic_ok),
        count(|c| c.rank_ok),
        count(|c| c.delta_star_ok),
    );
    let perturbable_count = count(|c| c.top_level_perturbable);
    let mut valid: Vec<SChoice> = all.iter().filter(|c| c.is_valid()).cloned().collect();
    let orbits = reduce_by_isomorphism(&mut valid, &plane, class, config.group);
    // The flags are invariant under the group, so each representative must
    // itself have been found valid.
    for o in &orbits {
        if valid.binary_search_by(|c| c.s.cmp(&o.representative)).is_err() {
            return Err(Error::InvariantViolation(format!(
                "orbit representative {:?} is not a valid choice",
                o.representative
            )));
        }
    }
    let standard_set_valid = (class == plane.columns_class()).then(|| {
        let s = hr_deletion_set(&plane);
        valid.iter().any(|c| c.s == s)
    });
    Ok(Survey {
        r: config.r,
        deleted_class: class,
        group: config.group,
        group_order: stabilizer(&plane, class, config.group).len(),
        total_candidates: all.len(),
        chromatic_count,
        rank_count,
        delta_star_count,
        perturbable_count,
        valid_count: valid.len(),
        orbit_count: orbits.len(),
        all_valid_transversal: valid.iter().all(|c| c.transversal),
        standard_set_valid,
        representatives: orbits,
        valid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsupported_r() {
        assert_eq!(
            enumerate_s_choices(2).unwrap_err(),
            Error::UnsupportedR { r: 2, cap: 5 }
        );
        assert_eq!(
            enumerate_s_choices(6).unwrap_err(),
            Error::UnsupportedR { r: 6, cap: 5 }
        );
    }

    #[test]
    fn standard_set_is_valid_for_three() {
        let plane = AffinePlane::new(3).unwrap();
        let c = evaluate(&plane, plane.columns_class(), &hr_deletion_set(&plane)).unwrap();
        assert!(c.is_valid() && c.transversal);
        assert_eq!(c.labels, vec![(2, 3), (3, 1), (3, 2)]);
    }

    #[test]
    fn deleting_a_full_row_is_not_perturbable() {
        let plane = AffinePlane::new(3).unwrap();
        let row3: Vec<usize> = (1..=3).map(|j| plane.point_rc(3, j)).collect();
        let c = evaluate(&plane, plane.columns_class(), &row3).unwrap();
        assert!(c.chromatic_ok && c.rank_ok);
        assert!(!c.top_level_perturbable);
        assert!(c.transversal);
    }

    #[test]
    fn stabilizer_orders() {
        // |AGL(2,q)| / (q + 1) affine maps fix a given direction.
        for q in [2u64, 3, 4, 5] {
            let plane = AffinePlane::new(q).unwrap();
            let q = q as usize;
            let gl = (q * q - 1) * (q * q - q);
            for class in [0, q] {
                let g = stabilizer(&plane, class, SymmetryGroup::Affine);
                assert_eq!(g.len(), q * q * gl / (q + 1));
            }
        }
        let plane = AffinePlane::new(4).unwrap();
        assert_eq!(stabilizer(&plane, 4, SymmetryGroup::Semilinear).len(), 2 * 16 * 180 / 5);
    }

    #[test]
    fn column_swap_and_translation_share_an_orbit() {
        let plane = AffinePlane::new(3).unwrap();
        let g = stabilizer(&plane, plane.columns_class(), SymmetryGroup::Affine);
        let s = hr_deletion_set(&plane);
        let swap = |p: usize| {
            let (row, col) = plane.row_col(p);
            let col = match col {
                1 => 2,
                2 => 1,
                c => c,
            };
            plane.point_rc(row, col)
        };
        let swapped: Vec<usize> = s.iter().map(|&p| swap(p)).collect();
        let shifted: Vec<usize> = s
            .iter()
            .map(|&p| {
                let (x, y) = plane.coords(p);
                plane.point_at(plane.tables().add(x, 1), plane.tables().add(y, 2))
            })
            .collect();
        let canon = canonical_form(&s, &g);
        assert_eq!(canonical_form(&swapped, &g), canon);
        assert_eq!(canonical_form(&shifted, &g), canon);
    }

    #[test]
    fn survey_for_three() {
        let survey = survey(&SearchConfig::new(3)).unwrap();
        assert_eq!(survey.total_candidates, 84);
        assert_eq!(survey.orbit_count, 1);
        assert_eq!(survey.standard_set_valid, Some(true));
        assert!(survey.all_valid_transversal);
        assert_eq!(
            survey.representatives.iter().map(|o| o.size).sum::<usize>(),
            survey.valid_count
        );
        assert!(survey.valid.iter().all(|c| c.orbit_id == Some(0)));
    }

    #[test]
    fn orbit_count_independent_of_deleted_class() {
        let base = survey(&SearchConfig::new(3)).unwrap();
        for class in 0..3 {
            let config = SearchConfig {
                deleted_class: Some(class),
                ..SearchConfig::new(3)
            };
            let other = survey(&config).unwrap();
            assert_eq!(other.valid_count, base.valid_count);
            assert_eq!(other.orbit_count, base.orbit_count);
            assert_eq!(other.standard_set_valid, None);
        }
    }
}
