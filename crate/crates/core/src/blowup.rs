//! Blow-ups of colored hypergraphs into edge-colored graphs.
//!
//! Host vertex `x_i` becomes a class `X_i` of consecutive graph vertices.
//! Two graph vertices in classes `X_i`, `X_j` are adjacent when some host edge
//! contains both `x_i` and `x_j`; this includes `i == j`, so each class of a
//! non-isolated host vertex is a clique. The pair takes the smallest color
//! among the host edges that contain it.
//!
//! A [`ColoredGraph`] is stored as the quotient (plan plus pair colors);
//! [`ColoredGraph::materialize`] expands it into an explicit edge list.

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::colorgraph::{analyze, ColoredEdge, ComponentReport, EdgeColoredGraph};
use crate::designs::AffinePlane;
use crate::dsu::DisjointSet;
use crate::error::{Error, Result};
use crate::galois::DEFAULT_ORDER_CAP;
use crate::hypergraph::{build_hr_with_cap, Hypergraph, WeightAssignment};
use crate::rational::{self, Rational};

/// Host hypergraph plus the order of each vertex class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupPlan {
    host: Hypergraph,
    class_sizes: Vec<usize>,
}

impl BlowupPlan {
    pub fn new(host: Hypergraph, class_sizes: Vec<usize>) -> Result<Self> {
        if !host.is_colored() {
            return Err(Error::InvalidInput("blow-up host must be edge-colored".into()));
        }
        if class_sizes.len() != host.num_vertices() {
            return Err(Error::InvalidInput(format!(
                "{} class sizes for {} host vertices",
                class_sizes.len(),
                host.num_vertices()
            )));
        }
        if let Some(i) = class_sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidInput(format!("class {i} is empty")));
        }
        Ok(BlowupPlan { host, class_sizes })
    }

    pub fn host(&self) -> &Hypergraph {
        &self.host
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn n(&self) -> usize {
        self.class_sizes.iter().sum()
    }
}

/// An r-edge-colored graph kept in quotient form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    plan: BlowupPlan,
    num_colors: usize,
    /// Row-major `t x t` table of pair colors, diagonal included.
    pair_color: Vec<Option<usize>>,
    offsets: Vec<usize>,
}

impl ColoredGraph {
    pub fn from_plan(plan: BlowupPlan) -> Self {
        let host = plan.host();
        let t = host.num_vertices();
        let mut pair_color: Vec<Option<usize>> = vec![None; t * t];
        let colors = host.colors().expect("plan hosts are colored");
        for (e, &c) in host.edges().iter().zip(colors) {
            for &a in e {
                for &b in e {
                    let slot = &mut pair_color[a * t + b];
                    if slot.is_none_or(|old| c < old) {
                        *slot = Some(c);
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(t + 1);
        offsets.push(0);
        for &s in plan.class_sizes() {
            offsets.push(offsets.last().unwrap() + s);
        }
        ColoredGraph {
            num_colors: host.color_bound(),
            plan,
            pair_color,
            offsets,
        }
    }

    pub fn plan(&self) -> &BlowupPlan {
        &self.plan
    }

    pub fn host(&self) -> &Hypergraph {
        self.plan.host()
    }

    pub fn n(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    fn t(&self) -> usize {
        self.plan.class_sizes.len()
    }

    /// Color shared by host vertices `i` and `j` (`i == j` allowed).
    pub fn host_pair_color(&self, i: usize, j: usize) -> Option<usize> {
        self.pair_color[i * self.t() + j]
    }

    /// Host class containing graph vertex `u`.
    pub fn class_of(&self, u: usize) -> usize {
        self.offsets.partition_point(|&o| o <= u) - 1
    }

    pub fn class_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// Color of the graph edge `uv`, or `None` when `u` and `v` are not adjacent.
    pub fn color(&self, u: usize, v: usize) -> Option<usize> {
        if u == v {
            return None;
        }
        self.host_pair_color(self.class_of(u), self.class_of(v))
    }

    /// Degree of any vertex of class `i`, from the class sizes.
    pub fn class_degree(&self, i: usize) -> usize {
        let sizes = &self.plan.class_sizes;
        (0..self.t())
            .filter(|&j| self.host_pair_color(i, j).is_some())
            .map(|j| if i == j { sizes[j] - 1 } else { sizes[j] })
            .sum()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        (0..self.t())
            .flat_map(|i| std::iter::repeat_n(self.class_degree(i), self.plan.class_sizes[i]))
            .collect()
    }

    /// Monochromatic component orders per color (descending), from the quotient.
    pub fn quotient_components(&self) -> Vec<Vec<usize>> {
        let t = self.t();
        let sizes = &self.plan.class_sizes;
        (0..self.num_colors)
            .map(|c| {
                let mut dsu = DisjointSet::new(t);
                let mut active = vec![false; t];
                for i in 0..t {
                    for j in i..t {
                        if self.host_pair_color(i, j) != Some(c) {
                            continue;
                        }
                        if i == j {
                            if sizes[i] >= 2 {
                                active[i] = true;
                            }
                        } else {
                            active[i] = true;
                            active[j] = true;
                            dsu.union(i, j);
                        }
                    }
                }
                let mut order = vec![0usize; t];
                for i in (0..t).filter(|&i| active[i]) {
                    let root = dsu.find(i);
                    order[root] += sizes[i];
                }
                let mut comps: Vec<usize> = order.into_iter().filter(|&o| o > 0).collect();
                comps.sort_unstable_by(|a, b| b.cmp(a));
                comps
            })
            .collect()
    }

    /// Degree and component report computed from the quotient alone.
    pub fn quotient_report(&self) -> ComponentReport {
        let per_color = self.quotient_components();
        let min_degree = (0..self.t()).map(|i| self.class_degree(i)).min().unwrap_or(0);
        ComponentReport::new(self.n(), self.num_colors, min_degree, per_color)
    }

    /// Explicit edge list, `u < v`, sorted.
    pub fn materialize(&self) -> EdgeColoredGraph {
        let n = self.n();
        let edges: Vec<ColoredEdge> = (0..n)
            .into_par_iter()
            .flat_map_iter(|u| {
                let cu = self.class_of(u);
                (u + 1..n).filter_map(move |v| {
                    self.host_pair_color(cu, self.class_of(v))
                        .map(|color| ColoredEdge { color, u, v })
                })
            })
            .collect();
        EdgeColoredGraph::new(n, self.num_colors, edges).expect("materialized edges are valid")
    }

    /// Materializes the graph and checks that the explicit degree sequence
    /// and component orders equal the quotient formulas.
    pub fn cross_check(&self) -> Result<ComponentReport> {
        let explicit = self.materialize();
        let report = analyze(&explicit);
        if explicit.degrees() != self.degree_sequence() {
            return Err(Error::InvariantViolation(
                "degree sequences of quotient and materialized graph differ".into(),
            ));
        }
        if report != self.quotient_report() {
            return Err(Error::InvariantViolation(
                "component reports of quotient and materialized graph differ".into(),
            ));
        }
        Ok(report)
    }
}

/// Equal classes of order `n / |V(H)|`.
pub fn uniform_blowup(host: &Hypergraph, n: usize) -> Result<ColoredGraph> {
    let t = host.num_vertices();
    if t == 0 || !n.is_multiple_of(t) {
        return Err(Error::NotDivisible {
            n: n as u64,
            divisor: t as u64,
        });
    }
    let plan = BlowupPlan::new(host.clone(), vec![n / t; t])?;
    Ok(ColoredGraph::from_plan(plan))
}

/// Class sizes `⌊α_i n⌋` or `⌈α_i n⌉` summing to `n`: the classes with the
/// largest fractional parts of `α_i n` are rounded up, ties to the lowest id.
pub fn apportion(weights: &WeightAssignment, n: usize) -> Vec<usize> {
    let n_r = rational::int(n as i64);
    let scaled: Vec<Rational> = weights.weights().iter().map(|w| w * &n_r).collect();
    let mut sizes: Vec<usize> = scaled
        .iter()
        .map(|x| x.floor().to_integer().to_usize().unwrap())
        .collect();
    let remainder = n - sizes.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    // stable sort keeps lower ids first among equal fractional parts
    order.sort_by(|&a, &b| scaled[b].fract().cmp(&scaled[a].fract()));
    for &i in order.iter().take(remainder) {
        sizes[i] += 1;
    }
    sizes
}

pub fn weighted_blowup(host: &Hypergraph, weights: &WeightAssignment, n: usize) -> Result<ColoredGraph> {
    if weights.len() != host.num_vertices() {
        return Err(Error::InvalidInput(format!(
            "{} weights for {} host vertices",
            weights.len(),
            host.num_vertices()
        )));
    }
    if !weights.is_positive() {
        return Err(Error::InvalidInput("blow-up weights must be strictly positive".into()));
    }
    let plan = BlowupPlan::new(host.clone(), apportion(weights, n))?;
    Ok(ColoredGraph::from_plan(plan))
}

/// The whole plane as a host: every line, colored by its parallel class.
pub fn plane_host(plane: &AffinePlane, drop_class: Option<usize>) -> Hypergraph {
    Hypergraph::from_plane(plane, drop_class, &[])
}

fn expect_report(report: &ComponentReport, delta: usize, max_component: usize, what: &str) -> Result<()> {
    if report.min_degree != delta || report.max_component != max_component {
        return Err(Error::InvariantViolation(format!(
            "{what}: expected delta {delta} and largest component {max_component}, got {} and {}",
            report.min_degree, report.max_component
        )));
    }
    Ok(())
}

/// Uniform blow-up of AG(2, r-1) with all `r` parallel classes: a coloring of
/// `K_n` whose monochromatic components all have order `n / (r-1)`.
pub fn complete_plane_coloring(r: usize, n: usize) -> Result<ColoredGraph> {
    if r < 3 {
        return Err(Error::PreconditionViolated(format!("r >= 3 (got r = {r})")));
    }
    let plane = AffinePlane::new(r as u64 - 1)?;
    let g = uniform_blowup(&plane_host(&plane, None), n)?;
    let report = g.quotient_report();
    let expected = n / (r - 1);
    if report.per_color.iter().flatten().any(|&o| o != expected) || report.min_degree != n - 1 {
        return Err(Error::InvariantViolation(
            "complete plane coloring is not extremal".into(),
        ));
    }
    Ok(g)
}

/// Uniform blow-up of AG(2, r) minus its columns, with
/// `δ = (1 - (r-1)/r^2) n - 1` and largest component `n / r`.
pub fn columnless_plane_blowup(r: usize, n: usize) -> Result<ColoredGraph> {
    columnless_plane_blowup_with_cap(r, n, DEFAULT_ORDER_CAP)
}

pub fn columnless_plane_blowup_with_cap(r: usize, n: usize, cap: u64) -> Result<ColoredGraph> {
    if r < 2 {
        return Err(Error::PreconditionViolated(format!("r >= 2 (got r = {r})")));
    }
    if n == 0 || !n.is_multiple_of(r * r) {
        return Err(Error::NotDivisible {
            n: n as u64,
            divisor: (r * r) as u64,
        });
    }
    let plane = AffinePlane::with_cap(r as u64, cap)?;
    let g = uniform_blowup(&plane_host(&plane, Some(plane.columns_class())), n)?;
    let delta = n - (r - 1) * n / (r * r) - 1;
    expect_report(&g.quotient_report(), delta, n / r, "columnless plane blow-up")?;
    Ok(g)
}

/// Vertices of `H_r` whose classes grow: row `r-1` minus its last point,
/// plus the last point of row `r-2`.
pub fn enlarged_set(host: &Hypergraph, r: usize) -> Result<Vec<usize>> {
    let mut a = Vec::with_capacity(r);
    for (row, col) in (1..r).map(|i| (r - 1, i)).chain(std::iter::once((r - 2, r))) {
        a.push(
            host.vertex_at(row, col)
                .ok_or_else(|| Error::InvalidInput(format!("host has no vertex labelled ({row}, {col})")))?,
        );
    }
    a.sort_unstable();
    Ok(a)
}

/// Checks `r >= 3`, `c >= 1`, `(r^2 - r) | n` and
/// `n >= r(r-1)((r-1)(r-2)+1)c`, naming the first inequality that fails.
pub fn check_perturbed_preconditions(r: usize, c: usize, n: usize) -> Result<()> {
    if r < 3 {
        return Err(Error::PreconditionViolated(format!("r < 3 (r = {r})")));
    }
    if c < 1 {
        return Err(Error::PreconditionViolated("c < 1 (c = 0)".into()));
    }
    let t = r * r - r;
    if !n.is_multiple_of(t) {
        return Err(Error::PreconditionViolated(format!(
            "(r^2-r) does not divide n: {t} does not divide {n}; only the divisible case is constructed"
        )));
    }
    let bound = r * (r - 1) * ((r - 1) * (r - 2) + 1) * c;
    if n < bound {
        return Err(Error::PreconditionViolated(format!(
            "n < r(r-1)((r-1)(r-2)+1)c: {n} < {bound}"
        )));
    }
    Ok(())
}

/// Class sizes `n/(r^2-r) + (r-2)c` on the enlarged set and
/// `n/(r^2-r) - c` elsewhere, over `H_r`.
pub fn perturbed_plan(r: usize, c: usize, n: usize) -> Result<BlowupPlan> {
    perturbed_plan_with_cap(r, c, n, DEFAULT_ORDER_CAP)
}

pub fn perturbed_plan_with_cap(r: usize, c: usize, n: usize, cap: u64) -> Result<BlowupPlan> {
    check_perturbed_preconditions(r, c, n)?;
    let host = build_hr_with_cap(r, cap)?;
    let base = n / (r * r - r);
    let enlarged = enlarged_set(&host, r)?;
    let sizes: Vec<usize> = (0..host.num_vertices())
        .map(|v| {
            if enlarged.binary_search(&v).is_ok() {
                base + (r - 2) * c
            } else {
                base - c
            }
        })
        .collect();
    if sizes.iter().sum::<usize>() != n {
        return Err(Error::InvariantViolation(
            "perturbed class sizes do not sum to n".into(),
        ));
    }
    BlowupPlan::new(host, sizes)
}

/// The perturbed blow-up of `H_r`, with `δ = (1 - (r-2)/(r^2-r)) n - c - 1`
/// and largest monochromatic component `n/(r-1) - c`, both checked before
/// returning.
pub fn build_perturbed_graph(r: usize, c: usize, n: usize) -> Result<ColoredGraph> {
    build_perturbed_graph_with_cap(r, c, n, DEFAULT_ORDER_CAP)
}

pub fn build_perturbed_graph_with_cap(r: usize, c: usize, n: usize, cap: u64) -> Result<ColoredGraph> {
    let plan = perturbed_plan_with_cap(r, c, n, cap)?;
    let g = ColoredGraph::from_plan(plan);
    let delta = n - (r - 2) * n / (r * r - r) - c - 1;
    let max_component = n / (r - 1) - c;
    expect_report(&g.quotient_report(), delta, max_component, "perturbed H_r blow-up")?;

    // The maximum is attained by a full-size edge meeting the enlarged set once.
    let host = g.host();
    let enlarged = enlarged_set(host, r)?;
    let sizes = g.plan().class_sizes();
    let attained = host.edges().iter().any(|e| {
        e.len() == r
            && e.iter().filter(|v| enlarged.binary_search(v).is_ok()).count() == 1
            && e.iter().map(|&v| sizes[v]).sum::<usize>() == max_component
    });
    if !attained {
        return Err(Error::InvariantViolation(
            "no full-size edge attains the component bound".into(),
        ));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{build_h3_prime, build_hr, hr_deletion_set};
    use crate::rational::frac;

    #[test]
    fn order_two_plane_gives_k4() {
        let plane = AffinePlane::new(2).unwrap();
        let g = uniform_blowup(&plane_host(&plane, None), 4).unwrap();
        let e = g.materialize();
        assert_eq!(e.edges().len(), 6);
        let report = g.cross_check().unwrap();
        assert!(report.per_color.iter().all(|c| c == &vec![2, 2]));
    }

    #[test]
    fn complete_plane_coloring_components() {
        let g = complete_plane_coloring(3, 8).unwrap();
        let report = g.cross_check().unwrap();
        assert!(report.per_color.iter().flatten().all(|&o| o == 4));
        assert_eq!(report.min_degree, 7);
        // plane of order r-1 = 3, n = 9 s
        let g = complete_plane_coloring(4, 18).unwrap();
        assert_eq!(g.cross_check().unwrap().max_component, 6);
    }

    #[test]
    fn uniform_blowup_divisibility() {
        let h = build_hr(3).unwrap();
        let g = uniform_blowup(&h, 12).unwrap();
        assert!(g.plan().class_sizes().iter().all(|&s| s == 2));
        assert_eq!(
            uniform_blowup(&h, 13).unwrap_err(),
            Error::NotDivisible { n: 13, divisor: 6 }
        );
    }

    #[test]
    fn columnless_instances() {
        for (r, n, delta, comp) in [(3, 18, 13, 6), (3, 9, 6, 3), (4, 16, 12, 4)] {
            let g = columnless_plane_blowup(r, n).unwrap();
            let report = g.cross_check().unwrap();
            assert_eq!((report.min_degree, report.max_component), (delta, comp), "r={r} n={n}");
        }
        assert!(matches!(
            columnless_plane_blowup(3, 10),
            Err(Error::NotDivisible { .. })
        ));
        assert_eq!(columnless_plane_blowup(6, 36).unwrap_err(), Error::NotPrimePower(6));
    }

    #[test]
    fn perturbed_plan_sizes() {
        let plan = perturbed_plan(3, 1, 18).unwrap();
        let host = plan.host();
        let mut fours: Vec<(usize, usize)> = (0..6)
            .filter(|&v| plan.class_sizes()[v] == 4)
            .map(|v| host.label(v).unwrap())
            .collect();
        fours.sort_unstable();
        assert_eq!(fours, vec![(1, 3), (2, 1), (2, 2)]);
        assert_eq!(plan.class_sizes().iter().filter(|&&s| s == 2).count(), 3);
        assert_eq!(plan.n(), 18);

        let plan = perturbed_plan(4, 1, 84).unwrap();
        assert_eq!(plan.class_sizes().iter().filter(|&&s| s == 9).count(), 4);
        assert_eq!(plan.class_sizes().iter().filter(|&&s| s == 6).count(), 8);
    }

    #[test]
    fn perturbed_plan_preconditions() {
        let err = perturbed_plan(3, 1, 12).unwrap_err();
        assert_eq!(
            err,
            Error::PreconditionViolated("n < r(r-1)((r-1)(r-2)+1)c: 12 < 18".into())
        );
        assert!(matches!(perturbed_plan(3, 1, 20), Err(Error::PreconditionViolated(m)) if m.contains("divide")));
        assert!(matches!(perturbed_plan(2, 1, 20), Err(Error::PreconditionViolated(_))));
        assert!(matches!(perturbed_plan(3, 0, 18), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn perturbed_graph_instances() {
        for (r, c, n, delta, comp) in [
            (3, 1, 18, 13, 8),
            (4, 1, 84, 68, 27),
            (5, 1, 260, 219, 64),
            (3, 2, 42, 32, 19),
        ] {
            let g = build_perturbed_graph(r, c, n).unwrap();
            let report = g.cross_check().unwrap();
            assert_eq!(
                (report.min_degree, report.max_component),
                (delta, comp),
                "r={r} c={c} n={n}"
            );
        }
    }

    #[test]
    fn degree_formula_pointwise() {
        // d(u) = (n-1) - sum of |X_w| over the other surviving points of u's column
        for (r, c, n) in [(3, 1, 18), (4, 1, 84), (5, 2, 520)] {
            let g = build_perturbed_graph(r, c, n).unwrap();
            let host = g.host();
            let sizes = g.plan().class_sizes();
            let labels = host.labels().unwrap();
            let plane = AffinePlane::new(r as u64).unwrap();
            let s = hr_deletion_set(&plane);
            assert_eq!(s.len(), r);
            for v in 0..host.num_vertices() {
                let col = labels[v].1;
                let others: usize = (0..host.num_vertices())
                    .filter(|&w| w != v && labels[w].1 == col)
                    .map(|w| sizes[w])
                    .sum();
                assert_eq!(g.class_degree(v), (n - 1) - others);
            }
        }
    }

    #[test]
    fn components_are_host_edges() {
        let g = build_perturbed_graph(4, 1, 84).unwrap();
        let host = g.host();
        let sizes = g.plan().class_sizes();
        let colors = host.colors().unwrap();
        let report = g.quotient_report();
        for c in 0..4 {
            let mut expected: Vec<usize> = host
                .edges()
                .iter()
                .zip(colors)
                .filter(|(_, &ec)| ec == c)
                .map(|(e, _)| e.iter().map(|&v| sizes[v]).sum())
                .collect();
            expected.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(report.per_color[c], expected);
        }
    }

    #[test]
    fn weighted_blowup_rounding() {
        let h = Hypergraph::with_colors(3, vec![vec![0, 1, 2]], vec![0]).unwrap();
        let w = WeightAssignment::new(vec![frac(1, 2), frac(1, 3), frac(1, 6)]).unwrap();
        assert_eq!(weighted_blowup(&h, &w, 6).unwrap().plan().class_sizes(), &[3, 2, 1]);
        let w = WeightAssignment::uniform(3);
        assert_eq!(weighted_blowup(&h, &w, 4).unwrap().plan().class_sizes(), &[2, 1, 1]);
        let hr = build_hr(3).unwrap();
        assert_eq!(
            weighted_blowup(&hr, &WeightAssignment::uniform(6), 12).unwrap(),
            uniform_blowup(&hr, 12).unwrap()
        );
        assert!(weighted_blowup(&h, &WeightAssignment::concentrated(3, 0), 6).is_err());
    }

    #[test]
    fn h3_prime_blowup_components() {
        let g = uniform_blowup(&build_h3_prime(), 12).unwrap();
        let report = g.cross_check().unwrap();
        assert_eq!(report.min_degree, 12 * 5 / 6 - 1);
        assert_eq!(report.max_component, 6);
    }

    #[test]
    fn color_lookup() {
        let g = build_perturbed_graph(3, 1, 18).unwrap();
        for u in 0..18 {
            assert_eq!(g.color(u, u), None);
            for v in 0..18 {
                assert_eq!(g.color(u, v), g.color(v, u));
            }
        }
        assert_eq!(g.class_of(0), 0);
        assert_eq!(g.class_of(17), 5);
    }
}
