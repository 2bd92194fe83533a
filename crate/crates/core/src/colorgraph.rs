//! Edge-colored graph analysis.
//!
//! Monochromatic components are built from the edges of one color only; a
//! vertex with no edge of color `c` is not a component of color `c`.
//!
//! Text format: header `G <n> <r>`, then one line `<color> <u> <v>` per edge.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::blowup::{uniform_blowup, ColoredGraph};
use crate::designs::{kirkman_15, RbibdDesign, RbibdParams};
use crate::dsu::DisjointSet;
use crate::error::{Error, Result};
use crate::galois::is_prime_power;
use crate::hypergraph::Hypergraph;
use crate::rational::{self, Rational};

/// Default cap on the number of colorings `mc_oracle` will enumerate.
pub const DEFAULT_ORACLE_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ColoredEdge {
    pub color: usize,
    pub u: usize,
    pub v: usize,
}

/// An explicit edge list with one color per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoredGraph {
    n: usize,
    num_colors: usize,
    edges: Vec<ColoredEdge>,
}

impl EdgeColoredGraph {
    /// Edges are normalized to `u < v`; loops, repeated pairs and colors
    /// `>= num_colors` are rejected.
    pub fn new(n: usize, num_colors: usize, edges: Vec<ColoredEdge>) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        let mut out = Vec::with_capacity(edges.len());
        for e in edges {
            let (u, v) = (e.u.min(e.v), e.u.max(e.v));
            if u == v || v >= n {
                return Err(Error::InvalidInput(format!("bad edge {}-{} for n = {n}", e.u, e.v)));
            }
            if e.color >= num_colors {
                return Err(Error::InvalidInput(format!("color {} >= {num_colors}", e.color)));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidInput(format!("edge {u}-{v} appears twice")));
            }
            out.push(ColoredEdge { color: e.color, u, v });
        }
        Ok(EdgeColoredGraph {
            n,
            num_colors,
            edges: out,
        })
    }

    /// `K_n` with every edge in color 0.
    pub fn monochromatic_complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| ColoredEdge { color: 0, u, v }))
            .collect();
        EdgeColoredGraph {
            n,
            num_colors: 1,
            edges,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn edges(&self) -> &[ColoredEdge] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    /// The underlying uncolored graph.
    pub fn uncolored(&self) -> Graph {
        Graph {
            n: self.n,
            edges: self.edges.iter().map(|e| (e.u, e.v)).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.edges.len() * 12);
        writeln!(out, "G {} {}", self.n, self.num_colors).unwrap();
        for e in &self.edges {
            writeln!(out, "{} {} {}", e.color, e.u, e.v).unwrap();
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let (n, r) = match head.as_slice() {
            ["G", n, r] => (
                n.parse().map_err(|_| Error::parse(1, "bad vertex count"))?,
                r.parse().map_err(|_| Error::parse(1, "bad color count"))?,
            ),
            _ => return Err(Error::parse(1, "expected `G <n> <r>`")),
        };
        let mut edges = vec![];
        for (i, line) in lines {
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse(i + 1, format!("bad number {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            match nums.as_slice() {
                &[color, u, v] => edges.push(ColoredEdge { color, u, v }),
                _ => return Err(Error::parse(i + 1, "expected `<color> <u> <v>`")),
            }
        }
        Self::new(n, r, edges)
    }
}

/// Degree and monochromatic component summary; serializes as the audit JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub n: usize,
    pub r: usize,
    #[serde(rename = "delta")]
    pub min_degree: usize,
    /// Component orders for each color, descending.
    #[serde(rename = "per_color_component_orders")]
    pub per_color: Vec<Vec<usize>>,
    pub max_component: usize,
}

impl ComponentReport {
    pub fn new(n: usize, r: usize, min_degree: usize, per_color: Vec<Vec<usize>>) -> Self {
        let max_component = per_color.iter().flatten().copied().max().unwrap_or(0);
        ComponentReport {
            n,
            r,
            min_degree,
            per_color,
            max_component,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Minimum degree and per-color components of an explicit graph, by
/// disjoint-set union over each color's edges.
pub fn analyze(g: &EdgeColoredGraph) -> ComponentReport {
    let n = g.n;
    let mut per_color = Vec::with_capacity(g.num_colors);
    for c in 0..g.num_colors {
        let mut dsu = DisjointSet::new(n);
        let mut touched = vec![false; n];
        for e in g.edges.iter().filter(|e| e.color == c) {
            dsu.union(e.u, e.v);
            touched[e.u] = true;
            touched[e.v] = true;
        }
        let mut order = vec![0usize; n];
        for v in (0..n).filter(|&v| touched[v]) {
            let root = dsu.find(v);
            order[root] += 1;
        }
        let mut comps: Vec<usize> = order.into_iter().filter(|&o| o > 0).collect();
        comps.sort_unstable_by(|a, b| b.cmp(a));
        per_color.push(comps);
    }
    let min_degree = g.degrees().into_iter().min().unwrap_or(0);
    ComponentReport::new(n, g.num_colors, min_degree, per_color)
}

/// A simple uncolored graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn complete(n: usize) -> Self {
        Graph {
            n,
            edges: (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
        }
    }
}

/// Largest monochromatic component of one coloring, given as one color per edge.
fn largest_component(g: &Graph, colors: &[usize], r: usize, dsu: &mut DisjointSet, order: &mut [usize]) -> usize {
    let n = g.n;
    *dsu = DisjointSet::new(n * r);
    order.iter_mut().for_each(|o| *o = 0);
    let mut touched = vec![false; n * r];
    for (&(u, v), &c) in g.edges.iter().zip(colors) {
        dsu.union(c * n + u, c * n + v);
        touched[c * n + u] = true;
        touched[c * n + v] = true;
    }
    let mut best = 0;
    for x in (0..n * r).filter(|&x| touched[x]) {
        let root = dsu.find(x);
        order[root] += 1;
        best = best.max(order[root]);
    }
    best
}

/// `mc_r(G)` by exhaustive enumeration: the minimum, over all r-colorings of
/// the edges, of the largest monochromatic component. The first edge's color
/// is fixed (colors are interchangeable). Returns 0 for an edgeless graph.
pub fn mc_oracle(g: &Graph, r: usize, cap: u64) -> Result<usize> {
    if r == 0 {
        return Err(Error::InvalidInput("at least one color is needed".into()));
    }
    let m = g.edges.len();
    if m == 0 {
        return Ok(0);
    }
    let required = num_bigint::BigUint::from(r).pow(m as u32);
    if required > num_bigint::BigUint::from(cap) {
        return Err(Error::TooLarge {
            required: required.to_string(),
            cap,
        });
    }
    let free = (m - 1) as u32;
    let total = (r as u64).pow(free);
    // Split on the color of the second edge (when present) so each worker
    // enumerates one contiguous mixed-radix range.
    let chunks = r.min(total as usize).max(1) as u64;
    let chunk_len = total / chunks;
    let best = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let start = k * chunk_len;
            let end = if k + 1 == chunks { total } else { start + chunk_len };
            let mut colors = vec![0usize; m];
            let mut dsu = DisjointSet::new(g.n * r);
            let mut order = vec![0usize; g.n * r];
            let mut best = usize::MAX;
            for idx in start..end {
                let mut rest = idx;
                for slot in colors[1..].iter_mut().rev() {
                    *slot = (rest % r as u64) as usize;
                    rest /= r as u64;
                }
                best = best.min(largest_component(g, &colors, r, &mut dsu, &mut order));
            }
            best
        })
        .min()
        .unwrap();
    Ok(best)
}

/// Upper bound from blowing up a resolvable design with at most `r` classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignBound {
    pub k: usize,
    pub t: usize,
    pub v: usize,
    pub num_colors: usize,
    /// `n / ((t+1)k - t)`.
    #[serde(with = "rational::serde_str")]
    pub upper: Rational,
    /// Whether `v` divides `n`, so the bound is realized at this `n`.
    pub realized: bool,
}

/// Known bounds on `mc_r(K_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub r: usize,
    pub n: usize,
    /// `n / (r-1)`, valid for every `r`.
    #[serde(with = "rational::serde_str")]
    pub basic_lower: Rational,
    /// An affine plane of order `r-1` exists, so the lower bound is the answer
    /// whenever `(r-1)^2 | n`.
    pub plane_of_order_r_minus_1: bool,
    /// Largest `q <= r-1` with an affine plane of order `q`.
    pub q: usize,
    pub improved_applicable: bool,
    /// `n / (r - 1 - 1/(r-1))`.
    #[serde(with = "option_rational")]
    pub improved_lower: Option<Rational>,
    /// `⌈n / q⌉`.
    pub plane_upper: Option<u64>,
    /// Best upper bound from the supplied resolvable designs, if any.
    pub design_upper: Option<DesignBound>,
    /// Best lower bound: the improved bound when a plane of order r-1 exists, else `n / (r-1)`.
    #[serde(with = "rational::serde_str")]
    pub lower: Rational,
    /// Best upper bound: `⌈n / q⌉`, improved by any design bound realized at `n`.
    #[serde(with = "rational::serde_str")]
    pub upper: Rational,
}

mod option_rational {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_str(&rational::to_string(x)),
            None => s.serialize_none(),
        }
    }
}

/// Bounds on `mc_r(K_n)`. Plane orders are decided by the prime-power test,
/// independently of the construction cap. `designs` lists resolvable design
/// parameters that may be assumed to exist.
pub fn known_bounds(r: usize, n: usize, designs: &[RbibdParams]) -> Result<BoundsReport> {
    if r < 3 {
        return Err(Error::PreconditionViolated(format!("r < 3 (r = {r})")));
    }
    let q = (2..r).rev().find(|&q| is_prime_power(q as u64)).unwrap_or(1);
    if n < q * q {
        return Err(Error::PreconditionViolated(format!("n < q^2: {n} < {}", q * q)));
    }
    let plane = is_prime_power(r as u64 - 1);
    let n_r = rational::int(n as i64);
    let rm1 = rational::int(r as i64 - 1);
    let improved_lower = (!plane).then(|| &n_r / (&rm1 - rm1.recip()));
    let plane_upper = (!plane).then(|| n.div_ceil(q) as u64);
    let design_upper = designs
        .iter()
        .filter(|d| d.num_colors <= r)
        .map(|d| DesignBound {
            k: d.k,
            t: d.t,
            v: d.v,
            num_colors: d.num_colors,
            upper: &n_r * &d.component_bound_fraction,
            realized: n.is_multiple_of(d.v),
        })
        .min_by(|a, b| a.upper.cmp(&b.upper).then(b.realized.cmp(&a.realized)));
    let basic_lower = &n_r / &rm1;
    let lower = improved_lower.clone().unwrap_or_else(|| basic_lower.clone());
    let mut upper = rational::int(n.div_ceil(q) as i64);
    if let Some(d) = design_upper.as_ref().filter(|d| d.realized) {
        upper = upper.min(d.upper.clone());
    }
    Ok(BoundsReport {
        r,
        n,
        basic_lower,
        plane_of_order_r_minus_1: plane,
        q,
        improved_applicable: !plane,
        improved_lower,
        plane_upper,
        design_upper,
        lower,
        upper,
    })
}

/// [`known_bounds`] assuming only the shipped Kirkman system.
pub fn known_bounds_default(r: usize, n: usize) -> Result<BoundsReport> {
    known_bounds(r, n, &[kirkman_15().params()])
}

/// Colors the design's blocks by parallel class and blows the result up
/// uniformly to `n` vertices: a coloring of `K_n` with `(t+1)k+1` colors
/// whose monochromatic components have order at most `n / ((t+1)k - t)`.
pub fn design_coloring(design: &RbibdDesign, n: usize) -> Result<ColoredGraph> {
    if n == 0 || !n.is_multiple_of(design.v) {
        return Err(Error::NotDivisible {
            n: n as u64,
            divisor: design.v as u64,
        });
    }
    let report = design.verify();
    if !report.all_pass() {
        return Err(Error::NotResolvable(report.summary()));
    }
    let colors = design.class_labels();
    let host = Hypergraph::with_colors(design.v, design.blocks.clone(), colors)?;
    let g = uniform_blowup(&host, n)?;

    let covered = (0..design.v).all(|i| (0..design.v).all(|j| g.host_pair_color(i, j).is_some()));
    if !covered {
        return Err(Error::InvariantViolation(
            "blow-up of the design is not complete".into(),
        ));
    }
    if n <= 200 && !g.materialize().is_complete() {
        return Err(Error::InvariantViolation("materialized blow-up is not complete".into()));
    }
    let bound = rational::int(n as i64) * &design.params().component_bound_fraction;
    let max = g.quotient_report().max_component;
    if rational::int(max as i64) > bound {
        return Err(Error::InvariantViolation(format!(
            "largest component {max} exceeds {}",
            rational::to_string(&bound)
        )));
    }
    Ok(g)
}

/// `n / (r-1)` rounded up, as an integer.
pub fn basic_lower_ceil(r: usize, n: usize) -> usize {
    (rational::int(n as i64) / rational::int(r as i64 - 1))
        .ceil()
        .to_integer()
        .to_usize()
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::complete_plane_coloring;
    use crate::designs::{rbibd_coloring_params, AffinePlane};
    use crate::rational::{frac, int};

    #[test]
    fn analyze_monochromatic_clique() {
        let g = EdgeColoredGraph::monochromatic_complete(5);
        let report = analyze(&g);
        assert_eq!(report.per_color, vec![vec![5]]);
        assert_eq!((report.min_degree, report.max_component), (4, 5));
    }

    #[test]
    fn analyze_ignores_isolated_vertices() {
        let edges = vec![
            ColoredEdge { color: 0, u: 0, v: 1 },
            ColoredEdge { color: 1, u: 1, v: 2 },
        ];
        let g = EdgeColoredGraph::new(4, 2, edges).unwrap();
        let report = analyze(&g);
        assert_eq!(report.per_color, vec![vec![2], vec![2]]);
        assert_eq!(report.min_degree, 0);
    }

    #[test]
    fn plane_coloring_components() {
        let g = complete_plane_coloring(3, 8).unwrap();
        let report = analyze(&g.materialize());
        assert!(report.per_color.iter().all(|c| c == &vec![4, 4]));
    }

    #[test]
    fn oracle_small_cases() {
        let cap = DEFAULT_ORACLE_CAP;
        assert_eq!(mc_oracle(&Graph::complete(4), 2, cap).unwrap(), 4);
        assert_eq!(mc_oracle(&Graph::complete(4), 3, cap).unwrap(), 2);
        assert_eq!(mc_oracle(&Graph::complete(3), 2, cap).unwrap(), 3);
        for n in 2..=5 {
            assert_eq!(mc_oracle(&Graph::complete(n), 2, cap).unwrap(), n);
        }
        assert_eq!(mc_oracle(&Graph::complete(1), 2, cap).unwrap(), 0);
        assert_eq!(mc_oracle(&Graph::complete(2), 1, cap).unwrap(), 2);
    }

    #[test]
    fn oracle_respects_cap() {
        let err = mc_oracle(&Graph::complete(6), 3, 1000).unwrap_err();
        assert_eq!(
            err,
            Error::TooLarge {
                required: "14348907".into(),
                cap: 1000
            }
        );
    }

    #[test]
    fn bounds_for_seven_colors() {
        let b = known_bounds_default(7, 35).unwrap();
        assert_eq!(b.q, 5);
        assert!(b.improved_applicable);
        assert_eq!(b.improved_lower, Some(int(6)));
        assert_eq!(b.plane_upper, Some(7));
        assert_eq!(b.basic_lower, frac(35, 6));
        assert_eq!((b.lower.clone(), b.upper.clone()), (int(6), int(7)));
        let d = b.design_upper.unwrap();
        assert_eq!((d.v, d.upper.clone(), d.realized), (15, int(7), false));
    }

    #[test]
    fn bounds_when_plane_exists() {
        let b = known_bounds_default(3, 12).unwrap();
        assert_eq!(b.basic_lower, int(6));
        assert!(!b.improved_applicable);
        assert_eq!(b.improved_lower, None);
        assert_eq!((b.lower.clone(), b.upper.clone()), (int(6), int(6)));
        assert!(b.design_upper.is_none());
    }

    #[test]
    fn bounds_for_twenty_three_colors() {
        let n = 231 * 19 * 21;
        let b = known_bounds(23, n, &[]).unwrap();
        assert_eq!(b.q, 19);
        assert_eq!(b.plane_upper, Some((n / 19) as u64));
        assert_eq!(b.improved_lower, Some(frac(n as i64 * 22, 22 * 22 - 1)));
        let b = known_bounds(23, n, &[rbibd_coloring_params(11, 1)]).unwrap();
        let d = b.design_upper.unwrap();
        assert_eq!(d.upper, frac(n as i64, 21));
        assert!(d.realized);
        assert_eq!(b.upper, frac(n as i64, 21));
    }

    #[test]
    fn bounds_preconditions() {
        assert!(known_bounds(2, 10, &[]).is_err());
        assert!(known_bounds(7, 20, &[]).is_err());
    }

    #[test]
    fn kirkman_coloring() {
        let d = kirkman_15();
        let g = design_coloring(&d, 15).unwrap();
        let report = g.cross_check().unwrap();
        assert_eq!((report.r, report.max_component, report.min_degree), (7, 3, 14));
        let g = design_coloring(&d, 105).unwrap();
        let e = g.materialize();
        assert!(e.is_complete());
        assert_eq!(analyze(&e).max_component, 21);
        assert!(matches!(design_coloring(&d, 20), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn plane_as_design_coloring() {
        let d = AffinePlane::new(3).unwrap().to_design();
        let g = design_coloring(&d, 9).unwrap();
        let report = g.cross_check().unwrap();
        assert_eq!((report.r, report.max_component), (4, 3));
        assert!(g.materialize().is_complete());
    }

    #[test]
    fn uniform_design_blowups_are_complete() {
        for (d, n) in [(kirkman_15(), 45), (AffinePlane::new(4).unwrap().to_design(), 64)] {
            let g = design_coloring(&d, n).unwrap();
            let e = g.materialize();
            let mut adjacent = vec![false; n * n];
            for edge in e.edges() {
                adjacent[edge.u * n + edge.v] = true;
            }
            for u in 0..n {
                for v in u + 1..n {
                    assert!(adjacent[u * n + v]);
                }
            }
            assert_eq!(analyze(&e).min_degree, n - 1);
        }
    }

    #[test]
    fn text_round_trip() {
        let g = complete_plane_coloring(3, 8).unwrap().materialize();
        let text = g.to_text();
        assert!(text.starts_with("G 8 3\n"));
        let back = EdgeColoredGraph::parse_text(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
        assert!(EdgeColoredGraph::parse_text("G 3 1\n0 0 0\n").is_err());
        assert!(EdgeColoredGraph::parse_text("G 3 1\n1 0 1\n").is_err());
        assert!(EdgeColoredGraph::parse_text("G 3 1\n0 0 1\n0 1 0\n").is_err());
    }

    #[test]
    fn basic_ceiling() {
        assert_eq!(basic_lower_ceil(3, 7), 4);
        assert_eq!(basic_lower_ceil(4, 9), 3);
    }
}
