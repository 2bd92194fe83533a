//! Hypergraphs with an optional proper edge coloring.
//!
//! Text format: a header `H <n> <m>` followed by `m` lines
//! `<color> <v1> <v2> ...`; an uncolored hypergraph writes `-` for the color.
//! Vertex labels are not part of the format.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::designs::AffinePlane;
use crate::error::{Error, Result};
use crate::galois::DEFAULT_ORDER_CAP;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    num_vertices: usize,
    labels: Option<Vec<(usize, usize)>>,
    edges: Vec<Vec<usize>>,
    colors: Option<Vec<usize>>,
}

/// Summary invariants of a hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Properties {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub rank: usize,
    #[serde(with = "rational::serde_str")]
    pub proportional_rank: Rational,
    pub delta_star: usize,
    pub num_color_classes: Option<usize>,
}

/// Bounds on the edge chromatic number.
///
/// The upper bound comes from the stored proper coloring; the lower bound is
/// the maximum vertex degree, witnessed by a vertex whose incident edges
/// pairwise meet (in that vertex).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChromaticCertificate {
    pub upper: Option<usize>,
    pub lower: usize,
    pub witness_vertex: Option<usize>,
    pub witness_edges: Vec<usize>,
}

impl ChromaticCertificate {
    /// The edge chromatic number when both bounds meet.
    pub fn exact(&self) -> Option<usize> {
        self.upper.filter(|&u| u == self.lower)
    }
}

impl Hypergraph {
    /// Uncolored hypergraph. Edges are sorted; empty edges and repeated or
    /// out-of-range vertices are rejected.
    pub fn new(num_vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(i, e)| normalize_edge(i, e, num_vertices))
            .collect::<Result<Vec<_>>>()?;
        Ok(Hypergraph {
            num_vertices,
            labels: None,
            edges,
            colors: None,
        })
    }

    /// Hypergraph with one color per edge; same-colored edges must be disjoint.
    pub fn with_colors(num_vertices: usize, edges: Vec<Vec<usize>>, colors: Vec<usize>) -> Result<Self> {
        let mut h = Self::new(num_vertices, edges)?;
        if colors.len() != h.edges.len() {
            return Err(Error::InvalidInput(format!(
                "{} colors for {} edges",
                colors.len(),
                h.edges.len()
            )));
        }
        let max_color = colors.iter().copied().max().unwrap_or(0);
        let mut owner = vec![usize::MAX; (max_color + 1) * num_vertices];
        for (i, (e, &c)) in h.edges.iter().zip(&colors).enumerate() {
            for &v in e {
                let slot = &mut owner[c * num_vertices + v];
                if *slot != usize::MAX {
                    return Err(Error::InvalidInput(format!(
                        "edges {} and {i} share vertex {v} and color {c}",
                        *slot
                    )));
                }
                *slot = i;
            }
        }
        h.colors = Some(colors);
        Ok(h)
    }

    pub fn with_labels(mut self, labels: Vec<(usize, usize)>) -> Result<Self> {
        if labels.len() != self.num_vertices {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.num_vertices
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn colors(&self) -> Option<&[usize]> {
        self.colors.as_deref()
    }

    pub fn labels(&self) -> Option<&[(usize, usize)]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<(usize, usize)> {
        self.labels.as_ref().map(|l| l[v])
    }

    /// Vertex carrying the 1-based `(row, col)` label.
    pub fn vertex_at(&self, row: usize, col: usize) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|&l| l == (row, col))
    }

    pub fn is_colored(&self) -> bool {
        self.colors.is_some()
    }

    pub fn num_colors(&self) -> usize {
        self.colors
            .as_ref()
            .map(|c| {
                let mut seen: Vec<usize> = c.clone();
                seen.sort_unstable();
                seen.dedup();
                seen.len()
            })
            .unwrap_or(0)
    }

    /// Largest color id plus one (0 when uncolored or edgeless).
    pub fn color_bound(&self) -> usize {
        self.colors.as_ref().and_then(|c| c.iter().max()).map_or(0, |&m| m + 1)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.binary_search(&v).is_ok()).count()
    }

    pub fn rank(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `N[v]`: every vertex sharing an edge with `v`, plus `v` itself.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.num_vertices];
        seen[v] = true;
        for e in self.edges.iter().filter(|e| e.binary_search(&v).is_ok()) {
            for &u in e {
                seen[u] = true;
            }
        }
        (0..self.num_vertices).filter(|&u| seen[u]).collect()
    }

    pub fn delta_star(&self) -> usize {
        (0..self.num_vertices)
            .map(|v| self.closed_neighborhood(v).len())
            .min()
            .unwrap_or(0)
    }

    pub fn properties(&self) -> Properties {
        let rank = self.rank();
        let proportional_rank = if self.num_vertices == 0 {
            Rational::zero()
        } else {
            rational::frac(rank as i64, self.num_vertices as i64)
        };
        Properties {
            num_vertices: self.num_vertices,
            num_edges: self.edges.len(),
            rank,
            proportional_rank,
            delta_star: self.delta_star(),
            num_color_classes: self.colors.as_ref().map(|_| self.num_colors()),
        }
    }

    pub fn chromatic_certificate(&self) -> ChromaticCertificate {
        let witness = (0..self.num_vertices).max_by_key(|&v| (self.degree(v), std::cmp::Reverse(v)));
        let (lower, witness_vertex, witness_edges) = match witness {
            Some(v) if self.degree(v) > 0 => {
                let edges: Vec<usize> = (0..self.edges.len())
                    .filter(|&i| self.edges[i].binary_search(&v).is_ok())
                    .collect();
                (edges.len(), Some(v), edges)
            }
            _ => (0, None, vec![]),
        };
        ChromaticCertificate {
            upper: self.colors.as_ref().map(|_| self.num_colors()),
            lower,
            witness_vertex,
            witness_edges,
        }
    }

    pub fn edge_weight(&self, edge: usize, w: &WeightAssignment) -> Rational {
        rational::sum(self.edges[edge].iter().map(|&v| &w.weights[v]))
    }

    /// Indices of the edges of maximum weight.
    pub fn top_level_edges(&self, w: &WeightAssignment) -> Vec<usize> {
        let weights: Vec<Rational> = (0..self.edges.len()).map(|e| self.edge_weight(e, w)).collect();
        let Some(max) = weights.iter().max() else {
            return vec![];
        };
        (0..weights.len()).filter(|&e| &weights[e] == max).collect()
    }

    /// The subhypergraph on all vertices keeping only edges of maximum weight.
    pub fn top_level(&self, w: &WeightAssignment) -> Result<Hypergraph> {
        if w.len() != self.num_vertices {
            return Err(Error::InvalidInput(format!(
                "weight assignment has {} entries for {} vertices",
                w.len(),
                self.num_vertices
            )));
        }
        Ok(self.edge_subgraph(&self.top_level_edges(w)))
    }

    pub fn edge_subgraph(&self, keep: &[usize]) -> Hypergraph {
        Hypergraph {
            num_vertices: self.num_vertices,
            labels: self.labels.clone(),
            edges: keep.iter().map(|&i| self.edges[i].clone()).collect(),
            colors: self.colors.as_ref().map(|c| keep.iter().map(|&i| c[i]).collect()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("H {} {}\n", self.num_vertices, self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            match &self.colors {
                Some(c) => write!(out, "{}", c[i]).unwrap(),
                None => out.push('-'),
            }
            for v in e {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let (n, m) = match head.as_slice() {
            ["H", n, m] => (
                n.parse::<usize>().map_err(|_| Error::parse(1, "bad vertex count"))?,
                m.parse::<usize>().map_err(|_| Error::parse(1, "bad edge count"))?,
            ),
            _ => return Err(Error::parse(1, "expected `H <n> <m>`")),
        };
        let mut edges = Vec::with_capacity(m);
        let mut colors = Vec::with_capacity(m);
        let mut uncolored = 0;
        for (i, line) in lines {
            let mut toks = line.split_whitespace();
            let color = toks.next().unwrap();
            if color == "-" {
                uncolored += 1;
            } else {
                colors.push(
                    color
                        .parse::<usize>()
                        .map_err(|_| Error::parse(i + 1, format!("bad color {color:?}")))?,
                );
            }
            let edge = toks
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse(i + 1, format!("bad vertex {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            edges.push(edge);
        }
        if edges.len() != m {
            return Err(Error::parse(
                0,
                format!("header promises {m} edges, found {}", edges.len()),
            ));
        }
        match (uncolored, colors.len()) {
            (0, _) => Self::with_colors(n, edges, colors),
            (_, 0) => Self::new(n, edges),
            _ => Err(Error::parse(0, "mixed colored and uncolored edges")),
        }
    }

    /// Hypergraph left after removing one parallel class of `plane` (if any)
    /// and deleting the `deleted` points from every remaining line. Empty
    /// edges are dropped. Remaining points are renumbered in increasing
    /// order and labelled with their `(row, col)`; colors are the class ids.
    pub fn from_plane(plane: &AffinePlane, drop_class: Option<usize>, deleted: &[usize]) -> Hypergraph {
        let n_points = plane.num_points();
        let mut gone = vec![false; n_points];
        for &p in deleted {
            gone[p] = true;
        }
        let mut new_id = vec![usize::MAX; n_points];
        let mut labels = vec![];
        for p in 0..n_points {
            if !gone[p] {
                new_id[p] = labels.len();
                labels.push(plane.row_col(p));
            }
        }
        let mut edges = vec![];
        let mut colors = vec![];
        for (c, class) in plane.parallel_classes().iter().enumerate() {
            if Some(c) == drop_class {
                continue;
            }
            for &l in class {
                let e: Vec<usize> = plane.lines()[l]
                    .iter()
                    .filter(|&&p| !gone[p])
                    .map(|&p| new_id[p])
                    .collect();
                if !e.is_empty() {
                    edges.push(e);
                    colors.push(c);
                }
            }
        }
        Hypergraph {
            num_vertices: labels.len(),
            labels: Some(labels),
            edges,
            colors: Some(colors),
        }
    }
}

fn normalize_edge(index: usize, mut e: Vec<usize>, n: usize) -> Result<Vec<usize>> {
    if e.is_empty() {
        return Err(Error::InvalidInput(format!("edge {index} is empty")));
    }
    e.sort_unstable();
    if e.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput(format!("edge {index} repeats a vertex")));
    }
    if let Some(&v) = e.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidInput(format!("edge {index} has vertex {v} >= {n}")));
    }
    Ok(e)
}

/// The deletion set `S`: row `r` minus its last point, plus the last point
/// of row `r - 1`.
pub fn hr_deletion_set(plane: &AffinePlane) -> Vec<usize> {
    let r = plane.order();
    let mut s: Vec<usize> = (1..r).map(|i| plane.point_rc(r, i)).collect();
    s.push(plane.point_rc(r - 1, r));
    s.sort_unstable();
    s
}

/// `H_r`: AG(2, r) without its columns and without the points of
/// [`hr_deletion_set`]. Colors are the surviving class ids `0..r` (rows are 0).
pub fn build_hr(r: usize) -> Result<Hypergraph> {
    build_hr_with_cap(r, DEFAULT_ORDER_CAP)
}

pub fn build_hr_with_cap(r: usize, cap: u64) -> Result<Hypergraph> {
    if r < 3 {
        return Err(Error::PreconditionViolated(format!("r >= 3 (got r = {r})")));
    }
    let plane = AffinePlane::with_cap(r as u64, cap)?;
    let s = hr_deletion_set(&plane);
    Ok(Hypergraph::from_plane(&plane, Some(plane.columns_class()), &s))
}

/// AG(2, 3) without its columns and without the three points of row 3.
pub fn build_h3_prime() -> Hypergraph {
    let plane = AffinePlane::new(3).expect("AG(2,3) exists");
    let row3: Vec<usize> = (1..=3).map(|j| plane.point_rc(3, j)).collect();
    Hypergraph::from_plane(&plane, Some(plane.columns_class()), &row3)
}

/// Nonnegative vertex weights summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightAssignment {
    #[serde(with = "rational::serde_vec")]
    weights: Vec<Rational>,
}

impl WeightAssignment {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidInput("negative weight".into()));
        }
        let total = rational::sum(&weights);
        if !rational::is_one(&total) {
            return Err(Error::InvalidInput(format!(
                "weights sum to {}, not 1",
                rational::to_string(&total)
            )));
        }
        Ok(WeightAssignment { weights })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform weights need at least one vertex");
        WeightAssignment {
            weights: vec![rational::frac(1, n as i64); n],
        }
    }

    /// All weight on vertex `x`.
    pub fn concentrated(n: usize, x: usize) -> Self {
        let mut weights = vec![Rational::zero(); n];
        weights[x] = rational::int(1);
        WeightAssignment { weights }
    }

    /// Whitespace-separated `num/den` values.
    pub fn parse_text(text: &str) -> Result<Self> {
        Self::new(text.split_whitespace().map(rational::parse).collect::<Result<_>>()?)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.weights.iter().all(Signed::is_positive)
    }
}
