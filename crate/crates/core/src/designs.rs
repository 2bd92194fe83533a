//! Affine planes AG(2, q) and resolvable block designs.
//!
//! Coordinates: point `(x, y)` with `x, y` field-element indices has id
//! `y * q + x`. Rows are the horizontal lines `y = b` and columns the vertical
//! lines `x = c`, so the point in row `i`, column `j` (both 1-based) is
//! `(x, y) = (j - 1, i - 1)`.
//!
//! Parallel classes are ordered by slope: class `m` (for `m` in `0..q`) holds
//! the lines `y = m x + b`, with `b` ascending; class `q` holds the vertical
//! lines. Class 0 is therefore the rows and the last class the columns.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::{FieldSpec, FieldTables, DEFAULT_ORDER_CAP};
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub struct AffinePlane {
    order: usize,
    field: FieldSpec,
    tables: FieldTables,
    lines: Vec<Vec<usize>>,
    parallel_classes: Vec<Vec<usize>>,
}

impl AffinePlane {
    /// AG(2, q) with the default order cap.
    pub fn new(q: u64) -> Result<Self> {
        Self::with_cap(q, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(q: u64, cap: u64) -> Result<Self> {
        let field = FieldSpec::new(q)?;
        if q > cap {
            return Err(Error::UnsupportedOrder { order: q, cap });
        }
        let tables = field.tables();
        let q = q as usize;
        let mut lines = Vec::with_capacity(q * (q + 1));
        let mut parallel_classes = Vec::with_capacity(q + 1);
        for slope in 0..q {
            let mut class = Vec::with_capacity(q);
            for intercept in 0..q {
                let mut line: Vec<usize> = (0..q)
                    .map(|x| {
                        let y = tables.add(tables.mul(slope, x), intercept);
                        y * q + x
                    })
                    .collect();
                line.sort_unstable();
                class.push(lines.len());
                lines.push(line);
            }
            parallel_classes.push(class);
        }
        let mut vertical = Vec::with_capacity(q);
        for x in 0..q {
            vertical.push(lines.len());
            lines.push((0..q).map(|y| y * q + x).collect());
        }
        parallel_classes.push(vertical);
        Ok(AffinePlane {
            order: q,
            field,
            tables,
            lines,
            parallel_classes,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn tables(&self) -> &FieldTables {
        &self.tables
    }

    pub fn num_points(&self) -> usize {
        self.order * self.order
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    /// Line ids grouped by parallel class.
    pub fn parallel_classes(&self) -> &[Vec<usize>] {
        &self.parallel_classes
    }

    /// Class index of every line.
    pub fn line_classes(&self) -> Vec<usize> {
        let mut out = vec![0; self.lines.len()];
        for (c, class) in self.parallel_classes.iter().enumerate() {
            for &l in class {
                out[l] = c;
            }
        }
        out
    }

    /// `(x, y)` coordinates of a point.
    pub fn coords(&self, point: usize) -> (usize, usize) {
        (point % self.order, point / self.order)
    }

    pub fn point_at(&self, x: usize, y: usize) -> usize {
        y * self.order + x
    }

    /// Point in `row`, `col` (1-based).
    pub fn point_rc(&self, row: usize, col: usize) -> usize {
        debug_assert!((1..=self.order).contains(&row) && (1..=self.order).contains(&col));
        (row - 1) * self.order + (col - 1)
    }

    /// `(row, col)`, 1-based.
    pub fn row_col(&self, point: usize) -> (usize, usize) {
        (point / self.order + 1, point % self.order + 1)
    }

    pub fn rows_class(&self) -> usize {
        0
    }

    pub fn columns_class(&self) -> usize {
        self.order
    }

    /// The plane as a `(q^2, q, 1)` resolvable design (`t = 0`).
    pub fn to_design(&self) -> RbibdDesign {
        RbibdDesign {
            v: self.num_points(),
            k: self.order,
            t: 0,
            blocks: self.lines.clone(),
            parallel_classes: self.parallel_classes.clone(),
        }
    }

    pub fn verify(&self) -> VerificationReport {
        let labels = self.line_classes();
        verify_design(&self.lines, self.num_points(), self.order, Some(&labels))
    }
}

/// A resolvable `(v, k, 1)` design with `v = k^2 + t k (k - 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RbibdDesign {
    pub v: usize,
    pub k: usize,
    pub t: usize,
    pub blocks: Vec<Vec<usize>>,
    /// Block ids grouped by parallel class.
    pub parallel_classes: Vec<Vec<usize>>,
}

impl RbibdDesign {
    /// Builds a design from blocks grouped into parallel classes and checks
    /// every design axiom.
    pub fn from_classes(v: usize, classes: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let k = classes
            .first()
            .and_then(|c| c.first())
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidInput("design has no blocks".into()))?;
        if k < 2 {
            return Err(Error::InvalidInput("block size must be at least 2".into()));
        }
        let t = design_t(v, k)
            .ok_or_else(|| Error::InvalidInput(format!("v = {v} is not of the form k^2 + t k (k-1) for k = {k}")))?;
        let mut blocks = Vec::new();
        let mut parallel_classes = Vec::new();
        let mut labels = Vec::new();
        for (c, class) in classes.into_iter().enumerate() {
            let mut ids = Vec::new();
            for mut block in class {
                block.sort_unstable();
                ids.push(blocks.len());
                blocks.push(block);
                labels.push(c);
            }
            parallel_classes.push(ids);
        }
        let report = verify_design(&blocks, v, k, Some(&labels));
        if !report.all_pass() {
            if report.pair_coverage_exact && report.uniform && report.invalid_blocks.is_empty() {
                return Err(Error::NotResolvable(report.summary()));
            }
            return Err(Error::InvalidInput(report.summary()));
        }
        Ok(RbibdDesign {
            v,
            k,
            t,
            blocks,
            parallel_classes,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.parallel_classes.len()
    }

    pub fn class_labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.blocks.len()];
        for (c, class) in self.parallel_classes.iter().enumerate() {
            for &b in class {
                out[b] = c;
            }
        }
        out
    }

    pub fn verify(&self) -> VerificationReport {
        verify_design(&self.blocks, self.v, self.k, Some(&self.class_labels()))
    }

    pub fn params(&self) -> RbibdParams {
        rbibd_coloring_params(self.k, self.t)
    }

    /// Plain-text export: one block per line, blank line between classes.
    pub fn to_text(&self) -> String {
        let classes: Vec<Vec<&[usize]>> = self
            .parallel_classes
            .iter()
            .map(|c| c.iter().map(|&b| self.blocks[b].as_slice()).collect())
            .collect();
        write_design_text(&classes)
    }

    /// Parses the export format; `v` is taken as one more than the largest id.
    pub fn parse_text(text: &str) -> Result<Self> {
        let classes = parse_design_text(text)?;
        let v = classes.iter().flatten().flatten().max().map(|&m| m + 1).unwrap_or(0);
        Self::from_classes(v, classes)
    }
}

fn design_t(v: usize, k: usize) -> Option<usize> {
    let base = k * k;
    let step = k * (k - 1);
    (v >= base && (v - base).is_multiple_of(step)).then(|| (v - base) / step)
}

pub(crate) fn write_design_text(classes: &[Vec<&[usize]>]) -> String {
    let mut out = String::new();
    for (i, class) in classes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for block in class {
            let line: Vec<String> = block.iter().map(|p| p.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Blocks grouped by class, in file order.
pub fn parse_design_text(text: &str) -> Result<Vec<Vec<Vec<usize>>>> {
    let mut classes: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            if classes.last().is_some_and(|c| c.is_empty()) {
                return Err(Error::parse(i + 1, "empty parallel class"));
            }
            classes.push(vec![]);
            continue;
        }
        let block = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::parse(i + 1, format!("bad point id {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        classes.last_mut().unwrap().push(block);
    }
    if classes.last().is_some_and(|c| c.is_empty()) {
        classes.pop();
    }
    if classes.is_empty() {
        return Err(Error::parse(0, "no blocks"));
    }
    Ok(classes)
}

/// Result of checking the design axioms. Failures are data, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub v: usize,
    pub k: usize,
    pub num_blocks: usize,
    pub pair_coverage_exact: bool,
    pub uncovered_pairs: Vec<(usize, usize)>,
    /// Pairs covered more than once, with their multiplicity.
    pub overcovered_pairs: Vec<((usize, usize), usize)>,
    pub uniform: bool,
    pub nonuniform_blocks: Vec<usize>,
    /// Blocks with an out-of-range or repeated point.
    pub invalid_blocks: Vec<usize>,
    pub resolution: Option<ResolutionCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionCheck {
    pub num_classes: usize,
    pub expected_classes: Option<usize>,
    /// Classes that are not a partition of the point set.
    pub bad_classes: Vec<usize>,
    pub resolvable: bool,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.pair_coverage_exact
            && self.uniform
            && self.invalid_blocks.is_empty()
            && self.resolution.as_ref().is_none_or(|r| r.resolvable)
    }

    pub fn summary(&self) -> String {
        let mut parts = vec![];
        if !self.invalid_blocks.is_empty() {
            parts.push(format!("invalid blocks {:?}", self.invalid_blocks));
        }
        if !self.uniform {
            parts.push(format!("non-uniform blocks {:?}", self.nonuniform_blocks));
        }
        if !self.uncovered_pairs.is_empty() {
            parts.push(format!("{} uncovered pairs", self.uncovered_pairs.len()));
        }
        if !self.overcovered_pairs.is_empty() {
            parts.push(format!("{} pairs covered twice or more", self.overcovered_pairs.len()));
        }
        if let Some(r) = &self.resolution {
            if !r.resolvable {
                parts.push(format!(
                    "{} classes (expected {:?}), non-partition classes {:?}",
                    r.num_classes, r.expected_classes, r.bad_classes
                ));
            }
        }
        if parts.is_empty() {
            "all checks pass".into()
        } else {
            parts.join("; ")
        }
    }
}

/// Checks pair coverage, uniformity and (when class labels are given) that
/// each labelled class is a perfect matching of the points and that there are
/// `(v-1)/(k-1)` classes.
pub fn verify_design(blocks: &[Vec<usize>], v: usize, k: usize, class_labels: Option<&[usize]>) -> VerificationReport {
    let mut counts = vec![0usize; v * v];
    let mut invalid_blocks = vec![];
    let mut nonuniform_blocks = vec![];
    for (b, block) in blocks.iter().enumerate() {
        let mut sorted = block.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != block.len() || sorted.iter().any(|&p| p >= v) {
            invalid_blocks.push(b);
            continue;
        }
        if block.len() != k {
            nonuniform_blocks.push(b);
        }
        for (i, &x) in sorted.iter().enumerate() {
            for &y in &sorted[i + 1..] {
                counts[x * v + y] += 1;
            }
        }
    }
    let mut uncovered_pairs = vec![];
    let mut overcovered_pairs = vec![];
    for x in 0..v {
        for y in x + 1..v {
            match counts[x * v + y] {
                0 => uncovered_pairs.push((x, y)),
                1 => {}
                m => overcovered_pairs.push(((x, y), m)),
            }
        }
    }

    let resolution = class_labels.map(|labels| {
        let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (b, &c) in labels.iter().enumerate().take(blocks.len()) {
            by_class.entry(c).or_default().push(b);
        }
        let labels_complete = labels.len() == blocks.len();
        let mut bad_classes = vec![];
        for (&c, members) in &by_class {
            let mut seen = vec![0usize; v];
            for &b in members {
                for &p in &blocks[b] {
                    if p < v {
                        seen[p] += 1;
                    }
                }
            }
            if seen.iter().any(|&s| s != 1) {
                bad_classes.push(c);
            }
        }
        let expected_classes = (k >= 2 && v >= 1 && (v - 1).is_multiple_of(k - 1)).then(|| (v - 1) / (k - 1));
        let resolvable = labels_complete && bad_classes.is_empty() && expected_classes == Some(by_class.len());
        ResolutionCheck {
            num_classes: by_class.len(),
            expected_classes,
            bad_classes,
            resolvable,
        }
    });

    VerificationReport {
        v,
        k,
        num_blocks: blocks.len(),
        pair_coverage_exact: uncovered_pairs.is_empty() && overcovered_pairs.is_empty(),
        uncovered_pairs,
        overcovered_pairs,
        uniform: nonuniform_blocks.is_empty(),
        nonuniform_blocks,
        invalid_blocks,
        resolution,
    }
}

/// The points of PG(3, 2) minus one, with the lines of a packing into seven
/// spreads: a resolvable Steiner triple system on 15 points.
const KIRKMAN_15: [[[usize; 3]; 5]; 7] = [
    [[0, 1, 2], [3, 7, 11], [4, 9, 14], [5, 10, 12], [6, 8, 13]],
    [[0, 3, 4], [1, 7, 9], [2, 12, 13], [5, 8, 14], [6, 10, 11]],
    [[0, 5, 6], [1, 8, 10], [2, 11, 14], [3, 9, 13], [4, 7, 12]],
    [[0, 7, 8], [1, 11, 13], [2, 4, 5], [3, 10, 14], [6, 9, 12]],
    [[0, 9, 10], [1, 12, 14], [2, 3, 6], [4, 8, 11], [5, 7, 13]],
    [[0, 11, 12], [1, 3, 5], [2, 8, 9], [4, 10, 13], [6, 7, 14]],
    [[0, 13, 14], [1, 4, 6], [2, 7, 10], [3, 8, 12], [5, 9, 11]],
];

/// A `(15, 3, 1)`-RBIBD (Kirkman's schoolgirl problem), re-verified on
/// construction.
pub fn kirkman_15() -> RbibdDesign {
    let classes = KIRKMAN_15
        .iter()
        .map(|class| class.iter().map(|b| b.to_vec()).collect())
        .collect();
    RbibdDesign::from_classes(15, classes).expect("shipped Kirkman system verifies")
}

/// Parameters of the coloring of `K_n` obtained by blowing up a
/// `(k^2 + t k (k-1), k, 1)`-RBIBD.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RbibdParams {
    pub k: usize,
    pub t: usize,
    pub v: usize,
    pub num_colors: usize,
    /// Largest monochromatic component as a fraction of `n`.
    #[serde(with = "rational::serde_str")]
    pub component_bound_fraction: Rational,
}

pub fn rbibd_coloring_params(k: usize, t: usize) -> RbibdParams {
    assert!(k >= 2, "block size must be at least 2");
    let v = k * k + t * k * (k - 1);
    RbibdParams {
        k,
        t,
        v,
        num_colors: (t + 1) * k + 1,
        component_bound_fraction: rational::frac(1, ((t + 1) * k - t) as i64),
    }
}
