//! Fractional matchings, fractional vertex covers and perturbations.
//!
//! Everything is solved exactly. A hypergraph has a perfect fractional
//! matching (`A m = 1`, `m >= 0` for the vertex/edge incidence matrix `A`)
//! exactly when it has no perturbation; when the matching system is
//! infeasible, phase one of the simplex yields a Farkas witness `w`
//! (`A^T w <= 0`, `1·w > 0`) and `p = w - (1·w / n) 1` is a perturbation.

mod simplex;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, WeightAssignment};
use crate::rational::{self, Rational};
use simplex::{Outcome, Problem};

/// Vertex/edge incidence structure of a hypergraph (rows are vertices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceSystem {
    num_vertices: usize,
    columns: Vec<Vec<usize>>,
}

impl IncidenceSystem {
    pub fn new(h: &Hypergraph) -> Self {
        IncidenceSystem {
            num_vertices: h.num_vertices(),
            columns: h.edges().to_vec(),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.num_vertices
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn entry(&self, v: usize, e: usize) -> bool {
        self.columns[e].binary_search(&v).is_ok()
    }

    /// Dense `n x e` 0/1 matrix.
    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        (0..self.num_vertices)
            .map(|v| {
                (0..self.columns.len())
                    .map(|e| {
                        if self.entry(v, e) {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `A x` for an edge vector `x`.
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.num_vertices];
        for (col, xe) in self.columns.iter().zip(x) {
            for &v in col {
                out[v] += xe;
            }
        }
        out
    }

    /// `A^T y` for a vertex vector `y`.
    pub fn apply_transpose(&self, y: &[Rational]) -> Vec<Rational> {
        self.columns
            .iter()
            .map(|col| rational::sum(col.iter().map(|&v| &y[v])))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Matching,
    Cover,
    Perturbation,
    Farkas,
}

/// JSON-serializable proof object; rationals are `"num/den"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    #[serde(with = "rational::serde_vec")]
    pub values: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub objective: Rational,
}

impl Certificate {
    /// Re-validates the certificate against `h`.
    pub fn check(&self, h: &Hypergraph) -> Result<()> {
        let claimed = match self.kind {
            CertificateKind::Matching => {
                let m = FractionalMatching {
                    values: self.values.clone(),
                };
                m.validate(h)?;
                m.total()
            }
            CertificateKind::Cover => {
                let t = FractionalCover {
                    values: self.values.clone(),
                };
                t.validate(h)?;
                t.total()
            }
            CertificateKind::Perturbation => {
                let p = Perturbation {
                    values: self.values.clone(),
                };
                p.validate(h)?;
                Rational::zero()
            }
            CertificateKind::Farkas => {
                let w = FarkasWitness {
                    values: self.values.clone(),
                };
                w.validate(h)?;
                rational::sum(&w.values)
            }
        };
        if claimed != self.objective {
            return Err(Error::InvalidInput(format!(
                "objective {} does not match certificate value {}",
                rational::to_string(&self.objective),
                rational::to_string(&claimed)
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::InvalidInput(format!(
            "{what} has {got} entries, expected {want}"
        )));
    }
    Ok(())
}

/// Edge weights `m >= 0` with `sum_{e ∋ v} m(e) <= 1` at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalMatching {
    pub values: Vec<Rational>,
}

impl FractionalMatching {
    pub fn total(&self) -> Rational {
        rational::sum(&self.values)
    }

    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        check_len("matching", self.values.len(), h.num_edges())?;
        if let Some(e) = self.values.iter().position(Signed::is_negative) {
            return Err(Error::InvalidInput(format!("matching is negative on edge {e}")));
        }
        let load = IncidenceSystem::new(h).apply(&self.values);
        if let Some(v) = load.iter().position(|x| *x > Rational::one()) {
            return Err(Error::InvalidInput(format!("matching overloads vertex {v}")));
        }
        Ok(())
    }

    /// Valid and tight at every vertex.
    pub fn is_perfect(&self, h: &Hypergraph) -> bool {
        self.validate(h).is_ok() && IncidenceSystem::new(h).apply(&self.values).iter().all(One::is_one)
    }

    pub fn certificate(&self) -> Certificate {
        Certificate {
            kind: CertificateKind::Matching,
            values: self.values.clone(),
            objective: self.total(),
        }
    }
}

/// Vertex weights `t >= 0` with `sum_{v ∈ e} t(v) >= 1` on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalCover {
    pub values: Vec<Rational>,
}

impl FractionalCover {
    pub fn total(&self) -> Rational {
        rational::sum(&self.values)
    }

    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        check_len("cover", self.values.len(), h.num_vertices())?;
        if let Some(v) = self.values.iter().position(Signed::is_negative) {
            return Err(Error::InvalidInput(format!("cover is negative at vertex {v}")));
        }
        let sums = IncidenceSystem::new(h).apply_transpose(&self.values);
        if let Some(e) = sums.iter().position(|x| *x < Rational::one()) {
            return Err(Error::InvalidInput(format!("cover misses edge {e}")));
        }
        Ok(())
    }

    pub fn certificate(&self) -> Certificate {
        Certificate {
            kind: CertificateKind::Cover,
            values: self.values.clone(),
            objective: self.total(),
        }
    }
}

/// `w` with `A^T w <= 0` and `1·w > 0`: proof that `A m = 1, m >= 0` has no
/// solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasWitness {
    pub values: Vec<Rational>,
}

impl FarkasWitness {
    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        check_len("witness", self.values.len(), h.num_vertices())?;
        let sums = IncidenceSystem::new(h).apply_transpose(&self.values);
        if let Some(e) = sums.iter().position(Signed::is_positive) {
            return Err(Error::InvalidInput(format!("witness is positive on edge {e}")));
        }
        if !rational::sum(&self.values).is_positive() {
            return Err(Error::InvalidInput("witness has nonpositive total".into()));
        }
        Ok(())
    }

    pub fn certificate(&self) -> Certificate {
        Certificate {
            kind: CertificateKind::Farkas,
            values: self.values.clone(),
            objective: rational::sum(&self.values),
        }
    }
}

/// Zero-sum vertex vector that is strictly negative on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub values: Vec<Rational>,
}

impl Perturbation {
    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        check_len("perturbation", self.values.len(), h.num_vertices())?;
        if !rational::sum(&self.values).is_zero() {
            return Err(Error::InvalidInput("perturbation does not sum to zero".into()));
        }
        let sums = IncidenceSystem::new(h).apply_transpose(&self.values);
        if let Some(e) = sums.iter().position(|x| !x.is_negative()) {
            return Err(Error::InvalidInput(format!("perturbation is not negative on edge {e}")));
        }
        Ok(())
    }

    /// From a Farkas witness: `p = w - (1·w / n) 1`.
    pub fn from_witness(w: &FarkasWitness) -> Self {
        let n = w.values.len();
        let shift = rational::sum(&w.values) / rational::int(n as i64);
        Perturbation {
            values: w.values.iter().map(|x| x - &shift).collect(),
        }
    }

    /// The converse construction: `w = p + (α / n) 1` where `α` is the
    /// smallest `|p(e)|` over the edges of `h`.
    pub fn to_witness(&self, h: &Hypergraph) -> Result<FarkasWitness> {
        self.validate(h)?;
        let sums = IncidenceSystem::new(h).apply_transpose(&self.values);
        let alpha = sums.iter().map(|x| x.abs()).min().ok_or(Error::NoEdges)?;
        let shift = alpha / rational::int(self.values.len() as i64);
        Ok(FarkasWitness {
            values: self.values.iter().map(|x| x + &shift).collect(),
        })
    }

    pub fn certificate(&self) -> Certificate {
        Certificate {
            kind: CertificateKind::Perturbation,
            values: self.values.clone(),
            objective: rational::sum(&self.values),
        }
    }
}

/// `ν*(H)` and an optimal fractional matching. An edgeless hypergraph has
/// value 0.
pub fn nu_star(h: &Hypergraph) -> Result<(Rational, FractionalMatching)> {
    let n = h.num_vertices();
    let e = h.num_edges();
    if e == 0 {
        return Ok((Rational::zero(), FractionalMatching { values: vec![] }));
    }
    // max 1·m  s.t.  A m + s = 1
    let inc = IncidenceSystem::new(h);
    let mut a = inc.matrix();
    for (v, row) in a.iter_mut().enumerate() {
        row.extend((0..n).map(|j| if j == v { Rational::one() } else { Rational::zero() }));
    }
    let c: Vec<Rational> = (0..e + n)
        .map(|j| if j < e { Rational::one() } else { Rational::zero() })
        .collect();
    let problem = Problem {
        a,
        b: vec![Rational::one(); n],
        c,
    };
    let Outcome::Optimal { x, value, duals } = simplex::solve(&problem) else {
        return Err(Error::InvariantViolation("matching LP is feasible and bounded".into()));
    };
    let matching = FractionalMatching {
        values: x[..e].to_vec(),
    };
    matching
        .validate(h)
        .map_err(|err| Error::InvariantViolation(format!("simplex matching: {err}")))?;
    if matching.total() != value {
        return Err(Error::InvariantViolation("matching total differs from LP value".into()));
    }
    // The optimal duals form a cover of the same value.
    let dual_cover = FractionalCover { values: duals };
    if dual_cover.validate(h).is_err() || dual_cover.total() != value {
        return Err(Error::InvariantViolation(
            "matching LP duals are not an optimal cover".into(),
        ));
    }
    Ok((value, matching))
}

/// `τ*(H)` and an optimal fractional cover, solved as its own LP and checked
/// against `ν*(H)`.
pub fn tau_star(h: &Hypergraph) -> Result<(Rational, FractionalCover)> {
    let n = h.num_vertices();
    let e = h.num_edges();
    if e == 0 {
        return Err(Error::NoEdges);
    }
    // max -1·t  s.t.  A^T t - s = 1
    let inc = IncidenceSystem::new(h);
    let a: Vec<Vec<Rational>> = (0..e)
        .map(|edge| {
            (0..n + e)
                .map(|j| {
                    if j < n {
                        if inc.entry(j, edge) {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    } else if j - n == edge {
                        -Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let c: Vec<Rational> = (0..n + e)
        .map(|j| if j < n { -Rational::one() } else { Rational::zero() })
        .collect();
    let problem = Problem {
        a,
        b: vec![Rational::one(); e],
        c,
    };
    let Outcome::Optimal { x, value, .. } = simplex::solve(&problem) else {
        return Err(Error::InvariantViolation("cover LP is feasible and bounded".into()));
    };
    let cover = FractionalCover {
        values: x[..n].to_vec(),
    };
    let value = -value;
    cover
        .validate(h)
        .map_err(|err| Error::InvariantViolation(format!("simplex cover: {err}")))?;
    if cover.total() != value {
        return Err(Error::InvariantViolation("cover total differs from LP value".into()));
    }
    let (nu, _) = nu_star(h)?;
    if nu != value {
        return Err(Error::InvariantViolation(format!(
            "duality gap: nu* = {}, tau* = {}",
            rational::to_string(&nu),
            rational::to_string(&value)
        )));
    }
    Ok((value, cover))
}

/// Either a perfect fractional matching or a Farkas witness that none exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PfmOutcome {
    Perfect(FractionalMatching),
    Infeasible(FarkasWitness),
}

impl PfmOutcome {
    pub fn matching(&self) -> Option<&FractionalMatching> {
        match self {
            PfmOutcome::Perfect(m) => Some(m),
            PfmOutcome::Infeasible(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&FarkasWitness> {
        match self {
            PfmOutcome::Perfect(_) => None,
            PfmOutcome::Infeasible(w) => Some(w),
        }
    }
}

/// Decides `A m = 1, m >= 0` with phase one of the simplex. Both outcomes are
/// re-validated before returning.
pub fn perfect_fractional_matching(h: &Hypergraph) -> Result<PfmOutcome> {
    let inc = IncidenceSystem::new(h);
    let a = inc.matrix();
    let b = vec![Rational::one(); h.num_vertices()];
    match simplex::feasible_point(&a, &b, h.num_edges()) {
        Ok(m) => {
            let m = FractionalMatching { values: m };
            if !m.is_perfect(h) {
                return Err(Error::InvariantViolation(
                    "phase one returned a non-perfect matching".into(),
                ));
            }
            Ok(PfmOutcome::Perfect(m))
        }
        Err(w) => {
            let w = FarkasWitness { values: w };
            w.validate(h)
                .map_err(|err| Error::InvariantViolation(format!("phase-one duals: {err}")))?;
            Ok(PfmOutcome::Infeasible(w))
        }
    }
}

/// A perturbation of `h`, or `None` when `h` has a perfect fractional matching.
pub fn find_perturbation(h: &Hypergraph) -> Result<Option<Perturbation>> {
    if h.num_edges() == 0 {
        return Err(Error::NoEdges);
    }
    match perfect_fractional_matching(h)? {
        PfmOutcome::Perfect(_) => Ok(None),
        PfmOutcome::Infeasible(w) => {
            let p = Perturbation::from_witness(&w);
            p.validate(h)
                .map_err(|err| Error::InvariantViolation(format!("perturbation from witness: {err}")))?;
            Ok(Some(p))
        }
    }
}

/// `min |w(v) / p(v)|` over `p(v) != 0`; `None` when `p` is identically zero.
pub fn epsilon_bound(w: &WeightAssignment, p: &Perturbation) -> Option<Rational> {
    w.weights()
        .iter()
        .zip(&p.values)
        .filter(|(_, pv)| !pv.is_zero())
        .map(|(wv, pv)| (wv / pv).abs())
        .min()
}

/// `w + eps p`. With `eps = None` the midpoint of the admissible interval is
/// used. Requires `0 < eps < epsilon_bound(w, p)`.
pub fn apply_perturbation(w: &WeightAssignment, p: &Perturbation, eps: Option<Rational>) -> Result<WeightAssignment> {
    check_len("perturbation", p.values.len(), w.len())?;
    let bound = epsilon_bound(w, p).ok_or_else(|| Error::InvalidInput("perturbation is zero".into()))?;
    let eps = eps.unwrap_or_else(|| &bound / rational::int(2));
    if !eps.is_positive() || eps >= bound {
        return Err(Error::EpsilonTooLarge {
            eps: rational::to_string(&eps),
            bound: rational::to_string(&bound),
        });
    }
    let shifted = w
        .weights()
        .iter()
        .zip(&p.values)
        .map(|(wv, pv)| wv + &eps * pv)
        .collect();
    WeightAssignment::new(shifted)
}

/// The explicit cover of the uniform top level of `H_r`: weight `1/(r-1)` on
/// `v_{r,r}` and on `v_{i,j}` for `i <= r-2`, `j <= r-1`, zero elsewhere.
/// `h` must carry `(row, col)` labels.
pub fn hr_explicit_cover(h: &Hypergraph, r: usize) -> Result<FractionalCover> {
    let labels = h
        .labels()
        .ok_or_else(|| Error::InvalidInput("hypergraph has no (row, col) labels".into()))?;
    let share = rational::frac(1, r as i64 - 1);
    let values = labels
        .iter()
        .map(|&(i, j)| {
            if (i, j) == (r, r) || (i <= r - 2 && j < r) {
                share.clone()
            } else {
                Rational::zero()
            }
        })
        .collect();
    Ok(FractionalCover { values })
}
