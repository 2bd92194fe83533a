//! Exact constructions of edge-colored graphs with small monochromatic
//! components, and the linear-programming machinery that certifies them.
//!
//! The crate builds affine planes over finite fields, derives colored
//! hypergraphs from them, decides perturbability of hypergraphs through exact
//! LP duality, blows hypergraphs up into edge-colored graphs, and audits the
//! minimum degree and monochromatic component orders of the result. All
//! numbers are integers or arbitrary-precision rationals.

pub mod blowup;
pub mod colorgraph;
pub mod designs;
mod dsu;
pub mod error;
pub mod galois;
pub mod hypergraph;
pub mod lp;
pub mod rational;
pub mod search;

pub use error::{Error, Result};
pub use rational::Rational;
