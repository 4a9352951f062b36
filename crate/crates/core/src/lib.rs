//! Compact subsets of `[0,1]^n` encoded as deterministic base-`b` digit automata.
//!
//! A [`SafetyAutomaton`] denotes the set of points having *some* synchronous
//! digit expansion that labels an infinite run. Every value built by this crate
//! denotes a compact set; complements are deliberately absent.
//!
//! Modules:
//! - [`automaton`] covers representation, trimming, subset construction, boolean
//!   operations, products, projections, saturation and canonical comparison.
//! - [`structure`] covers generators (digit sets, singletons, boxes, order relations)
//!   and affine images with `Z[1/b]` coefficients.
//! - [`dimension`] covers spectral box dimension, Lebesgue measure, interior tests,
//!   total-disconnectedness probe and the avoidance verdict.
//! - [`restriction`] covers the digit-restriction sets `E_S`, densities of `S`, the
//!   tower sequence.
//! - [`lab`] covers samplers, box-counting and projection experiments.
//! - [`gadgets`] covers omega-orders, the Cantor endpoint order and the `h1/h2/g`
//!   interiority gadgets over `Q(sqrt 2)`.

pub mod automaton;
pub mod dimension;
pub mod error;
pub mod gadgets;
pub mod gen;
pub mod lab;
pub mod rational;
pub mod restriction;
pub mod structure;

pub use automaton::{Alphabet, Limits, NondetAutomaton, SafetyAutomaton};
pub use error::{Error, Result};
pub use rational::Rational;
