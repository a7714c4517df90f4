//! Exact symbolic certificates for finitely presented Hopf algebras.
//!
//! The crate is layered bottom-up: [`coeffs`] (exact scalars), [`freealg`]
//! (words and polynomials), [`rewrite`] (completion and normal forms),
//! [`hopf`] (Sweedler evaluation and axiom checks), [`exactseq`] (exact
//! sequences of Hopf algebras), [`homcalc`] (windowed homological algebra)
//! and [`duality`] (the duality-fact calculus). [`chain`] and [`coaction`]
//! hold the chain-level and comodule checks, [`oracle`] an independent count
//! of window dimensions. [`dsl`] parses and prints the presentation language.

pub mod coaction;
pub mod cache;
pub mod chain;
pub mod coeffs;
pub mod dsl;
pub mod duality;
pub mod error;
pub mod exactseq;
pub mod freealg;
pub mod homcalc;
pub mod hopf;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod rewrite;
pub mod sample;

pub use coeffs::{FieldSpec, Scalar};
pub use error::{Error, Result};
pub use freealg::{Alphabet, NCPoly, TensorPoly, Word};
