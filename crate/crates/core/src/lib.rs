//! A computational kernel for quasi-set theory.
//!
//! * [`universe`]: micro-atoms, macro-atoms and qsets; indistinguishability,
//!   extensional equality, weak pairs and quasi-cardinality.
//! * [`relations`]: quasi-relations and the quasi-function predicate.
//! * [`metric`]: quasi-metric spaces and the exhaustive axiom audit.
//! * [`eprb`]: the EPRB space `M = V ∪ [x]₂`.
//! * [`formula`]: parser, well-formedness checker and finite-model evaluator.
//! * [`spinlab`]: spin-singlet correlations and outcome sampling.
//! * [`model`] and [`cli`]: the model file format and the `qset` front end.

pub mod cli;
pub mod eprb;
pub mod error;
pub mod formula;
pub mod metric;
pub mod model;
pub mod relations;
pub mod spinlab;
pub mod universe;

pub use error::{Error, Result};
pub use universe::{Cardinal, Handle, Sort, Species, Universe};
