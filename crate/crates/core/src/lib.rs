//! Threshold laboratory for postselected fault-tolerant quantum computation
//! with the [[4,2,2]] error-detecting code.
//!
//! * [`pauli`] — phase-free symplectic Pauli algebra.
//! * [`circuit`] — faultable Clifford circuits and F2-linear fault propagation.
//! * [`gadgets`] — encoders, error-detection gadgets, the CNOT exRec, decoders.
//! * [`malignancy`] — correctness predicates, malignant-pair counting, Monte Carlo.
//! * [`carving`] — bad-cluster classification, carving and sealed clusters.
//! * [`threshold`] — recursions, budgets, distillation and overhead analytics.

pub mod carving;
pub mod circuit;
pub mod error;
pub mod gadgets;
pub mod malignancy;
pub mod pauli;
pub mod threshold;

pub use error::{Error, Result};
