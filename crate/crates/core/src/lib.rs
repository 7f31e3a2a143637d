//! Exact construction of the vertex algebra attached to a finite-dimensional
//! vertex algebroid, and of its graded twisted modules, truncated at a chosen
//! degree.
//!
//! The pipeline runs bottom-up:
//!
//! * [`algebra`], [`tca`], [`algebroid`], [`lie_algebroid`]: structure
//!   constants and axiom checkers.
//! * [`grading`]: finite-order automorphisms as sector gradings.
//! * [`loop_lie`]: the twisted loop Lie algebra with a windowed mode basis.
//! * [`induced`], [`module`], [`vacuum`], [`field`]: PBW-induced modules,
//!   quotients by relation subspaces, the vertex algebra itself and its
//!   vertex-operator coefficients.
//! * [`twisted`], [`identities`]: twisted modules, their radical and simple
//!   quotients, and the identity suites.

pub mod algebra;
pub mod algebroid;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod grading;
pub mod identities;
pub mod induced;
pub mod lie_algebroid;
pub mod linalg;
pub mod loop_lie;
pub mod module;
pub mod rational;
pub mod report;
pub mod tca;
pub mod twisted;
pub mod vacuum;

pub use error::{Error, Result};
