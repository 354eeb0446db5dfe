//! Prepare-and-measure dimension witnesses.
//!
//! Three witnesses are provided: the guessing witness `U_N`, the quadratic
//! witness `W_N`, and its linearization `V_N`. For each the crate offers
//! closed-form quantum bounds `Q_d`, classical bounds `C_d` (closed form or by
//! exhaustive enumeration of deterministic strategies), evaluation on
//! probability tables, certification of the smallest compatible dimension,
//! and a see-saw optimizer that approaches `Q_d` numerically.
//!
//! Conventions: preparations are labelled `x = 1..=N`; pair measurements are
//! labelled `y = (x, x')` with `x > x'` and stored in the order
//! `(2,1), (3,1), (3,2), (4,1), …`.

pub mod classical;
pub mod config;
pub mod error;
pub mod linalg;
pub mod quantum;
pub mod sampling;
pub mod seesaw;
pub mod simulate;
pub mod witnesses;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenDecomposition};
pub use quantum::{DensityMatrix, Effect, Ensemble, PairMeasurementSet, StateVector};
pub use witnesses::{BoundReport, Certification, ProbabilityTable, WitnessKind};

pub use num_complex::Complex64;
