//! Decoherence of a two-site polaron qubit coupled to an acoustic phonon bath.
//!
//! The crate computes bath correlation kernels, time-dependent decay rates and
//! the reduced singlet/triplet dynamics, and carries an exact few-mode
//! simulator used for validation and for π-pulse decoupling experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bath;
pub mod dynamics;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod rates;

pub use bath::{build_kernel_table, effective_hopping_ratio, kernel_cos, kernel_sin, BathModel, KernelTable};
pub use dynamics::{
    coherence, coherence_or_absolute, diagnose, evolve_closed_form, evolve_ode, lamb_shift_vanishes,
    population_difference, DensityMatrixST, LambShiftReport, StateDiagnostics, Trajectory,
};
pub use error::{Error, Result};
pub use numerics::{QuadratureSpec, TimeGrid};
pub use rates::{build_rate_table, RateKind, RateTable};

pub use num_complex::Complex64;
