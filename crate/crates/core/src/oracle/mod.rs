//! Exact simulation of two sites and a few truncated bosonic modes.

mod bangbang;
mod config;
mod hilbert;
mod lang_firsov;
mod propagate;
mod reference;

pub use bangbang::{
    bangbang_scan, fit_power_law, run_bangbang, BangBangPoint, BangBangScan, PowerLawFit, PulseSchedule, PulseTiming,
};
pub use config::{TruncatedBathConfig, DEFAULT_DIM_CAP, DEFAULT_OMEGA_MAX};
pub use hilbert::{
    build_fock_hamiltonian, build_hamiltonian, hermiticity_residual, off_sector_norm, FockHamiltonian, Sector,
};
pub use lang_firsov::{
    dressed_hopping_element, is_identity_transform, lang_firsov_check, polaron_hamiltonian, polaron_single_sector,
    LangFirsovReport, TRUNCATION_THRESHOLD,
};
pub use propagate::{apply_pulse, evolve_exact, mixture, trace_distance, FullState, Propagator};
pub use reference::{
    compare_with_master_equation, discrete_master_equation, dressed_st_basis, exact_decoherence_reference,
    ExactReference, OracleComparison,
};
