//! Exact reduced dynamics in the polaron frame, for comparison with the
//! master equation on the same discrete mode set.

use nalgebra::Matrix2;
use num_complex::Complex64;

use super::config::TruncatedBathConfig;
use super::lang_firsov::{dressed_hopping_element, polaron_single_sector};
use super::propagate::{mixture, FullState, Propagator};
use crate::bath::KernelTable;
use crate::dynamics::{evolve_closed_form, DensityMatrixST, Trajectory};
use crate::error::{Error, Result};
use crate::numerics::TimeGrid;
use crate::rates::RateTable;

/// Singlet/triplet basis adapted to a dressed hopping with phase `φ`:
/// columns `(|1⟩ ∓ e^{-iφ}|2⟩)/√2`.
pub fn dressed_st_basis(phase: f64) -> Matrix2<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e = Complex64::from_polar(h, -phase);
    Matrix2::new(Complex64::new(h, 0.0), Complex64::new(h, 0.0), -e, e)
}

fn to_basis(site: &Matrix2<Complex64>, basis: &Matrix2<Complex64>) -> DensityMatrixST {
    let st = basis.adjoint() * site * basis;
    DensityMatrixST {
        rho_ss: st[(0, 0)].re,
        rho_tt: st[(1, 1)].re,
        rho_st: st[(0, 1)],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactReference {
    pub trajectory: Trajectory,
    /// `J̃ / ΔE_B`; the master equation is expected to hold when this is small.
    pub adiabaticity_ratio: f64,
    /// Phase `φ` of the vacuum dressed-hopping element.
    pub hopping_phase: f64,
}

/// Exact evolution of `ρ₀ ⊗ |vacuum⟩` under the polaron-frame Hamiltonian.
/// `ρ₀` and the returned states are expressed in the dressed basis
/// [`dressed_st_basis`].
pub fn exact_decoherence_reference(
    cfg: &TruncatedBathConfig,
    rho0: &DensityMatrixST,
    grid: &TimeGrid,
) -> Result<ExactReference> {
    rho0.validate()?;
    let h = polaron_single_sector(cfg)?;
    let element = dressed_hopping_element(&h);
    let hopping_phase = if element.norm() > 0.0 { element.arg() } else { 0.0 };
    let basis = dressed_st_basis(hopping_phase);
    let bath_dim = cfg.bath_dim().expect("validated");

    let site0 = basis * rho0.to_matrix() * basis.adjoint();
    let prop = Propagator::new(&h);
    let components: Vec<(f64, _)> = mixture(&site0)
        .into_iter()
        .map(|(w, v)| {
            let psi = FullState::with_vacuum(v, bath_dim)?;
            Ok((w, prop.coefficients(&psi.amplitudes)))
        })
        .collect::<Result<_>>()?;

    let states = grid
        .points()
        .iter()
        .map(|&t| {
            let site = components.iter().fold(Matrix2::zeros(), |acc, (w, coeffs)| {
                let psi = FullState {
                    amplitudes: prop.from_coefficients(coeffs, t),
                    bath_dim,
                };
                acc + psi.reduced() * Complex64::new(*w, 0.0)
            });
            to_basis(&site, &basis)
        })
        .collect();

    Ok(ExactReference {
        trajectory: Trajectory::from_states(grid.clone(), states),
        adiabaticity_ratio: cfg.j_tilde().abs() / cfg.min_gap(),
        hopping_phase,
    })
}

/// Master-equation trajectory with kernels summed over the configuration's modes.
pub fn discrete_master_equation(
    cfg: &TruncatedBathConfig,
    rho0: &DensityMatrixST,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    let kernels = KernelTable::from_modes(&cfg.alpha_sq(), &cfg.mode_freqs, grid)?;
    let rates = RateTable::from_kernels(&kernels, cfg.j_hop, grid)?;
    evolve_closed_form(*rho0, &rates)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub exact: ExactReference,
    pub master: Trajectory,
    /// RMS difference of the normalized coherences over the grid.
    pub coherence_rms: f64,
}

pub fn compare_with_master_equation(
    cfg: &TruncatedBathConfig,
    rho0: &DensityMatrixST,
    grid: &TimeGrid,
) -> Result<OracleComparison> {
    if rho0.rho_st.norm() == 0.0 {
        return Err(Error::ZeroInitialCoherence);
    }
    let exact = exact_decoherence_reference(cfg, rho0, grid)?;
    let master = discrete_master_equation(cfg, rho0, grid)?;
    let n = grid.len() as f64;
    let coherence_rms = (exact
        .trajectory
        .coherence
        .iter()
        .zip(&master.coherence)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(OracleComparison {
        exact,
        master,
        coherence_rms,
    })
}
