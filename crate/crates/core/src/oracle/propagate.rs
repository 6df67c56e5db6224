use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pure state on the single-particle sector, ordered `(site, bath)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    pub amplitudes: DVector<Complex64>,
    pub bath_dim: usize,
}

impl FullState {
    /// `|φ⟩ ⊗ |vacuum⟩` for a site-basis system state.
    pub fn with_vacuum(system: Vector2<Complex64>, bath_dim: usize) -> Result<Self> {
        let norm = system.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm });
        }
        let mut amplitudes = DVector::zeros(2 * bath_dim);
        amplitudes[0] = system[0];
        amplitudes[bath_dim] = system[1];
        Ok(Self { amplitudes, bath_dim })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Partial trace over the bath, in the site basis.
    pub fn reduced(&self) -> Matrix2<Complex64> {
        let d = self.bath_dim;
        let a = self.amplitudes.rows(0, d);
        let b = self.amplitudes.rows(d, d);
        Matrix2::new(a.dotc(&a), b.dotc(&a), a.dotc(&b), b.dotc(&b))
    }
}

/// Site swap `Π = a₁†a₂ + a₂†a₁` on the single-particle sector.
pub fn apply_pulse(state: &FullState) -> FullState {
    let d = state.bath_dim;
    let mut amplitudes = DVector::zeros(2 * d);
    amplitudes.rows_mut(0, d).copy_from(&state.amplitudes.rows(d, d));
    amplitudes.rows_mut(d, d).copy_from(&state.amplitudes.rows(0, d));
    FullState {
        amplitudes,
        bath_dim: d,
    }
}

/// `Π U` for a square operator `U` on the sector: swaps the two row blocks.
pub(crate) fn pulse_left(m: &DMatrix<Complex64>, bath_dim: usize) -> DMatrix<Complex64> {
    let d = bath_dim;
    let mut out = m.clone();
    out.rows_mut(0, d).copy_from(&m.rows(d, d));
    out.rows_mut(d, d).copy_from(&m.rows(0, d));
    out
}

/// `U Π`: swaps the two column blocks.
pub(crate) fn pulse_right(m: &DMatrix<Complex64>, bath_dim: usize) -> DMatrix<Complex64> {
    let d = bath_dim;
    let mut out = m.clone();
    out.columns_mut(0, d).copy_from(&m.columns(d, d));
    out.columns_mut(d, d).copy_from(&m.columns(0, d));
    out
}

/// `e^{-iHt}` through a cached eigendecomposition of `H`.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub energies: DVector<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl Propagator {
    pub fn new(h: &DMatrix<Complex64>) -> Self {
        let eig = h.clone().symmetric_eigen();
        Self {
            energies: eig.eigenvalues,
            vectors: eig.eigenvectors,
        }
    }

    fn phases(&self, t: f64) -> DVector<Complex64> {
        self.energies.map(|e| Complex64::from_polar(1.0, -e * t))
    }

    /// Eigenbasis coefficients of `psi`.
    pub fn coefficients(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        self.vectors.ad_mul(psi)
    }

    /// State at time `t` from eigenbasis coefficients.
    pub fn from_coefficients(&self, coeffs: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        &self.vectors * coeffs.component_mul(&self.phases(t))
    }

    pub fn evolve(&self, state: &FullState, t: f64) -> FullState {
        FullState {
            amplitudes: self.from_coefficients(&self.coefficients(&state.amplitudes), t),
            bath_dim: state.bath_dim,
        }
    }

    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let mut scaled = self.vectors.clone();
        for (mut col, p) in scaled.column_iter_mut().zip(self.phases(t).iter()) {
            col *= *p;
        }
        scaled * self.vectors.adjoint()
    }
}

/// One exact step `e^{-iH dt}`.
pub fn evolve_exact(state: &FullState, h: &DMatrix<Complex64>, dt: f64) -> FullState {
    Propagator::new(h).evolve(state, dt)
}

/// Trace distance `½ tr|a - b|` of 2×2 Hermitian matrices.
pub fn trace_distance(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> f64 {
    let d = a - b;
    let mean = 0.5 * (d[(0, 0)].re + d[(1, 1)].re);
    let half_gap = (0.25 * (d[(0, 0)].re - d[(1, 1)].re).powi(2) + d[(0, 1)].norm_sqr()).sqrt();
    0.5 * ((mean + half_gap).abs() + (mean - half_gap).abs())
}

/// Pure-state decomposition `ρ = Σ w_i |v_i⟩⟨v_i|` of a 2×2 density matrix.
pub fn mixture(rho: &Matrix2<Complex64>) -> Vec<(f64, Vector2<Complex64>)> {
    let eig = rho.symmetric_eigen();
    (0..2)
        .filter(|&i| eig.eigenvalues[i] > 1e-15)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::config::TruncatedBathConfig;
    use crate::oracle::hilbert::{build_hamiltonian, c};

    fn setup() -> (DMatrix<Complex64>, FullState) {
        let cfg = TruncatedBathConfig::discretized(1.0, 1.0, 2, 4.0, 3, 0.2, 0.1).unwrap();
        let h = build_hamiltonian(&cfg).unwrap();
        let phi = Vector2::new(c(0.6), Complex64::new(0.0, 0.8));
        (h, FullState::with_vacuum(phi, 16).unwrap())
    }

    #[test]
    fn zero_time_is_identity() {
        let (h, psi) = setup();
        let out = evolve_exact(&psi, &h, 0.0);
        assert!((out.amplitudes - &psi.amplitudes).norm() < 1e-13);
    }

    #[test]
    fn semigroup() {
        let (h, psi) = setup();
        let p = Propagator::new(&h);
        let two = p.evolve(&p.evolve(&psi, 0.35), 0.35);
        let one = p.evolve(&psi, 0.7);
        assert!((two.amplitudes - one.amplitudes).norm() < 1e-10);
        assert!((p.unitary(0.7) * &psi.amplitudes - p.evolve(&psi, 0.7).amplitudes).norm() < 1e-12);
    }

    #[test]
    fn eigenstate_only_rotates() {
        let (h, _) = setup();
        let p = Propagator::new(&h);
        let v = FullState {
            amplitudes: p.vectors.column(5).into_owned(),
            bath_dim: 16,
        };
        let out = p.evolve(&v, 3.0);
        let overlap = v.amplitudes.dotc(&out.amplitudes);
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitarity_over_many_steps() {
        let (h, mut psi) = setup();
        let p = Propagator::new(&h);
        let u = p.unitary(0.01);
        for _ in 0..10_000 {
            psi.amplitudes = &u * &psi.amplitudes;
        }
        assert!((psi.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pulse_swaps_sites() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = FullState::with_vacuum(Vector2::new(c(s), c(-s)), 4).unwrap();
        let triplet = FullState::with_vacuum(Vector2::new(c(s), c(s)), 4).unwrap();
        assert!((apply_pulse(&singlet).amplitudes + &singlet.amplitudes).norm() < 1e-15);
        assert_eq!(apply_pulse(&triplet).amplitudes, triplet.amplitudes);
        let site1 = FullState::with_vacuum(Vector2::new(c(1.0), c(0.0)), 4).unwrap();
        assert_eq!(apply_pulse(&site1).amplitudes[4], c(1.0));
        let (_, psi) = setup();
        assert!((apply_pulse(&apply_pulse(&psi)).amplitudes - &psi.amplitudes).norm() < 1e-14);
    }

    #[test]
    fn block_pulses_match_state_pulse() {
        let (h, psi) = setup();
        let u = Propagator::new(&h).unitary(0.3);
        let left = pulse_left(&u, 16) * &psi.amplitudes;
        let want = apply_pulse(&FullState {
            amplitudes: &u * &psi.amplitudes,
            bath_dim: 16,
        });
        assert!((left - want.amplitudes).norm() < 1e-14);
        let right = pulse_right(&u, 16) * &psi.amplitudes;
        assert!((right - &u * apply_pulse(&psi).amplitudes).norm() < 1e-14);
    }

    #[test]
    fn reduced_state_of_product() {
        let (_, psi) = setup();
        let r = psi.reduced();
        assert!((r[(0, 0)].re - 0.36).abs() < 1e-15);
        assert!((r[(0, 1)] - c(0.6) * Complex64::new(0.0, -0.8)).norm() < 1e-15);
    }

    #[test]
    fn trace_distance_and_mixture() {
        let a = Matrix2::new(c(1.0), c(0.0), c(0.0), c(0.0));
        let b = Matrix2::new(c(0.0), c(0.0), c(0.0), c(1.0));
        assert!((trace_distance(&a, &b) - 1.0).abs() < 1e-15);
        assert_eq!(trace_distance(&a, &a), 0.0);
        let mixed = Matrix2::new(c(0.7), Complex64::new(0.1, 0.2), Complex64::new(0.1, -0.2), c(0.3));
        let parts = mixture(&mixed);
        let mut back = Matrix2::zeros();
        for (w, v) in &parts {
            back += v * v.adjoint() * c(*w);
        }
        assert!((back - mixed).norm() < 1e-14);
    }

    #[test]
    fn rejects_unnormalized_system_state() {
        assert!(FullState::with_vacuum(Vector2::new(c(1.0), c(1.0)), 2).is_err());
    }
}
