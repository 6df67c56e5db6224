//! Dense operators on two fermionic sites times truncated bosonic modes.
//!
//! Fermion occupations are ordered `|00⟩, |10⟩, |01⟩, |11⟩`; the full index is
//! `f * bath_dim + b`, with mode 0 the most significant bath digit. The
//! single-particle sector is the contiguous range `[bath_dim, 3 bath_dim)` and
//! its first half is site 1.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

use super::config::TruncatedBathConfig;
use crate::error::Result;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Fermion-number sector of the two-site Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Empty,
    Single,
    Double,
}

impl Sector {
    /// Range of fermion configurations `f` covered by the sector.
    fn configs(self) -> std::ops::Range<usize> {
        match self {
            Sector::Empty => 0..1,
            Sector::Single => 1..3,
            Sector::Double => 3..4,
        }
    }
}

/// Bath operators of a configuration.
pub(crate) struct BathOperators {
    pub dim: usize,
    pub lowering: Vec<DMatrix<Complex64>>,
}

impl BathOperators {
    pub fn new(cfg: &TruncatedBathConfig) -> Result<Self> {
        cfg.validate()?;
        let d = cfg.n_max + 1;
        let n_modes = cfg.n_modes();
        let dim = cfg.bath_dim().expect("validated");
        let lowering = (0..n_modes)
            .map(|k| {
                let stride = d.pow((n_modes - 1 - k) as u32);
                let mut m = DMatrix::zeros(dim, dim);
                for b in 0..dim {
                    let n = (b / stride) % d;
                    if n > 0 {
                        m[(b - stride, b)] = c((n as f64).sqrt());
                    }
                }
                m
            })
            .collect();
        Ok(Self { dim, lowering })
    }

    pub fn free(&self, cfg: &TruncatedBathConfig) -> DMatrix<Complex64> {
        let mut h = DMatrix::zeros(self.dim, self.dim);
        for (b, &w) in self.lowering.iter().zip(&cfg.mode_freqs) {
            h += b.adjoint() * b * c(w);
        }
        h
    }

    /// `Σ_k (g_k b_k + g*_k b_k†)`.
    pub fn coupling(&self, g: &[Complex64]) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (b, &gk) in self.lowering.iter().zip(g) {
            m += b * gk + b.adjoint() * gk.conj();
        }
        m
    }

    /// `Σ_k (g_k/ω_k b_k - g*_k/ω_k b_k†)`, anti-Hermitian.
    pub fn displacement_generator(&self, g: &[Complex64], freqs: &[f64]) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for ((b, &gk), &w) in self.lowering.iter().zip(g).zip(freqs) {
            let a = gk / w;
            m += b * a - b.adjoint() * a.conj();
        }
        m
    }
}

/// Jordan-Wigner annihilators `(c₁, c₂)` on the 4-dim fermion space.
fn fermion_ops() -> (Matrix4<f64>, Matrix4<f64>) {
    let mut c1 = Matrix4::zeros();
    let mut c2 = Matrix4::zeros();
    // f = n1 + 2 n2
    for f in 0..4usize {
        let (n1, n2) = (f & 1, f >> 1);
        if n1 == 1 {
            c1[(f - 1, f)] = 1.0;
        }
        if n2 == 1 {
            c2[(f - 2, f)] = if n1 == 1 { -1.0 } else { 1.0 };
        }
    }
    (c1, c2)
}

fn kron_into(out: &mut DMatrix<Complex64>, fermion: &Matrix4<f64>, bath: &DMatrix<Complex64>) {
    let d = bath.nrows();
    for i in 0..4 {
        for j in 0..4 {
            let f = fermion[(i, j)];
            if f != 0.0 {
                let mut block = out.view_mut((i * d, j * d), (d, d));
                block += bath * c(f);
            }
        }
    }
}

/// Hamiltonian on the full two-site Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockHamiltonian {
    pub matrix: DMatrix<Complex64>,
    pub bath_dim: usize,
}

impl FockHamiltonian {
    pub fn sector(&self, sector: Sector) -> DMatrix<Complex64> {
        sector_block(&self.matrix, self.bath_dim, sector)
    }
}

pub(crate) fn sector_block(m: &DMatrix<Complex64>, bath_dim: usize, sector: Sector) -> DMatrix<Complex64> {
    let r = sector.configs();
    let start = r.start * bath_dim;
    let len = r.len() * bath_dim;
    m.view((start, start), (len, len)).into_owned()
}

/// `H = ε(n₁+n₂) + J(c₁†c₂ + c₂†c₁) + Σ ω_k b_k†b_k + Σ_p n_p Σ_k (g_pk b_k + h.c.)`.
pub fn build_fock_hamiltonian(cfg: &TruncatedBathConfig) -> Result<FockHamiltonian> {
    let ops = BathOperators::new(cfg)?;
    let d = ops.dim;
    let (c1, c2) = fermion_ops();
    let n1 = c1.transpose() * c1;
    let n2 = c2.transpose() * c2;
    let system = (n1 + n2) * cfg.epsilon_onsite + (c1.transpose() * c2 + c2.transpose() * c1) * cfg.j_hop;
    let id_b = DMatrix::<Complex64>::identity(d, d);
    let mut h = DMatrix::zeros(4 * d, 4 * d);
    kron_into(&mut h, &system, &id_b);
    kron_into(&mut h, &Matrix4::identity(), &ops.free(cfg));
    kron_into(&mut h, &n1, &ops.coupling(&cfg.g1));
    kron_into(&mut h, &n2, &ops.coupling(&cfg.g2));
    Ok(FockHamiltonian { matrix: h, bath_dim: d })
}

/// Single-particle block of the Hamiltonian, ordered `(site, bath)`.
pub fn build_hamiltonian(cfg: &TruncatedBathConfig) -> Result<DMatrix<Complex64>> {
    Ok(build_fock_hamiltonian(cfg)?.sector(Sector::Single))
}

/// Largest entry of `m - m†`.
pub fn hermiticity_residual(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry of `m` outside the fermion-number blocks.
pub fn off_sector_norm(m: &DMatrix<Complex64>, bath_dim: usize) -> f64 {
    let sector_of = |i: usize| match i / bath_dim {
        0 => 0,
        1 | 2 => 1,
        _ => 2,
    };
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if sector_of(i) != sector_of(j) {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}
