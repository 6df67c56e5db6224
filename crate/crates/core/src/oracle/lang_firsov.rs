//! Numerical Lang-Firsov transformation `H' = e^S H e^{-S}` with
//! `S = -Σ_p n_p Σ_k (g_pk b_k - g*_pk b_k†)/ω_k`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::config::TruncatedBathConfig;
use super::hilbert::{build_fock_hamiltonian, sector_block, BathOperators, FockHamiltonian, Sector};
use crate::error::Result;

/// Occupation weight allowed on the highest Fock level before the check is
/// called inconclusive.
pub const TRUNCATION_THRESHOLD: f64 = 1e-8;

/// `e^M` for anti-Hermitian `M`, via the Hermitian matrix `iM`.
pub(crate) fn exp_anti_hermitian(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let eig = (m * i).symmetric_eigen();
    let mut scaled = eig.eigenvectors.clone();
    for (mut col, &mu) in scaled.column_iter_mut().zip(eig.eigenvalues.iter()) {
        col *= Complex64::from_polar(1.0, -mu);
    }
    scaled * eig.eigenvectors.adjoint()
}

/// Per-configuration blocks of `e^S` on the bath space, indexed by `f = n₁ + 2n₂`.
pub(crate) fn transform_blocks(cfg: &TruncatedBathConfig) -> Result<Vec<DMatrix<Complex64>>> {
    let ops = BathOperators::new(cfg)?;
    let a1 = ops.displacement_generator(&cfg.g1, &cfg.mode_freqs);
    let a2 = ops.displacement_generator(&cfg.g2, &cfg.mode_freqs);
    let id = DMatrix::identity(ops.dim, ops.dim);
    Ok(vec![
        id,
        exp_anti_hermitian(&-&a1),
        exp_anti_hermitian(&-&a2),
        exp_anti_hermitian(&-(a1 + a2)),
    ])
}

fn block_diag(blocks: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let d = blocks[0].nrows();
    let mut out = DMatrix::zeros(d * blocks.len(), d * blocks.len());
    for (f, b) in blocks.iter().enumerate() {
        out.view_mut((f * d, f * d), (d, d)).copy_from(b);
    }
    out
}

/// `H'` on the full Fock space.
pub fn polaron_hamiltonian(cfg: &TruncatedBathConfig) -> Result<FockHamiltonian> {
    let h = build_fock_hamiltonian(cfg)?;
    let u = block_diag(&transform_blocks(cfg)?);
    Ok(FockHamiltonian {
        matrix: &u * h.matrix * u.adjoint(),
        bath_dim: h.bath_dim,
    })
}

/// `H'` restricted to the single-particle sector.
pub fn polaron_single_sector(cfg: &TruncatedBathConfig) -> Result<DMatrix<Complex64>> {
    let h = build_fock_hamiltonian(cfg)?;
    let blocks = transform_blocks(cfg)?;
    let u = block_diag(&blocks[1..3]);
    let hs = h.sector(Sector::Single);
    Ok(&u * hs * u.adjoint())
}

/// Vacuum element `⟨10; 0|H'|01; 0⟩` of the dressed hopping.
pub fn dressed_hopping_element(h_single: &DMatrix<Complex64>) -> Complex64 {
    h_single[(0, h_single.nrows() / 2)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct LangFirsovReport {
    /// Largest deviation between sorted spectra of `H` and `H'`.
    pub spectrum_deviation: f64,
    pub hopping_element: Complex64,
    /// `J e^{-Σ|α_k|²/2}`.
    pub hopping_expected: f64,
    pub hopping_error: f64,
    /// `ε - Σ|g_pk|²/ω_k` against the single-sector vacuum diagonal, worst site.
    pub onsite_shift_error: f64,
    /// `2ε - Σ|g_1k+g_2k|²/ω_k` against the double-sector vacuum diagonal.
    pub double_shift_error: f64,
    /// Largest weight on the top Fock level of a displaced vacuum.
    pub truncation_estimate: f64,
    /// Set when `truncation_estimate` exceeds the threshold.
    pub suggested_n_max: Option<usize>,
}

impl LangFirsovReport {
    pub fn conclusive(&self) -> bool {
        self.suggested_n_max.is_none()
    }
}

fn sorted_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

fn top_level_weight(cfg: &TruncatedBathConfig, blocks: &[DMatrix<Complex64>]) -> f64 {
    let d = cfg.n_max + 1;
    let n_modes = cfg.n_modes();
    let dim = blocks[0].nrows();
    let mut worst = 0.0f64;
    for u in &blocks[1..] {
        // displaced vacuum e^{-S}|0⟩
        let col = u.adjoint().column(0).into_owned();
        for k in 0..n_modes {
            let stride = d.pow((n_modes - 1 - k) as u32);
            let w: f64 = (0..dim)
                .filter(|b| (b / stride) % d == cfg.n_max)
                .map(|b| col[b].norm_sqr())
                .sum();
            worst = worst.max(w);
        }
    }
    worst
}

/// Spectrum, dressed-hopping and energy-shift checks of the transformation.
pub fn lang_firsov_check(cfg: &TruncatedBathConfig) -> Result<LangFirsovReport> {
    let h = build_fock_hamiltonian(cfg)?;
    let blocks = transform_blocks(cfg)?;
    let u = block_diag(&blocks);
    let hp = &u * &h.matrix * u.adjoint();
    let d = h.bath_dim;

    let spectrum_deviation = sorted_eigenvalues(&h.matrix)
        .iter()
        .zip(sorted_eigenvalues(&hp))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let single = sector_block(&hp, d, Sector::Single);
    let hopping_element = dressed_hopping_element(&single);
    let hopping_expected = cfg.j_tilde();
    let hopping_error = (hopping_element.norm() - hopping_expected).abs();

    let shift = |g: &[Complex64]| -> f64 { g.iter().zip(&cfg.mode_freqs).map(|(g, w)| g.norm_sqr() / w).sum() };
    let eps = cfg.epsilon_onsite;
    let onsite_shift_error = (single[(0, 0)].re - (eps - shift(&cfg.g1)))
        .abs()
        .max((single[(d, d)].re - (eps - shift(&cfg.g2))).abs());
    let g_sum: Vec<Complex64> = cfg.g1.iter().zip(&cfg.g2).map(|(a, b)| a + b).collect();
    let double = sector_block(&hp, d, Sector::Double);
    let double_shift_error = (double[(0, 0)].re - (2.0 * eps - shift(&g_sum))).abs();

    let truncation_estimate = top_level_weight(cfg, &blocks);
    let suggested_n_max = (truncation_estimate > TRUNCATION_THRESHOLD).then(|| suggest_n_max(cfg));
    if let Some(n) = suggested_n_max {
        log::warn!(
            "Lang-Firsov check inconclusive at n_max = {}; try n_max = {n}",
            cfg.n_max
        );
    }

    Ok(LangFirsovReport {
        spectrum_deviation,
        hopping_element,
        hopping_expected,
        hopping_error,
        onsite_shift_error,
        double_shift_error,
        truncation_estimate,
        suggested_n_max,
    })
}

/// Smallest cutoff whose Poisson tail beyond it, for the largest displacement,
/// is below the threshold.
fn suggest_n_max(cfg: &TruncatedBathConfig) -> usize {
    let mean = cfg
        .g1
        .iter()
        .zip(&cfg.g2)
        .zip(&cfg.mode_freqs)
        .flat_map(|((a, b), w)| [(a / w).norm_sqr(), (b / w).norm_sqr(), ((a + b) / w).norm_sqr()])
        .fold(0.0, f64::max);
    let mut p = (-mean).exp();
    let mut tail = 1.0 - p;
    let mut n = 0;
    while tail > TRUNCATION_THRESHOLD && n < 1000 {
        n += 1;
        p *= mean / n as f64;
        tail -= p;
    }
    (n + 1).max(cfg.n_max + 1)
}

/// `true` when `H'` equals `H` to machine precision, as for `g = 0`.
pub fn is_identity_transform(cfg: &TruncatedBathConfig) -> Result<bool> {
    let h = build_fock_hamiltonian(cfg)?;
    let hp = polaron_hamiltonian(cfg)?;
    Ok((h.matrix - hp.matrix).iter().all(|z| z.norm() < 1e-14))
}
