use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_DIM_CAP: usize = 4096;
pub const DEFAULT_OMEGA_MAX: f64 = 4.0;

/// Two sites coupled to a finite set of truncated bosonic modes.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedBathConfig {
    pub mode_freqs: Vec<f64>,
    /// `g_{1k}`.
    pub g1: Vec<Complex64>,
    /// `g_{2k}`.
    pub g2: Vec<Complex64>,
    /// Highest occupation kept per mode.
    pub n_max: usize,
    pub epsilon_onsite: f64,
    pub j_hop: f64,
    /// Upper bound on the single-particle dimension `2 (n_max+1)^N_b`.
    pub dim_cap: usize,
}

impl TruncatedBathConfig {
    /// Discretized Ohmic bath: `ω_j = (j - 1/2) Δω` on `(0, omega_max]`,
    /// `g_{1j} = sqrt(λ ω_j³ e^{-ω_j²} Δω)`, `g_{2j} = g_{1j} e^{-i ω_j s}`.
    pub fn discretized(
        lambda_g: f64,
        s: f64,
        n_modes: usize,
        omega_max: f64,
        n_max: usize,
        j_hop: f64,
        epsilon_onsite: f64,
    ) -> Result<Self> {
        if !(lambda_g >= 0.0) {
            return Err(Error::invalid("lambda_g", format!("must be >= 0, got {lambda_g}")));
        }
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::invalid("s", format!("must be >= 0, got {s}")));
        }
        if n_modes == 0 {
            return Err(Error::invalid("modes", "need at least one mode"));
        }
        if !(omega_max > 0.0) || !omega_max.is_finite() {
            return Err(Error::invalid("omega_max", format!("must be > 0, got {omega_max}")));
        }
        let dw = omega_max / n_modes as f64;
        let mode_freqs: Vec<f64> = (0..n_modes).map(|j| (j as f64 + 0.5) * dw).collect();
        let g1: Vec<Complex64> = mode_freqs
            .iter()
            .map(|&w| Complex64::new((lambda_g * w.powi(3) * (-w * w).exp() * dw).sqrt(), 0.0))
            .collect();
        let g2 = g1
            .iter()
            .zip(&mode_freqs)
            .map(|(g, &w)| g * Complex64::from_polar(1.0, -w * s))
            .collect();
        let cfg = Self {
            mode_freqs,
            g1,
            g2,
            n_max,
            epsilon_onsite,
            j_hop,
            dim_cap: DEFAULT_DIM_CAP,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// One mode with explicit couplings.
    pub fn single_mode(
        omega: f64,
        g1: Complex64,
        g2: Complex64,
        n_max: usize,
        j_hop: f64,
        epsilon_onsite: f64,
    ) -> Result<Self> {
        let cfg = Self {
            mode_freqs: vec![omega],
            g1: vec![g1],
            g2: vec![g2],
            n_max,
            epsilon_onsite,
            j_hop,
            dim_cap: DEFAULT_DIM_CAP,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_dim_cap(mut self, cap: usize) -> Result<Self> {
        self.dim_cap = cap;
        self.validate()?;
        Ok(self)
    }

    pub fn n_modes(&self) -> usize {
        self.mode_freqs.len()
    }

    /// `(n_max+1)^N_b`, or `None` on overflow.
    pub fn bath_dim(&self) -> Option<usize> {
        (self.n_max + 1).checked_pow(u32::try_from(self.n_modes()).ok()?)
    }

    /// Single-particle dimension `2 (n_max+1)^N_b`.
    pub fn dim(&self) -> Option<usize> {
        self.bath_dim()?.checked_mul(2)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_modes();
        if n == 0 {
            return Err(Error::invalid("mode_freqs", "need at least one mode"));
        }
        if self.g1.len() != n || self.g2.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: self.g1.len().min(self.g2.len()),
            });
        }
        if let Some(w) = self.mode_freqs.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::invalid(
                "mode_freqs",
                format!("frequencies must be > 0, got {w}"),
            ));
        }
        if self.g1.iter().chain(&self.g2).any(|g| !g.is_finite()) {
            return Err(Error::invalid("couplings", "must be finite"));
        }
        if !self.epsilon_onsite.is_finite() || !self.j_hop.is_finite() {
            return Err(Error::invalid("j_hop", "energies must be finite"));
        }
        match self.dim() {
            Some(d) if d <= self.dim_cap => Ok(()),
            d => Err(Error::DimensionCap {
                dim: d.unwrap_or(usize::MAX),
                cap: self.dim_cap,
            }),
        }
    }

    /// `α_k = (g_{1k} - g_{2k}) / ω_k`.
    pub fn alpha(&self) -> Vec<Complex64> {
        self.g1
            .iter()
            .zip(&self.g2)
            .zip(&self.mode_freqs)
            .map(|((a, b), &w)| (a - b) / w)
            .collect()
    }

    pub fn alpha_sq(&self) -> Vec<f64> {
        self.alpha().iter().map(|a| a.norm_sqr()).collect()
    }

    /// `Σ_k |α_k|²`.
    pub fn dressing(&self) -> f64 {
        self.alpha_sq().iter().sum()
    }

    /// `J e^{-Σ|α_k|²/2}`.
    pub fn j_tilde(&self) -> f64 {
        self.j_hop * (-0.5 * self.dressing()).exp()
    }

    /// Smallest bath excitation energy `ΔE_B = min ω_k`.
    pub fn min_gap(&self) -> f64 {
        self.mode_freqs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Polaron-induced interaction `V₁₂ = 2 Σ_k Re(g_{1k} g*_{2k}) / ω_k`.
    pub fn v12(&self) -> f64 {
        self.g1
            .iter()
            .zip(&self.g2)
            .zip(&self.mode_freqs)
            .map(|((a, b), &w)| 2.0 * (a * b.conj()).re / w)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discretized_modes() {
        let c = TruncatedBathConfig::discretized(1.0, 1.0, 2, 4.0, 6, 0.1, 0.0).unwrap();
        assert_eq!(c.mode_freqs, vec![1.0, 3.0]);
        assert_eq!(c.dim(), Some(98));
        let w: f64 = 1.0;
        assert!((c.g1[0].re - (w.powi(3) * (-w * w).exp() * 2.0).sqrt()).abs() < 1e-15);
        assert!((c.g2[0] - c.g1[0] * Complex64::from_polar(1.0, -1.0)).norm() < 1e-15);
        // |α|² = 2 λ ω e^{-ω²} Δω (1 - cos ωs)
        let want = 2.0 * w * (-w * w).exp() * 2.0 * (1.0 - w.cos());
        assert!((c.alpha_sq()[0] - want).abs() < 1e-14);
        assert_eq!(c.min_gap(), 1.0);
    }

    #[test]
    fn dimension_cap() {
        assert!(matches!(
            TruncatedBathConfig::discretized(1.0, 1.0, 5, 4.0, 6, 0.1, 0.0),
            Err(Error::DimensionCap { dim: 33614, .. })
        ));
        let c = TruncatedBathConfig::discretized(1.0, 1.0, 2, 4.0, 6, 0.1, 0.0).unwrap();
        assert!(c.with_dim_cap(50).is_err());
    }

    #[test]
    fn rejects_bad_modes() {
        assert!(TruncatedBathConfig::single_mode(0.0, 0.1.into(), 0.0.into(), 3, 1.0, 0.0).is_err());
        assert!(TruncatedBathConfig::discretized(1.0, 1.0, 0, 4.0, 6, 0.1, 0.0).is_err());
    }

    #[test]
    fn forward_scattering_has_no_dressing() {
        let c = TruncatedBathConfig::discretized(1.0, 0.0, 3, 4.0, 2, 0.1, 0.0).unwrap();
        assert_eq!(c.dressing(), 0.0);
        assert_eq!(c.j_tilde(), 0.1);
    }
}
