//! Time-dependent decay rates of the polaron master equation.
//!
//! With `φ±(u) = e^{±K_c(u)} cos K_s(u) - 1` and `χ(u) = e^{K_c(u)} sin K_s(u)`,
//!
//! ```text
//! γ±(t) = 2 J̃² ∫₀ᵗ φ±(u) du,      β(t) = 2 J̃² ∫₀ᵗ χ(u) du,
//! Γ₀ = (2γ₊ - γ₋)/2,   Γ₁ = 2γ₊ + γ₋,   Γ₂ = 4γ₊.
//! ```

use std::io::{self, Write};

use crate::bath::{build_kernel_table, BathModel, KernelTable};
use crate::error::{Error, Result};
use crate::numerics::{cumulative_trapezoid, QuadratureSpec, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateKind {
    GammaPlus,
    GammaMinus,
    Beta,
    Gamma0,
    Gamma1,
    Gamma2,
    CumGamma0,
    CumGamma1,
    CumGamma2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub grid: TimeGrid,
    /// Dressed hopping `J̃`.
    pub j_tilde: f64,
    pub gamma_plus: Vec<f64>,
    pub gamma_minus: Vec<f64>,
    pub beta: Vec<f64>,
    pub cap_gamma0: Vec<f64>,
    pub cap_gamma1: Vec<f64>,
    pub cap_gamma2: Vec<f64>,
    /// `∫₀ᵗ Γ_i`.
    pub cum_gamma0: Vec<f64>,
    pub cum_gamma1: Vec<f64>,
    pub cum_gamma2: Vec<f64>,
}

impl RateTable {
    /// Rates from tabulated kernels and bare hopping `j`. `J̃ = J e^{-K_c(0)/2}`.
    pub fn from_kernels(kernels: &KernelTable, j: f64, grid: &TimeGrid) -> Result<Self> {
        if !j.is_finite() {
            return Err(Error::invalid("j", format!("must be finite, got {j}")));
        }
        kernels.grid.same_as(grid)?;
        grid.check_len(kernels.k_cos.len())?;
        grid.check_len(kernels.k_sin.len())?;
        let j_tilde = j * (-0.5 * kernels.dressing()).exp();
        let pre = 2.0 * j_tilde * j_tilde;

        let n = grid.len();
        let (mut phi_p, mut phi_m, mut chi) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for (&kc, &ks) in kernels.k_cos.iter().zip(&kernels.k_sin) {
            let (sin, cos) = ks.sin_cos();
            let ep = kc.exp();
            phi_p.push(ep * cos - 1.0);
            phi_m.push((-kc).exp() * cos - 1.0);
            chi.push(ep * sin);
        }
        let scale = |v: Vec<f64>| v.into_iter().map(|x| pre * x).collect::<Vec<_>>();
        let gamma_plus = scale(cumulative_trapezoid(&phi_p, grid)?);
        let gamma_minus = scale(cumulative_trapezoid(&phi_m, grid)?);
        let beta = scale(cumulative_trapezoid(&chi, grid)?);

        if let Some(k) = (0..n).find(|&k| gamma_plus[k] < gamma_minus[k]) {
            log::debug!("gamma_plus < gamma_minus first at t = {}", grid.time(k));
        }

        let cap_gamma0: Vec<f64> = gamma_plus
            .iter()
            .zip(&gamma_minus)
            .map(|(p, m)| (2.0 * p - m) / 2.0)
            .collect();
        let cap_gamma1: Vec<f64> = gamma_plus.iter().zip(&gamma_minus).map(|(p, m)| 2.0 * p + m).collect();
        let cap_gamma2: Vec<f64> = gamma_plus.iter().map(|p| 4.0 * p).collect();
        let cum_gamma0 = cumulative_trapezoid(&cap_gamma0, grid)?;
        let cum_gamma1 = cumulative_trapezoid(&cap_gamma1, grid)?;
        let cum_gamma2 = cumulative_trapezoid(&cap_gamma2, grid)?;

        Ok(Self {
            grid: grid.clone(),
            j_tilde,
            gamma_plus,
            gamma_minus,
            beta,
            cap_gamma0,
            cap_gamma1,
            cap_gamma2,
            cum_gamma0,
            cum_gamma1,
            cum_gamma2,
        })
    }

    pub fn series(&self, kind: RateKind) -> &[f64] {
        match kind {
            RateKind::GammaPlus => &self.gamma_plus,
            RateKind::GammaMinus => &self.gamma_minus,
            RateKind::Beta => &self.beta,
            RateKind::Gamma0 => &self.cap_gamma0,
            RateKind::Gamma1 => &self.cap_gamma1,
            RateKind::Gamma2 => &self.cap_gamma2,
            RateKind::CumGamma0 => &self.cum_gamma0,
            RateKind::CumGamma1 => &self.cum_gamma1,
            RateKind::CumGamma2 => &self.cum_gamma2,
        }
    }

    /// Linear interpolation; exact at grid points.
    pub fn rate_at(&self, kind: RateKind, t: f64) -> Result<f64> {
        self.grid.interpolate(self.series(kind), t)
    }

    /// CSV with columns `t,gamma_plus,gamma_minus,beta,cum_gamma0,cum_gamma1,cum_gamma2`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,gamma_plus,gamma_minus,beta,cum_gamma0,cum_gamma1,cum_gamma2")?;
        for (k, &t) in self.grid.points().iter().enumerate() {
            writeln!(
                out,
                "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e}",
                t,
                self.gamma_plus[k],
                self.gamma_minus[k],
                self.beta[k],
                self.cum_gamma0[k],
                self.cum_gamma1[k],
                self.cum_gamma2[k]
            )?;
        }
        Ok(())
    }
}

/// Kernel table and rates for a continuum bath.
pub fn build_rate_table(model: &BathModel, j: f64, grid: &TimeGrid, spec: &QuadratureSpec) -> Result<RateTable> {
    let kernels = build_kernel_table(model, grid, spec)?;
    RateTable::from_kernels(&kernels, j, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::effective_hopping_ratio;

    fn table(lambda: f64, s: f64, tmax: f64, dt: f64) -> RateTable {
        let m = BathModel::new(lambda, s).unwrap();
        build_rate_table(&m, 1.0, &TimeGrid::new(tmax, dt).unwrap(), &QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn all_rates_vanish_at_origin() {
        let t = table(1.0, 1.0, 2.0, 0.01);
        for kind in [
            RateKind::GammaPlus,
            RateKind::GammaMinus,
            RateKind::Beta,
            RateKind::Gamma0,
            RateKind::CumGamma1,
        ] {
            assert_eq!(t.series(kind)[0], 0.0);
        }
    }

    #[test]
    fn decoupled_rates_vanish() {
        let t = table(1.0, 0.0, 5.0, 0.05);
        assert!(t
            .gamma_plus
            .iter()
            .chain(&t.gamma_minus)
            .chain(&t.beta)
            .all(|&v| v == 0.0));
        assert_eq!(t.j_tilde, 1.0);
    }

    #[test]
    fn dressed_hopping_matches_closed_form() {
        let t = table(1.0, 10.0, 1.0, 0.1);
        let want = effective_hopping_ratio(&BathModel::new(1.0, 10.0).unwrap());
        assert!((t.j_tilde - want).abs() < 1e-12);
    }

    #[test]
    fn derived_rate_identities() {
        let t = table(0.7, 2.0, 3.0, 0.01);
        for k in 0..t.grid.len() {
            let (p, m) = (t.gamma_plus[k], t.gamma_minus[k]);
            assert_eq!(t.cap_gamma0[k], (2.0 * p - m) / 2.0);
            assert_eq!(t.cap_gamma1[k], 2.0 * p + m);
            assert_eq!(t.cap_gamma2[k], 4.0 * p);
        }
    }

    #[test]
    fn interpolation_and_range() {
        let t = table(1.0, 1.0, 1.0, 0.1);
        assert_eq!(t.rate_at(RateKind::GammaPlus, 0.5).unwrap(), t.gamma_plus[5]);
        let mid = t.rate_at(RateKind::Beta, 0.55).unwrap();
        assert!((mid - 0.5 * (t.beta[5] + t.beta[6])).abs() < 1e-15);
        assert!(t.rate_at(RateKind::Beta, 1.5).is_err());
    }

    #[test]
    fn rejects_foreign_grid() {
        let g = TimeGrid::new(1.0, 0.1).unwrap();
        let k = KernelTable::from_modes(&[0.1], &[1.0], &g).unwrap();
        assert!(RateTable::from_kernels(&k, 1.0, &TimeGrid::new(1.0, 0.05).unwrap()).is_err());
        assert!(RateTable::from_kernels(&k, 1.0, &g).is_ok());
    }

    #[test]
    fn ode_coefficients_recombine() {
        let t = table(1.0, 1.0, 4.0, 0.05);
        for k in 0..t.grid.len() {
            let a = (t.gamma_minus[k] + 6.0 * t.gamma_plus[k]) / 2.0;
            let b = (t.gamma_minus[k] - 2.0 * t.gamma_plus[k]) / 2.0;
            assert!((a + b - t.cap_gamma1[k]).abs() < 1e-14);
            assert!((a - b - t.cap_gamma2[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn csv_shape() {
        let t = table(1.0, 1.0, 0.2, 0.1);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0].split(',').count(), 7);
        assert!(lines[1].starts_with("0.00000000e0,"));
    }
}
