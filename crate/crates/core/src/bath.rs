//! Ohmic bath with a Gaussian cutoff and a two-site form factor.
//!
//! The mode sum `Σ_k |α_k|² cos(ω_k τ)` becomes
//!
//! ```text
//! K_c(τ) = 2 c Ω² ∫₀^∞ dx  x e^{-x²} (1 - sinc(x Ω s)) cos(x Ω τ)
//! ```
//!
//! with `c = lambda_g * geometry_factor`, and `K_s` is the same integral with
//! `sin` in place of `cos`. `K_c(0)` is the total dressing `Σ_k |α_k|²`, so the
//! effective hopping ratio is `exp(-K_c(0) / 2)`.

use nalgebra::Vector2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{dawson_sine, integrate_semiinf, QuadratureSpec, TimeGrid};

/// Below this `|ωs|` the form factor `1 - sin(ωs)/(ωs)` is evaluated by its
/// Taylor series.
const SINC_SERIES_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathModel {
    /// Dimensionless coupling; absorbs α, the phonon speed and geometry.
    pub lambda_g: f64,
    /// Gaussian cutoff Ω. Internal units set it to 1.
    pub omega_c: f64,
    /// Scattering time `s = l / v`, in units of 1/Ω.
    pub s: f64,
    /// Extra constant multiplying the mode-sum integral.
    pub geometry_factor: f64,
}

impl Default for BathModel {
    fn default() -> Self {
        Self {
            lambda_g: 1.0,
            omega_c: 1.0,
            s: 1.0,
            geometry_factor: 1.0,
        }
    }
}

impl BathModel {
    pub fn new(lambda_g: f64, s: f64) -> Result<Self> {
        let model = Self {
            lambda_g,
            s,
            ..Self::default()
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_g >= 0.0) || !self.lambda_g.is_finite() {
            return Err(Error::invalid(
                "lambda_g",
                format!("must be >= 0, got {}", self.lambda_g),
            ));
        }
        if !(self.s >= 0.0) || !self.s.is_finite() {
            return Err(Error::invalid("s", format!("must be >= 0, got {}", self.s)));
        }
        if !(self.omega_c > 0.0) || !self.omega_c.is_finite() {
            return Err(Error::invalid("omega_c", format!("must be > 0, got {}", self.omega_c)));
        }
        if !(self.geometry_factor > 0.0) || !self.geometry_factor.is_finite() {
            return Err(Error::invalid(
                "geometry_factor",
                format!("must be > 0, got {}", self.geometry_factor),
            ));
        }
        Ok(())
    }

    /// `lambda_g * geometry_factor`.
    pub fn coupling(&self) -> f64 {
        self.lambda_g * self.geometry_factor
    }

    fn decoupled(&self) -> bool {
        self.s == 0.0 || self.coupling() == 0.0
    }
}

/// `1 - sin(y)/y`.
fn form_factor(y: f64) -> f64 {
    if y.abs() < SINC_SERIES_LIMIT {
        let y2 = y * y;
        y2 / 6.0 - y2 * y2 / 120.0
    } else {
        1.0 - y.sin() / y
    }
}

/// `1/2 - F[z]/z`, the dimensionless dressing integral at `τ = 0`.
fn dressing_integral(z: f64) -> f64 {
    if z < 1e-2 {
        let z2 = z * z;
        z2 / 12.0 - z2 * z2 / 120.0 + z2 * z2 * z2 / 1680.0
    } else {
        0.5 - dawson_sine(z) / z
    }
}

fn weight(model: &BathModel, x: f64) -> f64 {
    x * (-x * x).exp() * form_factor(x * model.omega_c * model.s)
}

fn prefactor(model: &BathModel) -> f64 {
    2.0 * model.coupling() * model.omega_c * model.omega_c
}

/// `K_c(τ)`; even in `τ`.
pub fn kernel_cos(tau: f64, model: &BathModel, spec: &QuadratureSpec) -> Result<f64> {
    model.validate()?;
    if model.decoupled() {
        return Ok(0.0);
    }
    let w_tau = model.omega_c * tau.abs();
    let q = integrate_semiinf(|x: f64| weight(model, x) * (x * w_tau).cos(), spec).map_err(|e| Error::KernelAt {
        tau,
        source: Box::new(e),
    })?;
    Ok(prefactor(model) * q.value)
}

/// `K_s(τ)`; odd in `τ`, zero at `τ = 0`.
pub fn kernel_sin(tau: f64, model: &BathModel, spec: &QuadratureSpec) -> Result<f64> {
    model.validate()?;
    if model.decoupled() || tau == 0.0 {
        return Ok(0.0);
    }
    let w_tau = model.omega_c * tau.abs();
    let q = integrate_semiinf(|x: f64| weight(model, x) * (x * w_tau).sin(), spec).map_err(|e| Error::KernelAt {
        tau,
        source: Box::new(e),
    })?;
    Ok(prefactor(model) * q.value * tau.signum())
}

/// `(K_c(τ), K_s(τ))` from a single adaptive pass, `τ >= 0`.
fn kernel_pair(tau: f64, model: &BathModel, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let w_tau = model.omega_c * tau;
    let q = integrate_semiinf(
        |x: f64| {
            let (sin, cos) = (x * w_tau).sin_cos();
            Vector2::new(cos, sin) * weight(model, x)
        },
        spec,
    )
    .map_err(|e| Error::KernelAt {
        tau,
        source: Box::new(e),
    })?;
    let pre = prefactor(model);
    let k_sin = if tau == 0.0 { 0.0 } else { pre * q.value[1] };
    Ok((pre * q.value[0], k_sin))
}

/// `J̃ / J = exp[-c Ω² (1/2 - F[Ωs]/(Ωs))]`, in `(0, 1]`.
pub fn effective_hopping_ratio(model: &BathModel) -> f64 {
    if model.decoupled() {
        return 1.0;
    }
    let omega2 = model.omega_c * model.omega_c;
    (-model.coupling() * omega2 * dressing_integral(model.omega_c * model.s)).exp()
}

/// Kernels tabulated on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    pub grid: TimeGrid,
    pub k_cos: Vec<f64>,
    pub k_sin: Vec<f64>,
}

impl KernelTable {
    /// Total dressing `Σ_k |α_k|²`, i.e. `K_c(0)`.
    pub fn dressing(&self) -> f64 {
        self.k_cos[0]
    }

    /// Kernels of a discrete mode set: `Σ_k |α_k|² cos/sin(ω_k τ)`.
    pub fn from_modes(alpha_sq: &[f64], freqs: &[f64], grid: &TimeGrid) -> Result<Self> {
        if alpha_sq.len() != freqs.len() {
            return Err(Error::LengthMismatch {
                expected: freqs.len(),
                found: alpha_sq.len(),
            });
        }
        let (k_cos, k_sin) = grid
            .points()
            .iter()
            .map(|&t| {
                alpha_sq.iter().zip(freqs).fold((0.0, 0.0), |(c, s), (&a, &w)| {
                    let (sin, cos) = (w * t).sin_cos();
                    (c + a * cos, s + a * sin)
                })
            })
            .unzip();
        Ok(Self {
            grid: grid.clone(),
            k_cos,
            k_sin,
        })
    }
}

/// Tabulate `K_c` and `K_s` on `grid`.
pub fn build_kernel_table(model: &BathModel, grid: &TimeGrid, spec: &QuadratureSpec) -> Result<KernelTable> {
    model.validate()?;
    spec.validate()?;
    let n = grid.len();
    if model.decoupled() {
        return Ok(KernelTable {
            grid: grid.clone(),
            k_cos: vec![0.0; n],
            k_sin: vec![0.0; n],
        });
    }
    let pairs: Vec<(f64, f64)> = grid
        .points()
        .par_iter()
        .map(|&tau| kernel_pair(tau, model, spec))
        .collect::<Result<_>>()?;
    let (k_cos, k_sin) = pairs.into_iter().unzip();
    Ok(KernelTable {
        grid: grid.clone(),
        k_cos,
        k_sin,
    })
}
