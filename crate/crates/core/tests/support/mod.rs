//! Closed-form kernels, used as an oracle independent of the quadrature path.

#![allow(dead_code)]

use polaron_core::numerics::dawson_sine as f;

/// `K_c(τ) = 2λ[1/2 - (τ/2)F(τ) - (F(s+τ) + F(s-τ))/(2s)]`.
pub fn k_cos(lambda: f64, s: f64, tau: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    2.0 * lambda * (0.5 - 0.5 * tau * f(tau) - (f(s + tau) + f(s - tau)) / (2.0 * s))
}

/// `K_s(τ) = 2λ[(√π τ/4) e^{-τ²/4} - (√π/(4s))(e^{-(s-τ)²/4} - e^{-(s+τ)²/4})]`.
pub fn k_sin(lambda: f64, s: f64, tau: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let sp = std::f64::consts::PI.sqrt();
    let g = |x: f64| (-x * x / 4.0).exp();
    2.0 * lambda * (sp * tau / 4.0 * g(tau) - sp / (4.0 * s) * (g(s - tau) - g(s + tau)))
}
