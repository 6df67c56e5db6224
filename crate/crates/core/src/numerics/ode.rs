use std::ops::{Add, Mul};

/// One classical fourth-order Runge–Kutta step of `dx/dt = f(t, x)`.
pub fn rk4_step<S, F>(state: S, t: f64, dt: f64, f: F) -> S
where
    S: Copy + Add<Output = S> + Mul<f64, Output = S>,
    F: Fn(f64, S) -> S,
{
    let half = 0.5 * dt;
    let k1 = f(t, state);
    let k2 = f(t + half, state + k1 * half);
    let k3 = f(t + half, state + k2 * half);
    let k4 = f(t + dt, state + k3 * dt);
    state + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn decay(steps: usize, dt: f64) -> f64 {
        let mut x = 1.0;
        for k in 0..steps {
            x = rk4_step(x, k as f64 * dt, dt, |_, x: f64| -x);
        }
        x
    }

    #[test]
    fn constant_solution() {
        assert_eq!(rk4_step(1.0, 0.0, 0.1, |_, _: f64| 0.0), 1.0);
    }

    #[test]
    fn exponential_decay() {
        assert!((decay(100, 0.01) - (-1.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn fourth_order_convergence() {
        let exact = (-1.0f64).exp();
        let coarse = (decay(20, 0.05) - exact).abs();
        let fine = (decay(40, 0.025) - exact).abs();
        assert!(coarse / fine >= 12.0, "ratio {}", coarse / fine);
    }

    #[test]
    fn rotation_preserves_modulus() {
        let mut x = Complex64::new(1.0, 0.0);
        let dt = 0.01;
        for k in 0..1000 {
            x = rk4_step(x, k as f64 * dt, dt, |_, x: Complex64| Complex64::i() * x);
        }
        assert!((x.norm() - 1.0).abs() < 1e-10);
    }
}
