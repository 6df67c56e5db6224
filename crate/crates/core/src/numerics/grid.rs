//! Uniform time grids and cumulative integration.
//!
//! Time is dimensionless, measured in units of the inverse bath cutoff.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    dt: f64,
    points: Vec<f64>,
}

impl TimeGrid {
    /// Grid on `[0, t_max]` with step `dt`; `t_max / dt` must be (close to)
    /// an integer.
    pub fn new(t_max: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
        }
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::invalid("t_max", format!("must be positive, got {t_max}")));
        }
        let steps = (t_max / dt).round();
        if steps < 1.0 || ((t_max / dt) - steps).abs() > 1e-6 * steps.max(1.0) {
            return Err(Error::invalid(
                "dt",
                format!("t_max = {t_max} is not an integer multiple of dt = {dt}"),
            ));
        }
        Self::with_steps(t_max, steps as usize)
    }

    pub fn with_steps(t_max: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::invalid("steps", "must be >= 1"));
        }
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::invalid("t_max", format!("must be positive, got {t_max}")));
        }
        let n = steps as f64;
        let mut points: Vec<f64> = (0..=steps).map(|k| t_max * (k as f64 / n)).collect();
        points[steps] = t_max;
        Ok(Self {
            t_max,
            dt: t_max / n,
            points,
        })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn time(&self, k: usize) -> f64 {
        self.points[k]
    }

    /// Same grid with every interval halved.
    pub fn refined(&self) -> Self {
        Self::with_steps(self.t_max, 2 * self.steps()).expect("valid grid refines")
    }

    /// Interval index and fractional position of `t`, for linear interpolation.
    pub fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let slack = 1e-12 * self.t_max;
        if !(t >= -slack && t <= self.t_max + slack) {
            return Err(Error::OutOfRange { t, t_max: self.t_max });
        }
        let steps = self.steps();
        let pos = (t / self.dt).max(0.0);
        let mut k = pos.floor() as usize;
        if k >= steps {
            k = steps - 1;
        }
        let frac = ((t - self.points[k]) / (self.points[k + 1] - self.points[k])).clamp(0.0, 1.0);
        Ok((k, frac))
    }

    /// Linear interpolation of `values` (aligned with the grid) at `t`.
    /// Exact at grid points.
    pub fn interpolate(&self, values: &[f64], t: f64) -> Result<f64> {
        self.check_len(values.len())?;
        let (k, frac) = self.locate(t)?;
        if frac == 0.0 {
            return Ok(values[k]);
        }
        if frac == 1.0 {
            return Ok(values[k + 1]);
        }
        Ok(values[k] + frac * (values[k + 1] - values[k]))
    }

    pub(crate) fn check_len(&self, found: usize) -> Result<()> {
        if found != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found,
            });
        }
        Ok(())
    }

    pub(crate) fn same_as(&self, other: &TimeGrid) -> Result<()> {
        if self.steps() != other.steps() || self.t_max != other.t_max {
            return Err(Error::GridMismatch(format!(
                "{} steps on [0, {}] vs {} steps on [0, {}]",
                self.steps(),
                self.t_max,
                other.steps(),
                other.t_max
            )));
        }
        Ok(())
    }
}

/// Running trapezoid integral: `out[0] = 0`, `out[k] = ∫₀^{t_k}`.
pub fn cumulative_trapezoid(samples: &[f64], grid: &TimeGrid) -> Result<Vec<f64>> {
    grid.check_len(samples.len())?;
    let pts = grid.points();
    let mut out = Vec::with_capacity(samples.len());
    let mut acc = 0.0;
    out.push(acc);
    for k in 1..samples.len() {
        acc += 0.5 * (pts[k] - pts[k - 1]) * (samples[k] + samples[k - 1]);
        out.push(acc);
    }
    Ok(out)
}
