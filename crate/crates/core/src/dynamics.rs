//! Reduced dynamics in the singlet/triplet basis.
//!
//! `|S⟩ = (|10⟩ - |01⟩)/√2`, `|T⟩ = (|10⟩ + |01⟩)/√2`. Writing
//! `ρ_TS = x + iy`, the master equation separates into
//!
//! ```text
//! dρ_SS/dt = -Γ₀ (2ρ_SS - 1),   dx/dt = -Γ₁ x,   dy/dt = -Γ₂ y.
//! ```

use std::io::{self, Write};

use nalgebra::{Matrix2, Matrix4, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{rk4_step, TimeGrid};
use crate::rates::RateTable;

const TRACE_TOL: f64 = 1e-9;
const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrixST {
    pub rho_ss: f64,
    pub rho_tt: f64,
    /// `⟨S|ρ|T⟩`.
    pub rho_st: Complex64,
}

impl DensityMatrixST {
    /// Unit-trace state; `rho_tt = 1 - rho_ss`.
    pub fn new(rho_ss: f64, rho_st: Complex64) -> Result<Self> {
        let rho = Self {
            rho_ss,
            rho_tt: 1.0 - rho_ss,
            rho_st,
        };
        rho.validate()?;
        Ok(rho)
    }

    pub fn maximally_mixed() -> Self {
        Self {
            rho_ss: 0.5,
            rho_tt: 0.5,
            rho_st: Complex64::new(0.0, 0.0),
        }
    }

    /// `|ψ⟩⟨ψ|` for `|ψ⟩ = a|S⟩ + b|T⟩`, normalized.
    pub fn pure(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            rho_ss: a.norm_sqr() / norm,
            rho_tt: b.norm_sqr() / norm,
            rho_st: a * b.conj() / norm,
        })
    }

    /// `⟨T|ρ|S⟩`.
    pub fn rho_ts(&self) -> Complex64 {
        self.rho_st.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho_ss + self.rho_tt
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let gap = ((self.rho_ss - self.rho_tt).powi(2) + 4.0 * self.rho_st.norm_sqr()).sqrt();
        0.5 * (self.trace() - gap)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.rho_ss.is_finite() && self.rho_tt.is_finite() && self.rho_st.is_finite();
        if !finite || (self.trace() - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized { norm: self.trace() });
        }
        for (name, p) in [("rho_ss", self.rho_ss), ("rho_tt", self.rho_tt)] {
            if !(-TRACE_TOL..=1.0 + TRACE_TOL).contains(&p) {
                return Err(Error::invalid(name, format!("population {p} outside [0, 1]")));
            }
        }
        if self.rho_ss * self.rho_tt - self.rho_st.norm_sqr() < -POSITIVITY_TOL {
            return Err(Error::invalid("rho_st", "state is not positive semidefinite"));
        }
        Ok(())
    }

    /// Matrix in the ordered basis `(|S⟩, |T⟩)`.
    pub fn to_matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::new(self.rho_ss, 0.0),
            self.rho_st,
            self.rho_ts(),
            Complex64::new(self.rho_tt, 0.0),
        )
    }

    /// Matrix in the site basis `(|10⟩, |01⟩)`.
    pub fn to_site_matrix(&self) -> Matrix2<Complex64> {
        let u = st_to_site();
        u * self.to_matrix() * u.adjoint()
    }

    /// Inverse of [`Self::to_site_matrix`]; the Hermitian part of `m` is used.
    pub fn from_site_matrix(m: &Matrix2<Complex64>) -> Self {
        let u = st_to_site();
        let st = u.adjoint() * m * u;
        Self {
            rho_ss: st[(0, 0)].re,
            rho_tt: st[(1, 1)].re,
            rho_st: 0.5 * (st[(0, 1)] + st[(1, 0)].conj()),
        }
    }
}

/// Columns are `|S⟩`, `|T⟩` in site components.
fn st_to_site() -> Matrix2<Complex64> {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Matrix2::new(h, h, -h, h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<DensityMatrixST>,
    /// Normalized `C(t)`, or `|ρ_ST(t)|` when `normalized` is false.
    pub coherence: Vec<f64>,
    pub pop_diff: Vec<f64>,
    /// False when `ρ_ST(0) = 0`.
    pub normalized: bool,
}

impl Trajectory {
    pub(crate) fn from_states(grid: TimeGrid, states: Vec<DensityMatrixST>) -> Self {
        let (coherence, normalized) = coherence_of(&states);
        let pop_diff = pop_diff_of(&states);
        Self {
            grid,
            states,
            coherence,
            pop_diff,
            normalized,
        }
    }

    pub fn last(&self) -> &DensityMatrixST {
        self.states.last().expect("trajectory is never empty")
    }

    /// Largest entrywise distance to another trajectory on the same grid.
    pub fn max_abs_diff(&self, other: &Trajectory) -> Result<f64> {
        self.grid.same_as(&other.grid)?;
        Ok(self
            .states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| {
                (a.rho_ss - b.rho_ss)
                    .abs()
                    .max((a.rho_tt - b.rho_tt).abs())
                    .max((a.rho_st - b.rho_st).norm())
            })
            .fold(0.0, f64::max))
    }

    /// CSV with columns `t,rho_ss,rho_tt,re_rho_st,im_rho_st,C,P_D`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,rho_ss,rho_tt,re_rho_st,im_rho_st,C,P_D")?;
        for (k, r) in self.states.iter().enumerate() {
            writeln!(
                out,
                "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e}",
                self.grid.time(k),
                r.rho_ss,
                r.rho_tt,
                r.rho_st.re,
                r.rho_st.im,
                self.coherence[k],
                self.pop_diff[k]
            )?;
        }
        Ok(())
    }
}

fn coherence_of(states: &[DensityMatrixST]) -> (Vec<f64>, bool) {
    let c0 = states[0].rho_st.norm();
    if c0 == 0.0 {
        (states.iter().map(|r| r.rho_st.norm()).collect(), false)
    } else {
        (states.iter().map(|r| r.rho_st.norm() / c0).collect(), true)
    }
}

fn pop_diff_of(states: &[DensityMatrixST]) -> Vec<f64> {
    let norm = states[0].trace().abs();
    states.iter().map(|r| (r.rho_tt - r.rho_ss).abs() / norm).collect()
}

/// `C(t) = |ρ_TS(t)| / |ρ_TS(0)|`.
pub fn coherence(traj: &Trajectory) -> Result<Vec<f64>> {
    if traj.normalized {
        Ok(traj.coherence.clone())
    } else {
        Err(Error::ZeroInitialCoherence)
    }
}

/// Normalized coherence, or `|ρ_ST(t)|` with `false` when `ρ_ST(0) = 0`.
pub fn coherence_or_absolute(traj: &Trajectory) -> (Vec<f64>, bool) {
    (traj.coherence.clone(), traj.normalized)
}

/// `P_D(t) = |ρ_TT - ρ_SS| / |ρ_TT(0) + ρ_SS(0)|`.
pub fn population_difference(traj: &Trajectory) -> Vec<f64> {
    traj.pop_diff.clone()
}

/// RK4 on `(ρ_SS, Re ρ_TS, Im ρ_TS)`; rates between grid points are linear.
pub fn evolve_ode(rho0: DensityMatrixST, rates: &RateTable) -> Result<Trajectory> {
    rho0.validate()?;
    let grid = &rates.grid;
    let (g0, g1, g2) = (&rates.cap_gamma0, &rates.cap_gamma1, &rates.cap_gamma2);
    let ts = rho0.rho_ts();
    let mut v = Vector3::new(rho0.rho_ss, ts.re, ts.im);
    let mut states = Vec::with_capacity(grid.len());
    states.push(rho0);
    for k in 0..grid.steps() {
        let (t0, dt) = (grid.time(k), grid.time(k + 1) - grid.time(k));
        let lerp = |a: &[f64], th: f64| a[k] + (a[k + 1] - a[k]) * th;
        let rhs = |t: f64, y: Vector3<f64>| {
            let th = (t - t0) / dt;
            Vector3::new(
                -lerp(g0, th) * (2.0 * y[0] - 1.0),
                -lerp(g1, th) * y[1],
                -lerp(g2, th) * y[2],
            )
        };
        v = rk4_step(v, t0, dt, rhs);
        let rho = DensityMatrixST {
            rho_ss: v[0],
            rho_tt: 1.0 - v[0],
            rho_st: Complex64::new(v[1], -v[2]),
        };
        let t = grid.time(k + 1);
        if !rho.min_eigenvalue().is_finite() {
            return Err(Error::InvariantViolation {
                t,
                what: "non-finite state".into(),
            });
        }
        if rho.min_eigenvalue() < -POSITIVITY_TOL {
            return Err(Error::InvariantViolation {
                t,
                what: format!("minimum eigenvalue {:.3e}", rho.min_eigenvalue()),
            });
        }
        states.push(rho);
    }
    Ok(Trajectory::from_states(grid.clone(), states))
}

/// Closed-form solution from the cumulative rates.
///
/// The population relaxes as `ρ_SS - 1/2 ∝ exp(-2∫Γ₀)`, the exact solution of
/// `dρ_SS/dt = -Γ₀(ρ_SS - ρ_TT)`.
pub fn evolve_closed_form(rho0: DensityMatrixST, rates: &RateTable) -> Result<Trajectory> {
    rho0.validate()?;
    let states = (0..rates.grid.len())
        .map(|k| {
            let e0 = (-2.0 * rates.cum_gamma0[k]).exp();
            let e1 = (-rates.cum_gamma1[k]).exp();
            let e2 = (-rates.cum_gamma2[k]).exp();
            let rho_ss = 0.5 * rho0.rho_ss * (1.0 + e0) + 0.5 * rho0.rho_tt * (1.0 - e0);
            let rho_st = 0.5 * rho0.rho_st * (e1 + e2) + 0.5 * rho0.rho_ts() * (e1 - e2);
            DensityMatrixST {
                rho_ss,
                rho_tt: 1.0 - rho_ss,
                rho_st,
            }
        })
        .collect();
    Ok(Trajectory::from_states(rates.grid.clone(), states))
}

/// Per-state legality figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub max_trace_error: f64,
    pub min_eigenvalue: f64,
}

pub fn diagnose(traj: &Trajectory) -> StateDiagnostics {
    traj.states.iter().fold(
        StateDiagnostics {
            max_trace_error: 0.0,
            min_eigenvalue: f64::INFINITY,
        },
        |d, r| StateDiagnostics {
            max_trace_error: d.max_trace_error.max((r.trace() - 1.0).abs()),
            min_eigenvalue: d.min_eigenvalue.min(r.min_eigenvalue()),
        },
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambShiftReport {
    /// `n₁(1-n₂) + n₂(1-n₁)` on `(|10⟩, |01⟩)`.
    pub operator: Matrix2<Complex64>,
    /// Distance of `operator` from the identity.
    pub identity_error: f64,
    /// Largest commutator entry over the supplied states.
    pub max_commutator: f64,
}

impl LambShiftReport {
    pub fn vanishes(&self) -> bool {
        self.identity_error < 1e-15 && self.max_commutator < 1e-15
    }
}

/// Builds `n₁(1-n₂) + n₂(1-n₁)` on the two-site Fock space, restricts it to
/// the single-particle block and commutes it with each state.
pub fn lamb_shift_vanishes(states: &[Matrix2<Complex64>]) -> LambShiftReport {
    // Fock order |00⟩, |10⟩, |01⟩, |11⟩.
    let n1 = Matrix4::from_diagonal(&[0.0, 1.0, 0.0, 1.0].into());
    let n2 = Matrix4::from_diagonal(&[0.0, 0.0, 1.0, 1.0].into());
    let id = Matrix4::<f64>::identity();
    let full = n1 * (id - n2) + n2 * (id - n1);
    let block = full.fixed_view::<2, 2>(1, 1).map(|x| Complex64::new(x, 0.0));
    let identity_error = (block - Matrix2::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let max_commutator = states
        .iter()
        .map(|rho| (block * rho - rho * block).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    LambShiftReport {
        operator: block,
        identity_error,
        max_commutator,
    }
}
