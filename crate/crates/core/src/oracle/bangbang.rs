//! Instantaneous π-pulse (site-swap) decoupling.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rayon::prelude::*;

use super::config::TruncatedBathConfig;
use super::hilbert::{build_hamiltonian, c};
use super::propagate::{mixture, pulse_left, pulse_right, trace_distance, FullState, Propagator};
use crate::dynamics::DensityMatrixST;
use crate::error::{Error, Result};

/// `N` cycles of length `2δt` over total time `T = 2Nδt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSchedule {
    pub total_time: f64,
    pub cycles: usize,
}

impl PulseSchedule {
    pub fn new(total_time: f64, cycles: usize) -> Result<Self> {
        if !(total_time > 0.0) || !total_time.is_finite() {
            return Err(Error::invalid("bb_time", format!("must be > 0, got {total_time}")));
        }
        if cycles == 0 {
            return Err(Error::invalid("cycles", "need at least one cycle"));
        }
        Ok(Self { total_time, cycles })
    }

    /// `δt = T / (2N)`.
    pub fn dt_pulse(&self) -> f64 {
        self.total_time / (2 * self.cycles) as f64
    }
}

/// Placement of free evolution within a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PulseTiming {
    /// `U(δt) Π U(δt) Π`, repeated.
    Periodic,
    /// `U(δt/2) Π U(δt) Π U(δt/2)`, repeated.
    #[default]
    Symmetric,
}

impl std::str::FromStr for PulseTiming {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Self::Periodic),
            "symmetric" => Ok(Self::Symmetric),
            other => Err(Error::invalid(
                "timing",
                format!("expected periodic or symmetric, got {other}"),
            )),
        }
    }
}

impl std::fmt::Display for PulseTiming {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Periodic => "periodic",
            Self::Symmetric => "symmetric",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BangBangPoint {
    pub delta_t: f64,
    pub n_cycles: usize,
    pub trace_distance_pulsed: f64,
    pub trace_distance_free: f64,
}

/// Least-squares fit of `ln y = slope ln x + log_prefactor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub slope: f64,
    pub log_prefactor: f64,
    pub r_squared: f64,
}

impl PowerLawFit {
    pub fn eval(&self, x: f64) -> f64 {
        (self.log_prefactor + self.slope * x.ln()).exp()
    }
}

pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 2 || x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::invalid("fit", "need at least two positive points"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = ly.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("fit", "abscissae are all equal"));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(PowerLawFit {
        slope,
        log_prefactor: my - slope * mx,
        r_squared,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BangBangScan {
    pub points: Vec<BangBangPoint>,
    pub fit: PowerLawFit,
}

/// Shared setup for runs on one configuration and initial state.
struct Protocol {
    prop: Propagator,
    bath_dim: usize,
    components: Vec<(f64, FullState)>,
    rho0: Matrix2<Complex64>,
    hs: Matrix2<Complex64>,
}

impl Protocol {
    fn new(cfg: &TruncatedBathConfig, rho0: &DensityMatrixST) -> Result<Self> {
        rho0.validate()?;
        let h = build_hamiltonian(cfg)?;
        let bath_dim = cfg.bath_dim().expect("validated");
        let site = rho0.to_site_matrix();
        let components = mixture(&site)
            .into_iter()
            .map(|(w, v)| Ok((w, FullState::with_vacuum(v, bath_dim)?)))
            .collect::<Result<_>>()?;
        let hs = Matrix2::new(c(cfg.epsilon_onsite), c(cfg.j_hop), c(cfg.j_hop), c(cfg.epsilon_onsite));
        Ok(Self {
            prop: Propagator::new(&h),
            bath_dim,
            components,
            rho0: site,
            hs,
        })
    }

    /// Bath-free reference `e^{-iH_S T} ρ₀ e^{iH_S T}`; pulses commute with `H_S`.
    fn reference(&self, t: f64) -> Matrix2<Complex64> {
        let eig = self.hs.symmetric_eigen();
        let phases = Matrix2::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t)));
        let u = eig.eigenvectors * phases * eig.eigenvectors.adjoint();
        u * self.rho0 * u.adjoint()
    }

    fn reduced_after(&self, apply: impl Fn(&FullState) -> FullState) -> Matrix2<Complex64> {
        self.components
            .iter()
            .map(|(w, psi)| apply(psi).reduced() * c(*w))
            .fold(Matrix2::zeros(), |a, b| a + b)
    }

    fn free_distance(&self, t: f64) -> f64 {
        let rho = self.reduced_after(|psi| self.prop.evolve(psi, t));
        trace_distance(&rho, &self.reference(t))
    }

    fn cycle(&self, dt: f64, timing: PulseTiming) -> DMatrix<Complex64> {
        let d = self.bath_dim;
        match timing {
            PulseTiming::Periodic => {
                let u = self.prop.unitary(dt);
                &u * pulse_right(&pulse_left(&u, d), d)
            }
            PulseTiming::Symmetric => {
                let w = self.prop.unitary(0.5 * dt);
                let inner = pulse_right(&pulse_left(&self.prop.unitary(dt), d), d);
                &w * inner * &w
            }
        }
    }

    fn pulsed_distance(&self, schedule: &PulseSchedule, timing: PulseTiming) -> f64 {
        let cycle = self.cycle(schedule.dt_pulse(), timing);
        let rho = self.reduced_after(|psi| {
            let mut amps = psi.amplitudes.clone();
            for _ in 0..schedule.cycles {
                amps = &cycle * amps;
            }
            FullState {
                amplitudes: amps,
                bath_dim: psi.bath_dim,
            }
        });
        trace_distance(&rho, &self.reference(schedule.total_time))
    }
}

/// Trace distance of the reduced state at `T` from the bath-free evolution of
/// `rho0`, with and without pulses.
pub fn run_bangbang(
    cfg: &TruncatedBathConfig,
    rho0: &DensityMatrixST,
    schedule: &PulseSchedule,
    timing: PulseTiming,
) -> Result<BangBangPoint> {
    let p = Protocol::new(cfg, rho0)?;
    Ok(BangBangPoint {
        delta_t: schedule.dt_pulse(),
        n_cycles: schedule.cycles,
        trace_distance_pulsed: p.pulsed_distance(schedule, timing),
        trace_distance_free: p.free_distance(schedule.total_time),
    })
}

/// [`run_bangbang`] over several cycle counts at fixed `T`, with a log-log fit
/// of the pulsed distance against `δt`.
pub fn bangbang_scan(
    cfg: &TruncatedBathConfig,
    rho0: &DensityMatrixST,
    total_time: f64,
    cycles: &[usize],
    timing: PulseTiming,
) -> Result<BangBangScan> {
    let p = Protocol::new(cfg, rho0)?;
    let free = p.free_distance(total_time);
    let points: Vec<BangBangPoint> = cycles
        .par_iter()
        .map(|&n| {
            let schedule = PulseSchedule::new(total_time, n)?;
            Ok(BangBangPoint {
                delta_t: schedule.dt_pulse(),
                n_cycles: n,
                trace_distance_pulsed: p.pulsed_distance(&schedule, timing),
                trace_distance_free: free,
            })
        })
        .collect::<Result<_>>()?;
    let x: Vec<f64> = points.iter().map(|q| q.delta_t).collect();
    let y: Vec<f64> = points.iter().map(|q| q.trace_distance_pulsed).collect();
    let fit = fit_power_law(&x, &y)?;
    Ok(BangBangScan { points, fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig_state() -> DensityMatrixST {
        DensityMatrixST::new(2.0 / 3.0, Complex64::new(2f64.sqrt() / 3.0, 0.0)).unwrap()
    }

    #[test]
    fn schedule_arithmetic() {
        let s = PulseSchedule::new(2.0, 4).unwrap();
        assert_eq!(s.dt_pulse(), 0.25);
        assert!(PulseSchedule::new(2.0, 0).is_err());
        assert!(PulseSchedule::new(-1.0, 3).is_err());
    }

    #[test]
    fn uncoupled_bath_is_perfect() {
        let cfg = TruncatedBathConfig::single_mode(1.0, c(0.0), c(0.0), 3, 0.0, 0.4).unwrap();
        for timing in [PulseTiming::Periodic, PulseTiming::Symmetric] {
            let r = run_bangbang(&cfg, &fig_state(), &PulseSchedule::new(2.0, 4).unwrap(), timing).unwrap();
            assert!(r.trace_distance_pulsed < 1e-10 && r.trace_distance_free < 1e-10);
        }
    }

    #[test]
    fn uncoupled_bath_with_hopping_is_perfect() {
        let cfg = TruncatedBathConfig::single_mode(1.0, c(0.0), c(0.0), 2, 0.3, 0.1).unwrap();
        let r = run_bangbang(
            &cfg,
            &fig_state(),
            &PulseSchedule::new(3.0, 5).unwrap(),
            PulseTiming::Periodic,
        )
        .unwrap();
        assert!(r.trace_distance_pulsed < 1e-10 && r.trace_distance_free < 1e-10);
    }

    #[test]
    fn pulses_reduce_error_and_scale_quadratically() {
        let cfg = TruncatedBathConfig::discretized(1.0, 1.0, 2, 4.0, 4, 0.1, 0.0).unwrap();
        let scan = bangbang_scan(&cfg, &fig_state(), 2.0, &[4, 8, 16], PulseTiming::Symmetric).unwrap();
        for w in scan.points.windows(2) {
            assert!(w[1].trace_distance_pulsed < w[0].trace_distance_pulsed);
        }
        assert!(scan
            .points
            .iter()
            .all(|p| p.trace_distance_pulsed < p.trace_distance_free));
        assert!(scan.fit.slope > 1.7, "{:?}", scan.fit);
    }

    #[test]
    fn periodic_timing_is_second_order_for_real_couplings() {
        // s = π makes e^{-iωs} real for ω = 1, 3
        let cfg = TruncatedBathConfig::discretized(1.0, std::f64::consts::PI, 2, 4.0, 4, 0.1, 0.0).unwrap();
        let scan = bangbang_scan(&cfg, &fig_state(), 2.0, &[4, 8, 16], PulseTiming::Periodic).unwrap();
        assert!(scan.fit.slope > 1.7, "{:?}", scan.fit);
    }

    #[test]
    fn mixed_initial_state() {
        let cfg = TruncatedBathConfig::discretized(1.0, 1.0, 2, 4.0, 3, 0.1, 0.0).unwrap();
        let r = run_bangbang(
            &cfg,
            &DensityMatrixST::maximally_mixed(),
            &PulseSchedule::new(2.0, 4).unwrap(),
            PulseTiming::Symmetric,
        )
        .unwrap();
        // the maximally mixed state is invariant under any unital dynamics of the system
        assert!(r.trace_distance_free < 0.5);
        assert!(r.trace_distance_pulsed <= r.trace_distance_free + 1e-12);
    }

    #[test]
    fn power_law_fit_recovers_exponent() {
        let x = [0.5, 0.25, 0.125];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powi(2)).collect();
        let f = fit_power_law(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.eval(0.1) - 0.03).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(fit_power_law(&[1.0], &[1.0]).is_err());
        assert!(fit_power_law(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn timing_round_trips() {
        for t in [PulseTiming::Periodic, PulseTiming::Symmetric] {
            assert_eq!(t.to_string().parse::<PulseTiming>().unwrap(), t);
        }
        assert!("sometimes".parse::<PulseTiming>().is_err());
    }
}
