//! End-to-end acceptance run. Prints one line per criterion and exits nonzero on any failure.

use std::process::ExitCode;
use std::time::Instant;

use polaron_cli::{parse_config, run_experiment};
use polaron_core::numerics::{dawson_sine, integrate};
use polaron_core::oracle::{
    bangbang_scan, compare_with_master_equation, lang_firsov_check, PulseTiming, TruncatedBathConfig,
};
use polaron_core::{
    build_rate_table, diagnose, effective_hopping_ratio, evolve_closed_form, evolve_ode, kernel_cos, BathModel,
    Complex64, DensityMatrixST, QuadratureSpec, TimeGrid, Trajectory,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Accumulates state diagnostics from every trajectory produced along the way.
#[derive(Default)]
struct Legality {
    runs: usize,
    max_trace_error: f64,
    min_eigenvalue: f64,
}

impl Legality {
    fn record(&mut self, t: &Trajectory) {
        let d = diagnose(t);
        if self.runs == 0 {
            self.min_eigenvalue = d.min_eigenvalue;
        }
        self.runs += 1;
        self.max_trace_error = self.max_trace_error.max(d.max_trace_error);
        self.min_eigenvalue = self.min_eigenvalue.min(d.min_eigenvalue);
    }
}

fn fig_state() -> DensityMatrixST {
    DensityMatrixST::new(2.0 / 3.0, Complex64::new(2f64.sqrt() / 3.0, 0.0)).unwrap()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn dawson_identity() -> Outcome {
    let mut worst = 0.0f64;
    for lambda in [0.1, 1.0, 5.0] {
        for s in [0.1, 1.0, 10.0, 100.0] {
            let m = BathModel::new(lambda, s).map_err(|e| e.to_string())?;
            let k0 = kernel_cos(0.0, &m, &spec()).map_err(|e| e.to_string())?;
            let closed = lambda * 2.0 * (0.5 - dawson_sine(s) / s);
            worst = worst.max((k0 - closed).abs());
        }
    }
    ensure(worst <= 1e-8, format!("max |K_c(0) - closed form| = {worst:.3e}"))
}

fn no_decoherence(legal: &mut Legality) -> Outcome {
    let grid = TimeGrid::new(50.0, 0.005).unwrap();
    let rho0 = fig_state();
    let mut worst = 0.0f64;
    for (lambda, s) in [(1.0, 0.0), (0.0, 10.0)] {
        let m = BathModel::new(lambda, s).map_err(|e| e.to_string())?;
        let rates = build_rate_table(&m, 1.0, &grid, &spec()).map_err(|e| e.to_string())?;
        let t = evolve_ode(rho0, &rates).map_err(|e| e.to_string())?;
        legal.record(&t);
        let p0 = t.pop_diff[0];
        for k in 0..grid.len() {
            worst = worst.max((t.coherence[k] - 1.0).abs()).max((t.pop_diff[k] - p0).abs());
        }
    }
    ensure(worst <= 1e-9, format!("max deviation of C and P_D = {worst:.3e}"))
}

fn ode_vs_closed_form(legal: &mut Legality) -> Outcome {
    let grid = TimeGrid::new(50.0, 0.005).unwrap();
    let rates =
        build_rate_table(&BathModel::new(1.0, 10.0).unwrap(), 1.0, &grid, &spec()).map_err(|e| e.to_string())?;
    let states = [
        fig_state(),
        DensityMatrixST::maximally_mixed(),
        DensityMatrixST::new(1.0, Complex64::new(0.0, 0.0)).unwrap(),
        DensityMatrixST::new(0.5, Complex64::new(0.0, 0.5)).unwrap(),
        DensityMatrixST::new(0.3, Complex64::new(0.2, -0.3)).unwrap(),
    ];
    let mut worst = 0.0f64;
    for rho0 in states {
        let a = evolve_ode(rho0, &rates).map_err(|e| e.to_string())?;
        let b = evolve_closed_form(rho0, &rates).map_err(|e| e.to_string())?;
        legal.record(&a);
        legal.record(&b);
        worst = worst.max(a.max_abs_diff(&b).map_err(|e| e.to_string())?);
    }
    ensure(worst <= 1e-6, format!("max entrywise difference = {worst:.3e}"))
}

/// Closed-form kernels, independent of the library's quadrature path.
fn k_cos(lambda: f64, s: f64, tau: f64) -> f64 {
    2.0 * lambda * (0.5 - 0.5 * tau * dawson_sine(tau) - (dawson_sine(s + tau) + dawson_sine(s - tau)) / (2.0 * s))
}

fn k_sin(lambda: f64, s: f64, tau: f64) -> f64 {
    let sp = std::f64::consts::PI.sqrt();
    let g = |x: f64| (-x * x / 4.0).exp();
    2.0 * lambda * (sp * tau / 4.0 * g(tau) - sp / (4.0 * s) * (g(s - tau) - g(s + tau)))
}

/// `γ±(t)` as the outer time integral of the inner bath-frequency integrals,
/// with both integrals done by adaptive quadrature.
fn gamma_nested(lambda: f64, s: f64, t: f64, sign: f64) -> f64 {
    let inner = QuadratureSpec::new(1e-12, 1e-13, 20_000).unwrap();
    let outer = QuadratureSpec::new(1e-10, 1e-12, 2_000).unwrap();
    let j_tilde_sq = (-k_cos(lambda, s, 0.0)).exp();
    let q = integrate(
        |tau: f64| {
            let u = t - tau;
            let kc = integrate(
                |x: f64| {
                    let y = x * s;
                    let sinc = if y.abs() < 1e-4 { 1.0 - y * y / 6.0 } else { y.sin() / y };
                    2.0 * lambda * x * (-x * x).exp() * (1.0 - sinc) * (x * u).cos()
                },
                0.0,
                8.0,
                &inner,
            )
            .unwrap()
            .value;
            (sign * kc).exp() * k_sin(lambda, s, u).cos() - 1.0
        },
        0.0,
        t,
        &outer,
    )
    .unwrap();
    2.0 * j_tilde_sq * q.value
}

fn rates_vs_brute_force() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dt = 0.005;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let lambda = rng.random_range(0.1..5.0);
        let s = rng.random_range(0.1..20.0);
        let steps: usize = rng.random_range(100..1000);
        let t = steps as f64 * dt;
        let m = BathModel::new(lambda, s).unwrap();
        // Trapezoid error at dt = 0.005 reaches ~2e-6 for short times; halve the step.
        let grid = TimeGrid::with_steps(t, steps).unwrap().refined();
        let table = build_rate_table(&m, 1.0, &grid, &spec()).map_err(|e| e.to_string())?;
        let k = grid.steps();
        worst = worst
            .max((table.gamma_plus[k] - gamma_nested(lambda, s, t, 1.0)).abs())
            .max((table.gamma_minus[k] - gamma_nested(lambda, s, t, -1.0)).abs());
    }
    ensure(worst <= 1e-6, format!("max |gamma - nested quadrature| = {worst:.3e}"))
}

fn coherence_ordering(legal: &mut Legality) -> Outcome {
    let grid = TimeGrid::new(50.0, 0.005).unwrap();
    let mut runs = Vec::new();
    for s in [1.0, 10.0, 100.0] {
        let rates =
            build_rate_table(&BathModel::new(1.0, s).unwrap(), 1.0, &grid, &spec()).map_err(|e| e.to_string())?;
        let t = evolve_ode(fig_state(), &rates).map_err(|e| e.to_string())?;
        legal.record(&t);
        runs.push(t);
    }
    let c: Vec<f64> = runs.iter().map(|t| *t.coherence.last().unwrap()).collect();
    let last = runs[2].last();
    let pd = runs[2].pop_diff.last().unwrap().abs();
    let pops = (last.rho_ss - 0.5).abs().max((last.rho_tt - 0.5).abs());
    ensure(
        c[0] > c[1] && c[1] > c[2] && c[2] < 0.05 && pd < 0.05 && pops <= 0.02,
        format!(
            "C(50) = {:.4} > {:.4} > {:.4}; |P_D(50)| = {pd:.4}, |rho - 1/2| = {pops:.4} at s = 100",
            c[0], c[1], c[2]
        ),
    )
}

fn effective_hopping_shape() -> Outcome {
    let n = 20;
    let axis = |lo: f64, hi: f64| {
        (0..n)
            .map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect::<Vec<_>>()
    };
    let (lambdas, ss) = (axis(0.1, 5.0), axis(0.1, 100.0));
    let r = |l: f64, s: f64| {
        effective_hopping_ratio(&BathModel {
            lambda_g: l,
            s,
            ..BathModel::default()
        })
    };
    let mut ok = true;
    for &l in &lambdas {
        for &s in &ss {
            let v = r(l, s);
            ok &= v > 0.0 && v <= 1.0;
        }
    }
    for &l in &lambdas {
        ok &= ss.windows(2).all(|w| r(l, w[1]) < r(l, w[0]));
    }
    for &s in &ss {
        ok &= lambdas.windows(2).all(|w| r(w[1], s) < r(w[0], s));
    }
    let sat = lambdas
        .iter()
        .map(|&l| (r(l, 1e4) - (-l / 2.0).exp()).abs())
        .fold(0.0, f64::max);
    ensure(
        ok && sat <= 1e-3,
        format!("bounded and monotone: {ok}; saturation error at s = 1e4: {sat:.3e}"),
    )
}

fn legality(legal: &Legality) -> Outcome {
    ensure(
        legal.max_trace_error <= 1e-9 && legal.min_eigenvalue >= -1e-8,
        format!(
            "{} trajectories: max trace error {:.3e}, min eigenvalue {:.3e}",
            legal.runs, legal.max_trace_error, legal.min_eigenvalue
        ),
    )
}

fn lang_firsov() -> Outcome {
    let cfg = TruncatedBathConfig::single_mode(1.0, Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0), 12, 1.0, 0.0)
        .map_err(|e| e.to_string())?;
    let r = lang_firsov_check(&cfg).map_err(|e| e.to_string())?;
    let hop = (r.hopping_element.norm() - (-0.125f64).exp()).abs();
    ensure(
        r.spectrum_deviation <= 1e-8 && hop <= 1e-4,
        format!(
            "spectrum deviation {:.3e}, |hopping - J e^(-1/8)| = {hop:.3e}",
            r.spectrum_deviation
        ),
    )
}

fn bang_bang() -> Outcome {
    let cfg = TruncatedBathConfig::discretized(1.0, 1.0, 2, 4.0, 6, 0.1, 0.0).map_err(|e| e.to_string())?;
    let scan = bangbang_scan(&cfg, &fig_state(), 2.0, &[4, 8, 16, 32, 64], PulseTiming::Symmetric)
        .map_err(|e| e.to_string())?;
    let below = scan
        .points
        .iter()
        .all(|p| p.trace_distance_pulsed < p.trace_distance_free);
    ensure(
        below && scan.fit.slope >= 1.7,
        format!(
            "pulsed below free for all N: {below}; fitted slope {:.3}",
            scan.fit.slope
        ),
    )
}

fn oracle_vs_master(legal: &mut Legality) -> Outcome {
    let cfg = TruncatedBathConfig::discretized(1.0, 1.0, 2, 4.0, 6, 0.1, 0.0).map_err(|e| e.to_string())?;
    let cmp = compare_with_master_equation(&cfg, &fig_state(), &TimeGrid::new(10.0, 0.01).unwrap())
        .map_err(|e| e.to_string())?;
    legal.record(&cmp.master);
    ensure(
        cmp.exact.adiabaticity_ratio <= 0.1 && cmp.coherence_rms <= 0.1,
        format!(
            "J~/dE_B = {:.4}, RMS of C difference = {:.3e}",
            cmp.exact.adiabaticity_ratio, cmp.coherence_rms
        ),
    )
}

fn determinism() -> Outcome {
    let mut compared = 0;
    for mode in ["sweep-s", "effective-hopping", "bangbang"] {
        let overrides = vec![
            ("mode".to_string(), mode.to_string()),
            ("tmax".to_string(), "5".to_string()),
            ("cycles".to_string(), "4,8".to_string()),
        ];
        let cfg = parse_config("", &overrides).map_err(|e| e.to_string())?;
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let ra = run_experiment(&cfg, a.path()).map_err(|e| e.to_string())?;
        run_experiment(&cfg, b.path()).map_err(|e| e.to_string())?;
        for f in ra.files {
            let name = f.file_name().unwrap();
            if std::fs::read(&f).unwrap() != std::fs::read(b.path().join(name)).unwrap() {
                return Err(format!("{mode}: {} differs between runs", name.to_string_lossy()));
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} output files byte-identical across repeated runs"))
}

fn main() -> ExitCode {
    let mut legal = Legality::default();
    let mut failures = 0;
    let mut report = |n: usize, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let (tag, msg) = match outcome {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failures += 1;
                ("FAIL", m)
            }
        };
        println!("criterion {n}: {tag} {msg} ({secs:.2} s)");
    };
    report(1, &mut dawson_identity);
    report(2, &mut || no_decoherence(&mut legal));
    report(3, &mut || ode_vs_closed_form(&mut legal));
    report(4, &mut rates_vs_brute_force);
    report(5, &mut || coherence_ordering(&mut legal));
    report(6, &mut effective_hopping_shape);
    report(8, &mut lang_firsov);
    report(9, &mut bang_bang);
    report(10, &mut || oracle_vs_master(&mut legal));
    report(7, &mut || legality(&legal));
    report(11, &mut determinism);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
