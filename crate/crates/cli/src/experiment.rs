//! Experiment orchestration and file output.

use std::fs;
use std::path::{Path, PathBuf};

use polaron_core::oracle::{
    bangbang_scan, compare_with_master_equation, lang_firsov_check, PulseTiming, TruncatedBathConfig,
};
use polaron_core::{
    build_rate_table, diagnose, effective_hopping_ratio, evolve_closed_form, evolve_ode, kernel_cos,
    lamb_shift_vanishes, numerics::dawson_sine, BathModel, Complex64, DensityMatrixST, QuadratureSpec, RateTable,
    TimeGrid, Trajectory,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Mode};
use crate::error::CliError;
use crate::svg::{line_chart, Series};

/// Formats a number with 9 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.8e}")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    /// Human-readable summary lines.
    pub notes: Vec<String>,
}

struct Table {
    stem: &'static str,
    comment: Option<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    chart: Option<Chart>,
}

struct Chart {
    title: String,
    x_label: String,
    y_label: String,
    /// Column indices plotted against column 0.
    columns: Vec<usize>,
    log_log: bool,
}

impl Table {
    fn csv(&self) -> String {
        let mut s = String::new();
        if let Some(c) = &self.comment {
            s.push_str("# ");
            s.push_str(c);
            s.push('\n');
        }
        s.push_str(&self.header.join(","));
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    fn svg(&self) -> Option<String> {
        let chart = self.chart.as_ref()?;
        let value = |cell: &str| cell.parse::<f64>().unwrap_or(f64::NAN);
        let tr = |v: f64| if chart.log_log { v.ln() } else { v };
        let series: Vec<Series> = chart
            .columns
            .iter()
            .map(|&c| Series {
                name: self.header[c].clone(),
                points: self.rows.iter().map(|r| (tr(value(&r[0])), tr(value(&r[c])))).collect(),
            })
            .collect();
        Some(line_chart(&chart.title, &chart.x_label, &chart.y_label, &series))
    }
}

fn write(path: PathBuf, contents: &str, report: &mut RunReport) -> Result<(), CliError> {
    fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    report.files.push(path);
    Ok(())
}

fn rates(model: &BathModel, j: f64, grid: &TimeGrid) -> Result<RateTable, CliError> {
    Ok(build_rate_table(model, j, grid, &QuadratureSpec::default())?)
}

fn trajectory(cfg: &ExperimentConfig, model: &BathModel) -> Result<(RateTable, Trajectory), CliError> {
    let table = rates(model, cfg.j_hop, &cfg.grid())?;
    let traj = evolve_ode(cfg.initial, &table)?;
    Ok((table, traj))
}

fn tag(v: f64) -> String {
    v.to_string()
}

/// Runs the configured experiment and writes its outputs into `out`.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<RunReport, CliError> {
    fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let mut report = RunReport::default();
    let tables = match cfg.mode {
        Mode::Single => single(cfg, &mut report)?,
        Mode::SweepS => sweep(cfg, Sweep::S, &mut report)?,
        Mode::SweepLambda => sweep(cfg, Sweep::Lambda, &mut report)?,
        Mode::EffectiveHopping => effective_hopping(cfg),
        Mode::Bangbang => bangbang(cfg, &mut report)?,
        Mode::OracleCompare => oracle_compare(cfg, &mut report)?,
        Mode::Selftest => selftest(cfg, &mut report)?,
    };
    for t in &tables {
        write(out.join(format!("{}.csv", t.stem)), &t.csv(), &mut report)?;
        if cfg.svg {
            if let Some(svg) = t.svg() {
                write(out.join(format!("{}.svg", t.stem)), &svg, &mut report)?;
            }
        }
    }
    write(out.join("resolved.conf"), &cfg.echo(), &mut report)?;
    Ok(report)
}

fn trajectory_rows(traj: &Trajectory) -> Vec<Vec<String>> {
    traj.states
        .iter()
        .enumerate()
        .map(|(k, r)| {
            vec![
                num(traj.grid.time(k)),
                num(r.rho_ss),
                num(r.rho_tt),
                num(r.rho_st.re),
                num(r.rho_st.im),
                num(traj.coherence[k]),
                num(traj.pop_diff[k]),
            ]
        })
        .collect()
}

fn single(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<Vec<Table>, CliError> {
    let (table, traj) = trajectory(cfg, &cfg.bath)?;
    let c_label = if traj.normalized { "C" } else { "abs_rho_st" };
    report.notes.push(format!(
        "J_tilde = {}, C(t_max) = {}, P_D(t_max) = {}",
        num(table.j_tilde),
        num(*traj.coherence.last().unwrap()),
        num(*traj.pop_diff.last().unwrap())
    ));
    if !traj.normalized {
        report
            .notes
            .push("initial coherence is zero; C column holds |rho_st|".into());
    }
    let mut rates_csv = Vec::new();
    table.write_csv(&mut rates_csv).expect("writing to memory");
    let rates_text = String::from_utf8(rates_csv).expect("ascii");
    let mut lines = rates_text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    Ok(vec![
        Table {
            stem: "trajectory",
            comment: None,
            header: ["t", "rho_ss", "rho_tt", "re_rho_st", "im_rho_st", "C", "P_D"]
                .map(String::from)
                .to_vec(),
            rows: trajectory_rows(&traj),
            chart: Some(Chart {
                title: format!("lambda = {}, s = {}", cfg.bath.lambda_g, cfg.bath.s),
                x_label: "t".into(),
                y_label: c_label.into(),
                columns: vec![5, 6],
                log_log: false,
            }),
        },
        Table {
            stem: "rates",
            comment: None,
            header,
            rows,
            chart: None,
        },
    ])
}

#[derive(Clone, Copy)]
enum Sweep {
    S,
    Lambda,
}

fn sweep(cfg: &ExperimentConfig, which: Sweep, report: &mut RunReport) -> Result<Vec<Table>, CliError> {
    let (values, key, stems) = match which {
        Sweep::S => (&cfg.s_values, "s", ("fig2a", "fig2bcd")),
        Sweep::Lambda => (&cfg.lambda_values, "lambda", ("sweep_lambda_a", "sweep_lambda_bcd")),
    };
    let runs: Vec<Trajectory> = values
        .par_iter()
        .map(|&v| {
            let model = match which {
                Sweep::S => BathModel { s: v, ..cfg.bath },
                Sweep::Lambda => BathModel {
                    lambda_g: v,
                    ..cfg.bath
                },
            };
            trajectory(cfg, &model).map(|(_, t)| t)
        })
        .collect::<Result<_, _>>()?;
    for (v, t) in values.iter().zip(&runs) {
        let d = diagnose(t);
        report.notes.push(format!(
            "{key} = {v}: C(t_max) = {}, P_D(t_max) = {}, min eigenvalue = {:.3e}",
            num(*t.coherence.last().unwrap()),
            num(*t.pop_diff.last().unwrap()),
            d.min_eigenvalue
        ));
    }
    let grid = cfg.grid();
    let mut header_a = vec!["t".to_string()];
    let mut header_b = vec!["t".to_string()];
    for v in values {
        header_a.push(format!("C_{key}={}", tag(*v)));
        for q in ["P_D", "rho_tt", "rho_ss"] {
            header_b.push(format!("{q}_{key}={}", tag(*v)));
        }
    }
    let rows_a = (0..grid.len())
        .map(|k| {
            std::iter::once(num(grid.time(k)))
                .chain(runs.iter().map(|t| num(t.coherence[k])))
                .collect()
        })
        .collect();
    let rows_b = (0..grid.len())
        .map(|k| {
            std::iter::once(num(grid.time(k)))
                .chain(runs.iter().flat_map(|t| {
                    let r = &t.states[k];
                    [num(t.pop_diff[k]), num(r.rho_tt), num(r.rho_ss)]
                }))
                .collect()
        })
        .collect();
    let n = values.len();
    Ok(vec![
        Table {
            stem: stems.0,
            comment: None,
            header: header_a,
            rows: rows_a,
            chart: Some(Chart {
                title: "normalized coherence".into(),
                x_label: "t".into(),
                y_label: "C(t)".into(),
                columns: (1..=n).collect(),
                log_log: false,
            }),
        },
        Table {
            stem: stems.1,
            comment: None,
            header: header_b,
            rows: rows_b,
            chart: Some(Chart {
                title: "population difference".into(),
                x_label: "t".into(),
                y_label: "P_D(t)".into(),
                columns: (0..n).map(|i| 1 + 3 * i).collect(),
                log_log: false,
            }),
        },
    ])
}

fn effective_hopping(cfg: &ExperimentConfig) -> Vec<Table> {
    let ratio = |lambda_g: f64, s: f64| {
        effective_hopping_ratio(&BathModel {
            lambda_g,
            s,
            ..cfg.bath
        })
    };
    let lambdas = cfg.lambda_range.values();
    let ss = cfg.s_range.values();
    let table = |stem, xs: &[f64], x_name: &str, curves: &[f64], c_name: &str, f: &dyn Fn(f64, f64) -> f64| Table {
        stem,
        comment: None,
        header: std::iter::once(x_name.to_string())
            .chain(curves.iter().map(|c| format!("ratio_{c_name}={}", tag(*c))))
            .collect(),
        rows: xs
            .iter()
            .map(|&x| {
                std::iter::once(num(x))
                    .chain(curves.iter().map(|&c| num(f(x, c))))
                    .collect()
            })
            .collect(),
        chart: Some(Chart {
            title: "effective hopping J~/J".into(),
            x_label: x_name.into(),
            y_label: "J~/J".into(),
            columns: (1..=curves.len()).collect(),
            log_log: false,
        }),
    };
    vec![
        table("fig1a", &lambdas, "lambda", &cfg.hopping_s_values, "s", &|l, s| {
            ratio(l, s)
        }),
        table("fig1b", &ss, "s", &cfg.lambda_values, "lambda", &|s, l| ratio(l, s)),
    ]
}

fn oracle_comment(cfg: &ExperimentConfig, extra: &str) -> String {
    let o = &cfg.oracle;
    format!(
        "config: modes={} nmax={} omega_max={} lambda={} s={} j={} epsilon={} rho_ss={} re_rho_st={} im_rho_st={}{extra}",
        o.modes, o.n_max, o.omega_max, o.lambda, o.s, o.j, o.epsilon, cfg.initial.rho_ss, cfg.initial.rho_st.re, cfg.initial.rho_st.im
    )
}

fn bangbang(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<Vec<Table>, CliError> {
    let o = &cfg.oracle;
    let bath = o.bath()?;
    let scan = bangbang_scan(&bath, &cfg.initial, o.bb_time, &o.cycles, o.timing)?;
    report.notes.push(format!(
        "fitted slope = {:.4}, r^2 = {:.6}, free trace distance = {}",
        scan.fit.slope,
        scan.fit.r_squared,
        num(scan.points[0].trace_distance_free)
    ));
    let rows = scan
        .points
        .iter()
        .map(|p| {
            vec![
                num(p.delta_t),
                p.n_cycles.to_string(),
                num(p.trace_distance_pulsed),
                num(p.trace_distance_free),
                num(scan.fit.eval(p.delta_t)),
            ]
        })
        .collect();
    Ok(vec![
        Table {
            stem: "bangbang",
            comment: Some(oracle_comment(
                cfg,
                &format!(" bb_time={} timing={}", o.bb_time, o.timing),
            )),
            header: [
                "delta_t",
                "n_cycles",
                "trace_distance_pulsed",
                "trace_distance_free",
                "fitted",
            ]
            .map(String::from)
            .to_vec(),
            rows,
            chart: Some(Chart {
                title: "pulsed trace distance (log-log)".into(),
                x_label: "ln delta_t".into(),
                y_label: "ln D".into(),
                columns: vec![2, 4],
                log_log: true,
            }),
        },
        Table {
            stem: "bangbang_fit",
            comment: None,
            header: ["slope", "log_prefactor", "r_squared"].map(String::from).to_vec(),
            rows: vec![vec![
                num(scan.fit.slope),
                num(scan.fit.log_prefactor),
                num(scan.fit.r_squared),
            ]],
            chart: None,
        },
    ])
}

fn oracle_compare(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<Vec<Table>, CliError> {
    let bath = cfg.oracle.bath()?;
    let grid = cfg.compare_grid();
    let cmp = compare_with_master_equation(&bath, &cfg.initial, &grid)?;
    report.notes.push(format!(
        "J_tilde/dE_B = {:.4}, coherence RMS difference = {}",
        cmp.exact.adiabaticity_ratio,
        num(cmp.coherence_rms)
    ));
    if cmp.exact.adiabaticity_ratio > 0.1 {
        report
            .notes
            .push("warning: J_tilde/dE_B > 0.1, outside the Markovian regime".into());
    }
    let exact = &cmp.exact.trajectory;
    let rows = (0..grid.len())
        .map(|k| {
            let (a, b) = (exact.coherence[k], cmp.master.coherence[k]);
            vec![num(grid.time(k)), num(a), num(b), num((a - b).abs())]
        })
        .collect();
    Ok(vec![
        Table {
            stem: "compare",
            comment: None,
            header: ["t", "C_exact", "C_master", "abs_diff"].map(String::from).to_vec(),
            rows,
            chart: Some(Chart {
                title: "exact vs master equation".into(),
                x_label: "t".into(),
                y_label: "C(t)".into(),
                columns: vec![1, 2],
                log_log: false,
            }),
        },
        Table {
            stem: "compare_summary",
            comment: Some(oracle_comment(cfg, "")),
            header: ["adiabaticity_ratio", "hopping_phase", "coherence_rms"]
                .map(String::from)
                .to_vec(),
            rows: vec![vec![
                num(cmp.exact.adiabaticity_ratio),
                num(cmp.exact.hopping_phase),
                num(cmp.coherence_rms),
            ]],
            chart: None,
        },
    ])
}

struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
    /// `true` when `value >= tolerance` is required instead of `<=`.
    lower_bound: bool,
}

impl Check {
    fn pass(&self) -> bool {
        if self.lower_bound {
            self.value >= self.tolerance
        } else {
            self.value <= self.tolerance
        }
    }
}

fn selftest(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<Vec<Table>, CliError> {
    let spec = QuadratureSpec::default();
    let mut checks = Vec::new();

    let model = BathModel::new(1.0, 1.0)?;
    let k0 = kernel_cos(0.0, &model, &spec)?;
    checks.push(Check {
        name: "kernel_origin_vs_dawson",
        value: (k0 - 2.0 * (0.5 - dawson_sine(1.0))).abs(),
        tolerance: 1e-8,
        lower_bound: false,
    });

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let table = rates(&model, 1.0, &TimeGrid::new(5.0, 0.01)?)?;
    let mut worst = 0.0f64;
    let mut states = vec![cfg.initial];
    for _ in 0..3 {
        let rho_ss: f64 = rng.random_range(0.0..1.0);
        let r = (rho_ss * (1.0 - rho_ss)).sqrt() * rng.random_range(0.0..1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        states.push(DensityMatrixST::new(rho_ss, Complex64::from_polar(r, phi))?);
    }
    for rho0 in &states {
        let a = evolve_ode(*rho0, &table)?;
        let b = evolve_closed_form(*rho0, &table)?;
        worst = worst.max(a.max_abs_diff(&b)?);
    }
    checks.push(Check {
        name: "ode_vs_closed_form",
        value: worst,
        tolerance: 1e-6,
        lower_bound: false,
    });

    let lamb = lamb_shift_vanishes(&states.iter().map(DensityMatrixST::to_site_matrix).collect::<Vec<_>>());
    checks.push(Check {
        name: "lamb_shift_commutator",
        value: lamb.max_commutator.max(lamb.identity_error),
        tolerance: 1e-15,
        lower_bound: false,
    });

    let lf = lang_firsov_check(&TruncatedBathConfig::single_mode(
        1.0,
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 0.0),
        12,
        1.0,
        0.0,
    )?)?;
    checks.push(Check {
        name: "lang_firsov_spectrum",
        value: lf.spectrum_deviation,
        tolerance: 1e-8,
        lower_bound: false,
    });
    checks.push(Check {
        name: "lang_firsov_hopping",
        value: lf.hopping_error,
        tolerance: 1e-4,
        lower_bound: false,
    });

    let bath = TruncatedBathConfig::discretized(1.0, 1.0, 2, 4.0, 4, 0.1, 0.0)?;
    let scan = bangbang_scan(&bath, &cfg.initial, 2.0, &[4, 8, 16], PulseTiming::Symmetric)?;
    checks.push(Check {
        name: "bangbang_slope",
        value: scan.fit.slope,
        tolerance: 1.7,
        lower_bound: true,
    });

    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass()).map(|c| c.name).collect();
    for (i, c) in checks.iter().enumerate() {
        report.notes.push(format!(
            "[{}] {} {}: {:.3e} ({} {:.1e})",
            i,
            if c.pass() { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            if c.lower_bound { ">=" } else { "<=" },
            c.tolerance
        ));
    }
    if !failed.is_empty() {
        return Err(CliError::SelfTest(failed.join(", ")));
    }
    Ok(vec![Table {
        stem: "selftest",
        comment: Some(
            checks
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{i}={}", c.name))
                .collect::<Vec<_>>()
                .join(" "),
        ),
        header: ["check", "value", "tolerance", "pass"].map(String::from).to_vec(),
        rows: checks
            .iter()
            .enumerate()
            .map(|(i, c)| {
                vec![
                    i.to_string(),
                    num(c.value),
                    num(c.tolerance),
                    u8::from(c.pass()).to_string(),
                ]
            })
            .collect(),
        chart: None,
    }])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(1.0), "1.00000000e0");
        assert_eq!(num(-0.000123456789), "-1.23456789e-4");
    }

    #[test]
    fn check_direction() {
        let upper = Check {
            name: "a",
            value: 0.5,
            tolerance: 1.0,
            lower_bound: false,
        };
        let lower = Check {
            name: "b",
            value: 0.5,
            tolerance: 1.0,
            lower_bound: true,
        };
        assert!(upper.pass() && !lower.pass());
    }
}
