use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use polaron_cli::{parse_config, run_experiment, CliError, Mode};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Verb {
    Single,
    SweepS,
    SweepLambda,
    EffectiveHopping,
    Bangbang,
    OracleCompare,
    Selftest,
}

impl Verb {
    fn mode(self) -> Mode {
        match self {
            Verb::Single => Mode::Single,
            Verb::SweepS => Mode::SweepS,
            Verb::SweepLambda => Mode::SweepLambda,
            Verb::EffectiveHopping => Mode::EffectiveHopping,
            Verb::Bangbang => Mode::Bangbang,
            Verb::OracleCompare => Mode::OracleCompare,
            Verb::Selftest => Mode::Selftest,
        }
    }
}

/// Decoherence of a two-site polaron qubit coupled to a phonon bath.
#[derive(Debug, Parser)]
#[command(name = "polaron-deco", version)]
struct Args {
    /// Experiment to run; overrides `mode` from the config file.
    verb: Option<Verb>,
    /// Key-value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, env = "POLARON_DECO_OUT", default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    j: Option<String>,
    #[arg(long)]
    tmax: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    /// Also write an SVG chart next to each CSV.
    #[arg(long)]
    svg: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Number of bath modes in the oracle.
    #[arg(long)]
    modes: Option<String>,
    /// Phonon cutoff per oracle mode.
    #[arg(long)]
    nmax: Option<String>,
    /// Comma-separated pulse cycle counts.
    #[arg(long)]
    cycles: Option<String>,
    /// Any config key, as KEY=VALUE. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Args {
    fn overrides(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        if let Some(v) = self.verb {
            out.push(("mode".to_string(), v.mode().as_str().to_string()));
        }
        let named = [
            ("s", &self.s),
            ("lambda", &self.lambda),
            ("j", &self.j),
            ("tmax", &self.tmax),
            ("dt", &self.dt),
            ("modes", &self.modes),
            ("nmax", &self.nmax),
            ("cycles", &self.cycles),
        ];
        for (key, value) in named {
            if let Some(v) = value {
                out.push((key.to_string(), v.clone()));
            }
        }
        if self.svg {
            out.push(("svg".to_string(), "true".to_string()));
        }
        for kv in &self.set {
            let (k, v) = kv.split_once('=').unwrap_or((kv.as_str(), ""));
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        out
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.clone(),
            source,
        })?,
        None => String::new(),
    };
    let cfg = parse_config(&text, &args.overrides())?;
    log::info!("running {} into {}", cfg.mode.as_str(), args.out.display());
    let report = run_experiment(&cfg, &args.out)?;
    for note in &report.notes {
        println!("{note}");
    }
    for file in &report.files {
        println!("wrote {}", file.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.jobs {
        pool = pool.num_threads(n);
    }
    let result = match pool.build() {
        Ok(pool) => pool.install(|| run(&args)),
        Err(e) => {
            eprintln!("failed to start worker pool: {e}");
            return ExitCode::from(3);
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
