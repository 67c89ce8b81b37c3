use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use tracing_subscriber::filter::LevelFilter;

use singular_vecm::estimate::{self, DetSpec, Fitted, VarKind};
use singular_vecm::model::{self, GrangerRep, I1FamilySpec};
use singular_vecm::montecarlo::{self, McConfig};
use singular_vecm::polymat;
use singular_vecm::simulate::{self, VarDynamics};
use singular_vecm::verify::{self, VerifyOptions};

const DEFAULT_T: usize = 500;
const DEFAULT_LAGS: usize = 2;
const THREADS_ENV: &str = "SVECM_THREADS";

#[derive(Parser, Debug)]
#[command(name = "svecm", version, about = "Singular cointegrated VAR toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Family specification (JSON). Without one the four-variable design drawn from the seed is used.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Monte Carlo replications.
    #[arg(long, global = true)]
    reps: Option<usize>,

    /// Sample size(s); a comma-separated list for `mc`.
    #[arg(long = "T", global = true, value_delimiter = ',')]
    t: Option<Vec<usize>>,

    /// Worker threads for the Monte Carlo. Falls back to the config file, then `SVECM_THREADS`.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Simulate a factor path (path.csv).
    Simulate,
    /// Error-correction representation (granger.json).
    Granger,
    /// Impulse responses (irf_<source>.csv).
    Irf {
        #[arg(long, value_enum)]
        source: Option<IrfSource>,
        /// Lag order of the fitted model.
        #[arg(long)]
        lags: Option<usize>,
    },
    /// Permanent/transitory decomposition (ptdecomp.json).
    Ptdecomp,
    /// Impulse-response Monte Carlo (table1.csv, table1.md).
    Mc,
    /// Built-in invariant suite.
    Verify,
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
enum IrfSource {
    #[serde(rename = "theoretical")]
    #[value(name = "theoretical")]
    Theoretical,
    #[serde(rename = "DVAR")]
    #[value(name = "DVAR")]
    Dvar,
    #[serde(rename = "LVAR")]
    #[value(name = "LVAR")]
    Lvar,
    #[serde(rename = "VECM")]
    #[value(name = "VECM")]
    Vecm,
}

impl IrfSource {
    fn label(self) -> &'static str {
        match self {
            IrfSource::Theoretical => "theoretical",
            IrfSource::Dvar => "DVAR",
            IrfSource::Lvar => "LVAR",
            IrfSource::Vecm => "VECM",
        }
    }
}

/// Contents of a `--config` file.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields, default)]
struct RunConfig {
    spec: Option<PathBuf>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    #[serde(rename = "T")]
    t: Option<usize>,
    burn_in: Option<usize>,
    horizon: Option<usize>,
    max_degree: Option<usize>,
    irf_source: Option<IrfSource>,
    lags: Option<usize>,
    threads: Option<usize>,
    mc: Option<McConfig>,
}

#[derive(Debug)]
enum CliError {
    Core(singular_vecm::Error),
    Config(String),
    Usage(String),
    ChecksFailed(Vec<String>),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Config(_) => "invalid_config",
            CliError::Usage(_) => "usage",
            CliError::ChecksFailed(_) => "checks_failed",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Config(m) | CliError::Usage(m) => m.clone(),
            CliError::ChecksFailed(ids) => format!("failed checks: {}", ids.join(", ")),
        }
    }
}

impl From<singular_vecm::Error> for CliError {
    fn from(e: singular_vecm::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Flags merged over the config file.
struct Run {
    command: Command,
    spec: Option<PathBuf>,
    out: PathBuf,
    seed: u64,
    t: usize,
    burn_in: usize,
    horizon: usize,
    max_degree: usize,
    irf_source: IrfSource,
    lags: usize,
    mc: McConfig,
}

fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut cfg: RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    // paths inside the file are relative to the file
    let base = path.parent().unwrap_or(Path::new(""));
    cfg.spec = cfg.spec.map(|p| base.join(p));
    cfg.out = cfg.out.map(|p| base.join(p));
    Ok(cfg)
}

fn resolve(cli: &Cli) -> CliResult<(Run, Option<usize>)> {
    let cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    let mut mc = cfg.mc.unwrap_or_default();
    let seed = cli.seed.or(cfg.seed).unwrap_or(mc.seed);
    mc.seed = seed;
    if let Some(reps) = cli.reps {
        mc.replications = reps;
    }
    let (mut irf_source, mut lags) = (cfg.irf_source, cfg.lags);
    if let Command::Irf { source, lags: l } = cli.command {
        irf_source = source.or(irf_source);
        lags = l.or(lags);
    }
    let t = match &cli.t {
        Some(list) if list.is_empty() => return Err(CliError::Usage("--T needs at least one value".into())),
        Some(list) => {
            mc.t_list = list.clone();
            list[0]
        }
        None => cfg.t.unwrap_or(DEFAULT_T),
    };
    let run = Run {
        command: cli.command,
        spec: cli.spec.clone().or(cfg.spec),
        out: cli.out.clone().or(cfg.out).unwrap_or_else(|| PathBuf::from("out")),
        seed,
        t,
        burn_in: cfg.burn_in.unwrap_or(simulate::DEFAULT_BURN_IN),
        horizon: cfg.horizon.unwrap_or(model::DEFAULT_IRF_HORIZON),
        max_degree: cfg.max_degree.unwrap_or(polymat::DEFAULT_MAX_INVERSE_DEGREE),
        irf_source: irf_source.unwrap_or(IrfSource::Theoretical),
        lags: lags.unwrap_or(DEFAULT_LAGS),
        mc,
    };
    let env_threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse().map_err(|_| CliError::Usage(format!("{THREADS_ENV}={v} is not a count")))?),
        Err(_) => None,
    };
    Ok((run, cli.threads.or(cfg.threads).or(env_threads)))
}

/// The family named by `--spec`, or the four-variable design drawn from the seed.
fn family(run: &Run) -> CliResult<(I1FamilySpec, GrangerRep)> {
    match &run.spec {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let spec: I1FamilySpec =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let rep = model::granger_rep(&spec, run.max_degree)?;
            Ok((spec, rep))
        }
        None => Ok(simulate::dgp_to_spec(&simulate::draw_dgp(run.seed))?),
    }
}

fn write(out: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(out)?;
    let path = out.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn execute(run: &Run) -> CliResult<Vec<PathBuf>> {
    match run.command {
        Command::Simulate => {
            let (spec, rep) = family(run)?;
            let dynamics = VarDynamics::from_rep(&rep, &spec.gamma_u)?;
            let path = simulate::simulate_factors(&dynamics, run.t, run.burn_in, run.seed)?;
            Ok(vec![write(&run.out, "path.csv", &path.to_csv())?])
        }
        Command::Granger => {
            let (_, rep) = family(run)?;
            Ok(vec![write(&run.out, "granger.json", &to_json(&rep))?])
        }
        Command::Ptdecomp => {
            let (spec, _) = family(run)?;
            let pt = model::pt_decompose(&spec)?;
            Ok(vec![write(&run.out, "ptdecomp.json", &to_json(&pt))?])
        }
        Command::Irf { .. } => {
            let (spec, rep) = family(run)?;
            let irf = match run.irf_source {
                IrfSource::Theoretical => model::theoretical_irf(&spec, run.horizon)?,
                source => {
                    let dynamics = VarDynamics::from_rep(&rep, &spec.gamma_u)?;
                    let path = simulate::simulate_factors(&dynamics, run.t, run.burn_in, run.seed)?;
                    let fitted = match source {
                        IrfSource::Dvar => Fitted::Var(estimate::ols_var(&path.f, run.lags, VarKind::Differences)?),
                        IrfSource::Lvar => Fitted::Var(estimate::ols_var(&path.f, run.lags, VarKind::Levels)?),
                        _ => Fitted::Vecm(estimate::johansen_vecm(&path.f, run.lags, spec.c, DetSpec::None)?),
                    };
                    let ident = estimate::identify_shocks(fitted.sigma(), spec.q)?;
                    estimate::irf_from_estimate(&fitted, &ident, run.horizon)?
                }
            };
            let name = format!("irf_{}.csv", run.irf_source.label());
            Ok(vec![write(&run.out, &name, &irf.to_csv())?])
        }
        Command::Mc => {
            let table = montecarlo::run_experiment(&run.mc)?;
            Ok(vec![
                write(&run.out, "table1.csv", &table.to_csv())?,
                write(&run.out, "table1.md", &table.to_markdown())?,
            ])
        }
        Command::Verify => {
            let outcomes = verify::run_all(&VerifyOptions { seed: run.seed, ..Default::default() });
            for o in &outcomes {
                println!("{}", o.line());
            }
            let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
            if failed.is_empty() {
                Ok(Vec::new())
            } else {
                Err(CliError::ChecksFailed(failed))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.to_string().trim().to_string())),
    };
    let level = if cli.verbose { LevelFilter::INFO } else { LevelFilter::WARN };
    tracing_subscriber::fmt().with_writer(std::io::stderr).with_max_level(level).init();

    let result = resolve(&cli).and_then(|(run, threads)| {
        if let Some(n) = threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
        }
        execute(&run)
    });
    match result {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    let record = serde_json::json!({ "error": { "kind": e.kind(), "message": e.message() } });
    eprintln!("{record}");
    ExitCode::FAILURE
}
