//! Command-line front end: `list`, `run` and `fom`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use gnowee::benchmarks;
use gnowee::definition::ProblemDefinition;
use gnowee::engine::{GnoweeSettings, InitScheme};
use gnowee::harness::{self, compute_fom, print_summary, write_report};
use gnowee::problem::Problem;
use gnowee::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gnowee", version, about = "Gnowee hybrid metaheuristic optimizer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List registered benchmark problems.
    List,
    /// Run a multi-trial campaign and write CSV reports.
    Run(RunArgs),
    /// Recompute the figure of merit for every row of a summary CSV.
    Fom {
        /// Path to a summary.csv written by `run`.
        summary: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Init {
    Lhc,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// Campaign config file (TOML). Flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Registered benchmark name (see `gnowee list`).
    #[arg(long, conflicts_with = "problem_file")]
    pub problem: Option<String>,
    /// Problem-definition file (TOML).
    #[arg(long)]
    pub problem_file: Option<PathBuf>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory for the CSV reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Concurrent trials (default: one per processor).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub max_evals: Option<u64>,
    #[arg(long)]
    pub stall_evals: Option<u64>,
    #[arg(long)]
    pub stall_tol: Option<f64>,
    #[arg(long)]
    pub fitness_tol: Option<f64>,
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub f_levy: Option<f64>,
    #[arg(long)]
    pub f_elite: Option<f64>,
    #[arg(long)]
    pub f_mh: Option<f64>,
    #[arg(long)]
    pub f_mutation: Option<f64>,
    #[arg(long, value_enum)]
    pub init: Option<Init>,
    #[arg(long, value_enum)]
    pub tsp_distance_bias: Option<Switch>,
}

/// Campaign config file. `seed` here takes precedence over `settings.seed`.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub problem: Option<String>,
    pub problem_file: Option<PathBuf>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    #[serde(default)]
    pub settings: GnoweeSettings,
}

impl CampaignConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config { path: path.to_path_buf(), message: e.to_string() })?;
        let mut config: Self =
            toml::from_str(&text).map_err(|e| Error::Config { path: path.to_path_buf(), message: e.to_string() })?;
        // Relative paths inside the config are relative to the config file.
        if let (Some(dir), Some(file)) = (path.parent(), config.problem_file.as_mut()) {
            if file.is_relative() {
                *file = dir.join(&*file);
            }
        }
        Ok(config)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Registered(String),
    File(PathBuf),
}

/// Fully resolved `run` invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub problem: ProblemSource,
    pub trials: usize,
    pub out: PathBuf,
    pub jobs: Option<usize>,
    pub settings: GnoweeSettings,
}

pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_OUT: &str = "results";

/// Defaults, then the config file, then flags.
pub fn resolve(config: CampaignConfig, args: &RunArgs) -> Result<Campaign, Error> {
    let problem = match (&args.problem, &args.problem_file) {
        (Some(name), _) => ProblemSource::Registered(name.clone()),
        (None, Some(file)) => ProblemSource::File(file.clone()),
        (None, None) => match (config.problem, config.problem_file) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidSettings("config sets both `problem` and `problem_file`".into()))
            }
            (Some(name), None) => ProblemSource::Registered(name),
            (None, Some(file)) => ProblemSource::File(file),
            (None, None) => {
                return Err(Error::InvalidSettings("no problem given (use --problem or --problem-file)".into()))
            }
        },
    };
    let mut s = config.settings;
    if let Some(seed) = config.seed {
        s.seed = seed;
    }
    macro_rules! apply {
        ($($flag:ident => $($field:ident).+),* $(,)?) => {
            $(if let Some(v) = args.$flag { s.$($field).+ = v; })*
        };
    }
    apply!(
        seed => seed,
        max_evals => criteria.max_evals,
        stall_evals => criteria.stall_evals,
        stall_tol => criteria.stall_tol,
        fitness_tol => criteria.fitness_rel_tol,
        population => population,
        alpha => levy.alpha,
        gamma => levy.gamma,
        beta => fractions.beta,
        f_levy => fractions.f_levy,
        f_elite => fractions.f_elite,
        f_mh => fractions.f_mh,
        f_mutation => fractions.f_mutation,
    );
    if let Some(init) = args.init {
        s.init = match init {
            Init::Lhc => InitScheme::Lhc,
            Init::Uniform => InitScheme::Uniform,
        };
    }
    if let Some(bias) = args.tsp_distance_bias {
        s.tsp_distance_bias = bias == Switch::On;
    }
    s.validate()?;
    let trials = args.trials.or(config.trials).unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(Error::InvalidSettings("trials must be at least 1".into()));
    }
    let jobs = args.jobs.or(config.jobs);
    if jobs == Some(0) {
        return Err(Error::InvalidSettings("jobs must be at least 1".into()));
    }
    Ok(Campaign {
        problem,
        trials,
        out: args.out.clone().or(config.out).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
        jobs,
        settings: s,
    })
}

fn load_problem(source: &ProblemSource) -> Result<Problem, Error> {
    match source {
        ProblemSource::Registered(name) => benchmarks::load(name),
        ProblemSource::File(path) => ProblemDefinition::load(path),
    }
}

/// Usage and configuration problems exit with 2, everything else with 1.
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. }
        | Error::InvalidSettings(_)
        | Error::UnknownProblem(_)
        | Error::NotImplemented(_)
        | Error::InvalidVariable { .. }
        | Error::InvalidSpace(_)
        | Error::AlphaDomain(_)
        | Error::LevyParams(_) => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

pub fn cmd_list<W: Write>(out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{:<22} {:<32} {:>9} {:>14}", "name", "variables", "dimension", "known_optimum")?;
    for row in benchmarks::listing() {
        if !row.implemented {
            writeln!(out, "{} (not implemented)", row.name)?;
            continue;
        }
        let dim = row.dimension.map(|d| d.to_string()).unwrap_or_else(|| "?".into());
        let opt = row.known_optimum.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        let note = if row.unavailable.is_some() { format!("  (needs {})", benchmarks::DATA_DIR_ENV) } else { String::new() };
        writeln!(out, "{:<22} {:<32} {:>9} {:>14}{note}", row.name, row.kinds, dim, opt)?;
    }
    Ok(())
}

pub fn cmd_run<W: Write>(campaign: &Campaign, out: &mut W) -> Result<(), Error> {
    let problem = load_problem(&campaign.problem)?;
    let result = harness::run_trials(&problem, &campaign.settings, campaign.trials, campaign.jobs)?;
    write_report(std::slice::from_ref(&result.stats), &result.records, &campaign.out)?;
    print_summary(out, &result.stats)?;
    writeln!(out, "reports written to {}", campaign.out.display())?;
    Ok(())
}

pub fn cmd_fom<W: Write>(path: &Path, out: &mut W) -> Result<(), Error> {
    let text = std::fs::read_to_string(path)?;
    for row in harness::read_summary(&text)? {
        let f_opt = match row.f_opt {
            Some(v) => Some(v),
            None => benchmarks::known_optimum(&row.name).ok().flatten(),
        };
        match f_opt {
            Some(opt) => writeln!(out, "{}\t{}", row.name, compute_fom(row.f_avg, opt, row.n_avg, row.n_sigma))?,
            None => writeln!(out, "{}\t-", row.name)?,
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::List => cmd_list(out).map_err(Error::from),
        Command::Fom { summary } => cmd_fom(&summary, out),
        Command::Run(args) => args
            .config
            .as_deref()
            .map(CampaignConfig::load)
            .unwrap_or_else(|| Ok(CampaignConfig::default()))
            .and_then(|config| resolve(config, &args))
            .and_then(|campaign| cmd_run(&campaign, out)),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
