//! Command-line flags, the YAML config file and their merge into a
//! [`RunConfig`].

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;
use tcs_ising::analysis::CurveKind;
use tcs_ising::encoding::ParamValue;
use tcs_ising::solver::SolverParams;
use tcs_ising::{ProblemParams, ProblemRegistry, SolverRegistry};

use crate::CliError;

pub const DEFAULT_SAVE_PATH: &str = "./results";
pub const DEFAULT_DATA_DIR: &str = "./datasets";

#[derive(Debug, Parser)]
#[command(
    name = "tcs-ising",
    version,
    about = "Ising-based test-case selection and minimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode a test suite, solve it with one or more solvers and write the results.
    Test(TestArgs),
}

#[derive(Debug, Default, clap::Args)]
struct TestArgs {
    /// Problem (optimization strategy) name, e.g. WAOr.
    #[arg(long)]
    problem: Option<String>,
    /// Dataset name, looked up as <name>.csv in the data directories.
    #[arg(long, conflicts_with = "dataset")]
    library: Option<String>,
    /// Explicit dataset CSV path.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Problem parameters as key=value, e.g. effectiveness=['rate'].
    #[arg(long = "problem-param", num_args = 1.., value_name = "K=V")]
    problem_params: Vec<String>,
    /// Solver name; repeat to run several.
    #[arg(long = "solver", value_name = "NAME")]
    solvers: Vec<String>,
    /// Solver parameter override as <solver>.<key>=<value>.
    #[arg(long = "solver-param", value_name = "S.K=V")]
    solver_params: Vec<String>,
    #[arg(long = "save-path")]
    save_path: Option<PathBuf>,
    /// Convergence curves to export: spins_amplitude, fitness_value.
    #[arg(long = "convergence-curve", num_args = 1.., value_name = "KIND")]
    convergence_curves: Vec<String>,
    /// YAML config file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of seeds per solver (seed, seed+1, ...).
    #[arg(long)]
    runs: Option<usize>,
    /// Directory searched for library datasets; repeatable.
    #[arg(long = "data-dir")]
    data_dirs: Vec<PathBuf>,
}

/// Scalar YAML values are kept as text so they parse exactly like flags.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum YamlValue {
    List(Vec<serde_yaml::Value>),
    Scalar(serde_yaml::Value),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct YamlConfig {
    problem: Option<String>,
    library: Option<String>,
    dataset: Option<PathBuf>,
    #[serde(default)]
    problem_params: BTreeMap<String, YamlValue>,
    #[serde(default)]
    solvers: Vec<String>,
    #[serde(default)]
    solver_params: BTreeMap<String, BTreeMap<String, serde_yaml::Value>>,
    save_path: Option<PathBuf>,
    #[serde(default)]
    convergence_curves: Vec<String>,
    seed: Option<u64>,
    runs: Option<usize>,
    #[serde(default)]
    data_dirs: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    Library(String),
    Path(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub dataset: DatasetSource,
    pub problem_params: ProblemParams,
    pub solvers: Vec<String>,
    pub solver_params: BTreeMap<String, SolverParams>,
    pub save_path: PathBuf,
    pub convergence_curves: Vec<CurveKind>,
    pub seed: u64,
    pub runs: usize,
    /// Searched in order for library datasets and `references.json`.
    pub data_dirs: Vec<PathBuf>,
}

fn yaml_scalar(key: &str, v: &serde_yaml::Value) -> Result<String, CliError> {
    match v {
        serde_yaml::Value::String(s) => Ok(s.clone()),
        serde_yaml::Value::Bool(b) => Ok(b.to_string()),
        serde_yaml::Value::Number(n) => Ok(n.to_string()),
        _ => Err(CliError::Usage(format!(
            "config key `{key}`: expected a scalar value"
        ))),
    }
}

fn load_yaml(path: &Path) -> Result<YamlConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    if text.trim().is_empty() {
        return Ok(YamlConfig::default());
    }
    serde_yaml::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

fn split_solver_param(token: &str) -> Result<(String, String, String), CliError> {
    let bad = || {
        CliError::Usage(format!(
            "invalid --solver-param `{token}`; expected <solver>.<key>=<value>"
        ))
    };
    let (lhs, value) = token.split_once('=').ok_or_else(bad)?;
    let (solver, key) = lhs.split_once('.').ok_or_else(bad)?;
    if solver.is_empty() || key.is_empty() {
        return Err(bad());
    }
    Ok((solver.to_string(), key.to_string(), value.to_string()))
}

/// Parses `argv` (program name first) into a validated [`RunConfig`].
///
/// Problem and solver names are checked against the given registries.
pub fn parse_args<I, T>(
    argv: I,
    problems: &ProblemRegistry,
    solvers: &SolverRegistry,
) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let Command::Test(args) = Cli::try_parse_from(argv)?.command;
    let yaml = match &args.config {
        Some(path) => load_yaml(path)?,
        None => YamlConfig::default(),
    };
    merge(args, yaml, problems, solvers)
}

fn merge(
    args: TestArgs,
    yaml: YamlConfig,
    problems: &ProblemRegistry,
    solvers: &SolverRegistry,
) -> Result<RunConfig, CliError> {
    let problem = args
        .problem
        .or(yaml.problem)
        .ok_or_else(|| CliError::Usage("missing --problem".into()))?;
    problems.resolve(&problem)?;

    let dataset = match (args.library, args.dataset) {
        (Some(l), _) => DatasetSource::Library(l),
        (None, Some(p)) => DatasetSource::Path(p),
        (None, None) => match (yaml.library, yaml.dataset) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "config sets both `library` and `dataset`".into(),
                ))
            }
            (Some(l), None) => DatasetSource::Library(l),
            (None, Some(p)) => DatasetSource::Path(p),
            (None, None) => return Err(CliError::Usage("missing --library or --dataset".into())),
        },
    };

    let mut problem_params = ProblemParams::new();
    for (key, value) in &yaml.problem_params {
        let value = match value {
            YamlValue::List(items) => ParamValue::List(
                items
                    .iter()
                    .map(|v| yaml_scalar(key, v))
                    .collect::<Result<_, _>>()?,
            ),
            YamlValue::Scalar(v) => ParamValue::parse(&yaml_scalar(key, v)?)?,
        };
        problem_params.insert(key, value);
    }
    for token in &args.problem_params {
        problem_params.insert_pair(token)?;
    }

    let solver_names = if args.solvers.is_empty() {
        yaml.solvers
    } else {
        args.solvers
    };
    if solver_names.is_empty() {
        return Err(CliError::Usage("at least one --solver is required".into()));
    }
    for name in &solver_names {
        solvers.resolve(name)?;
    }

    let mut solver_params: BTreeMap<String, SolverParams> = BTreeMap::new();
    for (solver, map) in &yaml.solver_params {
        for (key, value) in map {
            solver_params
                .entry(solver.clone())
                .or_default()
                .insert(key.clone(), yaml_scalar(&format!("{solver}.{key}"), value)?);
        }
    }
    for token in &args.solver_params {
        let (solver, key, value) = split_solver_param(token)?;
        solver_params.entry(solver).or_default().insert(key, value);
    }
    for solver in solver_params.keys() {
        solvers.resolve(solver)?;
        if !solver_names.contains(solver) {
            log::warn!("parameters given for `{solver}`, which is not run");
        }
    }

    let curve_names = if args.convergence_curves.is_empty() {
        yaml.convergence_curves
    } else {
        args.convergence_curves
    };
    let mut convergence_curves = Vec::new();
    for name in &curve_names {
        let kind = CurveKind::parse(name)?;
        if !convergence_curves.contains(&kind) {
            convergence_curves.push(kind);
        }
    }

    let runs = args.runs.or(yaml.runs).unwrap_or(1);
    if runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }

    let mut data_dirs = if args.data_dirs.is_empty() {
        yaml.data_dirs
    } else {
        args.data_dirs
    };
    data_dirs.push(PathBuf::from(DEFAULT_DATA_DIR));

    Ok(RunConfig {
        problem,
        dataset,
        problem_params,
        solvers: solver_names,
        solver_params,
        save_path: args
            .save_path
            .or(yaml.save_path)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_SAVE_PATH)),
        convergence_curves,
        seed: args.seed.or(yaml.seed).unwrap_or(0),
        runs,
        data_dirs,
    })
}
