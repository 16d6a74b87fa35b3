//! The end-to-end pipeline behind `tcs-ising test`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tcs_ising::analysis::{compare_report, export_convergence, CurveKind, RunRecord};
use tcs_ising::bench::{
    load_csv, load_reference_results, resolve_library, DatasetDescriptor, ReferenceResult,
};
use tcs_ising::solver::{SolverParams, SolverResult};
use tcs_ising::{run_solver, Error, ProblemRegistry, SolverRegistry};

use crate::config::{DatasetSource, RunConfig};
use crate::CliError;

pub const RESULTS_FILE: &str = "results.json";
pub const REFERENCES_FILE: &str = "references.json";

/// One element of `results.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultEntry {
    pub solver: String,
    pub problem: String,
    pub dataset: String,
    pub seed: u64,
    pub selected_ids: Vec<String>,
    pub spins: Vec<i8>,
    pub fitness: f64,
    pub energy: f64,
    pub runtime_ms: f64,
    pub params: serde_json::Value,
}

#[derive(Debug)]
pub struct RunOutput {
    pub results_path: PathBuf,
    pub entries: Vec<ResultEntry>,
    /// Every file written, relative to the save path.
    pub files: Vec<PathBuf>,
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Core(Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_dataset(config: &RunConfig) -> Result<(DatasetDescriptor, tcs_ising::TestSuite), CliError> {
    Ok(match &config.dataset {
        DatasetSource::Library(name) => {
            let descriptor = resolve_library(name, &config.data_dirs)?;
            let suite = load_csv(&descriptor.path)?;
            (descriptor, suite)
        }
        DatasetSource::Path(path) => DatasetDescriptor::from_path(path)?,
    })
}

fn load_references(dirs: &[PathBuf]) -> Result<Vec<ReferenceResult>, CliError> {
    for dir in dirs {
        let path = dir.join(REFERENCES_FILE);
        if path.is_file() {
            log::info!("using reference results from {}", path.display());
            return Ok(load_reference_results(&path)?);
        }
    }
    Ok(Vec::new())
}

/// Runs every configured solver for every seed and writes the results,
/// convergence curves and comparison report under the save path.
///
/// All solving happens before anything is written. Files are staged in a
/// temporary directory inside the save path and moved into place only once
/// all of them were written; on failure nothing is left behind, and a save
/// path created by this call is removed again.
pub fn run(
    config: &RunConfig,
    problems: &ProblemRegistry,
    solvers: &SolverRegistry,
) -> Result<RunOutput, CliError> {
    let (descriptor, suite) = load_dataset(config)?;
    let references = load_references(&config.data_dirs)?;
    let problem = problems.build(&config.problem, &config.problem_params, &suite)?;
    let model = problem.ising()?;
    let info = problem.classical_info();
    log::info!(
        "{} on {} ({} tests), {} solver(s) x {} run(s)",
        config.problem,
        descriptor.name,
        suite.len(),
        config.solvers.len(),
        config.runs
    );

    let no_params = SolverParams::new();
    let mut results: Vec<SolverResult> = Vec::new();
    for name in &config.solvers {
        let params = config.solver_params.get(name).unwrap_or(&no_params);
        let instance = solvers.resolve(name)?.build(params)?;
        for seed in config.seed..config.seed + config.runs as u64 {
            let result = run_solver(name, &instance, problem.as_ref(), &model, &suite, seed)?;
            if !info.constraint.is_feasible(&result.selection.mask) {
                log::warn!(
                    "{name} (seed {seed}) returned {} tests, which violates the problem constraint",
                    result.selection.count()
                );
            }
            results.push(result);
        }
    }

    let entries: Vec<ResultEntry> = results
        .iter()
        .map(|r| ResultEntry {
            solver: r.solver.clone(),
            problem: config.problem.clone(),
            dataset: descriptor.name.clone(),
            seed: r.seed,
            selected_ids: r.selection.selected_ids.clone(),
            spins: r.spins.as_slice().to_vec(),
            fitness: r.fitness,
            energy: r.energy,
            runtime_ms: r.runtime_ms,
            params: r.params.clone(),
        })
        .collect();
    let records: Vec<RunRecord> = results
        .iter()
        .map(|r| RunRecord {
            solver: r.solver.clone(),
            strategy: config.problem.clone(),
            dataset: descriptor.name.clone(),
            seed: r.seed,
            fitness: r.fitness,
            energy: r.energy,
            selection: r.selection.clone(),
            runtime_ms: r.runtime_ms,
            traces: None,
        })
        .collect();

    let save = &config.save_path;
    let created = !save.exists();
    std::fs::create_dir_all(save).map_err(|e| io_err(save, e))?;
    let staged = tempfile::Builder::new()
        .prefix(".tcs-ising-staging-")
        .tempdir_in(save)
        .map_err(|e| io_err(save, e));
    let outcome = staged.and_then(|staging| {
        let files = write_outputs(
            staging.path(),
            config,
            &entries,
            &results,
            &records,
            &references,
        )?;
        commit(staging.path(), save)?;
        Ok(files)
    });
    match outcome {
        Ok(files) => Ok(RunOutput {
            results_path: save.join(RESULTS_FILE),
            entries,
            files,
        }),
        Err(e) => {
            if created {
                let _ = std::fs::remove_dir_all(save);
            }
            Err(e)
        }
    }
}

fn write_outputs(
    dir: &Path,
    config: &RunConfig,
    entries: &[ResultEntry],
    results: &[SolverResult],
    records: &[RunRecord],
    references: &[ReferenceResult],
) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    let results_path = dir.join(RESULTS_FILE);
    let json = serde_json::to_string_pretty(entries).expect("results serialize");
    std::fs::write(&results_path, json + "\n").map_err(|e| io_err(&results_path, e))?;
    written.push(results_path);

    for r in results {
        let out = dir
            .join("convergence")
            .join(format!("{}_seed{}", r.solver, r.seed));
        for &kind in &config.convergence_curves {
            if kind == CurveKind::SpinsAmplitude && r.traces.iter().all(|t| t.amplitudes.is_none())
            {
                log::debug!("{} has no amplitudes; {kind} skipped", r.solver);
                continue;
            }
            written.extend(export_convergence(&r.traces, kind, &out)?);
        }
    }

    let (_, report_files) = compare_report(records, references, dir)?;
    written.extend(report_files);
    Ok(written
        .into_iter()
        .map(|p| p.strip_prefix(dir).map(Path::to_path_buf).unwrap_or(p))
        .collect())
}

/// Moves the staged top-level entries into `save`, replacing older ones.
fn commit(staging: &Path, save: &Path) -> Result<(), CliError> {
    let entries = std::fs::read_dir(staging).map_err(|e| io_err(staging, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| io_err(staging, e))?;
        let dest = save.join(entry.file_name());
        if dest.is_dir() {
            std::fs::remove_dir_all(&dest).map_err(|e| io_err(&dest, e))?;
        } else if dest.exists() {
            std::fs::remove_file(&dest).map_err(|e| io_err(&dest, e))?;
        }
        std::fs::rename(entry.path(), &dest).map_err(|e| io_err(&dest, e))?;
    }
    Ok(())
}
