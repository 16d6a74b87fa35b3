//! Convergence-curve export, run statistics and comparison reports.

mod svg;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bench::ReferenceResult;
use crate::error::{Error, Result};
use crate::ising::Selection;
use crate::solver::Trace;

/// Five-number summary of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub count: usize,
}

/// Quartiles use linear interpolation at position `p·(n−1)` of the sorted
/// sample.
pub fn box_stats(samples: &[f64]) -> Result<BoxStats> {
    if samples.is_empty() {
        return Err(Error::EmptySample(
            "box statistics need at least one value".into(),
        ));
    }
    if let Some(v) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter {
            key: "samples".into(),
            reason: format!("non-finite value {v}"),
        });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let pos = p * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        if lo == hi {
            sorted[lo]
        } else {
            sorted[lo] + frac * (sorted[hi] - sorted[lo])
        }
    };
    Ok(BoxStats {
        min: sorted[0],
        q1: q(0.25),
        median: q(0.5),
        q3: q(0.75),
        max: sorted[sorted.len() - 1],
        count: sorted.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    SpinsAmplitude,
    FitnessValue,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::SpinsAmplitude => "spins_amplitude",
            CurveKind::FitnessValue => "fitness_value",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "spins_amplitude" => Ok(CurveKind::SpinsAmplitude),
            "fitness_value" => Ok(CurveKind::FitnessValue),
            other => Err(Error::UnknownName {
                what: "convergence curve kind",
                name: other.to_string(),
                available: vec!["fitness_value".into(), "spins_amplitude".into()],
            }),
        }
    }
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes one CSV and one SVG per trace and returns the paths written.
///
/// Traces without amplitudes are skipped for [`CurveKind::SpinsAmplitude`].
/// `{:?}` formatting of `f64` round-trips exactly, so reloading the CSV gives
/// back the in-memory values.
pub fn export_convergence(
    traces: &[Trace],
    kind: CurveKind,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    if traces.is_empty() {
        log::warn!("no traces to export for {kind}");
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    for trace in traces {
        let stem = format!("convergence_{}_batch{}", kind.name(), trace.batch);
        let (csv, series, y_label) = match kind {
            CurveKind::SpinsAmplitude => {
                let Some(amps) = &trace.amplitudes else {
                    log::warn!("batch {} has no amplitude trace; skipped", trace.batch);
                    continue;
                };
                let n = amps.first().map_or(0, Vec::len);
                let mut csv = String::from("step");
                for i in 0..n {
                    let _ = write!(csv, ",spin_{i}");
                }
                csv.push('\n');
                for (step, row) in amps.iter().enumerate() {
                    let _ = write!(csv, "{step}");
                    for v in row {
                        let _ = write!(csv, ",{v:?}");
                    }
                    csv.push('\n');
                }
                let series = (0..n)
                    .map(|i| (format!("spin_{i}"), amps.iter().map(|r| r[i]).collect()))
                    .collect::<Vec<_>>();
                (csv, series, "amplitude")
            }
            CurveKind::FitnessValue => {
                let mut csv = String::from("step,fitness,fitness_raw\n");
                for (step, (best, raw)) in trace
                    .fitness_best
                    .iter()
                    .zip(&trace.fitness_raw)
                    .enumerate()
                {
                    let _ = writeln!(csv, "{step},{best:?},{raw:?}");
                }
                let series = vec![
                    ("fitness".to_string(), trace.fitness_best.clone()),
                    ("fitness_raw".to_string(), trace.fitness_raw.clone()),
                ];
                (csv, series, "fitness")
            }
        };
        let csv_path = out_dir.join(format!("{stem}.csv"));
        write_file(&csv_path, &csv)?;
        let svg_path = out_dir.join(format!("{stem}.svg"));
        let title = format!("{} (batch {})", kind.name(), trace.batch);
        write_file(
            &svg_path,
            &svg::line_chart(&title, "step", y_label, &series),
        )?;
        written.push(csv_path);
        written.push(svg_path);
    }
    Ok(written)
}

/// Outcome of one solver run, as consumed by [`compare_report`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub solver: String,
    pub strategy: String,
    pub dataset: String,
    pub seed: u64,
    pub fitness: f64,
    pub energy: f64,
    pub selection: Selection,
    pub runtime_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traces: Option<Vec<Trace>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub external: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub datasets: Vec<String>,
    pub stats: BoxStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub methods: Vec<MethodSummary>,
    pub warnings: Vec<String>,
}

/// Summarizes fitness per solver and per matching reference method.
///
/// Solver methods come first in order of first appearance. A reference is
/// used only if its dataset appears among the records; otherwise it is
/// skipped and a warning is recorded.
pub fn summarize(
    records: &[RunRecord],
    references: &[ReferenceResult],
) -> Result<ComparisonReport> {
    if records.is_empty() {
        return Err(Error::EmptySample(
            "comparison needs at least one run record".into(),
        ));
    }
    if let Some(r) = records.iter().find(|r| !r.fitness.is_finite()) {
        return Err(Error::Evaluation(format!(
            "{} seed {} has non-finite fitness {}",
            r.solver, r.seed, r.fitness
        )));
    }
    let mut order: Vec<&str> = Vec::new();
    let mut by_solver: BTreeMap<&str, (Vec<f64>, Vec<String>)> = BTreeMap::new();
    for r in records {
        let entry = by_solver.entry(&r.solver).or_insert_with(|| {
            order.push(&r.solver);
            (Vec::new(), Vec::new())
        });
        entry.0.push(r.fitness);
        if !entry.1.contains(&r.dataset) {
            entry.1.push(r.dataset.clone());
        }
    }
    let mut methods = Vec::new();
    for name in order {
        let (samples, datasets) = &by_solver[name];
        methods.push(MethodSummary {
            method: name.to_string(),
            external: false,
            source: None,
            datasets: datasets.clone(),
            stats: box_stats(samples)?,
        });
    }
    let mut warnings = Vec::new();
    for reference in references {
        if !records.iter().any(|r| r.dataset == reference.dataset) {
            warnings.push(format!(
                "reference `{}` skipped: dataset `{}` does not match any run",
                reference.method, reference.dataset
            ));
            continue;
        }
        methods.push(MethodSummary {
            method: reference.method.clone(),
            external: true,
            source: Some(reference.source.clone()),
            datasets: vec![reference.dataset.clone()],
            stats: box_stats(&reference.fitness_samples)?,
        });
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(ComparisonReport { methods, warnings })
}

/// Writes `comparison.json` and `comparison.svg` to `out_dir`.
pub fn compare_report(
    records: &[RunRecord],
    references: &[ReferenceResult],
    out_dir: &Path,
) -> Result<(ComparisonReport, Vec<PathBuf>)> {
    let report = summarize(records, references)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let json_path = out_dir.join("comparison.json");
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_file(&json_path, &(json + "\n"))?;
    let boxes: Vec<_> = report
        .methods
        .iter()
        .map(|m| svg::BoxSeries {
            label: &m.method,
            external: m.external,
            min: m.stats.min,
            q1: m.stats.q1,
            median: m.stats.median,
            q3: m.stats.q3,
            max: m.stats.max,
        })
        .collect();
    let svg_path = out_dir.join("comparison.svg");
    write_file(
        &svg_path,
        &svg::box_chart("fitness by method", "fitness", &boxes),
    )?;
    Ok((report, vec![json_path, svg_path]))
}
