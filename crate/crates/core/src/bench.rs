//! Benchmark inputs: CSV test-suite datasets and JSON reference results.
//!
//! Dataset grammar (UTF-8, comma separated):
//!
//! ```text
//! ,time,rate
//! 0,39050.0,0.13383838383838384
//! 1,1000.0,0.09620253164556962
//! ```
//!
//! The first header cell is empty; the remaining header cells name the
//! attributes. Every row holds an id followed by one non-negative real per
//! attribute.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::{TestCase, TestSuite};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetDescriptor {
    pub name: String,
    pub path: PathBuf,
    pub attribute_names: Vec<String>,
}

impl DatasetDescriptor {
    /// Loads the file at `path`, naming the dataset after the file stem.
    pub fn from_path(path: &Path) -> Result<(Self, TestSuite)> {
        let suite = load_csv(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok((
            Self {
                name,
                path: path.to_path_buf(),
                attribute_names: suite.attribute_names().to_vec(),
            },
            suite,
        ))
    }
}

fn csv_err(path: &Path, row: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        row,
        column,
        message: message.into(),
    }
}

/// Parses a dataset CSV. Rows and columns in errors are 1-based, with the
/// header on row 1.
pub fn load_csv(path: &Path) -> Result<TestSuite> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(file);
    let mut records = reader.records();

    let header = match records.next() {
        None => return Err(csv_err(path, 1, 1, "empty file")),
        Some(r) => r.map_err(|e| csv_err(path, 1, 1, e.to_string()))?,
    };
    if header.get(0).map(str::trim) != Some("") {
        return Err(csv_err(
            path,
            1,
            1,
            "first header cell must be empty (id column)",
        ));
    }
    if header.len() < 2 {
        return Err(csv_err(path, 1, 2, "header names no attributes"));
    }
    let mut names: Vec<String> = Vec::with_capacity(header.len() - 1);
    for (c, cell) in header.iter().enumerate().skip(1) {
        let name = cell.trim();
        if name.is_empty() {
            return Err(csv_err(path, 1, c + 1, "empty attribute name"));
        }
        if names.iter().any(|n| n == name) {
            return Err(csv_err(
                path,
                1,
                c + 1,
                format!("duplicate attribute `{name}`"),
            ));
        }
        names.push(name.to_string());
    }

    let mut cases = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, record) in records.enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| csv_err(path, row, 1, e.to_string()))?;
        if record.len() == 1 && record.get(0).map(str::trim) == Some("") {
            continue; // blank line
        }
        if record.len() != names.len() + 1 {
            return Err(csv_err(
                path,
                row,
                // first missing or first surplus cell
                record.len().min(names.len() + 1) + 1,
                format!("expected {} cells, found {}", names.len() + 1, record.len()),
            ));
        }
        let id = record[0].trim().to_string();
        if id.is_empty() {
            return Err(csv_err(path, row, 1, "empty test id"));
        }
        if !seen.insert(id.clone()) {
            return Err(csv_err(path, row, 1, format!("duplicate test id `{id}`")));
        }
        let mut values = Vec::with_capacity(names.len());
        for (c, cell) in record.iter().enumerate().skip(1) {
            let v: f64 = cell
                .trim()
                .parse()
                .map_err(|_| csv_err(path, row, c + 1, format!("`{cell}` is not a number")))?;
            if !v.is_finite() {
                return Err(csv_err(path, row, c + 1, "value is not finite"));
            }
            if v < 0.0 {
                return Err(csv_err(path, row, c + 1, format!("negative value {v}")));
            }
            values.push(v);
        }
        cases.push(TestCase { id, values });
    }
    if cases.is_empty() {
        return Err(csv_err(path, 2, 1, "dataset contains no test cases"));
    }
    TestSuite::new(names, cases).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Writes a suite in the dataset grammar with round-trip float formatting.
pub fn write_csv(suite: &TestSuite, path: &Path) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    let mut line = String::new();
    for name in suite.attribute_names() {
        line.push(',');
        line.push_str(name);
    }
    writeln!(w, "{line}").map_err(io)?;
    for case in suite.cases() {
        line.clear();
        line.push_str(&case.id);
        for v in &case.values {
            line.push(',');
            line.push_str(&v.to_string());
        }
        writeln!(w, "{line}").map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Finds `<dir>/<name>.csv` in the first search directory that has it.
pub fn resolve_library<P: AsRef<Path>>(name: &str, search_dirs: &[P]) -> Result<DatasetDescriptor> {
    let mut searched = Vec::with_capacity(search_dirs.len());
    for dir in search_dirs {
        let candidate = dir.as_ref().join(format!("{name}.csv"));
        if candidate.is_file() {
            let suite = load_csv(&candidate)?;
            return Ok(DatasetDescriptor {
                name: name.to_string(),
                path: candidate,
                attribute_names: suite.attribute_names().to_vec(),
            });
        }
        searched.push(candidate);
    }
    Err(Error::DatasetNotFound {
        name: name.to_string(),
        searched,
    })
}

/// Published fitness samples for one method on one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceResult {
    pub dataset: String,
    pub method: String,
    pub fitness_samples: Vec<f64>,
    pub source: String,
}

pub fn load_reference_results(path: &Path) -> Result<Vec<ReferenceResult>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_reference_results(&text, path)
}

pub fn parse_reference_results(text: &str, path: &Path) -> Result<Vec<ReferenceResult>> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let refs: Vec<ReferenceResult> = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = json_pointer(e.path());
        Error::Schema {
            path: path.to_path_buf(),
            pointer,
            message: e.into_inner().to_string(),
        }
    })?;
    for (i, r) in refs.iter().enumerate() {
        if r.fitness_samples.is_empty() {
            return Err(Error::Schema {
                path: path.to_path_buf(),
                pointer: format!("/{i}/fitness_samples"),
                message: "must contain at least one sample".into(),
            });
        }
        if let Some(k) = r.fitness_samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Schema {
                path: path.to_path_buf(),
                pointer: format!("/{i}/fitness_samples/{k}"),
                message: "sample is not finite".into(),
            });
        }
    }
    Ok(refs)
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}
