//! Shared domain types: test suites, spin configurations, Ising models and
//! decoded selections.
//!
//! Spin convention throughout the crate: `-1` means the test case is
//! selected, `+1` means it is left out.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One test case with its attribute values, aligned with
/// [`TestSuite::attribute_names`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestCase {
    pub id: String,
    pub values: Vec<f64>,
}

/// An ordered collection of test cases sharing one attribute schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSuite {
    attribute_names: Vec<String>,
    cases: Vec<TestCase>,
}

impl TestSuite {
    pub fn new(attribute_names: Vec<String>, cases: Vec<TestCase>) -> Result<Self> {
        if cases.is_empty() {
            return Err(Error::InvalidSuite("suite has no test cases".into()));
        }
        let mut names = HashSet::new();
        for name in &attribute_names {
            if !names.insert(name.as_str()) {
                return Err(Error::InvalidSuite(format!("duplicate attribute `{name}`")));
            }
        }
        let mut ids = HashSet::new();
        for case in &cases {
            if !ids.insert(case.id.as_str()) {
                return Err(Error::InvalidSuite(format!(
                    "duplicate test id `{}`",
                    case.id
                )));
            }
            if case.values.len() != attribute_names.len() {
                return Err(Error::InvalidSuite(format!(
                    "test `{}` has {} attributes, expected {}",
                    case.id,
                    case.values.len(),
                    attribute_names.len()
                )));
            }
            for (name, &v) in attribute_names.iter().zip(&case.values) {
                if !v.is_finite() {
                    return Err(Error::InvalidSuite(format!(
                        "test `{}` attribute `{name}` is not finite",
                        case.id
                    )));
                }
                if v < 0.0 {
                    return Err(Error::InvalidSuite(format!(
                        "test `{}` attribute `{name}` is negative ({v})",
                        case.id
                    )));
                }
            }
        }
        Ok(Self {
            attribute_names,
            cases,
        })
    }

    /// Builds a suite with ids `"0"`, `"1"`, ... from attribute columns.
    pub fn from_columns(columns: &[(&str, &[f64])]) -> Result<Self> {
        let n = columns.first().map_or(0, |(_, c)| c.len());
        if columns.iter().any(|(_, c)| c.len() != n) {
            return Err(Error::InvalidSuite("columns differ in length".into()));
        }
        let names = columns.iter().map(|(name, _)| name.to_string()).collect();
        let cases = (0..n)
            .map(|i| TestCase {
                id: i.to_string(),
                values: columns.iter().map(|(_, c)| c[i]).collect(),
            })
            .collect();
        Self::new(names, cases)
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn cases(&self) -> &[TestCase] {
        &self.cases
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attribute_names.iter().position(|a| a == name)
    }

    /// All values of one attribute in suite order.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let k = self
            .attribute_index(name)
            .ok_or_else(|| Error::MissingAttribute(name.to_string()))?;
        Ok(self.cases.iter().map(|c| c.values[k]).collect())
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.cases.iter().map(|c| c.id.as_str())
    }
}

/// A vector of ±1 spins.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some((index, &v)) = spins.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
            return Err(Error::InvalidSpin {
                index,
                value: v as i64,
            });
        }
        Ok(Self(spins))
    }

    /// All spins `+1` (nothing selected).
    pub fn unselected(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Decodes bit `n-1-i` of `rank` as spin `i`, so ranks enumerate
    /// configurations lexicographically with `-1 < +1`.
    pub fn from_rank(rank: u64, n: usize) -> Self {
        Self(
            (0..n)
                .map(|i| {
                    if (rank >> (n - 1 - i)) & 1 == 1 {
                        1
                    } else {
                        -1
                    }
                })
                .collect(),
        )
    }

    /// Sign readout: negative values map to `-1`, zero and positive to `+1`.
    pub fn from_signs(values: &[f64]) -> Self {
        Self(
            values
                .iter()
                .map(|&v| if v < 0.0 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn count_selected(&self) -> usize {
        self.0.iter().filter(|&&s| s == -1).count()
    }

    /// Selection mask, `true` where the spin is `-1`.
    pub fn to_mask(&self) -> Vec<bool> {
        self.0.iter().map(|&s| s == -1).collect()
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        Self(mask.iter().map(|&m| if m { -1 } else { 1 }).collect())
    }
}

impl TryFrom<Vec<i8>> for SpinConfig {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SpinConfig> for Vec<i8> {
    fn from(s: SpinConfig) -> Self {
        s.0
    }
}

/// Ising model `E(s) = -Σ h_i s_i - ½ Σ_{i≠j} J_ij s_i s_j` plus a constant
/// offset.
///
/// `J` is dense, symmetric, with a zero diagonal. The offset is excluded
/// from [`IsingModel::energy`] and included in [`IsingModel::total_energy`];
/// encoders choose it so `total_energy` reproduces the source fitness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingModel {
    h: Vec<f64>,
    j: Vec<f64>,
    offset: f64,
}

impl IsingModel {
    /// `j` is row-major `n × n`.
    pub fn new(h: Vec<f64>, j: Vec<f64>, offset: f64) -> Result<Self> {
        let n = h.len();
        if j.len() != n * n {
            return Err(Error::Sizing {
                expected: n * n,
                got: j.len(),
            });
        }
        if !offset.is_finite() || h.iter().chain(&j).any(|v| !v.is_finite()) {
            return Err(Error::InvalidModel("non-finite coefficient".into()));
        }
        for a in 0..n {
            if j[a * n + a] != 0.0 {
                return Err(Error::InvalidModel(format!("J[{a}][{a}] is nonzero")));
            }
            for b in (a + 1)..n {
                if j[a * n + b] != j[b * n + a] {
                    return Err(Error::InvalidModel(format!("J[{a}][{b}] != J[{b}][{a}]")));
                }
            }
        }
        Ok(Self { h, j, offset })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            h: vec![0.0; n],
            j: vec![0.0; n * n],
            offset: 0.0,
        }
    }

    /// Sets `J[a][b]` and `J[b][a]` together.
    pub fn set_coupling(&mut self, a: usize, b: usize, value: f64) {
        assert_ne!(a, b, "self-coupling is not representable");
        let n = self.n();
        self.j[a * n + b] = value;
        self.j[b * n + a] = value;
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn j_matrix(&self) -> &[f64] {
        &self.j
    }

    pub fn j_row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.j[i * n..(i + 1) * n]
    }

    pub fn coupling(&self, a: usize, b: usize) -> f64 {
        self.j[a * self.n() + b]
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn check(&self, s: &SpinConfig) -> Result<()> {
        if s.len() != self.n() {
            return Err(Error::Sizing {
                expected: self.n(),
                got: s.len(),
            });
        }
        Ok(())
    }

    /// Energy without the offset.
    pub fn energy(&self, s: &SpinConfig) -> Result<f64> {
        self.check(s)?;
        Ok(self.energy_unchecked(s.as_slice()))
    }

    pub fn total_energy(&self, s: &SpinConfig) -> Result<f64> {
        Ok(self.energy(s)? + self.offset)
    }

    pub(crate) fn energy_unchecked(&self, s: &[i8]) -> f64 {
        let n = self.n();
        let mut linear = 0.0;
        let mut pair = 0.0;
        for a in 0..n {
            let sa = s[a] as f64;
            linear += self.h[a] * sa;
            let row = &self.j[a * n..(a + 1) * n];
            // Upper triangle only; symmetry makes ½Σ_{a≠b} equal to Σ_{a<b}.
            let mut acc = 0.0;
            for b in (a + 1)..n {
                acc += row[b] * s[b] as f64;
            }
            pair += sa * acc;
        }
        -linear - pair
    }

    /// Energy change from flipping spin `i`: `2 h_i s_i + 2 s_i Σ_j J_ij s_j`.
    pub fn flip_delta(&self, s: &SpinConfig, i: usize) -> f64 {
        let si = s.as_slice()[i] as f64;
        let field: f64 = self
            .j_row(i)
            .iter()
            .zip(s.as_slice())
            .map(|(&jij, &sj)| jij * sj as f64)
            .sum();
        2.0 * self.h[i] * si + 2.0 * si * field
    }

    /// Multiplies every coefficient, including the offset, by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            h: self.h.iter().map(|v| v * factor).collect(),
            j: self.j.iter().map(|v| v * factor).collect(),
            offset: self.offset * factor,
        }
    }
}

/// Decoded form of a spin configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    pub selected_ids: Vec<String>,
    pub mask: Vec<bool>,
}

impl Selection {
    pub fn from_mask(suite: &TestSuite, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != suite.len() {
            return Err(Error::Sizing {
                expected: suite.len(),
                got: mask.len(),
            });
        }
        let selected_ids = suite
            .ids()
            .zip(&mask)
            .filter(|(_, &m)| m)
            .map(|(id, _)| id.to_string())
            .collect();
        Ok(Self { selected_ids, mask })
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

pub fn spins_to_selection(suite: &TestSuite, s: &SpinConfig) -> Result<Selection> {
    Selection::from_mask(suite, s.to_mask())
}

pub fn selection_to_spins(sel: &Selection) -> SpinConfig {
    SpinConfig::from_mask(&sel.mask)
}
