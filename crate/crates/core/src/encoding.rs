//! Weighted-attribute optimization strategies and their Ising encodings.
//!
//! Every strategy is evaluated two ways: directly from the suite (the
//! `fitness_*` functions) and as an expanded [`IsingModel`] from
//! [`to_ising`]. The expansion is exact, so `total_energy(s) == fitness(s)`
//! for every spin vector up to rounding.
//!
//! All strategies reduce to weighted squares of affine functions of the
//! spins, which is what [`QuadraticForm::add_squared_affine`] expands:
//!
//! * ratio-based: `f_k = ½ + Σ_i λ_k c_ik / (2 S_k) · s_i`, squared and weighted;
//! * deviation-based: `f_k = (Σ_i ĉ_ik (1 - s_i)/2 - L_k)²` with column-sum
//!   normalized `ĉ`, weighted once;
//! * budget penalty: `α (Σ_i (1 - s_i)/2 - B)²`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::{IsingModel, SpinConfig, TestSuite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Ratio-based weighted attribute optimization.
    WaoR,
    /// Deviation-based weighted attribute optimization.
    WaoD,
    /// Ratio-based with a selection budget.
    WaoRBudget,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::WaoR => "WAOr",
            Strategy::WaoD => "WAOd",
            Strategy::WaoRBudget => "WAOr-budget",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Effectiveness,
    Cost,
}

impl AttributeKind {
    /// `+1` for effectiveness, `-1` for cost.
    pub fn lambda(self) -> f64 {
        match self {
            AttributeKind::Effectiveness => 1.0,
            AttributeKind::Cost => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeRole {
    pub name: String,
    pub kind: AttributeKind,
    pub weight: f64,
}

impl AttributeRole {
    pub fn effectiveness(name: &str, weight: f64) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Effectiveness,
            weight,
        }
    }

    pub fn cost(name: &str, weight: f64) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Cost,
            weight,
        }
    }
}

/// A validated problem definition with weights normalized to sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    strategy: Strategy,
    roles: Vec<AttributeRole>,
    minimization: bool,
    minimization_weight: f64,
    budget_percent: Option<f64>,
    alpha: f64,
}

pub const DEFAULT_ALPHA: f64 = 1.0;

impl ProblemSpec {
    /// `minimization_weight` defaults to the mean of the role weights.
    /// `alpha` defaults to [`DEFAULT_ALPHA`].
    pub fn new(
        strategy: Strategy,
        roles: Vec<AttributeRole>,
        minimization: bool,
        minimization_weight: Option<f64>,
        budget_percent: Option<f64>,
        alpha: Option<f64>,
    ) -> Result<Self> {
        if roles.is_empty() {
            return Err(Error::InvalidSpec(
                "at least one attribute role is required".into(),
            ));
        }
        for r in &roles {
            if !r.weight.is_finite() || r.weight < 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "weight of `{}` must be finite and non-negative, got {}",
                    r.name, r.weight
                )));
            }
        }
        let mean = roles.iter().map(|r| r.weight).sum::<f64>() / roles.len() as f64;
        let mut min_weight = if minimization {
            minimization_weight.unwrap_or(mean)
        } else {
            0.0
        };
        if !min_weight.is_finite() || min_weight < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "minimization weight must be finite and non-negative, got {min_weight}"
            )));
        }
        let total = roles.iter().map(|r| r.weight).sum::<f64>() + min_weight;
        if total <= 0.0 {
            return Err(Error::InvalidSpec("weights sum to zero".into()));
        }
        let roles = roles
            .into_iter()
            .map(|r| AttributeRole {
                weight: r.weight / total,
                ..r
            })
            .collect();
        min_weight /= total;

        match (strategy, budget_percent) {
            (Strategy::WaoRBudget, None) => {
                return Err(Error::InvalidSpec(
                    "WAOr-budget requires a budget percentage".into(),
                ))
            }
            (Strategy::WaoRBudget, Some(b)) if !(b > 0.0 && b <= 100.0) => {
                return Err(Error::InvalidSpec(format!(
                    "budget must lie in (0, 100], got {b}"
                )))
            }
            (Strategy::WaoR | Strategy::WaoD, Some(_)) => {
                return Err(Error::InvalidSpec(format!(
                    "a budget is only meaningful for WAOr-budget, not {strategy}"
                )))
            }
            _ => {}
        }
        let alpha = alpha.unwrap_or(DEFAULT_ALPHA);
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        Ok(Self {
            strategy,
            roles,
            minimization,
            minimization_weight: min_weight,
            budget_percent,
            alpha,
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn roles(&self) -> &[AttributeRole] {
        &self.roles
    }

    pub fn minimization(&self) -> bool {
        self.minimization
    }

    pub fn minimization_weight(&self) -> f64 {
        self.minimization_weight
    }

    pub fn budget_percent(&self) -> Option<f64> {
        self.budget_percent
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Target number of selected tests, `round(percent/100 · n)` clamped to
    /// `[0, n]`. `None` for strategies without a budget.
    pub fn budget_target(&self, n: usize) -> Option<usize> {
        self.budget_percent.map(|p| budget_target(p, n))
    }

    /// Weighted terms including the synthetic minimization attribute.
    fn terms(&self, suite: &TestSuite) -> Result<Vec<Term>> {
        let mut terms = Vec::with_capacity(self.roles.len() + 1);
        for r in &self.roles {
            let values = suite.column(&r.name)?;
            if values.iter().sum::<f64>() <= 0.0 {
                return Err(Error::ZeroAttributeSum(r.name.clone()));
            }
            terms.push(Term {
                kind: r.kind,
                weight: r.weight,
                values,
            });
        }
        if self.minimization {
            terms.push(Term {
                kind: AttributeKind::Cost,
                weight: self.minimization_weight,
                values: vec![1.0; suite.len()],
            });
        }
        Ok(terms)
    }
}

pub fn budget_target(percent: f64, n: usize) -> usize {
    // f64::round rounds half away from zero.
    let b = (percent / 100.0 * n as f64).round();
    b.clamp(0.0, n as f64) as usize
}

struct Term {
    kind: AttributeKind,
    weight: f64,
    values: Vec<f64>,
}

impl Term {
    fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

fn check_len(suite: &TestSuite, s: &SpinConfig) -> Result<()> {
    if s.len() != suite.len() {
        return Err(Error::Sizing {
            expected: suite.len(),
            got: s.len(),
        });
    }
    Ok(())
}

fn require(spec: &ProblemSpec, allowed: &[Strategy], op: &str) -> Result<()> {
    if allowed.contains(&spec.strategy) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "{op} does not apply to strategy {}",
            spec.strategy
        )))
    }
}

fn ratio_fitness(spec: &ProblemSpec, suite: &TestSuite, s: &SpinConfig) -> Result<f64> {
    check_len(suite, s)?;
    let mut fv = 0.0;
    for t in spec.terms(suite)? {
        let dot: f64 = t
            .values
            .iter()
            .zip(s.as_slice())
            .map(|(c, &si)| c * si as f64)
            .sum();
        let f = 0.5 * (1.0 + t.kind.lambda() * dot / t.sum());
        fv += t.weight * f * f;
    }
    Ok(fv)
}

/// Ratio-based fitness `Σ_k ω_k f_k²`. Also accepted for WAOr-budget, where
/// it is the unpenalized objective.
pub fn fitness_waor(spec: &ProblemSpec, suite: &TestSuite, s: &SpinConfig) -> Result<f64> {
    require(
        spec,
        &[Strategy::WaoR, Strategy::WaoRBudget],
        "fitness_waor",
    )?;
    ratio_fitness(spec, suite, s)
}

/// Deviation-based fitness `Σ_k ω_k (selected_k - L_k)²` over column-sum
/// normalized attributes, so `L_k` is 1 for effectiveness and 0 for cost.
pub fn fitness_waod(spec: &ProblemSpec, suite: &TestSuite, s: &SpinConfig) -> Result<f64> {
    require(spec, &[Strategy::WaoD], "fitness_waod")?;
    check_len(suite, s)?;
    let mut fv = 0.0;
    for t in spec.terms(suite)? {
        let total = t.sum();
        let selected: f64 = t
            .values
            .iter()
            .zip(s.as_slice())
            .filter(|(_, &si)| si == -1)
            .map(|(c, _)| c / total)
            .sum();
        let limit = deviation_limit(t.kind);
        fv += t.weight * (selected - limit).powi(2);
    }
    Ok(fv)
}

fn deviation_limit(kind: AttributeKind) -> f64 {
    match kind {
        AttributeKind::Effectiveness => 1.0,
        AttributeKind::Cost => 0.0,
    }
}

pub fn budget_penalty(spec: &ProblemSpec, s: &SpinConfig) -> f64 {
    match spec.budget_target(s.len()) {
        Some(b) => {
            let d = s.count_selected() as f64 - b as f64;
            spec.alpha * d * d
        }
        None => 0.0,
    }
}

/// Ratio-based fitness plus `α (count_selected - B)²`.
pub fn fitness_waor_budget(spec: &ProblemSpec, suite: &TestSuite, s: &SpinConfig) -> Result<f64> {
    require(spec, &[Strategy::WaoRBudget], "fitness_waor_budget")?;
    Ok(ratio_fitness(spec, suite, s)? + budget_penalty(spec, s))
}

/// The strategy's own fitness (penalized for the budget strategy).
pub fn fitness(spec: &ProblemSpec, suite: &TestSuite, s: &SpinConfig) -> Result<f64> {
    match spec.strategy {
        Strategy::WaoR => fitness_waor(spec, suite, s),
        Strategy::WaoD => fitness_waod(spec, suite, s),
        Strategy::WaoRBudget => fitness_waor_budget(spec, suite, s),
    }
}

/// Polynomial `constant + Σ linear_i s_i + Σ_{i<j} pair_ij s_i s_j` over ±1
/// spins.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    n: usize,
    constant: f64,
    linear: Vec<f64>,
    pair: Vec<f64>,
}

impl QuadraticForm {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            constant: 0.0,
            linear: vec![0.0; n],
            pair: vec![0.0; n * n],
        }
    }

    /// Adds `weight · (c0 + Σ coeffs_i s_i)²`, folding `s_i² = 1` into the
    /// constant.
    pub fn add_squared_affine(&mut self, weight: f64, c0: f64, coeffs: &[f64]) {
        assert_eq!(coeffs.len(), self.n);
        self.constant += weight * (c0 * c0 + coeffs.iter().map(|l| l * l).sum::<f64>());
        for (lin, l) in self.linear.iter_mut().zip(coeffs) {
            *lin += 2.0 * weight * c0 * l;
        }
        for a in 0..self.n {
            let wa = 2.0 * weight * coeffs[a];
            if wa == 0.0 {
                continue;
            }
            for b in (a + 1)..self.n {
                self.pair[a * self.n + b] += wa * coeffs[b];
            }
        }
    }

    pub fn evaluate(&self, s: &SpinConfig) -> f64 {
        let s = s.as_slice();
        let mut v = self.constant;
        for a in 0..self.n {
            let sa = s[a] as f64;
            v += self.linear[a] * sa;
            for b in (a + 1)..self.n {
                v += self.pair[a * self.n + b] * sa * s[b] as f64;
            }
        }
        v
    }

    /// Maps onto the `-Σhs - ½ΣJss` convention: `h = -linear`,
    /// `J_ij = J_ji = -pair_ij`, offset = constant.
    pub fn into_ising(self) -> IsingModel {
        let n = self.n;
        let h = self.linear.iter().map(|v| -v).collect();
        let mut model =
            IsingModel::new(h, vec![0.0; n * n], self.constant).expect("finite quadratic form");
        for a in 0..n {
            for b in (a + 1)..n {
                let v = self.pair[a * n + b];
                if v != 0.0 {
                    model.set_coupling(a, b, -v);
                }
            }
        }
        model
    }
}

/// Expands the strategy's fitness into an Ising model with
/// `total_energy(s) == fitness(spec, suite, s)` for every `s`.
pub fn to_ising(spec: &ProblemSpec, suite: &TestSuite) -> Result<IsingModel> {
    let n = suite.len();
    let mut q = QuadraticForm::new(n);
    for t in spec.terms(suite)? {
        let total = t.sum();
        match spec.strategy {
            Strategy::WaoR | Strategy::WaoRBudget => {
                let scale = t.kind.lambda() / (2.0 * total);
                let coeffs: Vec<f64> = t.values.iter().map(|c| c * scale).collect();
                q.add_squared_affine(t.weight, 0.5, &coeffs);
            }
            Strategy::WaoD => {
                // Σ ĉ_i (1 - s_i)/2 - L = (½ - L) - Σ (ĉ_i/2) s_i since Σ ĉ_i = 1.
                let coeffs: Vec<f64> = t.values.iter().map(|c| -0.5 * c / total).collect();
                q.add_squared_affine(t.weight, 0.5 - deviation_limit(t.kind), &coeffs);
            }
        }
    }
    if let Some(b) = spec.budget_target(n) {
        q.add_squared_affine(spec.alpha, n as f64 / 2.0 - b as f64, &vec![-0.5; n]);
    }
    Ok(q.into_ising())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimize,
}

pub type FeasibilityFn = Arc<dyn Fn(&[bool]) -> bool + Send + Sync>;

/// Feasibility predicate handed to classical solvers.
#[derive(Clone)]
pub enum Constraint {
    Unconstrained,
    /// At most this many tests may be selected.
    MaxSelected(usize),
    Predicate(FeasibilityFn),
}

impl Constraint {
    pub fn is_feasible(&self, mask: &[bool]) -> bool {
        match self {
            Constraint::Unconstrained => true,
            Constraint::MaxSelected(b) => mask.iter().filter(|&&m| m).count() <= *b,
            Constraint::Predicate(f) => f(mask),
        }
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Unconstrained => f.write_str("Unconstrained"),
            Constraint::MaxSelected(b) => write!(f, "MaxSelected({b})"),
            Constraint::Predicate(_) => f.write_str("Predicate(..)"),
        }
    }
}

/// What a classical solver needs besides the objective.
#[derive(Debug, Clone)]
pub struct ClassicalInfo {
    pub num_bits: usize,
    pub direction: Direction,
    pub constraint: Constraint,
}

impl ClassicalInfo {
    pub fn unconstrained(num_bits: usize) -> Self {
        Self {
            num_bits,
            direction: Direction::Minimize,
            constraint: Constraint::Unconstrained,
        }
    }
}

pub fn classical_info(spec: &ProblemSpec, suite: &TestSuite) -> ClassicalInfo {
    let n = suite.len();
    ClassicalInfo {
        num_bits: n,
        direction: Direction::Minimize,
        constraint: match spec.budget_target(n) {
            Some(b) => Constraint::MaxSelected(b),
            None => Constraint::Unconstrained,
        },
    }
}

/// A problem instance bound to a suite: the contract every registered
/// problem fulfils.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;

    fn num_tests(&self) -> usize;

    /// Ising encoding whose total energy equals [`Problem::fitness`].
    fn ising(&self) -> Result<IsingModel>;

    /// Fitness of a spin configuration (lower is better).
    fn fitness(&self, s: &SpinConfig) -> Result<f64>;

    fn classical_info(&self) -> ClassicalInfo;

    /// Objective minimized by classical solvers over selection masks.
    fn classical_objective(&self, mask: &[bool]) -> Result<f64> {
        self.fitness(&SpinConfig::from_mask(mask))
    }

    /// Parameters echoed into result files.
    fn describe(&self) -> serde_json::Value {
        serde_json::Value::Null
    }
}

/// The built-in weighted-attribute problems.
#[derive(Debug, Clone)]
pub struct WeightedAttributeProblem {
    spec: ProblemSpec,
    suite: TestSuite,
}

impl WeightedAttributeProblem {
    pub fn new(spec: ProblemSpec, suite: TestSuite) -> Result<Self> {
        // Surface missing attributes and zero sums at construction.
        spec.terms(&suite)?;
        Ok(Self { spec, suite })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn suite(&self) -> &TestSuite {
        &self.suite
    }
}

impl Problem for WeightedAttributeProblem {
    fn name(&self) -> &str {
        self.spec.strategy.name()
    }

    fn num_tests(&self) -> usize {
        self.suite.len()
    }

    fn ising(&self) -> Result<IsingModel> {
        to_ising(&self.spec, &self.suite)
    }

    fn fitness(&self, s: &SpinConfig) -> Result<f64> {
        fitness(&self.spec, &self.suite, s)
    }

    fn classical_info(&self) -> ClassicalInfo {
        classical_info(&self.spec, &self.suite)
    }

    fn classical_objective(&self, mask: &[bool]) -> Result<f64> {
        let s = SpinConfig::from_mask(mask);
        match self.spec.strategy {
            Strategy::WaoRBudget => ratio_fitness(&self.spec, &self.suite, &s),
            _ => self.fitness(&s),
        }
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::to_value(&self.spec).unwrap_or(serde_json::Value::Null)
    }
}

/// A problem parameter value: either a bracketed list or a scalar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamValue {
    List(Vec<String>),
    Scalar(String),
}

impl ParamValue {
    /// Parses `['a', 'b']`, `[a,b]`, `[]` as lists and anything else as a
    /// scalar. Surrounding quotes on items are stripped.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::param(t, "unterminated list"))?;
            if inner.trim().is_empty() {
                return Ok(ParamValue::List(vec![]));
            }
            let items = inner
                .split(',')
                .map(|item| {
                    let item = unquote(item.trim());
                    if item.is_empty() {
                        Err(Error::param(t, "empty list item"))
                    } else {
                        Ok(item.to_string())
                    }
                })
                .collect::<Result<_>>()?;
            Ok(ParamValue::List(items))
        } else {
            Ok(ParamValue::Scalar(unquote(t).to_string()))
        }
    }

    fn as_list(&self) -> Vec<String> {
        match self {
            ParamValue::List(v) => v.clone(),
            ParamValue::Scalar(s) => vec![s.clone()],
        }
    }
}

fn unquote(s: &str) -> &str {
    for q in ['\'', '"'] {
        if s.len() >= 2 && s.starts_with(q) && s.ends_with(q) {
            return &s[1..s.len() - 1];
        }
    }
    s
}

/// Key/value problem parameters as given on the command line or in YAML.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams(BTreeMap<String, ParamValue>);

impl ProblemParams {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses one `key=value` token.
    pub fn insert_pair(&mut self, token: &str) -> Result<()> {
        let (k, v) = token
            .split_once('=')
            .ok_or_else(|| Error::param(token, "expected key=value"))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::param(token, "empty key"));
        }
        self.0.insert(k.to_string(), ParamValue::parse(v)?);
        Ok(())
    }

    pub fn insert(&mut self, key: &str, value: ParamValue) {
        self.0.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&ParamValue> {
        self.0.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn list(&self, key: &str) -> Vec<String> {
        self.0.get(key).map(ParamValue::as_list).unwrap_or_default()
    }

    pub fn scalar(&self, key: &str) -> Result<Option<&str>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(ParamValue::Scalar(s)) => Ok(Some(s)),
            Some(ParamValue::List(_)) => Err(Error::param(key, "expected a single value")),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.scalar(key)?
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::param(key, format!("`{s}` is not a number")))
            })
            .transpose()
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>> {
        self.scalar(key)?
            .map(|s| match s.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(Error::param(key, format!("`{s}` is not a boolean"))),
            })
            .transpose()
    }

    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.0
            .get(key)
            .map(|v| {
                v.as_list()
                    .iter()
                    .map(|s| {
                        s.parse::<f64>()
                            .map_err(|_| Error::param(key, format!("`{s}` is not a number")))
                    })
                    .collect()
            })
            .transpose()
    }
}

const WAO_KEYS: &[&str] = &[
    "effectiveness",
    "cost",
    "weights",
    "minimization",
    "minimization_weight",
    "budget",
    "alpha",
];

/// Builds a [`ProblemSpec`] for a weighted-attribute strategy from
/// key/value parameters.
pub fn spec_from_params(strategy: Strategy, params: &ProblemParams) -> Result<ProblemSpec> {
    if let Some(k) = params.keys().find(|k| !WAO_KEYS.contains(k)) {
        return Err(Error::param(
            k,
            format!(
                "unknown key for {strategy}; expected one of {}",
                WAO_KEYS.join(", ")
            ),
        ));
    }
    let effectiveness = params.list("effectiveness");
    let cost = params.list("cost");
    let n_roles = effectiveness.len() + cost.len();
    let minimization = params.bool("minimization")?.unwrap_or(false);
    let mut min_weight = params.f64("minimization_weight")?;
    let weights = match params.f64_list("weights")? {
        None => vec![1.0; n_roles],
        Some(w) if w.len() == n_roles => w,
        Some(w) if minimization && w.len() == n_roles + 1 => {
            min_weight = Some(w[n_roles]);
            w[..n_roles].to_vec()
        }
        Some(w) => {
            return Err(Error::param(
                "weights",
                format!(
                    "expected {n_roles} weights (effectiveness then cost), got {}",
                    w.len()
                ),
            ))
        }
    };
    let roles = effectiveness
        .iter()
        .map(|name| (name, AttributeKind::Effectiveness))
        .chain(cost.iter().map(|name| (name, AttributeKind::Cost)))
        .zip(weights)
        .map(|((name, kind), weight)| AttributeRole {
            name: name.clone(),
            kind,
            weight,
        })
        .collect();
    ProblemSpec::new(
        strategy,
        roles,
        minimization,
        min_weight,
        params.f64("budget")?,
        params.f64("alpha")?,
    )
}

pub type ProblemFactory =
    Arc<dyn Fn(&ProblemParams, &TestSuite) -> Result<Box<dyn Problem>> + Send + Sync>;

/// Name → problem factory. Built once, read-only while solving.
#[derive(Clone, Default)]
pub struct ProblemRegistry {
    entries: BTreeMap<String, ProblemFactory>,
}

impl ProblemRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding `WAOr`, `WAOd` and `WAOr-budget`.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        for strategy in [Strategy::WaoR, Strategy::WaoD, Strategy::WaoRBudget] {
            reg.register(
                strategy.name(),
                Arc::new(move |params: &ProblemParams, suite: &TestSuite| {
                    let spec = spec_from_params(strategy, params)?;
                    Ok(
                        Box::new(WeightedAttributeProblem::new(spec, suite.clone())?)
                            as Box<dyn Problem>,
                    )
                }),
            )
            .expect("built-in names are distinct");
        }
        reg
    }

    pub fn register(&mut self, name: &str, factory: ProblemFactory) -> Result<()> {
        if self.entries.contains_key(name) {
            return Err(Error::DuplicateRegistration {
                what: "problem",
                name: name.to_string(),
            });
        }
        self.entries.insert(name.to_string(), factory);
        Ok(())
    }

    pub fn resolve(&self, name: &str) -> Result<&ProblemFactory> {
        self.entries.get(name).ok_or_else(|| Error::UnknownName {
            what: "problem",
            name: name.to_string(),
            available: self.names(),
        })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn build(
        &self,
        name: &str,
        params: &ProblemParams,
        suite: &TestSuite,
    ) -> Result<Box<dyn Problem>> {
        (self.resolve(name)?)(params, suite)
    }
}
