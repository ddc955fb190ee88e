//! Scenario configuration files (TOML) and their validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use brstq_core::linalg::Matrix;
use brstq_core::superalg::CliffordConvention;
use brstq_core::{Poly, Scalar, VarContext};
use serde::{Deserialize, Serialize};

use crate::grammar::{parse_constant, parse_polynomial_with, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Toml(String),
    #[error("in {field}: {source}")]
    Parse { field: String, source: ParseError },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// A weight entry: an integer or an expression in the parameters.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(untagged)]
pub enum WeightEntry {
    Int(i64),
    Expr(String),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PoissonEntry {
    pub left: String,
    pub right: String,
    pub value: String,
}

/// `f_ab^c = value`, indices from 1.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct StructureEntry {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub value: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LieConfig {
    pub dim: usize,
    #[serde(default)]
    pub structure: Vec<StructureEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, Copy, Default, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Clifford {
    #[default]
    Standard,
    BrokenSign,
}

impl From<Clifford> for CliffordConvention {
    fn from(c: Clifford) -> Self {
        match c {
            Clifford::Standard => CliffordConvention::Koszul,
            Clifford::BrokenSign => CliffordConvention::BrokenSign,
        }
    }
}

/// Pipeline stages, in execution order.
#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Load,
    Invariance,
    Acyclicity,
    Contraction,
    Classical,
    Quantum,
    Deformed,
    Reduction,
    Star,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Load,
        Stage::Invariance,
        Stage::Acyclicity,
        Stage::Contraction,
        Stage::Classical,
        Stage::Quantum,
        Stage::Deformed,
        Stage::Reduction,
        Stage::Star,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Load => "load",
            Stage::Invariance => "invariance",
            Stage::Acyclicity => "acyclicity",
            Stage::Contraction => "contraction",
            Stage::Classical => "classical",
            Stage::Quantum => "quantum",
            Stage::Deformed => "deformed",
            Stage::Reduction => "reduction",
            Stage::Star => "star",
        }
    }

    /// Stages that need the equivariant quantum reduction.
    pub fn needs_reduction(self) -> bool {
        matches!(self, Stage::Deformed | Stage::Reduction | Stage::Star)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Stage::ALL.into_iter().find(|st| st.name() == s).ok_or_else(|| {
            let names: Vec<_> = Stage::ALL.iter().map(|s| s.name()).collect();
            format!("unknown stage `{s}` (expected one of {})", names.join(", "))
        })
    }
}

fn default_generator_degree() -> u32 {
    4
}

fn default_degree() -> u32 {
    8
}

fn default_true() -> bool {
    true
}

fn default_probes() -> usize {
    50
}

fn default_seed() -> u64 {
    1
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub variables: Vec<String>,
    /// One row per torus factor; empty when the group is not a torus.
    #[serde(default)]
    pub weights: Vec<Vec<WeightEntry>>,
    #[serde(default)]
    pub parameters: BTreeMap<String, i64>,
    /// Parameters that must be negative.
    #[serde(default)]
    pub negative_parameters: Vec<String>,
    /// Truncation order `N`.
    pub order: usize,
    /// Degree bound `d` for the Koszul slices.
    #[serde(default = "default_degree")]
    pub degree: u32,
    pub moment: Vec<String>,
    #[serde(default)]
    pub justification: String,
    /// Declared invariant generators; derived from the weights when absent.
    #[serde(default)]
    pub generators: Option<Vec<String>>,
    #[serde(default = "default_generator_degree")]
    pub generator_degree: u32,
    #[serde(default)]
    pub clifford: Clifford,
    /// Whether the equivariant reduction stages run.
    #[serde(default = "default_true")]
    pub reduction: bool,
    /// Enabled stages; all when absent.
    #[serde(default)]
    pub stages: Option<Vec<Stage>>,
    #[serde(default = "default_probes")]
    pub probes: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub poisson: Vec<PoissonEntry>,
    pub lie: LieConfig,
}

/// A validated configuration with parsed data. Nondegeneracy of the Poisson
/// matrix, Jacobi and equivariance are left to the load checks.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub ctx: Arc<VarContext>,
    pub lambda: Matrix,
    pub structure: Vec<(usize, usize, usize, Scalar)>,
    pub moment: Vec<Poly>,
    pub generators: Option<Vec<Poly>>,
}

impl ScenarioConfig {
    pub fn from_toml(src: &str) -> Result<Self, ConfigError> {
        toml::from_str(src).map_err(|e| ConfigError::Toml(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let src = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&src)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn stage_enabled(&self, stage: Stage) -> bool {
        self.stages.as_ref().is_none_or(|s| s.contains(&stage))
    }

    pub fn validate(&self) -> Result<Scenario, ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        if self.name.trim().is_empty() {
            return invalid("empty scenario name".into());
        }
        let mut seen = BTreeSet::new();
        for v in &self.variables {
            let ident = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ident || v == "I" || self.parameters.contains_key(v) {
                return invalid(format!("`{v}` is not usable as a variable name"));
            }
            if !seen.insert(v) {
                return invalid(format!("variable `{v}` declared twice"));
            }
        }
        for p in &self.negative_parameters {
            match self.parameters.get(p) {
                Some(&x) if x < 0 => {}
                Some(&x) => return invalid(format!("nonpositivity condition requires {p} < 0, got {x}")),
                None => return invalid(format!("unknown parameter `{p}`")),
            }
        }
        let constants: BTreeMap<String, Scalar> =
            self.parameters.iter().map(|(k, &v)| (k.clone(), Scalar::from_i64(v))).collect();
        let constant = |field: String, src: &str| {
            parse_constant(src, &constants).map_err(|source| ConfigError::Parse { field, source })
        };

        let n = self.variables.len();
        let mut rows = Vec::new();
        for (r, row) in self.weights.iter().enumerate() {
            if row.len() != n {
                return invalid(format!("weight row {} has {} entries for {n} variables", r + 1, row.len()));
            }
            let mut out = Vec::new();
            for (k, w) in row.iter().enumerate() {
                out.push(match w {
                    WeightEntry::Int(x) => *x,
                    WeightEntry::Expr(e) => match constant(format!("weights[{r}][{k}]"), e)?.to_i64() {
                        Some(x) => x,
                        None => return invalid(format!("weight `{e}` is not an integer")),
                    },
                });
            }
            rows.push(out);
        }
        let ctx = VarContext::with_weights(self.variables.clone(), rows)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;

        let index = |name: &str| {
            ctx.index_of(name).ok_or_else(|| ConfigError::Invalid(format!("unknown variable `{name}` in poisson")))
        };
        let mut lambda = Matrix::zeros(n, n);
        for (k, e) in self.poisson.iter().enumerate() {
            let (i, j) = (index(&e.left)?, index(&e.right)?);
            let x = constant(format!("poisson[{k}]"), &e.value)?;
            if i == j && !x.is_zero() {
                return invalid(format!("poisson entry {{{}, {}}} must vanish", e.left, e.right));
            }
            for (a, b, v) in [(i, j, x.clone()), (j, i, -&x)] {
                if !lambda.get(a, b).is_zero() && *lambda.get(a, b) != v {
                    return invalid(format!("conflicting poisson entries for {{{}, {}}}", e.left, e.right));
                }
                lambda.set(a, b, v);
            }
        }

        let dim = self.lie.dim;
        if dim == 0 {
            return invalid("the Lie algebra must have positive dimension".into());
        }
        let mut structure = Vec::new();
        for (k, e) in self.lie.structure.iter().enumerate() {
            if [e.a, e.b, e.c].iter().any(|&x| x == 0 || x > dim) {
                return invalid(format!("structure constant ({}, {}, {}) out of range 1..={dim}", e.a, e.b, e.c));
            }
            structure.push((e.a - 1, e.b - 1, e.c - 1, constant(format!("lie.structure[{k}]"), &e.value)?));
        }

        if self.moment.len() != dim {
            return invalid(format!("{} moment map components for a {dim}-dimensional Lie algebra", self.moment.len()));
        }
        let poly = |field: String, src: &str| {
            parse_polynomial_with(src, &ctx, &constants).map_err(|source| ConfigError::Parse { field, source })
        };
        let moment = self.moment.iter().enumerate().map(|(k, s)| poly(format!("moment[{k}]"), s)).collect::<Result<Vec<_>, _>>()?;
        let generators = match &self.generators {
            Some(list) => Some(
                list.iter().enumerate().map(|(k, s)| poly(format!("generators[{k}]"), s)).collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        if self.order == 0 {
            return invalid("truncation order must be at least 1".into());
        }
        if self.probes == 0 {
            return invalid("probe count must be positive".into());
        }
        Ok(Scenario { config: self.clone(), ctx, lambda, structure, moment, generators })
    }
}
