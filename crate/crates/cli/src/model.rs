// SPDX-License-Identifier: Apache-2.0

//! Experiment model documents.
//!
//! A model is a JSON document:
//!
//! ```json
//! {
//!   "schema": 1,
//!   "prespace": { "points": ["w1", "w2"], "weights": [0.5, 0.5] },
//!   "variables": [
//!     { "name": "a", "values": ["a1", "a2"] },
//!     { "name": "b", "values": ["b1", "b2"] }
//!   ],
//!   "observables": { "a": "a", "b": "b" },
//!   "context": ["w1", "w2"],
//!   "kernel": [[0.9, 0.1], [0.3, 0.7]],
//!   "options": { "samples": 100000, "seed": 7 }
//! }
//! ```
//!
//! `points`, `context`, `kernel` and `options` are optional. Variable values
//! may be strings or numbers; numbers are kept by their literal text.

use serde::Deserialize;

use ctxprob::dynamics::{PerturbationKernel, DEFAULT_SENSITIVITY_TOL};
use ctxprob::interference::DEFAULT_CLASSIFY_TOL;
use ctxprob::prespace::{Context, Prespace, RandomVariable};

use crate::error::{IngestError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    schema: u32,
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
    prespace: PrespaceDocument,
    variables: Vec<VariableDocument>,
    observables: ObservablesDocument,
    #[serde(default)]
    context: Option<Vec<String>>,
    #[serde(default)]
    kernel: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    options: OptionsDocument,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrespaceDocument {
    #[serde(default)]
    points: Option<Vec<String>>,
    weights: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ValueDocument {
    Label(String),
    Number(serde_json::Number),
}

impl ValueDocument {
    fn into_label(self) -> String {
        match self {
            ValueDocument::Label(s) => s,
            ValueDocument::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableDocument {
    name: String,
    values: Vec<ValueDocument>,
    #[serde(default)]
    alphabet: Option<Vec<ValueDocument>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservablesDocument {
    a: String,
    b: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptionsDocument {
    tol_classify: Option<f64>,
    tol_sensitivity: Option<f64>,
    samples: Option<u64>,
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub tol_classify: f64,
    pub tol_sensitivity: f64,
    /// Trials per frequency table; no sampling when absent.
    pub samples: Option<u64>,
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            tol_classify: DEFAULT_CLASSIFY_TOL,
            tol_sensitivity: DEFAULT_SENSITIVITY_TOL,
            samples: None,
            seed: 0,
        }
    }
}

/// A fully validated model.
#[derive(Debug, Clone)]
pub struct ExperimentModel {
    pub prespace: Prespace,
    pub variables: Vec<RandomVariable>,
    pub a: usize,
    pub b: usize,
    pub context: Context,
    pub kernel: PerturbationKernel,
    pub options: AnalysisOptions,
}

impl ExperimentModel {
    pub fn a(&self) -> &RandomVariable {
        &self.variables[self.a]
    }

    pub fn b(&self) -> &RandomVariable {
        &self.variables[self.b]
    }

    pub fn variable(&self, name: &str) -> Option<&RandomVariable> {
        self.variables.iter().find(|v| v.name() == name)
    }
}

pub fn load_model(bytes: &[u8]) -> Result<ExperimentModel> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let doc: ModelDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() || inner.is_io() {
            IngestError::Parse {
                path,
                message: inner.to_string(),
            }
        } else {
            IngestError::schema(path, inner.to_string())
        }
    })?;
    de.end().map_err(|e| IngestError::Parse {
        path: ".".into(),
        message: e.to_string(),
    })?;
    build(doc)
}

fn build(doc: ModelDocument) -> Result<ExperimentModel> {
    if doc.schema != SCHEMA_VERSION {
        return Err(IngestError::schema(
            "schema",
            format!(
                "unsupported schema version {}, expected {SCHEMA_VERSION}",
                doc.schema
            ),
        ));
    }

    let n = doc.prespace.weights.len();
    let prespace = match doc.prespace.points {
        Some(points) => Prespace::new(points, doc.prespace.weights),
        None => Prespace::from_weights(doc.prespace.weights),
    }
    .map_err(|e| IngestError::invariant("prespace.weights", e))?;

    let mut variables = Vec::with_capacity(doc.variables.len());
    for (i, v) in doc.variables.into_iter().enumerate() {
        let path = format!("variables[{i}]");
        if variables
            .iter()
            .any(|u: &RandomVariable| u.name() == v.name)
        {
            return Err(IngestError::invariant(
                format!("{path}.name"),
                format!("duplicate variable name {:?}", v.name),
            ));
        }
        if v.values.len() != n {
            return Err(IngestError::invariant(
                format!("{path}.values"),
                format!("{} values for {n} prepoints", v.values.len()),
            ));
        }
        let values: Vec<String> = v
            .values
            .into_iter()
            .map(ValueDocument::into_label)
            .collect();
        let var = match v.alphabet {
            Some(alphabet) => RandomVariable::with_alphabet(
                v.name,
                values,
                alphabet
                    .into_iter()
                    .map(ValueDocument::into_label)
                    .collect(),
            ),
            None => RandomVariable::new(v.name, values),
        }
        .map_err(|e| IngestError::invariant(&path, e))?;
        variables.push(var);
    }

    let find = |path: &str, name: &str| {
        variables
            .iter()
            .position(|v| v.name() == name)
            .ok_or_else(|| IngestError::invariant(path, format!("no variable named {name:?}")))
    };
    let a = find("observables.a", &doc.observables.a)?;
    let b = find("observables.b", &doc.observables.b)?;
    for (path, idx) in [("observables.a", a), ("observables.b", b)] {
        let v = &variables[idx];
        if !v.is_dichotomous() {
            return Err(IngestError::invariant(
                path,
                format!(
                    "variable {:?} has {} values, expected 2",
                    v.name(),
                    v.alphabet().len()
                ),
            ));
        }
    }

    let context = match doc.context {
        None => Context::full(&prespace),
        Some(ids) => {
            let members = ids
                .iter()
                .enumerate()
                .map(|(i, id)| {
                    prespace.index_of(id).ok_or_else(|| {
                        IngestError::invariant(
                            format!("context[{i}]"),
                            format!("unknown prepoint {id:?}"),
                        )
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Context::new(members).map_err(|e| IngestError::invariant("context", e))?
        }
    };
    context
        .validate(&prespace)
        .map_err(|e| IngestError::invariant("context", e))?;

    let kernel = match doc.kernel {
        None => PerturbationKernel::identity(n),
        Some(rows) => {
            if rows.len() != n {
                return Err(IngestError::invariant(
                    "kernel",
                    format!("{} rows for {n} prepoints", rows.len()),
                ));
            }
            PerturbationKernel::new(rows).map_err(|e| IngestError::invariant("kernel", e))?
        }
    };

    let defaults = AnalysisOptions::default();
    let options = AnalysisOptions {
        tol_classify: doc.options.tol_classify.unwrap_or(defaults.tol_classify),
        tol_sensitivity: doc
            .options
            .tol_sensitivity
            .unwrap_or(defaults.tol_sensitivity),
        samples: doc.options.samples,
        seed: doc.options.seed.unwrap_or(defaults.seed),
    };
    for (path, tol) in [
        ("options.tol_classify", options.tol_classify),
        ("options.tol_sensitivity", options.tol_sensitivity),
    ] {
        if !tol.is_finite() || tol < 0.0 {
            return Err(IngestError::invariant(
                path,
                format!("tolerance {tol} must be finite and non-negative"),
            ));
        }
    }
    if options.samples == Some(0) {
        return Err(IngestError::invariant(
            "options.samples",
            "sample count must be at least 1",
        ));
    }

    Ok(ExperimentModel {
        prespace,
        variables,
        a,
        b,
        context,
        kernel,
        options,
    })
}
