// SPDX-License-Identifier: Apache-2.0

//! Analysis pipeline and report documents.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use ctxprob::dynamics::{
    contextual_statistics, is_contextually_sensitive, perturbed_distribution, sample_frequencies,
    total_probability_mismatch, FrequencyTable, Perturbation,
};
use ctxprob::interference::{analyze_interference, InterferenceReport, Regime};
use ctxprob::representation::{born_residual, hyperbolic_amplitude, trig_amplitude, Amplitude};
use ctxprob::ContextualStatistics;

use crate::canonical::to_canonical_string;
use crate::error::{IngestError, Result};
use crate::model::{AnalysisOptions, ExperimentModel};

pub const TOOL_NAME: &str = "ctxprob";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Model,
    Table,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub kind: InputKind,
    pub sha256: String,
}

impl InputEcho {
    pub fn of(kind: InputKind, bytes: &[u8]) -> Self {
        Self {
            kind,
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Amplitude components as `[re, im]` (complex) or `[x, y]` (split-complex) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeReport {
    pub regime: Regime,
    pub components: [[f64; 2]; 2],
}

impl From<&Amplitude> for AmplitudeReport {
    fn from(a: &Amplitude) -> Self {
        match a {
            Amplitude::Trigonometric(v) => Self {
                regime: Regime::Trigonometric,
                components: v.components.map(|z| [z.re, z.im]),
            },
            Amplitude::Hyperbolic(v) => Self {
                regime: Regime::Hyperbolic,
                components: v.components.map(|z| [z.x, z.y]),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sensitivity {
    pub tol: f64,
    /// `max_j |p(β_j) − Σ_i P_ij|`.
    pub mismatch: f64,
    pub sensitive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFrequencies {
    /// `"context"` or `"after <a>=<value>"`.
    pub condition: String,
    pub exact: Vec<f64>,
    pub table: FrequencyTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub input: InputEcho,
    pub seed: Option<u64>,
    pub statistics: ContextualStatistics,
    pub interference: InterferenceReport,
    pub regime: Regime,
    pub amplitude: Option<AmplitudeReport>,
    pub born_residual: Option<f64>,
    pub sensitivity: Sensitivity,
    pub sampling: Option<Vec<SampledFrequencies>>,
}

/// Interference, amplitude, Born residual and sensitivity for fixed statistics.
/// Degenerate and mixed regimes come back as report content.
pub fn analyze_statistics(
    statistics: ContextualStatistics,
    options: &AnalysisOptions,
    input: InputEcho,
) -> Result<AnalysisReport> {
    let interference = analyze_interference(&statistics, options.tol_classify)?;
    let regime = interference.regime();
    let amplitude: Option<Amplitude> = match regime {
        Regime::Trigonometric => Some(trig_amplitude(&statistics, &interference)?.into()),
        Regime::Hyperbolic => Some(hyperbolic_amplitude(&statistics, &interference)?.into()),
        Regime::Mixed | Regime::Degenerate => None,
    };
    let residual = amplitude.as_ref().map(|a| born_residual(a, &statistics));
    let sensitivity = Sensitivity {
        tol: options.tol_sensitivity,
        mismatch: total_probability_mismatch(&statistics),
        sensitive: is_contextually_sensitive(&statistics, options.tol_sensitivity),
    };
    Ok(AnalysisReport {
        tool: ToolInfo::default(),
        input,
        seed: None,
        statistics,
        interference,
        regime,
        amplitude: amplitude.as_ref().map(AmplitudeReport::from),
        born_residual: residual,
        sensitivity,
        sampling: None,
    })
}

/// Full prespace pipeline. `seed` overrides the model's seed.
pub fn analyze_model(
    model: &ExperimentModel,
    input: InputEcho,
    seed: Option<u64>,
) -> Result<AnalysisReport> {
    let (p, c, a, b, k) = (
        &model.prespace,
        &model.context,
        model.a(),
        model.b(),
        &model.kernel,
    );
    let statistics = contextual_statistics(p, c, a, b, k)?;
    let seed = seed.unwrap_or(model.options.seed);

    let sampling = match model.options.samples {
        None => None,
        Some(n) => {
            let mut tables = vec![SampledFrequencies {
                condition: "context".into(),
                exact: statistics.b_marginals().to_vec(),
                table: sample_frequencies(p, c, b, n, seed, None)?,
            }];
            for (i, value) in a.alphabet().iter().enumerate() {
                let pert = Perturbation {
                    kernel: k,
                    a,
                    a_value: value,
                };
                tables.push(SampledFrequencies {
                    condition: format!("after {}={value}", a.name()),
                    exact: statistics.transition()[i].to_vec(),
                    table: sample_frequencies(
                        p,
                        c,
                        b,
                        n,
                        seed.wrapping_add(i as u64 + 1),
                        Some(pert),
                    )?,
                });
            }
            Some(tables)
        }
    };

    let mut report = analyze_statistics(statistics, &model.options, input)?;
    report.seed = Some(seed);
    report.sampling = sampling;
    Ok(report)
}

pub fn emit_report(report: &AnalysisReport) -> Vec<u8> {
    to_canonical_string(report).into_bytes()
}

pub fn parse_report(bytes: &[u8]) -> Result<AnalysisReport> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(&mut de).map_err(|e| IngestError::Parse {
        path: e.path().to_string(),
        message: e.into_inner().to_string(),
    })
}

/// Output of the `sample` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub tool: ToolInfo,
    pub input: InputEcho,
    #[serde(flatten)]
    pub frequencies: SampledFrequencies,
}

pub fn sample_model(
    model: &ExperimentModel,
    input: InputEcho,
    variable: &str,
    n: u64,
    seed: u64,
    after: Option<&str>,
) -> Result<SampleReport> {
    let v = model.variable(variable).ok_or_else(|| {
        IngestError::schema("--variable", format!("no variable named {variable:?}"))
    })?;
    let (p, c) = (&model.prespace, &model.context);
    let (condition, exact, pert) = match after {
        None => (
            "context".to_string(),
            ctxprob::prespace::variable_distribution(p, v, c)?
                .masses()
                .to_vec(),
            None,
        ),
        Some(value) => {
            let a = model.a();
            a.code_of(value)
                .map_err(|e| IngestError::schema("--after", e.to_string()))?;
            let exact = perturbed_distribution(p, c, a, value, &model.kernel, v)?
                .masses()
                .to_vec();
            (
                format!("after {}={value}", a.name()),
                exact,
                Some(Perturbation {
                    kernel: &model.kernel,
                    a,
                    a_value: value,
                }),
            )
        }
    };
    let table = sample_frequencies(p, c, v, n, seed, pert)?;
    Ok(SampleReport {
        tool: ToolInfo::default(),
        input,
        frequencies: SampledFrequencies {
            condition,
            exact,
            table,
        },
    })
}
