// SPDX-License-Identifier: Apache-2.0

//! Ingest, analysis orchestration and canonical reports behind the `ctxprob`
//! command. All arithmetic is delegated to [`ctxprob`].

pub mod canonical;
mod error;
pub mod model;
pub mod report;
pub mod table;

pub use error::{IngestError, Result};
pub use model::{load_model, AnalysisOptions, ExperimentModel};
pub use report::{
    analyze_model, analyze_statistics, emit_report, parse_report, sample_model, AnalysisReport,
    InputEcho, InputKind,
};
pub use table::ingest_contingency_table;
