// SPDX-License-Identifier: Apache-2.0

//! Interference coefficients and phases.
//!
//! For each b-value the observed probability is decomposed as
//!
//! ```text
//! P = P_1 + P_2 + 2·sqrt(P_1·P_2)·λ
//! ```
//!
//! where `P_i = p(a = α_i)·p(β | α_i)`. `λ = 0` is the classical law of total
//! probability, `|λ| ≤ 1` is trigonometric interference with `λ = cos θ`, and
//! `|λ| > 1` is hyperbolic interference with `λ = ±cosh θ`.

use serde::{Deserialize, Serialize};

use crate::dynamics::ContextualStatistics;
use crate::error::{Error, JointTerm, Result};

/// Default guard band above `|λ| = 1` that still counts as trigonometric.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Trigonometric,
    Hyperbolic,
    Degenerate,
}

/// Regime of a whole report, combining both b-values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Trigonometric,
    Hyperbolic,
    /// One trigonometric and one hyperbolic entry.
    Mixed,
    /// At least one entry has a vanishing joint term.
    Degenerate,
}

/// Coefficients for both b-values together with the joint terms `P_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub lambda: [f64; 2],
    /// `joint[i][j] = P_ij`.
    pub joint: [[f64; 2]; 2],
}

/// `λ_j = (P − P_1j − P_2j) / (2·sqrt(P_1j·P_2j))`, failing on the first vanishing joint term.
pub fn interference_coefficients(s: &ContextualStatistics) -> Result<Coefficients> {
    let joint = [
        [s.joint(0, 0), s.joint(0, 1)],
        [s.joint(1, 0), s.joint(1, 1)],
    ];
    for (i, row) in joint.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x <= 0.0 {
                return Err(Error::DegenerateDenominator(JointTerm {
                    a_index: i,
                    b_index: j,
                }));
            }
        }
    }
    let mut lambda = [0.0; 2];
    for (j, l) in lambda.iter_mut().enumerate() {
        *l = coefficient(s.b_marginals()[j], joint[0][j], joint[1][j])?;
    }
    Ok(Coefficients { lambda, joint })
}

fn coefficient(observed: f64, p1: f64, p2: f64) -> Result<f64> {
    let lambda = (observed - p1 - p2) / (2.0 * (p1 * p2).sqrt());
    if lambda.is_finite() {
        Ok(lambda)
    } else {
        Err(Error::NonFinite(lambda))
    }
}

pub fn classify(lambda: f64, tol_classify: f64) -> Result<Classification> {
    if !lambda.is_finite() {
        return Err(Error::NonFinite(lambda));
    }
    Ok(if lambda.abs() <= 1.0 + tol_classify {
        Classification::Trigonometric
    } else {
        Classification::Hyperbolic
    })
}

/// Phase `θ ≥ 0` and sign `ε` such that `λ = cos θ` or `λ = ε·cosh θ`.
///
/// Trigonometric phases use the principal branch `θ ∈ [0, π]`; values in the
/// guard band just above `|λ| = 1` are clamped to `θ = 0` or `θ = π`.
pub fn phases(lambda: f64, class: Classification) -> Result<(f64, i8)> {
    match class {
        Classification::Degenerate => Err(Error::NoPhase),
        Classification::Trigonometric => Ok((lambda.clamp(-1.0, 1.0).acos(), 1)),
        Classification::Hyperbolic => {
            if lambda.abs() <= 1.0 {
                return Err(Error::WrongRegime(format!(
                    "λ = {lambda} is not hyperbolic"
                )));
            }
            let sign = if lambda > 0.0 { 1 } else { -1 };
            Ok((lambda.abs().acosh(), sign))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceEntry {
    /// b-value label.
    pub outcome: String,
    pub p1: f64,
    pub p2: f64,
    pub lambda: Option<f64>,
    pub classification: Classification,
    pub phase: Option<f64>,
    pub sign: Option<i8>,
}

impl InterferenceEntry {
    /// `P_1 + P_2 + 2·sqrt(P_1·P_2)·(ε·cos θ | ε·cosh θ)`, or `None` when degenerate.
    pub fn reconstructed_probability(&self) -> Option<f64> {
        let theta = self.phase?;
        let sign = f64::from(self.sign?);
        let factor = match self.classification {
            Classification::Trigonometric => theta.cos(),
            Classification::Hyperbolic => theta.cosh(),
            Classification::Degenerate => return None,
        };
        Some(self.p1 + self.p2 + 2.0 * (self.p1 * self.p2).sqrt() * sign * factor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceReport {
    pub tol_classify: f64,
    pub entries: [InterferenceEntry; 2],
}

impl InterferenceReport {
    pub fn regime(&self) -> Regime {
        let [e1, e2] = &self.entries;
        use Classification::*;
        match (e1.classification, e2.classification) {
            (Degenerate, _) | (_, Degenerate) => Regime::Degenerate,
            (Trigonometric, Trigonometric) => Regime::Trigonometric,
            (Hyperbolic, Hyperbolic) => Regime::Hyperbolic,
            _ => Regime::Mixed,
        }
    }

    pub fn lambdas(&self) -> [Option<f64>; 2] {
        [self.entries[0].lambda, self.entries[1].lambda]
    }
}

/// Full per-outcome analysis. Vanishing joint terms mark only the affected
/// outcome as degenerate.
pub fn analyze_interference(
    s: &ContextualStatistics,
    tol_classify: f64,
) -> Result<InterferenceReport> {
    let entry = |j: usize| -> Result<InterferenceEntry> {
        let (p1, p2) = (s.joint(0, j), s.joint(1, j));
        let outcome = s.b_labels()[j].clone();
        if p1 <= 0.0 || p2 <= 0.0 {
            return Ok(InterferenceEntry {
                outcome,
                p1,
                p2,
                lambda: None,
                classification: Classification::Degenerate,
                phase: None,
                sign: None,
            });
        }
        let lambda = coefficient(s.b_marginals()[j], p1, p2)?;
        let classification = classify(lambda, tol_classify)?;
        let (theta, sign) = phases(lambda, classification)?;
        Ok(InterferenceEntry {
            outcome,
            p1,
            p2,
            lambda: Some(lambda),
            classification,
            phase: Some(theta),
            sign: Some(sign),
        })
    };
    Ok(InterferenceReport {
        tol_classify,
        entries: [entry(0)?, entry(1)?],
    })
}
