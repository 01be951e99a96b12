// SPDX-License-Identifier: Apache-2.0

//! Finite Kolmogorov prespaces.
//!
//! A [`Prespace`] is a finite set of prepoints carrying a probability
//! measure. Random variables are total maps from prepoints into a finite
//! alphabet, and contexts are subsets of prepoints with positive measure.
//! Everything in this module is plain classical conditioning; context
//! perturbation lives in [`crate::dynamics`].

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for every normalization check on probabilities.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A finite probability space of prepoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Prespace {
    points: Arc<[String]>,
    weights: Vec<f64>,
}

impl Prespace {
    pub fn new(points: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::structural(
                "prespace",
                "at least one prepoint is required",
            ));
        }
        if points.len() != weights.len() {
            return Err(Error::structural(
                "prespace",
                format!("{} points but {} weights", points.len(), weights.len()),
            ));
        }
        let mut seen = HashMap::with_capacity(points.len());
        for (i, id) in points.iter().enumerate() {
            if let Some(prev) = seen.insert(id.as_str(), i) {
                return Err(Error::structural(
                    "prespace.points",
                    format!("identifier {id:?} repeated at positions {prev} and {i}"),
                ));
            }
        }
        let mut weights = weights;
        check_masses("prespace.weights", &mut weights)?;
        Ok(Self {
            points: points.into(),
            weights,
        })
    }

    /// Points named `w1, w2, ...`.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let points = (1..=weights.len()).map(|i| format!("w{i}")).collect();
        Self::new(points, weights)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_weights(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.weights[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p == id)
    }

    pub(crate) fn shared_points(&self) -> Arc<[String]> {
        Arc::clone(&self.points)
    }
}

/// A random variable on a prespace, stored as alphabet codes per prepoint.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomVariable {
    name: String,
    alphabet: Arc<[String]>,
    codes: Vec<usize>,
}

impl RandomVariable {
    /// Builds a variable whose alphabet is the set of values in order of first appearance.
    pub fn new<S: Into<String>>(name: impl Into<String>, values: Vec<S>) -> Result<Self> {
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        let mut alphabet: Vec<String> = Vec::new();
        for v in &values {
            if !alphabet.contains(v) {
                alphabet.push(v.clone());
            }
        }
        Self::with_alphabet(name, values, alphabet)
    }

    /// Builds a variable over an explicit alphabet, which may include values
    /// that no prepoint takes.
    pub fn with_alphabet<S: Into<String>, T: Into<String>>(
        name: impl Into<String>,
        values: Vec<S>,
        alphabet: Vec<T>,
    ) -> Result<Self> {
        let name = name.into();
        let alphabet: Vec<String> = alphabet.into_iter().map(Into::into).collect();
        if alphabet.is_empty() {
            return Err(Error::structural(
                format!("variable {name}"),
                "alphabet must not be empty",
            ));
        }
        let mut lookup = HashMap::with_capacity(alphabet.len());
        for (i, a) in alphabet.iter().enumerate() {
            if lookup.insert(a.clone(), i).is_some() {
                return Err(Error::structural(
                    format!("variable {name}"),
                    format!("alphabet value {a:?} repeated"),
                ));
            }
        }
        let codes = values
            .into_iter()
            .map(Into::into)
            .map(|v: String| {
                lookup.get(&v).copied().ok_or_else(|| Error::UnknownValue {
                    variable: name.clone(),
                    value: v,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if codes.is_empty() {
            return Err(Error::structural(
                format!("variable {name}"),
                "variable must assign a value to at least one prepoint",
            ));
        }
        Ok(Self {
            name,
            alphabet: alphabet.into(),
            codes,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// Alphabet index of the value at each prepoint.
    pub fn codes(&self) -> &[usize] {
        &self.codes
    }

    pub fn value_at(&self, point: usize) -> &str {
        &self.alphabet[self.codes[point]]
    }

    pub fn code_of(&self, value: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|a| a == value)
            .ok_or_else(|| Error::UnknownValue {
                variable: self.name.clone(),
                value: value.to_owned(),
            })
    }

    pub fn is_dichotomous(&self) -> bool {
        self.alphabet.len() == 2
    }

    /// The alphabet interpreted as real numbers.
    pub fn numeric_alphabet(&self) -> Result<Vec<f64>> {
        self.alphabet
            .iter()
            .map(|a| match a.trim().parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(Error::TypeMismatch(format!(
                    "variable {:?} has non-numeric value {a:?}",
                    self.name
                ))),
            })
            .collect()
    }

    pub(crate) fn check_against(&self, p: &Prespace) -> Result<()> {
        if self.codes.len() != p.len() {
            return Err(Error::structural(
                format!("variable {}", self.name),
                format!(
                    "{} values for a prespace of {} points",
                    self.codes.len(),
                    p.len()
                ),
            ));
        }
        Ok(())
    }

    pub(crate) fn shared_alphabet(&self) -> Arc<[String]> {
        Arc::clone(&self.alphabet)
    }
}

/// A set of prepoints, kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Context {
    members: Vec<usize>,
}

impl Context {
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::structural("context", "context must not be empty"));
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { members })
    }

    pub fn full(p: &Prespace) -> Self {
        Self {
            members: (0..p.len()).collect(),
        }
    }

    pub fn singleton(point: usize) -> Self {
        Self {
            members: vec![point],
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.members.binary_search(&point).is_ok()
    }

    fn check_indices(&self, p: &Prespace) -> Result<()> {
        match self.members.last() {
            Some(&last) if last >= p.len() => Err(Error::structural(
                "context",
                format!("prepoint index {last} out of range for {} points", p.len()),
            )),
            _ => Ok(()),
        }
    }

    /// Checks indices and positive measure against `p`.
    pub fn validate(&self, p: &Prespace) -> Result<()> {
        if context_probability(p, self)? > 0.0 {
            Ok(())
        } else {
            Err(Error::DegenerateContext)
        }
    }
}

/// A probability vector over labelled outcomes (prepoints or alphabet values).
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    support: Arc<[String]>,
    masses: Vec<f64>,
}

impl Distribution {
    pub fn new(support: Vec<String>, masses: Vec<f64>) -> Result<Self> {
        Self::from_shared(support.into(), masses)
    }

    pub(crate) fn from_shared(support: Arc<[String]>, mut masses: Vec<f64>) -> Result<Self> {
        if support.len() != masses.len() {
            return Err(Error::structural(
                "distribution",
                format!("{} labels but {} masses", support.len(), masses.len()),
            ));
        }
        check_masses("distribution", &mut masses)?;
        Ok(Self { support, masses })
    }

    pub fn support(&self) -> &[String] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, index: usize) -> f64 {
        self.masses[index]
    }

    pub fn mass_of(&self, label: &str) -> Option<f64> {
        self.support
            .iter()
            .position(|s| s == label)
            .map(|i| self.masses[i])
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }
}

/// Validates a probability vector, then clamps rounding overshoot (within
/// [`NORMALIZATION_TOL`]) back into `[0, 1]`.
pub(crate) fn check_masses(what: &str, masses: &mut [f64]) -> Result<()> {
    for (i, &m) in masses.iter().enumerate() {
        if !m.is_finite() || !(-NORMALIZATION_TOL..=1.0 + NORMALIZATION_TOL).contains(&m) {
            return Err(Error::structural(
                format!("{what}[{i}]"),
                format!("mass {m} outside [0, 1]"),
            ));
        }
    }
    let total: f64 = masses.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::structural(
            what,
            format!("masses sum to {total}, expected 1"),
        ));
    }
    for m in masses.iter_mut() {
        *m = m.clamp(0.0, 1.0);
    }
    Ok(())
}

/// Total weight of the members of `c`.
pub fn context_probability(p: &Prespace, c: &Context) -> Result<f64> {
    c.check_indices(p)?;
    Ok(c.members.iter().map(|&i| p.weights[i]).sum())
}

/// `P(· | c)` as a distribution over all prepoints.
pub fn conditional_distribution(p: &Prespace, c: &Context) -> Result<Distribution> {
    let norm = context_probability(p, c)?;
    if norm <= 0.0 {
        return Err(Error::DegenerateContext);
    }
    let mut masses = vec![0.0; p.len()];
    for &i in &c.members {
        masses[i] = p.weights[i] / norm;
    }
    Distribution::from_shared(p.shared_points(), masses)
}

/// Pushforward of `P(· | c)` through `v`.
pub fn variable_distribution(
    p: &Prespace,
    v: &RandomVariable,
    c: &Context,
) -> Result<Distribution> {
    v.check_against(p)?;
    let cond = conditional_distribution(p, c)?;
    Distribution::from_shared(v.shared_alphabet(), pushforward(cond.masses(), v))
}

pub(crate) fn pushforward(masses: &[f64], v: &RandomVariable) -> Vec<f64> {
    let mut out = vec![0.0; v.alphabet.len()];
    for (&m, &code) in masses.iter().zip(&v.codes) {
        out[code] += m;
    }
    out
}

/// Conditional mean and dispersion (variance) of a numeric variable.
pub fn expectation_and_dispersion(
    p: &Prespace,
    v: &RandomVariable,
    c: &Context,
) -> Result<(f64, f64)> {
    v.check_against(p)?;
    let numeric = v.numeric_alphabet()?;
    let cond = conditional_distribution(p, c)?;
    let value = |i: usize| numeric[v.codes[i]];
    let mean: f64 = c.members.iter().map(|&i| cond.masses[i] * value(i)).sum();
    // Central second moment: non-negative by construction and exactly zero on point masses.
    let dispersion: f64 = c
        .members
        .iter()
        .map(|&i| {
            let d = value(i) - mean;
            cond.masses[i] * d * d
        })
        .sum();
    Ok((mean, dispersion.max(0.0)))
}

/// The preimage `{ω : v(ω) = x}`.
pub fn fiber(p: &Prespace, v: &RandomVariable, x: &str) -> Result<Context> {
    v.check_against(p)?;
    let code = v.code_of(x)?;
    let members: Vec<usize> = (0..p.len()).filter(|&i| v.codes[i] == code).collect();
    if members.is_empty() {
        return Err(Error::DegenerateContext);
    }
    Ok(Context { members })
}

/// Number of prepoints per alphabet value.
pub fn compression_ratio(p: &Prespace, v: &RandomVariable) -> f64 {
    p.len() as f64 / v.alphabet.len() as f64
}

/// `c ∩ {v = x}`, required to have positive measure.
pub fn filter_context(p: &Prespace, c: &Context, v: &RandomVariable, x: &str) -> Result<Context> {
    v.check_against(p)?;
    c.check_indices(p)?;
    let code = v.code_of(x)?;
    filter_by_code(p, c, v, code)
}

pub(crate) fn filter_by_code(
    p: &Prespace,
    c: &Context,
    v: &RandomVariable,
    code: usize,
) -> Result<Context> {
    let members: Vec<usize> = c
        .members
        .iter()
        .copied()
        .filter(|&i| v.codes[i] == code)
        .collect();
    let weight: f64 = members.iter().map(|&i| p.weights[i]).sum();
    if members.is_empty() || weight <= 0.0 {
        return Err(Error::DegenerateContext);
    }
    Ok(Context { members })
}
