// SPDX-License-Identifier: Apache-2.0

//! Measurement-induced context perturbation.
//!
//! Measuring `a` selects the prepoints with the observed value and then moves
//! them through a row-stochastic [`PerturbationKernel`]; `b` is read off the
//! destination prepoint. Measuring `b` alone in the original context is
//! kernel-free. With the identity kernel this collapses to plain Kolmogorov
//! conditioning and the law of total probability holds exactly.

mod sampling;

pub use sampling::{sample_frequencies, FrequencyTable, Perturbation, SAMPLING_CHUNK};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prespace::{
    conditional_distribution, filter_by_code, pushforward, variable_distribution, Context,
    Distribution, Prespace, RandomVariable, NORMALIZATION_TOL,
};

/// Tolerance for the normalization of [`ContextualStatistics`].
pub const STATISTICS_TOL: f64 = 1e-10;

/// Default threshold for [`is_contextually_sensitive`].
pub const DEFAULT_SENSITIVITY_TOL: f64 = 1e-9;

/// Row-stochastic transition matrix on prepoints, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationKernel {
    dim: usize,
    entries: Vec<f64>,
}

impl PerturbationKernel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::structural(
                "kernel",
                "kernel must have at least one row",
            ));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::structural(
                    format!("kernel row {i}"),
                    format!("row has {} entries, expected {dim}", row.len()),
                ));
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::structural(
                        format!("kernel row {i}"),
                        format!("entry {j} is {x}, expected a non-negative number"),
                    ));
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::structural(
                    format!("kernel row {i}"),
                    format!("row sums to {sum}, expected 1"),
                ));
            }
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, source: usize) -> &[f64] {
        &self.entries[source * self.dim..(source + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.dim)
    }

    pub(crate) fn check_against(&self, p: &Prespace) -> Result<()> {
        if self.dim != p.len() {
            return Err(Error::structural(
                "kernel",
                format!(
                    "dimension {} for a prespace of {} points",
                    self.dim,
                    p.len()
                ),
            ));
        }
        Ok(())
    }
}

/// Push a prepoint distribution through the kernel: `d'(ω') = Σ_ω d(ω)·k(ω→ω')`.
pub fn apply_kernel(
    p: &Prespace,
    d: &Distribution,
    k: &PerturbationKernel,
) -> Result<Distribution> {
    k.check_against(p)?;
    if d.len() != p.len() {
        return Err(Error::structural(
            "distribution",
            format!("{} masses for a prespace of {} points", d.len(), p.len()),
        ));
    }
    Distribution::from_shared(p.shared_points(), apply_masses(d.masses(), k))
}

fn apply_masses(masses: &[f64], k: &PerturbationKernel) -> Vec<f64> {
    let mut out = vec![0.0; k.dim];
    for (src, &m) in masses.iter().enumerate() {
        if m == 0.0 {
            continue;
        }
        for (o, &t) in out.iter_mut().zip(k.row(src)) {
            *o += m * t;
        }
    }
    out
}

/// `p(b = β_j | α_i)` measured in the perturbed context `C_{α_i}`, one row per a-value.
pub fn transition_probabilities(
    p: &Prespace,
    c: &Context,
    a: &RandomVariable,
    b: &RandomVariable,
    k: &PerturbationKernel,
) -> Result<Vec<Vec<f64>>> {
    a.check_against(p)?;
    b.check_against(p)?;
    k.check_against(p)?;
    c.validate(p)?;
    (0..a.alphabet().len())
        .map(|code| {
            let selected = filter_by_code(p, c, a, code)?;
            let cond = conditional_distribution(p, &selected)?;
            Ok(pushforward(&apply_masses(cond.masses(), k), b))
        })
        .collect()
}

/// Distribution of `v` after selecting `a = a_value` in `c` and applying `k`.
pub fn perturbed_distribution(
    p: &Prespace,
    c: &Context,
    a: &RandomVariable,
    a_value: &str,
    k: &PerturbationKernel,
    v: &RandomVariable,
) -> Result<Distribution> {
    a.check_against(p)?;
    v.check_against(p)?;
    k.check_against(p)?;
    c.validate(p)?;
    let selected = filter_by_code(p, c, a, a.code_of(a_value)?)?;
    let cond = conditional_distribution(p, &selected)?;
    Distribution::from_shared(
        v.shared_alphabet(),
        pushforward(&apply_masses(cond.masses(), k), v),
    )
}

/// Everything the interference analysis needs for one pair of dichotomous variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStatistics", into = "RawStatistics")]
pub struct ContextualStatistics {
    a_labels: [String; 2],
    b_labels: [String; 2],
    a_marginals: [f64; 2],
    b_marginals: [f64; 2],
    transition: [[f64; 2]; 2],
}

#[derive(Serialize, Deserialize)]
struct RawStatistics {
    a_labels: [String; 2],
    b_labels: [String; 2],
    a_marginals: [f64; 2],
    b_marginals: [f64; 2],
    transition: [[f64; 2]; 2],
}

impl TryFrom<RawStatistics> for ContextualStatistics {
    type Error = Error;

    fn try_from(r: RawStatistics) -> Result<Self> {
        Self::new(
            r.a_labels,
            r.b_labels,
            r.a_marginals,
            r.b_marginals,
            r.transition,
        )
    }
}

impl From<ContextualStatistics> for RawStatistics {
    fn from(s: ContextualStatistics) -> Self {
        Self {
            a_labels: s.a_labels,
            b_labels: s.b_labels,
            a_marginals: s.a_marginals,
            b_marginals: s.b_marginals,
            transition: s.transition,
        }
    }
}

fn check_probability_vector(what: &str, v: &mut [f64]) -> Result<()> {
    if v.iter()
        .any(|x| !x.is_finite() || !(-STATISTICS_TOL..=1.0 + STATISTICS_TOL).contains(x))
    {
        return Err(Error::structural(
            what,
            format!("entries {v:?} outside [0, 1]"),
        ));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > STATISTICS_TOL {
        return Err(Error::structural(
            what,
            format!("sums to {sum}, expected 1"),
        ));
    }
    for x in v.iter_mut() {
        *x = x.clamp(0.0, 1.0);
    }
    Ok(())
}

impl ContextualStatistics {
    pub fn new(
        a_labels: [String; 2],
        b_labels: [String; 2],
        mut a_marginals: [f64; 2],
        mut b_marginals: [f64; 2],
        mut transition: [[f64; 2]; 2],
    ) -> Result<Self> {
        check_probability_vector("a_marginals", &mut a_marginals)?;
        check_probability_vector("b_marginals", &mut b_marginals)?;
        for (i, row) in transition.iter_mut().enumerate() {
            check_probability_vector(&format!("transition row {i}"), row)?;
        }
        Ok(Self {
            a_labels,
            b_labels,
            a_marginals,
            b_marginals,
            transition,
        })
    }

    /// Statistics with default labels `a1, a2` and `b1, b2`.
    pub fn unlabeled(
        a_marginals: [f64; 2],
        b_marginals: [f64; 2],
        transition: [[f64; 2]; 2],
    ) -> Result<Self> {
        Self::new(
            ["a1".into(), "a2".into()],
            ["b1".into(), "b2".into()],
            a_marginals,
            b_marginals,
            transition,
        )
    }

    pub fn a_labels(&self) -> &[String; 2] {
        &self.a_labels
    }

    pub fn b_labels(&self) -> &[String; 2] {
        &self.b_labels
    }

    pub fn a_marginals(&self) -> [f64; 2] {
        self.a_marginals
    }

    pub fn b_marginals(&self) -> [f64; 2] {
        self.b_marginals
    }

    pub fn transition(&self) -> [[f64; 2]; 2] {
        self.transition
    }

    /// `P_ij = p(a = α_i)·p(β_j | α_i)`.
    pub fn joint(&self, a_index: usize, b_index: usize) -> f64 {
        self.a_marginals[a_index] * self.transition[a_index][b_index]
    }

    /// Total-probability prediction `Σ_i P_ij` for `β_j`.
    pub fn predicted_b(&self, b_index: usize) -> f64 {
        self.joint(0, b_index) + self.joint(1, b_index)
    }
}

/// Builds the statistics for `(a, b)` in context `c`: marginals kernel-free,
/// transitions through `k`.
pub fn contextual_statistics(
    p: &Prespace,
    c: &Context,
    a: &RandomVariable,
    b: &RandomVariable,
    k: &PerturbationKernel,
) -> Result<ContextualStatistics> {
    for v in [a, b] {
        if !v.is_dichotomous() {
            return Err(Error::TypeMismatch(format!(
                "variable {:?} has {} values, expected 2",
                v.name(),
                v.alphabet().len()
            )));
        }
    }
    let a_marg = variable_distribution(p, a, c)?;
    let b_marg = variable_distribution(p, b, c)?;
    let rows = transition_probabilities(p, c, a, b, k)?;
    let pair = |v: &[f64]| [v[0], v[1]];
    let labels = |v: &RandomVariable| [v.alphabet()[0].clone(), v.alphabet()[1].clone()];
    ContextualStatistics::new(
        labels(a),
        labels(b),
        pair(a_marg.masses()),
        pair(b_marg.masses()),
        [pair(&rows[0]), pair(&rows[1])],
    )
}

/// `max_j |p(β_j) − Σ_i P_ij|`.
pub fn total_probability_mismatch(s: &ContextualStatistics) -> f64 {
    (0..2)
        .map(|j| (s.b_marginals[j] - s.predicted_b(j)).abs())
        .fold(0.0, f64::max)
}

pub fn is_contextually_sensitive(s: &ContextualStatistics, tol: f64) -> bool {
    total_probability_mismatch(s) > tol
}
