// SPDX-License-Identifier: Apache-2.0

//! Quantum-like states reconstructed from contextual statistics.
//!
//! Trigonometric contexts map to complex amplitudes
//! `ψ(β_j) = sqrt(P_1j) + e^{iθ_j}·sqrt(P_2j)`, hyperbolic contexts to
//! split-complex amplitudes `ψ(β_j) = sqrt(P_1j) + ε_j·e^{jθ_j}·sqrt(P_2j)`.
//! In both cases the squared modulus of each component reproduces the
//! observed b-probability. The first term is kept real and non-negative to
//! fix the global phase.

mod hyperbolic;

pub use hyperbolic::HyperbolicNumber;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{ContextualStatistics, STATISTICS_TOL};
use crate::error::{Error, JointTerm, Result};
use crate::interference::{Classification, InterferenceReport};

/// Born-rule tolerance for amplitudes built by this module.
pub const BORN_TOL: f64 = 1e-10;

/// Bound on the a-basis inner product when the transition matrix is doubly stochastic.
pub const ORTHONORMALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexAmplitudeVector {
    pub components: [Complex64; 2],
}

impl ComplexAmplitudeVector {
    pub fn born(&self) -> [f64; 2] {
        self.components.map(|z| z.norm_sqr())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicAmplitudeVector {
    pub components: [HyperbolicNumber; 2],
}

impl HyperbolicAmplitudeVector {
    pub fn born(&self) -> [f64; 2] {
        self.components.map(HyperbolicNumber::squared_modulus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "lowercase")]
pub enum Amplitude {
    Trigonometric(ComplexAmplitudeVector),
    Hyperbolic(HyperbolicAmplitudeVector),
}

impl Amplitude {
    pub fn born(&self) -> [f64; 2] {
        match self {
            Amplitude::Trigonometric(v) => v.born(),
            Amplitude::Hyperbolic(v) => v.born(),
        }
    }
}

impl From<ComplexAmplitudeVector> for Amplitude {
    fn from(v: ComplexAmplitudeVector) -> Self {
        Amplitude::Trigonometric(v)
    }
}

impl From<HyperbolicAmplitudeVector> for Amplitude {
    fn from(v: HyperbolicAmplitudeVector) -> Self {
        Amplitude::Hyperbolic(v)
    }
}

fn require_all(r: &InterferenceReport, wanted: Classification) -> Result<()> {
    for e in &r.entries {
        if e.classification != wanted {
            return Err(Error::WrongRegime(format!(
                "outcome {:?} is {:?}, expected {wanted:?}",
                e.outcome, e.classification
            )));
        }
    }
    Ok(())
}

pub fn trig_amplitude(
    s: &ContextualStatistics,
    r: &InterferenceReport,
) -> Result<ComplexAmplitudeVector> {
    require_all(r, Classification::Trigonometric)?;
    let component = |j: usize| {
        let theta = r.entries[j]
            .phase
            .expect("trigonometric entries carry a phase");
        Complex64::new(s.joint(0, j).sqrt(), 0.0)
            + Complex64::from_polar(s.joint(1, j).sqrt(), theta)
    };
    Ok(ComplexAmplitudeVector {
        components: [component(0), component(1)],
    })
}

pub fn hyperbolic_amplitude(
    s: &ContextualStatistics,
    r: &InterferenceReport,
) -> Result<HyperbolicAmplitudeVector> {
    for (j, e) in r.entries.iter().enumerate() {
        if e.classification == Classification::Degenerate {
            let a_index = if s.joint(0, j) <= 0.0 { 0 } else { 1 };
            return Err(Error::DegenerateDenominator(JointTerm {
                a_index,
                b_index: j,
            }));
        }
    }
    require_all(r, Classification::Hyperbolic)?;
    let component = |j: usize| {
        let e = &r.entries[j];
        let theta = e.phase.expect("hyperbolic entries carry a phase");
        let sign = f64::from(e.sign.expect("hyperbolic entries carry a sign"));
        HyperbolicNumber::real(s.joint(0, j).sqrt())
            + HyperbolicNumber::exp_j(theta) * (sign * s.joint(1, j).sqrt())
    };
    Ok(HyperbolicAmplitudeVector {
        components: [component(0), component(1)],
    })
}

/// `max_j |modulus²(ψ(β_j)) − p(β_j)|`.
pub fn born_residual(psi: &Amplitude, s: &ContextualStatistics) -> f64 {
    psi.born()
        .iter()
        .zip(s.b_marginals())
        .map(|(born, p)| (born - p).abs())
        .fold(0.0, f64::max)
}

/// Eigenbasis of the a-observable expressed in the b-representation.
#[derive(Debug, Clone, PartialEq)]
pub struct ABasis {
    /// `vectors[i]` is `e^a_{i+1}`, with components indexed by b-value.
    pub vectors: [[Complex64; 2]; 2],
    /// Phases `(θ_1, θ_2)` attached to `e^a_2`; `θ_2` is either the principal
    /// phase or its reflection `2π − θ_2`, whichever makes the basis orthogonal.
    pub phases: [f64; 2],
    pub norms: [f64; 2],
    /// `|⟨e^a_1, e^a_2⟩|`.
    pub defect: f64,
    /// `sqrt(p(α_1))·e^a_1 + sqrt(p(α_2))·e^a_2`.
    pub state: ComplexAmplitudeVector,
}

impl ABasis {
    /// Born probabilities of `psi` in the a-basis.
    pub fn a_born(&self, psi: &ComplexAmplitudeVector) -> [f64; 2] {
        self.vectors.map(|e| inner(&e, &psi.components).norm_sqr())
    }
}

fn inner(u: &[Complex64; 2], v: &[Complex64; 2]) -> Complex64 {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

/// Builds `e^a_1 = (sqrt p(β_1|α_1), sqrt p(β_2|α_1))` and
/// `e^a_2 = (e^{iθ_1}·sqrt p(β_1|α_2), e^{iθ_2}·sqrt p(β_2|α_2))`.
///
/// Degenerate entries contribute phase 0; their amplitude factor is zero.
pub fn a_basis(s: &ContextualStatistics, r: &InterferenceReport) -> Result<ABasis> {
    if let Some(e) = r
        .entries
        .iter()
        .find(|e| e.classification == Classification::Hyperbolic)
    {
        return Err(Error::WrongRegime(format!(
            "outcome {:?} is hyperbolic; the a-basis needs a complex representation",
            e.outcome
        )));
    }
    let t = s.transition();
    let row_sums = vec![t[0][0] + t[0][1], t[1][0] + t[1][1]];
    let column_sums = vec![t[0][0] + t[1][0], t[0][1] + t[1][1]];
    if column_sums.iter().any(|c| (c - 1.0).abs() > STATISTICS_TOL) {
        return Err(Error::NotDoublyStochastic {
            row_sums,
            column_sums,
        });
    }

    let theta = r.entries.clone().map(|e| e.phase.unwrap_or(0.0));
    let first = [
        Complex64::new(t[0][0].sqrt(), 0.0),
        Complex64::new(t[0][1].sqrt(), 0.0),
    ];
    let second = |theta2: f64| {
        [
            Complex64::from_polar(t[1][0].sqrt(), theta[0]),
            Complex64::from_polar(t[1][1].sqrt(), theta2),
        ]
    };
    let principal = second(theta[1]);
    let reflected_phase = (TAU - theta[1]) % TAU;
    let reflected = second(reflected_phase);
    let (d_principal, d_reflected) = (
        inner(&first, &principal).norm(),
        inner(&first, &reflected).norm(),
    );
    let (vector, theta2, defect) = if d_reflected < d_principal {
        (reflected, reflected_phase, d_reflected)
    } else {
        (principal, theta[1], d_principal)
    };

    let [c1, c2] = s.a_marginals().map(f64::sqrt);
    let state = ComplexAmplitudeVector {
        components: [
            first[0] * c1 + vector[0] * c2,
            first[1] * c1 + vector[1] * c2,
        ],
    };
    let norm = |v: &[Complex64; 2]| inner(v, v).re.sqrt();
    Ok(ABasis {
        vectors: [first, vector],
        phases: [theta[0], theta2],
        norms: [norm(&first), norm(&vector)],
        defect,
        state,
    })
}
