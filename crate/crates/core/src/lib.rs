// SPDX-License-Identifier: Apache-2.0

//! Contextual probability on finite prespaces.
//!
//! The crate is layered bottom-up:
//!
//! - [`prespace`]: finite Kolmogorov spaces, random variables, contexts,
//!   conditioning, fibers and dispersion.
//! - [`dynamics`]: perturbation kernels that turn an a-measurement into a
//!   change of context, the resulting [`ContextualStatistics`], and seeded
//!   frequency sampling.
//! - [`interference`]: interference coefficients `λ_j`, the
//!   trigonometric/hyperbolic classification, and phases.
//! - [`representation`]: complex and split-complex amplitudes, Born-rule
//!   residuals, and the a-observable basis.
//!
//! ```
//! use ctxprob::prelude::*;
//!
//! let p = Prespace::uniform(2)?;
//! let a = RandomVariable::new("a", vec!["a1", "a2"])?;
//! let b = RandomVariable::new("b", vec!["b1", "b2"])?;
//! let k = PerturbationKernel::new(vec![vec![0.9, 0.1], vec![0.3, 0.7]])?;
//! let s = contextual_statistics(&p, &Context::full(&p), &a, &b, &k)?;
//! assert!(is_contextually_sensitive(&s, DEFAULT_SENSITIVITY_TOL));
//! let r = analyze_interference(&s, DEFAULT_CLASSIFY_TOL)?;
//! let psi = trig_amplitude(&s, &r)?;
//! assert!(born_residual(&psi.into(), &s) <= BORN_TOL);
//! # Ok::<(), ctxprob::Error>(())
//! ```

pub mod dynamics;
mod error;
pub mod interference;
pub mod prespace;
pub mod representation;

pub use dynamics::ContextualStatistics;
pub use error::{Error, JointTerm, Result};

pub mod prelude {
    pub use crate::dynamics::{
        apply_kernel, contextual_statistics, is_contextually_sensitive, perturbed_distribution,
        sample_frequencies, total_probability_mismatch, transition_probabilities,
        ContextualStatistics, FrequencyTable, Perturbation, PerturbationKernel,
        DEFAULT_SENSITIVITY_TOL,
    };
    pub use crate::error::{Error, Result};
    pub use crate::interference::{
        analyze_interference, classify, interference_coefficients, phases, Classification,
        InterferenceEntry, InterferenceReport, Regime, DEFAULT_CLASSIFY_TOL,
    };
    pub use crate::prespace::{
        compression_ratio, conditional_distribution, context_probability,
        expectation_and_dispersion, fiber, filter_context, variable_distribution, Context,
        Distribution, Prespace, RandomVariable,
    };
    pub use crate::representation::{
        a_basis, born_residual, hyperbolic_amplitude, trig_amplitude, ABasis, Amplitude,
        ComplexAmplitudeVector, HyperbolicAmplitudeVector, HyperbolicNumber, BORN_TOL,
    };
}
