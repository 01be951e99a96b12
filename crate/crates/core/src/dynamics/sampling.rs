// SPDX-License-Identifier: Apache-2.0

//! Seeded Monte Carlo estimation of relative frequencies.
//!
//! Trials are split into fixed-size chunks; chunk `k` draws from a ChaCha8
//! stream `k` under the caller's seed. Chunk counts are summed as integers,
//! so the table depends only on `(inputs, seed)` and never on how rayon
//! schedules the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PerturbationKernel;
use crate::error::{Error, Result};
use crate::prespace::{filter_context, Context, Prespace, RandomVariable};

/// Trials per independently seeded chunk.
pub const SAMPLING_CHUNK: u64 = 8192;

/// Select on `a = a_value`, then move through `kernel` before reading the variable.
#[derive(Debug, Clone, Copy)]
pub struct Perturbation<'a> {
    pub kernel: &'a PerturbationKernel,
    pub a: &'a RandomVariable,
    pub a_value: &'a str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub variable: String,
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    pub total: u64,
    pub seed: u64,
}

impl FrequencyTable {
    pub fn relative_frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.total as f64)
            .collect()
    }
}

struct Cumulative {
    items: Vec<usize>,
    cdf: Vec<f64>,
}

impl Cumulative {
    fn new(items: Vec<usize>, weights: impl Iterator<Item = f64>) -> Self {
        let mut acc = 0.0;
        let cdf = weights
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Self { items, cdf }
    }

    fn draw(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cdf.last().expect("non-empty support");
        let u = rng.random::<f64>() * total;
        let pos = self.cdf.partition_point(|&c| c <= u);
        self.items[pos.min(self.items.len() - 1)]
    }
}

/// Draws `n` independent outcomes of `v` in context `c`, optionally after an
/// a-selection and kernel step.
pub fn sample_frequencies(
    p: &Prespace,
    c: &Context,
    v: &RandomVariable,
    n: u64,
    seed: u64,
    perturbation: Option<Perturbation<'_>>,
) -> Result<FrequencyTable> {
    if n == 0 {
        return Err(Error::structural(
            "sample",
            "trial count must be at least 1",
        ));
    }
    v.check_against(p)?;
    c.validate(p)?;
    let source = match perturbation {
        Some(pert) => {
            pert.kernel.check_against(p)?;
            filter_context(p, c, pert.a, pert.a_value)?
        }
        None => c.clone(),
    };
    let members = source.members().to_vec();
    let start = Cumulative::new(members.clone(), members.iter().map(|&i| p.weight(i)));
    // Destination CDFs are only needed for rows the source context can reach.
    let rows: Option<Vec<Cumulative>> = perturbation.map(|pert| {
        members
            .iter()
            .map(|&src| {
                let row = pert.kernel.row(src);
                Cumulative::new((0..p.len()).collect(), row.iter().copied())
            })
            .collect()
    });

    let alphabet = v.alphabet().len();
    let codes = v.codes();
    let chunks = n.div_ceil(SAMPLING_CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let trials = SAMPLING_CHUNK.min(n - chunk * SAMPLING_CHUNK);
            let mut local = vec![0u64; alphabet];
            for _ in 0..trials {
                let mut point = start.draw(&mut rng);
                if let Some(rows) = &rows {
                    let slot = members.binary_search(&point).expect("drawn from members");
                    point = rows[slot].draw(&mut rng);
                }
                local[codes[point]] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; alphabet],
            |mut acc, part| {
                for (a, b) in acc.iter_mut().zip(part) {
                    *a += b;
                }
                acc
            },
        );

    Ok(FrequencyTable {
        variable: v.name().to_owned(),
        labels: v.alphabet().to_vec(),
        counts,
        total: n,
        seed,
    })
}
