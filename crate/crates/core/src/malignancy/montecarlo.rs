//! Conditioned Monte Carlo on the CNOT exRec under i.i.d. depolarizing
//! location faults: estimates P(incorrect ∧ accepted) / P(accepted) for
//! codeword inputs on both blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

use super::engine::{ExRecAnalysis, FaultEffect};

/// Samples per independently seeded chunk; fixes the partitioning so that
/// results do not depend on the thread count.
const CHUNK: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub eps: f64,
    pub samples: u64,
    pub seed: u64,
    pub accepted: u64,
    pub incorrect_accepted: u64,
    /// None when no sample was accepted.
    pub estimate: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub confidence: f64,
    pub acceptance_rate: f64,
}

/// Wilson score interval for `k` successes out of `n` at two-sided
/// confidence `confidence`.
pub fn wilson_interval(k: u64, n: u64, confidence: f64) -> Option<(f64, f64)> {
    if n == 0 {
        return None;
    }
    let z = Normal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(0.5 + confidence / 2.0);
    let n_f = n as f64;
    let p = k as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    Some(((centre - half).max(0.0), (centre + half).min(1.0)))
}

/// Draws the gap to the next faulty location (geometric with success `eps`).
fn gap(rng: &mut ChaCha8Rng, log1m: f64) -> u64 {
    let u: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let g = (u.ln() / log1m).floor();
    if g >= u64::MAX as f64 {
        u64::MAX
    } else {
        g as u64
    }
}

fn run_chunk(
    a: &ExRecAnalysis,
    eps: f64,
    seed: u64,
    chunk: u64,
    count: u64,
) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let n_loc = a.sites.len() as u64;
    let total = count * n_loc;
    let (mut accepted, mut bad) = (0u64, 0u64);
    let judge = |f: &FaultEffect| -> (bool, bool) {
        let (o, d) = a.ga_image(f.ga_in_a);
        let ok = f.lead_det == 0 && (f.trail_det ^ d) == 0;
        (ok, ok && (f.out ^ o) != 0)
    };
    if eps <= 0.0 {
        return (count, 0);
    }
    let log1m = (1.0 - eps).ln();
    let mut next = if eps >= 1.0 { 0 } else { gap(&mut rng, log1m) };
    let mut sample = 0u64;
    while sample < count {
        let start = sample * n_loc;
        let end = start + n_loc;
        let mut f = FaultEffect::ZERO;
        while next < end && next < total {
            let site = &a.sites[(next - start) as usize];
            let k = rng.gen_range(0..site.option_effect.len());
            f = f.xor(&site.effects[site.option_effect[k] as usize].0);
            let step = if eps >= 1.0 { 0 } else { gap(&mut rng, log1m) };
            next = next.saturating_add(step).saturating_add(1);
        }
        let (ok, wrong) = judge(&f);
        accepted += ok as u64;
        bad += wrong as u64;
        sample += 1;
        // Skip whole fault-free samples at once.
        if next >= end && next < total {
            let skip = (next - end) / n_loc;
            accepted += skip;
            sample += skip;
        } else if next >= total {
            accepted += count - sample;
            sample = count;
        }
    }
    (accepted, bad)
}

/// Estimates the failure rate of the exRec conditioned on acceptance, with a
/// Wilson interval; deterministic for a given seed.
pub fn monte_carlo_conditional_failure(
    a: &ExRecAnalysis,
    eps: f64,
    samples: u64,
    seed: u64,
    confidence: f64,
) -> Result<MonteCarloReport> {
    if !(0.0..=0.2).contains(&eps) {
        return Err(Error::Domain(format!("eps = {eps} outside [0, 0.2]")));
    }
    if samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    if a.contracted {
        return Err(Error::Domain(
            "Monte Carlo samples physical locations; use the uncontracted exRec".into(),
        ));
    }
    let chunks = samples.div_ceil(CHUNK);
    let (accepted, bad) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK.min(samples - c * CHUNK);
            run_chunk(a, eps, seed, c, count)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    let ci = wilson_interval(bad, accepted, confidence);
    Ok(MonteCarloReport {
        eps,
        samples,
        seed,
        accepted,
        incorrect_accepted: bad,
        estimate: (accepted > 0).then(|| bad as f64 / accepted as f64),
        ci_low: ci.map(|c| c.0),
        ci_high: ci.map(|c| c.1),
        confidence,
        acceptance_rate: accepted as f64 / samples as f64,
    })
}
