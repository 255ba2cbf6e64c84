//! Level-k recursion for the failure probability of truncated and
//! untruncated exRecs, threshold bisection, and decoding-error sums.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{big_c, big_d, clamp_probability, gamma_basic, gamma_improved, GadgetMetrics, DECODER_LOCATIONS};

/// Which cluster sum enters the recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaForm {
    Basic,
    Improved,
}

impl GammaForm {
    pub fn eval(self, eps: f64, m: &GadgetMetrics) -> Result<f64> {
        match self {
            GammaForm::Basic => gamma_basic(eps, m),
            GammaForm::Improved => gamma_improved(eps, m),
        }
    }
}

/// Metrics for level 1 (physical locations) and for higher levels
/// (contracted gadgets), plus the cluster-sum form used at each.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionModel {
    pub level1: GadgetMetrics,
    pub higher: GadgetMetrics,
    pub gamma_level1: GammaForm,
    pub gamma_higher: GammaForm,
}

impl Default for RecursionModel {
    fn default() -> Self {
        RecursionModel {
            level1: GadgetMetrics::cnot_uncontracted(),
            higher: GadgetMetrics::cnot_contracted(),
            gamma_level1: GammaForm::Improved,
            gamma_higher: GammaForm::Improved,
        }
    }
}

impl RecursionModel {
    fn at_level(&self, k: usize) -> (&GadgetMetrics, GammaForm) {
        if k == 1 {
            (&self.level1, self.gamma_level1)
        } else {
            (&self.higher, self.gamma_higher)
        }
    }
}

/// One level of the recursion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionState {
    pub level: usize,
    /// Failure probability of an exRec that may be truncated.
    pub eps_k: f64,
    /// Failure probability of an untruncated exRec.
    pub eps_tilde_k: f64,
    /// Decoding error D·Σ_{j<k} ε^(j).
    pub eps_dec_k: f64,
    /// False once the recursion has left its validity range (ω ≥ 1 or a
    /// probability above 1 was clamped).
    pub converged: bool,
}

/// The full level sequence for one physical fault rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionRun {
    pub eps: f64,
    pub states: Vec<RecursionState>,
    /// First level at which the cluster sum diverged, if any.
    pub diverged_at: Option<usize>,
}

impl RecursionRun {
    pub fn eps_at(&self, k: usize) -> Option<f64> {
        self.states.get(k).map(|s| s.eps_k)
    }

    /// True when ε^(k) strictly decreases at every level.
    pub fn strictly_decreasing(&self) -> bool {
        self.diverged_at.is_none() && self.states.windows(2).all(|w| w[1].eps_k < w[0].eps_k)
    }

    /// True when ε^(k) never increases after its first decrease; the first
    /// step may rise when level-1 counts exceed higher-level counts.
    pub fn eventually_decreasing(&self) -> bool {
        let start = self
            .states
            .windows(2)
            .position(|w| w[1].eps_k < w[0].eps_k)
            .unwrap_or(self.states.len());
        self.diverged_at.is_none() && self.states[start..].windows(2).all(|w| w[1].eps_k <= w[0].eps_k)
    }
}

/// One recursion step: returns (ε^(k), ε̃^(k)) from level k−1.
pub fn recursion_step(
    eps_prev: f64,
    eps_tilde_prev: f64,
    m: &GadgetMetrics,
    form: GammaForm,
) -> Result<(f64, f64)> {
    let g = form.eval(eps_prev, m)?;
    let c = big_c(eps_prev, m);
    let d = big_d(eps_prev, m);
    let triples = m.tilde_b as f64 * g.powi(m.degree() as i32) * eps_prev.powi(3) / d;
    let pair = g * g * eps_tilde_prev * eps_tilde_prev / c;
    Ok((m.tilde_a as f64 * pair + triples, m.hat_a as f64 * pair + triples))
}

/// Iterates the recursion from physical ε up to level `k_max`. Divergence is
/// flagged in the returned run rather than raised.
pub fn iterate_levels(eps: f64, model: &RecursionModel, k_max: usize) -> Result<RecursionRun> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain(format!("ε = {eps} outside [0, 1)")));
    }
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    model.level1.validate()?;
    model.higher.validate()?;
    let mut states = vec![RecursionState {
        level: 0,
        eps_k: eps,
        eps_tilde_k: eps,
        eps_dec_k: 0.0,
        converged: true,
    }];
    let mut diverged_at = None;
    for k in 1..=k_max {
        let prev = &states[k - 1];
        let (m, form) = model.at_level(k);
        let (a, b) = match recursion_step(prev.eps_k, prev.eps_tilde_k, m, form) {
            Ok(v) => v,
            Err(Error::Divergence { .. }) | Err(Error::Domain(_)) => {
                diverged_at = Some(k);
                break;
            }
            Err(e) => return Err(e),
        };
        let within = a <= 1.0;
        let eps_dec_k = decoding_sum(states.iter().map(|s| s.eps_k));
        states.push(RecursionState {
            level: k,
            eps_k: clamp_probability(a, "ε^(k)"),
            eps_tilde_k: clamp_probability(b, "ε̃^(k)"),
            eps_dec_k: clamp_probability(eps_dec_k, "ε_dec^(k)"),
            converged: within,
        });
        if !within {
            diverged_at = Some(k);
            break;
        }
    }
    Ok(RecursionRun {
        eps,
        states,
        diverged_at,
    })
}

/// D·Σ ε^(j), summed in ascending magnitude.
fn decoding_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(|a, b| a.total_cmp(b));
    DECODER_LOCATIONS as f64 * v.iter().sum::<f64>()
}

/// Predicate of the threshold scan: ε^(k_max) falls below `target`.
pub fn below_threshold(eps: f64, model: &RecursionModel, k_max: usize, target: f64) -> bool {
    match iterate_levels(eps, model, k_max) {
        Ok(run) => run.diverged_at.is_none() && run.states.last().is_some_and(|s| s.eps_k < target),
        Err(_) => false,
    }
}

/// Threshold scan settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub k_max: usize,
    pub target: f64,
    pub resolution: f64,
    pub bracket: (f64, f64),
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            k_max: 40,
            target: 1e-12,
            resolution: 1e-6,
            bracket: (1e-6, 1e-2),
        }
    }
}

/// Largest physical ε for which the recursion drives ε^(k) to zero, by
/// bisection.
pub fn threshold_scan(model: &RecursionModel, opts: &ScanOptions) -> Result<f64> {
    let (mut lo, mut hi) = opts.bracket;
    if !below_threshold(lo, model, opts.k_max, opts.target) {
        return Err(Error::Domain(format!("lower bracket {lo} is already above threshold")));
    }
    if below_threshold(hi, model, opts.k_max, opts.target) {
        return Err(Error::Domain(format!("upper bracket {hi} is still below threshold")));
    }
    while hi - lo > opts.resolution {
        let mid = 0.5 * (lo + hi);
        if below_threshold(mid, model, opts.k_max, opts.target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Evaluates the recursion on a grid of fault rates in parallel.
pub fn scan_grid(eps: &[f64], model: &RecursionModel, k_max: usize) -> Result<Vec<RecursionRun>> {
    eps.par_iter().map(|&e| iterate_levels(e, model, k_max)).collect()
}

/// Decoding error with its analytic tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodingError {
    pub eps: f64,
    pub k: usize,
    /// D·Σ_{j<k} ε^(j).
    pub partial: f64,
    /// Growth constant of the doubly exponential tail at ε^(k).
    pub gamma_tail: f64,
    /// Bound on D·Σ_{j≥k} ε^(j).
    pub tail: f64,
    /// partial + tail.
    pub total: f64,
}

/// Tail growth constant (Ã′γ′² + B̃′γ′⁴ε)/D′ at ε = ε^(k).
pub fn tail_constant(eps_k: f64, m: &GadgetMetrics, form: GammaForm) -> Result<f64> {
    let g = form.eval(eps_k, m)?;
    Ok((m.tilde_a as f64 * g * g + m.tilde_b as f64 * g.powi(m.degree() as i32) * eps_k) / big_d(eps_k, m))
}

/// Bound on D·Σ_{j≥k} ε^(j) given ε^(k): D·ε^(k)/(1 − Γ·ε^(k)).
pub fn decoding_error_tail(eps_k: f64, m: &GadgetMetrics, form: GammaForm) -> Result<(f64, f64)> {
    let gamma = tail_constant(eps_k, m, form)?;
    let x = gamma * eps_k;
    if x >= 1.0 {
        return Err(Error::TailBound(x));
    }
    Ok((gamma, DECODER_LOCATIONS as f64 * eps_k / (1.0 - x)))
}

/// ε_dec^(k) plus the tail bound, iterating the recursion to level k.
pub fn decoding_error(eps: f64, k: usize, model: &RecursionModel) -> Result<DecodingError> {
    let run = iterate_levels(eps, model, k.max(1))?;
    if let Some(level) = run.diverged_at {
        let m = model.at_level(level).0;
        let prev = run.states[level - 1].eps_k;
        return Err(Error::Divergence {
            eps: prev,
            omega: super::omega(prev, m),
        });
    }
    let partial = decoding_sum(run.states[..k].iter().map(|s| s.eps_k));
    let eps_k = run.states[k].eps_k;
    let (gamma_tail, tail) = decoding_error_tail(eps_k, &model.higher, model.gamma_higher)?;
    Ok(DecodingError {
        eps,
        k,
        partial,
        gamma_tail,
        tail,
        total: clamp_probability(partial + tail, "ε_dec^(∞)"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_stays_zero() {
        let run = iterate_levels(0.0, &RecursionModel::default(), 10).unwrap();
        assert!(run.states.iter().all(|s| s.eps_k == 0.0 && s.eps_dec_k == 0.0));
    }

    #[test]
    fn untruncated_dominated() {
        let run = iterate_levels(5e-4, &RecursionModel::default(), 10).unwrap();
        assert!(run.states.iter().all(|s| s.eps_tilde_k <= s.eps_k));
    }
}
