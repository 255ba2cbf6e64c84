//! Error budgets built on the recursion: ancilla and Bell-pair errors, the
//! outer-code failure chain, distillation maps, adversarial-noise failure
//! and the overhead estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::recursion::{decoding_error, RecursionModel};
use super::{clamp_probability, MAX_REC_SIZE};

/// Ancilla and Bell-measurement error budgets at level k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    pub eps: f64,
    pub k: usize,
    pub eps_k: f64,
    pub eps_dec_k: f64,
    pub eps_dec_inf: f64,
    /// 3ε^(k) + ε_dec^(k) + 4ε.
    pub eps_anc: f64,
    /// 2ε_dec^(k) + 5ε.
    pub eps_bell_k: f64,
    /// 2ε_dec^(∞) + 5ε: the effective noise seen by the outer code.
    pub eps_bell_inf: f64,
}

/// ε_anc = 3ε^(k) + ε_dec^(k) + 4ε.
pub fn eps_anc(eps: f64, eps_k: f64, eps_dec_k: f64) -> f64 {
    clamp_probability(3.0 * eps_k + eps_dec_k + 4.0 * eps, "ε_anc")
}

/// ε_Bell = 2ε_dec + 5ε.
pub fn eps_bell(eps: f64, eps_dec: f64) -> f64 {
    clamp_probability(2.0 * eps_dec + 5.0 * eps, "ε_Bell")
}

/// Budgets at level k, with ε_dec^(∞) from the tail bound.
pub fn anc_and_bell_budgets(eps: f64, k: usize, model: &RecursionModel) -> Result<Budgets> {
    let dec = decoding_error(eps, k, model)?;
    let run = super::iterate_levels(eps, model, k)?;
    let eps_k = run.states[k].eps_k;
    Ok(Budgets {
        eps,
        k,
        eps_k,
        eps_dec_k: dec.partial,
        eps_dec_inf: dec.total,
        eps_anc: eps_anc(eps, eps_k, dec.partial),
        eps_bell_k: eps_bell(eps, dec.partial),
        eps_bell_inf: eps_bell(eps, dec.total),
    })
}

/// Outer code used for the final concatenation stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OuterCode {
    /// The 5-qubit code: a level fails when two of five locations fail.
    FiveQubit,
}

impl OuterCode {
    pub fn pair_coefficient(self) -> f64 {
        match self {
            OuterCode::FiveQubit => 10.0,
        }
    }
}

/// Level-`levels` failure probability of a single-qubit operation,
/// iterating x → c·x².
pub fn c2_failure(eps_prime: f64, code: OuterCode, levels: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&eps_prime) {
        return Err(Error::Domain(format!("ε′ = {eps_prime} outside [0, 1)")));
    }
    let c = code.pair_coefficient();
    let mut x = eps_prime;
    for _ in 0..levels {
        x = clamp_probability(c * x * x, "outer-code failure");
    }
    Ok(x)
}

/// Two-qubit gates use two Bell measurements, either of which may fail.
pub fn c2_two_qubit_failure(eps_prime: f64, code: OuterCode, levels: usize) -> Result<f64> {
    Ok(clamp_probability(2.0 * c2_failure(eps_prime, code, levels)?, "two-qubit failure"))
}

fn check_half_open(x: f64, what: &str) -> Result<()> {
    if !(0.0..0.5).contains(&x) {
        return Err(Error::Domain(format!("{what} = {x} outside [0, 1/2)")));
    }
    Ok(())
}

/// One round of |+i⟩ purification: both inputs must be wrong to pass an
/// error, conditioned on acceptance.
pub fn distill_plus_i(eps_anc: f64) -> Result<f64> {
    check_half_open(eps_anc, "ε_anc")?;
    let e2 = eps_anc * eps_anc;
    Ok(e2 / (e2 + (1.0 - eps_anc) * (1.0 - eps_anc)))
}

/// One round of 15-to-1 |H⟩ distillation, bounded by the 35 weight-3 and 945
/// weight-4 bad sets: (35ε³ + 945ε⁴)/(1−ε)^15.
pub fn distill_h(eps: f64) -> Result<f64> {
    check_half_open(eps, "ε")?;
    Ok((35.0 * eps.powi(3) + 945.0 * eps.powi(4)) / (1.0 - eps).powi(15))
}

/// Distillation thresholds: inputs below these contract toward zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistillThresholds {
    pub plus_i: f64,
    pub h: f64,
}

/// Nonzero fixed point of a distillation map by bisection of f(x) − x.
fn bisect_fixed_point(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) < mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// |H⟩ threshold of the distillation map, to 10⁻⁹ absolute.
pub fn distill_h_threshold() -> f64 {
    bisect_fixed_point(|x| distill_h(x).unwrap_or(f64::INFINITY), 1e-3, 0.2, 1e-9)
}

/// |+i⟩ threshold: x²/(x²+(1−x)²) = x has the unique interior root 1/2.
pub fn distill_plus_i_threshold() -> f64 {
    0.5
}

pub fn distill_fixed_points() -> DistillThresholds {
    DistillThresholds {
        plus_i: distill_plus_i_threshold(),
        h: distill_h_threshold(),
    }
}

/// Conditional failure probability of a level-k location under adversarial
/// local stochastic noise with `l0` locations in its support:
/// ε^{2^k}/(ε^{2^k} + (1−ε)^{L0}).
pub fn adversarial_pfail(eps: f64, l0: u64, k: u32) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("ε = {eps} outside (0, 1)")));
    }
    let log_ratio = 2f64.powi(k as i32) * eps.ln() - l0 as f64 * (1.0 - eps).ln();
    // r/(1+r) with r = e^{log_ratio}, evaluated stably.
    Ok(if log_ratio > 0.0 {
        1.0 / (1.0 + (-log_ratio).exp())
    } else {
        let r = log_ratio.exp();
        r / (1.0 + r)
    })
}

/// Smallest L0 for which the adversarial failure probability reaches 1/2.
pub fn adversarial_halfpoint(eps: f64, k: u32) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("ε = {eps} outside (0, 1)")));
    }
    let estimate = (2f64.powi(k as i32) * eps.ln() / (1.0 - eps).ln()).ceil().max(0.0) as u64;
    let mut l0 = estimate.saturating_sub(2);
    while adversarial_pfail(eps, l0, k)? < 0.5 {
        l0 += 1;
    }
    Ok(l0)
}

/// Closed-form sufficient support size 2^k·ε⁻¹·ln(1/ε).
pub fn adversarial_sufficient_support(eps: f64, k: u32) -> f64 {
    2f64.powi(k as i32) / eps * (1.0 / eps).ln()
}

/// Concatenation level and circuit size needed to simulate an outer-code
/// preparation circuit of `l2` gates with per-gate failure below 10⁻⁴/L₂.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Overhead {
    pub eps: f64,
    pub eps0: f64,
    pub l2: f64,
    /// log(10⁴ε₀L₂)/log(ε₀/ε), the required value of 2^k.
    pub ratio: f64,
    pub k: u32,
    pub log2_rec_size: f64,
    pub size: f64,
    /// Expected total cost N·L including repetitions until acceptance;
    /// infinite when e^{εL} overflows.
    pub total_cost: f64,
    /// log₁₀ of `total_cost`, finite even when the cost overflows.
    pub log10_total_cost: f64,
}

pub fn overhead(eps: f64, eps0: f64, l2: f64) -> Result<Overhead> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain(format!("ε = {eps} must be positive")));
    }
    if eps >= eps0 {
        return Err(Error::Domain(format!(
            "ε = {eps} is not below the threshold ε₀ = {eps0}"
        )));
    }
    if l2 < 1.0 {
        return Err(Error::Domain(format!("L₂ = {l2} must be at least 1")));
    }
    let raw = (1e4 * eps0 * l2).ln() / (eps0 / eps).ln();
    let ratio = if raw < 1.0 {
        log::warn!("required 2^k = {raw} below 1; using level 0");
        1.0
    } else {
        raw
    };
    let k = ratio.log2().ceil().max(0.0) as u32;
    let log2_rec_size = (MAX_REC_SIZE as f64).log2();
    let size = l2 * ratio.powf(log2_rec_size);
    let log_cost = 1e4f64.ln().ln() + size.ln() + eps * size;
    let total_cost = log_cost.exp();
    Ok(Overhead {
        eps,
        eps0,
        l2,
        ratio,
        k,
        log2_rec_size,
        size,
        total_cost,
        log10_total_cost: log_cost / std::f64::consts::LN_10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_i_round() {
        assert!((distill_plus_i(0.1).unwrap() - 0.01 / 0.82).abs() < 1e-15);
        assert_eq!(distill_plus_i(0.0).unwrap(), 0.0);
    }

    #[test]
    fn adversary_sample() {
        let p = adversarial_pfail(0.01, 1000, 1).unwrap();
        let oracle = 1e-4 / (1e-4 + 0.99f64.powi(1000));
        assert!((p - oracle).abs() < 1e-12);
        let p0 = adversarial_pfail(0.01, 0, 1).unwrap();
        assert!((p0 - 1e-4 / (1e-4 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn halfpoint_is_minimal() {
        for &(eps, k) in &[(0.01, 1), (0.001, 3), (0.2, 0)] {
            let l = adversarial_halfpoint(eps, k).unwrap();
            assert!(adversarial_pfail(eps, l, k).unwrap() >= 0.5);
            if l > 0 {
                assert!(adversarial_pfail(eps, l - 1, k).unwrap() < 0.5);
            }
        }
    }

    #[test]
    fn overhead_rejects_above_threshold() {
        assert!(overhead(2e-3, 1e-3, 1e3).is_err());
    }
}
