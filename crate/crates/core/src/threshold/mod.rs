//! Scalar analytics: cluster-weighting functions ω/γ/C/D, the all-pairs
//! fixed point, the level-k recursion, decoding-error sums with tail bounds,
//! error budgets, distillation maps, adversarial-noise failure and overhead.

mod budgets;
mod recursion;

pub use budgets::*;
pub use recursion::*;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cited threshold of the outer error-correcting scheme.
pub const OUTER_THRESHOLD: f64 = 1.9e-4;

/// Locations in a CSS decoding circuit.
pub const DECODER_LOCATIONS: usize = 3;

/// Maximal number of locations in a level-1 rectangle.
pub const MAX_REC_SIZE: usize = 60;

/// Counts and sizes describing one exRec family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadgetMetrics {
    pub exrec_size: usize,
    pub ed_size: usize,
    /// Gate arity m; the cluster degree is d = 2m.
    pub arity: usize,
    /// Malignant pairs for possibly truncated exRecs.
    pub tilde_a: u64,
    /// Malignant pairs for untruncated exRecs.
    pub hat_a: u64,
    /// Location triples that may contain three faults.
    pub tilde_b: u64,
}

impl GadgetMetrics {
    /// The CNOT exRec with every physical location counted separately.
    pub const fn cnot_uncontracted() -> Self {
        GadgetMetrics {
            exrec_size: 116,
            ed_size: 28,
            arity: 2,
            tilde_a: 1306,
            hat_a: 722,
            tilde_b: 225_740,
        }
    }

    /// The CNOT exRec with Bell preparations and measurements contracted.
    pub const fn cnot_contracted() -> Self {
        GadgetMetrics {
            exrec_size: 52,
            ed_size: 12,
            arity: 2,
            tilde_a: 550,
            hat_a: 336,
            tilde_b: 20_076,
        }
    }

    /// Replaces the pair counts, recomputing nothing else.
    pub fn with_pairs(mut self, tilde_a: u64, hat_a: u64) -> Self {
        self.tilde_a = tilde_a;
        self.hat_a = hat_a;
        self
    }

    pub fn degree(&self) -> usize {
        2 * self.arity
    }

    pub fn validate(&self) -> Result<()> {
        if self.exrec_size == 0 || self.ed_size == 0 || self.arity == 0 {
            return Err(Error::Domain("gadget sizes must be positive".into()));
        }
        if self.hat_a > self.tilde_a {
            return Err(Error::Domain(format!(
                "untruncated pair count {} exceeds truncated count {}",
                self.hat_a, self.tilde_a
            )));
        }
        if self.arity * self.ed_size > self.exrec_size {
            return Err(Error::Domain("leading EDs exceed the exRec".into()));
        }
        Ok(())
    }

    fn d(&self) -> f64 {
        self.degree() as f64
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain(format!("ε = {eps} outside [0, 1)")));
    }
    Ok(())
}

/// Clamps a probability into [0, 1], logging whenever clamping happens.
pub fn clamp_probability(value: f64, what: &str) -> f64 {
    if !(0.0..=1.0).contains(&value) {
        let c = if value.is_nan() { 1.0 } else { value.clamp(0.0, 1.0) };
        log::warn!("{what} = {value} clamped to {c}");
        c
    } else {
        value
    }
}

/// Cluster-growth parameter e·d·ε·|ED| / (1−ε)^(|exRec|−(d−1)|ED|).
pub fn omega(eps: f64, m: &GadgetMetrics) -> f64 {
    let d = m.d();
    let exp = m.exrec_size as f64 - (d - 1.0) * m.ed_size as f64;
    std::f64::consts::E * d * eps * m.ed_size as f64 / (1.0 - eps).powf(exp)
}

fn checked_omega(eps: f64, m: &GadgetMetrics) -> Result<f64> {
    check_eps(eps)?;
    let w = omega(eps, m);
    if w >= 1.0 {
        return Err(Error::Divergence { eps, omega: w });
    }
    Ok(w)
}

/// Sum over sealed-cluster sizes, 1/(1−ω).
pub fn gamma_basic(eps: f64, m: &GadgetMetrics) -> Result<f64> {
    Ok(1.0 / (1.0 - checked_omega(eps, m)?))
}

/// Cluster sum with the exact small-cluster counts substituted.
pub fn gamma_improved(eps: f64, m: &GadgetMetrics) -> Result<f64> {
    let w = checked_omega(eps, m)?;
    let e = std::f64::consts::E;
    let d = m.d();
    Ok(1.0 / (1.0 - w) - (1.0 - 1.0 / e) * w - (1.0 - 3.0 * (d - 1.0) / (2.0 * e * e * d)) * w * w)
}

pub fn c_exponent(m: &GadgetMetrics) -> f64 {
    3.0 * m.exrec_size as f64 - 10.0 * m.ed_size as f64
}

pub fn d_exponent(m: &GadgetMetrics) -> f64 {
    let d = m.d();
    (d + 1.0) * m.exrec_size as f64 - d * d * m.ed_size as f64
}

/// Fault-free weight of the two-cluster boundary, (1−ε)^(3|exRec|−10|ED|).
pub fn big_c(eps: f64, m: &GadgetMetrics) -> f64 {
    (1.0 - eps).powf(c_exponent(m))
}

/// Fault-free weight of the cluster boundary, (1−ε)^((d+1)|exRec|−d²|ED|).
pub fn big_d(eps: f64, m: &GadgetMetrics) -> f64 {
    (1.0 - eps).powf(d_exponent(m))
}

/// Outcome of a fixed-point solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub value: f64,
    pub seed: f64,
    pub iterations: usize,
    pub method: String,
    /// Relative change when the returned value is substituted once more.
    pub residual: f64,
}

/// Solves x = f(x) by damped Picard iteration from `seed`, falling back to
/// bisection of f(x) − x on `bracket` when iteration stalls.
pub fn solve_fixed_point(
    f: impl Fn(f64) -> f64,
    seed: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<FixedPoint> {
    const DAMPING: f64 = 0.5;
    const MAX_ITER: usize = 10_000;
    let mut x = seed;
    let mut trace = Vec::new();
    for it in 1..=MAX_ITER {
        let fx = f(x);
        if !fx.is_finite() {
            break;
        }
        let next = DAMPING * x + (1.0 - DAMPING) * fx;
        if trace.len() == 8 {
            trace.remove(0);
        }
        trace.push(next);
        if ((next - x) / next.abs().max(f64::MIN_POSITIVE)).abs() < tol {
            let r = f(next);
            return Ok(FixedPoint {
                value: next,
                seed,
                iterations: it,
                method: "damped-picard".into(),
                residual: ((r - next) / next).abs(),
            });
        }
        x = next;
    }
    let (mut lo, mut hi) = bracket;
    let g = |x: f64| f(x) - x;
    let (glo, ghi) = (g(lo), g(hi));
    if !(glo.is_finite() && ghi.is_finite()) || glo.signum() == ghi.signum() {
        return Err(Error::NoConvergence {
            iterations: MAX_ITER,
            trace,
        });
    }
    let mut it = 0;
    while (hi - lo) / hi.abs().max(f64::MIN_POSITIVE) > tol && it < 400 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        it += 1;
    }
    let value = 0.5 * (lo + hi);
    Ok(FixedPoint {
        value,
        seed,
        iterations: MAX_ITER + it,
        method: "bisection".into(),
        residual: ((f(value) - value) / value).abs(),
    })
}

/// Number of location pairs in an exRec of the given size.
pub fn all_pairs(exrec_size: usize) -> u64 {
    let n = exrec_size as u64;
    n * n.saturating_sub(1) / 2
}

/// Threshold estimate when every pair of locations is assumed malignant:
/// the fixed point of ε₀ = (1/A)·D(ε₀)·(1−ω(ε₀))^d with A = C(|exRec|, 2).
pub fn solve_eps0_allpairs(m: &GadgetMetrics) -> Result<FixedPoint> {
    solve_eps0_with(m, all_pairs(m.exrec_size), true, true)
}

/// Variant of [`solve_eps0_allpairs`] with an explicit pair count and the
/// option of switching off the ω and D factors.
pub fn solve_eps0_with(
    m: &GadgetMetrics,
    pairs: u64,
    with_omega: bool,
    with_d: bool,
) -> Result<FixedPoint> {
    m.validate()?;
    if pairs == 0 {
        return Err(Error::Domain("pair count must be positive".into()));
    }
    let a = pairs as f64;
    let d = m.d() as i32;
    let f = |x: f64| {
        let dd = if with_d { big_d(x, m) } else { 1.0 };
        let w = if with_omega { omega(x, m) } else { 0.0 };
        dd * (1.0 - w).max(0.0).powi(d) / a
    };
    solve_fixed_point(f, 1.0 / a, (0.0, 1.0 / a), 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents() {
        let u = GadgetMetrics::cnot_uncontracted();
        assert_eq!(c_exponent(&u), 68.0);
        assert_eq!(d_exponent(&u), 132.0);
        assert_eq!(all_pairs(116), 6670);
    }

    #[test]
    fn degenerate_all_pairs_limit() {
        let u = GadgetMetrics::cnot_uncontracted();
        let fp = solve_eps0_with(&u, 6670, false, false).unwrap();
        assert!((fp.value - 1.0 / 6670.0).abs() < 1e-15);
    }

    #[test]
    fn divergence_reported() {
        let u = GadgetMetrics::cnot_uncontracted();
        assert!(matches!(gamma_basic(0.01, &u), Err(Error::Divergence { .. })));
    }
}
