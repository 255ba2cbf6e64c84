//! Correctness criteria for the CNOT exRec, exhaustive malignant-pair
//! counting, the triple count, and conditioned Monte Carlo.

mod engine;
mod montecarlo;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::FaultAssignment;
use crate::error::{Error, Result};
use crate::gadgets::{GaugeFlavor, Truncation};
use crate::pauli::Pauli;

pub use engine::{
    logical_offsets, pack4, signature, unpack4, ExRecAnalysis, FaultEffect, Region, SiteEffects,
};
pub use montecarlo::{monte_carlo_conditional_failure, wilson_interval, MonteCarloReport};

/// Input condition of one block of a two-qubit exRec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InputMode {
    /// Codeword in front of the leading ED: its checks must pass and its
    /// frame bits are taken at face value.
    A,
    /// Arbitrary input: the leading ED's verdict is ignored and the block
    /// enters the gate as a 1-deviated codeword.
    B,
}

/// One correctness notion: input modes per block plus an optional truncated
/// trailing ED (weak correctness when truncated).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrectnessCriterion {
    pub modes: [InputMode; 2],
    pub truncation: Truncation,
}

impl CorrectnessCriterion {
    /// All twelve criteria: {AA, AB, BA, BB} × {strict, weak-control, weak-target}.
    pub fn all() -> Vec<CorrectnessCriterion> {
        let mut v = Vec::new();
        for t in [Truncation::None, Truncation::Control, Truncation::Target] {
            for modes in [
                [InputMode::A, InputMode::A],
                [InputMode::A, InputMode::B],
                [InputMode::B, InputMode::A],
                [InputMode::B, InputMode::B],
            ] {
                v.push(CorrectnessCriterion {
                    modes,
                    truncation: t,
                });
            }
        }
        v
    }

    pub fn is_weak(&self) -> bool {
        self.truncation != Truncation::None
    }

    pub fn label(&self) -> String {
        let m: String = self
            .modes
            .iter()
            .map(|m| if *m == InputMode::A { 'A' } else { 'B' })
            .collect();
        match self.truncation {
            Truncation::None => m,
            Truncation::Control => format!("weak-{m}-c"),
            Truncation::Target => format!("weak-{m}-t"),
        }
    }

    /// (trailing detection mask, output signature mask) in scope.
    pub fn masks(&self) -> (u8, u16) {
        match self.truncation {
            Truncation::None => (0x3f, 0x3ff),
            Truncation::Control => (0x38, 0x3e0),
            Truncation::Target => (0x07, 0x01f),
        }
    }
}

/// Which consecutive (transversal gate, following trailing-ED gate) pairs
/// are declared benign by absorbing the trailing gate into an augmented
/// exRec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AugmentedFilter {
    Off,
    /// Only when both members are single (uncontracted) locations.
    SingleLocations,
    /// Also when the following location is a contracted bundle.
    AllConsecutive,
}

/// Options for [`count_malignant_pairs`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CountOptions {
    pub filter: AugmentedFilter,
    pub witness_cap: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            filter: AugmentedFilter::SingleLocations,
            witness_cap: 20,
        }
    }
}

/// One malignant pair with a witnessing Pauli combination.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub sites: [usize; 2],
    pub locations: [Vec<usize>; 2],
    pub regions: [Region; 2],
    pub criterion: String,
    pub faults: [String; 2],
}

/// Counts for one gauge ordering.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderingCounts {
    pub leading: GaugeFlavor,
    pub locations: usize,
    pub malignant_singletons: usize,
    pub per_criterion: BTreeMap<String, usize>,
    /// Union over strict criteria, before / after the augmented filter.
    pub hat_a_unfiltered: usize,
    pub hat_a: usize,
    /// Union over all criteria, before / after the augmented filter.
    pub tilde_a_unfiltered: usize,
    pub tilde_a: usize,
    pub filtered_pairs: Vec<[usize; 2]>,
    /// Consecutive location pairs still malignant under a strict criterion.
    pub consecutive_malignant: Vec<[usize; 2]>,
    pub consecutive_total: usize,
    pub benign_pairs: usize,
}

/// Result of exhaustively counting malignant pairs in the CNOT exRec.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MalignancyReport {
    pub gadget: String,
    pub contracted: bool,
    pub filter: AugmentedFilter,
    pub orderings: Vec<OrderingCounts>,
    /// Counts of the zero-ED-leading ordering (the reported figures).
    pub tilde_a: usize,
    pub hat_a: usize,
    pub triples: u64,
    pub symmetric: bool,
    pub witnesses: Vec<Witness>,
    pub runtime_seconds: f64,
}

/// Malignant-pair sets per criterion for one analysis.
pub struct PairSets {
    /// Sorted `(i, j, criteria_mask)` with `i < j` site indices.
    pub pairs: Vec<(usize, usize, u16)>,
    pub singletons: Vec<(usize, u16)>,
}

fn applicable_mask(a: &ExRecAnalysis, crits: &[CorrectnessCriterion], sites: &[usize]) -> u16 {
    crits.iter().enumerate().fold(0u16, |m, (k, c)| {
        if sites.iter().all(|&s| a.site_in_scope(s, c)) {
            m | (1 << k)
        } else {
            m
        }
    })
}

/// Criteria (as a bitmask over [`CorrectnessCriterion::all`]) violated by
/// the combined effect.
pub fn violated_mask(a: &ExRecAnalysis, crits: &[CorrectnessCriterion], f: &FaultEffect, scope: u16) -> u16 {
    let mut m = 0u16;
    for (k, c) in crits.iter().enumerate() {
        if scope & (1 << k) != 0 && a.is_incorrect_effect(f, c) {
            m |= 1 << k;
        }
    }
    m
}

/// Exhaustive pair (and singleton) evaluation.
pub fn malignant_pair_sets(a: &ExRecAnalysis) -> PairSets {
    let crits = CorrectnessCriterion::all();
    let n = a.sites.len();
    let singletons: Vec<(usize, u16)> = (0..n)
        .filter_map(|i| {
            let scope = applicable_mask(a, &crits, &[i]);
            let m = a.sites[i]
                .effects
                .iter()
                .fold(0u16, |m, (e, _)| m | violated_mask(a, &crits, e, scope));
            (m != 0).then_some((i, m))
        })
        .collect();
    let mut pairs: Vec<(usize, usize, u16)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let crits = &crits;
            (i + 1..n).filter_map(move |j| {
                let scope = applicable_mask(a, crits, &[i, j]);
                let mut m = 0u16;
                'outer: for (e1, _) in &a.sites[i].effects {
                    for (e2, _) in &a.sites[j].effects {
                        m |= violated_mask(a, crits, &e1.xor(e2), scope & !m);
                        if m == scope {
                            break 'outer;
                        }
                    }
                }
                (m != 0).then_some((i, j, m))
            })
        })
        .collect();
    pairs.sort_unstable();
    PairSets { pairs, singletons }
}

/// First Pauli combination on sites `(i, j)` violating criterion `k`.
fn find_witness(a: &ExRecAnalysis, i: usize, j: usize, k: usize) -> Option<(Pauli, Pauli)> {
    let crits = CorrectnessCriterion::all();
    let n = a.exrec.circuit.n_qubits;
    for (e1, w1) in &a.sites[i].effects {
        for (e2, w2) in &a.sites[j].effects {
            if a.is_incorrect_effect(&e1.xor(e2), &crits[k]) {
                return Some((
                    Pauli::from_bits(n, w1.0, w1.1).ok()?,
                    Pauli::from_bits(n, w2.0, w2.1).ok()?,
                ));
            }
        }
    }
    None
}

/// Site pairs `(i, j)` declared benign by the augmented-exRec argument.
pub fn augmented_pairs(a: &ExRecAnalysis, filter: AugmentedFilter) -> Vec<(usize, usize)> {
    if filter == AugmentedFilter::Off {
        return Vec::new();
    }
    let site_of = site_lookup(a);
    let c = &a.exrec.circuit;
    let mut out = Vec::new();
    for (l1, l2) in c.consecutive_pairs() {
        let (s1, s2) = (site_of[l1], site_of[l2]);
        let (Some(s1), Some(s2)) = (s1, s2) else { continue };
        let trailing = matches!(a.sites[s2].region, Region::TrailC | Region::TrailT);
        if a.sites[s1].region != Region::Ga || !trailing {
            continue;
        }
        let single = a.sites[s2].site.members.len() == 1;
        if single || filter == AugmentedFilter::AllConsecutive {
            out.push((s1.min(s2), s1.max(s2)));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn site_lookup(a: &ExRecAnalysis) -> Vec<Option<usize>> {
    let mut v = vec![None; a.exrec.circuit.locations.len()];
    for (i, s) in a.sites.iter().enumerate() {
        for &m in &s.site.members {
            v[m] = Some(i);
        }
    }
    v
}

/// Distinct site pairs that are temporally consecutive on a shared qubit.
pub fn consecutive_site_pairs(a: &ExRecAnalysis) -> Vec<(usize, usize)> {
    let site_of = site_lookup(a);
    let mut out: Vec<(usize, usize)> = a
        .exrec
        .circuit
        .consecutive_pairs()
        .into_iter()
        .filter_map(|(l1, l2)| {
            let (s1, s2) = (site_of[l1]?, site_of[l2]?);
            (s1 != s2).then_some((s1.min(s2), s1.max(s2)))
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn count_ordering(
    leading: GaugeFlavor,
    contracted: bool,
    opts: &CountOptions,
    witnesses: &mut Vec<Witness>,
) -> Result<OrderingCounts> {
    let a = ExRecAnalysis::new(leading, contracted)?;
    let crits = CorrectnessCriterion::all();
    let sets = malignant_pair_sets(&a);
    let strict_mask: u16 = crits
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_weak())
        .fold(0, |m, (k, _)| m | (1 << k));
    let drop: std::collections::BTreeSet<(usize, usize)> =
        augmented_pairs(&a, opts.filter).into_iter().collect();
    let mut per_criterion = BTreeMap::new();
    for (k, c) in crits.iter().enumerate() {
        let cnt = sets
            .pairs
            .iter()
            .filter(|(i, j, m)| m & (1 << k) != 0 && !drop.contains(&(*i, *j)))
            .count();
        per_criterion.insert(c.label(), cnt);
    }
    let hat_a_unfiltered = sets.pairs.iter().filter(|p| p.2 & strict_mask != 0).count();
    let tilde_a_unfiltered = sets.pairs.len();
    let kept: Vec<&(usize, usize, u16)> = sets
        .pairs
        .iter()
        .filter(|(i, j, _)| !drop.contains(&(*i, *j)))
        .collect();
    let hat_a = kept.iter().filter(|p| p.2 & strict_mask != 0).count();
    let tilde_a = kept.len();
    let filtered_pairs: Vec<[usize; 2]> = sets
        .pairs
        .iter()
        .filter(|(i, j, _)| drop.contains(&(*i, *j)))
        .map(|(i, j, _)| [a.sites[*i].site.first(), a.sites[*j].site.first()])
        .collect();
    let consec = consecutive_site_pairs(&a);
    let malignant_strict: std::collections::BTreeSet<(usize, usize)> = kept
        .iter()
        .filter(|p| p.2 & strict_mask != 0)
        .map(|p| (p.0, p.1))
        .collect();
    let consecutive_malignant = consec
        .iter()
        .filter(|p| malignant_strict.contains(p))
        .map(|&(i, j)| [a.sites[i].site.first(), a.sites[j].site.first()])
        .collect();
    let n = a.sites.len();
    if leading == GaugeFlavor::ZeroGauge {
        for &&(i, j, m) in kept.iter().take(opts.witness_cap) {
            let k = m.trailing_zeros() as usize;
            if let Some((p1, p2)) = find_witness(&a, i, j, k) {
                witnesses.push(Witness {
                    sites: [i, j],
                    locations: [a.sites[i].site.members.clone(), a.sites[j].site.members.clone()],
                    regions: [a.sites[i].region, a.sites[j].region],
                    criterion: crits[k].label(),
                    faults: [p1.render(), p2.render()],
                });
            }
        }
    }
    Ok(OrderingCounts {
        leading,
        locations: n,
        malignant_singletons: sets.singletons.len(),
        per_criterion,
        hat_a_unfiltered,
        hat_a,
        tilde_a_unfiltered,
        tilde_a,
        filtered_pairs,
        consecutive_total: consec.len(),
        consecutive_malignant,
        benign_pairs: n * (n - 1) / 2 - tilde_a,
    })
}

/// Exhaustively counts malignant pairs of the CNOT exRec for both gauge
/// orderings.
pub fn count_malignant_pairs(contracted: bool, opts: &CountOptions) -> Result<MalignancyReport> {
    let start = Instant::now();
    let mut witnesses = Vec::new();
    let mut orderings = Vec::new();
    for leading in [GaugeFlavor::ZeroGauge, GaugeFlavor::PlusGauge] {
        orderings.push(count_ordering(leading, contracted, opts, &mut witnesses)?);
    }
    let symmetric = orderings[0].hat_a == orderings[1].hat_a
        && orderings[0].tilde_a == orderings[1].tilde_a;
    let (ex, ed) = if contracted { (52, 12) } else { (116, 28) };
    Ok(MalignancyReport {
        gadget: if contracted { "cnot-conexrec" } else { "cnot-exrec" }.to_string(),
        contracted,
        filter: opts.filter,
        tilde_a: orderings[0].tilde_a,
        hat_a: orderings[0].hat_a,
        orderings,
        triples: count_triples(ex, 2, ed)?,
        symmetric,
        witnesses,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Single-fault audit of a stand-alone ED: counts accepted single faults
/// whose frame-corrected output is not within weight one of the intended
/// codeword (modulo stabilizers and the output gauge).
pub fn ed_single_fault_audit(flavor: GaugeFlavor) -> Result<usize> {
    let c = crate::gadgets::build_ed(flavor)?;
    let offsets = logical_offsets(flavor.ed_output());
    let mut bad = 0;
    for site in c.fault_sites(false) {
        for (x, z) in site.fault_options() {
            let p = Pauli::from_bits(c.n_qubits, x, z)?;
            let r = c.propagate_site(&site, &p)?;
            if r.accepted() {
                let e = crate::gadgets::frame_corrected_output(&c, &r)?;
                if !offsets[pack4(e) as usize].contains(&0) {
                    bad += 1;
                }
            }
        }
    }
    Ok(bad)
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Triples of locations not entirely inside the trailing EDs:
/// `C(|exRec|, 3) − C(m·|ED|, 3)`.
pub fn count_triples(exrec_size: u64, m: u64, ed_size: u64) -> Result<u64> {
    let trailing = m * ed_size;
    if trailing > exrec_size {
        return Err(Error::Domain(format!(
            "{m} trailing EDs of {ed_size} locations exceed an exRec of {exrec_size}"
        )));
    }
    Ok(binom(exrec_size, 3) - binom(trailing, 3))
}

/// Evaluates a criterion on an explicit fault assignment over the exRec's
/// locations (uncontracted sites only).
pub fn is_incorrect(
    a: &ExRecAnalysis,
    faults: &FaultAssignment,
    crit: &CorrectnessCriterion,
) -> Result<bool> {
    let site_of = site_lookup(a);
    let mut acc = FaultEffect::ZERO;
    for (&loc, p) in faults {
        let s = site_of
            .get(loc)
            .copied()
            .flatten()
            .ok_or(Error::NotFaultable(loc))?;
        if !a.site_in_scope(s, crit) {
            continue;
        }
        let site = &a.sites[s];
        let opts = site.site.fault_options();
        let k = opts
            .iter()
            .position(|&(x, z)| x == p.x_bits() && z == p.z_bits())
            .ok_or_else(|| Error::UnsupportedFault {
                loc,
                fault: p.render(),
            })?;
        acc = acc.xor(&site.effects[site.option_effect[k] as usize].0);
    }
    Ok(a.is_incorrect_effect(&acc, crit))
}
