//! Precomputed linear effects of every fault option in a CNOT exRec, and the
//! correctness predicate evaluated on XORs of those effects.
//!
//! An exRec is judged at the output of its transversal CNOT: it is incorrect
//! for a criterion when every in-scope detection bit passes while the
//! deviation leaving the gate on some in-scope block anticommutes with one of
//! XXXX, ZZZZ, X_L, Z_L or the block's gauge stabilizer. Faults inside the
//! trailing EDs only influence detection.

use std::collections::HashMap;

use crate::circuit::{FaultSite, Trace};
use crate::error::{Error, Result};
use crate::gadgets::{
    anticommute_pauli4, build_cnot_exrec, CnotExRec, ExRecSpec, GaugeFlavor, Pauli4, Truncation,
    GA, LEAD_C, LEAD_T, TRAIL_C, TRAIL_T, XXXX, X_LOGICAL, ZZZZ, Z_LOGICAL,
};

use super::{CorrectnessCriterion, InputMode};

/// Location region inside the CNOT exRec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Region {
    LeadC,
    LeadT,
    Ga,
    TrailC,
    TrailT,
}

impl Region {
    fn from_tag(tag: &str) -> Result<Region> {
        Ok(match tag {
            LEAD_C => Region::LeadC,
            LEAD_T => Region::LeadT,
            GA => Region::Ga,
            TRAIL_C => Region::TrailC,
            TRAIL_T => Region::TrailT,
            _ => return Err(Error::Spec(format!("unknown exRec region {tag:?}"))),
        })
    }

    pub fn is_leading(self) -> bool {
        matches!(self, Region::LeadC | Region::LeadT)
    }

    /// Whether the criterion's truncation removes this region.
    pub fn truncated_by(self, t: Truncation) -> bool {
        matches!(
            (self, t),
            (Region::TrailC, Truncation::Control) | (Region::TrailT, Truncation::Target)
        )
    }
}

/// Linear effect of one fault option.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaultEffect {
    /// Leading-ED detection bits: 3 per block (x-parity, z-parity, gauge).
    pub lead_det: u8,
    /// Transversal-CNOT input under A-mode: leading output deviation times
    /// the logical operator implied by flipped frame bits (control | target<<8).
    pub ga_in_a: u16,
    /// Raw leading-ED output deviation (control | target<<8).
    pub ein: u16,
    /// Signature of the transversal-CNOT output for faults at or after it.
    pub out: u16,
    /// Trailing-ED detection bits: 3 per block.
    pub trail_det: u8,
}

impl FaultEffect {
    pub const ZERO: FaultEffect = FaultEffect {
        lead_det: 0,
        ga_in_a: 0,
        ein: 0,
        out: 0,
        trail_det: 0,
    };

    pub fn xor(&self, o: &FaultEffect) -> FaultEffect {
        FaultEffect {
            lead_det: self.lead_det ^ o.lead_det,
            ga_in_a: self.ga_in_a ^ o.ga_in_a,
            ein: self.ein ^ o.ein,
            out: self.out ^ o.out,
            trail_det: self.trail_det ^ o.trail_det,
        }
    }
}

/// Packs a 4-qubit operator into a byte: X bits low nibble, Z bits high.
pub fn pack4(p: Pauli4) -> u8 {
    (p.0 & 0xf) | ((p.1 & 0xf) << 4)
}

pub fn unpack4(b: u8) -> Pauli4 {
    (b & 0xf, b >> 4)
}

fn weight4(p: Pauli4) -> u32 {
    ((p.0 | p.1) & 0xf).count_ones()
}

/// 5-bit signature of a block deviation: anticommutation with XXXX, ZZZZ,
/// X_L, Z_L and the block's gauge stabilizer.
pub fn signature(p: Pauli4, gauge: GaugeFlavor) -> u16 {
    (anticommute_pauli4(p, XXXX)
        | anticommute_pauli4(p, ZZZZ) << 1
        | anticommute_pauli4(p, X_LOGICAL) << 2
        | anticommute_pauli4(p, Z_LOGICAL) << 3
        | anticommute_pauli4(p, gauge.gauge_stabilizer4()) << 4) as u16
}

/// For each packed 4-qubit deviation `E`, the logical offsets `L` (as packed
/// operators) such that `E·L` equals a weight ≤ 1 operator modulo the
/// stabilizers and the gauge stabilizer of `gauge`.
pub fn logical_offsets(gauge: GaugeFlavor) -> Vec<Vec<u8>> {
    let gens = [XXXX, ZZZZ, gauge.gauge_stabilizer4()];
    let mut group = vec![(0u8, 0u8)];
    for g in gens {
        let ext: Vec<Pauli4> = group.iter().map(|a| (a.0 ^ g.0, a.1 ^ g.1)).collect();
        group.extend(ext);
    }
    let logicals = [
        (0, 0),
        X_LOGICAL,
        Z_LOGICAL,
        (X_LOGICAL.0 ^ Z_LOGICAL.0, X_LOGICAL.1 ^ Z_LOGICAL.1),
    ];
    (0..=255u8)
        .map(|e| {
            let e = unpack4(e);
            logicals
                .iter()
                .filter(|l| {
                    let el = (e.0 ^ l.0, e.1 ^ l.1);
                    group.iter().any(|m| weight4((el.0 ^ m.0, el.1 ^ m.1)) <= 1)
                })
                .map(|&l| pack4(l))
                .collect()
        })
        .collect()
}

/// One fault site with its deduplicated effects.
#[derive(Clone, Debug)]
pub struct SiteEffects {
    pub site: FaultSite,
    pub region: Region,
    /// Distinct effects, each with one representative Pauli `(x, z)`.
    pub effects: Vec<(FaultEffect, (u64, u64))>,
    /// Effect index of every raw option, in `FaultSite::fault_options` order.
    pub option_effect: Vec<u32>,
}

/// Precomputed tables for one CNOT exRec.
pub struct ExRecAnalysis {
    pub exrec: CnotExRec,
    pub contracted: bool,
    pub sites: Vec<SiteEffects>,
    /// Gauge flavor of the blocks between the leading and trailing EDs.
    pub gauge: GaugeFlavor,
    /// Transversal-CNOT input (control | target<<8) ↦ out | trail_det<<10.
    lin: Vec<u16>,
    offsets: Vec<Vec<u8>>,
}

const OUT_BITS: u32 = 10;

impl ExRecAnalysis {
    pub fn new(leading: GaugeFlavor, contracted: bool) -> Result<Self> {
        let exrec = build_cnot_exrec(ExRecSpec::cnot(leading, contracted))?;
        let gauge = leading.ed_output();
        let c = &exrec.circuit;
        let region_checks = |tag: &str| -> Vec<usize> {
            c.parity_checks
                .iter()
                .filter(|k| k.label.starts_with(&format!("{tag}:")))
                .map(|k| k.id)
                .collect()
        };
        let region_trackers = |tag: &str| -> Vec<usize> {
            c.logical_trackers
                .iter()
                .filter(|k| k.label.starts_with(&format!("{tag}:")))
                .map(|k| k.id)
                .collect()
        };
        let checks: Vec<Vec<usize>> = [LEAD_C, LEAD_T, TRAIL_C, TRAIL_T]
            .iter()
            .map(|t| region_checks(t))
            .collect();
        let frames: Vec<Vec<usize>> = [LEAD_C, LEAD_T].iter().map(|t| region_trackers(t)).collect();
        if checks.iter().any(|v| v.len() != 3) || frames.iter().any(|v| v.len() != 2) {
            return Err(Error::Spec("exRec EDs must expose 3 checks and 2 frames".into()));
        }
        let det_bits = |flips: u64, ids: &[usize]| -> u8 {
            ids.iter().enumerate().fold(0u8, |acc, (i, &k)| {
                acc | (c.outcome_parity(&c.parity_checks[k].outcomes, flips) << i)
            })
        };
        let [bc, bt] = exrec.ga_blocks;
        let block = |x: u64, z: u64, b: usize| -> Pauli4 {
            (((x >> (4 * b)) & 0xf) as u8, ((z >> (4 * b)) & 0xf) as u8)
        };
        let ga_pair = |tr: &Trace| -> u16 {
            pack4(block(tr.x, tr.z, bc)) as u16 | (pack4(block(tr.x, tr.z, bt)) as u16) << 8
        };
        let sig_pair = |tr: &Trace| -> u16 {
            signature(block(tr.x, tr.z, bc), gauge) | signature(block(tr.x, tr.z, bt), gauge) << 5
        };
        let frame_logical = |flips: u64, ids: &[usize]| -> u8 {
            // frame-x flip ⇒ spurious Z_L; frame-z flip ⇒ spurious X_L.
            let fx = c.outcome_parity(&c.logical_trackers[ids[0]].frame_outcomes, flips);
            let fz = c.outcome_parity(&c.logical_trackers[ids[1]].frame_outcomes, flips);
            let mut p = (0u8, 0u8);
            if fx == 1 {
                p.1 ^= Z_LOGICAL.1;
            }
            if fz == 1 {
                p.0 ^= X_LOGICAL.0;
            }
            pack4(p)
        };

        // Linear map of a transversal-CNOT input onto (output signature,
        // trailing detection).
        let mut basis = [0u16; 16];
        for (k, slot) in basis.iter_mut().enumerate() {
            let blk = if k < 8 { bc } else { bt };
            let bit = 1u64 << (4 * blk + (k % 4));
            let (x, z) = if k % 8 < 4 { (bit, 0) } else { (0, bit) };
            let inj = [(exrec.lead_end, x, z)];
            let ga_out = c.run(&inj, (0, 0), exrec.ga_end);
            let full = c.run(&inj, (0, 0), usize::MAX);
            let td = det_bits(full.flips, &checks[2]) | det_bits(full.flips, &checks[3]) << 3;
            *slot = sig_pair(&ga_out) | (td as u16) << OUT_BITS;
        }
        let mut lin = vec![0u16; 1 << 16];
        for g in 1usize..(1 << 16) {
            let low = g.trailing_zeros() as usize;
            // Bits are ordered x(c), z(c), x(t), z(t) in nibbles.
            lin[g] = lin[g & (g - 1)] ^ basis[low];
        }

        let mut sites = Vec::new();
        for site in c.fault_sites(contracted) {
            let region = Region::from_tag(&site.region)?;
            let mut index: HashMap<FaultEffect, u32> = HashMap::new();
            let mut effects = Vec::new();
            let mut option_effect = Vec::new();
            for (x, z) in site.fault_options() {
                let inj = [(site.insert_at, x, z)];
                let eff = if region.is_leading() {
                    let tr = c.run(&inj, (0, 0), exrec.lead_end);
                    let ld = det_bits(tr.flips, &checks[0]) | det_bits(tr.flips, &checks[1]) << 3;
                    let ein = ga_pair(&tr);
                    let frame = frame_logical(tr.flips, &frames[0]) as u16
                        | (frame_logical(tr.flips, &frames[1]) as u16) << 8;
                    FaultEffect {
                        lead_det: ld,
                        ga_in_a: ein ^ frame,
                        ein,
                        out: 0,
                        trail_det: 0,
                    }
                } else {
                    let full = c.run(&inj, (0, 0), usize::MAX);
                    let td = det_bits(full.flips, &checks[2]) | det_bits(full.flips, &checks[3]) << 3;
                    let out = if region == Region::Ga {
                        sig_pair(&c.run(&inj, (0, 0), exrec.ga_end))
                    } else {
                        0
                    };
                    FaultEffect {
                        lead_det: 0,
                        ga_in_a: 0,
                        ein: 0,
                        out,
                        trail_det: td,
                    }
                };
                let next = effects.len() as u32;
                let idx = *index.entry(eff).or_insert_with(|| {
                    effects.push((eff, (x, z)));
                    next
                });
                option_effect.push(idx);
            }
            sites.push(SiteEffects {
                site,
                region,
                effects,
                option_effect,
            });
        }
        Ok(ExRecAnalysis {
            exrec,
            contracted,
            sites,
            gauge,
            lin,
            offsets: logical_offsets(gauge),
        })
    }

    /// `(out_signature, trail_det)` of a transversal-CNOT input.
    #[inline]
    pub fn ga_image(&self, g: u16) -> (u16, u8) {
        let v = self.lin[g as usize];
        (v & ((1 << OUT_BITS) - 1), (v >> OUT_BITS) as u8)
    }

    /// Logical offsets allowed for a B-mode block deviation.
    pub fn offsets(&self, e: u8) -> &[u8] {
        &self.offsets[e as usize]
    }

    /// Whether the combined effect `f` makes the exRec incorrect under `crit`.
    ///
    /// For B-mode blocks the leading detection and frame are ignored; the
    /// transversal-CNOT input is `E·L` for each logical offset `L` that makes
    /// it a weight ≤ 1 deviation modulo stabilizers and gauge, and the exRec is
    /// incorrect only if it is incorrect for every such interpretation.
    pub fn is_incorrect_effect(&self, f: &FaultEffect, crit: &CorrectnessCriterion) -> bool {
        let (det_mask, out_mask) = crit.masks();
        for b in 0..2 {
            if crit.modes[b] == InputMode::A && (f.lead_det >> (3 * b)) & 0b111 != 0 {
                return false;
            }
        }
        let choices = |b: usize| -> ([u8; 4], usize) {
            let shift = 8 * b;
            match crit.modes[b] {
                InputMode::A => ([(f.ga_in_a >> shift) as u8, 0, 0, 0], 1),
                InputMode::B => {
                    let e = (f.ein >> shift) as u8;
                    let offs = self.offsets(e);
                    let mut v = [0u8; 4];
                    for (i, &l) in offs.iter().enumerate() {
                        v[i] = e ^ l;
                    }
                    (v, offs.len())
                }
            }
        };
        let (gc, nc) = choices(0);
        let (gt, nt) = choices(1);
        for c in &gc[..nc] {
            for t in &gt[..nt] {
                let (o, d) = self.ga_image(*c as u16 | (*t as u16) << 8);
                let accepted = (f.trail_det ^ d) & det_mask == 0;
                let wrong = (f.out ^ o) & out_mask != 0;
                if !(accepted && wrong) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether site `i` survives the truncation of `crit`.
    pub fn site_in_scope(&self, i: usize, crit: &CorrectnessCriterion) -> bool {
        !self.sites[i].region.truncated_by(crit.truncation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{X_GAUGE, Z_GAUGE};

    #[test]
    fn offsets_cover_six_of_eight_syndrome_classes() {
        for g in [GaugeFlavor::PlusGauge, GaugeFlavor::ZeroGauge] {
            let t = logical_offsets(g);
            // Weight ≤ 1 deviations admit the trivial offset.
            assert!(t[0].contains(&0));
            assert!(t[pack4((0b0100, 0)) as usize].contains(&0));
            // Deviations flipping only the gauge partner have no weight-1
            // representative: 2 of the 8 classes of 32 are unreachable.
            assert_eq!(t.iter().filter(|o| !o.is_empty()).count(), 192);
        }
        let plus = logical_offsets(GaugeFlavor::PlusGauge);
        assert!(plus[pack4(Z_GAUGE) as usize].is_empty());
        let zero = logical_offsets(GaugeFlavor::ZeroGauge);
        assert!(zero[pack4(X_GAUGE) as usize].is_empty());
    }

    #[test]
    fn signature_flags_logicals_and_gauge() {
        assert_eq!(signature(X_LOGICAL, GaugeFlavor::PlusGauge), 1 << 3);
        assert_eq!(signature(Z_LOGICAL, GaugeFlavor::PlusGauge), 1 << 2);
        assert_eq!(signature(XXXX, GaugeFlavor::ZeroGauge), 0);
        // X_T flips the Z_T gauge check of a zero-gauge block only.
        let xt = (0b0101, 0);
        assert_eq!(signature(xt, GaugeFlavor::ZeroGauge), 1 << 4);
        assert_eq!(signature(xt, GaugeFlavor::PlusGauge), 0);
    }
}
