//! Time-ordered Clifford circuits with faultable locations, and forward
//! propagation of Pauli faults into detection bits, logical-frame flips and
//! residual output deviations.
//!
//! Convention: a fault acts immediately after a gate or preparation and
//! immediately before a measurement. Only flips of measurement outcomes
//! relative to the fault-free run are tracked, so every quantity computed
//! here is F2-linear in the injected faults.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{GateKind, Pauli};

/// Version tag of the JSON circuit serialization.
pub const CIRCUIT_SCHEMA_VERSION: u32 = 1;

/// One operation of a circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub id: usize,
    pub timestep: usize,
    pub gate: GateKind,
    pub qubits: Vec<usize>,
    pub faultable: bool,
    /// Bell-prep / Bell-measure bundle this location belongs to, if any.
    pub contracted_group: Option<usize>,
    /// Free-form region tag (e.g. `"lead-c"`, `"ga"`), used by analyses.
    pub region: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckRole {
    Stabilizer,
    GaugeMatch,
}

/// A parity of measurement outcomes that must be trivial for acceptance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCheck {
    pub id: usize,
    pub label: String,
    /// Measurement location ids whose outcome bits are XORed.
    pub outcomes: Vec<usize>,
    /// Operator whose eigenvalue the parity reveals (on the full register).
    pub detecting: Pauli,
    pub role: CheckRole,
}

/// A logical frame bit: it flips when the residual deviation anticommutes
/// with `operator`, or when the parity of `frame_outcomes` flips (a wrong
/// classically-tracked Pauli correction).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalTracker {
    pub id: usize,
    pub label: String,
    pub operator: Pauli,
    pub frame_outcomes: Vec<usize>,
}

/// A faultable unit: a single location, or a contracted bundle exposing the
/// union support of its members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultSite {
    pub members: Vec<usize>,
    pub support: Vec<usize>,
    /// Position in the operation order before which the fault acts.
    pub insert_at: usize,
    pub region: String,
}

impl FaultSite {
    /// All nontrivial Paulis on the site's support, as packed words.
    pub fn fault_options(&self) -> Vec<(u64, u64)> {
        let k = self.support.len();
        (1u32..(1u32 << (2 * k)))
            .map(|code| {
                let (mut x, mut z) = (0u64, 0u64);
                for (j, &q) in self.support.iter().enumerate() {
                    let d = (code >> (2 * j)) & 3;
                    if d & 1 != 0 {
                        x |= 1 << q;
                    }
                    if d & 2 != 0 {
                        z |= 1 << q;
                    }
                }
                (x, z)
            })
            .collect()
    }

    pub fn first(&self) -> usize {
        self.members[0]
    }
}

/// Map from location id to the Pauli fault acting there.
pub type FaultAssignment = BTreeMap<usize, Pauli>;

/// Effect of a fault pattern (plus input deviation) on a circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagationResult {
    /// Bit `i` is the parity of check `i`.
    pub detection_bits: u64,
    /// Bit `i` is the flip of logical tracker `i`.
    pub logical_flips: u64,
    /// Deviation left on the output qubits at the end of the circuit.
    pub residual: Pauli,
    /// Raw outcome flips, indexed by measurement ordinal.
    pub outcome_flips: u64,
}

impl PropagationResult {
    pub fn accepted(&self) -> bool {
        self.detection_bits == 0
    }
}

/// Raw state of a partial propagation: outcome flips and current deviation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub flips: u64,
    pub x: u64,
    pub z: u64,
}

/// A typed, topologically ordered circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub name: String,
    pub n_qubits: usize,
    pub locations: Vec<Location>,
    pub parity_checks: Vec<ParityCheck>,
    pub logical_trackers: Vec<LogicalTracker>,
    pub input_blocks: Vec<Vec<usize>>,
    pub output_blocks: Vec<Vec<usize>>,
    /// Measurement ordinal of each location (None for non-measurements).
    outcome_index: Vec<Option<u8>>,
}

#[derive(Serialize)]
struct CircuitDocument<'a> {
    schema_version: u32,
    #[serde(flatten)]
    circuit: &'a Circuit,
    faultable_locations: usize,
    contracted_locations: usize,
    depth: usize,
    checks_rendered: Vec<(String, String, Vec<usize>)>,
}

impl Circuit {
    pub fn n_measurements(&self) -> usize {
        self.outcome_index.iter().flatten().count()
    }

    pub fn outcome_ordinal(&self, loc: usize) -> Option<usize> {
        self.outcome_index.get(loc).copied().flatten().map(usize::from)
    }

    fn outcome_mask(&self, locs: &[usize]) -> u64 {
        locs.iter()
            .filter_map(|&l| self.outcome_ordinal(l))
            .fold(0, |m, o| m | (1 << o))
    }

    /// Parity of the outcome flips of the given measurement locations.
    pub fn outcome_parity(&self, locs: &[usize], flips: u64) -> u8 {
        ((flips & self.outcome_mask(locs)).count_ones() & 1) as u8
    }

    /// Output qubits as a bit mask.
    pub fn output_mask(&self) -> u64 {
        self.output_blocks.iter().flatten().fold(0, |m, &q| m | (1 << q))
    }

    pub fn depth(&self) -> usize {
        self.locations.iter().map(|l| l.timestep + 1).max().unwrap_or(0)
    }

    /// Faultable units; with `contracted`, each contracted group is one unit.
    pub fn fault_sites(&self, contracted: bool) -> Vec<FaultSite> {
        let mut sites = Vec::new();
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for loc in self.locations.iter().filter(|l| l.faultable) {
            match (contracted, loc.contracted_group) {
                (true, Some(g)) => groups.entry(g).or_default().push(loc.id),
                _ => {
                    let insert_at = if loc.gate.is_measurement() {
                        loc.id
                    } else {
                        loc.id + 1
                    };
                    sites.push(FaultSite {
                        members: vec![loc.id],
                        support: loc.qubits.clone(),
                        insert_at,
                        region: loc.region.clone(),
                    });
                }
            }
        }
        for members in groups.into_values() {
            let mut support: Vec<usize> = members
                .iter()
                .flat_map(|&m| self.locations[m].qubits.iter().copied())
                .collect();
            support.sort_unstable();
            support.dedup();
            // After the last non-measurement member: for a Bell-prep bundle
            // this follows its CNOT; for a Bell-measure bundle it precedes the
            // measurements.
            let insert_at = members
                .iter()
                .filter(|&&m| !self.locations[m].gate.is_measurement())
                .max()
                .map_or(members[0], |&m| m + 1);
            sites.push(FaultSite {
                region: self.locations[members[0]].region.clone(),
                members,
                support,
                insert_at,
            });
        }
        sites.sort_by_key(|s| s.members[0]);
        sites
    }

    /// Number of faultable locations, counting contracted groups once when
    /// `contracted` is set.
    pub fn location_count(&self, contracted: bool) -> usize {
        self.fault_sites(contracted).len()
    }

    /// Propagates packed injections `(insert_at, x, z)` and an input deviation
    /// through operations `[0, stop)`.
    pub fn run(&self, injections: &[(usize, u64, u64)], input: (u64, u64), stop: usize) -> Trace {
        let (mut x, mut z) = input;
        let mut flips = 0u64;
        let stop = stop.min(self.locations.len());
        for (p, loc) in self.locations.iter().enumerate().take(stop) {
            for &(at, fx, fz) in injections {
                if at == p {
                    x ^= fx;
                    z ^= fz;
                }
            }
            let q = &loc.qubits;
            match loc.gate {
                GateKind::Cnot => {
                    let (c, t) = (q[0], q[1]);
                    x ^= ((x >> c) & 1) << t;
                    z ^= ((z >> t) & 1) << c;
                }
                GateKind::Hadamard => {
                    let b = 1u64 << q[0];
                    let (bx, bz) = (x & b, z & b);
                    x = (x & !b) | bz;
                    z = (z & !b) | bx;
                }
                GateKind::PrepX | GateKind::PrepZ => {
                    let b = !(1u64 << q[0]);
                    x &= b;
                    z &= b;
                }
                GateKind::MeasX | GateKind::MeasZ => {
                    let b = 1u64 << q[0];
                    let hit = if loc.gate == GateKind::MeasX { z & b } else { x & b };
                    if hit != 0 {
                        flips |= 1 << self.outcome_index[p].expect("measurement ordinal");
                    }
                    x &= !b;
                    z &= !b;
                }
                GateKind::Wait => {}
                GateKind::SwapWiring(ref perm) => {
                    let p = Pauli::from_bits(self.n_qubits, x, z)
                        .and_then(|d| d.conjugate_through(&GateKind::SwapWiring(perm.clone()), q))
                        .expect("validated wiring");
                    x = p.x_bits();
                    z = p.z_bits();
                }
            }
        }
        // Faults sitting exactly at the cut act on the deviation seen there.
        for &(at, fx, fz) in injections {
            if at == stop {
                x ^= fx;
                z ^= fz;
            }
        }
        Trace { flips, x, z }
    }

    /// Turns a full trace into detection bits, logical flips and residual.
    pub fn summarize(&self, trace: &Trace) -> PropagationResult {
        let mut detection_bits = 0u64;
        for (i, c) in self.parity_checks.iter().enumerate() {
            let m = self.outcome_mask(&c.outcomes);
            detection_bits |= (((trace.flips & m).count_ones() & 1) as u64) << i;
        }
        let keep = self.output_mask();
        let residual = Pauli::from_bits(self.n_qubits, trace.x & keep, trace.z & keep)
            .expect("residual within register");
        let mut logical_flips = 0u64;
        for (i, t) in self.logical_trackers.iter().enumerate() {
            let frame = (trace.flips & self.outcome_mask(&t.frame_outcomes)).count_ones() & 1;
            let bit = residual.anticommutes_unchecked(&t.operator) ^ frame;
            logical_flips |= (bit as u64) << i;
        }
        PropagationResult {
            detection_bits,
            logical_flips,
            residual,
            outcome_flips: trace.flips,
        }
    }

    fn check_fault(&self, loc: usize, fault: &Pauli) -> Result<()> {
        let l = self.locations.get(loc).ok_or(Error::UnknownLocation(loc))?;
        if !l.faultable {
            return Err(Error::NotFaultable(loc));
        }
        if fault.n() != self.n_qubits {
            return Err(Error::Dimension(fault.n(), self.n_qubits));
        }
        let support = l.qubits.iter().fold(0u64, |m, &q| m | (1 << q));
        if fault.is_identity() || fault.support() & !support != 0 {
            return Err(Error::UnsupportedFault {
                loc,
                fault: fault.render(),
            });
        }
        Ok(())
    }

    fn insert_point(&self, loc: usize) -> usize {
        if self.locations[loc].gate.is_measurement() {
            loc
        } else {
            loc + 1
        }
    }

    /// Effect of a single Pauli fault at location `loc`.
    pub fn propagate_single(&self, loc: usize, fault: &Pauli) -> Result<PropagationResult> {
        self.check_fault(loc, fault)?;
        let inj = [(self.insert_point(loc), fault.x_bits(), fault.z_bits())];
        Ok(self.summarize(&self.run(&inj, (0, 0), usize::MAX)))
    }

    /// Effect of a Pauli fault on a (possibly contracted) fault site.
    pub fn propagate_site(&self, site: &FaultSite, fault: &Pauli) -> Result<PropagationResult> {
        let support = site.support.iter().fold(0u64, |m, &q| m | (1 << q));
        if fault.n() != self.n_qubits {
            return Err(Error::Dimension(fault.n(), self.n_qubits));
        }
        if fault.support() & !support != 0 {
            return Err(Error::UnsupportedFault {
                loc: site.first(),
                fault: fault.render(),
            });
        }
        let inj = [(site.insert_at, fault.x_bits(), fault.z_bits())];
        Ok(self.summarize(&self.run(&inj, (0, 0), usize::MAX)))
    }

    /// Joint effect of a fault assignment plus an input deviation.
    pub fn simulate(&self, faults: &FaultAssignment, input: &Pauli) -> Result<PropagationResult> {
        if input.n() != self.n_qubits {
            return Err(Error::Dimension(input.n(), self.n_qubits));
        }
        let mut inj = Vec::with_capacity(faults.len());
        for (&loc, f) in faults {
            self.check_fault(loc, f)?;
            inj.push((self.insert_point(loc), f.x_bits(), f.z_bits()));
        }
        Ok(self.summarize(&self.run(
            &inj,
            (input.x_bits(), input.z_bits()),
            usize::MAX,
        )))
    }

    /// Pairs `(a, b)` where `b` is the next location acting on some qubit
    /// of `a`; both must be faultable.
    pub fn consecutive_pairs(&self) -> Vec<(usize, usize)> {
        let mut last: Vec<Option<usize>> = vec![None; self.n_qubits];
        let mut pairs = Vec::new();
        for loc in &self.locations {
            for &q in &loc.qubits {
                if let Some(prev) = last[q] {
                    if self.locations[prev].faultable && loc.faultable {
                        pairs.push((prev, loc.id));
                    }
                }
                last[q] = Some(loc.id);
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// Versioned JSON document describing the circuit.
    pub fn to_json(&self) -> serde_json::Value {
        let doc = CircuitDocument {
            schema_version: CIRCUIT_SCHEMA_VERSION,
            circuit: self,
            faultable_locations: self.location_count(false),
            contracted_locations: self.location_count(true),
            depth: self.depth(),
            checks_rendered: self
                .parity_checks
                .iter()
                .map(|c| (c.label.clone(), c.detecting.render(), c.outcomes.clone()))
                .collect(),
        };
        serde_json::to_value(doc).expect("circuit serializes")
    }
}

/// Incremental circuit construction with ASAP timestep assignment.
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    name: String,
    n_qubits: usize,
    locations: Vec<Location>,
    checks: Vec<ParityCheck>,
    trackers: Vec<LogicalTracker>,
    input_blocks: Vec<Vec<usize>>,
    output_blocks: Vec<Vec<usize>>,
    next_group: usize,
    frontier: Vec<usize>,
}

impl CircuitBuilder {
    pub fn new(name: impl Into<String>, n_qubits: usize) -> Result<Self> {
        if n_qubits > crate::pauli::MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        Ok(CircuitBuilder {
            name: name.into(),
            n_qubits,
            locations: Vec::new(),
            checks: Vec::new(),
            trackers: Vec::new(),
            input_blocks: Vec::new(),
            output_blocks: Vec::new(),
            next_group: 0,
            frontier: vec![0; n_qubits],
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn new_group(&mut self) -> usize {
        self.next_group += 1;
        self.next_group - 1
    }

    /// Appends a location and returns its id.
    pub fn push(
        &mut self,
        gate: GateKind,
        qubits: &[usize],
        region: &str,
        group: Option<usize>,
    ) -> Result<usize> {
        gate.check_arity(qubits)?;
        for &q in qubits {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n: self.n_qubits,
                });
            }
        }
        let faultable = !matches!(gate, GateKind::SwapWiring(_));
        let timestep = qubits.iter().map(|&q| self.frontier[q]).max().unwrap_or(0);
        for &q in qubits {
            self.frontier[q] = timestep + 1;
        }
        let id = self.locations.len();
        self.locations.push(Location {
            id,
            timestep,
            gate,
            qubits: qubits.to_vec(),
            faultable,
            contracted_group: group,
            region: region.to_string(),
        });
        Ok(id)
    }

    pub fn add_check(&mut self, label: &str, outcomes: Vec<usize>, detecting: Pauli, role: CheckRole) {
        let id = self.checks.len();
        self.checks.push(ParityCheck {
            id,
            label: label.to_string(),
            outcomes,
            detecting,
            role,
        });
    }

    pub fn add_tracker(&mut self, label: &str, operator: Pauli, frame_outcomes: Vec<usize>) {
        let id = self.trackers.len();
        self.trackers.push(LogicalTracker {
            id,
            label: label.to_string(),
            operator,
            frame_outcomes,
        });
    }

    pub fn set_input_blocks(&mut self, blocks: Vec<Vec<usize>>) {
        self.input_blocks = blocks;
    }

    pub fn set_output_blocks(&mut self, blocks: Vec<Vec<usize>>) {
        self.output_blocks = blocks;
    }

    pub fn build(self) -> Result<Circuit> {
        let mut outcome_index = vec![None; self.locations.len()];
        let mut next = 0usize;
        for l in &self.locations {
            if l.gate.is_measurement() {
                if next >= 64 {
                    return Err(Error::TooManyOutcomes(next + 1));
                }
                outcome_index[l.id] = Some(next as u8);
                next += 1;
            }
        }
        if self.checks.len() > 64 || self.trackers.len() > 64 {
            return Err(Error::Spec("more than 64 checks or trackers".into()));
        }
        for c in &self.checks {
            for &o in c.outcomes.iter() {
                if outcome_index.get(o).copied().flatten().is_none() {
                    return Err(Error::Spec(format!(
                        "check {} references non-measurement location {o}",
                        c.label
                    )));
                }
            }
        }
        Ok(Circuit {
            name: self.name,
            n_qubits: self.n_qubits,
            locations: self.locations,
            parity_checks: self.checks,
            logical_trackers: self.trackers,
            input_blocks: self.input_blocks,
            output_blocks: self.output_blocks,
            outcome_index,
        })
    }
}
