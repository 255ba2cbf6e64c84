//! Concrete [[4,2,2]] gadgets: encoders, the two error-detection gadgets,
//! the CNOT extended rectangle, decoders and the teleport-into-block circuit.
//!
//! Block map conventions (block `b` occupies qubits `4b..4b+4`):
//! * ED: block 0 data, block 1 first ancilla, block 2 second ancilla (output).
//! * CNOT exRec: 0 control input, 1–2 leading control ancillas, 3 target
//!   input, 4–5 leading target ancillas, 6–7 trailing control ancillas,
//!   8–9 trailing target ancillas. The transversal CNOT acts 2 → 5.
//! * Teleport into block: block 0 decoded ancilla, block 1 output, qubit 8 input.
//!
//! Every ED is scheduled as preparations (t), Bell-pair CNOTs (t+1),
//! transversal ancilla CNOT (t+2), data CNOTs (t+3), measurements (t+4), so an
//! ED has depth five.

use serde::{Deserialize, Serialize};

use crate::circuit::{CheckRole, Circuit, CircuitBuilder, PropagationResult};
use crate::error::{Error, Result};
use crate::pauli::{GateKind, Pauli, BLOCK};

/// The [[4,2,2]] code with its second logical qubit used as a gauge qubit.
pub struct Code422;

impl Code422 {
    fn p(s: &str) -> Pauli {
        Pauli::parse(s).expect("static operator")
    }
    pub fn stabilizers() -> [Pauli; 2] {
        [Self::p("XXXX"), Self::p("ZZZZ")]
    }
    pub fn x_logical() -> Pauli {
        Self::p("XXII")
    }
    pub fn z_logical() -> Pauli {
        Self::p("ZIZI")
    }
    pub fn x_gauge() -> Pauli {
        Self::p("XIXI")
    }
    pub fn z_gauge() -> Pauli {
        Self::p("ZZII")
    }
}

/// Packed 4-qubit operator `(x, z)` used by the hot loops.
pub type Pauli4 = (u8, u8);

pub const XXXX: Pauli4 = (0b1111, 0);
pub const ZZZZ: Pauli4 = (0, 0b1111);
pub const X_LOGICAL: Pauli4 = (0b0011, 0);
pub const Z_LOGICAL: Pauli4 = (0, 0b0101);
pub const X_GAUGE: Pauli4 = (0b0101, 0);
pub const Z_GAUGE: Pauli4 = (0, 0b0011);

/// Symplectic bit of two packed 4-qubit operators.
pub fn anticommute_pauli4(a: Pauli4, b: Pauli4) -> u8 {
    crate::pauli::anticommute4(a, b)
}

/// State of the gauge qubit. An ED is named after the gauge state prepared
/// in its first ancilla block: the zero ED (`ZeroGauge`) checks a `|0>_T`
/// input and emits a `|+>_T` output; the plus ED does the converse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GaugeFlavor {
    ZeroGauge,
    PlusGauge,
}

impl GaugeFlavor {
    /// Gauge state emitted by the ED of this flavor.
    pub fn ed_output(self) -> GaugeFlavor {
        match self {
            GaugeFlavor::ZeroGauge => GaugeFlavor::PlusGauge,
            GaugeFlavor::PlusGauge => GaugeFlavor::ZeroGauge,
        }
    }

    /// Gauge operator stabilizing a block in this gauge state.
    pub fn gauge_stabilizer4(self) -> Pauli4 {
        match self {
            GaugeFlavor::ZeroGauge => Z_GAUGE,
            GaugeFlavor::PlusGauge => X_GAUGE,
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            GaugeFlavor::ZeroGauge => "z",
            GaugeFlavor::PlusGauge => "p",
        }
    }
}

/// Encoded preparations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrepState {
    /// `|0>_L|+>_T`: Bell pairs on qubits (0,2) and (1,3).
    ZeroPlus,
    /// `|+>_L|0>_T`: Bell pairs on qubits (0,1) and (2,3).
    PlusZero,
    /// `|0>_L|0>_T`: three-CNOT fan-out from qubit 0.
    ZeroZero,
    /// `|+>_L|+>_T`: three-CNOT fan-in onto qubit 0.
    PlusPlus,
}

impl PrepState {
    fn bell_pairs(self) -> [(usize, usize); 2] {
        match self {
            PrepState::PlusZero => [(0, 1), (2, 3)],
            _ => [(0, 2), (1, 3)],
        }
    }

    /// Generators of the stabilizer group of the prepared block.
    pub fn stabilizers(self) -> Vec<Pauli> {
        let [xs, zs] = Code422::stabilizers();
        let extra = match self {
            PrepState::ZeroPlus => [Code422::z_logical(), Code422::x_gauge()],
            PrepState::PlusZero => [Code422::x_logical(), Code422::z_gauge()],
            PrepState::ZeroZero => [Code422::z_logical(), Code422::z_gauge()],
            PrepState::PlusPlus => [Code422::x_logical(), Code422::x_gauge()],
        };
        vec![xs, zs, extra[0], extra[1]]
    }
}

/// Appends the two-Bell-pair preparation of `state` onto `block`.
fn append_pair_prep(
    b: &mut CircuitBuilder,
    state: PrepState,
    block: usize,
    region: &str,
) -> Result<()> {
    for (a, c) in state.bell_pairs() {
        let g = b.new_group();
        let (qa, qc) = (BLOCK * block + a, BLOCK * block + c);
        b.push(GateKind::PrepX, &[qa], region, Some(g))?;
        b.push(GateKind::PrepZ, &[qc], region, Some(g))?;
        b.push(GateKind::Cnot, &[qa, qc], region, Some(g))?;
    }
    Ok(())
}

/// Block indices of one ED inside a larger register.
#[derive(Clone, Copy, Debug)]
pub struct EdBlocks {
    pub data: usize,
    pub anc1: usize,
    pub anc2: usize,
}

/// Measurement location ids of one ED.
#[derive(Clone, Copy, Debug)]
pub struct EdHandles {
    pub x_meas: [usize; 4],
    pub z_meas: [usize; 4],
}

fn block_op(n: usize, parts: &[(usize, &Pauli)]) -> Result<Pauli> {
    let mut acc = Pauli::identity(n)?;
    for &(blk, p) in parts {
        acc = acc.multiply(&p.embed(n, BLOCK * blk)?)?;
    }
    Ok(acc)
}

/// Appends an error-detection gadget of the given flavor, including its
/// parity checks (labelled `"{region}:…"`) and logical-frame trackers.
pub fn append_ed(
    b: &mut CircuitBuilder,
    flavor: GaugeFlavor,
    blocks: EdBlocks,
    region: &str,
) -> Result<EdHandles> {
    let n = b.n_qubits();
    let (st1, st2) = match flavor {
        GaugeFlavor::ZeroGauge => (PrepState::PlusZero, PrepState::ZeroPlus),
        GaugeFlavor::PlusGauge => (PrepState::ZeroPlus, PrepState::PlusZero),
    };
    append_pair_prep(b, st1, blocks.anc1, region)?;
    append_pair_prep(b, st2, blocks.anc2, region)?;
    // The |+>_L block controls the transversal CNOT.
    let (ctl, tgt) = match flavor {
        GaugeFlavor::ZeroGauge => (blocks.anc1, blocks.anc2),
        GaugeFlavor::PlusGauge => (blocks.anc2, blocks.anc1),
    };
    for i in 0..BLOCK {
        b.push(GateKind::Cnot, &[BLOCK * ctl + i, BLOCK * tgt + i], region, None)?;
    }
    let mut x_meas = [0; 4];
    let mut z_meas = [0; 4];
    for i in 0..BLOCK {
        let g = b.new_group();
        let (d, a) = (BLOCK * blocks.data + i, BLOCK * blocks.anc1 + i);
        b.push(GateKind::Cnot, &[d, a], region, Some(g))?;
        x_meas[i] = b.push(GateKind::MeasX, &[d], region, Some(g))?;
        z_meas[i] = b.push(GateKind::MeasZ, &[a], region, Some(g))?;
    }
    let [xs, zs] = Code422::stabilizers();
    let pair = |p: &Pauli| block_op(n, &[(blocks.data, p), (blocks.anc1, p)]);
    b.add_check(
        &format!("{region}:x-parity"),
        x_meas.to_vec(),
        pair(&xs)?,
        CheckRole::Stabilizer,
    );
    b.add_check(
        &format!("{region}:z-parity"),
        z_meas.to_vec(),
        pair(&zs)?,
        CheckRole::Stabilizer,
    );
    match flavor {
        GaugeFlavor::ZeroGauge => b.add_check(
            &format!("{region}:gauge-zz"),
            vec![z_meas[0], z_meas[1]],
            pair(&Code422::z_gauge())?,
            CheckRole::GaugeMatch,
        ),
        GaugeFlavor::PlusGauge => b.add_check(
            &format!("{region}:gauge-xx"),
            vec![x_meas[0], x_meas[2]],
            pair(&Code422::x_gauge())?,
            CheckRole::GaugeMatch,
        ),
    }
    // A flipped X_L-parity (x0^x1) means the applied correction carries a
    // spurious Z_L, which anticommutes with X_L on the output; likewise for
    // the Z_L-parity (z0^z2).
    b.add_tracker(
        &format!("{region}:frame-x"),
        block_op(n, &[(blocks.anc2, &Code422::x_logical())])?,
        vec![x_meas[0], x_meas[1]],
    );
    b.add_tracker(
        &format!("{region}:frame-z"),
        block_op(n, &[(blocks.anc2, &Code422::z_logical())])?,
        vec![z_meas[0], z_meas[2]],
    );
    Ok(EdHandles { x_meas, z_meas })
}

fn block_qubits(b: usize) -> Vec<usize> {
    (BLOCK * b..BLOCK * b + BLOCK).collect()
}

/// Stand-alone ED on 12 qubits (data, first ancilla, output).
pub fn build_ed(flavor: GaugeFlavor) -> Result<Circuit> {
    let name = match flavor {
        GaugeFlavor::ZeroGauge => "zed",
        GaugeFlavor::PlusGauge => "ped",
    };
    let mut b = CircuitBuilder::new(name, 3 * BLOCK)?;
    append_ed(&mut b, flavor, EdBlocks { data: 0, anc1: 1, anc2: 2 }, "ed")?;
    b.set_input_blocks(vec![block_qubits(0)]);
    b.set_output_blocks(vec![block_qubits(2)]);
    b.build()
}

/// Encoding circuit for one of the four product states.
pub fn build_prep(state: PrepState) -> Result<Circuit> {
    let mut b = CircuitBuilder::new(format!("prep-{state:?}").to_lowercase(), BLOCK)?;
    match state {
        PrepState::ZeroPlus | PrepState::PlusZero => append_pair_prep(&mut b, state, 0, "prep")?,
        PrepState::ZeroZero => {
            b.push(GateKind::PrepX, &[0], "prep", None)?;
            for q in 1..4 {
                b.push(GateKind::PrepZ, &[q], "prep", None)?;
            }
            for q in 1..4 {
                b.push(GateKind::Cnot, &[0, q], "prep", None)?;
            }
        }
        PrepState::PlusPlus => {
            b.push(GateKind::PrepZ, &[0], "prep", None)?;
            for q in 1..4 {
                b.push(GateKind::PrepX, &[q], "prep", None)?;
            }
            for q in 1..4 {
                b.push(GateKind::Cnot, &[q, 0], "prep", None)?;
            }
        }
    }
    b.set_output_blocks(vec![block_qubits(0)]);
    b.build()
}

/// Encoder followed by an ED whose own locations are all fault-free in
/// the tests that use it; the ED is the one accepting the encoder's gauge.
pub fn build_prep_then_ed(state: PrepState) -> Result<Circuit> {
    let flavor = match state {
        PrepState::ZeroPlus | PrepState::PlusPlus => GaugeFlavor::PlusGauge,
        PrepState::PlusZero | PrepState::ZeroZero => GaugeFlavor::ZeroGauge,
    };
    let prep = build_prep(state)?;
    let mut b = CircuitBuilder::new(format!("{}-then-ed", prep.name), 3 * BLOCK)?;
    for l in &prep.locations {
        b.push(l.gate.clone(), &l.qubits, "prep", None)?;
    }
    append_ed(&mut b, flavor, EdBlocks { data: 0, anc1: 1, anc2: 2 }, "ed")?;
    b.set_output_blocks(vec![block_qubits(2)]);
    b.build()
}

/// CNOTs `(control, target)` of the decoder for a block in gauge `flavor`.
pub fn decoder_cnots(flavor: GaugeFlavor) -> [(usize, usize); 3] {
    match flavor {
        GaugeFlavor::PlusGauge => [(2, 0), (0, 1), (3, 1)],
        GaugeFlavor::ZeroGauge => [(0, 1), (2, 3), (2, 0)],
    }
}

/// Three-CNOT decoder moving the encoded qubit of a block to its first qubit.
pub fn build_decoder(flavor: GaugeFlavor) -> Result<Circuit> {
    let name = match flavor {
        GaugeFlavor::PlusGauge => "decoder-plus",
        GaugeFlavor::ZeroGauge => "decoder-zero",
    };
    let mut b = CircuitBuilder::new(name, BLOCK)?;
    for (c, t) in decoder_cnots(flavor) {
        b.push(GateKind::Cnot, &[c, t], "decoder", None)?;
    }
    b.set_input_blocks(vec![block_qubits(0)]);
    b.set_output_blocks(vec![block_qubits(0)]);
    b.build()
}

/// Conjugates a 4-qubit operator through the decoder of `flavor`.
pub fn decode_pauli(flavor: GaugeFlavor, p: &Pauli) -> Result<Pauli> {
    let mut q = *p;
    for (c, t) in decoder_cnots(flavor) {
        q = q.conjugate_through(&GateKind::Cnot, &[c, t])?;
    }
    Ok(q)
}

/// Time-reversed decoder: qubit 0 carries the input state, qubits 1–3 are
/// prepared in the syndrome eigenstates the decoder would expose.
pub fn build_encoder(flavor: GaugeFlavor) -> Result<Circuit> {
    let name = match flavor {
        GaugeFlavor::PlusGauge => "encoder-plus",
        GaugeFlavor::ZeroGauge => "encoder-zero",
    };
    let preps = match flavor {
        GaugeFlavor::PlusGauge => [GateKind::PrepZ, GateKind::PrepX, GateKind::PrepX],
        GaugeFlavor::ZeroGauge => [GateKind::PrepZ, GateKind::PrepX, GateKind::PrepZ],
    };
    let mut b = CircuitBuilder::new(name, BLOCK)?;
    for (q, g) in preps.into_iter().enumerate() {
        b.push(g, &[q + 1], "encoder", None)?;
    }
    for (c, t) in decoder_cnots(flavor).into_iter().rev() {
        b.push(GateKind::Cnot, &[c, t], "encoder", None)?;
    }
    b.set_input_blocks(vec![vec![0]]);
    b.set_output_blocks(vec![block_qubits(0)]);
    b.build()
}

/// Which trailing ED (if any) is removed from an exRec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Truncation {
    None,
    Control,
    Target,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExRecGate {
    Cnot,
}

/// Specification of an extended rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExRecSpec {
    pub gate: ExRecGate,
    pub leading: GaugeFlavor,
    pub trailing: GaugeFlavor,
    pub contracted: bool,
    pub truncation: Truncation,
}

impl ExRecSpec {
    /// A consistent CNOT exRec spec with the given leading ED flavor.
    pub fn cnot(leading: GaugeFlavor, contracted: bool) -> Self {
        ExRecSpec {
            gate: ExRecGate::Cnot,
            leading,
            trailing: leading.ed_output(),
            contracted,
            truncation: Truncation::None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trailing != self.leading.ed_output() {
            return Err(Error::Spec(format!(
                "trailing {:?} EDs cannot follow leading {:?} EDs",
                self.trailing, self.leading
            )));
        }
        Ok(())
    }
}

/// Region tags of the CNOT exRec.
pub const LEAD_C: &str = "lead-c";
pub const LEAD_T: &str = "lead-t";
pub const GA: &str = "ga";
pub const TRAIL_C: &str = "trail-c";
pub const TRAIL_T: &str = "trail-t";

/// A built CNOT exRec plus the cut points used by correctness analysis.
#[derive(Clone, Debug)]
pub struct CnotExRec {
    pub spec: ExRecSpec,
    pub circuit: Circuit,
    /// Index of the first transversal-CNOT location (end of leading EDs).
    pub lead_end: usize,
    /// Index just past the last transversal-CNOT location.
    pub ga_end: usize,
    /// Blocks carrying the gate's control and target between Ga and trailing EDs.
    pub ga_blocks: [usize; 2],
}

/// Builds the CNOT 1-exRec: two leading EDs, the transversal CNOT and two
/// trailing EDs (minus the truncated one, if any).
pub fn build_cnot_exrec(spec: ExRecSpec) -> Result<CnotExRec> {
    spec.validate()?;
    let name = format!(
        "cnot-{}exrec-{}{}",
        if spec.contracted { "con" } else { "" },
        spec.leading.short(),
        match spec.truncation {
            Truncation::None => "",
            Truncation::Control => "-trunc-c",
            Truncation::Target => "-trunc-t",
        }
    );
    let mut b = CircuitBuilder::new(name, 10 * BLOCK)?;
    append_ed(&mut b, spec.leading, EdBlocks { data: 0, anc1: 1, anc2: 2 }, LEAD_C)?;
    append_ed(&mut b, spec.leading, EdBlocks { data: 3, anc1: 4, anc2: 5 }, LEAD_T)?;
    let lead_end = b.len();
    for i in 0..BLOCK {
        b.push(GateKind::Cnot, &[2 * BLOCK + i, 5 * BLOCK + i], GA, None)?;
    }
    let ga_end = b.len();
    let mut outputs = Vec::new();
    if spec.truncation != Truncation::Control {
        append_ed(&mut b, spec.trailing, EdBlocks { data: 2, anc1: 6, anc2: 7 }, TRAIL_C)?;
        outputs.push(block_qubits(7));
    } else {
        outputs.push(block_qubits(2));
    }
    if spec.truncation != Truncation::Target {
        append_ed(&mut b, spec.trailing, EdBlocks { data: 5, anc1: 8, anc2: 9 }, TRAIL_T)?;
        outputs.push(block_qubits(9));
    } else {
        outputs.push(block_qubits(5));
    }
    b.set_input_blocks(vec![block_qubits(0), block_qubits(3)]);
    b.set_output_blocks(outputs);
    Ok(CnotExRec {
        spec,
        circuit: b.build()?,
        lead_end,
        ga_end,
        ga_blocks: [2, 5],
    })
}

/// Teleports a physical qubit into a code block: logical Bell pair, decoder
/// on the first ancilla block, then a physical Bell measurement.
pub fn build_teleport_into_block() -> Result<Circuit> {
    let mut b = CircuitBuilder::new("teleport-into-block", 2 * BLOCK + 1)?;
    let input = 2 * BLOCK;
    append_pair_prep(&mut b, PrepState::PlusZero, 0, "bell-prep:block-a")?;
    append_pair_prep(&mut b, PrepState::ZeroPlus, 1, "bell-prep:block-b")?;
    for i in 0..BLOCK {
        b.push(GateKind::Cnot, &[i, BLOCK + i], "bell-prep:cnot", None)?;
    }
    for (c, t) in decoder_cnots(GaugeFlavor::ZeroGauge) {
        b.push(GateKind::Cnot, &[c, t], "decoder", None)?;
    }
    b.push(GateKind::Wait, &[input], "input", None)?;
    b.push(GateKind::Cnot, &[input, 0], "bell-measure", None)?;
    let mx = b.push(GateKind::MeasX, &[input], "bell-measure", None)?;
    let mz = b.push(GateKind::MeasZ, &[0], "bell-measure", None)?;
    let n = b.n_qubits();
    b.add_tracker(
        "frame-x",
        block_op(n, &[(1, &Code422::x_logical())])?,
        vec![mx],
    );
    b.add_tracker(
        "frame-z",
        block_op(n, &[(1, &Code422::z_logical())])?,
        vec![mz],
    );
    b.set_input_blocks(vec![vec![input]]);
    b.set_output_blocks(vec![block_qubits(1)]);
    b.build()
}

/// Constants of the teleported-ancilla budget read off the circuit: the
/// number of encoded operations in the Bell-pair preparation, and the number
/// of physical locations for the input state and the Bell measurement.
pub fn teleport_budget_constants(c: &Circuit) -> (usize, usize) {
    let mut encoded: Vec<&str> = c
        .locations
        .iter()
        .filter(|l| l.region.starts_with("bell-prep:"))
        .map(|l| l.region.as_str())
        .collect();
    encoded.sort_unstable();
    encoded.dedup();
    let physical = c
        .locations
        .iter()
        .filter(|l| l.faultable && (l.region == "input" || l.region == "bell-measure"))
        .count();
    (encoded.len(), physical)
}

/// Deviation of the single output block after applying the classically
/// tracked teleportation frame: a flipped `frame-x` parity applies Z_L and a
/// flipped `frame-z` parity applies X_L.
pub fn frame_corrected_output(c: &Circuit, r: &PropagationResult) -> Result<Pauli4> {
    let [out] = c.output_blocks.as_slice() else {
        return Err(Error::Spec(format!("{} has more than one output block", c.name)));
    };
    let frame = |suffix: &str| -> Result<u8> {
        c.logical_trackers
            .iter()
            .find(|t| t.label.ends_with(suffix))
            .map(|t| c.outcome_parity(&t.frame_outcomes, r.outcome_flips))
            .ok_or_else(|| Error::Spec(format!("{} lacks a {suffix} tracker", c.name)))
    };
    let nibble = |bits: u64| {
        out.iter()
            .enumerate()
            .fold(0u8, |m, (i, &q)| m | ((((bits >> q) & 1) as u8) << i))
    };
    let mut e = (nibble(r.residual.x_bits()), nibble(r.residual.z_bits()));
    if frame("frame-x")? == 1 {
        e.1 ^= Z_LOGICAL.1;
    }
    if frame("frame-z")? == 1 {
        e.0 ^= X_LOGICAL.0;
    }
    Ok(e)
}

/// Heisenberg image of the initial stabilizers of a circuit made only of
/// preparations and unitaries: the stabilizer group of its output.
pub fn output_stabilizers(c: &Circuit) -> Result<Vec<Pauli>> {
    let n = c.n_qubits;
    let mut gens: Vec<Pauli> = Vec::new();
    for l in &c.locations {
        match l.gate {
            GateKind::PrepX | GateKind::PrepZ => {
                let q = l.qubits[0];
                let letter = if l.gate == GateKind::PrepX {
                    crate::pauli::Letter::X
                } else {
                    crate::pauli::Letter::Z
                };
                gens.push(Pauli::single(n, q, letter)?);
            }
            GateKind::MeasX | GateKind::MeasZ => {
                return Err(Error::Spec("measurement in a preparation circuit".into()))
            }
            _ => {
                for g in gens.iter_mut() {
                    *g = g.conjugate_through(&l.gate, &l.qubits)?;
                }
            }
        }
    }
    Ok(gens)
}

/// True iff `p` lies in the GF(2) span of `gens` (phases ignored).
pub fn in_span(gens: &[Pauli], p: &Pauli) -> bool {
    let mut basis: Vec<u128> = Vec::new();
    let pack = |q: &Pauli| (q.x_bits() as u128) | ((q.z_bits() as u128) << 64);
    for g in gens {
        let mut v = pack(g);
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let mut v = pack(p);
    for &b in &basis {
        v = v.min(v ^ b);
    }
    v == 0
}

/// Names accepted by [`build_named`].
pub const GADGET_NAMES: &[&str] = &[
    "zed",
    "ped",
    "cnot-exrec",
    "cnot-exrec-ped-lead",
    "cnot-conexrec",
    "cnot-conexrec-ped-lead",
    "decoder-plus",
    "decoder-zero",
    "encoder-plus",
    "encoder-zero",
    "prep-0L+T",
    "prep-+L0T",
    "prep-0L0T",
    "prep-+L+T",
    "teleport-into-block",
];

/// Builds a gadget by registry name.
pub fn build_named(name: &str) -> Result<Circuit> {
    use GaugeFlavor::*;
    Ok(match name {
        "zed" => build_ed(ZeroGauge)?,
        "ped" => build_ed(PlusGauge)?,
        "cnot-exrec" => build_cnot_exrec(ExRecSpec::cnot(ZeroGauge, false))?.circuit,
        "cnot-exrec-ped-lead" => build_cnot_exrec(ExRecSpec::cnot(PlusGauge, false))?.circuit,
        "cnot-conexrec" => build_cnot_exrec(ExRecSpec::cnot(ZeroGauge, true))?.circuit,
        "cnot-conexrec-ped-lead" => build_cnot_exrec(ExRecSpec::cnot(PlusGauge, true))?.circuit,
        "decoder-plus" => build_decoder(PlusGauge)?,
        "decoder-zero" => build_decoder(ZeroGauge)?,
        "encoder-plus" => build_encoder(PlusGauge)?,
        "encoder-zero" => build_encoder(ZeroGauge)?,
        "prep-0L+T" => build_prep(PrepState::ZeroPlus)?,
        "prep-+L0T" => build_prep(PrepState::PlusZero)?,
        "prep-0L0T" => build_prep(PrepState::ZeroZero)?,
        "prep-+L+T" => build_prep(PrepState::PlusPlus)?,
        "teleport-into-block" => build_teleport_into_block()?,
        _ => return Err(Error::UnknownGadget(name.to_string())),
    })
}

/// Whether a registry name denotes a contracted gadget.
pub fn is_contracted_name(name: &str) -> bool {
    name.contains("conexrec")
}
