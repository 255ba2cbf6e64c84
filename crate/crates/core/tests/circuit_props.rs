use ftlab::circuit::{CheckRole, CircuitBuilder, FaultAssignment};
use ftlab::gadgets::{build_cnot_exrec, ExRecSpec, GaugeFlavor};
use ftlab::pauli::{GateKind, Letter, Pauli};
use proptest::prelude::*;

fn exrec() -> ftlab::circuit::Circuit {
    build_cnot_exrec(ExRecSpec::cnot(GaugeFlavor::ZeroGauge, false))
        .unwrap()
        .circuit
}

/// A faultable location and a nontrivial Pauli on its qubits.
fn fault(c: &ftlab::circuit::Circuit) -> impl Strategy<Value = (usize, Pauli)> {
    let locs: Vec<(usize, Vec<usize>)> = c
        .locations
        .iter()
        .filter(|l| l.faultable)
        .map(|l| (l.id, l.qubits.clone()))
        .collect();
    let n = c.n_qubits;
    (0..locs.len(), 1u32..16).prop_map(move |(i, code)| {
        let (id, qs) = &locs[i];
        let mut x = 0u64;
        let mut z = 0u64;
        for (k, &q) in qs.iter().enumerate() {
            let two = (code >> (2 * k)) & 3;
            x |= ((two & 1) as u64) << q;
            z |= (((two >> 1) & 1) as u64) << q;
        }
        if x == 0 && z == 0 {
            x = 1 << qs[0];
        }
        (*id, Pauli::from_bits(n, x, z).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn propagation_is_f2_linear(pair in {
        let c = exrec();
        (fault(&c), fault(&c))
    }) {
        let c = exrec_cached();
        let ((l1, p1), (l2, p2)) = pair;
        prop_assume!(l1 != l2);
        let id = Pauli::identity(c.n_qubits).unwrap();
        let r1 = c.propagate_single(l1, &p1).unwrap();
        let r2 = c.propagate_single(l2, &p2).unwrap();
        let both: FaultAssignment = [(l1, p1), (l2, p2)].into_iter().collect();
        let r = c.simulate(&both, &id).unwrap();
        prop_assert_eq!(r.detection_bits, r1.detection_bits ^ r2.detection_bits);
        prop_assert_eq!(r.logical_flips, r1.logical_flips ^ r2.logical_flips);
        prop_assert_eq!(r.outcome_flips, r1.outcome_flips ^ r2.outcome_flips);
        prop_assert_eq!(r.residual, r1.residual.multiply(&r2.residual).unwrap());
    }
}

fn exrec_cached() -> &'static ftlab::circuit::Circuit {
    static C: std::sync::OnceLock<ftlab::circuit::Circuit> = std::sync::OnceLock::new();
    C.get_or_init(exrec)
}

#[test]
fn empty_assignment_is_accepted() {
    let c = exrec_cached();
    let r = c
        .simulate(&FaultAssignment::new(), &Pauli::identity(c.n_qubits).unwrap())
        .unwrap();
    assert!(r.accepted());
    assert!(r.residual.is_identity());
}

#[test]
fn cancelling_faults_on_one_wire() {
    let mut b = CircuitBuilder::new("wire", 1).unwrap();
    b.push(GateKind::PrepZ, &[0], "wire", None).unwrap();
    let w1 = b.push(GateKind::Wait, &[0], "wire", None).unwrap();
    let w2 = b.push(GateKind::Wait, &[0], "wire", None).unwrap();
    let m = b.push(GateKind::MeasZ, &[0], "wire", None).unwrap();
    b.add_check("z", vec![m], Pauli::parse("Z").unwrap(), CheckRole::Stabilizer);
    let c = b.build().unwrap();
    let x = Pauli::parse("X").unwrap();
    let single = c.propagate_single(w1, &x).unwrap();
    assert!(!single.accepted());
    let f: FaultAssignment = [(w1, x), (w2, x)].into_iter().collect();
    let r = c.simulate(&f, &Pauli::identity(1).unwrap()).unwrap();
    assert!(r.accepted());
    assert!(r.residual.is_identity());
}

#[test]
fn unsupported_fault_rejected() {
    let c = exrec_cached();
    let l = c.locations.iter().find(|l| l.region == "ga").unwrap();
    let off = (0..c.n_qubits).find(|q| !l.qubits.contains(q)).unwrap();
    let p = Pauli::single(c.n_qubits, off, Letter::Z).unwrap();
    assert!(c.propagate_single(l.id, &p).is_err());
}
