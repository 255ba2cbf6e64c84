use ftlab::circuit::FaultAssignment;
use ftlab::gadgets::*;
use ftlab::malignancy::{ed_single_fault_audit, logical_offsets, pack4};
use ftlab::pauli::{GateKind, Letter, Pauli};

fn p(s: &str) -> Pauli {
    Pauli::parse(s).unwrap()
}

fn check_index(c: &ftlab::circuit::Circuit, suffix: &str) -> usize {
    c.parity_checks
        .iter()
        .position(|k| k.label.ends_with(suffix))
        .unwrap_or_else(|| panic!("no check {suffix}"))
}

#[test]
fn ed_has_twenty_eight_locations_twelve_contracted() {
    for f in [GaugeFlavor::ZeroGauge, GaugeFlavor::PlusGauge] {
        let c = build_ed(f).unwrap();
        assert_eq!(c.n_qubits, 12);
        assert_eq!(c.location_count(false), 28);
        assert_eq!(c.location_count(true), 12);
        assert!(c.depth() >= 2);
        let preps = c.locations.iter().filter(|l| l.region == "ed").count();
        assert_eq!(preps, 28);
    }
}

#[test]
fn exrec_location_counts() {
    for lead in [GaugeFlavor::ZeroGauge, GaugeFlavor::PlusGauge] {
        let full = build_cnot_exrec(ExRecSpec::cnot(lead, false)).unwrap();
        assert_eq!(full.circuit.location_count(false), 116);
        assert_eq!(full.circuit.location_count(true), 52);
        assert_eq!(full.ga_end - full.lead_end, 4);
        for t in [Truncation::Control, Truncation::Target] {
            let spec = ExRecSpec {
                truncation: t,
                ..ExRecSpec::cnot(lead, false)
            };
            assert_eq!(build_cnot_exrec(spec).unwrap().circuit.location_count(false), 88);
        }
    }
}

#[test]
fn inconsistent_flavors_rejected() {
    let spec = ExRecSpec {
        trailing: GaugeFlavor::ZeroGauge,
        ..ExRecSpec::cnot(GaugeFlavor::ZeroGauge, false)
    };
    assert!(build_cnot_exrec(spec).is_err());
}

#[test]
fn flavor_alternation() {
    assert_eq!(GaugeFlavor::ZeroGauge.ed_output(), GaugeFlavor::PlusGauge);
    assert_eq!(GaugeFlavor::PlusGauge.ed_output(), GaugeFlavor::ZeroGauge);
}

#[test]
fn fault_free_ed_accepts_with_trivial_frame() {
    for f in [GaugeFlavor::ZeroGauge, GaugeFlavor::PlusGauge] {
        let c = build_ed(f).unwrap();
        let r = c
            .simulate(&FaultAssignment::new(), &Pauli::identity(12).unwrap())
            .unwrap();
        assert!(r.accepted());
        assert!(r.residual.is_identity());
        assert_eq!(r.logical_flips, 0);
    }
}

#[test]
fn z_on_data_trips_x_parity() {
    let c = build_ed(GaugeFlavor::ZeroGauge).unwrap();
    let input = Pauli::single(12, 0, Letter::Z).unwrap();
    let r = c.simulate(&FaultAssignment::new(), &input).unwrap();
    assert_eq!((r.detection_bits >> check_index(&c, "x-parity")) & 1, 1);
}

#[test]
fn single_input_errors_detected_or_trivial() {
    for f in [GaugeFlavor::ZeroGauge, GaugeFlavor::PlusGauge] {
        let c = build_ed(f).unwrap();
        let offsets = logical_offsets(f.ed_output());
        for q in 0..4 {
            for letter in [Letter::X, Letter::Y, Letter::Z] {
                let input = Pauli::single(12, q, letter).unwrap();
                let r = c.simulate(&FaultAssignment::new(), &input).unwrap();
                if r.accepted() {
                    let e = frame_corrected_output(&c, &r).unwrap();
                    assert!(offsets[pack4(e) as usize].contains(&0), "{letter:?}{q}");
                }
            }
        }
    }
}

#[test]
fn every_single_ed_fault_is_detected_or_harmless() {
    assert_eq!(ed_single_fault_audit(GaugeFlavor::ZeroGauge).unwrap(), 0);
    assert_eq!(ed_single_fault_audit(GaugeFlavor::PlusGauge).unwrap(), 0);
}

#[test]
fn preparation_stabilizers() {
    for state in [
        PrepState::ZeroPlus,
        PrepState::PlusZero,
        PrepState::ZeroZero,
        PrepState::PlusPlus,
    ] {
        let c = build_prep(state).unwrap();
        let gens = output_stabilizers(&c).unwrap();
        for s in state.stabilizers() {
            assert!(in_span(&gens, &s), "{state:?} lacks {s}");
        }
    }
    // |0>_L|+>_T is two Bell pairs on qubits (0,2) and (1,3).
    let gens = output_stabilizers(&build_prep(PrepState::ZeroPlus).unwrap()).unwrap();
    for s in ["ZIZI", "IZIZ", "XIXI", "IXIX"] {
        assert!(in_span(&gens, &p(s)));
    }
}

#[test]
fn fault_free_prep_then_ed_accepted() {
    for state in [
        PrepState::ZeroPlus,
        PrepState::PlusZero,
        PrepState::ZeroZero,
        PrepState::PlusPlus,
    ] {
        let c = build_prep_then_ed(state).unwrap();
        let r = c
            .simulate(&FaultAssignment::new(), &Pauli::identity(12).unwrap())
            .unwrap();
        assert!(r.accepted(), "{state:?}");
    }
}

#[test]
fn encoder_weight_two_fault_caught_by_gauge_check() {
    // X⊗X after the final fan-out CNOT (0→3) is IXXI up to XXXX.
    let c = build_prep_then_ed(PrepState::ZeroZero).unwrap();
    let last_cnot = c
        .locations
        .iter()
        .rfind(|l| l.region == "prep" && l.gate == GateKind::Cnot)
        .unwrap();
    assert_eq!(last_cnot.qubits, vec![0, 3]);
    let mut fault = Pauli::identity(12).unwrap();
    for q in [0, 3] {
        fault = fault.multiply(&Pauli::single(12, q, Letter::X).unwrap()).unwrap();
    }
    let r = c.propagate_single(last_cnot.id, &fault).unwrap();
    assert_eq!((r.detection_bits >> check_index(&c, "gauge-zz")) & 1, 1);
    assert_eq!((r.detection_bits >> check_index(&c, "x-parity")) & 1, 0);
    assert_eq!((r.detection_bits >> check_index(&c, "z-parity")) & 1, 0);
}

#[test]
fn decoder_conjugation_table() {
    let plus = GaugeFlavor::PlusGauge;
    assert_eq!(decode_pauli(plus, &p("ZZZZ")).unwrap(), p("IZII"));
    assert_eq!(decode_pauli(plus, &p("XIXI")).unwrap(), p("IIXI"));
    assert_eq!(decode_pauli(plus, &p("IXIX")).unwrap(), p("IIIX"));
    let zero = GaugeFlavor::ZeroGauge;
    assert_eq!(decode_pauli(zero, &p("ZZII")).unwrap(), p("IZII"));
    for f in [plus, zero] {
        assert_eq!(build_decoder(f).unwrap().location_count(false), 3);
    }
}

#[test]
fn decoder_exposes_logical_on_first_qubit() {
    for f in [GaugeFlavor::PlusGauge, GaugeFlavor::ZeroGauge] {
        let x = decode_pauli(f, &Code422::x_logical()).unwrap();
        let z = decode_pauli(f, &Code422::z_logical()).unwrap();
        // Modulo the decoded stabilizers, the logical acts as X/Z on qubit 0.
        assert_eq!(x.letter(0), Letter::X);
        assert_eq!(z.letter(0), Letter::Z);
    }
}

#[test]
fn encoder_prepares_code_and_gauge() {
    for (f, gauge) in [
        (GaugeFlavor::PlusGauge, Code422::x_gauge()),
        (GaugeFlavor::ZeroGauge, Code422::z_gauge()),
    ] {
        let gens = output_stabilizers(&build_encoder(f).unwrap()).unwrap();
        let [xs, zs] = Code422::stabilizers();
        for s in [xs, zs, gauge] {
            assert!(in_span(&gens, &s), "{f:?} encoder lacks {s}");
        }
    }
}

#[test]
fn teleport_into_block_budget() {
    let c = build_teleport_into_block().unwrap();
    let measure = c
        .locations
        .iter()
        .filter(|l| l.region == "bell-measure")
        .count();
    assert_eq!(measure, 3);
    assert_eq!(teleport_budget_constants(&c), (3, 4));
    let r = c
        .simulate(&FaultAssignment::new(), &Pauli::identity(c.n_qubits).unwrap())
        .unwrap();
    assert!(r.accepted());
    assert!(r.residual.is_identity());
    assert_eq!(r.logical_flips, 0);
}

#[test]
fn registry_builds_every_name() {
    for name in GADGET_NAMES {
        let c = build_named(name).unwrap();
        let json = c.to_json();
        assert_eq!(json["schema_version"], 1);
    }
    assert!(build_named("no-such-gadget").is_err());
}
