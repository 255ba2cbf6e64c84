use std::sync::OnceLock;

use ftlab::circuit::FaultAssignment;
use ftlab::gadgets::GaugeFlavor;
use ftlab::malignancy::*;
use ftlab::pauli::Pauli;

fn report(contracted: bool) -> &'static MalignancyReport {
    static U: OnceLock<MalignancyReport> = OnceLock::new();
    static C: OnceLock<MalignancyReport> = OnceLock::new();
    let cell = if contracted { &C } else { &U };
    cell.get_or_init(|| count_malignant_pairs(contracted, &CountOptions::default()).unwrap())
}

fn analysis(lead: GaugeFlavor) -> ExRecAnalysis {
    ExRecAnalysis::new(lead, false).unwrap()
}

#[test]
fn twelve_criteria_with_distinct_labels() {
    let all = CorrectnessCriterion::all();
    assert_eq!(all.len(), 12);
    let mut labels: Vec<String> = all.iter().map(|c| c.label()).collect();
    labels.sort();
    labels.dedup();
    assert_eq!(labels.len(), 12);
    assert_eq!(all.iter().filter(|c| !c.is_weak()).count(), 4);
}

#[test]
fn uncontracted_counts_near_published() {
    let r = report(false);
    assert_eq!((r.tilde_a, r.hat_a), (1312, 728));
    let o = &r.orderings[0];
    assert_eq!((o.tilde_a_unfiltered, o.hat_a_unfiltered), (1320, 736));
    for (got, want) in [(r.tilde_a, 1306.0), (r.hat_a, 722.0)] {
        assert!((got as f64 - want).abs() <= 0.10 * want);
    }
}

#[test]
fn contracted_counts_exact() {
    let r = report(true);
    assert_eq!((r.tilde_a, r.hat_a), (550, 336));
}

#[test]
fn count_invariants() {
    for contracted in [false, true] {
        let r = report(contracted);
        assert!(r.symmetric);
        for o in &r.orderings {
            assert_eq!(o.malignant_singletons, 0);
            assert!(o.hat_a <= o.tilde_a);
            assert!(o.tilde_a <= o.tilde_a_unfiltered);
            assert_eq!(o.benign_pairs + o.tilde_a, o.locations * (o.locations - 1) / 2);
            // Strict-criterion malignant consecutive pairs are removed by the
            // augmented-exRec filter, except where the trailing member is a
            // contracted bundle (one per Ga location and trailing ED).
            let expected = if contracted { 8 } else { 0 };
            assert_eq!(o.consecutive_malignant.len(), expected, "{:?}", o.consecutive_malignant);
        }
    }
    assert!(report(true).tilde_a <= report(false).tilde_a);
    assert!(report(true).hat_a <= report(false).hat_a);
}

#[test]
fn filtered_pairs_are_ga_then_trailing() {
    let a = analysis(GaugeFlavor::ZeroGauge);
    let c = &a.exrec.circuit;
    let o = &report(false).orderings[0];
    assert_eq!(o.filtered_pairs.len(), 8);
    for [l1, l2] in &o.filtered_pairs {
        let regions = [c.locations[*l1].region.as_str(), c.locations[*l2].region.as_str()];
        assert_eq!(regions[0], "ga");
        assert!(regions[1].starts_with("trail-"));
    }
}

#[test]
fn surviving_consecutive_pairs_end_in_bundles() {
    let a = ExRecAnalysis::new(GaugeFlavor::ZeroGauge, true).unwrap();
    let c = &a.exrec.circuit;
    for [l1, l2] in &report(true).orderings[0].consecutive_malignant {
        assert_eq!(c.locations[*l1].region, "ga");
        assert!(c.locations[*l2].contracted_group.is_some());
    }
}

#[test]
fn triple_counts() {
    assert_eq!(count_triples(116, 2, 28).unwrap(), 225_740);
    assert_eq!(count_triples(52, 2, 12).unwrap(), 20_076);
    assert_eq!(count_triples(3, 0, 28).unwrap(), 1);
    assert_eq!(report(false).triples, 225_740);
}

#[test]
fn no_faults_and_single_faults_are_correct() {
    for lead in [GaugeFlavor::ZeroGauge, GaugeFlavor::PlusGauge] {
        let a = analysis(lead);
        let n = a.exrec.circuit.n_qubits;
        for crit in CorrectnessCriterion::all() {
            assert!(!is_incorrect(&a, &FaultAssignment::new(), &crit).unwrap());
            for s in &a.sites {
                for (x, z) in s.site.fault_options() {
                    let f: FaultAssignment =
                        [(s.site.first(), Pauli::from_bits(n, x, z).unwrap())].into_iter().collect();
                    assert!(!is_incorrect(&a, &f, &crit).unwrap(), "{} {}", crit.label(), s.site.first());
                }
            }
        }
    }
}

#[test]
fn witnesses_replay_as_incorrect() {
    let a = analysis(GaugeFlavor::ZeroGauge);
    let crits = CorrectnessCriterion::all();
    let r = report(false);
    assert!(!r.witnesses.is_empty());
    for w in &r.witnesses {
        let crit = crits.iter().find(|c| c.label() == w.criterion).unwrap();
        let f: FaultAssignment = (0..2)
            .map(|k| (w.locations[k][0], Pauli::parse(&w.faults[k]).unwrap()))
            .collect();
        assert!(is_incorrect(&a, &f, crit).unwrap(), "{w:?}");
    }
}

#[test]
fn leading_ed_and_gate_pair_is_malignant() {
    let a = analysis(GaugeFlavor::ZeroGauge);
    let sets = malignant_pair_sets(&a);
    let found = sets.pairs.iter().any(|&(i, j, _)| {
        let (ri, rj) = (a.sites[i].region, a.sites[j].region);
        ri == Region::LeadC && rj == Region::Ga
    });
    assert!(found);
}

#[test]
fn monte_carlo_zero_noise_and_determinism() {
    let a = analysis(GaugeFlavor::ZeroGauge);
    let r = monte_carlo_conditional_failure(&a, 0.0, 1000, 7, 0.99).unwrap();
    assert_eq!(r.estimate, Some(0.0));
    assert_eq!(r.acceptance_rate, 1.0);
    let r1 = monte_carlo_conditional_failure(&a, 0.01, 200_000, 3, 0.99).unwrap();
    let r2 = monte_carlo_conditional_failure(&a, 0.01, 200_000, 3, 0.99).unwrap();
    assert_eq!(r1, r2);
    assert!(r1.accepted < r1.samples);
    assert!(monte_carlo_conditional_failure(&a, 0.3, 10, 1, 0.99).is_err());
    assert!(monte_carlo_conditional_failure(&a, 0.01, 0, 1, 0.99).is_err());
}

#[test]
fn wilson_interval_brackets_the_ratio() {
    let (lo, hi) = wilson_interval(5, 100, 0.95).unwrap();
    assert!(lo < 0.05 && 0.05 < hi);
    // Reference values for k=5, n=100 at 95%: [0.0215, 0.1118].
    assert!((lo - 0.02154).abs() < 1e-4);
    assert!((hi - 0.11175).abs() < 1e-4);
    assert!(wilson_interval(0, 0, 0.95).is_none());
}
