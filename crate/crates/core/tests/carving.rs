mod common;

use common::{random_degree4_graph, RandomCircuit};
use ftlab::carving::*;
use ftlab::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_circuit() -> impl Strategy<Value = RandomCircuit> {
    any::<u64>().prop_map(|seed| RandomCircuit::sample(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn build(rc: &RandomCircuit) -> ExRecDag {
    rc.build()
}

fn permuted(dag: &ExRecDag, perm: &[usize]) -> ExRecDag {
    let mut nodes = vec![dag.nodes[0].clone(); dag.nodes.len()];
    for (i, &p) in perm.iter().enumerate() {
        nodes[p] = dag.nodes[i].clone();
    }
    ExRecDag {
        nodes,
        ..dag.clone()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn carving_is_disjoint_and_bad_means_two_faults(rc in random_circuit()) {
        let dag = build(&rc);
        let labels = classify(&dag).unwrap();
        let segs = carve(&dag, &labels).unwrap();
        let mut owner = vec![None; dag.eds.len()];
        for s in &segs {
            for &e in &s.eds {
                prop_assert!(owner[e].is_none(), "ED {} carved twice", e);
                owner[e] = Some(s.node);
            }
        }
        prop_assert!(owner.iter().all(|o| o.is_some()));
        let total: u32 = segs.iter().map(|s| s.faults).sum();
        let expected: u32 = dag.eds.iter().map(|e| e.faults).sum::<u32>()
            + dag.nodes.iter().map(|n| n.ga_faults).sum::<u32>();
        prop_assert_eq!(total, expected);
        for s in &segs {
            match s.label {
                CarveLabel::Bad => prop_assert!(s.faults >= 2),
                CarveLabel::Good | CarveLabel::GoodDoublePrime => prop_assert!(s.faults <= 1),
                CarveLabel::GoodPrime => {
                    let target = s.absorbed_into.unwrap();
                    prop_assert_eq!(labels[target], CarveLabel::Bad);
                }
            }
            if !dag.is_pre_bad(s.node) {
                prop_assert_eq!(s.label, CarveLabel::Good);
            }
        }
    }

    #[test]
    fn classification_ignores_node_numbering(rc in random_circuit(), seed in any::<u64>()) {
        let dag = build(&rc);
        let n = dag.nodes.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let base = classify(&dag).unwrap();
        let other = classify(&permuted(&dag, &perm)).unwrap();
        for i in 0..n {
            prop_assert_eq!(base[i], other[perm[i]]);
        }
    }

    #[test]
    fn sealed_cluster_is_sealed_and_small_when_quiet(rc in random_circuit(), pick in any::<prop::sample::Index>()) {
        let dag = build(&rc);
        let marked = pick.index(dag.nodes.len());
        let c = minimal_sealed_cluster(&dag, &[marked]).unwrap();
        prop_assert!(c.nodes.contains(&marked));
        if dag.eds.iter().all(|e| e.faults == 0) {
            prop_assert!(c.nodes.len() <= 1 + 2 * dag.nodes[marked].arity);
            prop_assert!(c.sealed);
        }
        // Every node adjacent through a faulty ED is inside.
        for &u in &c.nodes {
            for (e, v) in dag.neighbours(u) {
                if dag.eds[e].faults > 0 {
                    prop_assert!(c.nodes.contains(&v));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cluster_counts_obey_the_growth_bound(
        seed in any::<u64>(),
        n in 8usize..40,
        s in 1usize..=8,
        second in 0usize..40,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let adj = random_degree4_graph(&mut rng, n, 3 * n);
        let one = count_connected_clusters(&adj, &[0], s, DEFAULT_CLUSTER_CAP).unwrap();
        prop_assert!(one as f64 <= cluster_bound(4, s, 1) + 1e-9);
        let other = second % n;
        if s >= 2 && other != 0 {
            let two = count_connected_clusters(&adj, &[0, other], s, DEFAULT_CLUSTER_CAP).unwrap();
            prop_assert!(two as f64 <= cluster_bound(4, s, 2) + 1e-9);
            prop_assert!(two <= one);
        }
    }
}

/// Root 0 with four neighbours, each with three further children.
fn tree() -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); 17];
    let mut next = 5;
    for nb in 1..=4 {
        adj[0].push(nb);
        adj[nb].push(0);
        for _ in 0..3 {
            adj[nb].push(next);
            adj[next].push(nb);
            next += 1;
        }
    }
    adj
}

#[test]
fn small_cluster_counts_on_a_tree() {
    let adj = tree();
    assert_eq!(count_connected_clusters(&adj, &[0], 1, 12).unwrap(), 1);
    assert_eq!(count_connected_clusters(&adj, &[0], 2, 12).unwrap(), 4);
    assert_eq!(count_connected_clusters(&adj, &[0], 3, 12).unwrap(), 18);
    assert!((cluster_bound(4, 3, 1) - (std::f64::consts::E * 4.0).powi(2)).abs() < 1e-9);
}

#[test]
fn cluster_cap_enforced() {
    let adj = tree();
    assert_eq!(
        count_connected_clusters(&adj, &[0], 13, 12),
        Err(Error::ResourceCap { size: 13, cap: 12 })
    );
}

#[test]
fn overlapping_pre_bad_pair_carves_one_bad_segment() {
    // Three faults: leading ED of exRec 0, the shared ED, trailing ED of exRec 1.
    let dag = ExRecDag {
        eds: vec![EdNode { faults: 1 }, EdNode { faults: 1 }, EdNode { faults: 1 }],
        nodes: vec![
            ExRecNode { arity: 1, leading: vec![0], trailing: vec![1], ga_faults: 0, is_measurement: false },
            ExRecNode { arity: 1, leading: vec![1], trailing: vec![2], ga_faults: 0, is_measurement: false },
        ],
        ed_size: 28,
        ga_size: 4,
    };
    let labels = classify(&dag).unwrap();
    let segs = carve(&dag, &labels).unwrap();
    assert_eq!(segs.iter().filter(|s| s.label == CarveLabel::Bad).count(), 1);
    assert_eq!(segs[0].label, CarveLabel::GoodPrime);
    assert_eq!(segs[0].absorbed_into, Some(1));
    assert!(to_dot(&dag, Some(&labels)).contains("GoodPrime"));
}

#[test]
fn fault_free_dag_has_no_bad_segments() {
    let dag = build(&RandomCircuit {
        wires: 3,
        gates: vec![(0, Some(1), 0), (1, Some(2), 0), (2, None, 0), (0, Some(2), 0)],
        faults: vec![0],
        measure_last: true,
    });
    let labels = classify(&dag).unwrap();
    assert!(carve(&dag, &labels).unwrap().iter().all(|s| s.label == CarveLabel::Good));
}
