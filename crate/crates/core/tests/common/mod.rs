//! Random instances shared by the property suites and the acceptance run.
#![allow(dead_code)]

use std::collections::HashMap;

use ftlab::carving::{EdNode, ExRecDag, ExRecNode};
use rand::Rng;

/// A random circuit on `wires` qubit lines: each gate acts on one or two
/// wires and shares its leading EDs with the previous gate on each wire.
#[derive(Clone, Debug)]
pub struct RandomCircuit {
    pub wires: usize,
    /// (first wire, optional second wire, Ga faults)
    pub gates: Vec<(usize, Option<usize>, u32)>,
    /// Fault counts assigned to EDs in creation order (cycled).
    pub faults: Vec<u32>,
    /// End every wire with a measurement exRec.
    pub measure_last: bool,
}

impl RandomCircuit {
    pub fn sample(rng: &mut impl Rng) -> Self {
        let wires = rng.gen_range(1..=4);
        let n_gates = rng.gen_range(1..12);
        let gates = (0..n_gates)
            .map(|_| {
                let a = rng.gen_range(0..wires);
                let b = (wires > 1 && rng.gen_bool(0.5)).then(|| (a + rng.gen_range(1..wires)) % wires);
                (a, b, rng.gen_range(0..=1))
            })
            .collect();
        let faults = (0..64)
            .map(|_| match rng.gen_range(0..10) {
                0..=5 => 0,
                6..=8 => 1,
                _ => 2,
            })
            .collect();
        RandomCircuit {
            wires,
            gates,
            faults,
            measure_last: rng.gen_bool(0.5),
        }
    }

    pub fn build(&self) -> ExRecDag {
        let mut eds: Vec<EdNode> = Vec::new();
        let mut nodes: Vec<ExRecNode> = Vec::new();
        let mut open: HashMap<usize, usize> = HashMap::new();
        let new_ed = |eds: &mut Vec<EdNode>| {
            eds.push(EdNode {
                faults: self.faults[eds.len() % self.faults.len()],
            });
            eds.len() - 1
        };
        for &(a, b, g) in &self.gates {
            let mut leading = Vec::new();
            let mut trailing = Vec::new();
            for w in std::iter::once(a).chain(b) {
                let e = match open.get(&w) {
                    Some(&e) => e,
                    None => new_ed(&mut eds),
                };
                leading.push(e);
                let t = new_ed(&mut eds);
                trailing.push(t);
                open.insert(w, t);
            }
            nodes.push(ExRecNode {
                arity: leading.len(),
                leading,
                trailing,
                ga_faults: g,
                is_measurement: false,
            });
        }
        if self.measure_last {
            for w in 0..self.wires {
                if let Some(&e) = open.get(&w) {
                    nodes.push(ExRecNode {
                        arity: 1,
                        leading: vec![e],
                        trailing: vec![],
                        ga_faults: 0,
                        is_measurement: true,
                    });
                }
            }
        }
        ExRecDag {
            eds,
            nodes,
            ed_size: 28,
            ga_size: 4,
        }
    }
}

/// Random simple graph on `n` vertices with maximum degree 4.
pub fn random_degree4_graph(rng: &mut impl Rng, n: usize, attempts: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for _ in 0..attempts {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && adj[a].len() < 4 && adj[b].len() < 4 && !adj[a].contains(&b) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    adj
}
