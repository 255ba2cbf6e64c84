//! Carving of bad clusters on an abstract graph of exRecs: classification of
//! pre-bad exRecs into bad / good′ / good″, decoder-encoder placement,
//! minimal sealed clusters, and brute-force connected-cluster counting.
//!
//! Gadget internals are abstracted to per-region fault counts. Each ED is a
//! shared resource: it can be the trailing ED of one exRec and the leading
//! ED of the next.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on brute-force cluster sizes.
pub const DEFAULT_CLUSTER_CAP: usize = 12;

/// One ED with its fault count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdNode {
    pub faults: u32,
}

/// One exRec: its leading and trailing EDs (indices into `ExRecDag::eds`)
/// and the number of faults in its gate gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExRecNode {
    pub arity: usize,
    pub leading: Vec<usize>,
    pub trailing: Vec<usize>,
    pub ga_faults: u32,
    /// Measurement exRecs have no trailing EDs and no followers.
    pub is_measurement: bool,
}

/// A circuit abstracted to exRecs sharing EDs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExRecDag {
    pub eds: Vec<EdNode>,
    pub nodes: Vec<ExRecNode>,
    /// Locations per ED and per gate gadget, for interior sizes.
    pub ed_size: usize,
    pub ga_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CarveLabel {
    Good,
    GoodPrime,
    GoodDoublePrime,
    Bad,
}

impl CarveLabel {
    /// good* = good ∪ good′ ∪ good″.
    pub fn is_good_star(self) -> bool {
        self != CarveLabel::Bad
    }
}

/// Where the decoder-encoder pair sits relative to a shared ED.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Placement {
    Before,
    After,
}

/// A carved exRec: the EDs assigned to it and the faults it contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarvedSegment {
    pub node: usize,
    pub label: CarveLabel,
    pub eds: Vec<usize>,
    pub faults: u32,
    /// For good′ segments: the following bad exRec that absorbs its noise.
    pub absorbed_into: Option<usize>,
}

/// A sealed cluster: node set, edge EDs and interior size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SealedCluster {
    pub nodes: Vec<usize>,
    pub leading_edge: Vec<usize>,
    pub trailing_edge: Vec<usize>,
    pub interior_eds: Vec<usize>,
    pub interior_locations: usize,
    /// True when every edge ED is fault-free.
    pub sealed: bool,
}

impl ExRecDag {
    /// Validates ED ownership, arities and acyclicity.
    pub fn validate(&self) -> Result<()> {
        let mut lead_owner = vec![None; self.eds.len()];
        let mut trail_owner = vec![None; self.eds.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if n.arity == 0 || n.arity > 2 {
                return Err(Error::Arity2(n.arity));
            }
            if n.leading.len() > n.arity || n.trailing.len() > n.arity {
                return Err(Error::Spec(format!("exRec {i} has more EDs than its arity")));
            }
            if n.is_measurement && !n.trailing.is_empty() {
                return Err(Error::Spec(format!("measurement exRec {i} has trailing EDs")));
            }
            for &e in &n.leading {
                let slot = lead_owner.get_mut(e).ok_or(Error::UnknownLocation(e))?;
                if slot.replace(i).is_some() {
                    return Err(Error::Spec(format!("ED {e} leads two exRecs")));
                }
            }
            for &e in &n.trailing {
                let slot = trail_owner.get_mut(e).ok_or(Error::UnknownLocation(e))?;
                if slot.replace(i).is_some() {
                    return Err(Error::Spec(format!("ED {e} trails two exRecs")));
                }
            }
        }
        self.topological_order().map(|_| ())
    }

    fn lead_owner(&self) -> Vec<Option<usize>> {
        let mut v = vec![None; self.eds.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for &e in &n.leading {
                v[e] = Some(i);
            }
        }
        v
    }

    fn trail_owner(&self) -> Vec<Option<usize>> {
        let mut v = vec![None; self.eds.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for &e in &n.trailing {
                v[e] = Some(i);
            }
        }
        v
    }

    /// Following exRecs of node `i`, one per shared trailing ED.
    pub fn followers(&self, i: usize) -> Vec<(usize, usize)> {
        let lead = self.lead_owner();
        self.nodes[i]
            .trailing
            .iter()
            .filter_map(|&e| lead[e].map(|v| (e, v)))
            .collect()
    }

    /// Undirected neighbours through shared EDs.
    pub fn neighbours(&self, i: usize) -> Vec<(usize, usize)> {
        let lead = self.lead_owner();
        let trail = self.trail_owner();
        let n = &self.nodes[i];
        let mut v: Vec<(usize, usize)> = n
            .trailing
            .iter()
            .filter_map(|&e| lead[e].map(|u| (e, u)))
            .chain(n.leading.iter().filter_map(|&e| trail[e].map(|u| (e, u))))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let succ: Vec<Vec<usize>> = (0..n)
            .map(|i| self.followers(i).into_iter().map(|(_, v)| v).collect())
            .collect();
        for s in &succ {
            for &v in s {
                indeg[v] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &succ[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Cyclic);
        }
        Ok(order)
    }

    /// Total faults in exRec `i` (leading + gate + trailing).
    pub fn faults(&self, i: usize) -> u32 {
        let n = &self.nodes[i];
        n.ga_faults
            + n.leading
                .iter()
                .chain(n.trailing.iter())
                .map(|&e| self.eds[e].faults)
                .sum::<u32>()
    }

    pub fn is_pre_bad(&self, i: usize) -> bool {
        self.faults(i) >= 2
    }
}

/// Classifies every exRec, working from the rear of the circuit forward.
pub fn classify(dag: &ExRecDag) -> Result<Vec<CarveLabel>> {
    dag.validate()?;
    let order = dag.topological_order()?;
    let mut labels = vec![CarveLabel::Good; dag.nodes.len()];
    for &i in order.iter().rev() {
        if !dag.is_pre_bad(i) {
            labels[i] = CarveLabel::Good;
            continue;
        }
        let follow = dag.followers(i);
        let all_good = follow.iter().all(|&(_, v)| labels[v].is_good_star());
        let all_bad = !follow.is_empty() && follow.iter().all(|&(_, v)| labels[v] == CarveLabel::Bad);
        labels[i] = if all_good {
            CarveLabel::Bad
        } else if all_bad {
            CarveLabel::GoodPrime
        } else {
            let excluded: u32 = follow
                .iter()
                .filter(|&&(_, v)| labels[v] == CarveLabel::Bad)
                .map(|&(e, _)| dag.eds[e].faults)
                .sum();
            if dag.faults(i) - excluded <= 1 {
                CarveLabel::GoodDoublePrime
            } else {
                CarveLabel::Bad
            }
        };
    }
    Ok(labels)
}

/// Decoder-encoder placement for every shared ED, as `(ed, placement)`.
pub fn placements(dag: &ExRecDag, labels: &[CarveLabel]) -> Result<Vec<(usize, Placement)>> {
    if labels.len() != dag.nodes.len() {
        return Err(Error::Labels(format!(
            "{} labels for {} exRecs",
            labels.len(),
            dag.nodes.len()
        )));
    }
    let mut out = Vec::new();
    for i in 0..dag.nodes.len() {
        for (e, v) in dag.followers(i) {
            let p = if labels[i] == CarveLabel::Bad && labels[v].is_good_star() {
                Placement::After
            } else {
                Placement::Before
            };
            out.push((e, p));
        }
    }
    out.sort_unstable_by_key(|p| p.0);
    Ok(out)
}

/// Splits the circuit into non-overlapping carved exRecs.
pub fn carve(dag: &ExRecDag, labels: &[CarveLabel]) -> Result<Vec<CarvedSegment>> {
    let place = placements(dag, labels)?;
    let lead = dag.lead_owner();
    let trail = dag.trail_owner();
    let mut owner: Vec<Option<usize>> = vec![None; dag.eds.len()];
    for (e, ed_owner) in owner.iter_mut().enumerate() {
        *ed_owner = match (trail[e], lead[e]) {
            (Some(u), Some(v)) => {
                let p = place.iter().find(|p| p.0 == e).map(|p| p.1);
                Some(if p == Some(Placement::After) { u } else { v })
            }
            (Some(u), None) => Some(u),
            (None, Some(v)) => Some(v),
            (None, None) => None,
        };
    }
    let mut segs = Vec::with_capacity(dag.nodes.len());
    for (i, node) in dag.nodes.iter().enumerate() {
        let eds: Vec<usize> = node
            .leading
            .iter()
            .chain(node.trailing.iter())
            .copied()
            .filter(|&e| owner[e] == Some(i))
            .collect();
        let faults = node.ga_faults + eds.iter().map(|&e| dag.eds[e].faults).sum::<u32>();
        let absorbed_into = (labels[i] == CarveLabel::GoodPrime)
            .then(|| {
                dag.followers(i)
                    .into_iter()
                    .map(|(_, v)| v)
                    .find(|&v| labels[v] == CarveLabel::Bad)
            })
            .flatten();
        segs.push(CarvedSegment {
            node: i,
            label: labels[i],
            eds,
            faults,
            absorbed_into,
        });
    }
    for s in &segs {
        if s.label == CarveLabel::Bad && s.faults < 2 {
            return Err(Error::Labels(format!(
                "bad exRec {} carved with {} fault(s)",
                s.node, s.faults
            )));
        }
    }
    Ok(segs)
}

/// Minimal sealed cluster containing the marked exRecs. Every ED of a marked
/// exRec is pessimistically treated as faulty, so the cluster starts as the
/// marked exRecs plus all their neighbours and grows across every ED that
/// contains a fault.
pub fn minimal_sealed_cluster(dag: &ExRecDag, marked: &[usize]) -> Result<SealedCluster> {
    dag.validate()?;
    if marked.is_empty() {
        return Err(Error::Domain("no marked exRecs".into()));
    }
    let mut inside: BTreeSet<usize> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for &m in marked {
        if m >= dag.nodes.len() {
            return Err(Error::UnknownLocation(m));
        }
        inside.insert(m);
        for (_, v) in dag.neighbours(m) {
            if inside.insert(v) {
                queue.push_back(v);
            }
        }
    }
    queue.extend(marked.iter().copied());
    while let Some(u) = queue.pop_front() {
        for (e, v) in dag.neighbours(u) {
            if dag.eds[e].faults > 0 && inside.insert(v) {
                queue.push_back(v);
            }
        }
    }
    let lead = dag.lead_owner();
    let trail = dag.trail_owner();
    let mut leading_edge = Vec::new();
    let mut trailing_edge = Vec::new();
    let mut interior_eds = Vec::new();
    for &u in &inside {
        for &e in &dag.nodes[u].leading {
            match trail[e] {
                Some(p) if inside.contains(&p) => interior_eds.push(e),
                _ => leading_edge.push(e),
            }
        }
        for &e in &dag.nodes[u].trailing {
            match lead[e] {
                Some(v) if inside.contains(&v) => {}
                _ => trailing_edge.push(e),
            }
        }
    }
    interior_eds.sort_unstable();
    interior_eds.dedup();
    leading_edge.sort_unstable();
    trailing_edge.sort_unstable();
    let sealed = leading_edge
        .iter()
        .chain(trailing_edge.iter())
        .all(|&e| dag.eds[e].faults == 0);
    Ok(SealedCluster {
        interior_locations: inside.len() * dag.ga_size + interior_eds.len() * dag.ed_size,
        nodes: inside.into_iter().collect(),
        leading_edge,
        trailing_edge,
        interior_eds,
        sealed,
    })
}

/// Number of connected node sets of size `s` containing every node of
/// `required`, by exhaustive enumeration.
pub fn count_connected_clusters(
    adjacency: &[Vec<usize>],
    required: &[usize],
    s: usize,
    cap: usize,
) -> Result<u64> {
    if s == 0 || required.is_empty() {
        return Err(Error::Domain("cluster size and root set must be nonempty".into()));
    }
    if s > cap {
        return Err(Error::ResourceCap { size: s, cap });
    }
    if adjacency.len() > 128 {
        return Err(Error::Domain("brute-force counting supports at most 128 nodes".into()));
    }
    for &r in required {
        if r >= adjacency.len() {
            return Err(Error::UnknownLocation(r));
        }
    }
    let bit = |v: usize| 1u128 << v;
    let need = required.iter().fold(0u128, |m, &r| m | bit(r));
    let mut level: HashSet<u128> = HashSet::from([bit(required[0])]);
    for _ in 1..s {
        let mut next = HashSet::new();
        for &set in &level {
            let mut rest = set;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                for &v in &adjacency[u] {
                    if set & bit(v) == 0 {
                        next.insert(set | bit(v));
                    }
                }
            }
        }
        level = next;
    }
    Ok(level.iter().filter(|&&set| set & need == need).count() as u64)
}

/// Cluster-count bound `e^{t−1} (e d)^{s−t}`.
pub fn cluster_bound(d: usize, s: usize, t: usize) -> f64 {
    let e = std::f64::consts::E;
    e.powi(t as i32 - 1) * (e * d as f64).powi(s as i32 - t as i32)
}

/// Graphviz rendering of a labelled dag.
pub fn to_dot(dag: &ExRecDag, labels: Option<&[CarveLabel]>) -> String {
    let mut s = String::from("digraph exrecs {\n  rankdir=LR;\n");
    for i in 0..dag.nodes.len() {
        let label = labels.map_or(String::new(), |l| format!(" {:?}", l[i]));
        let colour = match labels.map(|l| l[i]) {
            Some(CarveLabel::Bad) => "red",
            Some(CarveLabel::GoodPrime) | Some(CarveLabel::GoodDoublePrime) => "orange",
            _ => "black",
        };
        let _ = writeln!(
            s,
            "  n{i} [label=\"exRec {i}{label}\\nfaults={}\" color={colour}];",
            dag.faults(i)
        );
    }
    for i in 0..dag.nodes.len() {
        for (e, v) in dag.followers(i) {
            let _ = writeln!(s, "  n{i} -> n{v} [label=\"ED {e} ({})\"];", dag.eds[e].faults);
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Chain of single-qubit exRecs: exRec i has leading ED i, trailing ED i+1.
    fn chain(ed_faults: &[u32], ga_faults: &[u32]) -> ExRecDag {
        ExRecDag {
            eds: ed_faults.iter().map(|&f| EdNode { faults: f }).collect(),
            nodes: ga_faults
                .iter()
                .enumerate()
                .map(|(i, &g)| ExRecNode {
                    arity: 1,
                    leading: vec![i],
                    trailing: vec![i + 1],
                    ga_faults: g,
                    is_measurement: false,
                })
                .collect(),
            ed_size: 28,
            ga_size: 4,
        }
    }

    #[test]
    fn isolated_bad() {
        let dag = chain(&[0, 0, 0, 0], &[0, 2, 0]);
        assert_eq!(
            classify(&dag).unwrap(),
            vec![CarveLabel::Good, CarveLabel::Bad, CarveLabel::Good]
        );
    }

    #[test]
    fn overlapping_pre_bad_gives_one_bad() {
        // Faults: exRec0 leading ED, shared ED1, exRec1 trailing ED.
        let dag = chain(&[1, 1, 1], &[0, 0]);
        let labels = classify(&dag).unwrap();
        assert_eq!(labels, vec![CarveLabel::GoodPrime, CarveLabel::Bad]);
        let segs = carve(&dag, &labels).unwrap();
        assert_eq!(segs.iter().filter(|s| s.label == CarveLabel::Bad).count(), 1);
        assert_eq!(segs[0].absorbed_into, Some(1));
        assert_eq!(segs[0].eds, vec![0]);
        assert_eq!(segs[1].eds, vec![1, 2]);
    }

    #[test]
    fn rule_three_truncation() {
        // Two-qubit exRec 0 feeding exRec 1 (bad) and exRec 2 (good).
        let dag = ExRecDag {
            eds: vec![
                EdNode { faults: 0 },
                EdNode { faults: 0 },
                EdNode { faults: 2 },
                EdNode { faults: 0 },
                EdNode { faults: 1 },
                EdNode { faults: 0 },
            ],
            nodes: vec![
                ExRecNode {
                    arity: 2,
                    leading: vec![0, 1],
                    trailing: vec![2, 3],
                    ga_faults: 0,
                    is_measurement: false,
                },
                ExRecNode {
                    arity: 1,
                    leading: vec![2],
                    trailing: vec![4],
                    ga_faults: 0,
                    is_measurement: false,
                },
                ExRecNode {
                    arity: 1,
                    leading: vec![3],
                    trailing: vec![5],
                    ga_faults: 0,
                    is_measurement: false,
                },
            ],
            ed_size: 28,
            ga_size: 4,
        };
        let labels = classify(&dag).unwrap();
        assert_eq!(labels[1], CarveLabel::Bad);
        assert_eq!(labels[2], CarveLabel::Good);
        assert_eq!(labels[0], CarveLabel::GoodDoublePrime);
    }

    #[test]
    fn measurement_prebad_is_bad() {
        let dag = ExRecDag {
            eds: vec![EdNode { faults: 2 }],
            nodes: vec![ExRecNode {
                arity: 1,
                leading: vec![0],
                trailing: vec![],
                ga_faults: 0,
                is_measurement: true,
            }],
            ed_size: 28,
            ga_size: 1,
        };
        assert_eq!(classify(&dag).unwrap(), vec![CarveLabel::Bad]);
    }

    #[test]
    fn sealed_cluster_grows_across_faulty_eds() {
        let dag = chain(&[0, 0, 0, 1, 0, 0], &[0, 0, 0, 0, 0]);
        // Neighbours 0 and 2 join unconditionally; the faulty ED 3 pulls in 3.
        let c = minimal_sealed_cluster(&dag, &[1]).unwrap();
        assert_eq!(c.nodes, vec![0, 1, 2, 3]);
        assert_eq!(c.interior_eds, vec![1, 2, 3]);
        let clean = minimal_sealed_cluster(&chain(&[0; 6], &[0; 5]), &[1]).unwrap();
        assert_eq!(clean.nodes, vec![0, 1, 2]);
        let c3 = minimal_sealed_cluster(&chain(&[0, 0, 1, 1, 0, 0], &[0; 5]), &[0]).unwrap();
        assert_eq!(c3.nodes, vec![0, 1, 2, 3]);
        assert!(c3.sealed);
    }

    #[test]
    fn cycle_rejected() {
        let dag = ExRecDag {
            eds: vec![EdNode { faults: 0 }, EdNode { faults: 0 }],
            nodes: vec![
                ExRecNode {
                    arity: 1,
                    leading: vec![0],
                    trailing: vec![1],
                    ga_faults: 0,
                    is_measurement: false,
                },
                ExRecNode {
                    arity: 1,
                    leading: vec![1],
                    trailing: vec![0],
                    ga_faults: 0,
                    is_measurement: false,
                },
            ],
            ed_size: 28,
            ga_size: 4,
        };
        assert_eq!(classify(&dag), Err(Error::Cyclic));
    }
}
