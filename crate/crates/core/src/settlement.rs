//! Settlement cycles over obligations and acceptances.
//!
//! A settlement cycle is a closed directed walk of records executed
//! atomically. Obligation legs are discharged by the cycle amount; acceptance
//! legs are consumed and turn into obligations of the same amount in the
//! reversed direction. The four ways to settle a claim `v1 → v2` through a
//! medium `S` are the four kind combinations of the legs `v2 → S`, `S → v1`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Amount, Kind, NodeId, Obligation, ObligationGraph, Oid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SettlementKind {
    Assignment,
    Setoff,
    Issuance,
    Novation,
}

impl SettlementKind {
    /// Mechanism selected by the kinds of the `S → v1` and `v2 → S` legs.
    pub fn from_legs(s_to_v1: Kind, v2_to_s: Kind) -> Self {
        match (s_to_v1, v2_to_s) {
            (Kind::Obligation, Kind::Acceptance) => SettlementKind::Assignment,
            (Kind::Obligation, Kind::Obligation) => SettlementKind::Setoff,
            (Kind::Acceptance, Kind::Acceptance) => SettlementKind::Issuance,
            (Kind::Acceptance, Kind::Obligation) => SettlementKind::Novation,
        }
    }
}

/// Classification of a settlement cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CycleClass {
    Mechanism(SettlementKind),
    /// Anything but the 3-node pattern.
    Composite,
}

/// Records traversed in order, and the uniform amount pushed around.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SettlementCycle {
    pub legs: Vec<Oid>,
    pub amount: Amount,
}

impl SettlementCycle {
    pub fn new(legs: impl IntoIterator<Item = impl Into<Oid>>, amount: Amount) -> Self {
        SettlementCycle {
            legs: legs.into_iter().map(Into::into).collect(),
            amount,
        }
    }

    /// Node sequence of the walk, starting at the first leg's debtor.
    pub fn nodes(&self, graph: &ObligationGraph) -> Result<Vec<NodeId>> {
        Ok(resolve(graph, self)?
            .iter()
            .map(|r| r.debtor.clone())
            .collect())
    }
}

fn resolve<'g>(graph: &'g ObligationGraph, cycle: &SettlementCycle) -> Result<Vec<&'g Obligation>> {
    if cycle.legs.is_empty() {
        return Err(Error::InvalidCycle("no legs".into()));
    }
    let mut seen = BTreeSet::new();
    let legs = cycle
        .legs
        .iter()
        .map(|oid| {
            if !seen.insert(oid) {
                return Err(Error::InvalidCycle(format!("record {oid} used twice")));
            }
            graph
                .get(oid)
                .ok_or_else(|| Error::UnknownRecord(oid.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, leg) in legs.iter().enumerate() {
        let next = legs[(i + 1) % legs.len()];
        if leg.creditor != next.debtor {
            return Err(Error::InvalidCycle(format!(
                "{} ends at {} but {} starts at {}",
                leg.oid, leg.creditor, next.oid, next.debtor
            )));
        }
    }
    Ok(legs)
}

/// Classifies a cycle whose first leg is the claim being discharged.
pub fn classify_cycle(graph: &ObligationGraph, cycle: &SettlementCycle) -> Result<CycleClass> {
    let legs = resolve(graph, cycle)?;
    if !legs[0].is_obligation() {
        return Err(Error::NotAnObligation(legs[0].oid.clone()));
    }
    if legs.len() != 3 {
        return Ok(CycleClass::Composite);
    }
    let (v2_to_s, s_to_v1) = (legs[1].kind, legs[2].kind);
    Ok(CycleClass::Mechanism(SettlementKind::from_legs(
        s_to_v1, v2_to_s,
    )))
}

/// Executes a cycle atomically and returns the new graph.
///
/// On any error the input graph is untouched (it is never mutated; the
/// result is a new value).
pub fn execute_cycle(graph: &ObligationGraph, cycle: &SettlementCycle) -> Result<ObligationGraph> {
    let legs = resolve(graph, cycle)?;
    if cycle.amount <= 0 {
        return Err(Error::InvalidCycle(format!(
            "amount {} is not positive",
            cycle.amount
        )));
    }
    if let Some(leg) = legs.iter().find(|l| l.amount < cycle.amount) {
        return Err(Error::CapacityViolation {
            oid: leg.oid.clone(),
            amount: cycle.amount,
            remaining: leg.amount,
        });
    }

    let on_path: BTreeSet<&Oid> = cycle.legs.iter().collect();
    let mut taken: BTreeSet<Oid> = graph.records().iter().map(|r| r.oid.clone()).collect();
    let mut records = Vec::with_capacity(graph.len() + legs.len());
    for r in graph.records() {
        if !on_path.contains(&r.oid) {
            records.push(r.clone());
            continue;
        }
        if r.amount > cycle.amount {
            records.push(Obligation {
                amount: r.amount - cycle.amount,
                ..r.clone()
            });
        }
        if r.kind == Kind::Acceptance {
            let oid = fresh_oid(&r.oid, &mut taken);
            records.push(Obligation {
                oid,
                debtor: r.creditor.clone(),
                creditor: r.debtor.clone(),
                amount: cycle.amount,
                kind: Kind::Obligation,
                tag: r.tag.clone(),
                attested: true,
            });
        }
    }
    Ok(ObligationGraph::with_nodes(
        graph.nodes().iter().cloned(),
        records,
    ))
}

fn fresh_oid(base: &Oid, taken: &mut BTreeSet<Oid>) -> Oid {
    let mut candidate = Oid::new(format!("{base}:x"));
    let mut n = 2;
    while taken.contains(&candidate) {
        candidate = Oid::new(format!("{base}:x{n}"));
        n += 1;
    }
    taken.insert(candidate.clone());
    candidate
}

/// Enumerates simple directed cycles of at most `max_len` legs.
///
/// Each cycle starts at its smallest node and cycles come out in
/// lexicographic order of node sequence. Between two nodes the leg is the
/// lowest-oid record for that ordered pair. Cycles made only of acceptances
/// discharge nothing and are skipped.
pub fn find_cycles(graph: &ObligationGraph, max_len: usize) -> Result<Vec<SettlementCycle>> {
    if max_len < 2 {
        return Err(Error::InvalidParameter(format!(
            "max_len must be at least 2, got {max_len}"
        )));
    }
    let mut hop: BTreeMap<(&NodeId, &NodeId), &Obligation> = BTreeMap::new();
    for r in graph.records() {
        hop.entry((&r.debtor, &r.creditor)).or_insert(r);
    }
    let nodes: Vec<&NodeId> = graph.nodes().iter().collect();
    let index: BTreeMap<&NodeId, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    let mut legs: BTreeMap<(usize, usize), &Obligation> = BTreeMap::new();
    for (&(d, c), &r) in &hop {
        let (u, v) = (index[d], index[c]);
        out[u].push(v);
        legs.insert((u, v), r);
    }
    for adj in &mut out {
        adj.sort_unstable();
    }

    let mut cycles = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; nodes.len()];
    for start in 0..nodes.len() {
        path.push(start);
        on_path[start] = true;
        extend(
            start,
            &out,
            max_len,
            &mut path,
            &mut on_path,
            &mut |p: &[usize]| {
                let recs: Vec<&Obligation> = (0..p.len())
                    .map(|i| legs[&(p[i], p[(i + 1) % p.len()])])
                    .collect();
                if recs.iter().any(|r| r.is_obligation()) {
                    let amount = recs.iter().map(|r| r.amount).min().unwrap_or(0);
                    cycles.push(SettlementCycle {
                        legs: recs.iter().map(|r| r.oid.clone()).collect(),
                        amount,
                    });
                }
            },
        );
        on_path[start] = false;
        path.pop();
    }
    Ok(cycles)
}

fn extend(
    start: usize,
    out: &[Vec<usize>],
    max_len: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    emit: &mut dyn FnMut(&[usize]),
) {
    let u = *path.last().expect("non-empty path");
    for &v in &out[u] {
        if v == start {
            emit(path);
        } else if v > start && !on_path[v] && path.len() < max_len {
            path.push(v);
            on_path[v] = true;
            extend(start, out, max_len, path, on_path, emit);
            on_path[v] = false;
            path.pop();
        }
    }
}

/// One executed step of [`settle_to_fixpoint`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExecutedCycle {
    pub nodes: Vec<NodeId>,
    pub legs: Vec<Oid>,
    pub amount: Amount,
    pub class: Option<CycleClass>,
}

/// Repeatedly executes the first cycle found until none is left.
///
/// Every step either consumes acceptance value or discharges obligation
/// value and never creates acceptances, so the loop terminates.
pub fn settle_to_fixpoint(
    graph: &ObligationGraph,
    max_len: usize,
) -> Result<(ObligationGraph, Vec<ExecutedCycle>)> {
    let mut current = graph.clone();
    let mut log = Vec::new();
    while let Some(cycle) = find_cycles(&current, max_len)?.into_iter().next() {
        let nodes = cycle.nodes(&current)?;
        let class = classify_cycle(&current, &cycle).ok();
        let next = execute_cycle(&current, &cycle)?;
        log.push(ExecutedCycle {
            nodes,
            legs: cycle.legs,
            amount: cycle.amount,
            class,
        });
        current = next;
    }
    Ok((current, log))
}
