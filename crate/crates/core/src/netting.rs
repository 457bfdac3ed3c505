//! CCP netting: the global netting requirement `N = ‖b⁺‖`, its residual after
//! a default fund, and silo-by-silo netting over a partition of the records
//! into netting sets.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    balance_vector, Amount, Kind, KindSet, NodeId, Obligation, ObligationGraph, Oid,
};

/// Outcome of novating obligations to CCPs and netting them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NettingOutcome {
    /// Member-side payments required after netting (`N` for a single set).
    pub required_total: Amount,
    /// Total value of CCP-facing positions, both pay and receive legs.
    pub gross_total: Amount,
    pub post_novation_graph: ObligationGraph,
    pub fund_used: Amount,
    pub sets: Vec<SetOutcome>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetOutcome {
    pub set: String,
    pub ccp: NodeId,
    pub required: Amount,
    pub gross: Amount,
}

impl NettingOutcome {
    /// Draws on a default fund of `delta` against the summed requirement.
    pub fn with_fund(mut self, delta: Amount) -> Result<Self> {
        check_delta(delta)?;
        self.fund_used = delta.min(self.required_total);
        Ok(self)
    }

    /// Requirement left after the fund.
    pub fn residual(&self) -> Amount {
        self.required_total - self.fund_used
    }
}

pub(crate) fn check_delta(delta: Amount) -> Result<()> {
    if delta < 0 {
        return Err(Error::NegativeDelta(delta));
    }
    Ok(())
}

/// Maps record tags to netting sets, and netting sets to their CCP node.
///
/// A set without an explicit CCP uses the in-graph node whose id equals the
/// set id when there is one, and a synthetic `CCP:<set-id>` node otherwise.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NettingSetPartition {
    assignment: BTreeMap<String, String>,
    ccps: BTreeMap<String, NodeId>,
}

impl NettingSetPartition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assign(mut self, tag: impl Into<String>, set: impl Into<String>) -> Self {
        self.assignment.insert(tag.into(), set.into());
        self
    }

    pub fn with_ccp(mut self, set: impl Into<String>, ccp: impl Into<NodeId>) -> Self {
        self.ccps.insert(set.into(), ccp.into());
        self
    }

    /// Parses `tag=set,tag=set,...`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Self::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (tag, set) = item.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("partition entry {item:?} is not tag=set"))
            })?;
            let (tag, set) = (tag.trim(), set.trim());
            if tag.is_empty() || set.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "partition entry {item:?} has an empty side"
                )));
            }
            p = p.assign(tag, set);
        }
        Ok(p)
    }

    pub fn set_of(&self, record: &Obligation) -> Option<&str> {
        record
            .tag
            .as_deref()
            .and_then(|t| self.assignment.get(t))
            .map(String::as_str)
    }

    pub fn ccp_for(&self, set: &str, graph: &ObligationGraph) -> NodeId {
        if let Some(c) = self.ccps.get(set) {
            return c.clone();
        }
        let named = NodeId::from(set);
        if graph.nodes().contains(&named) {
            named
        } else {
            NodeId::new(format!("CCP:{set}"))
        }
    }
}

/// Novates every obligation to one CCP and nets: `N = ‖b⁺‖`.
pub fn net_global(graph: &ObligationGraph) -> NettingOutcome {
    let ccp = synthetic_global_ccp(graph);
    let members: Vec<&Obligation> = graph
        .records()
        .iter()
        .filter(|r| r.is_obligation())
        .collect();
    let set = net_one_set("global", &ccp, &members);
    let required_total = balance_vector(graph, KindSet::OBLIGATIONS).positive_part_norm();
    debug_assert_eq!(required_total, set.0.required);
    finish(vec![set])
}

fn synthetic_global_ccp(graph: &ObligationGraph) -> NodeId {
    let mut name = String::from("CCP");
    while graph.nodes().contains(&NodeId::new(name.as_str())) {
        name.push('\'');
    }
    NodeId::new(name)
}

/// `max(0, N − delta)`.
pub fn net_residual(graph: &ObligationGraph, delta: Amount) -> Result<Amount> {
    check_delta(delta)?;
    Ok((balance_vector(graph, KindSet::OBLIGATIONS).positive_part_norm() - delta).max(0))
}

/// Nets each netting set separately against its own CCP.
///
/// Offsets only occur inside a set, so a cycle whose legs alternate between
/// sets survives as gross CCP-facing positions.
pub fn net_partitioned(
    graph: &ObligationGraph,
    partition: &NettingSetPartition,
) -> Result<NettingOutcome> {
    let mut by_set: BTreeMap<&str, Vec<&Obligation>> = BTreeMap::new();
    for r in graph.records().iter().filter(|r| r.is_obligation()) {
        let set = partition
            .set_of(r)
            .ok_or_else(|| Error::UnmappedRecord(r.oid.clone()))?;
        by_set.entry(set).or_default().push(r);
    }
    let sets = by_set
        .into_iter()
        .map(|(set, records)| {
            let ccp = partition.ccp_for(set, graph);
            net_one_set(set, &ccp, &records)
        })
        .collect();
    Ok(finish(sets))
}

fn net_one_set(set: &str, ccp: &NodeId, records: &[&Obligation]) -> (SetOutcome, Vec<Obligation>) {
    let mut net: BTreeMap<&NodeId, Amount> = BTreeMap::new();
    for r in records {
        *net.entry(&r.creditor).or_insert(0) += r.amount;
        *net.entry(&r.debtor).or_insert(0) -= r.amount;
    }
    let mut legs = Vec::new();
    let (mut required, mut gross) = (0, 0);
    for (&member, &b) in net.iter().filter(|(m, _)| **m != ccp) {
        if b == 0 {
            continue;
        }
        let (debtor, creditor) = if b < 0 { (member, ccp) } else { (ccp, member) };
        if b < 0 {
            required += -b;
        }
        gross += b.abs();
        legs.push(Obligation {
            oid: Oid::new(format!("nov:{set}:{member}")),
            debtor: debtor.clone(),
            creditor: creditor.clone(),
            amount: b.abs(),
            kind: Kind::Obligation,
            tag: Some(set.to_owned()),
            attested: true,
        });
    }
    (
        SetOutcome {
            set: set.to_owned(),
            ccp: ccp.clone(),
            required,
            gross,
        },
        legs,
    )
}

fn finish(sets: Vec<(SetOutcome, Vec<Obligation>)>) -> NettingOutcome {
    let required_total = sets.iter().map(|(s, _)| s.required).sum();
    let gross_total = sets.iter().map(|(s, _)| s.gross).sum();
    let (sets, legs): (Vec<_>, Vec<_>) = sets.into_iter().unzip();
    NettingOutcome {
        required_total,
        gross_total,
        post_novation_graph: ObligationGraph::new(legs.into_iter().flatten().collect()),
        fund_used: 0,
        sets,
    }
}
