//! Multilateral setoff: discharge obligations by a maximum circulation on the
//! δ-augmented network and report what is left.
//!
//! Setoff is conservative: it never creates a new counterparty relation, it
//! only reduces existing records. The residual graph keeps the original oids.

mod augment;
pub mod oracle;
mod solver;

use std::collections::BTreeMap;

pub use augment::{augment, AugEdge, AugmentedGraph, EdgeRole, SINK, SOURCE};
pub use solver::{max_circulation, max_circulation_with, Algorithm, Circulation};

use crate::error::Result;
use crate::graph::{balance_vector, Amount, KindSet, NodeId, Obligation, ObligationGraph, Oid};

/// Outcome of one setoff run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClearingResult {
    pub delta: Amount,
    /// Σ flow over obligation pairs.
    pub discharged_total: Amount,
    /// `S(δ)`: Σ undischarged obligation value.
    pub residual_total: Amount,
    /// Obligation records with their undischarged remainder; fully
    /// discharged records are dropped.
    pub residual_graph: ObligationGraph,
    /// Flow drawn through the fund edge.
    pub fund_used: Amount,
    /// Discharged amount per obligation record, every record listed.
    pub allocation: BTreeMap<Oid, Amount>,
    /// Objective value of the circulation (all augmented edges).
    pub objective: Amount,
}

/// Runs setoff with the default solver.
pub fn setoff_clear(graph: &ObligationGraph, delta: Amount) -> Result<ClearingResult> {
    setoff_clear_with(graph, delta, Algorithm::default())
}

pub fn setoff_clear_with(
    graph: &ObligationGraph,
    delta: Amount,
    algorithm: Algorithm,
) -> Result<ClearingResult> {
    let aug = augment(graph, delta)?;
    let circulation = max_circulation_with(&aug, algorithm);

    let mut pair_flow: BTreeMap<(&NodeId, &NodeId), Amount> = BTreeMap::new();
    for (i, e) in aug.base_edges() {
        pair_flow.insert((&e.from, &e.to), circulation.flow[i]);
    }

    // Records are in ascending oid order, so this is FIFO per pair.
    let mut allocation = BTreeMap::new();
    let mut residual = Vec::new();
    for r in graph.records().iter().filter(|r| r.is_obligation()) {
        let left = pair_flow
            .get_mut(&(&r.debtor, &r.creditor))
            .expect("pair in augmented graph");
        let take = (*left).min(r.amount);
        *left -= take;
        allocation.insert(r.oid.clone(), take);
        if take < r.amount {
            residual.push(Obligation {
                amount: r.amount - take,
                ..r.clone()
            });
        }
    }

    let discharged_total = circulation.base_total(&aug);
    let residual_graph = ObligationGraph::with_nodes(graph.nodes().iter().cloned(), residual);
    Ok(ClearingResult {
        delta,
        discharged_total,
        residual_total: residual_graph.total(KindSet::OBLIGATIONS),
        residual_graph,
        fund_used: circulation.fund_used(&aug),
        allocation,
        objective: circulation.objective(),
    })
}

/// Smallest fund that clears everything: `‖b⁺‖`.
pub fn full_clear_threshold(graph: &ObligationGraph) -> Amount {
    balance_vector(graph, KindSet::OBLIGATIONS).positive_part_norm()
}
