use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{
    aggregate, balance_vector, Amount, BalanceVector, KindSet, NodeId, ObligationGraph, Oid,
};
use crate::netting::check_delta;

pub const SOURCE: &str = "s";
pub const SINK: &str = "t";

/// What an edge of the augmented network stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeRole {
    /// Aggregated obligation pair; carries the synthetic pair oid.
    Base(Oid),
    /// `s → i` for a net debtor.
    Source,
    /// `i → t` for a net creditor.
    Sink,
    /// The single `t → s` edge whose capacity is the fund.
    Fund,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub capacity: Amount,
    pub role: EdgeRole,
}

/// Obligation network extended with a source of funds `s`, a sink `t`, and
/// the fund edge `t → s`, so injecting liquidity becomes part of a single
/// circulation problem.
///
/// Edge ids are indices into [`AugmentedGraph::edges`]: base pairs first in
/// `(debtor, creditor)` order, then source edges, sink edges, and the fund
/// edge last.
#[derive(Clone, Debug)]
pub struct AugmentedGraph {
    pub base: ObligationGraph,
    pub source: NodeId,
    pub sink: NodeId,
    pub delta: Amount,
    pub balance: BalanceVector,
    pub edges: Vec<AugEdge>,
}

impl AugmentedGraph {
    pub fn fund_edge(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn base_edges(&self) -> impl Iterator<Item = (usize, &AugEdge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e.role, EdgeRole::Base(_)))
    }

    pub fn aux_edges(&self) -> impl Iterator<Item = (usize, &AugEdge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| !matches!(e.role, EdgeRole::Base(_)))
    }

    /// Every node of `V ∪ {s, t}` in canonical order.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = self.base.nodes().iter().cloned().collect();
        v.push(self.source.clone());
        v.push(self.sink.clone());
        v
    }
}

/// Builds the δ-augmented network over the aggregated obligation records.
///
/// Nodes with zero net position get no auxiliary edge.
pub fn augment(graph: &ObligationGraph, delta: Amount) -> Result<AugmentedGraph> {
    check_delta(delta)?;
    let (source, sink) = (NodeId::from(SOURCE), NodeId::from(SINK));
    for reserved in [&source, &sink] {
        if graph.nodes().contains(reserved) {
            return Err(Error::ReservedNode(reserved.clone()));
        }
    }
    let base = aggregate(&graph.filter_kinds(KindSet::OBLIGATIONS));
    let balance = balance_vector(&base, KindSet::OBLIGATIONS);

    let mut pairs: BTreeMap<(&NodeId, &NodeId), (&Oid, Amount)> = BTreeMap::new();
    for r in base.records() {
        pairs.insert((&r.debtor, &r.creditor), (&r.oid, r.amount));
    }
    let mut edges: Vec<AugEdge> = pairs
        .into_iter()
        .map(|((d, c), (oid, amount))| AugEdge {
            from: d.clone(),
            to: c.clone(),
            capacity: amount,
            role: EdgeRole::Base(oid.clone()),
        })
        .collect();
    for (node, b) in balance.iter().filter(|(_, b)| *b < 0) {
        edges.push(AugEdge {
            from: source.clone(),
            to: node.clone(),
            capacity: -b,
            role: EdgeRole::Source,
        });
    }
    for (node, b) in balance.iter().filter(|(_, b)| *b > 0) {
        edges.push(AugEdge {
            from: node.clone(),
            to: sink.clone(),
            capacity: b,
            role: EdgeRole::Sink,
        });
    }
    edges.push(AugEdge {
        from: sink.clone(),
        to: source.clone(),
        capacity: delta,
        role: EdgeRole::Fund,
    });

    Ok(AugmentedGraph {
        base,
        source,
        sink,
        delta,
        balance,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Obligation;
    use crate::scenarios;

    fn aux(aug: &AugmentedGraph) -> Vec<(String, String, Amount)> {
        aug.aux_edges()
            .map(|(_, e)| (e.from.to_string(), e.to.to_string(), e.capacity))
            .collect()
    }

    fn t(a: &str, b: &str, c: Amount) -> (String, String, Amount) {
        (a.into(), b.into(), c)
    }

    #[test]
    fn balanced_cycle_has_only_fund_edge() {
        let aug = augment(&scenarios::balanced_triangle(100), 7).unwrap();
        assert_eq!(aux(&aug), vec![t("t", "s", 7)]);
    }

    #[test]
    fn five_node_aux_edges() {
        let aug = augment(&scenarios::five_node(), 2).unwrap();
        assert_eq!(
            aux(&aug),
            vec![
                t("s", "v3", 2),
                t("s", "v4", 1),
                t("v1", "t", 1),
                t("v2", "t", 2),
                t("t", "s", 2)
            ]
        );
        assert_eq!(aug.base_edges().count(), 10);
    }

    #[test]
    fn single_edge() {
        let g = ObligationGraph::new(vec![Obligation::new("o1", "A", "B", 100)]);
        let aug = augment(&g, 100).unwrap();
        assert_eq!(
            aux(&aug),
            vec![t("s", "A", 100), t("B", "t", 100), t("t", "s", 100)]
        );
    }

    #[test]
    fn reserved_names_rejected() {
        let g = ObligationGraph::new(vec![Obligation::new("o1", "s", "B", 100)]);
        assert!(matches!(augment(&g, 0), Err(Error::ReservedNode(_))));
    }

    #[test]
    fn negative_delta_rejected() {
        assert!(matches!(
            augment(&scenarios::five_node(), -3),
            Err(Error::NegativeDelta(-3))
        ));
    }

    #[test]
    fn acceptances_are_not_capacity() {
        let aug = augment(&scenarios::assignment_triad(100), 0).unwrap();
        assert_eq!(aug.base_edges().count(), 2);
    }
}
