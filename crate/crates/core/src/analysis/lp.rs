//! Liquidity-provider analytics: the rounded-amount proxy, the two-sided firm
//! criterion, scale-free path-length scaling and the exit counterfactual.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Amount, KindSet, NodeId, ObligationGraph, Oid};
use crate::setoff::setoff_clear;

/// 10,000.00 in minor units.
pub const DEFAULT_LP_MODULUS: Amount = 1_000_000;

/// `ln n / ln ln n`, the mean chain length of a scale-free network.
pub fn path_length(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "path length needs n >= 3, got {n}"
        )));
    }
    let ln = (n as f64).ln();
    Ok(ln / ln.ln())
}

/// LP share scaled by the path length. Not a fraction in the strict sense:
/// shares above `1/ℓ` give values above one.
pub fn adjusted_lp_contribution(lp_share: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&lp_share) {
        return Err(Error::InvalidParameter(format!(
            "LP share {lp_share} outside [0, 1]"
        )));
    }
    Ok(lp_share * path_length(n)?)
}

/// Obligation records whose amount is a multiple of `modulus`.
pub fn identify_lp_obligations(graph: &ObligationGraph, modulus: Amount) -> Result<BTreeSet<Oid>> {
    if modulus <= 0 {
        return Err(Error::InvalidParameter(format!(
            "modulus must be positive, got {modulus}"
        )));
    }
    Ok(graph
        .records()
        .iter()
        .filter(|r| r.is_obligation() && r.amount % modulus == 0)
        .map(|r| r.oid.clone())
        .collect())
}

/// Firms that owe at least one of `lp_obligations` and are owed another.
pub fn identify_lp_firms(
    graph: &ObligationGraph,
    lp_obligations: &BTreeSet<Oid>,
) -> Result<BTreeSet<NodeId>> {
    let mut debtors = BTreeSet::new();
    let mut creditors = BTreeSet::new();
    for oid in lp_obligations {
        let r = graph
            .get(oid)
            .ok_or_else(|| Error::UnknownRecord(oid.clone()))?;
        debtors.insert(&r.debtor);
        creditors.insert(&r.creditor);
    }
    Ok(debtors
        .intersection(&creditors)
        .map(|&n| n.clone())
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpReport {
    pub modulus: Amount,
    pub lp_obligation_ids: BTreeSet<Oid>,
    pub lp_firm_ids: BTreeSet<NodeId>,
    /// Value of proxy obligations over total obligation value.
    pub lp_liquidity_share: f64,
    pub path_length: f64,
    pub adjusted_contribution: f64,
}

/// Full proxy report. Path length uses the node count of the graph.
pub fn lp_report(graph: &ObligationGraph, modulus: Amount) -> Result<LpReport> {
    let lp_obligation_ids = identify_lp_obligations(graph, modulus)?;
    let lp_firm_ids = identify_lp_firms(graph, &lp_obligation_ids)?;
    let total = graph.total(KindSet::OBLIGATIONS);
    let lp_value: Amount = lp_obligation_ids
        .iter()
        .filter_map(|o| graph.get(o))
        .map(|r| r.amount)
        .sum();
    let lp_liquidity_share = ratio(lp_value, total);
    let path_length = path_length(graph.nodes().len())?;
    Ok(LpReport {
        modulus,
        lp_obligation_ids,
        lp_firm_ids,
        lp_liquidity_share,
        path_length,
        adjusted_contribution: lp_liquidity_share * path_length,
    })
}

/// Clearing with and without a set of firms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExitCounterfactual {
    pub cleared_before: Amount,
    pub cleared_after: Amount,
    pub drop_fraction: f64,
    pub debt_share_removed: f64,
}

/// Removes every record touching one of `firms` and clears again at the
/// same fund size.
pub fn lp_exit(
    graph: &ObligationGraph,
    firms: &BTreeSet<NodeId>,
    delta: Amount,
) -> Result<ExitCounterfactual> {
    let before = setoff_clear(graph, delta)?.discharged_total;
    let reduced = graph.retain(|r| !firms.contains(&r.debtor) && !firms.contains(&r.creditor));
    let after = setoff_clear(&reduced, delta)?.discharged_total;
    let total = graph.total(KindSet::OBLIGATIONS);
    let removed = total - reduced.total(KindSet::OBLIGATIONS);
    Ok(ExitCounterfactual {
        cleared_before: before,
        cleared_after: after,
        drop_fraction: if before == 0 {
            0.0
        } else {
            1.0 - after as f64 / before as f64
        },
        debt_share_removed: ratio(removed, total),
    })
}

fn ratio(part: Amount, whole: Amount) -> f64 {
    if whole == 0 {
        0.0
    } else {
        part as f64 / whole as f64
    }
}
