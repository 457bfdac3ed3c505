//! Strategies and invariant checks shared by the property suite and the
//! acceptance target.
#![allow(dead_code)]

use std::collections::BTreeMap;

use cycleclear::graph::{balance_vector, Amount, KindSet, Obligation, ObligationGraph};
use cycleclear::netting::net_residual;
use cycleclear::setoff::oracle::brute_force_optimum;
use cycleclear::setoff::{
    augment, max_circulation_with, setoff_clear, setoff_clear_with, Algorithm,
};
use cycleclear::settlement::{execute_cycle, find_cycles, SettlementCycle};
use proptest::prelude::*;

pub const MAX_NODES: usize = 6;
pub const MAX_CAPACITY: Amount = 3;

/// Small graphs with at most six nodes, unit-to-three amounts and a mix of
/// kinds, kept inside the oracle's enumeration bound.
pub fn small_graph() -> impl Strategy<Value = ObligationGraph> {
    let record = (
        0..MAX_NODES,
        1..MAX_NODES,
        1..=MAX_CAPACITY,
        prop::bool::weighted(0.2),
    );
    prop::collection::vec(record, 0..=8)
        .prop_map(|raw| {
            let records = raw
                .into_iter()
                .enumerate()
                .map(|(i, (d, shift, amount, acceptance))| {
                    let (d, c) = (format!("n{d}"), format!("n{}", (d + shift) % MAX_NODES));
                    let oid = format!("r{i}");
                    if acceptance {
                        Obligation::acceptance(&oid, &d, &c, amount)
                    } else {
                        Obligation::new(&oid, &d, &c, amount)
                    }
                })
                .collect();
            ObligationGraph::new(records)
        })
        .prop_filter("oracle bound", |g| g.total(KindSet::OBLIGATIONS) <= 20)
}

pub fn graph_and_delta() -> impl Strategy<Value = (ObligationGraph, Amount)> {
    (small_graph(), 0..=8 as Amount)
}

/// Invariants (a) to (g). Returns the first failure as a message.
pub fn check_all(g: &ObligationGraph, delta: Amount) -> Result<(), String> {
    solver_matches_oracle(g, delta)?;
    dominance_and_monotonicity(g, delta)?;
    zero_iff_threshold(g, delta)?;
    circulation_is_exact(g, delta)?;
    balance_sums_to_zero(g)?;
    execution_preserves_balance(g, delta)?;
    Ok(())
}

/// (a) Both solver routes reach the enumerated optimum.
pub fn solver_matches_oracle(g: &ObligationGraph, delta: Amount) -> Result<(), String> {
    let oracle = brute_force_optimum(g, delta).map_err(|e| e.to_string())?;
    for alg in [
        Algorithm::SuccessiveShortestPaths,
        Algorithm::CycleCanceling,
    ] {
        let r = setoff_clear_with(g, delta, alg).map_err(|e| e.to_string())?;
        if r.objective != oracle.objective {
            return Err(format!(
                "{alg:?} objective {} != oracle {}",
                r.objective, oracle.objective
            ));
        }
        if r.discharged_total != oracle.best_base_flow {
            return Err(format!(
                "{alg:?} discharged {} != oracle {}",
                r.discharged_total, oracle.best_base_flow
            ));
        }
    }
    Ok(())
}

/// (b) `S(δ) ≥ N(δ)` and (c) `S(δ + 1) ≤ S(δ)`.
pub fn dominance_and_monotonicity(g: &ObligationGraph, delta: Amount) -> Result<(), String> {
    let s = setoff_clear(g, delta).unwrap().residual_total;
    let n = net_residual(g, delta).unwrap();
    if s < n {
        return Err(format!("S({delta}) = {s} < N({delta}) = {n}"));
    }
    let next = setoff_clear(g, delta + 1).unwrap().residual_total;
    if next > s {
        return Err(format!(
            "S increased from {s} to {next} at δ = {}",
            delta + 1
        ));
    }
    Ok(())
}

/// (d) Setoff clears everything exactly when the fund covers `‖b⁺‖`.
pub fn zero_iff_threshold(g: &ObligationGraph, delta: Amount) -> Result<(), String> {
    let norm = balance_vector(g, KindSet::OBLIGATIONS).positive_part_norm();
    let s = setoff_clear(g, delta).unwrap().residual_total;
    if (s == 0) != (delta >= norm) {
        return Err(format!("S({delta}) = {s} with ‖b⁺‖ = {norm}"));
    }
    Ok(())
}

/// (e) Capacity bounds and conservation, recomputed here edge by edge.
pub fn circulation_is_exact(g: &ObligationGraph, delta: Amount) -> Result<(), String> {
    let aug = augment(g, delta).map_err(|e| e.to_string())?;
    for alg in [
        Algorithm::SuccessiveShortestPaths,
        Algorithm::CycleCanceling,
    ] {
        let c = max_circulation_with(&aug, alg);
        let mut net: BTreeMap<&str, Amount> = BTreeMap::new();
        for (e, &f) in aug.edges.iter().zip(&c.flow) {
            if f < 0 || f > e.capacity {
                return Err(format!(
                    "{alg:?}: flow {f} outside [0, {}] on {}→{}",
                    e.capacity, e.from, e.to
                ));
            }
            *net.entry(e.from.as_str()).or_default() -= f;
            *net.entry(e.to.as_str()).or_default() += f;
        }
        if let Some((node, v)) = net.iter().find(|(_, &v)| v != 0) {
            return Err(format!("{alg:?}: conservation off by {v} at {node}"));
        }
    }
    Ok(())
}

/// (f) Net positions sum to zero for every kind selection.
pub fn balance_sums_to_zero(g: &ObligationGraph) -> Result<(), String> {
    for kinds in [KindSet::OBLIGATIONS, KindSet::ACCEPTANCES, KindSet::ALL] {
        let sum = balance_vector(g, kinds).sum();
        if sum != 0 {
            return Err(format!("balance sums to {sum} for {kinds:?}"));
        }
    }
    Ok(())
}

/// (g) Executing a cycle keeps every obligation net position, and a failing
/// execution leaves nothing changed.
pub fn execution_preserves_balance(g: &ObligationGraph, amount_hint: Amount) -> Result<(), String> {
    let before = balance_vector(g, KindSet::OBLIGATIONS);
    for cycle in find_cycles(g, MAX_NODES).map_err(|e| e.to_string())? {
        let legs: Vec<_> = cycle
            .legs
            .iter()
            .map(|o| g.get(o).unwrap().amount)
            .collect();
        let cap = *legs.iter().min().unwrap();
        let amount = 1 + amount_hint % (cap + 1);
        let trial = SettlementCycle { amount, ..cycle };
        let snapshot = g.clone();
        match execute_cycle(g, &trial) {
            Ok(after) => {
                if amount > cap {
                    return Err(format!("over-capacity cycle {:?} executed", trial.legs));
                }
                if balance_vector(&after, KindSet::OBLIGATIONS) != before {
                    return Err(format!("cycle {:?} moved net positions", trial.legs));
                }
            }
            Err(_) if amount > cap => {
                if *g != snapshot {
                    return Err("failed execution mutated the graph".into());
                }
            }
            Err(e) => return Err(format!("cycle {:?} at {amount} failed: {e}", trial.legs)),
        }
    }
    Ok(())
}
