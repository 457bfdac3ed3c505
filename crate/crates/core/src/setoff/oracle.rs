//! Exhaustive reference for the maximum-circulation program on tiny
//! instances. It enumerates every integral flow on the obligation pairs and
//! derives the auxiliary flows from each node's divergence, sharing no code
//! with the solver beyond the graph types.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Amount, NodeId, Obligation, ObligationGraph};

pub const MAX_EDGES: usize = 12;
pub const MAX_TOTAL_CAPACITY: Amount = 20;

/// Best values found by enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptimum {
    /// Maximum of Σ flow over all augmented edges.
    pub objective: Amount,
    /// Largest obligation-edge flow among the objective-optimal circulations.
    pub base_flow: Amount,
    /// Largest obligation-edge flow over every feasible circulation.
    pub best_base_flow: Amount,
}

/// Maximum objective of the circulation program, by enumeration.
pub fn brute_force_circulation(graph: &ObligationGraph, delta: Amount) -> Result<Amount> {
    brute_force_optimum(graph, delta).map(|o| o.objective)
}

pub fn brute_force_optimum(graph: &ObligationGraph, delta: Amount) -> Result<OracleOptimum> {
    if delta < 0 {
        return Err(Error::NegativeDelta(delta));
    }
    // Aggregate obligation pairs by hand.
    let mut pairs: BTreeMap<(&NodeId, &NodeId), Amount> = BTreeMap::new();
    for r in graph
        .records()
        .iter()
        .filter(|r: &&Obligation| r.is_obligation())
    {
        *pairs.entry((&r.debtor, &r.creditor)).or_insert(0) += r.amount;
    }
    // The fund edge can never carry more than the total net credit.
    let mut net: BTreeMap<&NodeId, Amount> = BTreeMap::new();
    for (&(d, c), &a) in &pairs {
        *net.entry(c).or_insert(0) += a;
        *net.entry(d).or_insert(0) -= a;
    }
    let delta = delta.min(net.values().filter(|&&b| b > 0).sum());
    // The constraint matrix is totally unimodular, so dividing every
    // capacity and the fund by their common divisor scales the optimum.
    let scale = pairs.values().copied().fold(delta, gcd).max(1);
    for a in pairs.values_mut() {
        *a /= scale;
    }
    let delta = delta / scale;
    let total: Amount = pairs.values().sum();
    if pairs.len() > MAX_EDGES || total > MAX_TOTAL_CAPACITY {
        return Err(Error::OracleBound(format!(
            "{} pairs, total capacity {total} (limits {MAX_EDGES}, {MAX_TOTAL_CAPACITY})",
            pairs.len()
        )));
    }

    let nodes: Vec<&NodeId> = graph.nodes().iter().collect();
    let idx = |n: &NodeId| nodes.iter().position(|m| *m == n).expect("node");
    let edges: Vec<(usize, usize, Amount)> = pairs
        .iter()
        .map(|(&(d, c), &a)| (idx(d), idx(c), a))
        .collect();

    let mut balance = vec![0; nodes.len()];
    for &(u, v, a) in &edges {
        balance[v] += a;
        balance[u] -= a;
    }
    // Divergence of a node is final once its last incident edge is set.
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for node in 0..nodes.len() {
        if let Some(last) = edges.iter().rposition(|&(u, v, _)| u == node || v == node) {
            closes[last].push(node);
        }
    }

    let mut search = Search {
        edges: &edges,
        closes: &closes,
        balance: &balance,
        delta,
        divergence: vec![0; nodes.len()],
        best: None,
        best_base: 0,
    };
    search.run(0, 0);
    let (objective, base_flow) = search.best.unwrap_or((0, 0));
    Ok(OracleOptimum {
        objective: objective * scale,
        base_flow: base_flow * scale,
        best_base_flow: search.best_base * scale,
    })
}

fn gcd(a: Amount, b: Amount) -> Amount {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct Search<'a> {
    edges: &'a [(usize, usize, Amount)],
    closes: &'a [Vec<usize>],
    balance: &'a [Amount],
    delta: Amount,
    /// out − in over the obligation edges assigned so far.
    divergence: Vec<Amount>,
    best: Option<(Amount, Amount)>,
    best_base: Amount,
}

impl Search<'_> {
    /// A node whose base outflow exceeds inflow by `d` needs `d` from `s`,
    /// which only a net debtor has, up to its debt; symmetrically for `t`.
    fn admissible(&self, node: usize) -> bool {
        let (d, b) = (self.divergence[node], self.balance[node]);
        match d.cmp(&0) {
            std::cmp::Ordering::Equal => true,
            std::cmp::Ordering::Greater => b < 0 && d <= -b,
            std::cmp::Ordering::Less => b > 0 && -d <= b,
        }
    }

    fn run(&mut self, i: usize, base: Amount) {
        if i == self.edges.len() {
            let fund: Amount = self.divergence.iter().filter(|&&d| d > 0).sum();
            if fund > self.delta {
                return;
            }
            // s→i, i→t and t→s each carry the fund flow once.
            let objective = base + 3 * fund;
            self.best_base = self.best_base.max(base);
            self.best = match self.best {
                Some((o, b)) if o > objective || (o == objective && b >= base) => Some((o, b)),
                _ => Some((objective, base)),
            };
            return;
        }
        let (u, v, cap) = self.edges[i];
        for f in 0..=cap {
            self.divergence[u] += f;
            self.divergence[v] -= f;
            if self.closes[i].iter().all(|&n| self.admissible(n)) {
                self.run(i + 1, base + f);
            }
            self.divergence[u] -= f;
            self.divergence[v] += f;
        }
    }
}
