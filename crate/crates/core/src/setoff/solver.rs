//! Maximum circulation on the augmented network, posed as a minimum-cost
//! circulation with cost −1 per unit of flow on every edge.
//!
//! Two exact integral solvers share one residual network:
//!
//! * [`Algorithm::SuccessiveShortestPaths`] starts from the pseudo-flow that
//!   saturates every edge (all base nodes are then balanced, the only excess
//!   sits on `t`) and returns the excess to `s` along cheapest residual paths,
//!   batching equal-length paths with a blocking-flow pass. Residual costs are
//!   non-negative from the start, so potentials stay valid throughout.
//! * [`Algorithm::CycleCanceling`] starts from zero flow and cancels negative
//!   residual cycles found by Bellman-Ford until none is left.
//!
//! Both scan arcs in edge-id order, so repeated runs return identical flows.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::augment::{AugmentedGraph, EdgeRole};
use crate::graph::{Amount, NodeId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Algorithm {
    #[default]
    SuccessiveShortestPaths,
    CycleCanceling,
}

/// Flow per augmented edge, indexed by edge id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circulation {
    pub flow: Vec<Amount>,
}

impl Circulation {
    /// Σ flow over every edge of the augmented network.
    pub fn objective(&self) -> Amount {
        self.flow.iter().sum()
    }

    /// Σ flow over the obligation edges only.
    pub fn base_total(&self, aug: &AugmentedGraph) -> Amount {
        aug.base_edges().map(|(i, _)| self.flow[i]).sum()
    }

    /// Flow on the `t → s` edge.
    pub fn fund_used(&self, aug: &AugmentedGraph) -> Amount {
        self.flow[aug.fund_edge()]
    }

    /// Checks capacity bounds on every edge and conservation at every node.
    pub fn check_feasible(&self, aug: &AugmentedGraph) -> Result<(), String> {
        if self.flow.len() != aug.edges.len() {
            return Err(format!(
                "{} flows for {} edges",
                self.flow.len(),
                aug.edges.len()
            ));
        }
        let mut net: std::collections::BTreeMap<&NodeId, Amount> =
            std::collections::BTreeMap::new();
        for (e, &f) in aug.edges.iter().zip(&self.flow) {
            if f < 0 || f > e.capacity {
                return Err(format!(
                    "flow {f} outside [0, {}] on {}→{}",
                    e.capacity, e.from, e.to
                ));
            }
            *net.entry(&e.from).or_insert(0) += f;
            *net.entry(&e.to).or_insert(0) -= f;
        }
        match net.iter().find(|(_, &v)| v != 0) {
            Some((n, v)) => Err(format!("conservation violated at {n}: out − in = {v}")),
            None => Ok(()),
        }
    }
}

/// Computes a maximum circulation with the default algorithm.
pub fn max_circulation(aug: &AugmentedGraph) -> Circulation {
    max_circulation_with(aug, Algorithm::default())
}

pub fn max_circulation_with(aug: &AugmentedGraph, algorithm: Algorithm) -> Circulation {
    let mut net = Residual::build(aug);
    match algorithm {
        Algorithm::SuccessiveShortestPaths => net.successive_shortest_paths(aug),
        Algorithm::CycleCanceling => net.cancel_cycles(),
    }
    net.into_circulation(aug)
}

const INF: i64 = i64::MAX / 4;

/// Paired-arc residual network: arc `2e` is edge `e` forward, `2e + 1` its
/// reverse.
struct Residual {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<Amount>,
    cost: Vec<i64>,
    source: usize,
    sink: usize,
}

impl Residual {
    fn build(aug: &AugmentedGraph) -> Self {
        let nodes = aug.nodes();
        // s and t sit at the end, outside the sorted base range.
        let n_base = nodes.len() - 2;
        let (source, sink) = (n_base, n_base + 1);
        let locate = |n: &NodeId| {
            if *n == aug.source {
                source
            } else if *n == aug.sink {
                sink
            } else {
                nodes[..n_base]
                    .binary_search(n)
                    .expect("edge endpoint in node set")
            }
        };
        let mut net = Residual {
            adj: vec![Vec::new(); nodes.len()],
            to: Vec::with_capacity(aug.edges.len() * 2),
            residual: Vec::with_capacity(aug.edges.len() * 2),
            cost: Vec::with_capacity(aug.edges.len() * 2),
            source,
            sink,
        };
        for e in &aug.edges {
            let (u, v) = (locate(&e.from), locate(&e.to));
            let a = net.to.len();
            net.to.extend([v, u]);
            net.residual.extend([e.capacity, 0]);
            net.cost.extend([-1, 1]);
            net.adj[u].push(a);
            net.adj[v].push(a + 1);
        }
        net
    }

    fn tail_of(&self, arc: usize) -> usize {
        self.to[arc ^ 1]
    }

    fn push(&mut self, arc: usize, amount: Amount) {
        self.residual[arc] -= amount;
        self.residual[arc ^ 1] += amount;
    }

    fn into_circulation(self, aug: &AugmentedGraph) -> Circulation {
        Circulation {
            flow: (0..aug.edges.len())
                .map(|e| self.residual[2 * e + 1])
                .collect(),
        }
    }

    fn successive_shortest_paths(&mut self, aug: &AugmentedGraph) {
        let fund = aug.fund_edge();
        let mut excess: Amount = 0;
        for (e, edge) in aug.edges.iter().enumerate() {
            match edge.role {
                EdgeRole::Fund => {}
                EdgeRole::Sink => {
                    excess += edge.capacity;
                    self.push(2 * e, edge.capacity);
                }
                _ => self.push(2 * e, edge.capacity),
            }
        }
        let fund_flow = excess.min(aug.edges[fund].capacity);
        self.push(2 * fund, fund_flow);
        excess -= fund_flow;

        let n = self.adj.len();
        let mut potential = vec![0i64; n];
        let (from, target) = (self.sink, self.source);
        while excess > 0 {
            let dist = self.dijkstra(from, &potential);
            if dist[target] >= INF {
                // Unreachable: an imbalanced residual always holds a
                // creditor-to-debtor path. Keep the pseudo-flow as is.
                debug_assert!(false, "no residual path from t to s");
                break;
            }
            for v in 0..n {
                potential[v] += dist[v].min(dist[target]);
            }
            excess -= self.blocking_flow(from, target, excess, &potential);
        }
    }

    fn reduced(&self, arc: usize, potential: &[i64]) -> i64 {
        self.cost[arc] + potential[self.tail_of(arc)] - potential[self.to[arc]]
    }

    fn dijkstra(&self, from: usize, potential: &[i64]) -> Vec<i64> {
        let mut dist = vec![INF; self.adj.len()];
        let mut heap = BinaryHeap::new();
        dist[from] = 0;
        heap.push(Reverse((0i64, from)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &arc in &self.adj[u] {
                if self.residual[arc] == 0 {
                    continue;
                }
                let v = self.to[arc];
                let nd = d + self.reduced(arc, potential);
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }

    /// Pushes up to `limit` units from `from` to `target` over arcs of zero
    /// reduced cost, layered by hop count so the search cannot cycle.
    fn blocking_flow(
        &mut self,
        from: usize,
        target: usize,
        limit: Amount,
        potential: &[i64],
    ) -> Amount {
        let n = self.adj.len();
        let admissible =
            |net: &Self, arc: usize| net.residual[arc] > 0 && net.reduced(arc, potential) == 0;

        let mut level = vec![usize::MAX; n];
        level[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &arc in &self.adj[u] {
                let v = self.to[arc];
                if level[v] == usize::MAX && admissible(self, arc) {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if level[target] == usize::MAX {
            return 0;
        }

        let mut next = vec![0usize; n];
        let mut pushed = 0;
        let mut path: Vec<usize> = Vec::new();
        while pushed < limit {
            let u = path.last().map_or(from, |&a| self.to[a]);
            if u == target {
                let amount = path
                    .iter()
                    .map(|&a| self.residual[a])
                    .min()
                    .unwrap_or(0)
                    .min(limit - pushed);
                for &a in &path {
                    self.push(a, amount);
                }
                pushed += amount;
                // Retreat to just before the first saturated arc.
                let cut = path
                    .iter()
                    .position(|&a| self.residual[a] == 0)
                    .unwrap_or(path.len());
                path.truncate(cut);
                continue;
            }
            let mut advanced = false;
            while next[u] < self.adj[u].len() {
                let arc = self.adj[u][next[u]];
                let v = self.to[arc];
                if level[v] == level[u] + 1 && admissible(self, arc) {
                    path.push(arc);
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if !advanced {
                if u == from {
                    break;
                }
                level[u] = usize::MAX;
                path.pop();
            }
        }
        pushed
    }

    fn cancel_cycles(&mut self) {
        while let Some(cycle) = self.negative_cycle() {
            let amount = cycle.iter().map(|&a| self.residual[a]).min().unwrap_or(0);
            for &a in &cycle {
                self.push(a, amount);
            }
        }
    }

    /// Bellman-Ford from a virtual root joined to every node at cost 0.
    fn negative_cycle(&self) -> Option<Vec<usize>> {
        let n = self.adj.len();
        let mut dist = vec![0i64; n];
        let mut parent = vec![usize::MAX; n];
        let mut last = None;
        for _ in 0..=n {
            last = None;
            for u in 0..n {
                for &arc in &self.adj[u] {
                    if self.residual[arc] == 0 {
                        continue;
                    }
                    let v = self.to[arc];
                    if dist[u] + self.cost[arc] < dist[v] {
                        dist[v] = dist[u] + self.cost[arc];
                        parent[v] = arc;
                        last = Some(v);
                    }
                }
            }
            last?;
        }
        let mut v = last?;
        for _ in 0..n {
            v = self.tail_of(parent[v]);
        }
        let start = v;
        let mut cycle = Vec::new();
        loop {
            let arc = parent[v];
            cycle.push(arc);
            v = self.tail_of(arc);
            if v == start {
                break;
            }
        }
        cycle.reverse();
        Some(cycle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Obligation, ObligationGraph};
    use crate::scenarios;
    use crate::setoff::augment;

    fn both(g: &ObligationGraph, delta: Amount) -> [(Circulation, AugmentedGraph); 2] {
        [
            Algorithm::SuccessiveShortestPaths,
            Algorithm::CycleCanceling,
        ]
        .map(|alg| {
            let aug = augment(g, delta).unwrap();
            (max_circulation_with(&aug, alg), aug)
        })
    }

    #[test]
    fn two_ccp_square_saturates() {
        for (c, aug) in both(&scenarios::two_ccp_square(), 0) {
            c.check_feasible(&aug).unwrap();
            assert_eq!(c.base_total(&aug), 400);
            assert!(aug.base_edges().all(|(i, e)| c.flow[i] == e.capacity));
        }
    }

    #[test]
    fn five_node_discharges_seven() {
        for (c, aug) in both(&scenarios::five_node(), 0) {
            c.check_feasible(&aug).unwrap();
            assert_eq!(c.base_total(&aug), 7);
            assert_eq!(c.objective(), 7);
        }
    }

    #[test]
    fn single_edge_full_loop() {
        let g = ObligationGraph::new(vec![Obligation::new("o1", "A", "B", 100)]);
        for (c, aug) in both(&g, 100) {
            c.check_feasible(&aug).unwrap();
            assert_eq!(c.flow, vec![100, 100, 100, 100]);
            assert_eq!(c.objective(), 400);
        }
    }

    #[test]
    fn surplus_fund_is_not_forced() {
        let g = ObligationGraph::new(vec![Obligation::new("o1", "A", "B", 100)]);
        for (c, aug) in both(&g, 1_000) {
            c.check_feasible(&aug).unwrap();
            assert_eq!(c.fund_used(&aug), 100);
        }
    }

    #[test]
    fn repeated_runs_identical() {
        let g = scenarios::tcn_extended();
        let aug = augment(&g, 50).unwrap();
        assert_eq!(max_circulation(&aug), max_circulation(&aug));
    }

    #[test]
    fn empty_graph() {
        let aug = augment(&ObligationGraph::default(), 10).unwrap();
        let c = max_circulation(&aug);
        assert_eq!(c.flow, vec![0]);
        c.check_feasible(&aug).unwrap();
    }

    #[test]
    fn infeasible_flow_is_reported() {
        let aug = augment(&scenarios::balanced_triangle(5), 0).unwrap();
        let bad = Circulation {
            flow: vec![5, 5, 4, 0],
        };
        assert!(bad
            .check_feasible(&aug)
            .unwrap_err()
            .contains("conservation"));
        let over = Circulation {
            flow: vec![6, 6, 6, 0],
        };
        assert!(over.check_feasible(&aug).unwrap_err().contains("outside"));
    }
}
