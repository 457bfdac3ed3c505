//! Obligation networks: records, canonical graph representation, balance
//! vectors and the validation report.
//!
//! All amounts are integer minor currency units. A graph is an immutable value
//! once built; record order is canonical (ascending [`Oid`]) so every
//! downstream computation is deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Currency amount in integer minor units (e.g. cents).
pub type Amount = i64;

/// Identifier of a participant: firm, CCP, settlement medium or fund node.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

/// Record identifier.
///
/// Ordering is "natural": runs of ASCII digits compare numerically, so
/// `o2 < o10`. Ties fall back to plain byte order, which keeps the order total.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Oid(String);

impl Oid {
    pub fn new(id: impl Into<String>) -> Self {
        Oid(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Oid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Oid {
    fn from(s: &str) -> Self {
        Oid(s.to_owned())
    }
}

impl Ord for Oid {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Oid {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let la = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let lb = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (da, db) = (trim_zeros(&a[..la]), trim_zeros(&b[..lb]));
                let ord = da.len().cmp(&db.len()).then_with(|| da.cmp(db));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[la..];
                b = &b[lb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let start = digits
        .iter()
        .position(|&c| c != b'0')
        .unwrap_or(digits.len());
    &digits[start..]
}

/// Enforceable debt versus conditional commitment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    Obligation,
    Acceptance,
}

impl Kind {
    pub fn code(self) -> &'static str {
        match self {
            Kind::Obligation => "O",
            Kind::Acceptance => "A",
        }
    }
}

/// Which record kinds enter a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KindSet {
    pub obligations: bool,
    pub acceptances: bool,
}

impl KindSet {
    pub const OBLIGATIONS: KindSet = KindSet {
        obligations: true,
        acceptances: false,
    };
    pub const ACCEPTANCES: KindSet = KindSet {
        obligations: false,
        acceptances: true,
    };
    pub const ALL: KindSet = KindSet {
        obligations: true,
        acceptances: true,
    };

    pub fn contains(self, kind: Kind) -> bool {
        match kind {
            Kind::Obligation => self.obligations,
            Kind::Acceptance => self.acceptances,
        }
    }
}

impl Default for KindSet {
    fn default() -> Self {
        KindSet::OBLIGATIONS
    }
}

/// One directed claim: `debtor` owes `creditor` the `amount`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obligation {
    pub oid: Oid,
    pub debtor: NodeId,
    pub creditor: NodeId,
    pub amount: Amount,
    pub kind: Kind,
    pub tag: Option<String>,
    /// Both-party confirmation flag.
    pub attested: bool,
}

impl Obligation {
    /// An attested, untagged obligation record.
    pub fn new(oid: &str, debtor: &str, creditor: &str, amount: Amount) -> Self {
        Obligation {
            oid: Oid::from(oid),
            debtor: NodeId::from(debtor),
            creditor: NodeId::from(creditor),
            amount,
            kind: Kind::Obligation,
            tag: None,
            attested: true,
        }
    }

    /// An attested, untagged acceptance record.
    pub fn acceptance(oid: &str, debtor: &str, creditor: &str, amount: Amount) -> Self {
        Obligation {
            kind: Kind::Acceptance,
            ..Obligation::new(oid, debtor, creditor, amount)
        }
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn is_obligation(&self) -> bool {
        self.kind == Kind::Obligation
    }

    pub fn touches(&self, node: &NodeId) -> bool {
        &self.debtor == node || &self.creditor == node
    }
}

/// Multiset of obligation records over a node set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ObligationGraph {
    nodes: BTreeSet<NodeId>,
    records: Vec<Obligation>,
}

impl ObligationGraph {
    /// Builds a graph from records; the node set is every debtor and creditor.
    pub fn new(records: Vec<Obligation>) -> Self {
        Self::with_nodes(std::iter::empty(), records)
    }

    /// Builds a graph that also carries isolated nodes.
    pub fn with_nodes(
        nodes: impl IntoIterator<Item = NodeId>,
        mut records: Vec<Obligation>,
    ) -> Self {
        records.sort_by(|a, b| a.oid.cmp(&b.oid));
        let mut set: BTreeSet<NodeId> = nodes.into_iter().collect();
        for r in &records {
            set.insert(r.debtor.clone());
            set.insert(r.creditor.clone());
        }
        ObligationGraph {
            nodes: set,
            records,
        }
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn records(&self) -> &[Obligation] {
        &self.records
    }

    pub fn into_records(self) -> Vec<Obligation> {
        self.records
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn get(&self, oid: &Oid) -> Option<&Obligation> {
        self.records
            .binary_search_by(|r| r.oid.cmp(oid))
            .ok()
            .map(|i| &self.records[i])
    }

    /// Sum of amounts over records of the given kinds.
    pub fn total(&self, kinds: KindSet) -> Amount {
        self.records
            .iter()
            .filter(|r| kinds.contains(r.kind))
            .map(|r| r.amount)
            .sum()
    }

    /// Records of the given kinds only; the node set is kept.
    pub fn filter_kinds(&self, kinds: KindSet) -> ObligationGraph {
        self.retain(|r| kinds.contains(r.kind))
    }

    /// Records satisfying `keep`; the node set is kept.
    pub fn retain(&self, mut keep: impl FnMut(&Obligation) -> bool) -> ObligationGraph {
        ObligationGraph {
            nodes: self.nodes.clone(),
            records: self.records.iter().filter(|r| keep(r)).cloned().collect(),
        }
    }

    /// Only the records confirmed by both parties.
    pub fn attested_only(&self) -> ObligationGraph {
        self.retain(|r| r.attested)
    }

    /// Per-pair totals keyed by `(debtor, creditor, kind)`.
    pub fn pair_totals(&self) -> BTreeMap<(NodeId, NodeId, Kind), Amount> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            *out.entry((r.debtor.clone(), r.creditor.clone(), r.kind))
                .or_insert(0) += r.amount;
        }
        out
    }
}

/// One problem found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub oid: Oid,
    pub problem: String,
}

/// Checks record invariants and reports one entry per violation.
pub fn validate(graph: &ObligationGraph) -> Vec<Violation> {
    let mut report = Vec::new();
    let mut seen = BTreeSet::new();
    for r in graph.records() {
        if !seen.insert(&r.oid) {
            report.push(Violation {
                oid: r.oid.clone(),
                problem: "duplicate oid".into(),
            });
        }
        if r.amount <= 0 {
            report.push(Violation {
                oid: r.oid.clone(),
                problem: "non-positive amount".into(),
            });
        }
        if r.debtor == r.creditor {
            report.push(Violation {
                oid: r.oid.clone(),
                problem: "self-loop".into(),
            });
        }
        if r.debtor.as_str().is_empty() || r.creditor.as_str().is_empty() {
            report.push(Violation {
                oid: r.oid.clone(),
                problem: "empty node id".into(),
            });
        }
        if r.oid.as_str().is_empty() {
            report.push(Violation {
                oid: r.oid.clone(),
                problem: "empty oid".into(),
            });
        }
    }
    report
}

/// Net position per node: receivables minus payables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BalanceVector {
    entries: BTreeMap<NodeId, Amount>,
}

impl BalanceVector {
    pub fn from_entries(entries: impl IntoIterator<Item = (NodeId, Amount)>) -> Self {
        BalanceVector {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn get(&self, node: &NodeId) -> Amount {
        self.entries.get(node).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, Amount)> + '_ {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn sum(&self) -> Amount {
        self.entries.values().sum()
    }

    pub fn negated(&self) -> BalanceVector {
        BalanceVector {
            entries: self.entries.iter().map(|(k, &v)| (k.clone(), -v)).collect(),
        }
    }

    /// Same vector restricted to `keep`.
    pub fn restricted(&self, mut keep: impl FnMut(&NodeId) -> bool) -> BalanceVector {
        BalanceVector {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, &v)| (k.clone(), v))
                .collect(),
        }
    }

    /// Drops zero entries, for comparisons across different node sets.
    pub fn nonzero(&self) -> BalanceVector {
        self.restricted(|_| true).retain_nonzero()
    }

    fn retain_nonzero(mut self) -> BalanceVector {
        self.entries.retain(|_, v| *v != 0);
        self
    }

    pub fn positive_part_norm(&self) -> Amount {
        positive_part_norm(self)
    }
}

/// `Σ max(v_i, 0)`.
pub fn positive_part_norm(v: &BalanceVector) -> Amount {
    v.entries.values().map(|&x| x.max(0)).sum()
}

/// Net positions over records whose kind is in `include`; every node of the
/// graph gets an entry.
pub fn balance_vector(graph: &ObligationGraph, include: KindSet) -> BalanceVector {
    let mut entries: BTreeMap<NodeId, Amount> =
        graph.nodes().iter().map(|n| (n.clone(), 0)).collect();
    for r in graph.records().iter().filter(|r| include.contains(r.kind)) {
        *entries.entry(r.creditor.clone()).or_insert(0) += r.amount;
        *entries.entry(r.debtor.clone()).or_insert(0) -= r.amount;
    }
    BalanceVector { entries }
}

/// Collapses parallel records into one per `(debtor, creditor, kind)`.
///
/// Synthetic oids have the form `debtor>creditor:K`.
pub fn aggregate(graph: &ObligationGraph) -> ObligationGraph {
    let mut attested: BTreeMap<(NodeId, NodeId, Kind), bool> = BTreeMap::new();
    for r in graph.records() {
        let e = attested
            .entry((r.debtor.clone(), r.creditor.clone(), r.kind))
            .or_insert(true);
        *e &= r.attested;
    }
    let records = graph
        .pair_totals()
        .into_iter()
        .map(|((debtor, creditor, kind), amount)| {
            let attested = attested[&(debtor.clone(), creditor.clone(), kind)];
            Obligation {
                oid: Oid::new(format!("{}>{}:{}", debtor, creditor, kind.code())),
                debtor,
                creditor,
                amount,
                kind,
                tag: None,
                attested,
            }
        })
        .collect();
    ObligationGraph::with_nodes(graph.nodes().iter().cloned(), records)
}
