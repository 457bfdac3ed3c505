//! Small reference networks used by the examples, tests and the bundled
//! `scenarios/*.csv` ledgers.
//!
//! Amounts here are in minor units as written (a "100" leg is 100 minor
//! units). The CSV ledgers carry the same networks in major units, so a
//! `100.00` row parses to 10 000.

use crate::graph::{Amount, Kind, Obligation, ObligationGraph};

fn rec(oid: &str, debtor: &str, creditor: &str, amount: Amount, kind: Kind) -> Obligation {
    Obligation {
        kind,
        ..Obligation::new(oid, debtor, creditor, amount)
    }
}

/// Five participants, ten unit obligations: the cycle
/// v1→v5→v4→v3→v2→v1 plus the acyclic part v3→v1, v1→v2, v3→v5, v4→v2, v5→v1.
pub fn five_node() -> ObligationGraph {
    let edges = [
        ("v1", "v5"),
        ("v5", "v4"),
        ("v4", "v3"),
        ("v3", "v2"),
        ("v2", "v1"),
        ("v3", "v1"),
        ("v1", "v2"),
        ("v3", "v5"),
        ("v4", "v2"),
        ("v5", "v1"),
    ];
    ObligationGraph::new(
        edges
            .iter()
            .enumerate()
            .map(|(i, (d, c))| Obligation::new(&format!("o{}", i + 1), d, c, 1))
            .collect(),
    )
}

/// A→CCP1→B→CCP2→A, 100 on every leg. Legs through CCP1 carry tag `ccp1`,
/// legs through CCP2 carry tag `ccp2`.
pub fn two_ccp_square() -> ObligationGraph {
    square(100, 100)
}

/// Same loop with A→CCP1→B at 100 and B→CCP2→A at 90.
pub fn asymmetric_square() -> ObligationGraph {
    square(100, 90)
}

fn square(first: Amount, second: Amount) -> ObligationGraph {
    ObligationGraph::new(vec![
        Obligation::new("o1", "A", "CCP1", first).with_tag("ccp1"),
        Obligation::new("o2", "CCP1", "B", first).with_tag("ccp1"),
        Obligation::new("o3", "B", "CCP2", second).with_tag("ccp2"),
        Obligation::new("o4", "CCP2", "A", second).with_tag("ccp2"),
    ])
}

/// A→B→C→A at `amount` each.
pub fn balanced_triangle(amount: Amount) -> ObligationGraph {
    ObligationGraph::new(vec![
        Obligation::new("o1", "A", "B", amount),
        Obligation::new("o2", "B", "C", amount),
        Obligation::new("o3", "C", "A", amount),
    ])
}

/// The 3-node settlement triads: obligation v1→v2 (`o1`), leg v2→S (`o2`),
/// leg S→v1 (`o3`), with the two legs' kinds chosen per mechanism.
pub fn triad(v2_to_s: Kind, s_to_v1: Kind, amount: Amount) -> ObligationGraph {
    ObligationGraph::new(vec![
        rec("o1", "v1", "v2", amount, Kind::Obligation),
        rec("o2", "v2", "S", amount, v2_to_s),
        rec("o3", "S", "v1", amount, s_to_v1),
    ])
}

pub fn assignment_triad(amount: Amount) -> ObligationGraph {
    triad(Kind::Acceptance, Kind::Obligation, amount)
}

pub fn setoff_triad(amount: Amount) -> ObligationGraph {
    triad(Kind::Obligation, Kind::Obligation, amount)
}

pub fn issuance_triad(amount: Amount) -> ObligationGraph {
    triad(Kind::Acceptance, Kind::Acceptance, amount)
}

pub fn novation_triad(amount: Amount) -> ObligationGraph {
    triad(Kind::Obligation, Kind::Acceptance, amount)
}

/// Two CCP silos linked to a trade-credit network through intermediaries C
/// and D. The trade-credit network is collapsed to one node `TCN`; `$` is
/// the cash settlement asset and `s$` the trade-credit settlement asset.
/// Every leg is 100.
pub fn tcn_extended() -> ObligationGraph {
    use Kind::{Acceptance as A, Obligation as O};
    let legs: [(&str, &str, Kind, &str); 20] = [
        ("A", "CCP1", O, "ccp1"),
        ("CCP1", "B", O, "ccp1"),
        ("B", "CCP2", O, "ccp2"),
        ("CCP2", "A", O, "ccp2"),
        ("$", "A", O, "cash"),
        ("$", "B", O, "cash"),
        ("A", "$", A, "cash"),
        ("B", "$", A, "cash"),
        ("B", "D", O, "tcn"),
        ("C", "A", O, "tcn"),
        ("CCP2", "D", O, "ccp2"),
        ("C", "CCP2", O, "ccp2"),
        ("D", "TCN", O, "tcn"),
        ("TCN", "C", O, "tcn"),
        ("s$", "D", O, "stable"),
        ("s$", "C", O, "stable"),
        ("s$", "TCN", O, "stable"),
        ("D", "s$", A, "stable"),
        ("C", "s$", A, "stable"),
        ("TCN", "s$", A, "stable"),
    ];
    ObligationGraph::new(
        legs.iter()
            .enumerate()
            .map(|(i, &(d, c, k, tag))| rec(&format!("o{}", i + 1), d, c, 100, k).with_tag(tag))
            .collect(),
    )
}

/// Multiplies every amount by `factor`, e.g. 100 to turn unit scenarios into
/// the major-unit ledgers shipped under `scenarios/`.
pub fn scaled(graph: &ObligationGraph, factor: Amount) -> ObligationGraph {
    ObligationGraph::with_nodes(
        graph.nodes().iter().cloned(),
        graph
            .records()
            .iter()
            .map(|r| Obligation {
                amount: r.amount * factor,
                ..r.clone()
            })
            .collect(),
    )
}

/// Bundled ledgers: file stem and the network it holds, in minor units as
/// parsed from the CSV.
pub fn bundled() -> Vec<(&'static str, ObligationGraph)> {
    vec![
        ("triad_assignment", scaled(&assignment_triad(100), 100)),
        ("triad_setoff", scaled(&setoff_triad(100), 100)),
        ("triad_issuance", scaled(&issuance_triad(100), 100)),
        ("triad_novation", scaled(&novation_triad(100), 100)),
        ("five_node", scaled(&five_node(), 100)),
        ("two_ccp_square", scaled(&two_ccp_square(), 100)),
        ("asymmetric_square", scaled(&asymmetric_square(), 100)),
        ("tcn_extended", scaled(&tcn_extended(), 100)),
    ]
}
