//! Executes the four three-party settlement cycles and prints the records
//! before and after.

use cycleclear::graph::ObligationGraph;
use cycleclear::scenarios;
use cycleclear::settlement::{classify_cycle, execute_cycle, SettlementCycle};

fn show(g: &ObligationGraph) {
    for r in g.records() {
        println!(
            "    {:<6} {:>2} -> {:<2} {:>4} {}",
            r.oid,
            r.debtor,
            r.creditor,
            r.amount,
            r.kind.code()
        );
    }
}

fn main() -> cycleclear::Result<()> {
    let cycle = SettlementCycle::new(["o1", "o2", "o3"], 100);
    for g in [
        scenarios::assignment_triad(100),
        scenarios::setoff_triad(100),
        scenarios::issuance_triad(100),
        scenarios::novation_triad(100),
    ] {
        println!("{:?}", classify_cycle(&g, &cycle)?);
        println!("  before");
        show(&g);
        println!("  after");
        show(&execute_cycle(&g, &cycle)?);
    }

    // A cycle larger than a leg is refused and nothing changes.
    let g = scenarios::setoff_triad(100);
    let err = execute_cycle(&g, &SettlementCycle::new(["o1", "o2", "o3"], 150)).unwrap_err();
    println!("oversized cycle: {err}");
    Ok(())
}
