//! Finds and executes settlement cycles in a network that mixes trade
//! credit, two CCPs and two settlement assets.

use cycleclear::scenarios;
use cycleclear::settlement::{find_cycles, settle_to_fixpoint};

fn main() -> cycleclear::Result<()> {
    let g = scenarios::tcn_extended();
    let max_len = 6;
    let found = find_cycles(&g, max_len)?;
    println!("{} candidate cycles up to {max_len} legs", found.len());

    let (rest, log) = settle_to_fixpoint(&g, max_len)?;
    for step in &log {
        let path: Vec<&str> = step.nodes.iter().map(|n| n.as_str()).collect();
        println!(
            "  {:>4} over {:<28} {:?}",
            step.amount,
            path.join(" > "),
            step.class
        );
    }
    println!("{} records remain", rest.len());
    for r in rest.records() {
        println!(
            "  {:<6} {:>4} -> {:<4} {:>4} {}",
            r.oid,
            r.debtor,
            r.creditor,
            r.amount,
            r.kind.code()
        );
    }
    Ok(())
}
