//! Compares CCP netting with multilateral setoff on the five-node network.
//!
//! Run with `cargo run --example netting_vs_setoff`.

use cycleclear::graph::{balance_vector, KindSet};
use cycleclear::netting::net_global;
use cycleclear::scenarios;
use cycleclear::setoff::setoff_clear;

fn main() -> cycleclear::Result<()> {
    let g = scenarios::five_node();
    println!(
        "{} records, gross {}",
        g.len(),
        g.total(KindSet::OBLIGATIONS)
    );

    let b = balance_vector(&g, KindSet::OBLIGATIONS);
    for (node, pos) in b.iter() {
        println!("  {node:>3} net {pos:+}");
    }

    let netting = net_global(&g);
    println!("netting: members must still pay {}", netting.required_total);
    for leg in netting.post_novation_graph.records() {
        println!("  {} -> {} {}", leg.debtor, leg.creditor, leg.amount);
    }

    let setoff = setoff_clear(&g, 0)?;
    println!(
        "setoff: discharged {}, left {}",
        setoff.discharged_total, setoff.residual_total
    );
    for r in setoff.residual_graph.records() {
        println!("  {} {} -> {} {}", r.oid, r.debtor, r.creditor, r.amount);
    }
    Ok(())
}
