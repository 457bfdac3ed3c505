//! Two CCPs each see half of a loop and cannot net it away; one integrated
//! setoff clears it without any payment.

use cycleclear::netting::{net_global, net_partitioned, NettingSetPartition};
use cycleclear::scenarios;
use cycleclear::setoff::setoff_clear;

fn main() -> cycleclear::Result<()> {
    let g = scenarios::two_ccp_square();
    let silos = NettingSetPartition::parse("ccp1=CCP1,ccp2=CCP2")?;
    let split = net_partitioned(&g, &silos)?;
    for set in &split.sets {
        println!(
            "set {:<5} via {:<5} members pay {:>4}, CCP legs {:>4}",
            set.set, set.ccp, set.required, set.gross
        );
    }
    println!(
        "siloed netting: {} member-side, {} gross",
        split.required_total, split.gross_total
    );
    println!("one global CCP: {}", net_global(&g).required_total);

    let cleared = setoff_clear(&g, 0)?;
    println!(
        "setoff: {} discharged, {} left",
        cleared.discharged_total, cleared.residual_total
    );

    let skew = scenarios::asymmetric_square();
    for delta in [0, 5, 10] {
        println!(
            "asymmetric square, fund {delta:>2}: setoff leaves {}",
            setoff_clear(&skew, delta)?.residual_total
        );
    }
    Ok(())
}
