//! Reads a ledger, reports problems row by row, and writes JSON reports.

use cycleclear::io::{emit_ledger, parse_ledger_str, to_json, ClearingReport, NettingReport};
use cycleclear::netting::net_global;
use cycleclear::setoff::setoff_clear;

const LEDGER: &str = "\
oid,debtor,creditor,amount,kind,tag,attested
inv-1,Acme,Bolt,1200.00,O,trade,1
inv-2,Bolt,Cord,800.50,O,trade,1
inv-3,Cord,Acme,950.25,O,trade,0
";

const BROKEN: &str = "\
oid,debtor,creditor,amount,kind
a,X,Y,10.001,O
b,X,X,5,O
c,X,Y,5,Q
";

fn main() -> cycleclear::Result<()> {
    let g = parse_ledger_str(LEDGER, "inline")?;
    print!("{}", emit_ledger(&g));
    print!("{}", to_json(&NettingReport::new(&net_global(&g), 0))?);
    print!("{}", to_json(&ClearingReport::from(&setoff_clear(&g, 0)?))?);

    // Only attested records are binding on both sides.
    let attested = g.attested_only();
    println!(
        "attested-only setoff discharges {}",
        setoff_clear(&attested, 0)?.discharged_total
    );

    if let Err(e) = parse_ledger_str(BROKEN, "broken.csv") {
        println!("{e}");
    }
    Ok(())
}
