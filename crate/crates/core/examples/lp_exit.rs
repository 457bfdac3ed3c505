//! Identifies liquidity providers by round amounts and measures how much
//! clearing disappears when they leave.

use cycleclear::analysis::{generate_lp_market, lp_exit, lp_report, LpMarketParams};

fn main() -> cycleclear::Result<()> {
    let params = LpMarketParams::new(500, 2, 3);
    let g = generate_lp_market(&params)?;
    let report = lp_report(&g, params.modulus)?;
    println!(
        "{} round-amount records, firms {:?}",
        report.lp_obligation_ids.len(),
        report
            .lp_firm_ids
            .iter()
            .map(|n| n.as_str())
            .collect::<Vec<_>>()
    );
    println!(
        "LP share {:.3}, path length {:.3}, adjusted {:.3}",
        report.lp_liquidity_share, report.path_length, report.adjusted_contribution
    );

    let exit = lp_exit(&g, &report.lp_firm_ids, 0)?;
    println!(
        "cleared {} -> {}: drop {:.1}% while removing {:.1}% of debt",
        exit.cleared_before,
        exit.cleared_after,
        100.0 * exit.drop_fraction,
        100.0 * exit.debt_share_removed
    );
    Ok(())
}
