//! Times setoff on generated networks of growing size. Cycle canceling is
//! only run on the smallest one; it is orders of magnitude slower.
//!
//! `cargo run --release --example scale_free_performance`

use std::time::Instant;

use cycleclear::analysis::{generate_scale_free, ScaleFreeParams};
use cycleclear::setoff::{setoff_clear_with, Algorithm};

fn main() -> cycleclear::Result<()> {
    for nodes in [500, 2_500, 5_002] {
        let g = generate_scale_free(&ScaleFreeParams::new(nodes, 2, 1))?;
        for alg in [
            Algorithm::SuccessiveShortestPaths,
            Algorithm::CycleCanceling,
        ] {
            if alg == Algorithm::CycleCanceling && nodes > 500 {
                continue;
            }
            let start = Instant::now();
            let r = setoff_clear_with(&g, 0, alg)?;
            println!(
                "{:>6} edges {:<24} {:>10.2?}  discharged {}",
                g.len(),
                format!("{alg:?}"),
                start.elapsed(),
                r.discharged_total
            );
        }
    }
    Ok(())
}
