//! Sweeps the external fund and writes the residual curves as CSV and SVG.
//!
//! `cargo run --example liquidity_sweep -- [out_dir]` (default: the system
//! temp directory).

use std::path::PathBuf;

use cycleclear::analysis::{generate_scale_free, grid, sweep, ScaleFreeParams};
use cycleclear::io::{curve_csv, curve_svg};
use cycleclear::setoff::full_clear_threshold;

fn main() -> cycleclear::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map_or_else(std::env::temp_dir, PathBuf::from);
    let g = generate_scale_free(&ScaleFreeParams::new(300, 2, 42))?;
    let top = full_clear_threshold(&g);
    let step = (top / 20).max(1);
    let report = sweep(&g, &grid(0, top + step, step)?)?;

    println!("{:>12} {:>14} {:>14}", "fund", "netting", "setoff");
    for (d, n, s) in report.rows() {
        println!("{d:>12} {n:>14} {s:>14}");
    }
    println!("regimes: {:?}", report.regimes);

    std::fs::write(out.join("curves.csv"), curve_csv(&report))?;
    std::fs::write(out.join("curves.svg"), curve_svg(&report))?;
    println!("wrote curves.csv and curves.svg to {}", out.display());
    Ok(())
}
