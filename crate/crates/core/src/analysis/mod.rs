//! Liquidity analysis on top of netting and setoff: residual curves over a
//! fund grid, liquidity-provider analytics, and network generators.

mod generate;
mod lp;

pub use generate::{
    generate_lp_market, generate_scale_free, AmountDist, LpMarketParams, ScaleFreeParams,
};
pub use lp::{
    adjusted_lp_contribution, identify_lp_firms, identify_lp_obligations, lp_exit, lp_report,
    path_length, ExitCounterfactual, LpReport, DEFAULT_LP_MODULUS,
};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Amount, ObligationGraph};
use crate::netting::net_residual;
use crate::setoff::{full_clear_threshold, setoff_clear};

/// Boundaries between the four operating regimes of the residual curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Regimes {
    /// Start point, no fund.
    pub a: Amount,
    /// First grid point where setoff is within tolerance of netting; `None`
    /// when the grid never reaches it.
    pub b_end: Option<Amount>,
    /// Fund at which both residuals reach zero, `‖b⁺‖`.
    pub c_end: Amount,
    /// Every fund from here on clears fully.
    pub d_start: Amount,
}

/// `N(δ)` and `S(δ)` tabulated over a grid of fund sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub grid: Vec<Amount>,
    pub netting_curve: Vec<Amount>,
    pub setoff_curve: Vec<Amount>,
    pub tolerance: Amount,
    pub regimes: Regimes,
}

impl SweepReport {
    pub fn rows(&self) -> impl Iterator<Item = (Amount, Amount, Amount)> + '_ {
        self.grid
            .iter()
            .zip(&self.netting_curve)
            .zip(&self.setoff_curve)
            .map(|((&d, &n), &s)| (d, n, s))
    }
}

pub fn sweep(graph: &ObligationGraph, grid: &[Amount]) -> Result<SweepReport> {
    sweep_with_tolerance(graph, grid, 0)
}

/// Evaluates both curves at every grid point. Points are independent and
/// run in parallel; the report does not depend on evaluation order.
pub fn sweep_with_tolerance(
    graph: &ObligationGraph,
    grid: &[Amount],
    tolerance: Amount,
) -> Result<SweepReport> {
    if grid.iter().any(|&d| d < 0) {
        return Err(Error::InvalidParameter(
            "grid values must be non-negative".into(),
        ));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter(
            "grid must be sorted ascending".into(),
        ));
    }
    if tolerance < 0 {
        return Err(Error::InvalidParameter(
            "tolerance must be non-negative".into(),
        ));
    }
    let points = grid
        .par_iter()
        .map(|&delta| {
            Ok((
                net_residual(graph, delta)?,
                setoff_clear(graph, delta)?.residual_total,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let (netting_curve, setoff_curve): (Vec<_>, Vec<_>) = points.into_iter().unzip();

    let threshold = full_clear_threshold(graph);
    let b_end = grid
        .iter()
        .zip(netting_curve.iter().zip(&setoff_curve))
        .find(|(_, (&n, &s))| s - n <= tolerance)
        .map(|(&d, _)| d);
    Ok(SweepReport {
        grid: grid.to_vec(),
        netting_curve,
        setoff_curve,
        tolerance,
        regimes: Regimes {
            a: 0,
            b_end,
            c_end: threshold,
            d_start: threshold,
        },
    })
}

/// Inclusive `start, start + step, …` up to `stop`.
pub fn grid(start: Amount, stop: Amount, step: Amount) -> Result<Vec<Amount>> {
    if step <= 0 || start < 0 || stop < start {
        return Err(Error::InvalidParameter(format!(
            "bad grid {start}:{stop}:{step}"
        )));
    }
    Ok((0..)
        .map(|i| start + i * step)
        .take_while(|&d| d <= stop)
        .collect())
}
