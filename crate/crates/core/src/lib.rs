//! Clearing of obligation networks.
//!
//! An [`ObligationGraph`] holds debt records between firms. Two clearing
//! families are provided:
//!
//! * CCP netting ([`netting`]) replaces every record with one leg per member
//!   against a central counterparty and leaves each member's net position.
//! * Multilateral setoff ([`setoff`]) discharges obligations along cycles by a
//!   maximum circulation, optionally topped up with an external fund `δ`.
//!
//! [`settlement`] executes individual settlement cycles over obligations and
//! acceptances, [`analysis`] sweeps fund sizes and studies liquidity
//! providers, and [`io`] reads and writes ledgers and reports.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod graph;
pub mod io;
pub mod netting;
pub mod scenarios;
pub mod setoff;
pub mod settlement;

pub use error::{Error, Result};
pub use graph::{
    aggregate, balance_vector, positive_part_norm, validate, Amount, BalanceVector, Kind, KindSet,
    NodeId, Obligation, ObligationGraph, Oid, Violation,
};
pub use netting::{net_global, net_partitioned, net_residual, NettingOutcome, NettingSetPartition};
pub use setoff::{full_clear_threshold, setoff_clear, ClearingResult};
pub use settlement::{
    classify_cycle, execute_cycle, find_cycles, settle_to_fixpoint, CycleClass, SettlementCycle,
    SettlementKind,
};
