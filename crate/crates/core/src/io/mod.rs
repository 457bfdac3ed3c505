//! File formats: ledger CSV in, JSON/CSV/SVG reports out.

mod ledger;
mod report;

pub use ledger::{
    emit_ledger, format_amount, parse_amount, parse_ledger, parse_ledger_str, write_ledger, HEADER,
};
pub use report::{
    curve_csv, curve_svg, to_json, ClearingReport, CurvePoint, CycleRow, ExitDocument, Fraction,
    LpDocument, NettingReport, RecordRow, RegimeReport, SettlementReport, Stats, SweepDocument,
    ValidationReport,
};
