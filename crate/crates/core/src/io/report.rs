//! JSON, CSV and SVG renderings of results.
//!
//! Money is written as integer minor units. Ratios are strings with six
//! fraction digits so that reports compare byte for byte across platforms.
//! Keys follow struct declaration order and maps are sorted.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::{ExitCounterfactual, LpReport, SweepReport};
use crate::error::Result;
use crate::graph::{balance_vector, Amount, KindSet, Obligation, ObligationGraph, Violation};
use crate::netting::{NettingOutcome, SetOutcome};
use crate::setoff::ClearingResult;
use crate::settlement::{CycleClass, ExecutedCycle};

/// A ratio rendered as `"0.123457"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fraction(pub f64);

impl Serialize for Fraction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:.6}", self.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecordRow {
    pub oid: String,
    pub debtor: String,
    pub creditor: String,
    pub amount: Amount,
    pub kind: &'static str,
    pub tag: Option<String>,
    pub attested: bool,
}

impl From<&Obligation> for RecordRow {
    fn from(r: &Obligation) -> Self {
        RecordRow {
            oid: r.oid.to_string(),
            debtor: r.debtor.to_string(),
            creditor: r.creditor.to_string(),
            amount: r.amount,
            kind: r.kind.code(),
            tag: r.tag.clone(),
            attested: r.attested,
        }
    }
}

fn rows(graph: &ObligationGraph) -> Vec<RecordRow> {
    graph.records().iter().map(RecordRow::from).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub nodes: usize,
    pub records: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(graph: &ObligationGraph, violations: Vec<Violation>) -> Self {
        ValidationReport {
            valid: violations.is_empty(),
            nodes: graph.nodes().len(),
            records: graph.len(),
            violations,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NettingReport {
    pub delta: Amount,
    pub required_total: Amount,
    pub gross_total: Amount,
    pub fund_used: Amount,
    pub residual_total: Amount,
    pub sets: Vec<SetOutcome>,
    pub post_novation: Vec<RecordRow>,
}

impl NettingReport {
    pub fn new(outcome: &NettingOutcome, delta: Amount) -> Self {
        NettingReport {
            delta,
            required_total: outcome.required_total,
            gross_total: outcome.gross_total,
            fund_used: outcome.fund_used,
            residual_total: outcome.residual(),
            sets: outcome.sets.clone(),
            post_novation: rows(&outcome.post_novation_graph),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClearingReport {
    pub delta: Amount,
    pub discharged_total: Amount,
    pub residual_total: Amount,
    pub fund_used: Amount,
    pub objective: Amount,
    pub allocation: BTreeMap<String, Amount>,
    pub residual: Vec<RecordRow>,
}

impl From<&ClearingResult> for ClearingReport {
    fn from(r: &ClearingResult) -> Self {
        ClearingReport {
            delta: r.delta,
            discharged_total: r.discharged_total,
            residual_total: r.residual_total,
            fund_used: r.fund_used,
            objective: r.objective,
            allocation: r
                .allocation
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            residual: rows(&r.residual_graph),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvePoint {
    pub delta: Amount,
    pub netting_residual: Amount,
    pub setoff_residual: Amount,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegimeReport {
    pub a: Amount,
    pub b_end: Option<Amount>,
    pub c_end: Amount,
    pub d_start: Amount,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepDocument {
    pub tolerance: Amount,
    pub regimes: RegimeReport,
    pub points: Vec<CurvePoint>,
}

impl From<&SweepReport> for SweepDocument {
    fn from(r: &SweepReport) -> Self {
        let g = r.regimes;
        SweepDocument {
            tolerance: r.tolerance,
            regimes: RegimeReport {
                a: g.a,
                b_end: g.b_end,
                c_end: g.c_end,
                d_start: g.d_start,
            },
            points: r
                .rows()
                .map(|(delta, n, s)| CurvePoint {
                    delta,
                    netting_residual: n,
                    setoff_residual: s,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleRow {
    pub nodes: Vec<String>,
    pub legs: Vec<String>,
    pub amount: Amount,
    pub class: String,
}

impl From<&ExecutedCycle> for CycleRow {
    fn from(c: &ExecutedCycle) -> Self {
        let class = match c.class {
            Some(CycleClass::Mechanism(k)) => format!("{k:?}").to_lowercase(),
            Some(CycleClass::Composite) => "composite".into(),
            None => "unclassified".into(),
        };
        CycleRow {
            nodes: c.nodes.iter().map(ToString::to_string).collect(),
            legs: c.legs.iter().map(ToString::to_string).collect(),
            amount: c.amount,
            class,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SettlementReport {
    pub max_len: usize,
    pub cycles: Vec<CycleRow>,
    pub remaining: Vec<RecordRow>,
}

impl SettlementReport {
    pub fn new(max_len: usize, log: &[ExecutedCycle], remaining: &ObligationGraph) -> Self {
        SettlementReport {
            max_len,
            cycles: log.iter().map(CycleRow::from).collect(),
            remaining: rows(remaining),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LpDocument {
    pub modulus: Amount,
    pub nodes: usize,
    pub lp_obligation_ids: Vec<String>,
    pub lp_firm_ids: Vec<String>,
    pub lp_liquidity_share: Fraction,
    pub path_length: Fraction,
    pub adjusted_contribution: Fraction,
}

impl LpDocument {
    pub fn new(r: &LpReport, graph: &ObligationGraph) -> Self {
        LpDocument {
            modulus: r.modulus,
            nodes: graph.nodes().len(),
            lp_obligation_ids: r
                .lp_obligation_ids
                .iter()
                .map(ToString::to_string)
                .collect(),
            lp_firm_ids: r.lp_firm_ids.iter().map(ToString::to_string).collect(),
            lp_liquidity_share: Fraction(r.lp_liquidity_share),
            path_length: Fraction(r.path_length),
            adjusted_contribution: Fraction(r.adjusted_contribution),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExitDocument {
    pub delta: Amount,
    pub firms: Vec<String>,
    pub cleared_before: Amount,
    pub cleared_after: Amount,
    pub drop_fraction: Fraction,
    pub debt_share_removed: Fraction,
}

impl ExitDocument {
    pub fn new<'a>(
        e: &ExitCounterfactual,
        firms: impl IntoIterator<Item = &'a crate::graph::NodeId>,
        delta: Amount,
    ) -> Self {
        ExitDocument {
            delta,
            firms: firms.into_iter().map(ToString::to_string).collect(),
            cleared_before: e.cleared_before,
            cleared_after: e.cleared_after,
            drop_fraction: Fraction(e.drop_fraction),
            debt_share_removed: Fraction(e.debt_share_removed),
        }
    }
}

/// Summary statistics of a ledger.
#[derive(Clone, Debug, Serialize)]
pub struct Stats {
    pub nodes: usize,
    pub records: usize,
    pub obligations: usize,
    pub acceptances: usize,
    pub obligation_value: Amount,
    pub acceptance_value: Amount,
    /// `‖b⁺‖` over obligations: the netting requirement and the fund that
    /// clears everything.
    pub positive_part_norm: Amount,
    pub max_degree: usize,
    pub mean_degree: Fraction,
}

impl Stats {
    pub fn of(graph: &ObligationGraph) -> Self {
        let mut degree: BTreeMap<&str, usize> =
            graph.nodes().iter().map(|n| (n.as_str(), 0)).collect();
        for r in graph.records() {
            *degree.entry(r.debtor.as_str()).or_default() += 1;
            *degree.entry(r.creditor.as_str()).or_default() += 1;
        }
        let nodes = graph.nodes().len();
        let obligations = graph.records().iter().filter(|r| r.is_obligation()).count();
        Stats {
            nodes,
            records: graph.len(),
            obligations,
            acceptances: graph.len() - obligations,
            obligation_value: graph.total(KindSet::OBLIGATIONS),
            acceptance_value: graph.total(KindSet::ACCEPTANCES),
            positive_part_norm: balance_vector(graph, KindSet::OBLIGATIONS).positive_part_norm(),
            max_degree: degree.values().copied().max().unwrap_or(0),
            mean_degree: Fraction(if nodes == 0 {
                0.0
            } else {
                2.0 * graph.len() as f64 / nodes as f64
            }),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// `delta,netting_residual,setoff_residual` table in minor units.
pub fn curve_csv(report: &SweepReport) -> String {
    let mut out = String::from("delta,netting_residual,setoff_residual\n");
    for (d, n, s) in report.rows() {
        writeln!(out, "{d},{n},{s}").expect("write to string");
    }
    out
}

/// Line chart of both residual curves.
pub fn curve_svg(report: &SweepReport) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 48.0;
    let x_max = report.grid.last().copied().unwrap_or(0).max(1) as f64;
    let y_max = report
        .setoff_curve
        .iter()
        .chain(&report.netting_curve)
        .copied()
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let px = |d: Amount| PAD + d as f64 / x_max * (W - 2.0 * PAD);
    let py = |v: Amount| H - PAD - v as f64 / y_max * (H - 2.0 * PAD);
    let line = |curve: &[Amount]| {
        report
            .grid
            .iter()
            .zip(curve)
            .map(|(&d, &v)| format!("{:.2},{:.2}", px(d), py(v)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"##
    );
    let _ = writeln!(svg, r##"<rect width="{W}" height="{H}" fill="white"/>"##);
    let _ = writeln!(
        svg,
        r##"<path d="M{PAD},{PAD} V{b} H{r}" fill="none" stroke="black"/>"##,
        b = H - PAD,
        r = W - PAD
    );
    let _ = writeln!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##,
        line(&report.netting_curve)
    );
    let _ = writeln!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="2" stroke-dasharray="6 3"/>"##,
        line(&report.setoff_curve)
    );
    let _ = writeln!(
        svg,
        r##"<text x="{}" y="{}" font-size="12" text-anchor="middle">fund δ (max {})</text>"##,
        W / 2.0,
        H - 12.0,
        x_max
    );
    let _ = writeln!(
        svg,
        r##"<text x="12" y="{}" font-size="12" transform="rotate(-90 12 {})" text-anchor="middle">residual (max {})</text>"##,
        H / 2.0,
        H / 2.0,
        y_max
    );
    let _ = writeln!(
        svg,
        r##"<text x="{}" y="{}" font-size="12" fill="#1f77b4">netting N(δ)</text>"##,
        W - 180.0,
        PAD
    );
    let _ = writeln!(
        svg,
        r##"<text x="{}" y="{}" font-size="12" fill="#d62728">setoff S(δ)</text>"##,
        W - 180.0,
        PAD + 16.0
    );
    svg.push_str("</svg>\n");
    svg
}
