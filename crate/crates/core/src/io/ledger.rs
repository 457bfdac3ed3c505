//! Ledger CSV files.
//!
//! Columns `oid,debtor,creditor,amount,kind` are required, `tag`,
//! `attested` and `currency` are optional, in any order. Amounts are decimal
//! major units with at most two fraction digits and are converted to minor
//! units without passing through floating point.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result, RowDiagnostic};
use crate::graph::{validate, Amount, Kind, NodeId, Obligation, ObligationGraph, Oid};

pub const HEADER: [&str; 7] = [
    "oid", "debtor", "creditor", "amount", "kind", "tag", "attested",
];
const REQUIRED: [&str; 5] = ["oid", "debtor", "creditor", "amount", "kind"];

/// Parses `"1234.5"` or `"-0.07"` into minor units.
pub fn parse_amount(text: &str) -> std::result::Result<Amount, String> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(whole) || (body.contains('.') && !digits(frac)) {
        return Err(format!("malformed amount {text:?}"));
    }
    if frac.len() > 2 {
        return Err(format!("amount {text:?} has more than 2 fraction digits"));
    }
    let overflow = || format!("amount {text:?} out of range");
    let whole: Amount = whole.parse().map_err(|_| overflow())?;
    let cents: Amount = format!("{frac:0<2}").parse().expect("two ascii digits");
    let minor = whole
        .checked_mul(100)
        .and_then(|w| w.checked_add(cents))
        .ok_or_else(overflow)?;
    Ok(if negative { -minor } else { minor })
}

/// Minor units as a decimal with exactly two fraction digits.
pub fn format_amount(minor: Amount) -> String {
    let sign = if minor < 0 { "-" } else { "" };
    let abs = minor.unsigned_abs();
    format!("{sign}{}.{:02}", abs / 100, abs % 100)
}

pub fn parse_ledger(path: impl AsRef<Path>) -> Result<ObligationGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_ledger_str(&text, &path.display().to_string())
}

/// Parses ledger text; `source` names the input in diagnostics. Every
/// malformed row is reported, not only the first.
pub fn parse_ledger_str(text: &str, source: &str) -> Result<ObligationGraph> {
    let fail = |diagnostics| Error::Ledger {
        path: source.to_string(),
        diagnostics,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::None)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().all(str::is_empty) {
        return Err(fail(vec![RowDiagnostic {
            row: 1,
            message: "missing header row".into(),
        }]));
    }
    let column: BTreeMap<&str, usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| (h.trim(), i))
        .collect();
    let missing: Vec<&str> = REQUIRED
        .iter()
        .copied()
        .filter(|c| !column.contains_key(c))
        .collect();
    if !missing.is_empty() {
        let message = format!("header lacks column(s) {}", missing.join(", "));
        return Err(fail(vec![RowDiagnostic { row: 1, message }]));
    }

    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    let mut seen: BTreeMap<Oid, usize> = BTreeMap::new();
    let mut currencies = BTreeSet::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let field = |name: &str| {
            column
                .get(name)
                .and_then(|&i| row.get(i))
                .unwrap_or("")
                .trim()
        };
        if let Some(c) = Some(field("currency")).filter(|c| !c.is_empty()) {
            currencies.insert(c.to_string());
        }
        match parse_row(&field) {
            Ok(record) => {
                if let Some(first) = seen.insert(record.oid.clone(), line) {
                    let message = format!("duplicate oid {} (first on row {first})", record.oid);
                    diagnostics.push(RowDiagnostic { row: line, message });
                } else if let Some(v) =
                    validate(&ObligationGraph::new(vec![record.clone()])).first()
                {
                    diagnostics.push(RowDiagnostic {
                        row: line,
                        message: v.problem.clone(),
                    });
                } else {
                    records.push(record);
                }
            }
            Err(message) => diagnostics.push(RowDiagnostic { row: line, message }),
        }
    }
    if currencies.len() > 1 {
        let list: Vec<_> = currencies.into_iter().collect();
        diagnostics.push(RowDiagnostic {
            row: 1,
            message: format!("mixed currencies {}", list.join(", ")),
        });
    }
    if diagnostics.is_empty() {
        Ok(ObligationGraph::new(records))
    } else {
        diagnostics.sort_by_key(|d| d.row);
        Err(fail(diagnostics))
    }
}

fn parse_row<'a>(field: &impl Fn(&str) -> &'a str) -> std::result::Result<Obligation, String> {
    let amount = parse_amount(field("amount"))?;
    let kind = match field("kind") {
        "O" => Kind::Obligation,
        "A" => Kind::Acceptance,
        other => return Err(format!("unknown kind {other:?}, expected O or A")),
    };
    let attested = match field("attested") {
        "" | "1" => true,
        "0" => false,
        other => return Err(format!("attested must be 0 or 1, got {other:?}")),
    };
    let tag = Some(field("tag"))
        .filter(|t| !t.is_empty())
        .map(str::to_string);
    Ok(Obligation {
        oid: Oid::new(field("oid")),
        debtor: NodeId::new(field("debtor")),
        creditor: NodeId::new(field("creditor")),
        amount,
        kind,
        tag,
        attested,
    })
}

/// Canonical CSV: fixed header, records in oid order, LF line endings.
pub fn emit_ledger(graph: &ObligationGraph) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(HEADER).expect("write to memory");
    for r in graph.records() {
        let amount = format_amount(r.amount);
        let attested = if r.attested { "1" } else { "0" };
        let row = [
            r.oid.as_str(),
            r.debtor.as_str(),
            r.creditor.as_str(),
            &amount,
            r.kind.code(),
            r.tag.as_deref().unwrap_or(""),
            attested,
        ];
        writer.write_record(row).expect("write to memory");
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("utf-8 fields")
}

pub fn write_ledger(path: impl AsRef<Path>, graph: &ObligationGraph) -> Result<()> {
    std::fs::write(path, emit_ledger(graph))?;
    Ok(())
}
