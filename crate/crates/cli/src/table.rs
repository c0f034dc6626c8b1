use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use solvlen::analytics::{g_lower_bound, h_lower_bound, x_n};
use solvlen::constructors::unitriangular;
use solvlen::families::{family_report, report, FamilyLabel, GroupReport};
use solvlen::series::derived_length;
use solvlen::{factorize, Factorization, GroupError};

use crate::CliError;

/// Largest degree a table row may have.
pub const TABLE_MAX_DEGREE: u64 = 1100;
/// Largest `n` for unitriangular rows, whatever the prime.
pub const MAX_UN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    /// The five G families.
    Theorem1a,
    /// The two odd-order H families.
    Theorem1b,
    /// Unitriangular groups U_n(F_p).
    Un,
    /// Iterated wreath products of S_2.
    Wd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Markdown,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub name: String,
    pub degree: usize,
    pub d: u64,
    pub order: Factorization,
    pub c: u64,
    pub expected_d: u64,
    pub expected_c: u64,
    /// Order as a product of the building blocks, e.g. `2^9·432`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
    /// `x_n` for the G rows, `y_n` for the H rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    /// `5 log_9 c - 2/3` or `2 log_7 c + 2/3`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub kind: TableKind,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    pub kind: TableKind,
    pub r_max: u32,
    pub p: u32,
}

fn factor(n: u64) -> Factorization {
    factorize(&BigUint::from(n)).expect("positive")
}

/// Order predicted by the building blocks, as text and as a factorization.
fn closed_form(label: FamilyLabel, r: u32) -> Option<(String, Factorization)> {
    let m = label.m(r);
    let (top, exp) = match label {
        FamilyLabel::Hm | FamilyLabel::H3m => (21u64, (m - 1) / 6),
        FamilyLabel::Wd => return None,
        _ => (432u64, (m - 1) / 8),
    };
    let block = match label {
        FamilyLabel::G2m => Some(2u64),
        FamilyLabel::G3m | FamilyLabel::H3m => Some(if label == FamilyLabel::G3m { 6 } else { 3 }),
        FamilyLabel::G4m => Some(24),
        FamilyLabel::G8m => Some(48),
        _ => None,
    };
    let power = |b: u64, e: u64| {
        if e == 1 {
            b.to_string()
        } else {
            format!("{b}^{e}")
        }
    };
    let mut text = String::new();
    let mut value = factor(top).pow(exp);
    if let Some(b) = block {
        text.push_str(&power(b, m));
        text.push('·');
        value = value.mul(&factor(b).pow(m));
    }
    text.push_str(&power(top, exp));
    Some((text, value))
}

fn family_row(label: FamilyLabel, r: u32) -> Result<TableRow, CliError> {
    let rep = family_report(label, r)?;
    let closed = closed_form(label, r);
    let (offset, bound) = match label {
        FamilyLabel::Hm | FamilyLabel::H3m => {
            let k = if label == FamilyLabel::Hm { 1.0 } else { 4.0 };
            (
                Some(2.0 * (k / 3.0f64).ln() / 7f64.ln() + 2.0 / 3.0),
                Some(h_lower_bound(rep.c)),
            )
        }
        FamilyLabel::Wd => (None, None),
        _ => (
            Some(x_n(label.k_coefficient().expect("G family"))?),
            Some(g_lower_bound(rep.c)),
        ),
    };
    let closed_ok = closed.as_ref().is_none_or(|(_, v)| *v == rep.order);
    Ok(row_from_report(
        rep,
        closed.map(|(t, _)| t),
        offset,
        bound,
        closed_ok,
    ))
}

fn row_from_report(
    rep: GroupReport,
    closed_form: Option<String>,
    offset: Option<f64>,
    bound: Option<f64>,
    closed_ok: bool,
) -> TableRow {
    TableRow {
        matches: rep.matches && closed_ok,
        name: rep.name,
        degree: rep.degree,
        d: rep.d,
        order: rep.order,
        c: rep.c,
        expected_d: rep.expected_d,
        expected_c: rep.expected_c,
        closed_form,
        offset,
        bound,
    }
}

fn un_row(p: u32, n: usize) -> Result<TableRow, CliError> {
    let u = unitriangular(p, n)?;
    let expected_c = (n * (n - 1) / 2) as u64;
    let expected_d = (usize::BITS - (n - 1).leading_zeros()) as u64;
    let rep = report(&format!("U_{n}(F_{p})"), &u, expected_c, expected_d)?;
    debug_assert_eq!(derived_length(&u)? as u64, rep.d);
    Ok(row_from_report(
        rep,
        Some(format!("{p}^{expected_c}")),
        None,
        None,
        true,
    ))
}

fn check_degree(degree: u64) -> Result<(), CliError> {
    if degree > TABLE_MAX_DEGREE {
        return Err(CliError::Infeasible(format!(
            "a row of degree {degree} exceeds the table cutoff TABLE_MAX_DEGREE = {TABLE_MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// Rows in a fixed order, computed in parallel.
pub fn cmd_table(opts: TableOptions) -> Result<Table, CliError> {
    if opts.r_max == 0 {
        return Err(CliError::Usage("r_max must be at least 1".into()));
    }
    type Job = Box<dyn Fn() -> Result<TableRow, CliError> + Send + Sync>;
    let mut jobs: Vec<Job> = Vec::new();
    match opts.kind {
        TableKind::Theorem1a | TableKind::Theorem1b => {
            let labels: &[FamilyLabel] = if opts.kind == TableKind::Theorem1a {
                &FamilyLabel::G_FAMILIES
            } else {
                &FamilyLabel::H_FAMILIES
            };
            for r in 1..=opts.r_max {
                for &label in labels {
                    check_degree(label.degree(r))?;
                    jobs.push(Box::new(move || family_row(label, r)));
                }
            }
        }
        TableKind::Wd => {
            for d in 1..=opts.r_max {
                check_degree(FamilyLabel::Wd.degree(d))?;
                jobs.push(Box::new(move || family_row(FamilyLabel::Wd, d)));
            }
        }
        TableKind::Un => {
            let n_max = opts.r_max as usize;
            if !(2..=MAX_UN).contains(&n_max) {
                return Err(CliError::Infeasible(format!(
                    "n = {n_max} is outside 2..={MAX_UN} (cutoff MAX_UN)"
                )));
            }
            let degree = (opts.p as u64)
                .checked_pow(n_max as u32)
                .unwrap_or(u64::MAX);
            check_degree(degree)?;
            let p = opts.p;
            for n in 2..=n_max {
                jobs.push(Box::new(move || un_row(p, n)));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|job| job())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Table {
        kind: opts.kind,
        rows,
    })
}

fn order_text(order: &Factorization, decimal: bool) -> String {
    if decimal {
        order.value().to_string()
    } else {
        order.to_string()
    }
}

fn float(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.3}")).unwrap_or_default()
}

fn headers(kind: TableKind) -> Vec<&'static str> {
    match kind {
        TableKind::Theorem1a => vec![
            "G_n",
            "d",
            "order",
            "closed form",
            "c",
            "x_n",
            "5 log_9 c - 2/3",
            "match",
        ],
        TableKind::Theorem1b => vec![
            "H_n",
            "d",
            "order",
            "closed form",
            "c",
            "y_n",
            "2 log_7 c + 2/3",
            "match",
        ],
        TableKind::Un => vec![
            "group",
            "d",
            "order",
            "c",
            "n(n-1)/2",
            "floor(log2(n-1)) + 1",
            "match",
        ],
        TableKind::Wd => vec!["W_d", "d", "order", "c", "2^d - 1", "match"],
    }
}

fn cells(kind: TableKind, row: &TableRow, decimal: bool) -> Vec<String> {
    let order = order_text(&row.order, decimal);
    let ok = if row.matches { "yes" } else { "NO" }.to_string();
    match kind {
        TableKind::Theorem1a | TableKind::Theorem1b => vec![
            row.name.clone(),
            row.d.to_string(),
            order,
            row.closed_form.clone().unwrap_or_default(),
            row.c.to_string(),
            float(row.offset),
            float(row.bound),
            ok,
        ],
        TableKind::Un => vec![
            row.name.clone(),
            row.d.to_string(),
            order,
            row.c.to_string(),
            row.expected_c.to_string(),
            row.expected_d.to_string(),
            ok,
        ],
        TableKind::Wd => vec![
            row.name.clone(),
            row.d.to_string(),
            order,
            row.c.to_string(),
            row.expected_c.to_string(),
            ok,
        ],
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(table: &Table, format: Format, decimal: bool) -> String {
    let head = headers(table.kind);
    let body: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| cells(table.kind, r, decimal))
        .collect();
    let mut out = String::new();
    match format {
        Format::Markdown => {
            let _ = writeln!(out, "| {} |", head.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(head.len()));
            for row in &body {
                let _ = writeln!(out, "| {} |", row.join(" | "));
            }
        }
        Format::Csv => {
            let _ = writeln!(
                out,
                "{}",
                head.iter()
                    .map(|h| csv_field(h))
                    .collect::<Vec<_>>()
                    .join(",")
            );
            for row in &body {
                let _ = writeln!(
                    out,
                    "{}",
                    row.iter()
                        .map(|c| csv_field(c))
                        .collect::<Vec<_>>()
                        .join(",")
                );
            }
        }
        Format::Json => {
            out = serde_json::to_string_pretty(table).expect("tables serialize");
            out.push('\n');
        }
    }
    out
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Group(e)
    }
}
