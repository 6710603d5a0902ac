use rayon::prelude::*;
use serde::Serialize;

use super::quantity::{JValue, Quantity};
use super::solve::{Classification, LocusBranch};
use super::{solve_locus, CurveFamily};
use crate::error::Result;
use crate::exact::Var;
use crate::operator::global::check_gaps;

/// One branch of one grid cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridRow {
    pub r: i64,
    pub q: i64,
    pub branch: usize,
    pub classification: Classification,
    pub c_over_e2: String,
    pub g2_relation: String,
    pub g3_relation: String,
    pub j: String,
    pub verified: bool,
}

/// All branches of one `(q, r)` cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridCell {
    pub r: i64,
    pub q: i64,
    pub curve: CurveFamily,
    pub rows: Vec<GridRow>,
}

impl GridCell {
    /// No consistent branch other than the cyclic point.
    pub fn only_cyclic(&self) -> bool {
        self.rows
            .iter()
            .all(|row| matches!(row.classification, Classification::CyclicPoint | Classification::Inconsistent))
    }

    /// The cyclic point is present and verified.
    pub fn cyclic_verified(&self) -> bool {
        self.rows.iter().any(|row| row.classification == Classification::CyclicPoint && row.verified)
    }
}

fn relation(b: &LocusBranch, v: Var) -> String {
    if let Some(x) = b.assignments.get(&v) {
        return format!("{v} = {x}");
    }
    match &b.square_relation {
        Some((w, s)) if *w == v => format!("{v}^2 = {s}"),
        _ => "free".into(),
    }
}

fn row(r: i64, q: i64, idx: usize, b: &LocusBranch) -> GridRow {
    let c_over_e2 = b.quantity(Quantity::COverE2).map_or_else(|| "-".into(), |x| x.to_string());
    let (g2_relation, g3_relation) = match b.curve {
        CurveFamily::Generic => (relation(b, Var::G2), relation(b, Var::G3)),
        CurveFamily::Cuspidal => ("g2 = 0".into(), "g3 = 0".into()),
        CurveFamily::Nodal => {
            let t = relation(b, Var::T);
            (format!("g2 = 3*t^2; {t}"), "g3 = t^3".into())
        }
    };
    let j = if b.is_consistent() { b.j() } else { None };
    let j = match j {
        Some(JValue::Infinite) => "infinite".into(),
        Some(JValue::Finite(x)) => x.to_string(),
        None => "-".into(),
    };
    GridRow {
        r,
        q,
        branch: idx,
        classification: b.classification,
        c_over_e2,
        g2_relation,
        g3_relation,
        j,
        verified: b.verified,
    }
}

/// Solve one cell.
pub fn grid_cell(q: i64, r: i64, curve: CurveFamily) -> Result<GridCell> {
    let (_, branches) = solve_locus(q, r, curve)?;
    let rows = branches.iter().enumerate().map(|(i, b)| row(r, q, i, b)).collect();
    Ok(GridCell { r, q, curve, rows })
}

/// Valid gap pairs with `r` in `r_range` and `r <= q <= r + q_span`, in
/// `(r, q)` order.
pub fn grid_pairs(r_range: std::ops::RangeInclusive<i64>, q_span: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for r in r_range {
        for q in r..=r + q_span {
            if check_gaps(q, r).is_ok() {
                out.push((r, q));
            }
        }
    }
    out
}

/// Solve every valid cell in parallel; results come back in `(r, q)` order.
pub fn scan_grid(r_range: std::ops::RangeInclusive<i64>, q_span: i64, curve: CurveFamily) -> Result<Vec<GridCell>> {
    grid_pairs(r_range, q_span).par_iter().map(|&(r, q)| grid_cell(q, r, curve)).collect()
}

pub const CSV_HEADER: &str = "r,q,branch,classification,c/e^2,g2_relation,g3_relation,j,verified";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(cells: &[GridCell]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in cells.iter().flat_map(|c| &c.rows) {
        let fields = [
            row.r.to_string(),
            row.q.to_string(),
            row.branch.to_string(),
            row.classification.to_string(),
            row.c_over_e2.clone(),
            row.g2_relation.clone(),
            row.g3_relation.clone(),
            row.j.clone(),
            row.verified.to_string(),
        ];
        out.push_str(&fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(cells: &[GridCell]) -> String {
    serde_json::to_string_pretty(cells).expect("grid cells serialize")
}
