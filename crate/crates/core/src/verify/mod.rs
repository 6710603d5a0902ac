//! The reproduction suite: eleven checks of the symbolic and numerical
//! engines against published results and against each other. Shared by the
//! `acceptance` test target and the command line.

mod numeric;
mod symbolic;

use std::fmt;
use std::time::Instant;

use serde::Serialize;

/// Outcome of one check: a summary line on success, the first mismatch on
/// failure.
pub type Outcome = std::result::Result<String, String>;

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "closed-form loci"),
    (2, "j-invariants"),
    (3, "rational reconstruction in q"),
    (4, "only cyclic points for 14 <= r <= 22"),
    (5, "leading condition is a multiple of e"),
    (6, "engine equivalences"),
    (7, "commuting certificate"),
    (8, "numerical monodromy"),
    (9, "Calogero-Moser cross-checks"),
    (10, "Z_3 crystallographic system"),
    (11, "elliptic numerics"),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] criterion {:>2} {} ({:.1}s): {}", self.id, self.name, self.seconds, self.detail)
    }
}

/// Run one criterion; `seed` drives every random sample.
pub fn run_criterion(id: u8, seed: u64) -> CriterionResult {
    let name = CRITERIA.iter().find(|(i, _)| *i == id).map_or("unknown", |(_, n)| n);
    let start = Instant::now();
    let outcome = match id {
        1 => symbolic::closed_form_loci(),
        2 => symbolic::j_invariants(),
        3 => symbolic::reconstruction(),
        4 => symbolic::only_cyclic_grid(),
        5 => symbolic::leading_condition(),
        6 => symbolic::engine_equivalences(seed),
        7 => symbolic::commuting_certificate(),
        8 => numeric::monodromy(seed),
        9 => numeric::calogero_moser(seed),
        10 => numeric::crystallographic(seed),
        11 => numeric::elliptic(seed),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = match outcome {
        Ok(s) => (true, s),
        Err(s) => (false, s),
    };
    CriterionResult { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id, seed)).collect()
}

/// `Err` with the message unless `ok`.
fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn engine<T>(r: crate::error::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("engine error: {e}"))
}
