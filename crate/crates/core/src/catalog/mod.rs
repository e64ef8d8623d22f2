//! The six-dimensional classification table, the type bound from the
//! filtration, exclusion replays, the Iwasawa connection and the
//! eight-dimensional counterexample.

mod exclusions;
mod special;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{betti, symplectic_decision};
use crate::error::{Error, Result};
use crate::gcs::{check_ansatz, GcsReport, PureSpinorAnsatz};
use crate::nilalg::{parse_form_expr, NilAlgebra};

pub use exclusions::{exclusion_cases, replay_exclusion, AlgebraReplay, CaseId, ExclusionCase, ReplayOutcome, ReplayReport};
pub use special::{iwasawa_demo, verify_8d, EightDReport, IwasawaReport, IwasawaStep, EIGHT_DIM_ALGEBRA, EIGHT_DIM_LEAF};

const TABLE_DATA: &str = include_str!("../../data/table1.json");

/// Witness types in column order.
pub const TYPES: [usize; 4] = [3, 2, 1, 0];

/// One row of the table: an algebra, its first two Betti numbers, and a
/// witness form (or none) for each type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    #[serde(rename = "algebra")]
    pub tuple_text: String,
    #[serde(rename = "json")]
    pub algebra_json: serde_json::Value,
    pub b1: usize,
    pub b2: usize,
    pub witnesses: BTreeMap<usize, Option<String>>,
}

impl CatalogEntry {
    pub fn algebra(&self) -> Result<NilAlgebra> {
        self.tuple_text.parse()
    }

    pub fn witness(&self, kind: usize) -> Option<&str> {
        self.witnesses.get(&kind).and_then(|w| w.as_deref())
    }
}

#[derive(Deserialize)]
struct TableFile {
    rows: Vec<CatalogEntry>,
}

/// The 34 rows, in table order.
pub fn table1() -> &'static [CatalogEntry] {
    static TABLE: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let file: TableFile = serde_json::from_str(TABLE_DATA).expect("embedded table is valid JSON");
        file.rows
    })
}

pub fn find_entry(tuple_text: &str) -> Option<&'static CatalogEntry> {
    let key: String = tuple_text.chars().filter(|c| !c.is_whitespace()).collect();
    table1().iter().find(|e| e.tuple_text == key)
}

/// The filtration data behind the type bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeBound {
    pub nil_index: usize,
    /// Least `j > 0` with `dim V_{i+1}/V_i = 1` for `j ≤ i < nil`.
    pub jump_start: Option<usize>,
    pub bound: usize,
}

pub fn type_bound(g: &NilAlgebra) -> TypeBound {
    let n = g.dim() / 2;
    let dims = g.filtration().dims();
    let s = dims.len();
    // quotient[i] = dim V_{i+1}/V_i for i = 1..s-1
    let step = |i: usize| dims[i] - dims[i - 1];
    let jump_start = (1..s).find(|&j| (j..s).all(|i| step(i) == 1));
    let bound = match jump_start {
        Some(j) => n.min((2 * n + j).saturating_sub(s + 1)),
        None => n,
    };
    TypeBound { nil_index: s, jump_start, bound }
}

/// Largest type not ruled out by the filtration jumps.
pub fn max_type_bound(g: &NilAlgebra) -> usize {
    type_bound(g).bound
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellReport {
    #[serde(rename = "type")]
    pub kind: usize,
    pub text: String,
    pub passed: bool,
    pub report: Option<GcsReport>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowReport {
    pub algebra: String,
    pub betti: (usize, usize),
    pub expected_betti: (usize, usize),
    pub bound: usize,
    pub cells: Vec<CellReport>,
    pub failures: Vec<String>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cells.iter().all(|c| c.passed)
    }
}

/// Parses a witness cell as a structured ansatz. Bare 2-forms stand for
/// `exp(iω)`.
pub fn witness_ansatz(text: &str, g: &NilAlgebra) -> Result<PureSpinorAnsatz> {
    PureSpinorAnsatz::from_expr(&parse_form_expr(text, g.dim())?)
}

fn verify_cell(kind: usize, text: &str, g: &NilAlgebra, bound: usize) -> CellReport {
    let mut failures = Vec::new();
    let report = match witness_ansatz(text, g).and_then(|a| check_ansatz(&a, g)) {
        Ok(r) => Some(r),
        Err(e) => {
            failures.push(format!("cannot check: {e}"));
            None
        }
    };
    if let Some(r) = &report {
        if !r.is_gcs() {
            failures.push(format!("verdict {}: {}", r.verdict, r.failures.join("; ")));
        }
        if r.kind != kind {
            failures.push(format!("type {} in the type-{kind} column", r.kind));
        }
        if !r.closed {
            failures.push("not closed".into());
        }
        failures.extend(r.failures.iter().filter(|f| f.contains("disagree")).cloned());
    }
    if kind > bound {
        failures.push(format!("type {kind} exceeds the bound {bound}"));
    }
    CellReport { kind, text: text.to_string(), passed: failures.is_empty(), report, failures }
}

/// Checks the Betti columns and every witness of one row.
pub fn verify_entry(e: &CatalogEntry) -> Result<RowReport> {
    let g = e.algebra()?;
    let mut failures = Vec::new();
    let from_json = NilAlgebra::from_json(&e.algebra_json.to_string())?;
    if from_json != g {
        failures.push("JSON algebra differs from the compact string".into());
    }
    let b = betti(&g);
    let computed = (b.b(1), b.b(2));
    if computed != (e.b1, e.b2) {
        failures.push(format!("Betti numbers {computed:?}, table says {:?}", (e.b1, e.b2)));
    }
    let bound = max_type_bound(&g);
    let cells = TYPES
        .iter()
        .filter_map(|&k| e.witness(k).map(|text| verify_cell(k, text, &g, bound)))
        .collect();
    Ok(RowReport { algebra: e.tuple_text.clone(), betti: computed, expected_betti: (e.b1, e.b2), bound, cells, failures })
}

/// Rows with a witness for each combination of the complex and
/// symplectic columns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WitnessCounts {
    pub complex: usize,
    pub symplectic: usize,
    pub both: usize,
    pub complex_only: usize,
    pub symplectic_only: usize,
    pub neither: usize,
}

pub fn witness_counts(rows: &[CatalogEntry]) -> WitnessCounts {
    let mut c = WitnessCounts::default();
    for e in rows {
        let (cx, sp) = (e.witness(3).is_some(), e.witness(0).is_some());
        c.complex += cx as usize;
        c.symplectic += sp as usize;
        match (cx, sp) {
            (true, true) => c.both += 1,
            (true, false) => c.complex_only += 1,
            (false, true) => c.symplectic_only += 1,
            (false, false) => c.neither += 1,
        }
    }
    c
}

/// How a missing type-1 or type-2 witness is accounted for.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DashCoverage {
    pub algebra: String,
    #[serde(rename = "type")]
    pub kind: usize,
    pub cases: Vec<CaseId>,
}

/// Maps each type-1/type-2 dash to the exclusion cases covering it, and
/// reports cases that claim a cell the table fills.
pub fn dash_coverage() -> Result<(Vec<DashCoverage>, Vec<String>)> {
    let cases = exclusion_cases();
    let mut out = Vec::new();
    let mut problems = Vec::new();
    for e in table1() {
        let g = e.algebra()?;
        let bound = max_type_bound(&g);
        for kind in [2, 1] {
            let covering: Vec<CaseId> = cases
                .iter()
                .filter(|c| c.excluded_type == kind && c.algebras.iter().any(|a| *a == e.tuple_text))
                .map(|c| c.id)
                .collect();
            if e.witness(kind).is_none() {
                if covering.len() != 1 {
                    problems.push(format!("{} type {kind}: covered by {covering:?}", e.tuple_text));
                }
                if covering == [CaseId::Thm38] && bound >= kind {
                    problems.push(format!("{} type {kind}: bound {bound} does not exclude it", e.tuple_text));
                }
                out.push(DashCoverage { algebra: e.tuple_text.clone(), kind, cases: covering });
            } else if !covering.is_empty() {
                problems.push(format!("{} type {kind}: table has a witness but {covering:?} excludes it", e.tuple_text));
            }
        }
    }
    Ok((out, problems))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymplecticAgreement {
    pub algebra: String,
    pub table: bool,
    pub decided: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub rows: Vec<RowReport>,
    pub counts: WitnessCounts,
    pub rows_with_witness: usize,
    pub symplectic: Vec<SymplecticAgreement>,
    pub dashes: Vec<DashCoverage>,
    pub failures: Vec<String>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn rows_passed(&self) -> usize {
        self.rows.iter().filter(|r| r.passed()).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let cells: Vec<String> = TYPES
                .iter()
                .map(|k| match r.cells.iter().find(|c| c.kind == *k) {
                    Some(c) if c.passed => format!("t{k}:ok"),
                    Some(_) => format!("t{k}:FAIL"),
                    None => format!("t{k}:-"),
                })
                .collect();
            out.push_str(&format!(
                "{:<26} b=({},{}) bound={} {} {}\n",
                r.algebra,
                r.betti.0,
                r.betti.1,
                r.bound,
                cells.join(" "),
                if r.passed() { "PASS" } else { "FAIL" }
            ));
        }
        let c = &self.counts;
        out.push_str(&format!(
            "rows passed: {}/{}\ncomplex {} symplectic {} both {} complex-only {} symplectic-only {} neither {}\n",
            self.rows_passed(),
            self.rows.len(),
            c.complex,
            c.symplectic,
            c.both,
            c.complex_only,
            c.symplectic_only,
            c.neither
        ));
        let agree = self.symplectic.iter().filter(|s| s.table == s.decided).count();
        out.push_str(&format!("symplectic decision agrees: {agree}/{}\n", self.symplectic.len()));
        out.push_str(&format!("dashes covered: {}\n", self.dashes.len()));
        for f in &self.failures {
            out.push_str(&format!("failure: {f}\n"));
        }
        out
    }
}

/// Verifies every row, cross-tabulates the witnesses and checks the
/// symplectic column against the exact decision procedure.
pub fn verify_table() -> Result<TableReport> {
    let entries = table1();
    let results: Vec<Result<(RowReport, SymplecticAgreement)>> = entries
        .par_iter()
        .map(|e| {
            let row = verify_entry(e)?;
            let decided = symplectic_decision(&e.algebra()?)?.is_yes();
            let agreement = SymplecticAgreement { algebra: e.tuple_text.clone(), table: e.witness(0).is_some(), decided };
            Ok((row, agreement))
        })
        .collect();
    let mut rows = Vec::new();
    let mut symplectic = Vec::new();
    for r in results {
        let (row, s) = r?;
        rows.push(row);
        symplectic.push(s);
    }
    let mut failures = Vec::new();
    for r in rows.iter().filter(|r| !r.passed()) {
        let mut msgs = r.failures.clone();
        for c in r.cells.iter().filter(|c| !c.passed) {
            msgs.extend(c.failures.iter().map(|f| format!("type {} `{}`: {f}", c.kind, c.text)));
        }
        failures.push(format!("{}: {}", r.algebra, msgs.join("; ")));
    }
    for s in symplectic.iter().filter(|s| s.table != s.decided) {
        failures.push(format!("{}: symplectic decision {} but table {}", s.algebra, s.decided, s.table));
    }
    let rows_with_witness = rows.iter().filter(|r| r.cells.iter().any(|c| c.passed)).count();
    if rows_with_witness != rows.len() {
        failures.push(format!("only {rows_with_witness}/{} rows carry a verified witness", rows.len()));
    }
    let (dashes, problems) = dash_coverage()?;
    failures.extend(problems);
    Ok(TableReport { rows, counts: witness_counts(entries), rows_with_witness, symplectic, dashes, failures })
}

pub(crate) fn catalog_error(msg: impl Into<String>) -> Error {
    Error::ValidationFailed(msg.into())
}
