//! Run reports: typed rows, data-driven verdict rules and their evaluation.
//!
//! Every verdict is a [`Rule`] over the emitted rows, so any reader holding
//! the JSON can re-evaluate it with [`RunReport::recheck`].

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chart::Chart;
use crate::number::fmt_sig15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Empty,
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    /// Numeric view; booleans read as 0/1.
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Float(v) => Some(v),
            Cell::Bool(b) => Some(if b { 1.0 } else { 0.0 }),
            Cell::Empty | Cell::Text(_) => None,
        }
    }

    pub fn to_csv(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_sig15(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Cell::Empty => 0,
            Cell::Bool(_) => 1,
            Cell::Int(_) | Cell::Float(_) => 2,
            Cell::Text(_) => 3,
        }
    }

    /// Total order used for row keys.
    pub fn key_cmp(&self, other: &Cell) -> Ordering {
        match (self, other) {
            (Cell::Bool(a), Cell::Bool(b)) => a.cmp(b),
            (Cell::Int(a), Cell::Int(b)) => a.cmp(b),
            (Cell::Text(a), Cell::Text(b)) => a.cmp(b),
            (a, b) if a.rank() == 2 && b.rank() == 2 => {
                a.as_f64().unwrap_or(0.0).total_cmp(&b.as_f64().unwrap_or(0.0))
            }
            (a, b) => a.rank().cmp(&b.rank()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(i64::try_from(v).unwrap_or(i64::MAX))
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(i64::try_from(v).unwrap_or(i64::MAX))
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Near { tol: f64 },
}

impl Cmp {
    pub fn holds(self, a: f64, b: f64) -> bool {
        match self {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Gt => a > b,
            Cmp::Ge => a >= b,
            Cmp::Near { tol } => (a - b).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    /// Every selected row with a numeric `column` satisfies `column cmp value`.
    All { column: String, cmp: Cmp, value: f64 },
    /// Exactly one row is selected and it satisfies `column cmp value`.
    Single { column: String, cmp: Cmp, value: f64 },
    /// Every selected row with both columns numeric satisfies
    /// `left cmp right + slack`.
    Pair { left: String, cmp: Cmp, right: String, slack: f64 },
    /// `column` never decreases in row order.
    Nondecreasing { column: String },
    /// The number of selected rows satisfies `count cmp value`.
    Count { cmp: Cmp, value: f64 },
}

/// A verdict definition: a row filter (column equals cell) plus a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub name: String,
    #[serde(default)]
    pub filter: Vec<(String, Cell)>,
    #[serde(flatten)]
    pub check: Check,
}

impl Rule {
    pub fn new(name: &str, check: Check) -> Self {
        Self { name: name.into(), filter: Vec::new(), check }
    }

    pub fn when(mut self, column: &str, value: impl Into<Cell>) -> Self {
        self.filter.push((column.into(), value.into()));
        self
    }

    pub fn all(name: &str, column: &str, cmp: Cmp, value: f64) -> Self {
        Self::new(name, Check::All { column: column.into(), cmp, value })
    }

    pub fn single(name: &str, column: &str, cmp: Cmp, value: f64) -> Self {
        Self::new(name, Check::Single { column: column.into(), cmp, value })
    }

    pub fn pair(name: &str, left: &str, cmp: Cmp, right: &str, slack: f64) -> Self {
        Self::new(name, Check::Pair { left: left.into(), cmp, right: right.into(), slack })
    }

    pub fn nondecreasing(name: &str, column: &str) -> Self {
        Self::new(name, Check::Nondecreasing { column: column.into() })
    }

    pub fn count(name: &str, cmp: Cmp, value: f64) -> Self {
        Self::new(name, Check::Count { cmp, value })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    /// Rows the check looked at.
    pub checked: u64,
    pub failures: u64,
    /// Least favourable observed value: the extreme of the checked column, or
    /// the largest `|left - right|` for pair checks.
    pub worst: Option<f64>,
    pub rule: Rule,
}

/// Evaluates `rule` against `rows` laid out by `columns`. Checks that look at
/// no row fail, so a verdict never passes vacuously.
pub fn evaluate(rule: &Rule, columns: &[String], rows: &[Vec<Cell>]) -> Verdict {
    let col = |name: &str| columns.iter().position(|c| c == name);
    let filters: Option<Vec<(usize, &Cell)>> =
        rule.filter.iter().map(|(name, v)| col(name).map(|i| (i, v))).collect();
    let selected: Vec<&Vec<Cell>> = match &filters {
        Some(f) => rows.iter().filter(|r| f.iter().all(|(i, v)| r[*i] == **v)).collect(),
        None => Vec::new(),
    };
    let mut checked = 0u64;
    let mut failures = 0u64;
    let mut worst: Option<f64> = None;
    let mut track = |v: f64, prefer_low: bool| {
        worst = Some(match worst {
            None => v,
            Some(w) if prefer_low => w.min(v),
            Some(w) => w.max(v),
        });
    };
    let structural_ok = filters.is_some();
    match &rule.check {
        Check::All { column, cmp, value } | Check::Single { column, cmp, value } => {
            if let Some(i) = col(column) {
                for r in &selected {
                    let Some(v) = r[i].as_f64() else { continue };
                    checked += 1;
                    track(v, matches!(cmp, Cmp::Gt | Cmp::Ge));
                    if !cmp.holds(v, *value) {
                        failures += 1;
                    }
                }
                if let Cmp::Near { .. } = cmp {
                    worst = worst.map(|w| w - value);
                }
                if matches!(rule.check, Check::Single { .. }) && selected.len() != 1 {
                    failures += 1;
                }
            }
        }
        Check::Pair { left, cmp, right, slack } => {
            if let (Some(a), Some(b)) = (col(left), col(right)) {
                for r in &selected {
                    let (Some(x), Some(y)) = (r[a].as_f64(), r[b].as_f64()) else { continue };
                    checked += 1;
                    track((x - y).abs(), false);
                    if !cmp.holds(x, y + slack) {
                        failures += 1;
                    }
                }
            }
        }
        Check::Nondecreasing { column } => {
            if let Some(i) = col(column) {
                let values: Vec<f64> = selected.iter().filter_map(|r| r[i].as_f64()).collect();
                checked = values.len() as u64;
                for w in values.windows(2) {
                    track(w[1] - w[0], true);
                    if w[1] < w[0] {
                        failures += 1;
                    }
                }
            }
        }
        Check::Count { cmp, value } => {
            let n = selected.len() as f64;
            checked = selected.len() as u64;
            worst = Some(n);
            if !cmp.holds(n, *value) {
                failures += 1;
            }
            // counting zero rows can be the point of the rule
            if structural_ok {
                checked = checked.max(1);
            }
        }
    }
    let passed = structural_ok && checked > 0 && failures == 0;
    Verdict { name: rule.name.clone(), passed, checked, failures, worst, rule: rule.clone() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: String,
    pub config: serde_json::Value,
    pub columns: Vec<String>,
    /// Rows are sorted by their first `key_columns` cells.
    pub key_columns: usize,
    pub rows: Vec<Vec<Cell>>,
    pub summary: BTreeMap<String, Cell>,
    pub verdicts: Vec<Verdict>,
    pub all_pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<Chart>,
    /// Only present when timing was requested, so default reports stay
    /// byte-identical across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

impl RunReport {
    pub fn new(experiment: &str, config: serde_json::Value, columns: &[&str], key_columns: usize) -> Self {
        assert!(key_columns <= columns.len());
        Self {
            experiment: experiment.into(),
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            key_columns,
            rows: Vec::new(),
            summary: BTreeMap::new(),
            verdicts: Vec::new(),
            all_pass: false,
            chart: None,
            duration_ms: None,
        }
    }

    /// Appends a row given as `(column, value)` pairs; omitted columns are
    /// empty. Panics on unknown column names.
    pub fn push(&mut self, cells: Vec<(&str, Cell)>) {
        let mut row = vec![Cell::Empty; self.columns.len()];
        for (name, v) in cells {
            let i = self.column(name).unwrap_or_else(|| panic!("unknown column {name}"));
            row[i] = v;
        }
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of `column` over rows matching all `filter` pairs.
    pub fn values(&self, column: &str, filter: &[(&str, Cell)]) -> Vec<f64> {
        let Some(i) = self.column(column) else { return Vec::new() };
        self.select(filter).filter_map(|r| r[i].as_f64()).collect()
    }

    pub fn select<'a>(&'a self, filter: &'a [(&'a str, Cell)]) -> impl Iterator<Item = &'a Vec<Cell>> + 'a {
        let idx: Vec<(Option<usize>, &Cell)> = filter.iter().map(|(n, v)| (self.column(n), v)).collect();
        self.rows
            .iter()
            .filter(move |r| idx.iter().all(|(i, v)| i.is_some_and(|i| r[i] == **v)))
    }

    pub fn set_summary(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.insert(key.into(), value.into());
    }

    fn sort_rows(&mut self) {
        let k = self.key_columns;
        self.rows.sort_by(|a, b| {
            a[..k]
                .iter()
                .zip(&b[..k])
                .map(|(x, y)| x.key_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        });
    }

    /// Sorts rows by key and evaluates `rules` against them.
    pub fn finish(&mut self, rules: Vec<Rule>) {
        self.sort_rows();
        self.verdicts = rules.iter().map(|r| evaluate(r, &self.columns, &self.rows)).collect();
        self.all_pass = !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.passed);
        self.set_summary("rows", self.rows.len());
        self.set_summary("verdicts_failed", self.verdicts.iter().filter(|v| !v.passed).count());
    }

    /// Re-evaluates every stored rule from the stored rows.
    pub fn recheck(&self) -> Vec<Verdict> {
        self.verdicts.iter().map(|v| evaluate(&v.rule, &self.columns, &self.rows)).collect()
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("utf-8 cells"))
    }
}
