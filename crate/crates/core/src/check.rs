use serde::{Deserialize, Serialize};
use std::fmt;
use symexpr::Expr;

use crate::chart::Chart;
use crate::tensor::{multi_indices, TensorField};

/// Number of seeded probe points used for numeric residuals.
pub const PROBE_POINTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inapplicable => "inapplicable",
        })
    }
}

/// One named check with its symbolic verdict and the largest numeric residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub id: String,
    pub status: Status,
    pub symbolic_zero: bool,
    pub numeric_max: Option<f64>,
    pub details: String,
}

impl CheckEntry {
    pub fn new(id: impl Into<String>, status: Status, details: impl Into<String>) -> CheckEntry {
        CheckEntry {
            id: id.into(),
            status,
            symbolic_zero: status == Status::Pass,
            numeric_max: None,
            details: details.into(),
        }
    }

    pub fn inapplicable(id: impl Into<String>, reason: impl Into<String>) -> CheckEntry {
        CheckEntry {
            symbolic_zero: false,
            ..CheckEntry::new(id, Status::Inapplicable, reason)
        }
    }

    /// A computed value reported for reference; always passes.
    pub fn info(id: impl Into<String>, details: impl Into<String>) -> CheckEntry {
        CheckEntry::new(id, Status::Pass, details)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_details(mut self, details: impl Into<String>) -> CheckEntry {
        self.details = details.into();
        self
    }
}

/// Ordered list of check entries.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    entries: Vec<CheckEntry>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn entries(&self) -> &[CheckEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn status(&self, id: &str) -> Option<Status> {
        self.get(id).map(|e| e.status)
    }

    /// True when no entry failed; inapplicable entries do not count as failures.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn into_entries(self) -> Vec<CheckEntry> {
        self.entries
    }
}

/// Compares tensors symbolically and at seeded sample points.
#[derive(Debug, Clone)]
pub struct Probe {
    names: Vec<String>,
    points: Vec<Vec<f64>>,
}

impl Probe {
    pub fn new(chart: &Chart, seed: u64) -> Probe {
        Probe {
            names: chart.coords().to_vec(),
            points: chart.probe_points(seed, PROBE_POINTS),
        }
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn show(&self, e: &Expr) -> String {
        e.display(&self.names).to_string()
    }

    /// Checks `lhs == rhs` componentwise.
    pub fn identity(&self, id: &str, lhs: &TensorField, rhs: &TensorField) -> CheckEntry {
        let residual = lhs
            .try_sub(rhs)
            .unwrap_or_else(|e| panic!("check {id}: operands have different shapes: {e}"));
        let zero = residual.is_zero();
        let numeric_max = self.numeric_max(id, lhs, rhs, zero);
        let details = if zero {
            "residual vanishes identically".to_string()
        } else {
            self.witness(&residual)
        };
        CheckEntry {
            id: id.to_string(),
            status: if zero { Status::Pass } else { Status::Fail },
            symbolic_zero: zero,
            numeric_max,
            details,
        }
    }

    pub fn scalar_identity(&self, id: &str, lhs: &Expr, rhs: &Expr) -> CheckEntry {
        let n = self.names.len();
        self.identity(id, &TensorField::scalar(lhs.clone(), n), &TensorField::scalar(rhs.clone(), n))
    }

    /// Theorem-instance check: passes unless the hypothesis holds and the
    /// conclusion `lhs == rhs` fails.
    pub fn implication(&self, id: &str, hypothesis: bool, lhs: &TensorField, rhs: &TensorField) -> CheckEntry {
        let mut entry = self.identity(id, lhs, rhs);
        let conclusion = entry.symbolic_zero;
        entry.status = if !hypothesis || conclusion {
            Status::Pass
        } else {
            Status::Fail
        };
        entry.details = format!(
            "hypothesis_met={hypothesis}; conclusion_holds={conclusion}; {}",
            entry.details
        );
        entry
    }

    /// Describes the first nonzero component of a residual.
    pub fn witness(&self, residual: &TensorField) -> String {
        match residual.first_nonzero() {
            Some((idx, value)) if idx.is_empty() => format!("residual = {}", self.show(value)),
            Some((idx, value)) => {
                let slots: Vec<&str> = idx.iter().map(|&i| self.names[i].as_str()).collect();
                format!("residual[{}] = {}", slots.join(","), self.show(value))
            }
            None => "residual vanishes identically".into(),
        }
    }

    fn numeric_max(&self, id: &str, lhs: &TensorField, rhs: &TensorField, zero: bool) -> Option<f64> {
        let mut worst: Option<f64> = None;
        for p in &self.points {
            let (Ok(l), Ok(r)) = (lhs.eval(p), rhs.eval(p)) else {
                continue;
            };
            for ((a, b), idx) in l.iter().zip(&r).zip(multi_indices(lhs.rank(), lhs.dim())) {
                let d = (a - b).abs();
                if zero {
                    assert!(
                        d <= 1e-9 * (1.0 + a.abs()),
                        "check {id}: symbolic residual is zero but component {idx:?} differs by {d:e} at {p:?}"
                    );
                }
                worst = Some(worst.map_or(d, |w: f64| w.max(d)));
            }
        }
        worst.map(round_sig)
    }
}

/// Rounds to four significant digits so reports are stable across platforms.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.3e}").parse().unwrap_or(x)
}
