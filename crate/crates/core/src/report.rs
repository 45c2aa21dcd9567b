//! Verification outcomes and their JSON report form.

use serde::Serialize;
use serde_json::{json, Value};

use crate::matrix::OperatorMatrix;
use crate::scalar::format_scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ExactPass,
    /// A floating-point check that met its stated tolerance.
    TolerancePass,
    Fail,
}

impl Status {
    pub fn passed(self) -> bool {
        self != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub operands: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl RelationCheck {
    pub fn pass(name: impl Into<String>, operands: Vec<String>) -> Self {
        RelationCheck { name: name.into(), operands, status: Status::ExactPass, witness: None }
    }

    pub fn fail(name: impl Into<String>, operands: Vec<String>, witness: impl Into<String>) -> Self {
        RelationCheck { name: name.into(), operands, status: Status::Fail, witness: Some(witness.into()) }
    }

    pub fn from_bool(name: impl Into<String>, operands: Vec<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(name, operands)
        } else {
            Self::fail(name, operands, witness())
        }
    }

    /// Exact pass iff `residual` is the zero matrix; otherwise the first nonzero entry is the witness.
    pub fn zero_residual(name: impl Into<String>, operands: Vec<String>, residual: &OperatorMatrix) -> Self {
        match residual.first_nonzero() {
            None => Self::pass(name, operands),
            Some((r, c, v)) => {
                let grid = residual.grid();
                let witness = format!(
                    "residual[{r}][{c}] = {} at x = {:?}, column x = {:?}",
                    format_scalar(&v),
                    grid.point(r).coords(),
                    grid.point(c).coords()
                );
                Self::fail(name, operands, witness)
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.status.passed()
    }
}

/// A suite's checks plus the configuration that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub config: Value,
    pub relations: Vec<RelationCheck>,
}

impl Report {
    pub fn new(config: Value) -> Self {
        Report { config, relations: Vec::new() }
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = RelationCheck>) {
        self.relations.extend(checks);
    }

    pub fn passed(&self) -> bool {
        self.relations.iter().all(RelationCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.relations.iter().filter(|r| !r.passed())
    }

    /// Stable JSON: relations sorted by name then operands, object keys sorted.
    pub fn to_json(&self) -> Value {
        let mut relations = self.relations.clone();
        relations.sort_by(|a, b| (&a.name, &a.operands).cmp(&(&b.name, &b.operands)));
        let count = |s: Status| relations.iter().filter(|r| r.status == s).count();
        json!({
            "config": self.config,
            "relations": relations,
            "summary": {
                "total": relations.len(),
                "exact_pass": count(Status::ExactPass),
                "tolerance_pass": count(Status::TolerancePass),
                "fail": count(Status::Fail),
                "passed": self.passed(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_sorted_and_summarized() {
        let mut report = Report::new(json!({"n": 3}));
        report.extend([
            RelationCheck::fail("b", vec!["C12".into()], "entry"),
            RelationCheck::pass("a", vec!["C23".into()]),
        ]);
        let doc = report.to_json();
        assert_eq!(doc["relations"][0]["name"], "a");
        assert_eq!(doc["relations"][0]["status"], "exact-pass");
        assert!(doc["relations"][0].get("witness").is_none());
        assert_eq!(doc["summary"]["fail"], 1);
        assert_eq!(doc["summary"]["passed"], false);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.find("\"config\"").unwrap() < text.find("\"relations\"").unwrap());
    }
}
