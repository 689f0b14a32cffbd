//! Report types shared by the pipelines and their JSON / text renderings.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graded::{ExactSequence, NodeExactness};
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// An exact sequence with its maps on cohomology and per-node exactness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub name: String,
    pub nodes: Vec<NodeExactness>,
    /// `maps[i]: nodes[i] → nodes[i + 1]` in the cohomology bases.
    pub maps: Vec<SparseMatrix>,
    pub exact: bool,
}

impl SequenceReport {
    pub fn new(name: &str, seq: &ExactSequence) -> Result<Self> {
        let nodes = seq.verify()?;
        let exact = nodes.iter().all(|n| n.exact);
        Ok(SequenceReport { name: name.to_string(), nodes, maps: seq.maps.clone(), exact })
    }

    /// Recomputes exactness from the witness maps alone.
    pub fn recheck(&self) -> Result<bool> {
        let seq = ExactSequence {
            nodes: self.nodes.iter().map(|n| (n.node.clone(), n.dim)).collect(),
            maps: self.maps.clone(),
        };
        let again = seq.verify()?;
        Ok(again == self.nodes && again.iter().all(|n| n.exact) == self.exact)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("  {} ({})", self.name, if self.exact { "exact" } else { "NOT exact" })];
        for n in &self.nodes {
            out.push(format!(
                "    {:<28} dim {:>2}  rank in {:>2}  ker out {:>2}{}",
                n.node,
                n.dim,
                n.rank_in,
                n.kernel_out,
                if n.exact { "" } else { "  <-- not exact" }
            ));
        }
        out
    }
}

/// Outcome of one scenario check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub index: usize,
    pub check: String,
    pub subject: String,
    pub verdict: Verdict,
    pub result: serde_json::Value,
    #[serde(skip)]
    pub text: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub schema: u32,
    pub scenario: String,
    pub window: i64,
    pub verdict: Verdict,
    pub checks: Vec<CheckOutcome>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("scenario {} (window {})\n", self.scenario, self.window);
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] #{} {} {}\n",
                if c.verdict.passed() { "PASS" } else { "FAIL" },
                c.index,
                c.check,
                c.subject
            ));
            for l in &c.text {
                out.push_str(l);
                out.push('\n');
            }
        }
        out.push_str(&format!("verdict: {}\n", if self.passed() { "pass" } else { "fail" }));
        out
    }
}

pub(crate) fn dims_line(label: &str, dims: &[usize]) -> String {
    let parts: Vec<String> = dims.iter().enumerate().map(|(i, d)| format!("h{i}={d}")).collect();
    format!("  {label:<24} {}", parts.join(" "))
}
