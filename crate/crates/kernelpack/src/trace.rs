//! Audit log shared by every kernelizer.
//!
//! Each reduction rule application is recorded with a stable rule id, a
//! payload describing the evidence (the sunflower, the deleted edge, the
//! certified vertex, …) and instance sizes before and after. Kernels end in
//! a verdict: still open, or decided early by a certificate.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Vertex and edge counts at one point of a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeSnapshot {
    pub vertices: usize,
    pub edges: usize,
}

impl SizeSnapshot {
    pub fn new(vertices: usize, edges: usize) -> Self {
        Self { vertices, edges }
    }
}

/// One applied rule with its justification payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub rule: String,
    pub payload: Value,
    pub before: SizeSnapshot,
    pub after: SizeSnapshot,
}

/// Outcome of a kernelization run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The kernel must still be solved.
    Open,
    /// A witness was found; the instance is a YES instance.
    Yes,
    /// The instance was proven to be a NO instance.
    No,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelTrace {
    pub entries: Vec<TraceEntry>,
    pub verdict: Verdict,
    /// Abnormal-but-sound conditions, e.g. a stalled degree reduction.
    pub flags: Vec<String>,
}

impl Default for KernelTrace {
    fn default() -> Self {
        Self::new()
    }
}

impl KernelTrace {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
            verdict: Verdict::Open,
            flags: Vec::new(),
        }
    }

    pub fn record(
        &mut self,
        rule: &str,
        payload: Value,
        before: SizeSnapshot,
        after: SizeSnapshot,
    ) {
        self.entries.push(TraceEntry {
            rule: rule.to_string(),
            payload,
            before,
            after,
        });
    }

    pub fn flag(&mut self, name: &str) {
        if !self.flags.iter().any(|f| f == name) {
            self.flags.push(name.to_string());
        }
    }

    pub fn has_flag(&self, name: &str) -> bool {
        self.flags.iter().any(|f| f == name)
    }

    /// One JSON object per line: every entry, then a closing line with the
    /// verdict and flags.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for entry in &self.entries {
            out.push_str(&serde_json::to_string(entry).expect("trace entries serialize"));
            out.push('\n');
        }
        let tail = json!({ "verdict": self.verdict, "flags": self.flags });
        out.push_str(&serde_json::to_string(&tail).expect("verdict serializes"));
        out.push('\n');
        out
    }
}

/// A kernelized instance plus the book-keeping to interpret it: a map from
/// output vertex ids back to input ids and the full reduction trace.
#[derive(Debug, Clone)]
pub struct KernelOutput<G> {
    pub graph: G,
    /// `vertex_map[new_id] = old_id`; identity when no vertex was dropped.
    pub vertex_map: Vec<usize>,
    pub trace: KernelTrace,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_lines_has_one_object_per_line_plus_verdict() {
        let mut trace = KernelTrace::new();
        trace.record(
            "delete-petal",
            json!({ "edge": [0, 1, 2] }),
            SizeSnapshot::new(5, 9),
            SizeSnapshot::new(5, 8),
        );
        trace.verdict = Verdict::Yes;
        trace.flag("demo");
        trace.flag("demo");
        assert_eq!(trace.flags.len(), 1);

        let text = trace.to_json_lines();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let entry: Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(entry["rule"], "delete-petal");
        assert_eq!(entry["before"]["edges"], 9);
        let tail: Value = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(tail["verdict"], "yes");
    }
}
