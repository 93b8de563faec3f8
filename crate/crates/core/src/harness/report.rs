use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::cache::write_atomic;
use super::spec::CheckSpec;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One tested element, with whatever certifies the outcome.
#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub label: String,
    pub pass: bool,
    pub certificate: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct BackendOutcome {
    pub backend: String,
    /// A report-only outcome never fails the check.
    pub binding: bool,
    pub status: Status,
    pub note: Option<String>,
    pub passed: usize,
    pub total: usize,
    pub items: Vec<Item>,
}

impl BackendOutcome {
    pub fn new(backend: &str, binding: bool, items: Vec<Item>) -> Self {
        let passed = items.iter().filter(|i| i.pass).count();
        BackendOutcome {
            backend: backend.to_string(),
            binding,
            status: Status::from_bool(passed == items.len()),
            note: None,
            passed,
            total: items.len(),
            items,
        }
    }

    pub fn skipped(backend: &str, note: &str) -> Self {
        BackendOutcome {
            backend: backend.to_string(),
            binding: false,
            status: Status::Skipped,
            note: Some(note.to_string()),
            passed: 0,
            total: 0,
            items: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub spec: CheckSpec,
    pub statement: String,
    pub status: Status,
    pub error: Option<String>,
    pub outcomes: Vec<BackendOutcome>,
}

impl CheckResult {
    pub fn from_outcomes(spec: CheckSpec, outcomes: Vec<BackendOutcome>) -> Self {
        let binding: Vec<&BackendOutcome> = outcomes.iter().filter(|o| o.binding).collect();
        let status = if binding.is_empty() {
            Status::Skipped
        } else {
            Status::from_bool(binding.iter().all(|o| o.status == Status::Pass))
        };
        CheckResult { statement: spec.kind.statement().to_string(), spec, status, error: None, outcomes }
    }

    pub fn from_error(spec: CheckSpec, err: String) -> Self {
        CheckResult {
            statement: spec.kind.statement().to_string(),
            spec,
            status: Status::Fail,
            error: Some(err),
            outcomes: Vec::new(),
        }
    }
}

/// Time spent per check, kept apart from the deterministic body.
#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub check: usize,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub fingerprint: String,
    pub version: String,
    pub parallel: bool,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
    pub timings: Vec<Timing>,
    pub created_unix: u64,
}

impl VerificationReport {
    pub fn new(checks: Vec<CheckResult>, timings: Vec<Timing>) -> Self {
        let specs: Vec<&CheckSpec> = checks.iter().map(|c| &c.spec).collect();
        VerificationReport {
            fingerprint: fingerprint(&specs),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parallel: crate::par::parallel_enabled(),
            pass: checks.iter().all(|c| c.status != Status::Fail),
            checks,
            timings,
            created_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    /// The part of the report that depends only on the configuration.
    pub fn body(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&serde_json::json!({
            "fingerprint": self.fingerprint,
            "version": self.version,
            "pass": self.pass,
            "checks": self.checks,
        }))?)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "k2modsym verification report {}", self.version);
        let _ = writeln!(out, "fingerprint {}", self.fingerprint);
        let _ = writeln!(out, "overall: {}", if self.pass { "PASS" } else { "FAIL" });
        for (i, c) in self.checks.iter().enumerate() {
            let s = &c.spec;
            let mut params = format!("M={}", s.level);
            if let Some(p) = s.p {
                let _ = write!(params, " p={p}");
            }
            if let Some(l) = s.ell {
                let _ = write!(params, " l={l}");
            }
            let _ = writeln!(out, "\n[{}] {} {} : {:?}", i + 1, s.kind, params, c.status);
            let _ = writeln!(out, "    {}", c.statement);
            if let Some(e) = &c.error {
                let _ = writeln!(out, "    error: {e}");
            }
            for o in &c.outcomes {
                let _ = write!(
                    out,
                    "    {:<10} {:?} {}/{}{}",
                    o.backend,
                    o.status,
                    o.passed,
                    o.total,
                    if o.binding { "" } else { " (report only)" }
                );
                if let Some(n) = &o.note {
                    let _ = write!(out, " - {n}");
                }
                out.push('\n');
            }
        }
        out
    }
}

/// SHA-256 over the crate version, the parallel flag and the check specs.
pub fn fingerprint(specs: &[&CheckSpec]) -> String {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.update(if cfg!(feature = "parallel") { b"par" } else { b"seq" });
    h.update(serde_json::to_vec(specs).unwrap_or_default());
    hex::encode(h.finalize())
}

/// Writes `report.json` and `summary.txt` into `dir`.
pub fn emit_report(report: &VerificationReport, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let json = dir.join("report.json");
    let txt = dir.join("summary.txt");
    write_atomic(&json, &serde_json::to_string_pretty(report)?)?;
    write_atomic(&txt, &report.summary())?;
    Ok((json, txt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid() {
        let r = VerificationReport::new(Vec::new(), Vec::new());
        assert!(r.pass);
        let dir = tempfile::tempdir().unwrap();
        let (json, _) = emit_report(&r, dir.path()).unwrap();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
        assert_eq!(v["checks"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn report_only_outcomes_do_not_fail() {
        use super::super::spec::{CheckKind, CheckSpec};
        let spec = CheckSpec::new(CheckKind::Atkin, 11);
        let bad = Item { label: "x".into(), pass: false, certificate: Value::Null };
        let good = Item { label: "y".into(), pass: true, certificate: Value::Null };
        let r = CheckResult::from_outcomes(
            spec.clone(),
            vec![BackendOutcome::new("tame", true, vec![good.clone()]), BackendOutcome::new("presented", false, vec![bad.clone()])],
        );
        assert_eq!(r.status, Status::Pass);
        let r = CheckResult::from_outcomes(spec, vec![BackendOutcome::new("tame", true, vec![bad])]);
        assert_eq!(r.status, Status::Fail);
    }
}
