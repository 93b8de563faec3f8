//! Verification driver: check specifications, cusp-subset selection, the
//! check pipelines over both `K_2` backends, and report files.

mod cache;
mod checks;
mod report;
mod spec;

pub use cache::{write_atomic, Workspace, CACHE_ENV};
pub use checks::{run_check, run_checks, select_cusp_subset, surjectivity_rank};
pub use report::{emit_report, fingerprint, BackendOutcome, CheckResult, Item, Status, Timing, VerificationReport};
pub use spec::{default_suite, Backend, CheckKind, CheckSpec, CuspMode, DEFAULT_SEED, DEFAULT_TRIALS};
