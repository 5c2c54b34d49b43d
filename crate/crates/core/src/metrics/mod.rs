//! Traces, trace verification and trial statistics.

mod phase;
mod summary;
mod trace;
mod verify;

pub use phase::{lower_median, phase_ratio_report, PhaseRatioReport};
pub use summary::{summarize, write_summary_csv, OrderStats, SummaryRow, TrialSummary, SUMMARY_CSV_HEADER};
pub use trace::{NodeRecord, PhaseMarks, ProtocolTag, RoundRecord, RunStatus, Trace};
pub use verify::{verify_trace, Check, Violation};
