//! Replays, the conservation audit and the analytics built on them.

pub mod audit;
pub mod format;
pub mod stats;

pub use audit::{audit, AuditError, Ledger};
pub use format::{
    create_sink, parse_replay, read_bytes, read_replay, write_replay, Replay, ReplayError, ReplayFooter, ReplayHeader,
    ReplayWriter, TickRecord, FORMAT_VERSION,
};
pub use stats::{compute_stats, compute_stats_from_files, emit_csv, replay_files, StatsError, StatsReport, CSV_FILES};
