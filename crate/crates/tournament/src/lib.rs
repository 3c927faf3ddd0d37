//! Running matches at scale: single matches with replays, PvE evaluation
//! against built-in teams, PvP scheduling, and TrueSkill campaigns backed
//! by a checksummed filesystem store.

pub mod campaign;
pub mod matches;
pub mod pve;
pub mod schedule;
pub mod store;

pub use campaign::{run_campaign, run_campaign_until, Cadence, CampaignConfig, CampaignReport, RatingOrder};
pub use matches::{resimulate, run_match, MatchError, MatchRecord, MatchSpec, Slot};
pub use pve::{passes_gate, pve_eval, PveReport, Stage};
pub use schedule::{appearances, load_pool, pvp_schedule, Submission};
pub use store::{LeaderboardRow, Store, StoreError};
