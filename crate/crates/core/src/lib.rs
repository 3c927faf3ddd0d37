//! A sixteen-team survival arena: map generation, the tick engine, combat,
//! the market, match scoring, TrueSkill ratings, scripted teams and replays.
//!
//! ```no_run
//! use arena_core::{config::GameConfig, policies::{Policy, Scripted, Style}, sim};
//!
//! let cfg = GameConfig::default();
//! let (mut world, mut obs) = sim::reset(7, &cfg).unwrap();
//! let mut teams: Vec<Scripted> = (0..16).map(|_| Scripted::new(Style::Combat)).collect();
//! while !world.done {
//!     let actions: Vec<_> = teams.iter_mut().zip(&obs).map(|(p, o)| p.act(o)).collect();
//!     world.step(&actions);
//!     obs = world.observe_all();
//! }
//! println!("{:?}", arena_core::scoring::match_score(&world));
//! ```

pub mod combat;
pub mod config;
pub mod economy;
pub mod geom;
pub mod policies;
pub mod rating;
pub mod replay;
pub mod scalar;
pub mod scoring;
pub mod sim;
pub mod worldgen;

pub use config::{GameConfig, SimConfig};
pub use scalar::{Exact, Scalar};
pub use scoring::{MatchScore, TeamOutcome};
pub use sim::WorldState;

/// Ratings in double precision.
pub type Rating = rating::Rating<f64>;
/// TrueSkill parameters in double precision.
pub type TrueSkillParams = rating::TrueSkillParams<f64>;
/// Ratings in single precision.
pub type Rating32 = rating::Rating<f32>;
